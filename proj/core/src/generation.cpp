#include "rbso/generation.hpp"

#include <cmath>
#include <stdexcept>

namespace rbso {

void validate(const GenerationParams& params) {
  if (!(params.p_one >= 0.0 && params.p_one <= 1.0)) throw std::invalid_argument("generation: p_one must be in [0, 1]");
  if (!(params.p_center >= 0.0 && params.p_center <= 1.0)) {
    throw std::invalid_argument("generation: p_center must be in [0, 1]");
  }
  if (!(params.noise_base > 0.0)) throw std::invalid_argument("generation: noise_base must be positive");
  if (params.noise_horizon < 1) throw std::invalid_argument("generation: noise horizon must be at least 1");
}

double noise_envelope(std::int64_t t, std::int64_t horizon) {
  const double h = static_cast<double>(horizon);
  const double k = h / 20.0;
  const double x = (0.5 * h - static_cast<double>(std::clamp<std::int64_t>(t, 0, horizon))) / k;
  return 1.0 / (1.0 + std::exp(-x));
}

double noise_scale(std::int64_t t, const GenerationParams& params, Rng& rng) {
  return params.noise_base * noise_envelope(t, params.noise_horizon) * rng.uniform();
}

namespace {

std::size_t pick_non_center(const Group& group, std::size_t center, Rng& rng) {
  if (group.size() == 1) return center;
  std::size_t k = rng.index(group.size() - 1);
  // Skip over the center's slot.
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (group[i] == center) continue;
    if (k == 0) return group[i];
    --k;
  }
  return center;
}

}  // namespace

GeneratedPositions generate_positions(const GroupingResult& grouping, std::span<const PersonalBest> pbests,
                                      const GenerationParams& params, std::int64_t t, const EnvironmentSpec& env,
                                      Rng& rng) {
  const auto& groups = grouping.groups;
  if (groups.empty() || groups.size() != grouping.centers.size()) {
    throw std::invalid_argument("generate_positions: grouping has no groups or mismatched centers");
  }
  GeneratedPositions out;
  out.positions.reserve(pbests.size());
  out.branches.reserve(pbests.size());
  for (std::size_t slot = 0; slot < pbests.size(); ++slot) {
    GenerationBranch branch;
    branch.one_group = groups.size() < 2 || rng.bernoulli(params.p_one);
    Vec2 base;
    if (branch.one_group) {
      const std::size_t g = rng.index(groups.size());
      branch.from_center = rng.bernoulli(params.p_center);
      const std::size_t member =
          branch.from_center ? grouping.centers[g] : pick_non_center(groups[g], grouping.centers[g], rng);
      base = pbests[member].position;
    } else {
      const std::size_t g1 = rng.index(groups.size());
      std::size_t g2 = rng.index(groups.size() - 1);
      if (g2 >= g1) ++g2;
      branch.from_center = rng.bernoulli(params.p_center);
      const std::size_t m1 =
          branch.from_center ? grouping.centers[g1] : pick_non_center(groups[g1], grouping.centers[g1], rng);
      const std::size_t m2 =
          branch.from_center ? grouping.centers[g2] : pick_non_center(groups[g2], grouping.centers[g2], rng);
      const double r = rng.uniform();
      base = pbests[m1].position * r + pbests[m2].position * (1.0 - r);
    }
    const double sigma = noise_scale(t, params, rng);
    const double nx = rng.normal();
    const double ny = rng.normal();
    out.positions.push_back(env.clamp({base.x + sigma * nx, base.y + sigma * ny}));
    out.branches.push_back(branch);
  }
  return out;
}

PersonalBest update_pbest(const PersonalBest& incumbent, Vec2 visited, const SignalReading& reading) {
  if (reading.value > incumbent.fitness) return {visited, reading.value};
  return incumbent;
}

}  // namespace rbso
