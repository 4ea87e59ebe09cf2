#include <cmath>
#include <random>

#include "sprd/noise.hpp"

namespace sprd {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

BrownianDriver::BrownianDriver(std::size_t n_modes, std::uint64_t seed,
                               std::uint64_t stream_id)
    : n_modes_(n_modes), seed_(seed), stream_id_(stream_id) {}

void BrownianDriver::standard_normals(std::uint64_t step,
                                      std::span<double> out) const {
  const std::uint64_t a = splitmix64(seed_);
  const std::uint64_t b = splitmix64(a ^ splitmix64(stream_id_ + 0x632be59bd9b4e019ULL));
  const std::uint64_t c = splitmix64(b ^ step);
  std::seed_seq seq{static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& z : out) z = normal(rng);
}

void BrownianDriver::sample_increments(std::uint64_t step, double dt,
                                       std::span<double> out) const {
  require(dt > 0.0, "Brownian increments need dt > 0");
  require(out.size() == n_modes_, "increment buffer size != mode count");
  standard_normals(step, out);
  const double s = std::sqrt(dt);
  for (double& z : out) z *= s;
}

std::vector<double> BrownianDriver::sample_increments(std::uint64_t step,
                                                      double dt) const {
  std::vector<double> out(n_modes_);
  sample_increments(step, dt, out);
  return out;
}

}  // namespace sprd
