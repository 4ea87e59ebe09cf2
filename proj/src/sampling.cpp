#include "sprd/sampling.hpp"

#include <cmath>
#include <random>

#include "sprd/error.hpp"

namespace sprd {
namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

std::vector<double> halton_points(std::size_t count, int dim, std::uint64_t seed) {
  require(dim >= 1 && dim <= static_cast<int>(std::size(kPrimes)),
          "halton_points: unsupported dimension");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> shift(dim);
  for (double& s : shift) s = u(rng);
  std::vector<double> pts(count * dim);
  for (std::size_t i = 0; i < count; ++i) {
    for (int j = 0; j < dim; ++j) {
      double v = radical_inverse(i + 1, kPrimes[j]) + shift[j];
      pts[i * dim + j] = v - std::floor(v);
    }
  }
  return pts;
}

}  // namespace sprd
