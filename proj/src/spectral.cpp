#include "sprd/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace sprd {
namespace {

// The FFTW planner is not thread safe; execution of an existing plan on new
// arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  PlanPair() = default;
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

using GridKey = std::pair<int, int>;

const PlanPair& plans_for(const Grid& grid) {
  thread_local std::map<GridKey, std::unique_ptr<PlanPair>> cache;
  auto& slot = cache[{grid.dim, grid.n}];
  if (slot) return *slot;

  slot = std::make_unique<PlanPair>();
  std::array<int, kMaxDim> dims{};
  for (int j = 0; j < grid.dim; ++j) dims[j] = grid.n;
  std::vector<double> real(grid.cells());
  std::vector<Complex> spec(spectral_size(grid));
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  std::lock_guard lock(planner_mutex());
  slot->r2c = fftw_plan_dft_r2c(grid.dim, dims.data(), real.data(), c, flags);
  slot->c2r = fftw_plan_dft_c2r(grid.dim, dims.data(), c, real.data(),
                                flags | FFTW_DESTROY_INPUT);
  return *slot;
}

struct GridTables {
  std::vector<std::array<int, kMaxDim>> k;
  std::vector<double> weights;
  std::vector<double> mask;
};

const GridTables& tables_for(const Grid& grid) {
  static std::mutex m;
  static std::map<GridKey, std::unique_ptr<GridTables>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[{grid.dim, grid.n}];
  if (slot) return *slot;

  slot = std::make_unique<GridTables>();
  const int n = grid.n;
  const int half = n / 2 + 1;
  const std::size_t size = spectral_size(grid);
  slot->k.resize(size);
  slot->weights.resize(size);
  slot->mask.resize(size);
  for (std::size_t idx = 0; idx < size; ++idx) {
    std::array<int, kMaxDim> k{};
    std::size_t rest = idx;
    const int last = static_cast<int>(rest % half);
    rest /= half;
    k[grid.dim - 1] = last;
    for (int j = grid.dim - 2; j >= 0; --j) {
      const int i = static_cast<int>(rest % n);
      rest /= n;
      k[j] = i < n / 2 ? i : i - n;
    }
    slot->k[idx] = k;
    slot->weights[idx] = (last == 0 || last == n / 2) ? 1.0 : 2.0;
    bool keep = true;
    for (int j = 0; j < grid.dim; ++j) keep = keep && 3 * std::abs(k[j]) < n;
    slot->mask[idx] = keep ? 1.0 : 0.0;
  }
  return *slot;
}

}  // namespace

std::size_t spectral_size(const Grid& grid) {
  std::size_t s = static_cast<std::size_t>(grid.n / 2 + 1);
  for (int j = 0; j + 1 < grid.dim; ++j) s *= static_cast<std::size_t>(grid.n);
  return s;
}

const std::vector<std::array<int, kMaxDim>>& wavevectors(const Grid& grid) {
  return tables_for(grid).k;
}

const std::vector<double>& hermitian_weights(const Grid& grid) {
  return tables_for(grid).weights;
}

const std::vector<double>& dealias_mask(const Grid& grid) {
  return tables_for(grid).mask;
}

void forward(const Field& u, SpectralField& out) {
  const Grid& grid = u.grid();
  out.grid = grid;
  out.coeffs.resize(spectral_size(grid));
  // r2c does not modify its input.
  auto* in = const_cast<double*>(u.values().data());
  fftw_execute_dft_r2c(plans_for(grid).r2c, in,
                       reinterpret_cast<fftw_complex*>(out.coeffs.data()));
}

SpectralField forward(const Field& u) {
  SpectralField s;
  forward(u, s);
  return s;
}

void inverse(const SpectralField& s, Field& out) {
  const Grid& grid = s.grid;
  if (out.grid() != grid || out.size() != grid.cells()) out = Field(grid);
  // c2r destroys its input.
  thread_local std::vector<Complex> scratch;
  scratch.assign(s.coeffs.begin(), s.coeffs.end());
  fftw_execute_dft_c2r(plans_for(grid).c2r,
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.values().data());
  const double scale = 1.0 / static_cast<double>(grid.cells());
  for (double& v : out.values()) v *= scale;
}

Field inverse(const SpectralField& s) {
  Field f(s.grid);
  inverse(s, f);
  return f;
}

void differentiate(const SpectralField& in, int axis, SpectralField& out) {
  const Grid& grid = in.grid;
  require(axis >= 0 && axis < grid.dim, "differentiate: axis out of range");
  const auto& ks = wavevectors(grid);
  out.grid = grid;
  out.coeffs.resize(in.coeffs.size());
  const double two_pi = 2.0 * std::numbers::pi;
  const int nyquist = grid.n / 2;
  for (std::size_t idx = 0; idx < in.coeffs.size(); ++idx) {
    const int k = ks[idx][axis];
    if (std::abs(k) == nyquist) {
      out.coeffs[idx] = 0.0;
    } else {
      out.coeffs[idx] = Complex(0.0, two_pi * k) * in.coeffs[idx];
    }
  }
}

}  // namespace sprd
