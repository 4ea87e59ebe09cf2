#include "sprd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sprd/spectral.hpp"

namespace sprd {

void SolverConfig::validate() const {
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
  require(t_end > 0.0 && dt <= t_end * (1.0 + 1e-12), "need 0 < dt <= t_end");
  require(blowup_threshold > 0.0, "blowup_threshold must be positive");
  require(record_every >= 1, "record_every must be >= 1");
  require(snapshot_every >= 0, "snapshot_every must be >= 0");
  require(zeta >= 2.0, "zeta must be >= 2");
  require(substeps >= 1, "substeps must be >= 1");
  require(positivity_tol >= 0.0, "positivity_tol must be >= 0");
}

Stepper::Stepper(const ReactionModel& model, const TransportNoise& noise,
                 const DiffusionTensor& a, const SolverConfig& cfg)
    : model_(model), noise_(noise), cfg_(cfg), grid_(noise.grid) {
  cfg_.validate();
  const int d = grid_.dim;
  const int ell = model.ell();
  a.validate(d);
  require(a.ell() == 1 || static_cast<int>(a.ell()) == ell,
          "diffusion tensor needs one matrix per component (or a single shared one)");
  n_incr_ = std::max(noise.n_modes(), model.g_mode_count());

  const bool add_corr = cfg_.scheme == Scheme::SemiImplicitEM && cfg_.stratonovich_correction &&
                        noise.n_modes() > 0;
  const auto& kv = wavevectors(grid_);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  inv_denominator_.resize(ell);
  correction_fluct_.resize(ell);
  for (int i = 0; i < ell; ++i) {
    Eigen::MatrixXd A = a.a[std::min<std::size_t>(i, a.ell() - 1)];
    if (add_corr) {
      const TensorField c = stratonovich_correction(noise, i);
      std::vector<Field> fluct;
      double spread = 0.0, size = 0.0;
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
          const Field& e = c.at(j, k);
          const double m = mean(e);
          A(j, k) += m;
          Field f = e;
          for (std::size_t p = 0; p < f.size(); ++p) f[p] -= m;
          spread = std::max(spread, f.max_abs());
          size = std::max(size, std::abs(m));
          fluct.push_back(std::move(f));
        }
      }
      if (spread > 1e-13 * (1.0 + size)) correction_fluct_[i] = std::move(fluct);
    }
    auto& inv = inv_denominator_[i];
    inv.resize(kv.size());
    for (std::size_t s = 0; s < kv.size(); ++s) {
      double q = 0.0;
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) q += kv[s][j] * A(j, k) * kv[s][k];
      inv[s] = 1.0 / (1.0 + cfg_.dt * two_pi * two_pi * q);
    }
  }
}

void Stepper::increments(const BrownianDriver& driver, std::uint64_t m,
                         std::span<double> out) const {
  if (n_incr_ == 0) return;
  require(driver.n_modes() >= n_incr_, "Brownian driver has too few modes for this model and noise");
  require(out.size() >= n_incr_, "increment buffer too small");
  std::vector<double> buf(driver.n_modes());
  std::fill(out.begin(), out.begin() + n_incr_, 0.0);
  const std::uint64_t s = static_cast<std::uint64_t>(cfg_.substeps);
  for (std::uint64_t j = 0; j < s; ++j) {
    driver.sample_increments(m * s + j, cfg_.dt / static_cast<double>(s), buf);
    for (std::size_t n = 0; n < n_incr_; ++n) out[n] += buf[n];
  }
}

SystemState Stepper::step(const SystemState& state, std::span<const double> incr) const {
  state.validate();
  const int ell = model_.ell();
  require(static_cast<int>(state.ell()) == ell, "state has the wrong number of components");
  require(state.grid() == grid_, "state grid differs from the noise grid", ErrorCode::GridMismatch);
  require(incr.size() >= n_incr_, "too few Brownian increments for this step");
  for (const auto& u : state.components)
    require(u.all_finite(), "non-finite state", ErrorCode::NonFinite);

  const double dt = cfg_.dt;
  const int d = grid_.dim;
  const std::size_t cells = grid_.cells();
  const std::size_t ng = model_.g_mode_count();

  // Pointwise reaction, multiplicative noise and flux.
  std::vector<Field> expl(ell, Field(grid_));
  std::vector<std::vector<Field>> flux;
  if (model_.has_flux()) flux.assign(ell, std::vector<Field>(d, Field(grid_)));
  std::vector<double> y(ell), f(ell), g(ng * ell), F(ell * d);
  for (std::size_t p = 0; p < cells; ++p) {
    for (int i = 0; i < ell; ++i) y[i] = state.components[i][p];
    model_.eval_f(y, f);
    if (ng > 0) model_.eval_g_modes(y, g);
    for (int i = 0; i < ell; ++i) {
      double v = dt * f[i];
      for (std::size_t n = 0; n < ng; ++n) v += g[n * ell + i] * incr[n];
      expl[i][p] = v;
    }
    if (!flux.empty()) {
      model_.eval_flux(y, d, F);
      for (int i = 0; i < ell; ++i)
        for (int j = 0; j < d; ++j) flux[i][j][p] = F[i * d + j];
    }
  }

  SystemState out;
  out.time = state.time + dt;
  out.components.reserve(ell);
  const bool transport = noise_.n_modes() > 0;
  const auto& mask = dealias_mask(grid_);
  SpectralField uh, dh, nh;
  for (int i = 0; i < ell; ++i) {
    const Field& u = state.components[i];
    Field& N = expl[i];
    forward(u, uh);
    const bool need_grad = transport || !correction_fluct_[i].empty();
    VectorField grad;
    if (need_grad) {
      for (int j = 0; j < d; ++j) {
        differentiate(uh, j, dh);
        grad.push_back(inverse(dh));
      }
    }
    if (transport) {
      const std::span<const double> w = incr.first(noise_.n_modes());
      if (cfg_.scheme == Scheme::SemiImplicitEM) {
        accumulate_transport(noise_, grad, w, i, N);
      } else {
        // Transport evaluated at the midpoint of u and the noise-only
        // predictor u + T u, i.e. T u + T(T u) / 2.
        Field t1(grid_);
        accumulate_transport(noise_, grad, w, i, t1);
        Field t2(grid_);
        accumulate_transport(noise_, gradient(t1), w, i, t2);
        for (std::size_t p = 0; p < cells; ++p) N[p] += t1[p] + 0.5 * t2[p];
      }
    }
    if (!correction_fluct_[i].empty()) {
      VectorField v(d, Field(grid_));
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          const Field& c = correction_fluct_[i][j * d + k];
          for (std::size_t p = 0; p < cells; ++p) v[j][p] += c[p] * grad[k][p];
        }
      N += dt * divergence(v);
    }
    if (!flux.empty()) N += dt * divergence(flux[i]);

    forward(N, nh);
    const auto& inv = inv_denominator_[i];
    for (std::size_t s = 0; s < uh.coeffs.size(); ++s) {
      const Complex nl = cfg_.dealias ? nh.coeffs[s] * mask[s] : nh.coeffs[s];
      uh.coeffs[s] = (uh.coeffs[s] + nl) * inv[s];
    }
    out.components.push_back(inverse(uh));
  }
  return out;
}

SystemState step(const SystemState& state, const ReactionModel& model,
                 const TransportNoise& noise, const DiffusionTensor& a,
                 const BrownianDriver& driver, const SolverConfig& cfg, std::uint64_t m) {
  Stepper stepper(model, noise, a, cfg);
  std::vector<double> incr(stepper.increments_needed());
  stepper.increments(driver, m, incr);
  return stepper.step(state, incr);
}

namespace {

void record(Trajectory& traj, const SystemState& state, const SolverConfig& cfg) {
  const EnergyRecord* prev = traj.diagnostics.empty() ? nullptr : &traj.diagnostics.back();
  const double dt = prev ? state.time - prev->time : 0.0;
  traj.diagnostics.push_back(record_energies(state, cfg.zeta, prev, dt));
  traj.times.push_back(state.time);
  const std::size_t ell = state.ell();
  double sup = 1.0;
  for (const auto& u : state.components) sup = std::max(sup, u.max_abs());
  const double tol = cfg.positivity_tol * sup;
  for (std::size_t i = 0; i < ell; ++i) {
    const Field& u = state.components[i];
    std::size_t bad = 0;
    for (std::size_t p = 0; p < u.size(); ++p)
      if (u[p] < -tol) ++bad;
    traj.positivity_samples[i] += u.size();
    traj.positivity_violations[i] += bad;
    traj.min_value_per_component[i] = std::min(traj.min_value_per_component[i], u.min());
  }
  if (cfg.snapshot_every > 0 && (traj.times.size() - 1) % cfg.snapshot_every == 0)
    traj.snapshots.push_back(state);
}

}  // namespace

Trajectory simulate(const SystemState& u0, const ReactionModel& model,
                    const TransportNoise& noise, const DiffusionTensor& a,
                    const BrownianDriver& driver, const SolverConfig& cfg) {
  Stepper stepper(model, noise, a, cfg);
  u0.validate();
  const std::size_t ell = u0.ell();
  Trajectory traj;
  traj.positivity_samples.assign(ell, 0);
  traj.positivity_violations.assign(ell, 0);
  traj.min_value_per_component.assign(ell, std::numeric_limits<double>::infinity());

  auto exceeded = [&](const SystemState& s) {
    for (const auto& u : s.components)
      if (!(u.max_abs() <= cfg.blowup_threshold)) return true;
    return false;
  };
  if (exceeded(u0)) {
    traj.blown_up = true;
    traj.blowup_time = u0.time;
    traj.final_state = u0;
    return traj;
  }

  const double ratio = cfg.t_end / cfg.dt;
  std::uint64_t n_steps = static_cast<std::uint64_t>(std::llround(ratio));
  if (std::abs(static_cast<double>(n_steps) - ratio) > 1e-9 * ratio)
    n_steps = static_cast<std::uint64_t>(std::ceil(ratio));

  SystemState state = u0;
  record(traj, state, cfg);
  std::vector<double> incr(stepper.increments_needed());
  for (std::uint64_t m = 0; m < n_steps; ++m) {
    stepper.increments(driver, m, incr);
    SystemState next = stepper.step(state, incr);
    next.time = u0.time + static_cast<double>(m + 1) * cfg.dt;
    traj.steps = m + 1;
    if (exceeded(next)) {
      traj.blown_up = true;
      traj.blowup_time = next.time;
      break;
    }
    state = std::move(next);
    if ((m + 1) % static_cast<std::uint64_t>(cfg.record_every) == 0 || m + 1 == n_steps)
      record(traj, state, cfg);
  }
  traj.final_state = std::move(state);
  return traj;
}

PositivityReport positivity_report(const Trajectory& traj) {
  PositivityReport r;
  r.min_value = traj.min_value_per_component;
  for (std::size_t i = 0; i < traj.positivity_samples.size(); ++i) {
    const auto n = traj.positivity_samples[i];
    r.violation_fraction.push_back(
        n == 0 ? 0.0 : static_cast<double>(traj.positivity_violations[i]) / static_cast<double>(n));
  }
  return r;
}

}  // namespace sprd
