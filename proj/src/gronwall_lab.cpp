#include "sprd/gronwall.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sprd/error.hpp"
#include "sprd/noise.hpp"
#include "sprd/stats.hpp"

namespace sprd {

GronwallPaths simulate_paths(const GronwallProcess& proc, std::size_t n_paths, double dt,
                             double T, std::uint64_t seed, int threads) {
  require(n_paths >= 1, "simulate_paths: need at least one path");
  require(dt > 0.0 && T > 0.0 && dt <= T, "simulate_paths: need 0 < dt <= T");
  require(proc.a_rate >= 0.0 && proc.h_rate >= 0.0, "A and H must be nondecreasing");
  require(proc.h0 >= 0.0 && proc.volatility >= 0.0, "H(0) and volatility must be >= 0");
  const std::size_t steps = static_cast<std::size_t>(std::llround(T / dt));
  const double h = T / static_cast<double>(steps);
  const bool noisy = proc.martingale == MartingaleType::BrownianIntegral && proc.volatility > 0.0;

  GronwallPaths out;
  out.T = T;
  out.dt = h;
  out.sup_X.resize(n_paths);
  out.X_T.resize(n_paths);
  out.H_T.assign(n_paths, proc.H(T));
  out.A_T.assign(n_paths, proc.A(T));
  const double dA = proc.a_rate * h;
  const double dH = proc.h_rate * h;
  const double sq = std::sqrt(h);
  parallel_for(n_paths, threads, [&](std::size_t j) {
    std::vector<double> z;
    if (noisy) {
      z.resize(steps);
      BrownianDriver(steps, seed, j).standard_normals(0, z);
    }
    double x = proc.H(0.0), sup = x;
    for (std::size_t k = 0; k < steps; ++k) {
      const double dM = noisy ? proc.volatility * x * sq * z[k] : 0.0;
      x = x + x * dA + dM + dH;
      sup = std::max(sup, x);
    }
    out.sup_X[j] = sup;
    out.X_T[j] = x;
  });
  return out;
}

TailCheck verify_tail_bound(const GronwallPaths& paths, const GronwallQuery& q, double slack) {
  const std::size_t n = paths.sup_X.size();
  require(n > 0, "verify_tail_bound: empty ensemble");
  require(q.gamma > 0.0 && q.lambda > 0.0 && q.R > 0.0, "gamma, lambda and R must be positive");
  std::size_t over = 0, h_over = 0, a_over = 0;
  double h_cap = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (paths.sup_X[j] > q.gamma) ++over;
    if (paths.H_T[j] > q.lambda) ++h_over;
    if (paths.A_T[j] > q.R) ++a_over;
    h_cap += std::min(paths.H_T[j], q.lambda);
  }
  h_cap /= static_cast<double>(n);
  const Proportion lhs = wilson_interval(over, n);
  const Proportion ph = wilson_interval(h_over, n);
  const Proportion pa = wilson_interval(a_over, n);
  TailCheck t;
  t.gamma = q.gamma;
  t.lhs = lhs.p;
  t.lhs_upper = lhs.hi;
  const double lead = std::exp(q.R) / q.gamma * h_cap;
  t.rhs = lead + ph.p + pa.p;
  t.rhs_lower = lead + ph.lo + pa.lo;
  t.pass = t.lhs_upper <= t.rhs_lower * (1.0 + slack);
  return t;
}

LpCheck verify_lp_bound(const GronwallPaths& paths, const GronwallQuery& q) {
  require(q.p > 0.0 && q.p < 1.0, "verify_lp_bound: p must lie in (0, 1)");
  const std::size_t n = paths.sup_X.size();
  require(n > 0, "verify_lp_bound: empty ensemble");
  std::vector<double> zp(n), hp(n);
  for (std::size_t j = 0; j < n; ++j) {
    zp[j] = std::pow(std::exp(-paths.A_T[j]) * std::abs(paths.sup_X[j]), q.p);
    hp[j] = std::pow(std::abs(paths.H_T[j]), q.p);
  }
  const Summary sz = summarize(zp), sh = summarize(hp);
  LpCheck r;
  if (sh.mean == 0.0) {
    r.degenerate = sz.mean != 0.0;
    r.ratio = r.degenerate ? std::numeric_limits<double>::infinity() : 0.0;
    return r;
  }
  r.ratio = std::pow(sz.mean / sh.mean, 1.0 / q.p);
  double cov = 0.0;
  for (std::size_t j = 0; j < n; ++j) cov += (zp[j] - sz.mean) * (hp[j] - sh.mean);
  cov = n > 1 ? cov / static_cast<double>(n - 1) : 0.0;
  const double nn = static_cast<double>(n);
  double var_log = sz.mean > 0.0 ? sz.variance / (nn * sz.mean * sz.mean) : 0.0;
  var_log += sh.variance / (nn * sh.mean * sh.mean);
  if (sz.mean > 0.0) var_log -= 2.0 * cov / (nn * sz.mean * sh.mean);
  r.stderr_ratio = r.ratio / q.p * std::sqrt(std::max(0.0, var_log));
  return r;
}

GronwallMatrixResult run_gronwall_matrix(std::size_t n_paths, double dt, double T,
                                         std::uint64_t seed, double slack, double p,
                                         int threads) {
  GronwallMatrixResult res;
  res.all_pass = true;
  std::uint64_t config = 0;
  for (double a : {0.0, 1.0, 2.0}) {
    for (double vol : {0.0, 1.0}) {
      for (double hr : {0.0, 1.0}) {
        GronwallProcess proc;
        proc.a_rate = a;
        proc.h0 = 1.0;
        proc.h_rate = hr;
        proc.volatility = vol;
        proc.martingale = vol > 0.0 ? MartingaleType::BrownianIntegral : MartingaleType::None;
        const std::string label = "A=" + std::string(a == 0.0 ? "0" : a == 1.0 ? "t" : "2t") +
                                  ",vol=" + (vol == 0.0 ? "0" : "1") +
                                  ",H=" + (hr == 0.0 ? "1" : "t+1");
        const std::uint64_t s = seed + 1000003ULL * config++;
        const GronwallPaths paths = simulate_paths(proc, n_paths, dt, T, s, threads);
        GronwallQuery q;
        q.T = T;
        q.R = std::max(proc.A(T), 1e-12);
        q.lambda = 1e12;
        q.p = p;
        double eh = 0.0;
        for (double v : paths.H_T) eh += v;
        eh /= static_cast<double>(paths.H_T.size());
        for (double m : {2.0, 4.0, 8.0, 16.0}) {
          q.gamma = std::exp(q.R) * eh * m;
          GronwallRow row{label, q.gamma, verify_tail_bound(paths, q, slack)};
          res.all_pass = res.all_pass && row.tail.pass;
          res.rows.push_back(row);
        }
        std::vector<double> ratios, errs;
        for (double c : {0.1, 1.0, 10.0}) {
          GronwallProcess scaled = proc;
          scaled.h0 *= c;
          scaled.h_rate *= c;
          const LpCheck lp = verify_lp_bound(simulate_paths(scaled, n_paths, dt, T, s, threads), q);
          ratios.push_back(lp.ratio);
          errs.push_back(lp.stderr_ratio);
        }
        bool invariant = true;
        for (std::size_t k : {0u, 2u}) {
          const double tol = 3.0 * std::hypot(errs[k], errs[1]);
          if (std::abs(ratios[k] - ratios[1]) > tol + 1e-12 * ratios[1]) invariant = false;
        }
        res.labels.push_back(label);
        res.lp_ratios.push_back(ratios);
        res.lp_stderr.push_back(errs);
        res.lp_invariant.push_back(invariant);
        res.all_pass = res.all_pass && invariant;
      }
    }
  }
  return res;
}

}  // namespace sprd
