#pragma once

// Monte Carlo checks of the stochastic Gronwall inequality on processes
// built to satisfy X(t) = int_0^t X dA + M(t) + H(t) with equality, where
// M = volatility * int X dW.

#include <cstdint>
#include <string>
#include <vector>

namespace sprd {

enum class MartingaleType { None, BrownianIntegral };

struct GronwallProcess {
  /// A(t) = a_rate * t.
  double a_rate = 0.0;
  /// H(t) = h0 + h_rate * t.
  double h0 = 1.0;
  double h_rate = 0.0;
  double volatility = 0.0;
  MartingaleType martingale = MartingaleType::None;

  double A(double t) const { return a_rate * t; }
  double H(double t) const { return h0 + h_rate * t; }
};

struct GronwallQuery {
  double gamma = 1.0;
  double lambda = 1e12;
  double R = 1.0;
  double T = 1.0;
  double p = 0.5;
};

struct GronwallPaths {
  double T = 0.0;
  double dt = 0.0;
  std::vector<double> sup_X;
  std::vector<double> X_T;
  std::vector<double> H_T;
  std::vector<double> A_T;
};

/// Euler recursion X_{k+1} = X_k (1 + dA_k + vol dW_k) + dH_k with X_0 = H(0).
/// Path j uses Brownian stream j of `seed`.
GronwallPaths simulate_paths(const GronwallProcess& proc, std::size_t n_paths, double dt,
                             double T, std::uint64_t seed, int threads = 1);

struct TailCheck {
  double gamma = 0.0;
  double lhs = 0.0;
  double lhs_upper = 0.0;
  double rhs = 0.0;
  double rhs_lower = 0.0;
  bool pass = false;
};

/// P(sup X > gamma) against (e^R / gamma) E(H_T ^ lambda) + P(H_T > lambda)
/// + P(A(T) > R); pass iff Wilson-upper(lhs) <= rhs_lower * (1 + slack).
TailCheck verify_tail_bound(const GronwallPaths& paths, const GronwallQuery& q,
                            double slack = 0.05);

struct LpCheck {
  double ratio = 0.0;
  double stderr_ratio = 0.0;
  /// ||H_T||_p = 0 while the numerator is not.
  bool degenerate = false;
};

/// ||e^{-A(T)} sup X||_p / ||H_T||_p, p in (0, 1), with a delta-method
/// standard error.
LpCheck verify_lp_bound(const GronwallPaths& paths, const GronwallQuery& q);

struct GronwallRow {
  std::string label;
  double gamma = 0.0;
  TailCheck tail;
};

struct GronwallMatrixResult {
  std::vector<GronwallRow> rows;
  /// Per configuration: Lp ratios at H scaled by 0.1, 1, 10 and whether they
  /// agree within 3 standard errors.
  std::vector<std::string> labels;
  std::vector<std::vector<double>> lp_ratios;
  std::vector<std::vector<double>> lp_stderr;
  std::vector<bool> lp_invariant;
  bool all_pass = false;
};

/// A in {0, t, 2t} x volatility in {0, 1} x H in {1, t + 1}, gamma grid
/// e^R E[H_T] {2, 4, 8, 16}, R = A(T).
GronwallMatrixResult run_gronwall_matrix(std::size_t n_paths, double dt, double T,
                                         std::uint64_t seed, double slack = 0.05,
                                         double p = 0.5, int threads = 1);

}  // namespace sprd
