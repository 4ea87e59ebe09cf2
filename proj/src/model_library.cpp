#include <algorithm>
#include <cmath>
#include <random>

#include "json_params.hpp"
#include "sprd/models.hpp"

namespace sprd {
namespace {

// sgn(y)|y|^p
double signed_pow(double y, double p) {
  if (p == 1.0) return y;
  if (p == 2.0) return y * std::abs(y);
  return std::copysign(std::pow(std::abs(y), p), y);
}

double poly(std::span<const double> c, double y) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * y + c[k];
  return acc;
}

void check_nonnegative(double v, const std::string& what) {
  require(v >= 0.0, what + " must be non-negative, got " + std::to_string(v));
}

// Lotka-Volterra family (LV and SIR share it).
void lotka_volterra(ReactionModel::PointFn& f, ReactionModel::PointFn& g,
                    std::array<double, 2> lambda,
                    std::array<std::array<double, 2>, 2> chi, double fraction) {
  f = [lambda, chi](std::span<const double> y, std::span<double> out) {
    out[0] = lambda[0] * y[0] - chi[0][0] * y[0] * y[0] - chi[0][1] * y[0] * y[1];
    out[1] = lambda[1] * y[1] - chi[1][1] * y[1] * y[1] + chi[1][0] * y[0] * y[1];
  };
  // 1/2 ||g_1||^2 = fraction (chi_11 |y1|^3 + chi_12 y1^2 y2^2 / (1 + |y2|))
  // 1/2 ||g_2||^2 = fraction (chi_22 |y2|^3 + y1^2 y2^2 / (1 + |y1|))
  const double c11 = std::sqrt(2.0 * fraction * chi[0][0]);
  const double c12 = std::sqrt(2.0 * fraction * chi[0][1]);
  const double c22 = std::sqrt(2.0 * fraction * chi[1][1]);
  const double c21 = std::sqrt(2.0 * fraction);
  g = [=](std::span<const double> y, std::span<double> out) {
    out[0] = c11 * y[0] * std::sqrt(std::abs(y[0]));
    out[1] = c22 * y[1] * std::sqrt(std::abs(y[1]));
    out[2] = c12 * y[0] * y[1] / std::sqrt(1.0 + std::abs(y[1]));
    out[3] = c21 * y[0] * y[1] / std::sqrt(1.0 + std::abs(y[0]));
  };
}

// Brusselator family (Brusselator and Gray-Scott share it).
void brusselator(ReactionModel::PointFn& f, ReactionModel::PointFn& g,
                 std::array<double, 3> a, std::array<double, 3> b, double g1,
                 double g2) {
  f = [a, b](std::span<const double> y, std::span<double> out) {
    const double r = y[0] * y[1] * y[1];
    out[0] = -r + a[1] * y[0] + a[2] * y[1] + a[0];
    out[1] = r + b[1] * y[0] + b[2] * y[1] + b[0];
  };
  const double s1 = std::sqrt(g1);
  const double s2 = std::sqrt(g2);
  g = [s1, s2](std::span<const double> y, std::span<double> out) {
    out[0] = s1 * y[0] * y[1];
    out[1] = s2 * y[1] * std::sqrt(1.0 + y[0] * y[0]);
  };
}

}  // namespace

std::string model_name(const ModelParams& params) {
  static const char* names[] = {"allen_cahn",   "polynomial",  "lotka_volterra",
                                "symbiotic_lv", "brusselator", "gray_scott",
                                "sir",          "coagulation"};
  return names[params.index()];
}

double brusselator_g1_coeff(double fraction, int dim, double eps) {
  const double envelope = dim == 3 ? 0.2 : 1.0 - eps;
  return 2.0 * fraction * envelope;
}

void ReactionModel::eval_g_modes(std::span<const double> y,
                                 std::span<double> out) const {
  if (g_modes_ == 0) return;
  g_(y, out);
}

void ReactionModel::eval_g_sq(std::span<const double> y, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (g_modes_ == 0) return;
  thread_local std::vector<double> modes;
  modes.resize(g_modes_ * ell_);
  g_(y, modes);
  for (std::size_t n = 0; n < g_modes_; ++n) {
    for (int i = 0; i < ell_; ++i) out[i] += modes[n * ell_ + i] * modes[n * ell_ + i];
  }
}

void ReactionModel::eval_flux(std::span<const double> y, int dim,
                              std::span<double> out) const {
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(ell_ * dim), 0.0);
  if (flux_) flux_(y, out);
}

std::vector<double> ReactionModel::eval_f(double, std::span<const double>,
                                          std::span<const double> y) const {
  require(static_cast<int>(y.size()) == ell_, "eval_f: state has wrong length");
  std::vector<double> out(ell_);
  f_(y, out);
  return out;
}

std::vector<double> ReactionModel::eval_g_sq(double, std::span<const double>,
                                             std::span<const double> y) const {
  require(static_cast<int>(y.size()) == ell_, "eval_g_sq: state has wrong length");
  std::vector<double> out(ell_);
  eval_g_sq(y, out);
  return out;
}

std::vector<double> ReactionModel::g_modes(double, std::span<const double>,
                                           std::span<const double> y) const {
  require(static_cast<int>(y.size()) == ell_, "g_modes: state has wrong length");
  std::vector<double> out(g_modes_ * ell_);
  eval_g_modes(y, out);
  return out;
}

ReactionModel build_model(const ModelParams& params) {
  ReactionModel m;
  m.params_ = params;
  m.name_ = model_name(params);
  std::visit(
      [&m](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AllenCahnParams>) {
          m.ell_ = 1;
          m.h_ = 3.0;
          m.positivity_ = true;
          m.g_modes_ = p.theta.size();
          m.f_ = [](std::span<const double> y, std::span<double> out) {
            out[0] = y[0] - y[0] * y[0] * y[0];
          };
          m.g_ = [theta = p.theta](std::span<const double> y, std::span<double> out) {
            const double y2 = y[0] * y[0];
            for (std::size_t n = 0; n < theta.size(); ++n) out[n] = theta[n] * y2;
          };
        } else if constexpr (std::is_same_v<T, PolynomialParams>) {
          require(!p.f_coeffs.empty() || !p.theta.empty(),
                  "polynomial model needs f_coeffs");
          require(p.g_power >= 0.0, "polynomial g_power must be >= 0");
          std::size_t deg = p.f_coeffs.size();
          while (deg > 0 && p.f_coeffs[deg - 1] == 0.0) --deg;
          m.ell_ = 1;
          m.h_ = p.h > 0.0 ? p.h : std::max(2.0, double(deg > 0 ? deg - 1 : 0));
          require(m.h_ > 1.0, "growth exponent h must exceed 1");
          const bool g_zero_at_origin =
              p.g_power > 0.0 ||
              std::all_of(p.theta.begin(), p.theta.end(), [](double t) { return t == 0.0; });
          m.positivity_ = (p.f_coeffs.empty() || p.f_coeffs[0] >= 0.0) && g_zero_at_origin;
          m.g_modes_ = p.theta.size();
          m.f_ = [c = p.f_coeffs](std::span<const double> y, std::span<double> out) {
            out[0] = poly(c, y[0]);
          };
          m.g_ = [theta = p.theta, pw = p.g_power](std::span<const double> y,
                                                   std::span<double> out) {
            const double base = pw == 0.0 ? 1.0 : signed_pow(y[0], pw);
            for (std::size_t n = 0; n < theta.size(); ++n) out[n] = theta[n] * base;
          };
        } else if constexpr (std::is_same_v<T, LotkaVolterraParams>) {
          for (const auto& row : p.chi) {
            for (double c : row) check_nonnegative(c, "Lotka-Volterra chi_ij");
          }
          check_nonnegative(p.g_fraction, "g_fraction");
          m.ell_ = 2;
          m.h_ = 2.0;
          m.positivity_ = true;
          m.g_modes_ = 2;
          lotka_volterra(m.f_, m.g_, p.lambda, p.chi, p.g_fraction);
        } else if constexpr (std::is_same_v<T, SIRParams>) {
          for (double r : p.r) check_nonnegative(r, "SIR rate");
          check_nonnegative(p.g_fraction, "g_fraction");
          m.ell_ = 2;
          m.h_ = 2.0;
          m.positivity_ = true;
          m.g_modes_ = 2;
          lotka_volterra(m.f_, m.g_, {0.0, p.r[2]}, {{{0.0, p.r[0]}, {p.r[1], 0.0}}},
                         p.g_fraction);
        } else if constexpr (std::is_same_v<T, SymbioticLVParams>) {
          m.ell_ = 2;
          m.h_ = 2.0;
          m.positivity_ = true;
          m.g_modes_ = 1;
          m.f_ = [l = p.lambda, c = p.chi](std::span<const double> y, std::span<double> out) {
            const double cross = y[0] * y[1];
            out[0] = -y[0] * y[0] + c[0] * cross + l[0] * y[0];
            out[1] = -y[1] * y[1] + c[1] * cross + l[1] * y[1];
          };
          m.g_ = [s = p.sigma](std::span<const double> y, std::span<double> out) {
            out[0] = s[0] * y[0];
            out[1] = s[1] * y[1];
          };
        } else if constexpr (std::is_same_v<T, BrusselatorParams>) {
          check_nonnegative(p.g1_coeff, "g1_coeff");
          check_nonnegative(p.g2_coeff, "g2_coeff");
          if (p.positivity) {
            check_nonnegative(p.alpha[2], "Brusselator alpha_2 (positivity mode)");
            check_nonnegative(p.alpha[0], "Brusselator alpha_0 (positivity mode)");
            check_nonnegative(p.beta[1], "Brusselator beta_1 (positivity mode)");
            check_nonnegative(p.beta[0], "Brusselator beta_0 (positivity mode)");
          }
          m.ell_ = 2;
          m.h_ = 3.0;
          m.positivity_ = p.alpha[2] >= 0.0 && p.alpha[0] >= 0.0 && p.beta[1] >= 0.0 &&
                          p.beta[0] >= 0.0;
          m.g_modes_ = 1;
          brusselator(m.f_, m.g_, p.alpha, p.beta, p.g1_coeff, p.g2_coeff);
        } else if constexpr (std::is_same_v<T, GrayScottParams>) {
          check_nonnegative(p.g1_coeff, "g1_coeff");
          check_nonnegative(p.g2_coeff, "g2_coeff");
          m.ell_ = 2;
          m.h_ = 3.0;
          m.positivity_ = p.eta[0] >= 0.0 && p.eta[1] >= 0.0;
          m.g_modes_ = 1;
          brusselator(m.f_, m.g_, {p.eta[0], p.gamma[0], 0.0}, {p.eta[1], 0.0, p.gamma[1]},
                      p.g1_coeff, p.g2_coeff);
        } else if constexpr (std::is_same_v<T, CoagulationParams>) {
          require(p.ell >= 1, "coagulation needs ell >= 1");
          m.ell_ = p.ell;
          m.h_ = 2.0;
          m.positivity_ = true;
          m.g_modes_ = 1;
          m.f_ = [ell = p.ell](std::span<const double> y, std::span<double> out) {
            double total = 0.0;
            for (int j = 0; j < ell; ++j) total += y[j];
            for (int i = 0; i < ell; ++i) {
              // Component i + 1 in one-based indexing: sum_{j=1}^{i} y_j y_{i+1-j}.
              double gain = 0.0;
              for (int j = 0; j < i; ++j) gain += y[j] * y[i - 1 - j];
              out[i] = gain - 2.0 * total * y[i];
            }
          };
          m.g_ = [ell = p.ell, s = p.sigma](std::span<const double> y, std::span<double> out) {
            for (int i = 0; i < ell; ++i) out[i] = s * y[i];
          };
        }
      },
      params);
  return m;
}

double lipschitz_probe(const ReactionModel& model, std::span<const double> lo,
                       std::span<const double> hi, std::size_t samples,
                       std::uint64_t seed) {
  const int ell = model.ell();
  require(samples >= 2, "lipschitz_probe needs at least 2 samples");
  require(static_cast<int>(lo.size()) == ell && static_cast<int>(hi.size()) == ell,
          "lipschitz_probe: box dimension must equal ell");
  for (int i = 0; i < ell; ++i) {
    require(hi[i] > lo[i], "lipschitz_probe: degenerate box");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> dist;
  for (int i = 0; i < ell; ++i) dist.emplace_back(lo[i], hi[i]);
  std::vector<double> y(ell), yp(ell), fy(ell), fyp(ell);
  const double h = model.growth_h();
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (int i = 0; i < ell; ++i) {
      y[i] = dist[i](rng);
      yp[i] = dist[i](rng);
    }
    model.eval_f(y, fy);
    model.eval_f(yp, fyp);
    double df = 0.0, dy = 0.0, ny = 0.0, nyp = 0.0;
    for (int i = 0; i < ell; ++i) {
      df += (fy[i] - fyp[i]) * (fy[i] - fyp[i]);
      dy += (y[i] - yp[i]) * (y[i] - yp[i]);
      ny += y[i] * y[i];
      nyp += yp[i] * yp[i];
    }
    if (dy == 0.0) continue;
    const double weight =
        (1.0 + std::pow(std::sqrt(ny), h - 1.0) + std::pow(std::sqrt(nyp), h - 1.0)) *
        std::sqrt(dy);
    worst = std::max(worst, std::sqrt(df) / weight);
  }
  return worst;
}

std::string model_to_json(const ModelParams& params) {
  return detail::model_json(params).dump();
}

ModelParams model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("model JSON: ") + e.what());
  }
  std::vector<detail::Issue> issues;
  ModelParams p = detail::parse_model(j, "model", issues);
  if (!issues.empty()) {
    std::string msg;
    for (const auto& is : issues) msg += is.path + ": " + is.message + "; ";
    fail(ErrorCode::Config, msg);
  }
  build_model(p);  // semantic validation
  return p;
}

}  // namespace sprd
