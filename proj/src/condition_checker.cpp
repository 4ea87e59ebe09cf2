#include "sprd/coercivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "sprd/sampling.hpp"

namespace sprd {
namespace {

// Outer shell is radius >= 0.9 of the box reach. Growth of order |y|^{1/2} or
// more moves the ratio by >= 5% across it; bounded c/|y| approach much less.
constexpr double kShell = 0.9;
constexpr double kTrendRel = 0.02;
constexpr double kTrendAbs = 1e-9;

double ratio(const PointScalar& L, const PointScalar& W, std::span<const double> y) {
  double w = W(y);
  double l = L(y);
  if (!std::isfinite(l) || !std::isfinite(w) || w <= 0.0)
    return std::numeric_limits<double>::infinity();
  return l / w;
}

struct Scaled {
  std::vector<double> reach;  // max(|lo|, |hi|) per axis
  double radius(std::span<const double> y) const {
    double r = 0.0;
    for (std::size_t j = 0; j < reach.size(); ++j)
      if (reach[j] > 0) r = std::max(r, std::abs(y[j]) / reach[j]);
    return r;
  }
};

// Coordinate pattern search for a local max of L/W inside the box, staying
// in the same region (inner / outer shell) as the start point.
double refine(const std::vector<Interval>& box, const Scaled& scaled, const PointScalar& L,
              const PointScalar& W, std::vector<double>& y, double r) {
  const bool inner = scaled.radius(y) < kShell;
  const std::size_t ell = box.size();
  std::vector<double> width(ell);
  for (std::size_t j = 0; j < ell; ++j) width[j] = box[j].hi - box[j].lo;
  double step = 0.01;
  std::vector<double> trial(ell);
  int iterations = 0;
  while (step > 1e-10 && iterations++ < 4000) {
    bool moved = false;
    for (std::size_t j = 0; j < ell && !moved; ++j) {
      for (double s : {step, -step}) {
        trial = y;
        trial[j] = std::clamp(y[j] + s * width[j], box[j].lo, box[j].hi);
        if (trial[j] == y[j] || (scaled.radius(trial) < kShell) != inner) continue;
        double rt = ratio(L, W, trial);
        if (rt > r) {
          y = trial;
          r = rt;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return r;
}

double point_sup_b(const TransportNoise& noise, std::size_t n) {
  const auto& b = noise.fields_b[n];
  double best = 0.0;
  for (std::size_t p = 0; p < noise.grid.cells(); ++p) {
    double s = 0.0;
    for (const auto& comp : b) s += comp[p] * comp[p];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

// sup_x |b_{n,i}(x)| for every mode n.
std::vector<double> sup_b(const TransportNoise& noise, std::size_t component) {
  std::vector<double> out(noise.n_modes());
  for (std::size_t n = 0; n < out.size(); ++n)
    out[n] = point_sup_b(noise, n) * noise.scale(component);
  return out;
}

// nu and epsilon for a component; rejects eps outside (0, nu).
std::pair<double, double> nu_eps(const DiffusionTensor& a, const TransportNoise& noise,
                                 std::size_t i, const CoercivitySpec& spec) {
  const double nu = ellipticity_margin(a, noise, i);
  require(nu > 0.0, "operator is not parabolic: nu = " + std::to_string(nu) + " <= 0");
  const double eps = spec.epsilon.value_or(nu / 2.0);
  require(eps > 0.0 && eps < nu, "epsilon must lie in (0, nu) with nu = " + std::to_string(nu));
  return {nu, eps};
}

void check_box(const CoercivitySpec& spec, int ell) {
  require(static_cast<int>(spec.box.size()) == ell, "box must have one interval per component");
  for (const auto& iv : spec.box)
    require(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo < iv.hi,
            "box intervals must be finite with lo < hi");
  require(spec.zeta >= 2.0, "zeta must be >= 2");
  require(spec.samples >= 16, "need at least 16 samples");
}

CoercivityReport from_fit(ConditionId id, const BoundFit& fit) {
  CoercivityReport r;
  r.condition = id;
  r.pass = fit.bounded;
  r.fitted_M = fit.M;
  r.worst_point = fit.worst_point;
  r.worst_margin = fit.worst_margin;
  r.inner_sup = fit.inner_sup;
  r.outer_sup = fit.outer_sup;
  if (!fit.bounded) r.note = "L/W grows toward the box edge";
  return r;
}

}  // namespace

std::string condition_name(ConditionId id) {
  switch (id) {
    case ConditionId::ScalarPointwise: return "ScalarPointwise";
    case ConditionId::ScalarSmooth: return "ScalarSmooth";
    case ConditionId::System: return "System";
    case ConditionId::Random: return "Random";
    case ConditionId::StrongDissipative: return "StrongDissipative";
    case ConditionId::GrowthEnvelope: return "GrowthEnvelope";
  }
  return "?";
}

CoercivitySpec CoercivitySpec::symmetric(int ell, double halfwidth, bool nonnegative) {
  require(ell >= 1 && halfwidth > 0.0, "symmetric box needs ell >= 1 and halfwidth > 0");
  CoercivitySpec s;
  s.box.assign(ell, Interval{nonnegative ? 0.0 : -halfwidth, halfwidth});
  return s;
}

BoundFit fit_bound(const std::vector<Interval>& box, std::size_t samples,
                   std::uint64_t seed, const PointScalar& L, const PointScalar& W) {
  const int ell = static_cast<int>(box.size());
  require(ell >= 1, "fit_bound: empty box");
  Scaled scaled;
  for (const auto& iv : box) scaled.reach.push_back(std::max(std::abs(iv.lo), std::abs(iv.hi)));

  std::vector<double> pts = halton_points(samples, ell, seed);
  for (std::size_t i = 0; i < samples; ++i)
    for (int j = 0; j < ell; ++j)
      pts[i * ell + j] = box[j].lo + pts[i * ell + j] * (box[j].hi - box[j].lo);
  for (unsigned mask = 0; mask < (1u << ell); ++mask)
    for (int j = 0; j < ell; ++j)
      pts.push_back((mask >> j) & 1u ? box[j].hi : box[j].lo);
  const std::size_t count = pts.size() / ell;

  struct Candidate {
    double r;
    std::size_t idx;
  };
  std::vector<Candidate> cands(count);
  for (std::size_t i = 0; i < count; ++i)
    cands[i] = {ratio(L, W, {pts.data() + i * ell, static_cast<std::size_t>(ell)}), i};

  BoundFit fit;
  for (const auto& c : cands) {
    if (!std::isfinite(c.r)) {
      fit.bounded = false;
      fit.M = std::numeric_limits<double>::infinity();
      fit.worst_point.assign(pts.begin() + c.idx * ell, pts.begin() + (c.idx + 1) * ell);
      fit.worst_margin = -std::numeric_limits<double>::infinity();
      return fit;
    }
  }

  // Refine the best few samples of each region.
  std::vector<Candidate> inner, outer;
  for (const auto& c : cands) {
    std::span<const double> y(pts.data() + c.idx * ell, ell);
    (scaled.radius(y) < kShell ? inner : outer).push_back(c);
  }
  auto by_r = [](const Candidate& a, const Candidate& b) { return a.r > b.r; };
  double m_in = -std::numeric_limits<double>::infinity();
  double m_out = m_in;
  std::vector<double> arg_in, arg_out;
  for (auto* group : {&inner, &outer}) {
    const std::size_t keep = std::min<std::size_t>(6, group->size());
    std::partial_sort(group->begin(), group->begin() + keep, group->end(), by_r);
    for (std::size_t k = 0; k < keep; ++k) {
      std::vector<double> y(pts.begin() + (*group)[k].idx * ell,
                            pts.begin() + ((*group)[k].idx + 1) * ell);
      double r = refine(box, scaled, L, W, y, (*group)[k].r);
      if (scaled.radius(y) < kShell) {
        if (r > m_in) { m_in = r; arg_in = y; }
      } else if (r > m_out) {
        m_out = r;
        arg_out = y;
      }
    }
  }
  if (arg_in.empty()) { m_in = m_out; arg_in = arg_out; }
  if (arg_out.empty()) { m_out = m_in; arg_out = arg_in; }

  fit.inner_sup = m_in;
  fit.outer_sup = m_out;
  fit.bounded = !(m_out > m_in + std::max(kTrendRel * std::abs(m_in), kTrendAbs));
  if (fit.bounded) {
    const double sup = std::max(m_in, m_out);
    fit.M = std::max(0.0, sup);
    fit.worst_point = m_in >= m_out ? arg_in : arg_out;
    fit.worst_margin = fit.M - sup;
  } else {
    fit.M = std::max(0.0, m_in);
    fit.worst_point = arg_out;
    fit.worst_margin = fit.M - m_out;
  }
  return fit;
}

CoercivityReport check_scalar_pointwise(const ReactionModel& model,
                                        const TransportNoise& noise,
                                        const DiffusionTensor& a,
                                        const CoercivitySpec& spec) {
  require(model.ell() == 1, "check_scalar_pointwise needs a scalar model");
  check_box(spec, 1);
  const auto [nu, eps] = nu_eps(a, noise, 0, spec);
  const std::vector<double> bs = sup_b(noise, 0);
  const int d = noise.grid.dim;
  const double zeta = spec.zeta;
  const std::size_t ng = model.g_mode_count();
  auto L = [&, nu = nu, eps = eps](std::span<const double> y) {
    double f;
    model.eval_f(y, {&f, 1});
    std::vector<double> g(ng);
    model.eval_g_modes(y, g);
    double gsq = 0.0, cross = 0.0;
    for (std::size_t n = 0; n < ng; ++n) {
      gsq += g[n] * g[n];
      if (n < bs.size()) cross += bs[n] * std::abs(g[n]);
    }
    double flux = 0.0;
    if (model.has_flux()) {
      std::vector<double> F(d);
      model.eval_flux(y, d, F);
      for (double v : F) flux += v * v;
      flux = std::sqrt(flux);
    }
    const double c = flux + cross;
    return y[0] * f / (zeta - 1.0) + 0.5 * gsq + c * c / (4.0 * (nu - eps));
  };
  auto W = [](std::span<const double> y) { return y[0] * y[0] + 1.0; };
  return from_fit(ConditionId::ScalarPointwise,
                  fit_bound(spec.box, spec.samples, spec.seed, L, W));
}

CoercivityReport check_scalar_smooth(const ReactionModel& model,
                                     const TransportNoise& noise,
                                     const DiffusionTensor& a,
                                     const CoercivitySpec& spec) {
  require(model.ell() == 1, "check_scalar_smooth needs a scalar model");
  check_box(spec, 1);
  const auto [nu, eps] = nu_eps(a, noise, 0, spec);
  (void)nu;
  bool b_zero = true;
  for (std::size_t n = 0; n < noise.n_modes(); ++n)
    if (point_sup_b(noise, n) > 0.0) b_zero = false;
  // Built-in g and F depend on y only, so div b = 0 is enough.
  const bool reduced = b_zero || noise.divergence_free;
  const double zeta = spec.zeta;
  std::vector<double> gbuf(1);
  auto L = [&, eps = eps](std::span<const double> y) {
    double f, gsq;
    model.eval_f(y, {&f, 1});
    model.eval_g_sq(y, {&gsq, 1});
    double v = y[0] * f / (zeta - 1.0) + 0.5 * gsq;
    if (!reduced) {
      double sup = 0.0;
      const double r = std::abs(y[0]);
      for (int k = 0; k <= 64; ++k) {
        double yp = -r + 2.0 * r * k / 64.0, s;
        model.eval_g_sq({&yp, 1}, {&s, 1});
        sup = std::max(sup, s);
      }
      v += eps * sup;
    }
    return v;
  };
  auto W = [](std::span<const double> y) { return y[0] * y[0] + 1.0; };
  auto report = from_fit(ConditionId::ScalarSmooth,
                         fit_bound(spec.box, spec.samples, spec.seed, L, W));
  if (!reduced) report.note += (report.note.empty() ? "" : "; ") + std::string("non-reduced functional");
  return report;
}

CoercivityReport check_strong_dissipativity(const ReactionModel& model,
                                            const CoercivitySpec& spec) {
  require(model.ell() == 1, "check_strong_dissipativity needs a scalar model");
  check_box(spec, 1);
  const double h = model.growth_h();
  const Interval iv = spec.box[0];
  const double reach = std::max(std::abs(iv.lo), std::abs(iv.hi));

  // Intercept of q(y) = -y f / |y|^{h+1} against |y|^{-(h-1)} on the outer shell.
  std::vector<double> xs, qs;
  const std::vector<double> u = halton_points(spec.samples, 1, spec.seed);
  for (double t : u) {
    double y = iv.lo + t * (iv.hi - iv.lo);
    if (std::abs(y) < kShell * reach || y == 0.0) continue;
    double f;
    model.eval_f({&y, 1}, {&f, 1});
    xs.push_back(std::pow(std::abs(y), -(h - 1.0)));
    qs.push_back(-y * f / std::pow(std::abs(y), h + 1.0));
  }
  require(xs.size() >= 2, "strong dissipativity fit needs samples on the outer shell");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double mq = std::accumulate(qs.begin(), qs.end(), 0.0) / n;
  double sxx = 0.0, sxq = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxq += (xs[k] - mx) * (qs[k] - mq);
  }
  double n0 = sxx > 0.0 ? mq - (sxq / sxx) * mx : mq;

  auto fit_n1 = [&](double n0v) {
    auto L = [&, n0v](std::span<const double> y) {
      double f;
      model.eval_f(y, {&f, 1});
      return y[0] * f + n0v * std::pow(std::abs(y[0]), h + 1.0);
    };
    auto W = [](std::span<const double> y) { return y[0] * y[0] + 1.0; };
    return fit_bound(spec.box, spec.samples, spec.seed, L, W);
  };
  BoundFit fit = fit_n1(n0);
  if (!fit.bounded) {
    n0 = *std::min_element(qs.begin(), qs.end());
    fit = fit_n1(n0);
  }
  CoercivityReport r = from_fit(ConditionId::StrongDissipative, fit);
  r.N0 = n0;
  r.N1 = fit.M;
  r.fitted_C = n0;
  r.pass = fit.bounded && n0 > 0.0;
  if (n0 <= 0.0) r.note = "no positive N0";
  return r;
}

CoercivityReport check_system(const ReactionModel& model, const TransportNoise& noise,
                              const DiffusionTensor& a, const CoercivitySpec& spec) {
  const int ell = model.ell();
  check_box(spec, ell);
  std::vector<double> alpha = spec.weights_alpha;
  if (alpha.empty()) alpha.assign(ell, 1.0);
  require(static_cast<int>(alpha.size()) == ell, "need one weight alpha_i per component");
  for (double v : alpha) require(v > 0.0 && std::isfinite(v), "weights alpha_i must be positive");

  std::vector<double> nus(ell), epss(ell);
  std::vector<std::vector<double>> bs(ell);
  for (int i = 0; i < ell; ++i) {
    std::tie(nus[i], epss[i]) = nu_eps(a, noise, i, spec);
    bs[i] = sup_b(noise, i);
  }
  const int d = noise.grid.dim;
  const double zeta = spec.zeta;
  const std::size_t ng = model.g_mode_count();
  auto L = [&](std::span<const double> y) {
    std::vector<double> f(ell), g(ng * ell), F(ell * d, 0.0);
    model.eval_f(y, f);
    model.eval_g_modes(y, g);
    if (model.has_flux()) model.eval_flux(y, d, F);
    double total = 0.0;
    for (int i = 0; i < ell; ++i) {
      double gsq = 0.0, cross = 0.0, flux = 0.0;
      for (std::size_t n = 0; n < ng; ++n) {
        const double v = g[n * ell + i];
        gsq += v * v;
        if (n < bs[i].size()) cross += bs[i][n] * std::abs(v);
      }
      for (int j = 0; j < d; ++j) flux += F[i * d + j] * F[i * d + j];
      const double c = std::sqrt(flux) + cross;
      const double Ni = y[i] * f[i] / (zeta - 1.0) + 0.5 * gsq + 4.0 / (nus[i] - epss[i]) * c * c;
      total += alpha[i] * std::pow(std::abs(y[i]), zeta - 2.0) * Ni;
    }
    return total;
  };
  auto W = [&](std::span<const double> y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return std::pow(s, zeta / 2.0) + 1.0;
  };
  return from_fit(ConditionId::System, fit_bound(spec.box, spec.samples, spec.seed, L, W));
}

EnvelopeId parse_envelope(const std::string& name) {
  if (name == "lotka_volterra") return EnvelopeId::LotkaVolterra;
  if (name == "brusselator") return EnvelopeId::Brusselator;
  if (name == "brusselator_3d") return EnvelopeId::Brusselator3d;
  fail(ErrorCode::InvalidArgument, "unknown growth envelope '" + name + "'");
}

std::string envelope_name(EnvelopeId id) {
  switch (id) {
    case EnvelopeId::LotkaVolterra: return "lotka_volterra";
    case EnvelopeId::Brusselator: return "brusselator";
    case EnvelopeId::Brusselator3d: return "brusselator_3d";
  }
  return "?";
}

CoercivityReport check_growth_envelope(const ReactionModel& model, EnvelopeId envelope,
                                       const TransportNoise& noise,
                                       const DiffusionTensor& a,
                                       const CoercivitySpec& spec) {
  require(model.ell() == 2, "growth envelopes are defined for two-component models");
  check_box(spec, 2);
  for (const auto& iv : spec.box)
    require(iv.lo >= 0.0, "growth envelope box must lie in the nonnegative orthant");

  std::array<std::array<double, 2>, 2> chi{};
  const auto& p = model.params();
  if (envelope == EnvelopeId::LotkaVolterra) {
    if (const auto* lv = std::get_if<LotkaVolterraParams>(&p)) {
      chi = lv->chi;
    } else if (const auto* sir = std::get_if<SIRParams>(&p)) {
      chi = {{{0.0, sir->r[0]}, {sir->r[1], 0.0}}};
    } else {
      fail(ErrorCode::InvalidArgument, "lotka_volterra envelope needs an LV-type model");
    }
  } else {
    require(std::holds_alternative<BrusselatorParams>(p) ||
                std::holds_alternative<GrayScottParams>(p),
            "brusselator envelopes need a Brusselator-type model");
  }

  std::array<double, 2> nus{}, epss{};
  std::array<std::vector<double>, 2> bs;
  for (int i = 0; i < 2; ++i) {
    std::tie(nus[i], epss[i]) = nu_eps(a, noise, i, spec);
    bs[i] = sup_b(noise, i);
  }
  const std::size_t ng = model.g_mode_count();

  CoercivityReport report;
  report.condition = ConditionId::GrowthEnvelope;
  report.pass = true;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i) {
    auto lhs = [&, i](std::span<const double> y) {
      std::vector<double> g(ng * 2);
      model.eval_g_modes(y, g);
      double gsq = 0.0, cross = 0.0;
      for (std::size_t n = 0; n < ng; ++n) {
        const double v = g[n * 2 + i];
        gsq += v * v;
        if (n < bs[i].size()) cross += bs[i][n] * std::abs(v);
      }
      return 0.5 * gsq + cross * cross / (4.0 * (nus[i] - epss[i]));
    };
    PointScalar explicit_part, poly;
    if (envelope == EnvelopeId::LotkaVolterra) {
      if (i == 0) {
        explicit_part = [chi](std::span<const double> y) {
          return chi[0][0] * y[0] * y[0] * y[0] + chi[0][1] * y[0] * y[0] * y[1];
        };
        poly = [](std::span<const double> y) { return 1.0 + y[0] * y[0]; };
      } else {
        explicit_part = [chi](std::span<const double> y) { return chi[1][1] * y[1] * y[1] * y[1]; };
        poly = [](std::span<const double> y) {
          return 1.0 + (1.0 + y[0]) * y[1] * y[1] + y[0] * y[0] * y[1] + y[0] * y[0] * y[0];
        };
      }
    } else {
      if (i == 0) {
        const double c = envelope == EnvelopeId::Brusselator3d ? 0.2 : 1.0 - epss[0];
        explicit_part = [c](std::span<const double> y) { return c * y[0] * y[0] * y[1] * y[1]; };
        poly = [](std::span<const double> y) { return 1.0 + y[0] * y[0]; };
      } else {
        explicit_part = [](std::span<const double>) { return 0.0; };
        poly = [](std::span<const double> y) {
          return 1.0 + (1.0 + y[0] * y[0]) * y[1] * y[1] + y[0] * y[1] * y[1] * y[1] +
                 y[0] * y[0] * y[0] * y[0];
        };
      }
    }
    auto L = [&, explicit_part](std::span<const double> y) { return lhs(y) - explicit_part(y); };
    BoundFit fit = fit_bound(spec.box, spec.samples, spec.seed + i, L, poly);
    report.component_pass.push_back(fit.bounded);
    report.component_M.push_back(fit.M);
    report.pass = report.pass && fit.bounded;
    report.fitted_M = std::max(report.fitted_M, fit.M);
    if (fit.worst_margin < report.worst_margin) {
      report.worst_margin = fit.worst_margin;
      report.worst_point = fit.worst_point;
      report.inner_sup = fit.inner_sup;
      report.outer_sup = fit.outer_sup;
    }
    if (!fit.bounded)
      report.note += "component " + std::to_string(i + 1) + " exceeds the envelope; ";
  }
  return report;
}

RandomShape check_random_coercivity_shape(double zeta, int dim, double psi2) {
  require(zeta >= 2.0, "zeta must be >= 2");
  require(dim >= 1 && dim <= kMaxDim, "dimension must be 1, 2 or 3");
  require(psi2 > std::max(dim / 2.0, 1.0), "psi2 must exceed max(d/2, 1)");
  return {1.0, zeta / 2.0, 2.0 * psi2 / (2.0 * psi2 - dim)};
}

std::string report_to_json(const CoercivityReport& r) {
  nlohmann::json j;
  j["condition_id"] = condition_name(r.condition);
  j["verdict"] = r.pass ? "pass" : "fail";
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  j["fitted_M"] = num(r.fitted_M);
  j["fitted_C"] = num(r.fitted_C);
  if (r.condition == ConditionId::StrongDissipative) {
    j["N0"] = num(r.N0);
    j["N1"] = num(r.N1);
  }
  j["worst_point"] = r.worst_point;
  j["worst_margin"] = num(r.worst_margin);
  j["inner_sup"] = num(r.inner_sup);
  j["outer_sup"] = num(r.outer_sup);
  if (!r.component_pass.empty()) {
    nlohmann::json comps = nlohmann::json::array();
    for (std::size_t i = 0; i < r.component_pass.size(); ++i)
      comps.push_back({{"verdict", r.component_pass[i] ? "pass" : "fail"},
                       {"M", num(r.component_M[i])}});
    j["components"] = comps;
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump(2);
}

}  // namespace sprd
