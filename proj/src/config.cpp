#include "sprd/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <regex>
#include <sstream>

#include "json_params.hpp"
#include "sprd/stats.hpp"

namespace sprd {

using nlohmann::json;
using detail::BlockReader;
using detail::Issue;

namespace {

struct Mark {
  int line = 0;
  int column = 0;
};

json scalar_to_json(const YAML::Node& node) {
  const std::string& s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted
  static const std::regex int_re("[-+]?[0-9]+");
  static const std::regex float_re("[-+]?(\\.[0-9]+|[0-9]+(\\.[0-9]*)?)([eE][-+]?[0-9]+)?");
  if (s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "false" || s == "False" || s == "FALSE") return false;
  if (s == "null" || s == "~" || s.empty()) return nullptr;
  if (std::regex_match(s, int_re)) {
    try {
      if (s[0] == '-') return std::stoll(s);
      return std::stoull(s[0] == '+' ? s.substr(1) : s);
    } catch (...) {
    }
  }
  if (std::regex_match(s, float_re)) return std::stod(s);
  if (s == ".inf" || s == "+.inf") return std::numeric_limits<double>::infinity();
  if (s == "-.inf") return -std::numeric_limits<double>::infinity();
  return s;
}

json yaml_to_json(const YAML::Node& node, const std::string& path,
                  std::map<std::string, Mark>& marks) {
  marks[path] = {node.Mark().line + 1, node.Mark().column + 1};
  switch (node.Type()) {
    case YAML::NodeType::Map: {
      json j = json::object();
      for (const auto& kv : node) {
        const std::string key = kv.first.Scalar();
        const std::string child = path + "/" + key;
        j[key] = yaml_to_json(kv.second, child, marks);
        marks[child] = {kv.first.Mark().line + 1, kv.first.Mark().column + 1};
      }
      return j;
    }
    case YAML::NodeType::Sequence: {
      json j = json::array();
      std::size_t i = 0;
      for (const auto& e : node) j.push_back(yaml_to_json(e, path + "/" + std::to_string(i++), marks));
      return j;
    }
    case YAML::NodeType::Scalar:
      return scalar_to_json(node);
    default:
      return nullptr;
  }
}

std::string locate(const std::string& source, const std::map<std::string, Mark>& marks,
                   const std::string& path) {
  std::string p = path;
  for (;;) {
    auto it = marks.find(p);
    if (it != marks.end())
      return source + ":" + std::to_string(it->second.line) + ":" + std::to_string(it->second.column);
    if (p.empty()) return source;
    p = p.substr(0, p.rfind('/'));
  }
}

std::string scheme_name(Scheme s) {
  return s == Scheme::SemiImplicitEM ? "semi_implicit_em" : "stratonovich_midpoint";
}

std::size_t count(BlockReader& r, const char* key, std::size_t fallback) {
  const json* v = r.take(key);
  if (!v) return fallback;
  if (!v->is_number_integer() || v->get<long long>() < 0) {
    r.issue(key, "expected a nonnegative integer");
    return fallback;
  }
  return v->get<std::size_t>();
}

std::optional<double> maybe_number(BlockReader& r, const char* key, std::optional<double> fallback) {
  const json* v = r.take(key);
  if (!v || v->is_null()) return v ? std::nullopt : fallback;
  if (!v->is_number()) {
    r.issue(key, "expected a number");
    return fallback;
  }
  return v->get<double>();
}

void read_grid(const json& j, GridSpec& g, std::vector<Issue>& issues) {
  BlockReader r(j, "/grid", issues);
  g.dim = r.integer("dim", g.dim);
  g.n = r.integer("n", g.n);
  r.finish();
}

void read_diffusion(const json& j, DiffusionSpec& d, std::vector<Issue>& issues) {
  BlockReader r(j, "/diffusion", issues);
  d.nu = r.numbers("nu", d.nu);
  if (const json* m = r.take("matrices")) {
    d.matrices.clear();
    bool ok = m->is_array();
    if (ok) {
      for (const auto& mat : *m) {
        std::vector<std::vector<double>> rows;
        if (!mat.is_array()) { ok = false; break; }
        for (const auto& row : mat) {
          if (!row.is_array()) { ok = false; break; }
          std::vector<double> vals;
          for (const auto& e : row) {
            if (!e.is_number()) { ok = false; break; }
            vals.push_back(e.get<double>());
          }
          rows.push_back(vals);
        }
        d.matrices.push_back(rows);
      }
    }
    if (!ok) r.issue("matrices", "expected a list of d x d matrices");
  }
  r.finish();
}

void read_noise(const json& j, NoiseSpec& n, std::vector<Issue>& issues) {
  BlockReader r(j, "/noise", issues);
  n.n_modes = count(r, "n_modes", n.n_modes);
  n.alpha = r.number("alpha", n.alpha);
  n.amplitude = r.number("amplitude", n.amplitude);
  n.calibrate_nu0 = maybe_number(r, "calibrate_nu0", n.calibrate_nu0);
  n.divergence_free = r.boolean("divergence_free", n.divergence_free);
  n.per_component_scale = r.numbers("per_component_scale", n.per_component_scale);
  r.finish();
}

void read_initial(const json& j, std::vector<InitialComponent>& out, std::vector<Issue>& issues) {
  if (!j.is_array()) {
    issues.push_back({"/initial", "expected a list with one entry per component (or one shared)"});
    return;
  }
  out.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    BlockReader r(j[i], "/initial/" + std::to_string(i), issues);
    InitialComponent c;
    c.kind = r.string("kind", c.kind);
    c.offset = r.number("offset", c.offset);
    c.amplitude = r.number("amplitude", c.amplitude);
    std::vector<double> k = r.numbers("k", {c.k.begin(), c.k.end()});
    c.k.clear();
    for (double v : k) {
      if (v != std::floor(v)) r.issue("k", "wavevector entries must be integers");
      c.k.push_back(static_cast<int>(v));
    }
    if (c.kind != "constant" && c.kind != "sin" && c.kind != "cos")
      r.issue("kind", "expected constant, sin or cos");
    r.finish();
    out.push_back(c);
  }
}

void read_solver(const json& j, SolverConfig& s, std::vector<Issue>& issues) {
  BlockReader r(j, "/solver", issues);
  s.dt = r.number("dt", s.dt);
  s.t_end = r.number("t_end", s.t_end);
  const std::string scheme = r.string("scheme", scheme_name(s.scheme));
  if (scheme == "semi_implicit_em") s.scheme = Scheme::SemiImplicitEM;
  else if (scheme == "stratonovich_midpoint") s.scheme = Scheme::StratonovichMidpoint;
  else r.issue("scheme", "expected semi_implicit_em or stratonovich_midpoint");
  s.blowup_threshold = r.number("blowup_threshold", s.blowup_threshold);
  s.dealias = r.boolean("dealias", s.dealias);
  s.record_every = r.integer("record_every", s.record_every);
  s.snapshot_every = r.integer("snapshot_every", s.snapshot_every);
  s.zeta = r.number("zeta", s.zeta);
  s.stratonovich_correction = r.boolean("stratonovich_correction", s.stratonovich_correction);
  s.substeps = r.integer("substeps", s.substeps);
  s.positivity_tol = r.number("positivity_tol", s.positivity_tol);
  r.finish();
  try {
    s.validate();
  } catch (const Error& e) {
    issues.push_back({"/solver", e.what()});
  }
}

void read_ensemble(const json& j, EnsembleSpec& e, std::vector<Issue>& issues) {
  BlockReader r(j, "/ensemble", issues);
  e.n_paths = count(r, "n_paths", e.n_paths);
  e.zeta0 = r.number("zeta0", e.zeta0);
  e.brusselator = r.boolean("brusselator", e.brusselator);
  e.tail_functional = r.string("tail_functional", e.tail_functional);
  e.gamma = r.numbers("gamma", e.gamma);
  e.deltas = r.numbers("deltas", e.deltas);
  e.q = r.number("q", e.q);
  r.finish();
  if (e.n_paths < 1) issues.push_back({"/ensemble/n_paths", "need at least one path"});
  try {
    parse_tail_functional(e.tail_functional);
  } catch (const Error& err) {
    issues.push_back({"/ensemble/tail_functional", err.what()});
  }
}

void read_check(const json& j, CheckSpec& c, std::vector<Issue>& issues) {
  BlockReader r(j, "/check", issues);
  c.condition = r.string("condition", c.condition);
  c.zeta = r.number("zeta", c.zeta);
  c.epsilon = maybe_number(r, "epsilon", c.epsilon);
  c.box_halfwidth = r.number("box_halfwidth", c.box_halfwidth);
  c.nonnegative = r.boolean("nonnegative", c.nonnegative);
  c.samples = count(r, "samples", c.samples);
  c.weights_alpha = r.numbers("weights_alpha", c.weights_alpha);
  c.envelope = r.string("envelope", c.envelope);
  r.finish();
}

void read_gronwall(const json& j, GronwallSpec& g, std::vector<Issue>& issues) {
  BlockReader r(j, "/gronwall", issues);
  g.n_paths = count(r, "n_paths", g.n_paths);
  g.dt = r.number("dt", g.dt);
  g.T = r.number("T", g.T);
  g.slack = r.number("slack", g.slack);
  g.p = r.number("p", g.p);
  r.finish();
}

json to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["threads"] = c.threads;
  j["grid"] = {{"dim", c.grid.dim}, {"n", c.grid.n}};
  j["model"] = detail::model_json(c.model);
  json d = {{"nu", c.diffusion.nu}};
  if (!c.diffusion.matrices.empty()) d["matrices"] = c.diffusion.matrices;
  j["diffusion"] = d;
  json n = {{"n_modes", c.noise.n_modes},
            {"alpha", c.noise.alpha},
            {"amplitude", c.noise.amplitude},
            {"divergence_free", c.noise.divergence_free},
            {"per_component_scale", c.noise.per_component_scale}};
  if (c.noise.calibrate_nu0) n["calibrate_nu0"] = *c.noise.calibrate_nu0;
  j["noise"] = n;
  json init = json::array();
  for (const auto& ic : c.initial)
    init.push_back({{"kind", ic.kind}, {"offset", ic.offset}, {"amplitude", ic.amplitude}, {"k", ic.k}});
  j["initial"] = init;
  const auto& s = c.solver;
  j["solver"] = {{"dt", s.dt},
                 {"t_end", s.t_end},
                 {"scheme", scheme_name(s.scheme)},
                 {"blowup_threshold", s.blowup_threshold},
                 {"dealias", s.dealias},
                 {"record_every", s.record_every},
                 {"snapshot_every", s.snapshot_every},
                 {"zeta", s.zeta},
                 {"stratonovich_correction", s.stratonovich_correction},
                 {"substeps", s.substeps},
                 {"positivity_tol", s.positivity_tol}};
  const auto& e = c.ensemble;
  j["ensemble"] = {{"n_paths", e.n_paths},       {"zeta0", e.zeta0},   {"brusselator", e.brusselator},
                   {"tail_functional", e.tail_functional}, {"gamma", e.gamma}, {"deltas", e.deltas},
                   {"q", e.q}};
  const auto& k = c.check;
  json ck = {{"condition", k.condition},         {"zeta", k.zeta},
             {"box_halfwidth", k.box_halfwidth}, {"nonnegative", k.nonnegative},
             {"samples", k.samples},             {"weights_alpha", k.weights_alpha},
             {"envelope", k.envelope}};
  if (k.epsilon) ck["epsilon"] = *k.epsilon;
  j["check"] = ck;
  const auto& g = c.gronwall;
  j["gronwall"] = {{"n_paths", g.n_paths}, {"dt", g.dt}, {"T", g.T}, {"slack", g.slack}, {"p", g.p}};
  return j;
}

bool power_of_two(int n) { return n >= 4 && (n & (n - 1)) == 0; }

}  // namespace

std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> out;
  if (c.grid.dim < 1 || c.grid.dim > kMaxDim) out.push_back("grid.dim must be 1, 2 or 3");
  if (!power_of_two(c.grid.n)) out.push_back("grid.n must be a power of two >= 4");
  int ell = 0;
  double h = 2.0;
  try {
    const ReactionModel m = build_model(c.model);
    ell = m.ell();
    h = m.growth_h();
  } catch (const Error& e) {
    out.push_back(std::string("model: ") + e.what());
  }
  auto per_comp = [&](std::size_t size, const std::string& what, bool allow_empty) {
    if (ell == 0) return;
    if ((size == 0 && !allow_empty) || (size > 1 && static_cast<int>(size) != ell))
      out.push_back(what + " needs 1 or " + std::to_string(ell) + " entries (model has " +
                    std::to_string(ell) + " components)");
  };
  per_comp(c.diffusion.matrices.empty() ? c.diffusion.nu.size() : c.diffusion.matrices.size(),
           c.diffusion.matrices.empty() ? "diffusion.nu" : "diffusion.matrices", false);
  for (const auto& m : c.diffusion.matrices) {
    bool ok = static_cast<int>(m.size()) == c.grid.dim;
    for (const auto& row : m) ok = ok && static_cast<int>(row.size()) == c.grid.dim;
    if (!ok) out.push_back("diffusion.matrices entries must be grid.dim x grid.dim");
  }
  if (ell > 0 && !c.noise.per_component_scale.empty() &&
      static_cast<int>(c.noise.per_component_scale.size()) != ell)
    out.push_back("noise.per_component_scale needs " + std::to_string(ell) + " entries");
  per_comp(c.initial.size(), "initial", false);
  for (const auto& ic : c.initial)
    if (ic.kind != "constant" && static_cast<int>(ic.k.size()) != c.grid.dim)
      out.push_back("initial.k must have grid.dim entries");
  if (ell > 0 && !c.check.weights_alpha.empty() &&
      static_cast<int>(c.check.weights_alpha.size()) != ell)
    out.push_back("check.weights_alpha needs " + std::to_string(ell) + " entries");
  if (!c.noise.divergence_free)
    out.push_back("noise.divergence_free: only divergence-free Kraichnan fields are built in");
  if (c.noise.amplitude < 0.0) out.push_back("noise.amplitude must be >= 0");
  if (c.grid.dim >= 1 && c.grid.dim <= kMaxDim) {
    const double q0 = q0_exponent(c.grid.dim, h);
    if (c.ensemble.zeta0 != 0.0 && c.ensemble.zeta0 < q0)
      out.push_back("ensemble.zeta0 must be >= q0 = max(d(h-1)/2, 2) = " + std::to_string(q0));
    if (c.ensemble.q != 0.0 && c.ensemble.q < 2.0) out.push_back("ensemble.q must be >= 2");
  }
  if (c.check.zeta < 2.0) out.push_back("check.zeta must be >= 2");
  if (c.check.box_halfwidth <= 0.0) out.push_back("check.box_halfwidth must be positive");
  if (c.gronwall.p <= 0.0 || c.gronwall.p >= 1.0) out.push_back("gronwall.p must lie in (0, 1)");
  if (c.gronwall.dt <= 0.0 || c.gronwall.T <= 0.0 || c.gronwall.dt > c.gronwall.T)
    out.push_back("gronwall needs 0 < dt <= T");
  return out;
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    fail(ErrorCode::Config, source + ":" + std::to_string(e.mark.line + 1) + ":" +
                                std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  std::map<std::string, Mark> marks;
  const json j = root.IsNull() ? json::object() : yaml_to_json(root, "", marks);

  RunConfig c;
  std::vector<Issue> issues;
  BlockReader r(j, "", issues);
  if (const json* s = r.take("seed")) {
    if (s->is_number_unsigned() || (s->is_number_integer() && s->get<long long>() >= 0))
      c.seed = s->get<std::uint64_t>();
    else
      r.issue("seed", "expected a nonnegative integer");
  }
  c.output = r.string("output", c.output);
  c.threads = r.integer("threads", c.threads);
  if (const json* b = r.take("grid")) read_grid(*b, c.grid, issues);
  if (const json* b = r.take("model")) {
    c.model = detail::parse_model(*b, "/model", issues);
  } else {
    r.issue("model", "missing required block");
  }
  if (const json* b = r.take("diffusion")) read_diffusion(*b, c.diffusion, issues);
  if (const json* b = r.take("noise")) read_noise(*b, c.noise, issues);
  if (const json* b = r.take("initial")) read_initial(*b, c.initial, issues);
  if (const json* b = r.take("solver")) read_solver(*b, c.solver, issues);
  if (const json* b = r.take("ensemble")) read_ensemble(*b, c.ensemble, issues);
  if (const json* b = r.take("check")) read_check(*b, c.check, issues);
  if (const json* b = r.take("gronwall")) read_gronwall(*b, c.gronwall, issues);
  r.finish();

  std::ostringstream msg;
  for (const auto& is : issues)
    msg << locate(source, marks, is.path) << ": " << (is.path.empty() ? "/" : is.path) << ": "
        << is.message << '\n';
  if (issues.empty()) {
    for (const auto& p : validate_config(c)) msg << source << ": " << p << '\n';
  }
  const std::string all = msg.str();
  if (!all.empty()) fail(ErrorCode::Config, all.substr(0, all.size() - 1));
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

std::string serialize_config(const RunConfig& cfg) { return to_json(cfg).dump(2); }

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string s = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash_hex(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

int effective_threads(const RunConfig& cfg) {
  return cfg.threads > 0 ? cfg.threads : default_threads();
}

SystemState make_initial(const Grid& grid, const std::vector<InitialComponent>& init, int ell) {
  require(!init.empty(), "initial data needs at least one component");
  require(init.size() == 1 || static_cast<int>(init.size()) == ell,
          "initial data needs 1 or ell components");
  SystemState s;
  for (int i = 0; i < ell; ++i) {
    const InitialComponent& c = init[init.size() == 1 ? 0 : i];
    if (c.kind == "constant") {
      s.components.emplace_back(grid, c.offset);
      continue;
    }
    require(static_cast<int>(c.k.size()) == grid.dim, "initial k must have dim entries");
    const bool sine = c.kind == "sin";
    require(sine || c.kind == "cos", "initial kind must be constant, sin or cos");
    s.components.push_back(sample_field(grid, [&](std::span<const double> x) {
      double phase = 0.0;
      for (int j = 0; j < grid.dim; ++j) phase += c.k[j] * x[j];
      phase *= 2.0 * std::numbers::pi;
      return c.offset + c.amplitude * (sine ? std::sin(phase) : std::cos(phase));
    }));
  }
  return s;
}

TransportNoise make_noise(const Grid& grid, const NoiseSpec& spec) {
  require(spec.divergence_free, "only divergence-free Kraichnan fields are built in");
  TransportNoise noise;
  if (spec.n_modes == 0) {
    noise = zero_noise(grid);
  } else if (spec.calibrate_nu0) {
    noise = calibrate_kraichnan_noise(grid, spec.n_modes, spec.alpha, *spec.calibrate_nu0);
  } else {
    noise = build_kraichnan_noise(grid, spec.n_modes, spec.alpha, spec.amplitude);
  }
  noise.per_component_scale = spec.per_component_scale;
  return noise;
}

DiffusionTensor make_diffusion(const DiffusionSpec& spec, int dim, int ell) {
  DiffusionTensor a;
  if (!spec.matrices.empty()) {
    for (const auto& m : spec.matrices) {
      Eigen::MatrixXd A(dim, dim);
      require(static_cast<int>(m.size()) == dim, "diffusion matrix must be d x d");
      for (int j = 0; j < dim; ++j) {
        require(static_cast<int>(m[j].size()) == dim, "diffusion matrix must be d x d");
        for (int k = 0; k < dim; ++k) A(j, k) = m[j][k];
      }
      a.a.push_back(A);
    }
  } else {
    a = DiffusionTensor::isotropic(dim, spec.nu);
  }
  if (a.a.size() == 1 && ell > 1) a.a.assign(ell, a.a.front());
  a.validate(dim);
  return a;
}

Problem build_problem(const RunConfig& cfg) {
  const Grid grid = make_grid(cfg.grid.dim, cfg.grid.n);
  ReactionModel model = build_model(cfg.model);
  const int ell = model.ell();
  Problem p{std::move(model), make_noise(grid, cfg.noise), make_diffusion(cfg.diffusion, grid.dim, ell),
            make_initial(grid, cfg.initial, ell)};
  return p;
}

CoercivitySpec make_check_spec(const RunConfig& cfg, int ell) {
  CoercivitySpec s = CoercivitySpec::symmetric(ell, cfg.check.box_halfwidth, cfg.check.nonnegative);
  s.zeta = cfg.check.zeta;
  s.epsilon = cfg.check.epsilon;
  s.samples = cfg.check.samples;
  s.weights_alpha = cfg.check.weights_alpha;
  s.seed = cfg.seed;
  return s;
}

EnsembleConfig make_ensemble_config(const RunConfig& cfg) {
  EnsembleConfig e;
  e.n_paths = cfg.ensemble.n_paths;
  e.base_seed = cfg.seed;
  e.threads = effective_threads(cfg);
  e.solver = cfg.solver;
  e.zeta0 = cfg.ensemble.zeta0;
  e.brusselator = cfg.ensemble.brusselator;
  return e;
}

}  // namespace sprd
