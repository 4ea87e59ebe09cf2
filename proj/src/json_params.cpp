#include "json_params.hpp"

#include <algorithm>

namespace sprd::detail {

using nlohmann::json;

BlockReader::BlockReader(const json& j, std::string path, std::vector<Issue>& issues)
    : j_(j), path_(std::move(path)), issues_(issues) {
  if (!j_.is_object()) issues_.push_back({path_, "expected a table"});
}

const json* BlockReader::get(const char* key) {
  seen_.emplace_back(key);
  if (!j_.is_object()) return nullptr;
  auto it = j_.find(key);
  return it == j_.end() ? nullptr : &*it;
}

const json* BlockReader::child(const char* key) const {
  if (!j_.is_object()) return nullptr;
  auto it = j_.find(key);
  return it == j_.end() ? nullptr : &*it;
}

bool BlockReader::has(const char* key) const { return child(key) != nullptr; }

void BlockReader::issue(const std::string& key, const std::string& message) {
  issues_.push_back({key.empty() ? path_ : path_ + "/" + key, message});
}

double BlockReader::number(const char* key, double fallback, bool required) {
  const json* v = get(key);
  if (!v) {
    if (required) issue(key, "missing required number");
    return fallback;
  }
  if (!v->is_number()) {
    issue(key, "expected a number");
    return fallback;
  }
  return v->get<double>();
}

int BlockReader::integer(const char* key, int fallback, bool required) {
  const json* v = get(key);
  if (!v) {
    if (required) issue(key, "missing required integer");
    return fallback;
  }
  if (!v->is_number_integer()) {
    issue(key, "expected an integer");
    return fallback;
  }
  return v->get<int>();
}

bool BlockReader::boolean(const char* key, bool fallback) {
  const json* v = get(key);
  if (!v) return fallback;
  if (!v->is_boolean()) {
    issue(key, "expected true or false");
    return fallback;
  }
  return v->get<bool>();
}

std::string BlockReader::string(const char* key, const std::string& fallback,
                                bool required) {
  const json* v = get(key);
  if (!v) {
    if (required) issue(key, "missing required string");
    return fallback;
  }
  if (!v->is_string()) {
    issue(key, "expected a string");
    return fallback;
  }
  return v->get<std::string>();
}

std::vector<double> BlockReader::numbers(const char* key, std::vector<double> fallback,
                                         bool required) {
  const json* v = get(key);
  if (!v) {
    if (required) issue(key, "missing required list");
    return fallback;
  }
  if (v->is_number()) return {v->get<double>()};
  if (!v->is_array()) {
    issue(key, "expected a list of numbers");
    return fallback;
  }
  std::vector<double> out;
  for (const auto& e : *v) {
    if (!e.is_number()) {
      issue(key, "expected a list of numbers");
      return fallback;
    }
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> BlockReader::matrix(
    const char* key, std::vector<std::vector<double>> fallback) {
  const json* v = get(key);
  if (!v) return fallback;
  std::vector<std::vector<double>> out;
  if (!v->is_array()) {
    issue(key, "expected a list of rows");
    return fallback;
  }
  for (const auto& row : *v) {
    if (!row.is_array()) {
      issue(key, "expected a list of rows");
      return fallback;
    }
    std::vector<double> r;
    for (const auto& e : row) {
      if (!e.is_number()) {
        issue(key, "matrix entries must be numbers");
        return fallback;
      }
      r.push_back(e.get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

void BlockReader::finish() {
  if (!j_.is_object()) return;
  for (auto it = j_.begin(); it != j_.end(); ++it) {
    if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
      issue(it.key(), "unknown key");
    }
  }
}

namespace {

template <std::size_t N>
json arr(const std::array<double, N>& a) {
  return json(std::vector<double>(a.begin(), a.end()));
}

}  // namespace

json model_json(const ModelParams& params) {
  json j;
  j["name"] = model_name(params);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AllenCahnParams>) {
          j["theta"] = p.theta;
        } else if constexpr (std::is_same_v<T, PolynomialParams>) {
          j["f_coeffs"] = p.f_coeffs;
          j["theta"] = p.theta;
          j["g_power"] = p.g_power;
          j["h"] = p.h;
        } else if constexpr (std::is_same_v<T, LotkaVolterraParams>) {
          j["lambda"] = arr(p.lambda);
          j["chi"] = json::array({arr(p.chi[0]), arr(p.chi[1])});
          j["g_fraction"] = p.g_fraction;
        } else if constexpr (std::is_same_v<T, SymbioticLVParams>) {
          j["lambda"] = arr(p.lambda);
          j["chi"] = arr(p.chi);
          j["sigma"] = arr(p.sigma);
        } else if constexpr (std::is_same_v<T, BrusselatorParams>) {
          j["alpha"] = arr(p.alpha);
          j["beta"] = arr(p.beta);
          j["g1_coeff"] = p.g1_coeff;
          j["g2_coeff"] = p.g2_coeff;
          j["positivity"] = p.positivity;
        } else if constexpr (std::is_same_v<T, GrayScottParams>) {
          j["gamma"] = arr(p.gamma);
          j["eta"] = arr(p.eta);
          j["g1_coeff"] = p.g1_coeff;
          j["g2_coeff"] = p.g2_coeff;
        } else if constexpr (std::is_same_v<T, SIRParams>) {
          j["r"] = arr(p.r);
          j["g_fraction"] = p.g_fraction;
        } else if constexpr (std::is_same_v<T, CoagulationParams>) {
          j["ell"] = p.ell;
          j["sigma"] = p.sigma;
        }
      },
      params);
  return j;
}

ModelParams parse_model(const json& j, const std::string& path,
                        std::vector<Issue>& issues) {
  BlockReader r(j, path, issues);
  const std::string name = r.string("name", "", true);
  ModelParams out = AllenCahnParams{};
  if (name == "allen_cahn") {
    AllenCahnParams p;
    p.theta = r.numbers("theta", p.theta);
    out = p;
  } else if (name == "polynomial") {
    PolynomialParams p;
    p.f_coeffs = r.numbers("f_coeffs", {}, true);
    p.theta = r.numbers("theta", {});
    p.g_power = r.number("g_power", p.g_power);
    p.h = r.number("h", p.h);
    out = p;
  } else if (name == "lotka_volterra") {
    LotkaVolterraParams p;
    p.lambda = r.fixed<2>("lambda", p.lambda);
    auto chi = r.matrix("chi", {{p.chi[0][0], p.chi[0][1]}, {p.chi[1][0], p.chi[1][1]}});
    if (chi.size() != 2 || chi[0].size() != 2 || chi[1].size() != 2) {
      r.issue("chi", "expected a 2 x 2 matrix");
    } else {
      p.chi = {{{chi[0][0], chi[0][1]}, {chi[1][0], chi[1][1]}}};
    }
    p.g_fraction = r.number("g_fraction", p.g_fraction);
    out = p;
  } else if (name == "symbiotic_lv") {
    SymbioticLVParams p;
    p.lambda = r.fixed<2>("lambda", p.lambda);
    p.chi = r.fixed<2>("chi", p.chi);
    p.sigma = r.fixed<2>("sigma", p.sigma);
    out = p;
  } else if (name == "brusselator") {
    BrusselatorParams p;
    p.alpha = r.fixed<3>("alpha", p.alpha);
    p.beta = r.fixed<3>("beta", p.beta);
    p.g1_coeff = r.number("g1_coeff", p.g1_coeff);
    p.g2_coeff = r.number("g2_coeff", p.g2_coeff);
    p.positivity = r.boolean("positivity", p.positivity);
    out = p;
  } else if (name == "gray_scott") {
    GrayScottParams p;
    p.gamma = r.fixed<2>("gamma", p.gamma);
    p.eta = r.fixed<2>("eta", p.eta);
    p.g1_coeff = r.number("g1_coeff", p.g1_coeff);
    p.g2_coeff = r.number("g2_coeff", p.g2_coeff);
    out = p;
  } else if (name == "sir") {
    SIRParams p;
    p.r = r.fixed<3>("r", p.r);
    p.g_fraction = r.number("g_fraction", p.g_fraction);
    out = p;
  } else if (name == "coagulation") {
    CoagulationParams p;
    p.ell = r.integer("ell", p.ell);
    p.sigma = r.number("sigma", p.sigma);
    out = p;
  } else if (!name.empty()) {
    r.issue("name", "unknown model '" + name + "'");
    return out;
  }
  r.finish();
  return out;
}

}  // namespace sprd::detail
