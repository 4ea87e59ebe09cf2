#pragma once

// JSON (de)serialization of parameter blocks. Issues carry a JSON-pointer-like
// path so the config loader can map them back to file positions.

#include <string>
#include <vector>

#include "json.hpp"
#include "sprd/models.hpp"

namespace sprd::detail {

struct Issue {
  std::string path;
  std::string message;
};

/// Reader that records problems instead of throwing, so a whole block can be
/// validated in one pass.
class BlockReader {
 public:
  BlockReader(const nlohmann::json& j, std::string path, std::vector<Issue>& issues);

  double number(const char* key, double fallback, bool required = false);
  int integer(const char* key, int fallback, bool required = false);
  bool boolean(const char* key, bool fallback);
  std::string string(const char* key, const std::string& fallback, bool required = false);
  std::vector<double> numbers(const char* key, std::vector<double> fallback,
                              bool required = false);
  template <std::size_t N>
  std::array<double, N> fixed(const char* key, std::array<double, N> fallback) {
    auto v = numbers(key, {fallback.begin(), fallback.end()});
    if (v.size() != N) {
      issue(key, "expected " + std::to_string(N) + " numbers");
      return fallback;
    }
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = v[i];
    return out;
  }
  std::vector<std::vector<double>> matrix(const char* key,
                                          std::vector<std::vector<double>> fallback);
  /// Raw value (marked as consumed), nullptr if absent.
  const nlohmann::json* take(const char* key) { return get(key); }
  const nlohmann::json* child(const char* key) const;
  bool has(const char* key) const;

  void issue(const std::string& key, const std::string& message);
  /// Reports every key not consumed by a getter.
  void finish();
  const std::string& path() const { return path_; }

 private:
  const nlohmann::json* get(const char* key);

  const nlohmann::json& j_;
  std::string path_;
  std::vector<Issue>& issues_;
  std::vector<std::string> seen_;
};

ModelParams parse_model(const nlohmann::json& j, const std::string& path,
                        std::vector<Issue>& issues);
nlohmann::json model_json(const ModelParams& params);

}  // namespace sprd::detail
