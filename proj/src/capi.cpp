#include "sprd/sprd.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "json.hpp"
#include "sprd/workflows.hpp"

struct sprd_config {
  sprd::RunConfig cfg;
};

namespace {

thread_local std::string last_error;

sprd_status status_of(sprd::ErrorCode code) {
  switch (code) {
    case sprd::ErrorCode::InvalidArgument: return SPRD_INVALID_ARGUMENT;
    case sprd::ErrorCode::NonFinite: return SPRD_NON_FINITE;
    case sprd::ErrorCode::GridMismatch: return SPRD_GRID_MISMATCH;
    case sprd::ErrorCode::Config: return SPRD_CONFIG;
    case sprd::ErrorCode::Io: return SPRD_IO;
  }
  return SPRD_INTERNAL;
}

template <class F>
sprd_status guarded(F&& body) {
  try {
    body();
    return SPRD_OK;
  } catch (const sprd::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return SPRD_INTERNAL;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) sprd::fail(sprd::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

std::filesystem::path out_dir_of(const sprd_config* cfg, const char* out_dir) {
  return out_dir ? std::filesystem::path(out_dir) : std::filesystem::path(cfg->cfg.output);
}

template <class F>
sprd_status workflow(const sprd_config* cfg, const char* out_dir, char** json, int* passed,
                     F&& run) {
  return guarded([&] {
    need(cfg, "config");
    const sprd::WorkflowResult r = run(cfg->cfg, out_dir_of(cfg, out_dir));
    if (passed) *passed = r.passed ? 1 : 0;
    if (json) *json = dup(r.json);
  });
}

}  // namespace

extern "C" {

const char* sprd_version(void) { return SPRD_VERSION; }

const char* sprd_last_error(void) { return last_error.c_str(); }

void sprd_string_free(char* s) { std::free(s); }

sprd_status sprd_config_default(sprd_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new sprd_config{};
  });
}

sprd_status sprd_config_load(const char* path, sprd_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new sprd_config{sprd::parse_config(path)};
  });
}

sprd_status sprd_config_parse(const char* text, const char* source, sprd_config** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new sprd_config{sprd::parse_config_text(text, source ? source : "<config>")};
  });
}

void sprd_config_free(sprd_config* cfg) { delete cfg; }

sprd_status sprd_config_set(sprd_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "config");
    need(key, "key");
    need(value, "value");
    nlohmann::json doc = nlohmann::json::parse(sprd::serialize_config(cfg->cfg));
    nlohmann::json* node = &doc;
    std::string k = key;
    std::size_t start = 0;
    for (;;) {
      const std::size_t dot = k.find('.', start);
      const std::string part = k.substr(start, dot - start);
      if (part.empty() || !node->is_object())
        sprd::fail(sprd::ErrorCode::InvalidArgument, "bad config key '" + k + "'");
      node = &(*node)[part];
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    // Values are YAML scalars or flow lists; a YAML document with a
    // placeholder lets the loader do the typing.
    const std::string marker = "__sprd_value__";
    *node = marker;
    std::string text = doc.dump();
    const std::string quoted = "\"" + marker + "\"";
    text.replace(text.find(quoted), quoted.size(), value);
    cfg->cfg = sprd::parse_config_text(text, std::string("--set ") + key);
  });
}

sprd_status sprd_config_to_json(const sprd_config* cfg, char** json) {
  return guarded([&] {
    need(cfg, "config");
    need(json, "json");
    *json = dup(sprd::serialize_config(cfg->cfg));
  });
}

sprd_status sprd_config_hash(const sprd_config* cfg, char** hex) {
  return guarded([&] {
    need(cfg, "config");
    need(hex, "hex");
    *hex = dup(sprd::config_hash_hex(cfg->cfg));
  });
}

sprd_status sprd_check(const sprd_config* cfg, const char* out_dir, char** json, int* passed) {
  return workflow(cfg, out_dir, json, passed, sprd::check_workflow);
}

sprd_status sprd_run(const sprd_config* cfg, const char* out_dir, char** json, int* passed) {
  return workflow(cfg, out_dir, json, passed, sprd::run_workflow);
}

sprd_status sprd_ensemble(const sprd_config* cfg, const char* out_dir, char** json,
                          int* passed) {
  return workflow(cfg, out_dir, json, passed, sprd::ensemble_workflow);
}

sprd_status sprd_depcheck(const sprd_config* cfg, const char* out_dir, char** json,
                          int* passed) {
  return workflow(cfg, out_dir, json, passed, sprd::depcheck_workflow);
}

sprd_status sprd_gronwall(const sprd_config* cfg, const char* out_dir, char** json,
                          int* passed) {
  return workflow(cfg, out_dir, json, passed, sprd::gronwall_workflow);
}

sprd_status sprd_plotdata(const sprd_config* cfg, const char* kind, const char* out_dir,
                          char** json) {
  return guarded([&] {
    need(cfg, "config");
    need(kind, "kind");
    const sprd::WorkflowResult r = sprd::plotdata_workflow(cfg->cfg, kind, out_dir_of(cfg, out_dir));
    if (json) *json = dup(r.json);
  });
}

}  // extern "C"
