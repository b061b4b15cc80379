#include "qsis/qsis.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "qsis/config.hpp"
#include "qsis/error.hpp"
#include "qsis/harness.hpp"
#include "qsis/kernel.hpp"
#include "qsis/nodes.hpp"
#include "qsis/space.hpp"

struct qsis_kernel {
  qsis::Kernel k;
};
struct qsis_nodes {
  qsis::NodeSet n;
};

namespace {

thread_local std::string last_error;

qsis_status fail(const std::string& kind, const std::string& message, double value, qsis_status status) {
  nlohmann::json e = {{"error", {{"kind", kind}, {"message", message}, {"status", static_cast<int>(status)}}}};
  if (std::isfinite(value)) e["error"]["value"] = value;
  else e["error"]["value"] = std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  last_error = e.dump();
  return status;
}

template <class F>
qsis_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const qsis::Error& e) {
    return fail(qsis::error_kind_name(e.kind()), e.what(), e.value(),
                static_cast<qsis_status>(qsis::exit_code_for(static_cast<int>(e.kind()))));
  } catch (const nlohmann::json::exception& e) {
    return fail("usage", e.what(), 0.0, QSIS_E_USAGE);
  } catch (const std::bad_alloc&) {
    return fail("numeric", "out of memory", 0.0, QSIS_E_NUMERIC);
  } catch (const std::exception& e) {
    return fail("numeric", e.what(), 0.0, QSIS_E_NUMERIC);
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

qsis_status null_arg(const char* what) { return fail("usage", std::string("null argument: ") + what, 0.0, QSIS_E_USAGE); }

}  // namespace

extern "C" {

const char* qsis_version(void) { return "1.0.0"; }

const char* qsis_last_error(void) { return last_error.c_str(); }

void qsis_string_free(char* s) { std::free(s); }

qsis_status qsis_kernel_create(const char* spec, double alpha, qsis_kernel** out) {
  return guarded([&] {
    if (!spec || !out) return null_arg("spec/out");
    nlohmann::json j = qsis::parse_kernel_expression(spec);
    if (alpha != 0.0) {
      if (!(alpha > 0.0) || !std::isfinite(alpha)) throw qsis::Error(qsis::ErrorKind::range, "alpha must be positive", alpha);
      j["alpha"] = alpha;
    }
    auto* k = new qsis_kernel{qsis::kernel_from_json(j)};
    *out = k;
    return QSIS_OK;
  });
}

void qsis_kernel_destroy(qsis_kernel* k) { delete k; }

qsis_status qsis_kernel_eval_space(const qsis_kernel* k, const double* x, size_t n, double* out) {
  return guarded([&] {
    if (!k || (n && (!x || !out))) return null_arg("kernel/x/out");
    for (size_t i = 0; i < n; ++i) out[i] = k->k.space(x[i]);
    return QSIS_OK;
  });
}

qsis_status qsis_kernel_eval_fourier(const qsis_kernel* k, const double* xi, size_t n, double* out) {
  return guarded([&] {
    if (!k || (n && (!xi || !out))) return null_arg("kernel/xi/out");
    for (size_t i = 0; i < n; ++i) out[i] = k->k.fourier(xi[i]);
    return QSIS_OK;
  });
}

qsis_status qsis_kernel_regularity(const qsis_kernel* k, int K, int M, char** json_out) {
  return guarded([&] {
    if (!k || !json_out) return null_arg("kernel/out");
    const int cells = K > 0 ? K : qsis::spectrum_cells(k->k, 4096);
    auto r = qsis::regularity_report(k->k, cells, M > 0 ? M : 1024);
    *json_out = dup(qsis::to_json(r).dump());
    return QSIS_OK;
  });
}

qsis_status qsis_kernel_describe(const qsis_kernel* k, char** json_out) {
  return guarded([&] {
    if (!k || !json_out) return null_arg("kernel/out");
    *json_out = dup(k->k.to_json().dump());
    return QSIS_OK;
  });
}

qsis_status qsis_nodes_create(const char* spec, int J, qsis_nodes** out) {
  return guarded([&] {
    if (!spec || !out) return null_arg("spec/out");
    *out = new qsis_nodes{qsis::parse_nodes(spec, J)};
    return QSIS_OK;
  });
}

void qsis_nodes_destroy(qsis_nodes* n) { delete n; }

size_t qsis_nodes_size(const qsis_nodes* n) { return n ? static_cast<size_t>(n->n.size()) : 0; }

qsis_status qsis_nodes_values(const qsis_nodes* n, double* out) {
  return guarded([&] {
    if (!n || !out) return null_arg("nodes/out");
    std::copy(n->n.nodes().begin(), n->n.nodes().end(), out);
    return QSIS_OK;
  });
}

qsis_status qsis_nodes_riesz(const qsis_nodes* n, char** json_out) {
  return guarded([&] {
    if (!n || !json_out) return null_arg("nodes/out");
    *json_out = dup(qsis::to_json(qsis::riesz_estimate(n->n)).dump());
    return QSIS_OK;
  });
}

qsis_status qsis_bessel_k(double nu, double z, double* out) {
  return guarded([&] {
    if (!out) return null_arg("out");
    *out = qsis::bessel_k(nu, z);
    return QSIS_OK;
  });
}

qsis_status qsis_config_parse(const char* text, char** json_out) {
  return guarded([&] {
    if (!text || !json_out) return null_arg("text/out");
    *json_out = dup(qsis::parse_config_text(text).dump());
    return QSIS_OK;
  });
}

qsis_status qsis_commands(char** json_out) {
  return guarded([&] {
    if (!json_out) return null_arg("out");
    *json_out = dup(nlohmann::json(qsis::command_names()).dump());
    return QSIS_OK;
  });
}

qsis_status qsis_presets(char** json_out) {
  return guarded([&] {
    if (!json_out) return null_arg("out");
    *json_out = dup(qsis::presets().dump());
    return QSIS_OK;
  });
}

qsis_status qsis_run(const char* command, const char* config_json, const char* out_dir, char** report_out) {
  return guarded([&] {
    if (!command) return null_arg("command");
    nlohmann::json cfg = nlohmann::json::object();
    if (config_json && *config_json) {
      try {
        cfg = nlohmann::json::parse(config_json);
      } catch (const nlohmann::json::parse_error& e) {
        throw qsis::Error(qsis::ErrorKind::usage, std::string("config is not valid JSON: ") + e.what());
      }
    }
    auto r = qsis::run_command(command, cfg, out_dir ? out_dir : "");
    if (report_out) *report_out = dup(r.report.dump());
    return static_cast<qsis_status>(r.exit_code);
  });
}

}  // extern "C"
