#include "ptspec/ptspec.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "ptspec/cli.hpp"
#include "ptspec/error.hpp"
#include "ptspec/fock.hpp"
#include "ptspec/jordan.hpp"
#include "ptspec/potential.hpp"
#include "ptspec/resonance.hpp"
#include "ptspec/spectrum.hpp"

struct ptspec_basis {
  ptspec::BasisTruncation value;
};
struct ptspec_freqs {
  ptspec::FrequencyVector value;
};
struct ptspec_potential {
  ptspec::PotentialSpec value;
};
struct ptspec_matrix {
  ptspec::OperatorMatrix value;
};
struct ptspec_config {
  ptspec::RunConfig value;
};

namespace {

thread_local std::string last_error;

ptspec_status status_of(ptspec::ErrorKind k) {
  using ptspec::ErrorKind;
  switch (k) {
    case ErrorKind::invalid_argument: return PTSPEC_ERR_INVALID_ARGUMENT;
    case ErrorKind::dimension: return PTSPEC_ERR_DIMENSION;
    case ErrorKind::oddness_violation: return PTSPEC_ERR_ODDNESS;
    case ErrorKind::unbounded_potential: return PTSPEC_ERR_UNBOUNDED;
    case ErrorKind::numerical: return PTSPEC_ERR_NUMERICAL;
    case ErrorKind::tolerance_ambiguity: return PTSPEC_ERR_TOLERANCE_AMBIGUITY;
    case ErrorKind::empty_window: return PTSPEC_ERR_EMPTY_WINDOW;
    case ErrorKind::degenerate_frame: return PTSPEC_ERR_DEGENERATE_FRAME;
    case ErrorKind::inconsistency: return PTSPEC_ERR_INCONSISTENCY;
  }
  return PTSPEC_ERR_INTERNAL;
}

// Runs f, translating exceptions into status codes and last_error.
template <class F>
ptspec_status guard(F&& f) {
  last_error.clear();
  try {
    return f();
  } catch (const ptspec::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PTSPEC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PTSPEC_ERR_INTERNAL;
  }
}

ptspec_status null_arg(const char* what) {
  last_error = std::string("null argument: ") + what;
  return PTSPEC_ERR_NULL;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* ptspec_version(void) { return "1.0.0"; }

const char* ptspec_last_error(void) { return last_error.c_str(); }

const char* ptspec_status_name(ptspec_status status) {
  switch (status) {
    case PTSPEC_OK: return "ok";
    case PTSPEC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case PTSPEC_ERR_DIMENSION: return "dimension";
    case PTSPEC_ERR_ODDNESS: return "oddness_violation";
    case PTSPEC_ERR_UNBOUNDED: return "unbounded_potential";
    case PTSPEC_ERR_NUMERICAL: return "numerical";
    case PTSPEC_ERR_TOLERANCE_AMBIGUITY: return "tolerance_ambiguity";
    case PTSPEC_ERR_EMPTY_WINDOW: return "empty_window";
    case PTSPEC_ERR_DEGENERATE_FRAME: return "degenerate_frame";
    case PTSPEC_ERR_INCONSISTENCY: return "inconsistency";
    case PTSPEC_ERR_NULL: return "null_argument";
    case PTSPEC_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case PTSPEC_ERR_INTERNAL: return "internal";
    case PTSPEC_HELP: return "help";
  }
  return "unknown";
}

void ptspec_string_free(char* s) { std::free(s); }

ptspec_status ptspec_basis_new(int d, int n_max, ptspec_basis** out) {
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new ptspec_basis{ptspec::BasisTruncation(d, n_max)};
    return PTSPEC_OK;
  });
}

void ptspec_basis_free(ptspec_basis* b) { delete b; }

size_t ptspec_basis_size(const ptspec_basis* b) { return b ? b->value.size() : 0; }

ptspec_status ptspec_basis_state(const ptspec_basis* b, size_t index, int* occupations, size_t capacity) {
  if (!b) return null_arg("basis");
  if (!occupations) return null_arg("occupations");
  return guard([&] {
    ptspec::require(index < b->value.size(), "state index out of range");
    const auto& s = b->value.state(index);
    if (capacity < s.dim()) {
      last_error = "occupation buffer too small";
      return PTSPEC_ERR_BUFFER_TOO_SMALL;
    }
    for (std::size_t k = 0; k < s.dim(); ++k) occupations[k] = s[k];
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_basis_index_of(const ptspec_basis* b, const int* occupations, size_t d, size_t* index) {
  if (!b) return null_arg("basis");
  if (!occupations) return null_arg("occupations");
  if (!index) return null_arg("index");
  return guard([&] {
    *index = b->value.index_of(ptspec::MultiIndex(std::vector<int>(occupations, occupations + d)));
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_freqs_parse(const char* text, double omega, ptspec_freqs** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new ptspec_freqs{ptspec::FrequencyVector::parse(text, omega)};
    return PTSPEC_OK;
  });
}

void ptspec_freqs_free(ptspec_freqs* f) { delete f; }

int ptspec_freqs_dim(const ptspec_freqs* f) { return f ? f->value.d() : 0; }

ptspec_status ptspec_potential_parse(const char* text, ptspec_potential** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new ptspec_potential{ptspec::PotentialSpec::parse(text)};
    return PTSPEC_OK;
  });
}

void ptspec_potential_free(ptspec_potential* p) { delete p; }

ptspec_status ptspec_potential_to_json(const ptspec_potential* p, char** json) {
  if (!p) return null_arg("potential");
  if (!json) return null_arg("json");
  return guard([&] {
    *json = dup_string(p->value.to_json());
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_matrix_h0(const ptspec_freqs* f, const ptspec_basis* b, ptspec_matrix** out) {
  if (!f) return null_arg("freqs");
  if (!b) return null_arg("basis");
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new ptspec_matrix{ptspec::build_h0(f->value, b->value)};
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_matrix_potential(const ptspec_basis* b, const ptspec_potential* p,
                                      const ptspec_freqs* f, int quad_order, ptspec_matrix** out) {
  if (!b) return null_arg("basis");
  if (!p) return null_arg("potential");
  if (!out) return null_arg("out");
  return guard([&] {
    ptspec::PotentialOptions o;
    o.quad_order = quad_order;
    if (f) {
      if (f->value.d() != b->value.d())
        throw ptspec::Error(ptspec::ErrorKind::dimension, "frequency vector does not match the basis");
      for (int k = 0; k < f->value.d(); ++k) o.mode_frequencies.push_back(f->value.frequency(k));
    }
    *out = new ptspec_matrix{ptspec::potential_matrix(b->value, p->value, o).matrix};
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_matrix_ladder(const ptspec_basis* b, int mode, int raise, ptspec_matrix** out) {
  if (!b) return null_arg("basis");
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new ptspec_matrix{ptspec::ladder_matrix(
        b->value, mode, raise ? ptspec::LadderKind::raise : ptspec::LadderKind::lower)};
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_matrix_assemble(double g, const ptspec_matrix* h0, const ptspec_matrix* w,
                                     ptspec_matrix** out) {
  if (!h0) return null_arg("h0");
  if (!w) return null_arg("w");
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new ptspec_matrix{ptspec::assemble_h(g, h0->value, w->value)};
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_matrix_build_q(double g, const ptspec_basis* b, ptspec_matrix** out) {
  if (!b) return null_arg("basis");
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new ptspec_matrix{ptspec::build_q(g, b->value)};
    return PTSPEC_OK;
  });
}

void ptspec_matrix_free(ptspec_matrix* m) { delete m; }

size_t ptspec_matrix_dim(const ptspec_matrix* m) { return m ? m->value.dim() : 0; }

ptspec_status ptspec_matrix_get(const ptspec_matrix* m, size_t row, size_t col, double* re, double* im) {
  if (!m) return null_arg("matrix");
  if (!re || !im) return null_arg("re/im");
  return guard([&] {
    ptspec::require(row < m->value.dim() && col < m->value.dim(), "matrix index out of range");
    const auto z = m->value(row, col);
    *re = z.real();
    *im = z.imag();
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_matrix_spectrum(const ptspec_matrix* m, double* re, double* im, size_t capacity) {
  if (!m) return null_arg("matrix");
  if (!re || !im) return null_arg("re/im");
  return guard([&] {
    if (capacity < m->value.dim()) {
      last_error = "eigenvalue buffer too small";
      return PTSPEC_ERR_BUFFER_TOO_SMALL;
    }
    const auto ev = ptspec::dense_spectrum(m->value);
    for (std::size_t i = 0; i < ev.size(); ++i) {
      re[i] = ev[i].real();
      im[i] = ev[i].imag();
    }
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_jordan(int m, double g, double rank_tol, ptspec_jordan_report* out) {
  if (!out) return null_arg("out");
  return guard([&] {
    const auto r = ptspec::jordan_report(m, g, rank_tol);
    *out = {r.m, r.eigenvalue_q, r.eigenvalue_h, r.geometric_multiplicity, r.nilpotency_index,
            r.residual_nilpotent, r.residual_block_leak};
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_condition_a(const ptspec_freqs* f, int* holds, int64_t* witness, size_t capacity,
                                 size_t* witness_len) {
  if (!f) return null_arg("freqs");
  if (!holds) return null_arg("holds");
  return guard([&] {
    const auto r = ptspec::check_condition_A(f->value);
    *holds = r.holds ? 1 : 0;
    if (witness_len) *witness_len = r.witness ? r.witness->size() : 0;
    if (r.witness && witness) {
      if (capacity < r.witness->size()) {
        last_error = "witness buffer too small";
        return PTSPEC_ERR_BUFFER_TOO_SMALL;
      }
      for (std::size_t i = 0; i < r.witness->size(); ++i) witness[i] = (*r.witness)[i];
    }
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_gap(const ptspec_freqs* f, int64_t* gap_num, int64_t* gap_den, int64_t* delta_num,
                         int64_t* delta_den) {
  if (!f) return null_arg("freqs");
  if (!gap_num || !gap_den || !delta_num || !delta_den) return null_arg("outputs");
  return guard([&] {
    const auto r = ptspec::gap_and_delta(f->value);
    *gap_num = r.gap.numerator();
    *gap_den = r.gap.denominator();
    *delta_num = r.delta.numerator();
    *delta_den = r.delta.denominator();
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_rho(const ptspec_freqs* f, double sup_norm, double* rho) {
  if (!f) return null_arg("freqs");
  if (!rho) return null_arg("rho");
  return guard([&] {
    std::optional<double> norm;
    if (sup_norm > 0.0 && std::isfinite(sup_norm)) norm = sup_norm;
    *rho = ptspec::rho(f->value, norm);
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_config_from_args(int argc, const char* const* argv, ptspec_config** out, char** help_text) {
  if (!out) return null_arg("out");
  if (argc > 0 && !argv) return null_arg("argv");
  *out = nullptr;
  if (help_text) *help_text = nullptr;
  return guard([&] {
    std::vector<std::string> args;
    for (int i = 0; i < argc; ++i) args.emplace_back(argv[i] ? argv[i] : "");
    auto parsed = ptspec::parse_config(args);
    if (parsed.help) {
      if (help_text) *help_text = dup_string(parsed.help_text);
      return PTSPEC_HELP;
    }
    *out = new ptspec_config{std::move(parsed.config)};
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_config_from_json(const char* json, ptspec_config** out) {
  if (!json) return null_arg("json");
  if (!out) return null_arg("out");
  return guard([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      throw ptspec::Error(ptspec::ErrorKind::invalid_argument, std::string("config: ") + e.what());
    }
    auto c = ptspec::config_from_json(j);
    ptspec::validate_config(c);
    *out = new ptspec_config{std::move(c)};
    return PTSPEC_OK;
  });
}

ptspec_status ptspec_config_to_json(const ptspec_config* c, char** json) {
  if (!c) return null_arg("config");
  if (!json) return null_arg("json");
  return guard([&] {
    *json = dup_string(ptspec::config_to_json(c->value).dump());
    return PTSPEC_OK;
  });
}

void ptspec_config_free(ptspec_config* c) { delete c; }

ptspec_status ptspec_run(const ptspec_config* c, int* exit_code, char** output, char** diagnostics) {
  if (!c) return null_arg("config");
  if (!exit_code) return null_arg("exit_code");
  return guard([&] {
    const auto r = ptspec::run(c->value);
    *exit_code = r.exit_code;
    if (output) *output = dup_string(r.output);
    if (diagnostics) *diagnostics = dup_string(r.diagnostics);
    return PTSPEC_OK;
  });
}

}  // extern "C"
