// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "ptspec/ptspec.h"

TEST_CASE("status names and errors") {
  CHECK(std::string(ptspec_status_name(PTSPEC_OK)) == "ok");
  CHECK(std::string(ptspec_status_name(PTSPEC_ERR_ODDNESS)) == "oddness_violation");
  CHECK(std::strlen(ptspec_version()) > 0);

  ptspec_basis* b = nullptr;
  CHECK(ptspec_basis_new(0, 3, &b) == PTSPEC_ERR_INVALID_ARGUMENT);
  CHECK(b == nullptr);
  CHECK(std::strlen(ptspec_last_error()) > 0);
  CHECK(ptspec_basis_new(2, 3, nullptr) == PTSPEC_ERR_NULL);
  CHECK(ptspec_basis_size(nullptr) == 0);
}

TEST_CASE("basis handle") {
  ptspec_basis* b = nullptr;
  REQUIRE(ptspec_basis_new(2, 2, &b) == PTSPEC_OK);
  CHECK(ptspec_basis_size(b) == 6);
  int occ[2] = {0, 0};
  REQUIRE(ptspec_basis_state(b, 4, occ, 2) == PTSPEC_OK);
  CHECK(occ[0] == 1);
  CHECK(occ[1] == 1);
  CHECK(ptspec_basis_state(b, 4, occ, 1) == PTSPEC_ERR_BUFFER_TOO_SMALL);
  CHECK(ptspec_basis_state(b, 99, occ, 2) == PTSPEC_ERR_INVALID_ARGUMENT);
  size_t idx = 0;
  const int s[2] = {2, 0};
  REQUIRE(ptspec_basis_index_of(b, s, 2, &idx) == PTSPEC_OK);
  CHECK(idx == 5);
  ptspec_basis_free(b);
}

TEST_CASE("matrices and spectra") {
  ptspec_basis* b = nullptr;
  ptspec_freqs* f = nullptr;
  ptspec_potential* w = nullptr;
  REQUIRE(ptspec_basis_new(1, 8, &b) == PTSPEC_OK);
  REQUIRE(ptspec_freqs_parse("1", 1.0, &f) == PTSPEC_OK);
  CHECK(ptspec_freqs_dim(f) == 1);
  REQUIRE(ptspec_potential_parse("poly:1@1", &w) == PTSPEC_OK);

  ptspec_matrix *h0 = nullptr, *wm = nullptr, *h = nullptr;
  REQUIRE(ptspec_matrix_h0(f, b, &h0) == PTSPEC_OK);
  REQUIRE(ptspec_matrix_potential(b, w, f, 0, &wm) == PTSPEC_OK);
  REQUIRE(ptspec_matrix_assemble(1.0, h0, wm, &h) == PTSPEC_OK);
  CHECK(ptspec_matrix_dim(h) == 9);
  double re = 0, im = 0;
  REQUIRE(ptspec_matrix_get(h, 0, 1, &re, &im) == PTSPEC_OK);
  CHECK(re == 0.0);
  CHECK(im == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(ptspec_matrix_get(h, 0, 9, &re, &im) == PTSPEC_ERR_INVALID_ARGUMENT);

  double ev_re[9], ev_im[9];
  CHECK(ptspec_matrix_spectrum(h0, ev_re, ev_im, 8) == PTSPEC_ERR_BUFFER_TOO_SMALL);
  REQUIRE(ptspec_matrix_spectrum(h0, ev_re, ev_im, 9) == PTSPEC_OK);
  for (int n = 0; n < 9; ++n) CHECK(ev_re[n] == doctest::Approx(n + 0.5));

  ptspec_matrix* a = nullptr;
  REQUIRE(ptspec_matrix_ladder(b, 1, 0, &a) == PTSPEC_OK);
  REQUIRE(ptspec_matrix_get(a, 1, 2, &re, &im) == PTSPEC_OK);
  CHECK(re == doctest::Approx(std::sqrt(2.0)));

  char* json = nullptr;
  REQUIRE(ptspec_potential_to_json(w, &json) == PTSPEC_OK);
  CHECK(std::string(json).find("polynomial") != std::string::npos);
  ptspec_string_free(json);

  ptspec_potential* even = nullptr;
  REQUIRE(ptspec_potential_parse("poly:1@2", &even) == PTSPEC_OK);
  ptspec_matrix* bad = nullptr;
  CHECK(ptspec_matrix_potential(b, even, f, 0, &bad) == PTSPEC_ERR_ODDNESS);
  ptspec_freqs* f2 = nullptr;
  REQUIRE(ptspec_freqs_parse("1,1", 1.0, &f2) == PTSPEC_OK);
  CHECK(ptspec_matrix_potential(b, w, f2, 0, &bad) == PTSPEC_ERR_DIMENSION);
  CHECK(ptspec_matrix_build_q(0.5, b, &bad) == PTSPEC_ERR_DIMENSION);

  ptspec_matrix_free(a);
  ptspec_matrix_free(h);
  ptspec_matrix_free(wm);
  ptspec_matrix_free(h0);
  ptspec_potential_free(even);
  ptspec_potential_free(w);
  ptspec_freqs_free(f2);
  ptspec_freqs_free(f);
  ptspec_basis_free(b);
}

TEST_CASE("analyses") {
  ptspec_jordan_report r{};
  REQUIRE(ptspec_jordan(3, 0.5, 1e-10, &r) == PTSPEC_OK);
  CHECK(r.eigenvalue_h == 4);
  CHECK(r.geometric_multiplicity == 1);
  CHECK(r.nilpotency_index == 4);
  CHECK(ptspec_jordan(4, 1e-10, 1e-10, &r) == PTSPEC_ERR_TOLERANCE_AMBIGUITY);

  ptspec_freqs* f = nullptr;
  REQUIRE(ptspec_freqs_parse("2/1,1/1", 1.0, &f) == PTSPEC_OK);
  int holds = 1;
  int64_t witness[3] = {0, 0, 0};
  size_t len = 0;
  REQUIRE(ptspec_condition_a(f, &holds, witness, 3, &len) == PTSPEC_OK);
  CHECK(holds == 0);
  CHECK(len == 2);
  CHECK(witness[0] == 1);
  CHECK(witness[1] == -2);
  ptspec_freqs_free(f);

  REQUIRE(ptspec_freqs_parse("1/1,1/3", 1.0, &f) == PTSPEC_OK);
  int64_t gn, gd, dn, dd;
  REQUIRE(ptspec_gap(f, &gn, &gd, &dn, &dd) == PTSPEC_OK);
  CHECK(gn == 1);
  CHECK(gd == 3);
  CHECK(dn == 1);
  CHECK(dd == 6);
  double rho = 0;
  REQUIRE(ptspec_rho(f, 1.0, &rho) == PTSPEC_OK);
  CHECK(rho == doctest::Approx(1.0 / 6.0));
  CHECK(ptspec_rho(f, 0.0, &rho) == PTSPEC_ERR_UNBOUNDED);
  ptspec_freqs_free(f);

  CHECK(ptspec_freqs_parse("2/4", 1.0, &f) == PTSPEC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config and run") {
  const char* argv[] = {"delta", "--freqs", "1/1,1/3", "--format", "csv"};
  ptspec_config* c = nullptr;
  char* help = nullptr;
  REQUIRE(ptspec_config_from_args(5, argv, &c, &help) == PTSPEC_OK);
  int code = -1;
  char *out = nullptr, *diag = nullptr;
  REQUIRE(ptspec_run(c, &code, &out, &diag) == PTSPEC_OK);
  CHECK(code == 0);
  CHECK(std::string(out).find(",1/3,1/6,") != std::string::npos);
  ptspec_string_free(out);
  ptspec_string_free(diag);

  char* json = nullptr;
  REQUIRE(ptspec_config_to_json(c, &json) == PTSPEC_OK);
  ptspec_config* again = nullptr;
  REQUIRE(ptspec_config_from_json(json, &again) == PTSPEC_OK);
  char* json2 = nullptr;
  REQUIRE(ptspec_config_to_json(again, &json2) == PTSPEC_OK);
  CHECK(std::string(json) == std::string(json2));
  ptspec_string_free(json);
  ptspec_string_free(json2);
  ptspec_config_free(again);
  ptspec_config_free(c);

  const char* help_argv[] = {"--help"};
  REQUIRE(ptspec_config_from_args(1, help_argv, &c, &help) == PTSPEC_HELP);
  CHECK(std::string(help).find("Usage") != std::string::npos);
  ptspec_string_free(help);

  const char* missing[] = {"parity"};
  CHECK(ptspec_config_from_args(1, missing, &c, nullptr) == PTSPEC_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ptspec_last_error()).find("freqs") != std::string::npos);
  CHECK(ptspec_config_from_json("{not json", &c) == PTSPEC_ERR_INVALID_ARGUMENT);
}
