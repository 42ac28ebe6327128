#include "ptspec/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "ptspec/error.hpp"
#include "ptspec/jordan.hpp"
#include "ptspec/report_io.hpp"
#include "ptspec/resonance.hpp"
#include "ptspec/rspt.hpp"
#include "ptspec/spectrum.hpp"

namespace ptspec {

using nlohmann::json;

std::vector<double> parse_g_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_argument, "g: bad number '" + s + "' in '" + text + "'");
    }
  };
  require(!text.empty(), "g: empty value");
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  if (text.find(':') != std::string::npos) {
    while (std::getline(ss, item, ':')) parts.push_back(item);
    require(parts.size() == 3, "g: range must be start:stop:step, got '" + text + "'");
    const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
    require(step > 0.0, "g: step must be positive");
    require(b >= a, "g: stop must not be below start");
    const auto n = static_cast<long>(std::floor((b - a) / step + 0.5));
    require(n < 1000000, "g: too many grid points");
    std::vector<double> out;
    for (long i = 0; i <= n; ++i) {
      const double g = a + static_cast<double>(i) * step;
      if (g <= b + 0.5 * step) out.push_back(g);
    }
    return out;
  }
  std::vector<double> out;
  while (std::getline(ss, item, ',')) out.push_back(number(item));
  return out;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["d"] = c.d;
  j["n_max"] = c.n_max;
  j["freqs"] = c.freqs;
  j["omega"] = c.omega;
  j["potential"] = c.potential;
  j["g"] = c.g;
  j["order"] = c.order;
  j["tol"] = c.tol ? json(*c.tol) : json(nullptr);
  j["rank_tol"] = c.rank_tol;
  j["m_max"] = c.m_max;
  j["level"] = c.level;
  j["buffer"] = c.buffer;
  j["expect_real"] = c.expect_real;
  j["sup_norm"] = c.sup_norm ? json(*c.sup_norm) : json(nullptr);
  j["samples"] = c.samples;
  j["radius"] = c.radius;
  j["quad_order"] = c.quad_order;
  j["verify_cutoff"] = c.verify_cutoff;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["format"] = c.format;
  return j;
}

RunConfig config_from_json(const json& j) {
  require(j.is_object(), "config must be a JSON object");
  RunConfig c;
  const json known = config_to_json(c);
  for (auto it = j.begin(); it != j.end(); ++it)
    require(known.contains(it.key()), "config: unknown field '" + it.key() + "'");
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const json::exception&) {
      fail(ErrorKind::invalid_argument, std::string("config: field '") + key + "' has the wrong type");
    }
  };
  auto get_opt = [&](const char* key, std::optional<double>& field) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    double v = 0;
    get(key, v);
    field = v;
  };
  get("command", c.command);
  get("d", c.d);
  get("n_max", c.n_max);
  get("freqs", c.freqs);
  get("omega", c.omega);
  get("potential", c.potential);
  get("g", c.g);
  get("order", c.order);
  get_opt("tol", c.tol);
  get("rank_tol", c.rank_tol);
  get("m_max", c.m_max);
  get("level", c.level);
  get("buffer", c.buffer);
  get("expect_real", c.expect_real);
  get_opt("sup_norm", c.sup_norm);
  get("samples", c.samples);
  get("radius", c.radius);
  get("quad_order", c.quad_order);
  get("verify_cutoff", c.verify_cutoff);
  get("seed", c.seed);
  get("out", c.out);
  get("format", c.format);
  return c;
}

namespace {

void need(bool ok, const std::string& field, const std::string& command) {
  if (!ok) fail(ErrorKind::invalid_argument, "missing required field '" + field + "' for command '" + command + "'");
}

}  // namespace

void validate_config(const RunConfig& c) {
  const auto& cmds = commands();
  require(std::find(cmds.begin(), cmds.end(), c.command) != cmds.end(),
          "command: expected one of basis, parity, delta, jordan, rspt, scan, branches, compare; got '" +
              c.command + "'");
  require(c.format == "json" || c.format == "csv", "format: must be csv or json");
  require(c.d >= 1, "d: must be >= 1");
  require(c.n_max >= 0, "n_max: must be >= 0");
  require(c.order >= 0 && c.order <= 12, "order: must be in 0..12");
  require(std::isfinite(c.omega) && c.omega > 0.0, "omega: must be positive");
  require(c.rank_tol > 0.0, "rank_tol: must be positive");
  require(c.m_max >= 0 && c.m_max <= 200, "m_max: must be in 0..200");
  require(c.buffer >= 1, "buffer: must be >= 1");
  require(c.samples >= 1, "samples: must be >= 1");
  require(c.radius > 0.0, "radius: must be positive");
  require(c.quad_order >= 0, "quad_order: must be >= 0");
  if (c.tol) require(*c.tol >= 0.0, "tol: must be nonnegative");
  if (c.sup_norm) require(*c.sup_norm > 0.0, "sup_norm: must be positive");
  if (!c.freqs.empty()) (void)FrequencyVector::parse(c.freqs, c.omega);
  if (!c.potential.empty()) (void)PotentialSpec::parse(c.potential);
  if (!c.g.empty()) (void)parse_g_grid(c.g);
  if (!c.level.empty()) (void)parse_rational(c.level);
  if (!c.verify_cutoff.empty()) (void)parse_rational(c.verify_cutoff);

  const std::string& cmd = c.command;
  if (cmd == "parity" || cmd == "delta" || cmd == "rspt" || cmd == "scan" || cmd == "branches" ||
      cmd == "compare")
    need(!c.freqs.empty(), "freqs", cmd);
  if (cmd == "rspt" || cmd == "scan" || cmd == "branches" || cmd == "compare")
    need(!c.potential.empty(), "potential", cmd);
  if (cmd == "scan" || cmd == "branches" || cmd == "compare") need(!c.g.empty(), "g", cmd);
  if (cmd == "rspt" || cmd == "compare") need(!c.level.empty(), "level", cmd);
  if (cmd == "scan" || cmd == "branches" || cmd == "compare" || cmd == "rspt")
    require(c.n_max >= 1, "n_max: must be >= 1 for " + cmd);
  if (cmd == "scan") require(c.n_max > c.buffer, "n_max: must exceed buffer for scan");
}

ParseOutcome parse_config(const std::vector<std::string>& args) {
  ParseOutcome outcome;
  RunConfig& c = outcome.config;

  // The config file is applied first so that flags override it.
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    else continue;
    std::ifstream in(path);
    require(static_cast<bool>(in), "config: cannot open '" + path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      fail(ErrorKind::invalid_argument, "config: " + std::string(e.what()));
    }
    c = config_from_json(j);
  }

  CLI::App app{"ptspec: spectra of PT-symmetric oscillator perturbations", "ptspec"};
  std::string command, config_path, freqs, potential, g, level, verify_cutoff, out, format;
  std::optional<int> d, n_max, order, m_max, buffer, samples, quad_order;
  std::optional<double> omega, tol, rank_tol, sup_norm, radius;
  std::optional<std::uint64_t> seed;
  bool expect_real = false;
  app.add_option("command", command, "basis | parity | delta | jordan | rspt | scan | branches | compare");
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--freqs", freqs, "frequency multipliers p/q,p/q,...");
  app.add_option("--omega", omega, "base frequency (default 1)");
  app.add_option("--potential", potential,
                 "sin_linear:c1,c2 | tanh_linear:... | sin1_cos2 | trig:sin1@1,cos2@2 | poly:1@1,0;... | JSON");
  app.add_option("--g", g, "coupling: value, list a,b,c or range start:stop:step");
  app.add_option("--d", d, "dimension (basis command)");
  app.add_option("--n-max", n_max, "total-quanta truncation");
  app.add_option("--order", order, "perturbation order");
  app.add_option("--tol", tol, "main tolerance of the command");
  app.add_option("--rank-tol", rank_tol, "relative rank threshold (jordan)");
  app.add_option("--m-max", m_max, "largest grade (jordan)");
  app.add_option("--level", level, "cluster level in units of omega, e.g. 7/2 (rspt, compare; cutoff for branches)");
  app.add_option("--buffer", buffer, "truncation buffer for the trust window");
  app.add_flag("--expect-real", expect_real, "exit 1 if a complex pair is found");
  app.add_option("--sup-norm", sup_norm, "sup norm of W");
  app.add_option("--samples", samples, "random samples (jordan symbol check)");
  app.add_option("--radius", radius, "sampling radius (jordan symbol check)");
  app.add_option("--quad-order", quad_order, "Gauss-Hermite order (0 = 2 n_max + 8)");
  app.add_option("--verify-cutoff", verify_cutoff, "brute-force cutoff for the gap check");
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_option("--out", out, "write the report to this file");
  app.add_option("--format", format, "csv or json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    outcome.help = true;
    outcome.help_text = app.help();
    return outcome;
  } catch (const CLI::ParseError& e) {
    fail(ErrorKind::invalid_argument, e.what());
  }

  if (!command.empty()) c.command = command;
  if (!freqs.empty()) c.freqs = freqs;
  if (omega) c.omega = *omega;
  if (!potential.empty()) c.potential = potential;
  if (!g.empty()) c.g = g;
  if (d) c.d = *d;
  if (n_max) c.n_max = *n_max;
  if (order) c.order = *order;
  if (tol) c.tol = tol;
  if (rank_tol) c.rank_tol = *rank_tol;
  if (m_max) c.m_max = *m_max;
  if (!level.empty()) c.level = level;
  if (buffer) c.buffer = *buffer;
  if (expect_real) c.expect_real = true;
  if (sup_norm) c.sup_norm = sup_norm;
  if (samples) c.samples = *samples;
  if (radius) c.radius = *radius;
  if (quad_order) c.quad_order = *quad_order;
  if (!verify_cutoff.empty()) c.verify_cutoff = verify_cutoff;
  if (seed) c.seed = *seed;
  if (!out.empty()) c.out = out;
  if (!format.empty()) c.format = format;
  if (!c.freqs.empty()) c.d = FrequencyVector::parse(c.freqs, c.omega).d();
  require(!c.command.empty(), "command: missing (one of basis, parity, delta, jordan, rspt, scan, branches, compare)");
  validate_config(c);
  return outcome;
}

namespace {

struct Emitted {
  json result;
  std::string csv;
  int exit_code = exit_ok;
  std::string note;
};

PotentialOptions potential_options(const RunConfig& c) {
  PotentialOptions o;
  o.quad_order = c.quad_order;
  o.seed = c.seed;
  return o;
}

std::string join_ints(const std::vector<std::int64_t>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

Emitted run_basis(const RunConfig& c) {
  Emitted e;
  std::optional<FrequencyVector> f;
  if (!c.freqs.empty()) f = FrequencyVector::parse(c.freqs, c.omega);
  const BasisTruncation basis(c.d, c.n_max);
  json states = json::array();
  e.csv = f ? "index,state,grade,parity,level\n" : "index,state,grade,parity\n";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& s = basis.state(i);
    json js = {{"index", i}, {"state", s.occupations()}, {"grade", s.grade()}, {"parity", parity_of(s)}};
    std::string occ;
    for (std::size_t k = 0; k < s.dim(); ++k) occ += (k ? ";" : "") + std::to_string(s[k]);
    e.csv += std::to_string(i) + "," + occ + "," + std::to_string(s.grade()) + "," + std::to_string(parity_of(s));
    if (f) {
      js["level"] = to_string(f->level(s));
      e.csv += "," + to_string(f->level(s));
    }
    e.csv += "\n";
    states.push_back(std::move(js));
  }
  e.result = {{"id", basis.id()}, {"d", basis.d()}, {"n_max", basis.n_max()}, {"size", basis.size()}, {"states", std::move(states)}};
  return e;
}

Emitted run_jordan(const RunConfig& c) {
  Emitted e;
  const auto gs = c.g.empty() ? std::vector<double>{1.0} : parse_g_grid(c.g);
  const double rank_tol = c.tol.value_or(c.rank_tol);
  const BasisTruncation basis(2, c.m_max);
  json reports = json::array(), symbols = json::array();
  e.csv = "m,g,eigenvalue_h,geometric_multiplicity,nilpotency_index,residual_nilpotent,residual_block_leak,eigvec_residual\n";
  for (double g : gs) {
    const OperatorMatrix q = build_q(g, basis);
    for (int m = 0; m <= c.m_max; ++m) {
      const auto r = jordan_report(q, basis, m, g, rank_tol);
      const double ev = eigvec_check(m, g);
      json jr = to_json(r);
      jr["eigvec_residual"] = ev;
      reports.push_back(std::move(jr));
      e.csv += std::to_string(m) + "," + format_double(g) + "," + std::to_string(r.eigenvalue_h) + "," +
               std::to_string(r.geometric_multiplicity) + "," + std::to_string(r.nilpotency_index) + "," +
               format_double(r.residual_nilpotent) + "," + format_double(r.residual_block_leak) + "," +
               format_double(ev) + "\n";
      const bool expected = g == 0.0 ? r.geometric_multiplicity == m + 1
                                     : (r.geometric_multiplicity == 1 && r.nilpotency_index == m + 1);
      if (!expected || ev > 1e-12) {
        e.exit_code = exit_scientific;
        e.note += "grade " + std::to_string(m) + " at g=" + format_double(g) + " departs from a single Jordan block\n";
      }
    }
    if (std::abs(g) < 2.0) {
      const double margin = symbol_bound_check(g, c.samples, c.radius, c.seed);
      symbols.push_back({{"g", g}, {"samples", c.samples}, {"radius", c.radius}, {"seed", c.seed}, {"worst_margin", margin}});
      if (margin < 0.0) {
        e.exit_code = exit_scientific;
        e.note += "symbol bound violated at g=" + format_double(g) + "\n";
      }
    }
  }
  e.result = {{"blocks", std::move(reports)}, {"symbol_bound", std::move(symbols)}};
  return e;
}

json resonance_row(const RunConfig& c, std::string& csv) {
  const auto f = FrequencyVector::parse(c.freqs, c.omega);
  const auto a = check_condition_A(f);
  const Rational cutoff = c.verify_cutoff.empty() ? Rational(0) : parse_rational(c.verify_cutoff);
  const auto gap = gap_and_delta(f, cutoff);
  const double norm = c.sup_norm.value_or(1.0);
  const double r = rho(f, norm);
  json j = {{"freqs", f.to_string()},
            {"omega", f.omega()},
            {"condition_A", to_json(a)},
            {"gap", to_json(gap)},
            {"sup_norm", norm},
            {"rho", r}};
  if (auto mixed = find_mixed_cluster(f)) {
    j["mixed_cluster"] = to_json(mixed->cluster);
    j["mixed_pair"] = {mixed->even_member.occupations(), mixed->odd_member.occupations()};
  } else {
    j["mixed_cluster"] = nullptr;
  }
  csv = "freqs,condition_A,witness,gap,delta,rho\n\"" + f.to_string() + "\"," + (a.holds ? "holds" : "violated") +
        "," + (a.witness ? "\"" + join_ints(*a.witness, " ") + "\"" : "") + "," + to_string(gap.gap) + "," +
        to_string(gap.delta) + "," + format_double(r) + "\n";
  return j;
}

Emitted run_resonance(const RunConfig& c) {
  Emitted e;
  e.result = resonance_row(c, e.csv);
  return e;
}

Emitted run_rspt(const RunConfig& c) {
  Emitted e;
  const auto f = FrequencyVector::parse(c.freqs, c.omega);
  const AssembledProblem problem(f, PotentialSpec::parse(c.potential), c.n_max, potential_options(c));
  const Cluster cluster = cluster_at(f, parse_rational(c.level));
  const auto s = series(problem, cluster, c.order);
  e.result = to_json(s);
  e.result["quadrature_drift"] = problem.potential_build().quadrature_drift;
  json ev = json::array();
  e.csv = "order,row,col,re,im\n";
  for (int n = 0; n <= s.order; ++n) {
    const auto& m = s.g_matrices[static_cast<std::size_t>(n)];
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        e.csv += std::to_string(n) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
                 format_double(m(i, j).real()) + "," + format_double(m(i, j).imag()) + "\n";
  }
  if (!c.g.empty())
    for (double g : parse_g_grid(c.g)) {
      json vals = json::array();
      for (auto z : series_eigenvalues(s, g)) vals.push_back(complex_json(z));
      ev.push_back({{"g", g}, {"eigenvalues", std::move(vals)}});
    }
  e.result["series_eigenvalues"] = std::move(ev);
  if (problem.potential_build().quadrature_warning)
    e.note += "warning: quadrature drift " + format_double(problem.potential_build().quadrature_drift) + " exceeds 1e-10\n";
  return e;
}

Emitted run_scan(const RunConfig& c) {
  Emitted e;
  const auto f = FrequencyVector::parse(c.freqs, c.omega);
  auto w = PotentialSpec::parse(c.potential);
  if (c.sup_norm && w.kind() == PotentialSpec::Kind::builtin) w = PotentialSpec::builtin(w.builtin_data(), c.sup_norm);
  ScanOptions o;
  o.buffer = c.buffer;
  o.potential = potential_options(c);
  if (c.tol) o.imag_tol = *c.tol;
  const auto reports = reality_scan(f, w, parse_g_grid(c.g), c.n_max, o);
  json arr = json::array();
  bool all_real = true;
  for (const auto& r : reports) {
    arr.push_back(to_json(r));
    if (r.verdict != Verdict::real) all_real = false;
  }
  e.result = {{"reports", std::move(arr)}, {"all_real", all_real}, {"imag_tol", o.imag_tol}, {"trust_tol", o.trust_tol}};
  e.csv = scan_csv(reports);
  if (c.expect_real && !all_real) {
    e.exit_code = exit_scientific;
    e.note = "complex pair found where a real spectrum was expected\n";
  }
  return e;
}

Emitted run_branches(const RunConfig& c) {
  Emitted e;
  const auto f = FrequencyVector::parse(c.freqs, c.omega);
  const AssembledProblem problem(f, PotentialSpec::parse(c.potential), c.n_max, potential_options(c));
  BranchOptions o;
  o.level_cutoff = c.level.empty() ? to_double(f.zero_point()) * f.omega() + 3.0 * f.omega()
                                   : to_double(parse_rational(c.level)) * f.omega();
  if (c.tol) o.imag_threshold = *c.tol;
  auto grid = parse_g_grid(c.g);
  if (std::find(grid.begin(), grid.end(), 0.0) == grid.end()) grid.push_back(0.0);
  const auto r = branch_track(problem, grid, o);
  e.result = to_json(r);
  e.result["level_cutoff"] = o.level_cutoff;
  e.csv = branches_csv(r);
  return e;
}

Emitted run_compare(const RunConfig& c) {
  Emitted e;
  const auto f = FrequencyVector::parse(c.freqs, c.omega);
  const AssembledProblem problem(f, PotentialSpec::parse(c.potential), c.n_max, potential_options(c));
  const Cluster cluster = cluster_at(f, parse_rational(c.level));
  const auto r = rspt_vs_direct(problem, cluster, c.order, parse_g_grid(c.g), c.tol.value_or(1e-13));
  e.result = to_json(r);
  e.csv = "g,discrepancy,used\n";
  for (std::size_t i = 0; i < r.g_probe.size(); ++i)
    e.csv += format_double(r.g_probe[i]) + "," + format_double(r.discrepancy[i]) + "," + (r.used[i] ? "1" : "0") + "\n";
  return e;
}

int exit_for(ErrorKind k) { return is_usage_error(k) ? exit_usage : exit_numerical; }

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult rr;
  try {
    validate_config(config);
    Emitted e;
    const auto& cmd = config.command;
    if (cmd == "basis") e = run_basis(config);
    else if (cmd == "jordan") e = run_jordan(config);
    else if (cmd == "parity" || cmd == "delta") e = run_resonance(config);
    else if (cmd == "rspt") e = run_rspt(config);
    else if (cmd == "scan") e = run_scan(config);
    else if (cmd == "branches") e = run_branches(config);
    else e = run_compare(config);

    std::string text;
    if (config.format == "csv") {
      text = e.csv;
    } else {
      json report = {{"schema_version", kSchemaVersion}, {"command", cmd}, {"config", config_to_json(config)}, {"result", std::move(e.result)}};
      text = report.dump(2) + "\n";
    }
    if (!config.out.empty()) {
      std::ofstream out(config.out, std::ios::binary);
      if (!out) {
        rr.exit_code = exit_usage;
        rr.diagnostics = "error: cannot write '" + config.out + "'\n";
        return rr;
      }
      out << text;
    } else {
      rr.output = std::move(text);
    }
    rr.exit_code = e.exit_code;
    rr.diagnostics = e.note;
  } catch (const Error& err) {
    rr.exit_code = exit_for(err.kind());
    rr.diagnostics = std::string("error (") + to_string(err.kind()) + "): " + err.what() + "\n";
  } catch (const std::exception& err) {
    rr.exit_code = exit_numerical;
    rr.diagnostics = std::string("error: ") + err.what() + "\n";
  }
  return rr;
}

}  // namespace ptspec
