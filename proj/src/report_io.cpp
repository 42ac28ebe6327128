#include "ptspec/report_io.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace ptspec {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string matrix_csv(const CMatrix& m) {
  std::string out = "row,col,re,im\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Complex z = m(i, j);
      if (z == Complex(0.0)) continue;
      out += std::to_string(i) + "," + std::to_string(j) + "," + format_double(z.real()) + "," +
             format_double(z.imag()) + "\n";
    }
  return out;
}

std::string matrix_csv(const OperatorMatrix& m) { return matrix_csv(m.entries()); }

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json matrix_json(const OperatorMatrix& m, const BasisTruncation& basis) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.entries().rows(); ++i)
    for (Eigen::Index j = 0; j < m.entries().cols(); ++j) {
      const Complex z = m.entries()(i, j);
      if (z != Complex(0.0)) entries.push_back({i, j, z.real(), z.imag()});
    }
  json states = json::array();
  for (const auto& s : basis.states()) states.push_back(s.occupations());
  return {{"schema_version", kSchemaVersion},
          {"basis", {{"id", basis.id()}, {"d", basis.d()}, {"n_max", basis.n_max()}, {"states", states}}},
          {"dim", m.dim()},
          {"tags", m.tag_names()},
          {"entries", std::move(entries)}};
}

json to_json(const MultiIndex& s) { return s.occupations(); }

json to_json(const Cluster& c) {
  json members = json::array();
  for (const auto& m : c.members) members.push_back(m.occupations());
  return {{"level", to_string(c.level)},
          {"multiplicity", c.multiplicity()},
          {"parity", to_string(c.parity)},
          {"members", std::move(members)}};
}

json to_json(const JordanBlockReport& r) {
  return {{"m", r.m},
          {"g", r.g},
          {"rank_tol", r.rank_tol},
          {"eigenvalue_q", r.eigenvalue_q},
          {"eigenvalue_h", r.eigenvalue_h},
          {"geometric_multiplicity", r.geometric_multiplicity},
          {"nilpotency_index", r.nilpotency_index},
          {"residual_nilpotent", r.residual_nilpotent},
          {"residual_block_leak", r.residual_block_leak}};
}

json to_json(const ConditionAReport& r) {
  json j = {{"holds", r.holds}, {"kernel_rank", r.kernel_rank}, {"kernel_basis", r.kernel_basis}};
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
  return j;
}

json to_json(const GapReport& r) {
  return {{"gap", to_string(r.gap)},
          {"delta", to_string(r.delta)},
          {"denominator_bound", to_string(r.denominator_bound)},
          {"brute_force_gap", to_string(r.brute_force_gap)},
          {"verify_cutoff", to_string(r.verify_cutoff)}};
}

json to_json(const PerturbationSeries& s) {
  json g = json::array(), b = json::array(), gram = json::array(), k = json::array();
  for (const auto& m : s.g_matrices) g.push_back(matrix_json(m));
  for (const auto& m : s.k_matrices) k.push_back(matrix_json(m));
  for (const auto& m : s.b_matrices) b.push_back(matrix_json(m));
  for (const auto& m : s.gram_matrices) gram.push_back(matrix_json(m));
  return {{"order", s.order},
          {"exact_through", s.exact_through},
          {"cluster", to_json(s.cluster)},
          {"g_matrices", std::move(g)},
          {"t_hat_compressed", std::move(b)},
          {"gram", std::move(gram)},
          {"overlap", std::move(k)}};
}

json to_json(const SpectrumReport& r) {
  json ev = json::array();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
    ev.push_back({{"re", r.eigenvalues[i].real()}, {"im", r.eigenvalues[i].imag()}, {"trusted", static_cast<bool>(r.trusted_mask[i])}});
  return {{"g", r.g},
          {"threshold", r.threshold},
          {"max_abs_imag_trusted", r.max_abs_imag_trusted},
          {"verdict", to_string(r.verdict)},
          {"certified", r.certified},
          {"eigenvalues", std::move(ev)}};
}

json to_json(const BranchTrackResult& r) {
  json branches = json::array();
  for (std::size_t b = 0; b < r.branches.size(); ++b) {
    const auto& br = r.branches[b];
    json pts = json::array();
    for (std::size_t i = 0; i < br.g_values.size(); ++i)
      pts.push_back({br.g_values[i], br.values[i].real(), br.values[i].imag()});
    json jb = {{"branch_id", b}, {"origin_level", br.origin_level}, {"points", std::move(pts)}};
    if (br.origin_cluster) jb["origin_cluster"] = to_json(*br.origin_cluster);
    branches.push_back(std::move(jb));
  }
  json eps = json::array();
  for (const auto& c : r.candidates)
    eps.push_back({{"branch_id", c.branch}, {"g_low", c.g_low}, {"g_high", c.g_high}, {"value", complex_json(c.value)}});
  return {{"branches", std::move(branches)},
          {"exceptional_point_candidates", std::move(eps)},
          {"forced_steps", r.forced_steps},
          {"bisections", r.bisections}};
}

json to_json(const SlopeReport& r) {
  json j = {{"order", r.order},
            {"g_probe", r.g_probe},
            {"discrepancy", r.discrepancy},
            {"exact_to_machine_precision", r.exact_to_machine_precision}};
  std::vector<bool> used(r.used.begin(), r.used.end());
  j["used"] = used;
  j["slope"] = r.exact_to_machine_precision ? json(nullptr) : json(r.slope);
  return j;
}

std::string scan_csv(const std::vector<SpectrumReport>& reports) {
  std::string out = "g,index,re,im,trusted\n";
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
      out += format_double(r.g) + "," + std::to_string(i) + "," + format_double(r.eigenvalues[i].real()) +
             "," + format_double(r.eigenvalues[i].imag()) + "," + (r.trusted_mask[i] ? "1" : "0") + "\n";
  return out;
}

std::string branches_csv(const BranchTrackResult& r) {
  std::string out = "branch_id,g,re,im\n";
  for (std::size_t b = 0; b < r.branches.size(); ++b) {
    const auto& br = r.branches[b];
    for (std::size_t i = 0; i < br.g_values.size(); ++i)
      out += std::to_string(b) + "," + format_double(br.g_values[i]) + "," +
             format_double(br.values[i].real()) + "," + format_double(br.values[i].imag()) + "\n";
  }
  return out;
}

}  // namespace ptspec
