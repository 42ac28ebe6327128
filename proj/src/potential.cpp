#include "ptspec/potential.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"

#include "ptspec/error.hpp"
#include "ptspec/quadrature.hpp"

namespace ptspec {

using nlohmann::json;

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(const std::string& s, std::string_view context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    fail(ErrorKind::invalid_argument,
         "bad number '" + s + "' in potential '" + std::string(context) + "'");
  return v;
}

int parse_count(const std::string& s, std::string_view context) {
  const double v = parse_number(s, context);
  if (v < 0 || v != std::floor(v))
    fail(ErrorKind::invalid_argument,
         "expected a nonnegative integer, got '" + s + "' in '" + std::string(context) + "'");
  return static_cast<int>(v);
}

const char* trig_name(TrigKind k) { return k == TrigKind::sin ? "sin" : "cos"; }

TrigKind trig_from(const std::string& s) {
  if (s == "sin") return TrigKind::sin;
  if (s == "cos") return TrigKind::cos;
  fail(ErrorKind::invalid_argument, "unknown trig function '" + s + "'");
}

double trig_eval(TrigKind k, double y) { return k == TrigKind::sin ? std::sin(y) : std::cos(y); }

bool is_known_builtin(const std::string& name) {
  return name == "sin_linear" || name == "tanh_linear" || name == "trig_product";
}

std::string powers_string(const std::vector<int>& p) {
  std::string s = "(";
  for (std::size_t k = 0; k < p.size(); ++k) s += (k ? "," : "") + std::to_string(p[k]);
  return s + ")";
}

}  // namespace

PotentialSpec PotentialSpec::polynomial(std::vector<PolynomialTerm> terms) {
  require(!terms.empty(), "polynomial potential needs at least one term");
  const auto dim = terms.front().powers.size();
  for (const auto& t : terms) {
    require(!t.powers.empty() && t.powers.size() == dim,
            "all polynomial terms must have the same number of powers");
    require(std::isfinite(t.coeff), "polynomial coefficient must be finite");
    for (int p : t.powers) require(p >= 0, "polynomial powers must be nonnegative");
  }
  PotentialSpec s;
  s.kind_ = Kind::polynomial;
  s.terms_ = std::move(terms);
  return s;
}

PotentialSpec PotentialSpec::builtin(BuiltinPotential b, std::optional<double> sup_norm) {
  if (b.name == "sin1_cos2") {
    b.name = "trig_product";
    b.coeffs.clear();
    b.factors = {{TrigKind::sin, 1, 1.0}, {TrigKind::cos, 2, 2.0}};
  }
  require(is_known_builtin(b.name), "unknown builtin potential '" + b.name + "'");
  if (b.name == "trig_product") {
    require(!b.factors.empty(), "trig_product needs at least one factor");
    for (const auto& f : b.factors) {
      require(f.mode >= 1, "trig factor mode must be >= 1");
      require(std::isfinite(f.freq), "trig factor frequency must be finite");
    }
  } else {
    require(!b.coeffs.empty(), b.name + " needs a coefficient vector");
    for (double c : b.coeffs) require(std::isfinite(c), "coefficients must be finite");
  }
  const double norm = sup_norm.value_or(1.0);
  require(std::isfinite(norm) && norm > 0.0, "sup_norm must be positive");
  PotentialSpec s;
  s.kind_ = Kind::builtin;
  s.builtin_ = std::move(b);
  s.sup_norm_ = norm;
  return s;
}

PotentialSpec PotentialSpec::parse(std::string_view text) {
  std::string t(text);
  if (!t.empty() && t.front() == '{') return from_json(t);
  const auto colon = t.find(':');
  const std::string head = t.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : t.substr(colon + 1);

  if (head == "sin1_cos2") return builtin({"sin1_cos2", {}, {}});
  if (head == "sin_linear" || head == "tanh_linear") {
    require(!args.empty(), head + " needs coefficients, e.g. " + head + ":1,1");
    BuiltinPotential b{head, {}, {}};
    for (const auto& c : split(args, ',')) b.coeffs.push_back(parse_number(c, text));
    return builtin(std::move(b));
  }
  if (head == "trig") {
    // trig:sin1@1,cos2@2 -> sin(1 x_1) cos(2 x_2)
    BuiltinPotential b{"trig_product", {}, {}};
    for (const auto& f : split(args, ',')) {
      const auto at = f.find('@');
      require(at != std::string::npos && f.size() > 3,
              "trig factor '" + f + "' must look like sin1@1");
      TrigFactor tf;
      tf.fn = trig_from(f.substr(0, 3));
      tf.freq = parse_number(f.substr(3, at - 3), text);
      tf.mode = parse_count(f.substr(at + 1), text);
      b.factors.push_back(tf);
    }
    return builtin(std::move(b));
  }
  if (head == "poly") {
    // poly:1@1,0;0.5@3,0 -> x_1 + 0.5 x_1^3
    std::vector<PolynomialTerm> terms;
    for (const auto& term : split(args, ';')) {
      const auto at = term.find('@');
      require(at != std::string::npos, "polynomial term '" + term + "' must look like coeff@p1,p2");
      PolynomialTerm pt;
      pt.coeff = parse_number(term.substr(0, at), text);
      for (const auto& p : split(term.substr(at + 1), ',')) pt.powers.push_back(parse_count(p, text));
      terms.push_back(std::move(pt));
    }
    return polynomial(std::move(terms));
  }
  fail(ErrorKind::invalid_argument, "unrecognized potential '" + t +
                                        "' (expected sin_linear:..., tanh_linear:..., "
                                        "sin1_cos2, trig:..., poly:... or JSON)");
}

PotentialSpec PotentialSpec::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_argument, std::string("potential JSON: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "polynomial") {
      std::vector<PolynomialTerm> terms;
      for (const auto& t : j.at("terms"))
        terms.push_back({t.at("coeff").get<double>(), t.at("powers").get<std::vector<int>>()});
      return polynomial(std::move(terms));
    }
    if (kind == "builtin") {
      BuiltinPotential b;
      b.name = j.at("name").get<std::string>();
      if (j.contains("coeffs")) b.coeffs = j.at("coeffs").get<std::vector<double>>();
      if (j.contains("factors"))
        for (const auto& f : j.at("factors"))
          b.factors.push_back({trig_from(f.at("fn").get<std::string>()), f.at("mode").get<int>(),
                               f.at("freq").get<double>()});
      std::optional<double> norm;
      if (j.contains("sup_norm")) {
        if (j.at("sup_norm").is_string())
          fail(ErrorKind::invalid_argument, "builtin potentials are bounded; sup_norm must be a number");
        norm = j.at("sup_norm").get<double>();
      }
      return builtin(std::move(b), norm);
    }
    fail(ErrorKind::invalid_argument, "potential kind must be 'polynomial' or 'builtin'");
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_argument, std::string("potential JSON: ") + e.what());
  }
}

std::string PotentialSpec::to_json() const {
  json j;
  if (kind_ == Kind::polynomial) {
    j["kind"] = "polynomial";
    j["terms"] = json::array();
    for (const auto& t : terms_) j["terms"].push_back({{"coeff", t.coeff}, {"powers", t.powers}});
    j["sup_norm"] = "unbounded";
  } else {
    j["kind"] = "builtin";
    j["name"] = builtin_.name;
    if (!builtin_.coeffs.empty()) j["coeffs"] = builtin_.coeffs;
    if (!builtin_.factors.empty()) {
      j["factors"] = json::array();
      for (const auto& f : builtin_.factors)
        j["factors"].push_back({{"fn", trig_name(f.fn)}, {"mode", f.mode}, {"freq", f.freq}});
    }
    j["sup_norm"] = *sup_norm_;
  }
  return j.dump();
}

int PotentialSpec::min_dim() const {
  if (kind_ == Kind::polynomial) return static_cast<int>(terms_.front().powers.size());
  if (builtin_.name == "trig_product") {
    int d = 1;
    for (const auto& f : builtin_.factors) d = std::max(d, f.mode);
    return d;
  }
  return static_cast<int>(builtin_.coeffs.size());
}

std::optional<int> PotentialSpec::reach() const {
  if (kind_ != Kind::polynomial) return std::nullopt;
  int r = 0;
  for (const auto& t : terms_) {
    int deg = 0;
    for (int p : t.powers) deg += p;
    r = std::max(r, deg);
  }
  return r;
}

double PotentialSpec::evaluate(std::span<const double> x) const {
  require(static_cast<int>(x.size()) >= min_dim(), "point has too few coordinates");
  if (kind_ == Kind::polynomial) {
    double sum = 0.0;
    for (const auto& t : terms_) {
      double v = t.coeff;
      for (std::size_t k = 0; k < t.powers.size(); ++k) v *= std::pow(x[k], t.powers[k]);
      sum += v;
    }
    return sum;
  }
  if (builtin_.name == "trig_product") {
    double v = 1.0;
    for (const auto& f : builtin_.factors)
      v *= trig_eval(f.fn, f.freq * x[static_cast<std::size_t>(f.mode - 1)]);
    return v;
  }
  double y = 0.0;
  for (std::size_t k = 0; k < builtin_.coeffs.size(); ++k) y += builtin_.coeffs[k] * x[k];
  return builtin_.name == "sin_linear" ? std::sin(y) : std::tanh(y);
}

bool PotentialSpec::declared_odd() const {
  if (kind_ == Kind::polynomial) return false;
  if (builtin_.name == "trig_product") {
    int sines = 0;
    for (const auto& f : builtin_.factors) sines += f.fn == TrigKind::sin ? 1 : 0;
    return sines % 2 == 1;
  }
  return true;  // sin and tanh of a linear form
}

void validate_oddness(const PotentialSpec& spec, int d, std::uint64_t seed, int samples) {
  if (spec.min_dim() > d)
    fail(ErrorKind::dimension, "potential needs " + std::to_string(spec.min_dim()) +
                                   " coordinates, basis has " + std::to_string(d));
  if (spec.kind() == PotentialSpec::Kind::polynomial) {
    if (static_cast<int>(spec.terms().front().powers.size()) != d)
      fail(ErrorKind::dimension, "polynomial powers have length " +
                                     std::to_string(spec.terms().front().powers.size()) +
                                     ", basis has d=" + std::to_string(d));
    for (std::size_t i = 0; i < spec.terms().size(); ++i) {
      const auto& t = spec.terms()[i];
      int deg = 0;
      for (int p : t.powers) deg += p;
      if (deg % 2 == 0 && t.coeff != 0.0) {
        std::ostringstream msg;
        msg << "potential is not odd: term " << i << " (coeff " << t.coeff << ", powers "
            << powers_string(t.powers) << ") has even total degree " << deg;
        fail(ErrorKind::oddness_violation, msg.str());
      }
    }
    return;
  }
  if (spec.builtin_data().name != "trig_product" && static_cast<int>(spec.builtin_data().coeffs.size()) != d)
    fail(ErrorKind::dimension, spec.builtin_data().name + " has " +
                                   std::to_string(spec.builtin_data().coeffs.size()) +
                                   " coefficients, basis has d=" + std::to_string(d));
  if (!spec.declared_odd())
    fail(ErrorKind::oddness_violation,
         "potential is not odd: " + spec.builtin_data().name + " declares even parity");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  std::vector<double> x(static_cast<std::size_t>(d)), mx(x.size());
  for (int s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = dist(rng);
      mx[k] = -x[k];
    }
    const double defect = std::abs(spec.evaluate(x) + spec.evaluate(mx));
    if (defect > 1e-12) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "potential is not odd: |W(x)+W(-x)| = " << defect << " at x = (";
      for (std::size_t k = 0; k < x.size(); ++k) msg << (k ? "," : "") << x[k];
      msg << ")";
      fail(ErrorKind::oddness_violation, msg.str());
    }
  }
}

namespace {

double mode_frequency(const PotentialOptions& o, std::size_t k) {
  return o.mode_frequencies.empty() ? 1.0 : o.mode_frequencies.at(k);
}

// <m| x^a |n> for m, n <= n_max on the oscillator of frequency w. Computed in
// a basis extended by a quanta so truncation never touches the result.
Eigen::MatrixXd polynomial_1d(int n_max, int a, double w) {
  const int ext = n_max + a;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(ext + 1, ext + 1);
  const double scale = 1.0 / std::sqrt(2.0 * w);
  for (int n = 0; n < ext; ++n) x(n, n + 1) = x(n + 1, n) = std::sqrt(n + 1.0) * scale;
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(ext + 1, ext + 1);
  for (int i = 0; i < a; ++i) p = p * x;
  return p.topLeftCorner(n_max + 1, n_max + 1);
}

// <m| f(x) |n> by Gauss-Hermite on the oscillator of frequency w.
Eigen::MatrixXcd quadrature_1d(int n_max, const std::function<Complex(double)>& f, int order,
                               double w) {
  const auto rule = gauss_hermite(order);
  const Eigen::MatrixXd psi = hermite_functions(n_max, rule.nodes);
  Eigen::VectorXcd wf(order);
  const double s = 1.0 / std::sqrt(w);
  for (int i = 0; i < order; ++i)
    wf(i) = rule.scaled_weights[static_cast<std::size_t>(i)] * f(rule.nodes[static_cast<std::size_t>(i)] * s);
  return psi.cast<Complex>() * wf.asDiagonal() * psi.transpose().cast<Complex>();
}

// W(i,j) = prod_k M_k(n_k(i), n_k(j)).
Eigen::MatrixXcd tensor_assemble(const BasisTruncation& basis,
                                 const std::vector<Eigen::MatrixXcd>& factors) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& si = basis.state(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& sj = basis.state(static_cast<std::size_t>(j));
      Complex v(1.0, 0.0);
      for (std::size_t k = 0; k < factors.size(); ++k) v *= factors[k](si[k], sj[k]);
      out(i, j) = v;
    }
  }
  return out;
}

void zero_equal_parity(const BasisTruncation& basis, Eigen::MatrixXd& w) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (parity_of(basis.state(static_cast<std::size_t>(i))) ==
          parity_of(basis.state(static_cast<std::size_t>(j))))
        w(i, j) = 0.0;
}

Eigen::MatrixXd polynomial_matrix(const BasisTruncation& basis, const PotentialSpec& spec,
                                  const PotentialOptions& o) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  const int n_max = basis.n_max();
  std::map<std::pair<std::size_t, int>, Eigen::MatrixXd> cache;
  auto power = [&](std::size_t k, int a) -> const Eigen::MatrixXd& {
    auto key = std::make_pair(k, a);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, polynomial_1d(n_max, a, mode_frequency(o, k))).first;
    return it->second;
  };
  for (const auto& t : spec.terms()) {
    if (t.coeff == 0.0) continue;
    std::vector<const Eigen::MatrixXd*> f;
    for (std::size_t k = 0; k < t.powers.size(); ++k) f.push_back(&power(k, t.powers[k]));
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& si = basis.state(static_cast<std::size_t>(i));
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto& sj = basis.state(static_cast<std::size_t>(j));
        double v = t.coeff;
        for (std::size_t k = 0; k < f.size() && v != 0.0; ++k) v *= (*f[k])(si[k], sj[k]);
        w(i, j) += v;
      }
    }
  }
  return w;
}

Eigen::MatrixXd builtin_matrix(const BasisTruncation& basis, const PotentialSpec& spec,
                               const PotentialOptions& o, int order) {
  const auto& b = spec.builtin_data();
  const int n_max = basis.n_max();
  const auto d = static_cast<std::size_t>(basis.d());
  if (b.name == "sin_linear") {
    // sin(c.x) = Im prod_k exp(i c_k x_k).
    std::vector<Eigen::MatrixXcd> f;
    for (std::size_t k = 0; k < d; ++k) {
      const double c = b.coeffs[k];
      if (c == 0.0)
        f.push_back(Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1));
      else
        f.push_back(quadrature_1d(n_max, [c](double x) { return std::exp(Complex(0.0, c * x)); },
                                  order, mode_frequency(o, k)));
    }
    return tensor_assemble(basis, f).imag();
  }
  if (b.name == "trig_product") {
    std::vector<Eigen::MatrixXcd> f;
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<TrigFactor> mine;
      for (const auto& tf : b.factors)
        if (static_cast<std::size_t>(tf.mode - 1) == k) mine.push_back(tf);
      if (mine.empty()) {
        f.push_back(Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1));
        continue;
      }
      f.push_back(quadrature_1d(
          n_max,
          [mine](double x) {
            double v = 1.0;
            for (const auto& tf : mine) v *= trig_eval(tf.fn, tf.freq * x);
            return Complex(v, 0.0);
          },
          order, mode_frequency(o, k)));
    }
    return tensor_assemble(basis, f).real();
  }
  return quadrature_matrix(
             basis, [&spec](std::span<const double> x) { return spec.evaluate(x); }, order,
             o.mode_frequencies)
      .real();
}

}  // namespace

CMatrix quadrature_matrix(const BasisTruncation& basis,
                          const std::function<double(std::span<const double>)>& fn, int order,
                          const std::vector<double>& mode_frequencies) {
  const int d = basis.d();
  const auto rule = gauss_hermite(order);
  const Eigen::MatrixXd psi = hermite_functions(basis.n_max(), rule.nodes);
  std::size_t npts = 1;
  for (int k = 0; k < d; ++k) npts *= static_cast<std::size_t>(order);
  require(npts <= 50'000'000 / std::max<std::size_t>(basis.size(), 1),
          "tensor quadrature grid too large; lower n_max or quad_order");

  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd phi(n, static_cast<Eigen::Index>(npts));
  Eigen::VectorXd wf(static_cast<Eigen::Index>(npts));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (std::size_t p = 0; p < npts; ++p) {
    double weight = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double w = mode_frequencies.empty() ? 1.0 : mode_frequencies.at(k);
      x[k] = rule.nodes[static_cast<std::size_t>(idx[k])] / std::sqrt(w);
      weight *= rule.scaled_weights[static_cast<std::size_t>(idx[k])];
    }
    wf(static_cast<Eigen::Index>(p)) = weight * fn(x);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& s = basis.state(static_cast<std::size_t>(i));
      double v = 1.0;
      for (std::size_t k = 0; k < x.size(); ++k) v *= psi(s[k], idx[k]);
      phi(i, static_cast<Eigen::Index>(p)) = v;
    }
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (++idx[k] < order) break;
      idx[k] = 0;
    }
  }
  Eigen::MatrixXd m = phi * wf.asDiagonal() * phi.transpose();
  return m.cast<Complex>();
}

PotentialMatrix potential_matrix(const BasisTruncation& basis, const PotentialSpec& spec,
                                 const PotentialOptions& options) {
  validate_oddness(spec, basis.d(), options.seed);
  if (!options.mode_frequencies.empty())
    require(static_cast<int>(options.mode_frequencies.size()) == basis.d(),
            "mode frequency count does not match the basis");

  PotentialMatrix out{OperatorMatrix(CMatrix::Zero(1, 1), basis.id()), 0.0, false, 0};
  Eigen::MatrixXd w;
  if (spec.kind() == PotentialSpec::Kind::polynomial) {
    w = polynomial_matrix(basis, spec, options);
  } else {
    const int min_order = 2 * basis.n_max() + 8;
    const int order = options.quad_order == 0 ? min_order : options.quad_order;
    require(order >= min_order, "quad_order must be at least 2 n_max + 8 = " + std::to_string(min_order));
    out.quad_order = order;
    w = builtin_matrix(basis, spec, options, order);
    if (options.doubling_check) {
      const Eigen::MatrixXd w2 = builtin_matrix(basis, spec, options, 2 * order);
      out.quadrature_drift = (w2 - w).cwiseAbs().maxCoeff();
      out.quadrature_warning = out.quadrature_drift > 1e-10;
    }
  }
  w = 0.5 * (w + w.transpose()).eval();
  zero_equal_parity(basis, w);
  out.matrix = OperatorMatrix(w.cast<Complex>(), basis.id(), MatrixTag::real_symmetric);
  return out;
}

}  // namespace ptspec
