#include "gaplab/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "gaplab/errors.hpp"

namespace gaplab {

namespace {

constexpr double kDomainSlack = 1e-12;

std::string format_real(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view token, std::string_view context) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  };
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() ||
      !std::isfinite(value)) {
    throw ParseError("invalid number '" + std::string(token) + "' in " + std::string(context));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double horner(const std::vector<double>& c, double x) noexcept {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

void validate_nodes(const std::vector<double>& xs, const std::vector<double>& vs) {
  if (xs.size() != vs.size()) throw ValidationError("sampled potential: node/value count mismatch");
  if (xs.size() < 2) throw ValidationError("sampled potential: need at least two nodes");
  if (xs.front() != -1.0 || xs.back() != 1.0)
    throw ValidationError("sampled potential: nodes must start at -1 and end at 1");
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (!(xs[k] > xs[k - 1]))
      throw ValidationError("sampled potential: abscissae not strictly increasing at x=" +
                            format_real(xs[k]));
  }
  for (double v : vs)
    if (!std::isfinite(v)) throw ValidationError("sampled potential: non-finite value");
}

// Portable uniform draws: the standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 engine_;
};

// Coefficients of c * (x - r)^m.
std::vector<double> shifted_power(double c, double r, int m) {
  std::vector<double> out(static_cast<std::size_t>(m + 1), 0.0);
  double binom = 1.0;
  for (int k = 0; k <= m; ++k) {
    out[static_cast<std::size_t>(k)] = c * binom * std::pow(-r, m - k);
    binom = binom * (m - k) / (k + 1);
  }
  return out;
}

void accumulate(std::vector<double>& into, const std::vector<double>& add) {
  if (into.size() < add.size()) into.resize(add.size(), 0.0);
  for (std::size_t k = 0; k < add.size(); ++k) into[k] += add[k];
}

}  // namespace

Potential Potential::constant(double c) {
  Potential p;
  p.kind_ = PotentialKind::constant;
  p.coeffs_ = {c};
  return p;
}

Potential Potential::linear(double slope) {
  Potential p;
  p.kind_ = PotentialKind::linear;
  p.coeffs_ = {0.0, slope};
  return p;
}

Potential Potential::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) throw ValidationError("polynomial potential needs a coefficient");
  for (double c : coefficients)
    if (!std::isfinite(c)) throw ValidationError("polynomial potential: non-finite coefficient");
  Potential p;
  p.kind_ = PotentialKind::polynomial;
  p.coeffs_ = std::move(coefficients);
  return p;
}

Potential Potential::abs_scaled(double c) {
  Potential p;
  p.kind_ = PotentialKind::abs_scaled;
  p.abs_scale_ = c;
  return p;
}

Potential Potential::sampled(std::vector<double> nodes, std::vector<double> values,
                             std::string source) {
  validate_nodes(nodes, values);
  Potential p;
  p.kind_ = PotentialKind::sampled;
  p.nodes_ = std::move(nodes);
  p.values_ = std::move(values);
  p.source_ = std::move(source);
  return p;
}

double Potential::operator()(double x) const {
  if (!(x >= -1.0 - kDomainSlack && x <= 1.0 + kDomainSlack))
    throw DomainError("potential evaluated outside [-1,1] at x=" + format_real(x));
  return value(x);
}

double Potential::value(double x) const noexcept {
  x = std::clamp(x, -1.0, 1.0);
  switch (kind_) {
    case PotentialKind::constant:
    case PotentialKind::linear:
    case PotentialKind::polynomial:
      return horner(coeffs_, x);
    case PotentialKind::abs_scaled:
      return abs_scale_ * std::abs(x);
    case PotentialKind::sampled: {
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
      std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - nodes_.begin()),
                                             nodes_.size() - 1);
      std::size_t lo = hi - 1;
      double t = (x - nodes_[lo]) / (nodes_[hi] - nodes_[lo]);
      return values_[lo] + t * (values_[hi] - values_[lo]);
    }
  }
  return 0.0;
}

std::vector<double> Potential::breakpoints() const {
  if (kind_ == PotentialKind::abs_scaled && abs_scale_ != 0.0) return {0.0};
  if (kind_ == PotentialKind::sampled && nodes_.size() > 2)
    return {nodes_.begin() + 1, nodes_.end() - 1};
  return {};
}

Potential Potential::scaled(double t) const {
  Potential out = *this;
  for (double& c : out.coeffs_) c *= t;
  out.abs_scale_ *= t;
  for (double& v : out.values_) v *= t;
  out.source_.clear();
  return out;
}

Potential Potential::plus_affine(double slope, double intercept) const {
  switch (kind_) {
    case PotentialKind::constant:
      if (slope == 0.0) return constant(coeffs_[0] + intercept);
      if (coeffs_[0] + intercept == 0.0) return linear(slope);
      return polynomial({coeffs_[0] + intercept, slope});
    case PotentialKind::linear:
      if (intercept == 0.0) return linear(coeffs_[1] + slope);
      return polynomial({intercept, coeffs_[1] + slope});
    case PotentialKind::polynomial: {
      auto c = coeffs_;
      if (c.size() < 2) c.resize(2, 0.0);
      c[0] += intercept;
      c[1] += slope;
      return polynomial(std::move(c));
    }
    case PotentialKind::abs_scaled:
      if (slope == 0.0 && intercept == 0.0) return *this;
      return as_sampled().plus_affine(slope, intercept);
    case PotentialKind::sampled: {
      auto v = values_;
      for (std::size_t k = 0; k < v.size(); ++k) v[k] += slope * nodes_[k] + intercept;
      return sampled(nodes_, std::move(v));
    }
  }
  return *this;
}

Potential Potential::reflected() const {
  switch (kind_) {
    case PotentialKind::constant:
    case PotentialKind::abs_scaled:
      return *this;
    case PotentialKind::linear:
      return linear(-coeffs_[1]);
    case PotentialKind::polynomial: {
      auto c = coeffs_;
      for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
      return polynomial(std::move(c));
    }
    case PotentialKind::sampled: {
      std::vector<double> xs(nodes_.size()), vs(values_.size());
      for (std::size_t k = 0; k < nodes_.size(); ++k) {
        xs[k] = -nodes_[nodes_.size() - 1 - k];
        vs[k] = values_[nodes_.size() - 1 - k];
      }
      return sampled(std::move(xs), std::move(vs));
    }
  }
  return *this;
}

Potential Potential::as_sampled() const {
  switch (kind_) {
    case PotentialKind::sampled:
      return *this;
    case PotentialKind::abs_scaled:
      return sampled({-1.0, 0.0, 1.0}, {abs_scale_, 0.0, abs_scale_});
    case PotentialKind::constant:
    case PotentialKind::linear:
      return sampled({-1.0, 1.0}, {value(-1.0), value(1.0)});
    case PotentialKind::polynomial:
      break;
  }
  throw ValidationError("polynomial potential has no exact sampled form");
}

std::string Potential::serialize() const {
  switch (kind_) {
    case PotentialKind::constant:
      return "const:" + format_real(coeffs_[0]);
    case PotentialKind::linear:
      return "linear:" + format_real(coeffs_[1]);
    case PotentialKind::polynomial: {
      std::string out = "poly:";
      for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (k) out += ',';
        out += format_real(coeffs_[k]);
      }
      return out;
    }
    case PotentialKind::abs_scaled:
      return "abs:" + format_real(abs_scale_);
    case PotentialKind::sampled: {
      if (!source_.empty()) return "samples:" + source_;
      std::string out = "pwl:";
      for (std::size_t k = 0; k < nodes_.size(); ++k) {
        if (k) out += ',';
        out += format_real(nodes_[k]) + "/" + format_real(values_[k]);
      }
      return out;
    }
  }
  return {};
}

Potential parse_potential(std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("potential spec '" + std::string(spec) + "' lacks '<kind>:'");
  auto kind = spec.substr(0, colon);
  auto body = spec.substr(colon + 1);
  std::string ctx(spec);
  if (kind == "const") return Potential::constant(parse_real(body, ctx));
  if (kind == "linear") return Potential::linear(parse_real(body, ctx));
  if (kind == "abs") return Potential::abs_scaled(parse_real(body, ctx));
  if (kind == "poly") {
    std::vector<double> c;
    for (auto tok : split(body, ',')) c.push_back(parse_real(tok, ctx));
    return Potential::polynomial(std::move(c));
  }
  if (kind == "samples") {
    if (body.empty()) throw ParseError("samples: missing path");
    return read_sampled_potential(std::string(body));
  }
  if (kind == "pwl") {
    std::vector<double> xs, vs;
    for (auto tok : split(body, ',')) {
      auto slash = tok.find('/');
      if (slash == std::string_view::npos)
        throw ParseError("pwl node '" + std::string(tok) + "' is not <x>/<value>");
      xs.push_back(parse_real(tok.substr(0, slash), ctx));
      vs.push_back(parse_real(tok.substr(slash + 1), ctx));
    }
    return Potential::sampled(std::move(xs), std::move(vs));
  }
  throw ParseError("unknown potential kind '" + std::string(kind) + "'");
}

Potential read_sampled_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sampled potential '" + path + "'");
  std::vector<double> xs, vs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF)
      line.erase(0, 3);  // UTF-8 BOM
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cols = split(line, ',');
    if (cols.size() != 2)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected two columns");
    try {
      double x = parse_real(cols[0], path);
      double v = parse_real(cols[1], path);
      xs.push_back(x);
      vs.push_back(v);
    } catch (const ParseError&) {
      if (lineno == 1 && xs.empty()) continue;  // header
      throw;
    }
  }
  return Potential::sampled(std::move(xs), std::move(vs), path);
}

double eval_potential(const Potential& v, double x) { return v(x); }

double shape_tolerance(const Potential& v) noexcept {
  return v.kind() == PotentialKind::sampled ? kSampledShapeTol : kAnalyticShapeTol;
}

namespace {

PropertyFlags classify_quadratic(double c1, double c2, double tol) {
  PropertyFlags f;
  f.symmetric = std::abs(c1) <= tol;
  f.convex = c2 >= -tol;
  f.affine = std::abs(c2) <= tol;
  if (f.affine) {
    f.single_well = true;
    f.well_point = f.symmetric ? 0.0 : (c1 > 0 ? -1.0 : 1.0);
  } else {
    double vertex = -c1 / (2.0 * c2);
    if (c2 > 0) {
      f.single_well = true;
      f.well_point = std::clamp(vertex, -1.0, 1.0);
    } else if (vertex <= -1.0) {
      f.single_well = true;  // decreasing on I
      f.well_point = 1.0;
    } else if (vertex >= 1.0) {
      f.single_well = true;
      f.well_point = -1.0;
    }
  }
  return f;
}

// Non-increasing then non-decreasing about the first minimiser.
bool single_well_sequence(const std::vector<double>& xs, const std::vector<double>& vs,
                          double tol, double& well) {
  auto m = static_cast<std::size_t>(std::min_element(vs.begin(), vs.end()) - vs.begin());
  for (std::size_t k = 0; k < m; ++k)
    if (vs[k + 1] > vs[k] + tol) return false;
  for (std::size_t k = m; k + 1 < vs.size(); ++k)
    if (vs[k + 1] < vs[k] - tol) return false;
  well = xs[m];
  return true;
}

}  // namespace

PropertyFlags classify_potential(const Potential& v, int n) {
  if (n < 3) throw ValidationError("classify_potential: grid size must be >= 3");
  const double tol = shape_tolerance(v);
  switch (v.kind()) {
    case PotentialKind::constant:
      return {true, true, 0.0, true, true};
    case PotentialKind::linear:
      return classify_quadratic(v.coefficients()[1], 0.0, tol);
    case PotentialKind::abs_scaled: {
      double c = v.abs_scale();
      if (std::abs(c) <= tol) return {true, true, 0.0, true, true};
      return {true, c > 0, 0.0, c > 0, false};
    }
    case PotentialKind::polynomial: {
      auto c = v.coefficients();
      while (c.size() > 1 && c.back() == 0.0) c.pop_back();
      if (c.size() <= 3) {
        c.resize(3, 0.0);
        return classify_quadratic(c[1], c[2], tol);
      }
      PropertyFlags f;
      f.symmetric = true;
      for (std::size_t k = 1; k < c.size(); k += 2)
        if (std::abs(c[k]) > tol) f.symmetric = false;
      f.affine = true;
      for (std::size_t k = 2; k < c.size(); ++k)
        if (std::abs(c[k]) > tol) f.affine = false;
      std::vector<double> second;
      for (std::size_t k = 2; k < c.size(); ++k)
        second.push_back(static_cast<double>(k * (k - 1)) * c[k]);
      std::vector<double> xs(static_cast<std::size_t>(n)), vs(xs.size());
      f.convex = true;
      for (int k = 0; k < n; ++k) {
        double x = -1.0 + 2.0 * k / (n - 1);
        xs[static_cast<std::size_t>(k)] = x;
        vs[static_cast<std::size_t>(k)] = v.value(x);
        if (horner(second, x) < -tol) f.convex = false;
      }
      f.single_well = single_well_sequence(xs, vs, tol, f.well_point);
      return f;
    }
    case PotentialKind::sampled: {
      const auto& xs = v.nodes();
      const auto& vs = v.values();
      PropertyFlags f;
      f.symmetric = true;
      for (double x : xs) {
        if (std::abs(v.value(-x) - v.value(x)) > tol) f.symmetric = false;
      }
      f.single_well = single_well_sequence(xs, vs, tol, f.well_point);
      f.convex = true;
      f.affine = true;
      for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
        double left = (vs[k] - vs[k - 1]) / (xs[k] - xs[k - 1]);
        double right = (vs[k + 1] - vs[k]) / (xs[k + 1] - xs[k]);
        double dd = (right - left) / (xs[k + 1] - xs[k - 1]);
        if (dd < -tol) f.convex = false;
        if (std::abs(dd) > tol) f.affine = false;
      }
      return f;
    }
  }
  return {};
}

Line secant_line(const Potential& v, double xi_minus, double xi_plus) {
  if (!(xi_minus < xi_plus))
    throw ValidationError("secant_line: degenerate chord [" + format_real(xi_minus) + ", " +
                          format_real(xi_plus) + "]");
  double lo = v(xi_minus);
  double hi = v(xi_plus);
  Line line;
  line.slope = (hi - lo) / (xi_plus - xi_minus);
  line.intercept = lo - line.slope * xi_minus;
  return line;
}

double potential_amplitude(const Potential& v, int n) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int k = 0; k < n; ++k) {
    double y = v.value(-1.0 + 2.0 * k / (n - 1));
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  for (double x : v.breakpoints()) {
    lo = std::min(lo, v.value(x));
    hi = std::max(hi, v.value(x));
  }
  return hi - lo;
}

namespace {

Potential symmetric_member(Rng& rng, int slot, double amp) {
  switch (slot % 3) {
    case 0: {
      // c(|x - s| + |x + s|)/2: flat floor on [-s, s].
      double s = rng.uniform(0.05, 0.7);
      double c = rng.uniform(std::min(1.0, amp), amp);
      return Potential::sampled({-1.0, -s, s, 1.0}, {c, c * s, c * s, c});
    }
    case 1: {
      std::vector<double> c(7, 0.0);
      c[0] = rng.uniform(-amp, amp);
      for (std::size_t k = 2; k <= 6; k += 2) c[k] = rng.uniform(0.0, amp);
      if (c[2] + c[4] + c[6] < 0.5) c[2] += 0.5;
      return Potential::polynomial(std::move(c));
    }
    default:
      return Potential::abs_scaled(rng.uniform(std::min(0.5, amp), amp));
  }
}

Potential convex_member(Rng& rng, int slot, double amp) {
  switch (slot % 3) {
    case 0: {
      // Sum of even powers of linear factors plus a tilt.
      std::vector<double> c{0.0, rng.uniform(-amp, amp)};
      int terms = 1 + rng.below(2);
      for (int j = 0; j < terms; ++j) {
        int power = 2 * (1 + rng.below(2));
        double weight = rng.uniform(std::min(0.5, amp), amp);
        double root = rng.uniform(-1.5, 1.5);
        accumulate(c, shifted_power(weight, root, power));
      }
      return Potential::polynomial(std::move(c));
    }
    case 1: {
      double s = rng.uniform(-0.8, 0.8);
      double c = rng.uniform(std::min(0.5, amp), amp);
      double tilt = rng.uniform(-amp / 2, amp / 2);
      return Potential::sampled({-1.0, s, 1.0},
                                {c * (1.0 + s) - tilt, tilt * s, c * (1.0 - s) + tilt});
    }
    default:
      return Potential::abs_scaled(rng.uniform(std::min(0.5, amp), amp))
          .plus_affine(rng.uniform(-amp / 2, amp / 2), 0.0);
  }
}

}  // namespace

std::vector<Potential> random_family(FamilyKind kind, std::uint64_t seed, int count,
                                     double amplitude) {
  if (count < 1) throw ValidationError("random_family: count must be >= 1");
  Rng rng(seed);
  std::vector<Potential> out;
  out.reserve(static_cast<std::size_t>(count));
  int slot = 0;
  while (static_cast<int>(out.size()) < count) {
    Potential p = kind == FamilyKind::symmetric_single_well
                      ? symmetric_member(rng, slot, amplitude)
                      : convex_member(rng, slot, amplitude);
    ++slot;
    auto f = classify_potential(p);
    bool ok = kind == FamilyKind::symmetric_single_well ? (f.symmetric && f.single_well)
                                                        : (f.convex && !f.affine);
    if (ok) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace gaplab
