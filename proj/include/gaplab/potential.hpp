#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gaplab {

enum class PotentialKind { constant, linear, polynomial, abs_scaled, sampled };

/// A continuous potential V on [-1, 1].
///
/// Analytic kinds are stored as power-series coefficients (constant and linear
/// are degree-0/1 polynomials with a distinguished kind). `abs_scaled` is
/// c|x|. `sampled` holds strictly increasing nodes spanning [-1, 1] and is
/// evaluated by linear interpolation.
class Potential {
 public:
  static Potential constant(double c);
  /// V(x) = slope * x.
  static Potential linear(double slope);
  static Potential polynomial(std::vector<double> coefficients);
  static Potential abs_scaled(double c);
  /// Throws ValidationError unless nodes are strictly increasing from -1 to 1.
  static Potential sampled(std::vector<double> nodes, std::vector<double> values,
                           std::string source = {});

  PotentialKind kind() const noexcept { return kind_; }

  /// Checked evaluation; throws DomainError outside [-1, 1].
  double operator()(double x) const;
  /// Evaluation for integrator stage points; clamps x into [-1, 1].
  double value(double x) const noexcept;

  /// Polynomial coefficients c0..cd (constant, linear, polynomial kinds).
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  /// Scale factor of c|x|.
  double abs_scale() const noexcept { return abs_scale_; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& values() const noexcept { return values_; }
  /// Origin of sampled data: a file path, or empty for inline data.
  const std::string& source() const noexcept { return source_; }

  /// Interior points where V is not smooth (kinks of |x| and of sampled data).
  std::vector<double> breakpoints() const;

  /// t * V.
  Potential scaled(double t) const;
  /// V + slope * x + intercept.
  Potential plus_affine(double slope, double intercept) const;
  /// x -> V(-x).
  Potential reflected() const;
  /// Same shape expressed as sampled data when it is piecewise linear.
  Potential as_sampled() const;

  /// Canonical text form accepted by parse_potential.
  std::string serialize() const;

  friend bool operator==(const Potential&, const Potential&) = default;

 private:
  Potential() = default;

  PotentialKind kind_ = PotentialKind::constant;
  std::vector<double> coeffs_;
  double abs_scale_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::string source_;
};

/// Parses `const:<c> | linear:<a> | poly:<c0>,<c1>,... | abs:<c> |
/// samples:<path> | pwl:<x0>/<v0>,<x1>/<v1>,...`.
Potential parse_potential(std::string_view spec);

/// Two-column CSV (x,value), optional header.
Potential read_sampled_potential(const std::string& path);

double eval_potential(const Potential& v, double x);

struct PropertyFlags {
  bool symmetric = false;
  bool single_well = false;
  /// Split point of a single-well potential; endpoints for monotone ones.
  double well_point = 0.0;
  bool convex = false;
  bool affine = false;
};

inline constexpr double kAnalyticShapeTol = 1e-10;
inline constexpr double kSampledShapeTol = 1e-8;

double shape_tolerance(const Potential& v) noexcept;

/// Requires n >= 3.
PropertyFlags classify_potential(const Potential& v, int n = 2049);

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double x) const noexcept { return slope * x + intercept; }
};

/// Chord of V through (xi_minus, V(xi_minus)) and (xi_plus, V(xi_plus)).
Line secant_line(const Potential& v, double xi_minus, double xi_plus);

enum class FamilyKind { symmetric_single_well, convex };

/// Deterministic test corpus; every member classifies with the requested shape.
std::vector<Potential> random_family(FamilyKind kind, std::uint64_t seed, int count,
                                     double amplitude = 10.0);

/// max V - min V over a uniform grid.
double potential_amplitude(const Potential& v, int n = 2049);

}  // namespace gaplab
