#pragma once

// Density recovery from Cauchy transforms:
//   density(x) = -(1/pi) lim_{y -> 0+} Im G(x + iy)
//   mass({x})  =         lim_{y -> 0+} iy G(x + iy)
// with Richardson extrapolation on a halving ladder y_k = y0 2^{-k}, plus a
// quadrature for integrands with declared algebraic endpoint behaviour and the
// closed-form densities used as oracles.

#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "freeconv/branches.hpp"

namespace freeconv {

using ComplexFunction = std::function<Complex(Complex)>;
using RealFunction = std::function<double(double)>;

struct LimitEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// Richardson extrapolation to h -> 0 of samples taken at h_k = h_0 / ratio^k,
/// assuming an expansion in integer powers of h. Returns the tableau entry with
/// the smallest increment. Throws ConvergenceError when no increment improves
/// on the first one.
LimitEstimate richardson_limit(std::span<const double> samples, double ratio = 2.0);

/// Extrapolated -(1/pi) Im G(x + iy) as y -> 0, using y_k = y0 2^{-k}, k = 0..levels.
LimitEstimate density_from_G(const ComplexFunction& G, double x, double y0 = 1e-2,
                             int levels = 8);

/// lim iy G(x + iy). Throws ConvergenceError if the imaginary part does not vanish.
double atom_mass(const ComplexFunction& G, double x, double y0 = 1e-2, int levels = 20);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Integral of f over (a, b). Near a finite endpoint f behaves like
/// (x - a)^left_exp or (b - x)^right_exp with exponent > -1; at an infinite
/// endpoint the exponent is the decay rate, f = O(|x|^exp) with exp < -1.
/// The endpoint behaviour is removed by a power substitution, then the
/// pieces are integrated by adaptive Gauss-Kronrod. Throws ConvergenceError
/// (carrying the best estimate) if the relative tolerance is not met.
double quadrature(const RealFunction& f, double a, double b, double left_exp = 0.0,
                  double right_exp = 0.0, double tol = 1e-11);

/// Beta B(1 - 1/r, 1 + 1/r): (r sin(pi/r) / pi) x^{-1/r} (1-x)^{1/r} on (0, 1). Requires r > 1.
double closed_beta_density(double r, double x);

/// Symmetric beta b_s: |x|^{-1/2} (sqrt(s) - |x|)^{1/2} / (pi sqrt(s)) on [-sqrt(s), sqrt(s)].
double closed_symmetric_beta_density(double s, double x);

/// Density of mu^1_{i,2}; x != 0.
double example_density_cauchy_mix(double x);

/// Density of mu^{1/2}_{-1,2}; x > 0.
double example_density_halfstable(double x);

/// Large-|x| expansion of the density of mu^1_{s,r} for non-real s:
/// -(r/pi) sum_{n>=1} C(1/r, n+1) R^n sin(n theta) / x^{n+1}, |x| > R = |s|.
double tail_series_density(double r, Complex s, double x, int terms = 200);

/// Grid of recovered densities. xs is strictly increasing; values are
/// nonnegative (entries in [-1e-9, 0) are clamped and counted).
class DensityTable {
 public:
  DensityTable() = default;
  DensityTable(std::vector<double> xs, std::vector<double> values, std::vector<double> errors,
               std::vector<double> y_ladder);

  const std::vector<double>& xs() const noexcept { return xs_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& errors() const noexcept { return errors_; }
  const std::vector<double>& y_ladder() const noexcept { return y_ladder_; }
  std::size_t clamped_count() const noexcept { return clamped_; }
  std::size_t size() const noexcept { return xs_.size(); }

  /// Columns x,<value_column>,err; each comment line is written as "# <line>".
  void write_csv(std::ostream& out, std::span<const std::string> comments = {},
                 const std::string& value_column = "density") const;

  /// Two whitespace-separated columns with '#'-prefixed comments.
  void write_plotdata(std::ostream& out, std::span<const std::string> comments = {}) const;

 private:
  std::vector<double> xs_;
  std::vector<double> values_;
  std::vector<double> errors_;
  std::vector<double> y_ladder_;
  std::size_t clamped_ = 0;
};

inline constexpr double kNegativeDensityTolerance = 1e-9;

/// Stieltjes inversion at every x (evaluated in parallel). A node where the
/// extrapolation fails keeps its best estimate with err at least that large.
DensityTable density_table(const ComplexFunction& G, std::span<const double> xs,
                           double y0 = 1e-2, int levels = 8);

/// Tabulates a closed-form density (error column zero).
DensityTable closed_form_table(const RealFunction& density, std::span<const double> xs);

/// n equally spaced points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Formats a double with 17 significant digits, "-0" printed as "0".
std::string format_double(double v);

}  // namespace freeconv
