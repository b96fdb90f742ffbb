#include "freeconv/stieltjes.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "freeconv/errors.hpp"
#include "freeconv/parallel.hpp"

namespace freeconv {

LimitEstimate richardson_limit(std::span<const double> samples, double ratio) {
  const std::size_t n = samples.size();
  if (n == 0) throw DomainError("richardson_limit: no samples");
  if (n == 1) return {samples[0], kInfinity};
  for (const double v : samples) {
    if (!std::isfinite(v)) throw DomainError("richardson_limit: non-finite sample");
  }

  std::vector<std::vector<double>> table(n);
  table[0].push_back(samples[0]);
  double best = samples[n - 1];
  double best_err = kInfinity;
  for (std::size_t k = 1; k < n; ++k) {
    table[k].push_back(samples[k]);
    double factor = ratio;
    for (std::size_t j = 1; j <= k; ++j) {
      const double prev = table[k][j - 1];
      const double value = prev + (prev - table[k - 1][j - 1]) / (factor - 1.0);
      table[k].push_back(value);
      factor *= ratio;
      const double e = std::max(std::abs(value - prev), std::abs(value - table[k - 1][j - 1]));
      if (e < best_err) {
        best_err = e;
        best = value;
      }
    }
  }
  const double first = std::abs(samples[1] - samples[0]);
  if (best_err > first && first > 1e-14 * std::max(1.0, std::abs(best))) {
    throw ConvergenceError("richardson_limit: increments fail to decrease", best, best_err);
  }
  return {best, best_err};
}

LimitEstimate density_from_G(const ComplexFunction& G, double x, double y0, int levels) {
  if (!(y0 > 0.0) || levels < 1) {
    throw DomainError("density_from_G: need y0 > 0 and at least one level");
  }
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(levels) + 1);
  double y = y0;
  for (int k = 0; k <= levels; ++k, y *= 0.5) {
    samples.push_back(-G(Complex(x, y)).imag() / kPi);
  }
  return richardson_limit(samples);
}

double atom_mass(const ComplexFunction& G, double x, double y0, int levels) {
  if (!(y0 > 0.0) || levels < 1) {
    throw DomainError("atom_mass: need y0 > 0 and at least one level");
  }
  std::vector<double> re;
  std::vector<double> im;
  double y = y0;
  for (int k = 0; k <= levels; ++k, y *= 0.5) {
    const Complex v = Complex(0.0, y) * G(Complex(x, y));
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  const LimitEstimate mass = richardson_limit(re);
  const LimitEstimate residual = richardson_limit(im);
  // sqrt(y) approach (edge singularities) leaves a visible but uncertain remainder
  if (std::abs(residual.value) > 1e-6 + 10.0 * residual.error) {
    throw ConvergenceError("atom_mass: imaginary part of iy G(x+iy) does not vanish", mass.value,
                           std::abs(residual.value));
  }
  return mass.value;
}

namespace {

constexpr unsigned kMaxDepth = 18;

struct Piece {
  double value = 0.0;
  double error = 0.0;
};

// Integer power that turns an endpoint factor t^p into at least t^1 after t = u^m.
int substitution_power(double p) {
  if (p == 0.0 || p >= 1.0) return 1;
  return std::max(1, static_cast<int>(std::ceil(2.0 / (1.0 + p))));
}

Piece integrate_unit(const std::function<double(double)>& g, double tol) {
  Piece piece;
  piece.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      g, 0.0, 1.0, kMaxDepth, tol, &piece.error);
  return piece;
}

// Integral over (a, a + width) with f ~ (x - a)^p near a.
Piece integrate_from_left(const RealFunction& f, double a, double width, double p, double tol) {
  const int m = substitution_power(p);
  return integrate_unit(
      [&](double u) {
        const double um1 = std::pow(u, m - 1);
        return f(a + width * um1 * u) * width * m * um1;
      },
      tol);
}

// Integral over (b - width, b) with f ~ (b - x)^p near b.
Piece integrate_from_right(const RealFunction& f, double b, double width, double p, double tol) {
  const int m = substitution_power(p);
  return integrate_unit(
      [&](double u) {
        const double um1 = std::pow(u, m - 1);
        return f(b - width * um1 * u) * width * m * um1;
      },
      tol);
}

// Integral over (c, +inf) (direction = +1) or (-inf, c) (direction = -1)
// with f = O(|x|^q), q < -1, via x = c + direction * L (u^{-k} - 1).
Piece integrate_tail(const RealFunction& f, double c, double direction, double q, double tol) {
  if (!(q < -1.0)) {
    throw DomainError("quadrature: decay exponent at an infinite endpoint must be < -1");
  }
  const int k = std::max(1, static_cast<int>(std::ceil(2.0 / (-q - 1.0))));
  const double scale = std::max(1.0, std::abs(c));
  return integrate_unit(
      [&](double u) {
        if (u == 0.0) return 0.0;
        const double uk = std::pow(u, -k);
        const double x = c + direction * scale * (uk - 1.0);
        if (!std::isfinite(x)) return 0.0;
        return f(x) * scale * k * uk / u;
      },
      tol);
}

}  // namespace

double quadrature(const RealFunction& f, double a, double b, double left_exp, double right_exp,
                  double tol) {
  if (std::isnan(a) || std::isnan(b)) throw DomainError("quadrature: NaN endpoint");
  if (a == b) return 0.0;
  if (a > b) return -quadrature(f, b, a, right_exp, left_exp, tol);
  const bool left_inf = std::isinf(a);
  const bool right_inf = std::isinf(b);
  if ((!left_inf && left_exp <= -1.0) || (!right_inf && right_exp <= -1.0)) {
    throw DomainError("quadrature: endpoint exponents must exceed -1");
  }

  // Each piece gets a share of the tolerance.
  const double piece_tol = tol / 4.0;
  Piece total;
  auto add = [&](const Piece& p) {
    total.value += p.value;
    total.error += p.error;
  };

  if (left_inf && right_inf) {
    add(integrate_tail(f, 0.0, -1.0, left_exp, piece_tol));
    add(integrate_tail(f, 0.0, 1.0, right_exp, piece_tol));
  } else if (right_inf) {
    const double c = a + std::max(1.0, std::abs(a));
    add(integrate_from_left(f, a, c - a, left_exp, piece_tol));
    add(integrate_tail(f, c, 1.0, right_exp, piece_tol));
  } else if (left_inf) {
    const double c = b - std::max(1.0, std::abs(b));
    add(integrate_from_right(f, b, b - c, right_exp, piece_tol));
    add(integrate_tail(f, c, -1.0, left_exp, piece_tol));
  } else {
    const double half = 0.5 * (b - a);
    add(integrate_from_left(f, a, half, left_exp, piece_tol));
    add(integrate_from_right(f, b, half, right_exp, piece_tol));
  }

  if (!std::isfinite(total.value)) {
    throw ConvergenceError("quadrature: non-finite result", total.value, total.error);
  }
  const double allowed = std::max(tol * std::abs(total.value), 1e-15);
  if (total.error > allowed) {
    throw ConvergenceError("quadrature: tolerance not met", total.value, total.error);
  }
  return total.value;
}

double closed_beta_density(double r, double x) {
  if (!(r > 1.0) || !std::isfinite(r)) {
    throw DomainError("closed_beta_density: r must satisfy 1 < r < inf");
  }
  if (!(x > 0.0 && x < 1.0)) return 0.0;
  return r * std::sin(kPi / r) / kPi * std::pow(x, -1.0 / r) * std::pow(1.0 - x, 1.0 / r);
}

double closed_symmetric_beta_density(double s, double x) {
  if (!(s > 0.0)) throw DomainError("closed_symmetric_beta_density: s must be positive");
  if (x == 0.0) throw DomainError("closed_symmetric_beta_density: singular at x = 0");
  const double root = std::sqrt(s);
  const double ax = std::abs(x);
  if (ax >= root) return 0.0;
  return std::sqrt((root - ax) / ax) / (kPi * root);
}

double example_density_cauchy_mix(double x) {
  if (x == 0.0 || !std::isfinite(x)) {
    throw DomainError("example_density_cauchy_mix: x must be finite and nonzero");
  }
  // sqrt(1 + sqrt(1 + v)) - sqrt(2) with v = 1/x^2, rewritten without cancellation
  const double v = 1.0 / (x * x);
  const double q = std::sqrt(1.0 + v);
  const double a_minus_2 = v / (1.0 + q);  // (1 + q) - 2
  const double diff = a_minus_2 / (std::sqrt(1.0 + q) + std::sqrt(2.0));
  return std::sqrt(2.0) / kPi * diff;
}

double example_density_halfstable(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("example_density_halfstable: x must be positive and finite");
  }
  // a - b with a = 1/sqrt(2x), b = sqrt(sqrt(1 + u) - 1), u = 1/x:
  // a^2 - b^2 = u^2 / (2 (1 + sqrt(1 + u))^2)
  const double u = 1.0 / x;
  const double q = std::sqrt(1.0 + u);
  const double a = 1.0 / std::sqrt(2.0 * x);
  const double b = std::sqrt(u / (1.0 + q));
  const double diff = u * u / (2.0 * (1.0 + q) * (1.0 + q)) / (a + b);
  return 4.0 * std::sqrt(2.0) / kPi * diff;
}

double tail_series_density(double r, Complex s, double x, int terms) {
  const double radius = std::abs(s);
  if (!(std::abs(x) > radius)) {
    throw DomainError("tail_series_density: requires |x| > |s|");
  }
  const double theta = std::arg(s);
  double sum = 0.0;
  double ratio_power = 1.0 / x;  // R^n / x^{n+1} at n = 0
  for (int n = 1; n <= terms; ++n) {
    ratio_power *= radius / x;
    sum += binom_coeff(1.0 / r, static_cast<unsigned>(n + 1)) * ratio_power * std::sin(n * theta);
  }
  return -r / kPi * sum;
}

DensityTable::DensityTable(std::vector<double> xs, std::vector<double> values,
                           std::vector<double> errors, std::vector<double> y_ladder)
    : xs_(std::move(xs)),
      values_(std::move(values)),
      errors_(std::move(errors)),
      y_ladder_(std::move(y_ladder)) {
  if (xs_.size() != values_.size() || xs_.size() != errors_.size()) {
    throw DomainError("DensityTable: column lengths differ");
  }
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    if (!(xs_[i] > xs_[i - 1])) throw DomainError("DensityTable: xs must be strictly increasing");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double& v = values_[i];
    if (!std::isfinite(v)) {
      throw DomainError("DensityTable: non-finite density at x = " + format_double(xs_[i]));
    }
    if (v < 0.0) {
      if (v < -kNegativeDensityTolerance) {
        throw DomainError("DensityTable: negative density " + format_double(v) +
                          " at x = " + format_double(xs_[i]));
      }
      v = 0.0;
      ++clamped_;
    }
  }
}

void DensityTable::write_csv(std::ostream& out, std::span<const std::string> comments,
                             const std::string& value_column) const {
  for (const auto& line : comments) out << "# " << line << '\n';
  out << "x," << value_column << ",err\n";
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    out << format_double(xs_[i]) << ',' << format_double(values_[i]) << ','
        << format_double(errors_[i]) << '\n';
  }
}

void DensityTable::write_plotdata(std::ostream& out, std::span<const std::string> comments) const {
  for (const auto& line : comments) out << "# " << line << '\n';
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    out << format_double(xs_[i]) << ' ' << format_double(values_[i]) << '\n';
  }
}

DensityTable density_table(const ComplexFunction& G, std::span<const double> xs, double y0,
                           int levels) {
  std::vector<double> values(xs.size());
  std::vector<double> errors(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    // a node on a singularity should not sink the whole table; its err column says so
    try {
      const LimitEstimate est = density_from_G(G, xs[i], y0, levels);
      values[i] = est.value;
      errors[i] = est.error;
    } catch (const ConvergenceError& e) {
      values[i] = std::max(0.0, e.best_estimate());
      errors[i] = std::max(e.error_estimate(), std::abs(e.best_estimate()));
    }
  });
  std::vector<double> ladder;
  double y = y0;
  for (int k = 0; k <= levels; ++k, y *= 0.5) ladder.push_back(y);
  return DensityTable({xs.begin(), xs.end()}, std::move(values), std::move(errors),
                      std::move(ladder));
}

DensityTable closed_form_table(const RealFunction& density, std::span<const double> xs) {
  std::vector<double> values;
  values.reserve(xs.size());
  for (const double x : xs) values.push_back(density(x));
  return DensityTable({xs.begin(), xs.end()}, std::move(values),
                      std::vector<double>(xs.size(), 0.0), {});
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  if (n == 0) return out;
  if (n == 1) return {lo};
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.back() = hi;
  return out;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace freeconv
