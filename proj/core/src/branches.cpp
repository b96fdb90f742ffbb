#include "freeconv/branches.hpp"

#include <cmath>
#include <string>

#include "freeconv/errors.hpp"

namespace freeconv {

namespace {

std::string describe(Complex z) {
  return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

}  // namespace

void ensure_finite(Complex z, const char* where) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(where) + ": non-finite value " + describe(z));
  }
}

bool on_upper_cut(Complex z) noexcept {
  return std::abs(z) <= kCutTolerance ||
         (z.real() >= 0.0 && std::abs(z.imag()) <= kCutTolerance);
}

bool on_principal_cut(Complex z) noexcept {
  return std::abs(z) <= kCutTolerance ||
         (z.real() <= 0.0 && std::abs(z.imag()) <= kCutTolerance);
}

double arg_upper(Complex z) {
  ensure_finite(z, "arg_upper");
  if (on_upper_cut(z)) {
    throw BranchError("arg_upper: point " + describe(z) + " lies on [0, inf)");
  }
  double a = std::atan2(z.imag(), z.real());
  if (a <= 0.0) a += kTwoPi;
  return a;
}

Complex log_upper(Complex z) {
  return {std::log(std::abs(z)), arg_upper(z)};
}

Complex log_principal(Complex z) {
  ensure_finite(z, "log_principal");
  if (on_principal_cut(z)) {
    throw BranchError("log_principal: point " + describe(z) + " lies on (-inf, 0]");
  }
  return std::log(z);
}

Complex pow_upper(Complex z, double p) {
  const Complex out = std::exp(p * log_upper(z));
  ensure_finite(out, "pow_upper");
  return out;
}

Complex pow_principal(Complex z, double p) {
  const Complex out = std::exp(p * log_principal(z));
  ensure_finite(out, "pow_principal");
  return out;
}

Complex log1p_principal(Complex u) {
  ensure_finite(u, "log1p_principal");
  const double a = u.real();
  const double b = u.imag();
  if (on_principal_cut(Complex(1.0 + a, b))) {
    throw BranchError("log1p_principal: 1 + u = " + describe(Complex(1.0 + a, b)) +
                      " lies on (-inf, 0]");
  }
  double re;
  if (std::abs(u) < 0.5) {
    // log|1+u| = log1p(2a + a^2 + b^2) / 2
    re = 0.5 * std::log1p(a * (2.0 + a) + b * b);
  } else {
    re = std::log(std::abs(Complex(1.0 + a, b)));
  }
  return {re, std::atan2(b, 1.0 + a)};
}

Complex expm1(Complex w) {
  const double x = w.real();
  const double y = w.imag();
  const double half_sin = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * half_sin * half_sin;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

Complex pow1p_minus_one(Complex u, double p) {
  const Complex out = expm1(p * log1p_principal(u));
  ensure_finite(out, "pow1p_minus_one");
  return out;
}

double binom_coeff(double p, unsigned n) {
  double c = 1.0;
  for (unsigned k = 0; k < n; ++k) {
    c *= (p - static_cast<double>(k)) / static_cast<double>(k + 1);
  }
  return c;
}

Complex binom_series(Complex w, double p, int order) {
  if (std::abs(w) >= 1.0) {
    throw DomainError("binom_series: |w| >= 1 is outside the disk of convergence");
  }
  Complex sum = 1.0;
  Complex term = 1.0;
  for (int k = 0; k < order; ++k) {
    term *= w * ((p - k) / (k + 1.0));
    sum += term;
  }
  return sum;
}

BinomialSum binom_series_adaptive(Complex w, double p, double eps) {
  const double radius = std::abs(w);
  if (radius >= 1.0) {
    throw DomainError("binom_series_adaptive: |w| >= 1 is outside the disk of convergence");
  }
  const double gap = 1.0 - radius;
  Complex sum = 1.0;
  Complex term = 1.0;
  for (int k = 0; k < kMaxBinomialOrder; ++k) {
    const Complex next = term * w * ((p - k) / (k + 1.0));
    const double scale = std::max(1.0, std::abs(sum));
    if (std::abs(next) < eps * gap * scale) {
      return {sum, k, std::abs(next) / gap};
    }
    term = next;
    sum += term;
  }
  throw ConvergenceError("binom_series_adaptive: more than 512 terms required",
                         sum.real(), std::abs(term) / gap);
}

}  // namespace freeconv
