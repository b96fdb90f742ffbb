#pragma once

// Branch-exact complex logarithms and powers.
//
// Two fixed branches are used throughout the library:
//   upper     : arg in (0, 2*pi), cut along [0, +inf)
//   principal : arg in (-pi, pi), cut along (-inf, 0]
// A point within kCutTolerance of a cut is treated as lying on it and raises
// BranchError. Nothing is nudged off a cut; callers wanting a one-sided limit
// pass an explicit offset.

#include <complex>
#include <numbers>

namespace freeconv {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kCutTolerance = 1e-300;

/// Throws DomainError if either component is NaN or infinite.
void ensure_finite(Complex z, const char* where);

bool on_upper_cut(Complex z) noexcept;
bool on_principal_cut(Complex z) noexcept;

/// Argument in (0, 2*pi). Throws BranchError on [0, inf).
double arg_upper(Complex z);

/// Logarithm with imaginary part in (0, 2*pi).
Complex log_upper(Complex z);

/// Logarithm with imaginary part in (-pi, pi).
Complex log_principal(Complex z);

/// exp(p * log_upper(z)).
Complex pow_upper(Complex z, double p);

/// exp(p * log_principal(z)).
Complex pow_principal(Complex z, double p);

/// log_principal(1 + u), accurate when |u| is small.
Complex log1p_principal(Complex u);

/// exp(w) - 1, accurate when |w| is small.
Complex expm1(Complex w);

/// (1 + u)^p - 1 on the principal branch, without cancellation for small |u|.
Complex pow1p_minus_one(Complex u, double p);

/// Generalized binomial coefficient p (p-1) ... (p-n+1) / n!, by running product.
double binom_coeff(double p, unsigned n);

/// Partial sum sum_{k=0}^{order} C(p, k) w^k. Requires |w| < 1.
Complex binom_series(Complex w, double p, int order);

struct BinomialSum {
  Complex value;
  int order = 0;          ///< last index included
  double tail_bound = 0;  ///< first omitted term over (1 - |w|)
};

/// Adds terms until the next one is below eps * (1 - |w|) relative to the sum.
/// Throws ConvergenceError if more than kMaxBinomialOrder terms are needed.
BinomialSum binom_series_adaptive(Complex w, double p, double eps = 1e-16);

inline constexpr int kMaxBinomialOrder = 512;

}  // namespace freeconv
