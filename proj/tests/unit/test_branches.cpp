#include <doctest.h>

#include <cmath>

#include "freeconv/branches.hpp"
#include "freeconv/errors.hpp"
#include "property.hpp"

using namespace freeconv;

namespace {

bool near(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("log_upper picks arg in (0, 2pi)") {
  CHECK(near(log_upper(-1.0), Complex(0, kPi), 1e-15));
  CHECK(near(log_upper(Complex(0, 1)), Complex(0, kPi / 2), 1e-15));
  CHECK(near(log_upper(Complex(0, -1)), Complex(0, 1.5 * kPi), 1e-15));
}

TEST_CASE("log_upper rejects the nonnegative axis") {
  CHECK_THROWS_AS(log_upper(0.0), BranchError);
  CHECK_THROWS_AS(log_upper(2.5), BranchError);
  CHECK_THROWS_AS(log_upper(Complex(1.0, 1e-301)), BranchError);
  CHECK_NOTHROW(log_upper(Complex(1.0, 1e-200)));
}

TEST_CASE("log_principal") {
  CHECK(near(log_principal(1.0), 0.0, 0.0));
  CHECK(near(log_principal(Complex(0, 1)), Complex(0, kPi / 2), 1e-15));
  CHECK(near(log_principal(Complex(0, -1)), Complex(0, -kPi / 2), 1e-15));
  CHECK_THROWS_AS(log_principal(-3.0), BranchError);
  CHECK_THROWS_AS(log_principal(0.0), BranchError);
}

TEST_CASE("pow_upper examples") {
  CHECK(near(pow_upper(-1.0, 2.0), 1.0, 1e-15));
  CHECK(near(pow_upper(Complex(0, 1), 0.5), Complex(1, 1) / std::sqrt(2.0), 1e-15));
  CHECK(near(pow_upper(Complex(0, -1), 0.5), Complex(-1, 1) / std::sqrt(2.0), 1e-15));
}

TEST_CASE("pow_principal examples") {
  CHECK(near(pow_principal(4.0, 0.5), 2.0, 1e-15));
  for (double p : {-3.5, 0.1, 2.0, 7.25}) CHECK(near(pow_principal(1.0, p), 1.0, 0.0));
  CHECK(near(pow_principal(Complex(0, 1), 2.0), -1.0, 1e-15));
}

TEST_CASE("binom_coeff") {
  CHECK(binom_coeff(0.5, 2) == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(binom_coeff(0.3, 0) == 1.0);
  CHECK(binom_coeff(0.5, 1) == 0.5);
  // integer p: exact and eventually zero
  CHECK(binom_coeff(5.0, 2) == 10.0);
  CHECK(binom_coeff(3.0, 4) == 0.0);
}

TEST_CASE("binom_series") {
  for (double p : {0.3, -2.0, 1.7}) CHECK(binom_series(0.0, p, 7) == Complex(1.0));
  CHECK(near(binom_series(0.5, 1.0, 1), 1.5, 0.0));
  CHECK(near(binom_series(0.5, 1.0, 9), 1.5, 0.0));
  CHECK(near(binom_series(0.3, 1.0 / 3.0, 40), std::cbrt(1.3), 1e-12));
  CHECK_THROWS_AS(binom_series(Complex(0.6, 0.8), 0.5, 10), DomainError);
}

TEST_CASE("binom_series_adaptive agrees with pow_principal") {
  proptest::for_all(200, 11, [](proptest::Gen& g) {
    const Complex w = g.polar(1e-6, 0.9, -kPi, kPi);
    const double p = g.uniform(-3.0, 3.0);
    const BinomialSum sum = binom_series_adaptive(w, p);
    const Complex ref = pow_principal(1.0 + w, p);
    CHECK(std::abs(sum.value - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    CHECK(sum.order <= kMaxBinomialOrder);
  });
}

TEST_CASE("binom_series converges monotonically for real w") {
  proptest::for_all(50, 12, [](proptest::Gen& g) {
    const double p = g.uniform(0.1, 0.9);
    // w < 0: every term past the first has the same sign, partial sums are monotone
    const double wn = g.uniform(-0.8, -0.05);
    const double refn = std::pow(1.0 + wn, p);
    double prev = binom_series(wn, p, 1).real();
    for (int n = 2; n < 60; ++n) {
      const double cur = binom_series(wn, p, n).real();
      CHECK(cur <= prev);
      CHECK(cur >= refn - 1e-15);
      prev = cur;
    }
    // w > 0: alternating, so odd and even partial sums approach from opposite sides
    const double wp = g.uniform(0.05, 0.8);
    const double refp = std::pow(1.0 + wp, p);
    for (int n = 1; n + 2 < 60; ++n) {
      const double a = binom_series(wp, p, n).real() - refp;
      const double b = binom_series(wp, p, n + 2).real() - refp;
      CHECK(std::abs(b) <= std::abs(a) + 1e-15);
      if (std::abs(b) > 1e-15) CHECK(a * b > 0.0);  // below that the sign is rounding noise
    }
  });
}

TEST_CASE("exp inverts both logarithms") {
  proptest::for_all(2000, 13, [](proptest::Gen& g) {
    const Complex z = g.polar(1e-8, 1e8, -kPi + 1e-9, kPi - 1e-9);
    if (!on_upper_cut(z)) {
      const Complex l = log_upper(z);
      CHECK(l.imag() > 0.0);
      CHECK(l.imag() < kTwoPi);
      CHECK(std::abs(std::exp(l) - z) <= 1e-14 * std::abs(z));
    }
    const Complex l = log_principal(z);
    CHECK(std::abs(l.imag()) < kPi);
    CHECK(std::abs(std::exp(l) - z) <= 1e-14 * std::abs(z));
  });
}

TEST_CASE("branches agree on the upper half-plane") {
  proptest::for_all(1000, 14, [](proptest::Gen& g) {
    const Complex z = g.upper(1e-6, 1e6);
    CHECK(std::abs(log_upper(z) - log_principal(z)) <= 1e-15 * std::max(1.0, std::abs(log_upper(z))));
  });
}

TEST_CASE("pow_upper is additive in the exponent on C_+") {
  proptest::for_all(1000, 15, [](proptest::Gen& g) {
    const Complex z = g.upper(1e-3, 1e3);
    const double p = g.uniform(-2.0, 2.0);
    const double q = g.uniform(-2.0, 2.0);
    const Complex lhs = pow_upper(z, p) * pow_upper(z, q);
    const Complex rhs = pow_upper(z, p + q);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * std::abs(rhs));
  });
}

TEST_CASE("pow1p_minus_one avoids cancellation") {
  const Complex u(1e-12, -2e-12);
  const double p = 0.37;
  CHECK(std::abs(pow1p_minus_one(u, p) - p * u) <= 1e-22);
  CHECK(std::abs(pow1p_minus_one(Complex(0.5, 0.5), 2.0) - (Complex(1.5, 0.5) * Complex(1.5, 0.5) - 1.0)) <= 1e-15);
}

TEST_CASE("non-finite input is refused") {
  CHECK_THROWS_AS(log_upper(Complex(std::nan(""), 1.0)), DomainError);
  CHECK_THROWS_AS(pow_principal(Complex(1.0, INFINITY), 0.5), DomainError);
}
