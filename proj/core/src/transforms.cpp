#include "freeconv/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "freeconv/errors.hpp"
#include "freeconv/stable_poisson.hpp"

namespace freeconv {

namespace {

void require_unit_interval(double z, const char* where) {
  if (!(z > -1.0 && z < 0.0)) {
    throw DomainError(std::string(where) + ": z must lie in (-1, 0)");
  }
}

// ((1+z)^alpha - 1) / s, with |.|^{1/alpha} and the branch fixed by the kind.
Complex closed_root(double alpha, Complex s, double z, MeasureKind kind) {
  const double n = std::expm1(alpha * std::log1p(z));  // < 0 on (-1, 0)
  const double modulus = std::pow(std::abs(n) / std::abs(s), 1.0 / alpha);
  if (kind == MeasureKind::positive) return modulus;
  return Complex(0.0, -modulus);
}

void track(Residual& res, double value, Complex where) {
  if (!(value <= res.max_residual)) {
    res.max_residual = value;
    res.argmax = where;
  }
}

}  // namespace

Complex psi_from_G(const ComplexFunction& G, Complex z) {
  ensure_finite(z, "psi_from_G");
  if (z == Complex{}) return 0.0;
  const Complex w = 1.0 / z;
  Complex g;
  if (w.imag() > 0.0) {
    g = G(w);
  } else if (w.imag() < 0.0) {
    g = std::conj(G(std::conj(w)));
  } else {
    // upper boundary value; one Richardson step cancels the O(eps) term
    const double eps = 1e-10 * std::max(1.0, std::abs(w));
    g = 2.0 * G(Complex(w.real(), eps)) - G(Complex(w.real(), 2.0 * eps));
  }
  return w * g - 1.0;
}

double chi_numeric(const RealFunction& psi, double w) {
  if (!(w < 0.0 && w > -1.0)) {
    throw DomainError("chi_numeric: w must lie in (-1, 0)");
  }
  auto f = [&](double t) { return psi(t) - w; };

  double lo = -1.0;
  double flo = f(lo);
  double hi = lo;
  double fhi = flo;
  int steps = 0;
  if (flo < 0.0) {
    // move towards 0 until psi exceeds w
    while (fhi < 0.0) {
      lo = hi;
      flo = fhi;
      hi *= 0.5;
      fhi = f(hi);
      if (++steps > 1000) throw DomainError("chi_numeric: cannot bracket w");
    }
  } else {
    while (flo > 0.0) {
      hi = lo;
      fhi = flo;
      lo *= 2.0;
      flo = f(lo);
      if (++steps > 1000 || !std::isfinite(lo)) {
        throw DomainError("chi_numeric: w is outside the real range of psi");
      }
    }
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;

  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iterations);
  return 0.5 * (a + b);
}

Complex s_transform_numeric(const ComplexFunction& G, double z, MeasureKind kind) {
  require_unit_interval(z, "s_transform_numeric");
  if (kind == MeasureKind::positive) {
    const double t = chi_numeric([&](double x) { return psi_from_G(G, x).real(); }, z);
    return (1.0 + z) / z * t;
  }
  // symmetric: psi(iy) is real; parametrize iy by t = -y < 0
  const double t = chi_numeric(
      [&](double x) { return psi_from_G(G, Complex(0.0, -x)).real(); }, z);
  return (1.0 + z) / z * Complex(0.0, -t);
}

MeasureKind factorization_kind(double alpha, Complex s) {
  const StableParams params(alpha, s);
  if (is_positive_supported(params)) return MeasureKind::positive;
  if (is_symmetric(params)) return MeasureKind::symmetric;
  throw DomainError("unsupported by theory: (alpha, s) is neither positive nor symmetric");
}

bool factorization_supported(double alpha, Complex s) {
  try {
    factorization_kind(alpha, s);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

Complex s_stable_closed(double alpha, Complex s, double z) {
  require_unit_interval(z, "s_stable_closed");
  const MeasureKind kind = factorization_kind(alpha, s);
  return -closed_root(alpha, s, z, kind) / z;
}

Complex s_mu2_closed(double alpha, Complex s, double z) {
  require_unit_interval(z, "s_mu2_closed");
  const MeasureKind kind = factorization_kind(alpha, s);
  return -std::pow(4.0, 1.0 / alpha) / (z * (z + 1.0)) * closed_root(alpha, s, z, kind);
}

STransformSample s_transform_sample(const ComplexFunction& G, double z, MeasureKind kind) {
  return {z, s_transform_numeric(G, z, kind), SMethod::numeric_inversion};
}

Complex r_transform(const FamilyParams& params, Complex z) {
  ensure_finite(z, "r_transform");
  if (!(z.imag() < 0.0)) {
    throw DomainError("r_transform: 1/z must lie in the upper half-plane");
  }
  return z * voiculescu_phi(params, 1.0 / z);
}

Residual verify_compound_poisson(double alpha, Complex s, std::span<const Complex> grid) {
  const FamilyParams mu(alpha, s, 2.0);
  const StableParams a(alpha, s / 4.0);
  Residual res;
  for (const Complex z : grid) {
    const Complex lhs = voiculescu_phi(mu, z);
    const Complex rhs = z * z * stable_G(a, z) - z;
    track(res, std::abs(lhs - rhs), z);
  }
  return res;
}

Residual verify_r_psi(double alpha, Complex s, std::span<const Complex> grid) {
  const FamilyParams mu(alpha, s, 2.0);
  const StableParams a(alpha, s / 4.0);
  const ComplexFunction Ga = [&](Complex w) { return stable_G(a, w); };
  Residual res;
  for (const Complex w : grid) {
    const Complex z = 1.0 / w;
    track(res, std::abs(r_transform(mu, z) - psi_from_G(Ga, z)), z);
  }
  return res;
}

Residual verify_boxtimes(double alpha, Complex s, std::span<const double> grid) {
  const MeasureKind kind = factorization_kind(alpha, s);
  const FamilyParams mu(alpha, s, 2.0);
  const StableParams a(alpha, s / 4.0);
  const ComplexFunction Gmu = [&](Complex z) { return cauchy_G(mu, z); };
  const ComplexFunction Ga = [&](Complex z) { return stable_G(a, z); };
  Residual res;
  for (const double z : grid) {
    const Complex lhs = s_transform_numeric(Gmu, z, kind);
    const Complex rhs = mp_s_transform(z) * s_transform_numeric(Ga, z, kind);
    track(res, std::abs(lhs - rhs), z);
  }
  return res;
}

Residual verify_s_closed_forms(double alpha, Complex s, std::span<const double> grid) {
  const MeasureKind kind = factorization_kind(alpha, s);
  const FamilyParams mu(alpha, s, 2.0);
  const StableParams a(alpha, s);
  const ComplexFunction Gmu = [&](Complex z) { return cauchy_G(mu, z); };
  const ComplexFunction Ga = [&](Complex z) { return stable_G(a, z); };
  Residual res;
  for (const double z : grid) {
    track(res, std::abs(s_stable_closed(alpha, s, z) - s_transform_numeric(Ga, z, kind)), z);
    track(res, std::abs(s_mu2_closed(alpha, s, z) - s_transform_numeric(Gmu, z, kind)), z);
  }
  return res;
}

}  // namespace freeconv
