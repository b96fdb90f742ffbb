#include "freeconv/stable_poisson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freeconv/errors.hpp"
#include "freeconv/family.hpp"

namespace freeconv {

namespace {

bool angle_equal(double a, double b) { return std::abs(a - b) <= kAngleTolerance; }

// (-1/z)^alpha on the upper branch.
Complex minus_inverse_power(Complex z, double alpha) {
  const Complex minus_inv = -1.0 / z;
  return alpha == 1.0 ? minus_inv : pow_upper(minus_inv, alpha);
}

void require_upper_half_plane(Complex z, const char* where) {
  ensure_finite(z, where);
  if (!(z.imag() > kCutTolerance)) {
    throw DomainError(std::string(where) + ": z must lie in the open upper half-plane");
  }
}

}  // namespace

StableParams::StableParams(double alpha, Complex s) : alpha_(alpha), s_(s), theta_(0.0) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw DomainError("StableParams: alpha must lie in (0, 2]");
  }
  ensure_finite(s, "StableParams");
  if (!is_admissible(alpha, s)) {
    throw AdmissibilityError("StableParams: (alpha, s) is not admissible");
  }
  theta_ = normalized_arg(s);
}

Complex stable_F(const StableParams& params, Complex z) {
  require_upper_half_plane(z, "stable_F");
  const Complex st = params.s() * minus_inverse_power(z, params.alpha());
  // 1 - st never meets (-inf, 0] for admissible (alpha, s) and z in C_+.
  const Complex factor =
      params.alpha() == 1.0 ? 1.0 - st : pow_principal(1.0 - st, 1.0 / params.alpha());
  return z * factor;
}

Complex stable_G(const StableParams& params, Complex z) {
  return 1.0 / stable_F(params, z);
}

Complex stable_inverse_F(const StableParams& params, Complex w) {
  require_upper_half_plane(w, "stable_inverse_F");
  const Complex st = params.s() * minus_inverse_power(w, params.alpha());
  const Complex factor =
      params.alpha() == 1.0 ? 1.0 + st : pow_principal(1.0 + st, 1.0 / params.alpha());
  return w * factor;
}

Complex stable_phi(const StableParams& params, Complex w) {
  return stable_inverse_F(params, w) - w;
}

double stable_density(const StableParams& params, double x) {
  if (x == 0.0 || !std::isfinite(x)) {
    throw DomainError("stable_density: x must be finite and nonzero");
  }
  const double alpha = params.alpha();
  const double radius = params.modulus();
  const double theta = params.theta();
  const double phase = x > 0.0 ? alpha * kPi - kPi + theta : kPi - theta;
  const double xa = std::pow(std::abs(x), alpha);
  // arg taken in [0, pi]; the imaginary part is nonnegative for admissible params
  const double im = std::max(0.0, radius * std::sin(phase));
  const Complex w(xa + radius * std::cos(phase), im);
  const double angle = std::atan2(w.imag(), w.real());
  const double value = std::sin(angle / alpha) / (kPi * std::pow(std::abs(w), 1.0 / alpha));
  return std::max(0.0, value);
}

bool is_positive_supported(const StableParams& params) {
  return params.alpha() <= 1.0 && angle_equal(params.theta(), kPi);
}

bool is_symmetric(const StableParams& params) {
  return angle_equal(params.theta(), (1.0 - params.alpha() / 2.0) * kPi);
}

bool stable_fid_predicate(const StableParams& params) {
  const double alpha = params.alpha();
  if (alpha == 1.0) return true;
  if (alpha >= 0.5 && alpha < 1.0) {
    return angle_equal(params.theta(), (1.0 - alpha) * kPi) || angle_equal(params.theta(), kPi);
  }
  return false;
}

Complex mp_cauchy(Complex z) {
  ensure_finite(z, "mp_cauchy");
  if (z.imag() < 0.0 || (z.imag() == 0.0 && z.real() >= 0.0 && z.real() <= 4.0)) {
    throw DomainError("mp_cauchy: z must lie in C_+ or on the real axis outside [0, 4]");
  }
  // Upper boundary value on the real axis: force +0 imaginary part.
  const Complex w(z.real(), z.imag() == 0.0 ? 0.0 : z.imag());
  const Complex q = std::sqrt(w) * std::sqrt(w - 4.0);
  return 2.0 / (w + q);
}

double mp_density(double x) {
  if (!(x > 0.0) || x > 4.0) return 0.0;
  return std::sqrt(x * (4.0 - x)) / (2.0 * kPi * x);
}

double mp_s_transform(double z) {
  if (!(z > -1.0 && z < 0.0)) {
    throw DomainError("mp_s_transform: z must lie in (-1, 0)");
  }
  return 1.0 / (z + 1.0);
}

}  // namespace freeconv
