#include "freeconv/family.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freeconv/errors.hpp"

namespace freeconv {

namespace {

void require_upper_half_plane(Complex z, const char* where) {
  ensure_finite(z, where);
  if (!(z.imag() > kCutTolerance)) {
    throw DomainError(std::string(where) + ": z must lie in the open upper half-plane");
  }
}

// (-1/z)^alpha on the upper branch; alpha = 1 needs no branch.
Complex minus_inverse_power(Complex z, double alpha) {
  const Complex minus_inv = -1.0 / z;
  return alpha == 1.0 ? minus_inv : pow_upper(minus_inv, alpha);
}

}  // namespace

double normalized_arg(Complex s) {
  double theta = std::atan2(s.imag(), s.real());
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi - kAngleTolerance) theta = 0.0;
  return theta;
}

bool is_admissible(double alpha, Complex s) {
  if (!(alpha > 0.0 && alpha <= 2.0) || std::abs(s) == 0.0) return false;
  const double theta = normalized_arg(s);
  if (theta > kPi + kAngleTolerance) return false;
  if (alpha <= 1.0) {
    return theta >= (1.0 - alpha) * kPi - kAngleTolerance;
  }
  return theta <= (2.0 - alpha) * kPi + kAngleTolerance;
}

FamilyParams::FamilyParams(double alpha, Complex s, double r)
    : alpha_(alpha), s_(s), r_(r), theta_(0.0), admissible_(false) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw DomainError("FamilyParams: alpha must lie in (0, 2]");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("FamilyParams: r must be a positive finite number");
  }
  ensure_finite(s, "FamilyParams");
  if (std::abs(s) == 0.0) {
    throw DomainError("FamilyParams: s must be nonzero");
  }
  theta_ = normalized_arg(s);
  admissible_ = is_admissible(alpha, s);
}

bool TruncatedCone::contains(Complex z) const noexcept {
  return z.imag() > M && z.imag() > eta * std::abs(z.real());
}

TruncatedCone default_cone(const FamilyParams& params, double eta) {
  const double scale = std::max(1.0, std::pow(std::abs(params.s()), 1.0 / params.alpha()));
  // for alpha < 1 the first bound alone leaves |s (-1/z)^alpha| near 1
  const double series_floor = std::pow(10.0 * std::abs(params.s()), 1.0 / params.alpha());
  return {eta, std::max(10.0 * scale * std::max(1.0, params.r()), series_floor)};
}

std::vector<Complex> cone_grid(const TruncatedCone& cone, std::size_t count) {
  std::vector<Complex> grid;
  if (count == 0) return grid;
  grid.reserve(count);
  const auto n_angle = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
  const std::size_t n_height = (count + n_angle - 1) / n_angle;
  const double lo = std::atan(cone.eta);
  const double width = kPi - 2.0 * lo;
  for (std::size_t j = 0; j < n_height && grid.size() < count; ++j) {
    const double frac = n_height > 1 ? static_cast<double>(j) / static_cast<double>(n_height - 1) : 0.0;
    const double height = cone.M * 1.01 * std::pow(10.0 / 1.01, frac);
    for (std::size_t i = 0; i < n_angle && grid.size() < count; ++i) {
      const double phi = lo + width * (static_cast<double>(i) + 0.5) / static_cast<double>(n_angle);
      grid.emplace_back(height * std::cos(phi) / std::sin(phi), height);
    }
  }
  return grid;
}

namespace detail {

Complex composition_G(double alpha, Complex s, double r, Complex z) {
  const Complex t = minus_inverse_power(z, alpha);
  const Complex st = s * t;
  // (1 - st)^{1/r} - 1, principal branch
  const Complex d = r == 1.0 ? -st : pow1p_minus_one(-st, 1.0 / r);
  const Complex w = -d / s;
  const Complex root = alpha == 1.0 ? w : pow_upper(w, 1.0 / alpha);
  const Complex g = -std::pow(r, 1.0 / alpha) * root;
  ensure_finite(g, "composition_G");
  return g;
}

}  // namespace detail

Complex cauchy_G(const FamilyParams& params, Complex z) {
  require_upper_half_plane(z, "cauchy_G");
  if (!params.admissible()) {
    throw AdmissibilityError("cauchy_G: (alpha, s) is not admissible");
  }
  if (params.r() < 1.0) {
    throw DomainError("cauchy_G: r < 1 does not define a probability measure");
  }
  if (params.r() == 1.0) return 1.0 / z;
  return detail::composition_G(params.alpha(), params.s(), params.r(), z);
}

std::vector<Complex> series_coefficients(const FamilyParams& params, int order) {
  if (order < 0) throw DomainError("series_coefficients: order must be nonnegative");
  const auto n = static_cast<std::size_t>(order) + 1;
  const double r = params.r();
  const Complex minus_s = -params.s();

  // inner series u(t) = r sum_{n>=1} C(1/r, n+1) (-s)^n t^n
  std::vector<Complex> inner(n, Complex{});
  Complex power = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    power *= minus_s;
    inner[k] = r * binom_coeff(1.0 / r, static_cast<unsigned>(k + 1)) * power;
  }

  // (1 + u)^{1/alpha} = sum_k C(1/alpha, k) u^k, truncated at t^order
  std::vector<Complex> coeffs(n, Complex{});
  std::vector<Complex> u_power(n, Complex{});
  u_power[0] = 1.0;
  coeffs[0] = 1.0;
  const double p = 1.0 / params.alpha();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<Complex> next(n, Complex{});
    for (std::size_t a = 0; a < n; ++a) {
      if (u_power[a] == Complex{}) continue;
      for (std::size_t b = 1; a + b < n; ++b) next[a + b] += u_power[a] * inner[b];
    }
    u_power = std::move(next);
    const double c = binom_coeff(p, static_cast<unsigned>(k));
    for (std::size_t m = 0; m < n; ++m) coeffs[m] += c * u_power[m];
  }
  return coeffs;
}

Complex series_G(const FamilyParams& params, Complex z, int order) {
  require_upper_half_plane(z, "series_G");
  const Complex t = minus_inverse_power(z, params.alpha());
  if (std::abs(params.s() * t) >= 0.5) {
    throw ConvergenceError("series_G: z lies outside the convergence region |s (-1/z)^alpha| < 1/2",
                           0.0, std::abs(params.s() * t));
  }
  const std::vector<Complex> c = series_coefficients(params, order);
  Complex sum{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) sum = sum * t + *it;
  return sum / z;
}

Complex reciprocal_F(const FamilyParams& params, Complex z) {
  return 1.0 / cauchy_G(params, z);
}

Complex inverse_inner(const FamilyParams& params, Complex z) {
  require_upper_half_plane(z, "inverse_inner");
  const Complex t = minus_inverse_power(z, params.alpha());
  const Complex u = -(params.s() / params.r()) * t;
  return -pow1p_minus_one(u, params.r()) / params.s();
}

Complex inverse_F(const FamilyParams& params, Complex z) {
  require_upper_half_plane(z, "inverse_F");
  if (!params.admissible()) {
    throw AdmissibilityError("inverse_F: (alpha, s) is not admissible");
  }
  const double r = params.r();
  if (r == 1.0) return z;
  // F^{-1}(z) = -1 / E(z)^{1/alpha} with E = t * ratio and t^{1/alpha} = -1/z,
  // so F^{-1}(z) = z * ratio^{-1/alpha}; ratio -> 1 at infinity.
  const Complex t = minus_inverse_power(z, params.alpha());
  const Complex u = -(params.s() / r) * t;
  const Complex ratio = pow1p_minus_one(u, r) / (r * u);
  if (std::abs(ratio) <= kCutTolerance) {
    throw BranchError("inverse_F: inner expression vanishes");
  }
  const Complex out =
      params.alpha() == 1.0 ? z / ratio : z * pow_principal(ratio, -1.0 / params.alpha());
  ensure_finite(out, "inverse_F");
  return out;
}

Complex voiculescu_phi(const FamilyParams& params, Complex z) {
  return inverse_F(params, z) - z;
}

Residual verify_composition(double alpha, Complex s, double r, double u,
                            std::span<const Complex> grid) {
  Residual res;
  for (const Complex z : grid) {
    const Complex inner = 1.0 / detail::composition_G(alpha, u * s, u, z);
    if (!(inner.imag() > 0.0)) {
      throw DomainError("verify_composition: F_{us,u}(z) left the upper half-plane");
    }
    const Complex lhs = 1.0 / detail::composition_G(alpha, s, r, inner);
    const Complex rhs = 1.0 / detail::composition_G(alpha, u * s, u * r, z);
    const double d = std::abs(lhs - rhs);
    if (d > res.max_residual) res = {d, z};
  }
  return res;
}

Residual verify_self_similarity(const FamilyParams& params, double c,
                                std::span<const Complex> grid) {
  if (!(c > 0.0)) throw DomainError("verify_self_similarity: c must be positive");
  const FamilyParams scaled(params.alpha(), c * params.s(), params.r());
  const double b = std::pow(c, 1.0 / params.alpha());
  Residual res;
  for (const Complex z : grid) {
    const double d = std::abs(cauchy_G(scaled, b * z) - cauchy_G(params, z) / b);
    if (d > res.max_residual) res = {d, z};
  }
  return res;
}

Residual verify_inverse(const FamilyParams& params, std::span<const Complex> grid) {
  Residual res;
  for (const Complex z : grid) {
    const double d1 = std::abs(reciprocal_F(params, inverse_F(params, z)) - z);
    const double d2 = std::abs(inverse_F(params, reciprocal_F(params, z)) - z);
    const double d = std::max(d1, d2);
    if (d > res.max_residual) res = {d, z};
  }
  return res;
}

}  // namespace freeconv
