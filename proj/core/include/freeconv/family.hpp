#pragma once

// The family mu^alpha_{s,r}: Cauchy transform
//
//   G(z) = -r^{1/alpha} ((1 - (1 - s (-1/z)^alpha)^{1/r}) / s)^{1/alpha}
//
// with (-1/z)^alpha and (.)^{1/alpha} on the upper branch and (.)^{1/r} on
// the principal branch, plus its reciprocal, right inverse and Voiculescu
// transform.

#include <span>
#include <vector>

#include "freeconv/branches.hpp"

namespace freeconv {

/// Relative tolerance for comparisons of arg s against admissibility boundaries.
inline constexpr double kAngleTolerance = 1e-12;

/// arg s normalized to [0, 2*pi).
double normalized_arg(Complex s);

/// (0 < alpha <= 1 and (1-alpha) pi <= arg s <= pi) or
/// (1 < alpha <= 2 and 0 <= arg s <= (2-alpha) pi).
bool is_admissible(double alpha, Complex s);

/// Immutable (alpha, s, r) with theta = arg s cached in [0, 2*pi).
/// Construction validates alpha in (0, 2], r > 0, s != 0 only; admissibility
/// is checked by the operations that need it.
class FamilyParams {
 public:
  FamilyParams(double alpha, Complex s, double r);

  double alpha() const noexcept { return alpha_; }
  Complex s() const noexcept { return s_; }
  double r() const noexcept { return r_; }
  double theta() const noexcept { return theta_; }
  bool admissible() const noexcept { return admissible_; }

 private:
  double alpha_;
  Complex s_;
  double r_;
  double theta_;
  bool admissible_;
};

/// Gamma_{eta,M} = {z in C_+ : Im z > M, Im z > eta |Re z|}.
struct TruncatedCone {
  double eta = 1.0;
  double M = 1.0;

  bool contains(Complex z) const noexcept;
};

/// Cone with M = max(10 max(1, |s|^{1/alpha}) max(1, r), (10 |s|)^{1/alpha}),
/// so |s (-1/z)^alpha| <= 0.1 on it.
TruncatedCone default_cone(const FamilyParams& params, double eta = 1.0);

/// Deterministic sample of `count` points strictly inside the cone with
/// Im z ranging over (M, 10 M].
std::vector<Complex> cone_grid(const TruncatedCone& cone, std::size_t count);

/// Cauchy transform. Requires z in C_+, admissible (alpha, s) and r >= 1.
Complex cauchy_G(const FamilyParams& params, Complex z);

/// Coefficients c_0..c_N of G(z) = (1/z) sum c_n (-1/z)^{n alpha}; c_0 = 1.
std::vector<Complex> series_coefficients(const FamilyParams& params, int order);

/// Truncated series for G; throws ConvergenceError when |s (-1/z)^alpha| >= 1/2.
Complex series_G(const FamilyParams& params, Complex z, int order);

/// 1 / cauchy_G.
Complex reciprocal_F(const FamilyParams& params, Complex z);

/// E(z) = (1 - (1 - (s/r)(-1/z)^alpha)^r) / s, the inner expression of the right inverse.
Complex inverse_inner(const FamilyParams& params, Complex z);

/// Right inverse of F, i.e. the reciprocal transform with parameters (alpha, s/r, 1/r).
/// Throws BranchError where the inner expression vanishes or meets a cut.
Complex inverse_F(const FamilyParams& params, Complex z);

/// inverse_F(z) - z.
Complex voiculescu_phi(const FamilyParams& params, Complex z);

struct Residual {
  double max_residual = 0.0;
  Complex argmax{};
};

/// max |F_{s,r}(F_{us,u}(z)) - F_{us,ur}(z)| over the grid.
Residual verify_composition(double alpha, Complex s, double r, double u,
                            std::span<const Complex> grid);

/// max |G_{cs,r}(c^{1/alpha} z) - c^{-1/alpha} G_{s,r}(z)| over the grid.
Residual verify_self_similarity(const FamilyParams& params, double c,
                                std::span<const Complex> grid);

/// max |F(inverse_F(z)) - z| and |inverse_F(F(z)) - z| over the grid.
Residual verify_inverse(const FamilyParams& params, std::span<const Complex> grid);

namespace detail {

/// The branch composition for G without admissibility or r checks.
/// Valid as an analytic expression on a truncated cone for any r > 0.
Complex composition_G(double alpha, Complex s, double r, Complex z);

}  // namespace detail

}  // namespace freeconv
