#pragma once

// psi / chi / S / R transform calculus on the real interval (-1, 0), closed
// S-transforms of a^alpha_s and mu^alpha_{s,2}, and residual checks of the
// compound-Poisson and multiplicative factorization identities.

#include <span>

#include "freeconv/branches.hpp"
#include "freeconv/family.hpp"
#include "freeconv/stieltjes.hpp"

namespace freeconv {

/// How chi is taken: measures on [0, inf) invert psi on the negative reals;
/// symmetric measures invert psi on the positive imaginary axis.
enum class MeasureKind { positive, symmetric };

enum class SMethod { closed_form, numeric_inversion };

struct STransformSample {
  double z = 0.0;  ///< strictly inside (-1, 0)
  Complex value;
  SMethod method = SMethod::numeric_inversion;
};

/// psi(z) = (1/z) G(1/z) - 1. 1/z in C_- is handled by G(conj w) = conj G(w);
/// real 1/z uses the upper boundary value G(w + i eps), eps = 1e-10 max(1, |w|).
Complex psi_from_G(const ComplexFunction& G, Complex z);

/// Real preimage t < 0 of w under an increasing psi with psi(0-) = 0.
/// Bracketed, then refined by TOMS 748 to full double precision.
/// Throws DomainError if w cannot be bracketed.
double chi_numeric(const RealFunction& psi, double w);

/// S(z) = (1 + z)/z chi(z) from a Cauchy transform, z in (-1, 0).
Complex s_transform_numeric(const ComplexFunction& G, double z, MeasureKind kind);

/// Kind of a^alpha_s (and of mu^alpha_{s,2}) when the closed S-transforms
/// apply; throws DomainError outside those hypotheses.
MeasureKind factorization_kind(double alpha, Complex s);

/// True iff factorization_kind would succeed.
bool factorization_supported(double alpha, Complex s);

/// -(1/z) (((1+z)^alpha - 1) / s)^{1/alpha}, with the root taken so that chi
/// lands in the positive imaginary axis for symmetric laws.
Complex s_stable_closed(double alpha, Complex s, double z);

/// -(4^{1/alpha} / (z (z+1))) (((1+z)^alpha - 1) / s)^{1/alpha}.
Complex s_mu2_closed(double alpha, Complex s, double z);

STransformSample s_transform_sample(const ComplexFunction& G, double z, MeasureKind kind);

/// R(z) = z phi(1/z); requires Im z < 0.
Complex r_transform(const FamilyParams& params, Complex z);

/// max |phi_{s,2}(z) - (z^2 G_{a_{s/4}}(z) - z)| over a cone grid.
Residual verify_compound_poisson(double alpha, Complex s, std::span<const Complex> grid);

/// max |R_{s,2}(z) - psi_{a_{s/4}}(z)| over points with 1/z in a cone.
Residual verify_r_psi(double alpha, Complex s, std::span<const Complex> grid);

/// max |S(mu_{s,2}) - S_m S(a_{s/4})| with both S computed numerically.
Residual verify_boxtimes(double alpha, Complex s, std::span<const double> grid);

/// max over the grid of |closed - numeric| for both a_s and mu_{s,2}.
Residual verify_s_closed_forms(double alpha, Complex s, std::span<const double> grid);

}  // namespace freeconv
