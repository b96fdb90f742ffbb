#pragma once

// Monotone strictly alpha-stable laws a^alpha_s and the Marchenko-Pastur law
// with mean one.

#include "freeconv/branches.hpp"

namespace freeconv {

/// (alpha, s) with admissibility enforced at construction. theta = arg s.
class StableParams {
 public:
  StableParams(double alpha, Complex s);

  double alpha() const noexcept { return alpha_; }
  Complex s() const noexcept { return s_; }
  double theta() const noexcept { return theta_; }
  double modulus() const noexcept { return std::abs(s_); }

 private:
  double alpha_;
  Complex s_;
  double theta_;
};

/// F(z) = (z^alpha + (-1)^{alpha-1} s)^{1/alpha}, evaluated as
/// z (1 - s (-1/z)^alpha)^{1/alpha} with the principal outer power.
Complex stable_F(const StableParams& params, Complex z);

/// 1 / stable_F.
Complex stable_G(const StableParams& params, Complex z);

/// Right inverse w (1 + s (-1/w)^alpha)^{1/alpha}.
Complex stable_inverse_F(const StableParams& params, Complex w);

/// stable_inverse_F(w) - w.
Complex stable_phi(const StableParams& params, Complex w);

/// Closed-form density; throws DomainError at x = 0.
double stable_density(const StableParams& params, double x);

bool is_positive_supported(const StableParams& params);
bool is_symmetric(const StableParams& params);

/// True iff a^alpha_s is freely infinitely divisible:
/// (1/2 <= alpha < 1 and arg s in {(1-alpha) pi, pi}) or alpha = 1.
bool stable_fid_predicate(const StableParams& params);

/// Cauchy transform of the Marchenko-Pastur law m (rate one, jump size one).
Complex mp_cauchy(Complex z);

/// sqrt(x (4 - x)) / (2 pi x) on (0, 4], zero elsewhere.
double mp_density(double x);

/// S_m(z) = 1 / (z + 1).
double mp_s_transform(double z);

}  // namespace freeconv
