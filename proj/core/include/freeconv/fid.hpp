#pragma once

// Free infinite divisibility: grid scans of Im phi, Levy density extraction,
// the cubic closed forms, zeros of the inner expression E and a collision
// search for univalence of F and its inverse.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "freeconv/branches.hpp"
#include "freeconv/family.hpp"
#include "freeconv/stieltjes.hpp"

namespace freeconv {

/// Rectangle [xmin, xmax] x [ymin, ymax] sampled with nx x ny points,
/// both edges included. Rows run over y, starting at ymin.
struct GridSpec {
  double xmin = -5.0;
  double xmax = 5.0;
  double ymin = 1e-6;
  double ymax = 5.0;
  std::size_t nx = 400;
  std::size_t ny = 200;

  Complex point(std::size_t ix, std::size_t iy) const;
  double dx() const;
  double dy() const;
};

/// [-5L, 5L] x (1e-6 L, 5L], 400 x 200, L = max(1, |s|^{1/alpha}).
GridSpec default_fid_grid(const FamilyParams& params);

enum class FidVerdict { violation_found, no_violation_on_grid };

const char* to_string(FidVerdict verdict);

struct EvaluationFailure {
  Complex z;
  std::string message;
};

struct FidReport {
  FidVerdict verdict = FidVerdict::no_violation_on_grid;
  std::optional<Complex> witness;
  double witness_im_phi = 0.0;  ///< Im phi at the witness; 0 without one
  double max_im_phi = 0.0;      ///< over successfully evaluated samples
  Complex argmax{};
  GridSpec grid;
  double tol = 1e-9;
  std::optional<FamilyParams> params;
  std::vector<EvaluationFailure> failures;
  std::size_t evaluated = 0;
};

inline constexpr double kFidTolerance = 1e-9;

/// Scan of Im phi over the grid. A sample above tol counts only if at least two
/// further points of the surrounding 4x refined 9x9 patch also exceed tol.
/// The witness is the first confirmed sample in row-major order.
FidReport check_fid_grid(const ComplexFunction& phi, const GridSpec& grid,
                         double tol = kFidTolerance);

FidReport check_fid_grid(const FamilyParams& params, const GridSpec& grid,
                         double tol = kFidTolerance);

/// phi of mu^1_{3 s0, 3}: (-3 s0 z^2 - s0^2 z) / (3 z^2 + 3 s0 z + s0^2).
Complex phi_cubic(Complex s0, Complex z);

/// Im phi_cubic(i, x + iy) in expanded real form.
double im_phi_cubic_pi2(double x, double y);

/// (1/x^2) * extrapolated -(1/pi) Im phi(x + iy); x != 0.
LimitEstimate levy_density_estimate(const FamilyParams& params, double x, double y0 = 1e-2,
                                    int levels = 8);

double levy_density_numeric(const FamilyParams& params, double x, double y0 = 1e-2,
                            int levels = 8);

/// Levy density of mu^1_{-1,r}, 1 < r < 2, supported on (0, 1/r).
double levy_beta_closed(double r, double x);

/// 9 x^2 / (pi (9 x^4 + 3 x^2 + 1)).
double levy_cubic_closed(double x);

/// A zero of E in C_+ of the form 1 - (s/r)(-1/z)^alpha = exp(2 pi i k / r),
/// 0 < |k| < r/2, tried in the order k = 1, -1, 2, -2, ...
std::optional<Complex> find_E_zero(double alpha, Complex s, double r);

/// Smallest r beyond which a candidate zero of E exists in C_+
/// (infinity if none does for any r).
double r0_threshold(double alpha, Complex s);

struct UiResult {
  bool collision = false;
  Complex z1{};
  Complex z2{};
  double value_gap = 0.0;  ///< |map(z1) - map(z2)| after refinement
  std::size_t candidates = 0;
};

/// Looks for z1 != z2 in C_+ with map(z1) = map(z2). Grid values are hashed
/// by cell; pairs that are close in value but far apart in z are refined by
/// Newton's method on map(w) = map(z1) from w = z2.
UiResult ui_heuristic(const ComplexFunction& map, const GridSpec& grid);

struct UiReport {
  UiResult forward;  ///< on F
  UiResult inverse;  ///< on inverse_F
  bool collision() const { return forward.collision || inverse.collision; }
};

UiReport ui_heuristic(const FamilyParams& params, const GridSpec& grid);

/// 100 x 100 grid on [-5L, 5L] x [1e-3 L, 5L].
GridSpec default_ui_grid(const FamilyParams& params);

/// z + 1/(z - 1) + 1/(z + 1): phi = 1/(z-1) + 1/(z+1) is analytic from C_+
/// into C_- but this inverse is not univalent on C_+.
Complex counterexample_inverse(Complex z);

/// Extrapolated integral over [u, v] of -(1/pi) Im phi(x + iy), i.e. the
/// (1 + x^2) tau mass of [u, v].
LimitEstimate tau_interval_mass(const FamilyParams& params, double u, double v,
                                double y0 = 1e-2, int levels = 8);

/// tau({x}) = lim iy phi(x + iy) / (1 + x^2).
double tau_atom(const FamilyParams& params, double x);

struct LevyTriplet {
  double gamma = 0.0;
  double a = 0.0;
  DensityTable nu;
};

/// gamma = Re phi(i), a = tau({0}), nu tabulated on xs (x = 0 excluded).
LevyTriplet levy_triplet(const FamilyParams& params, std::span<const double> xs,
                         double y0 = 1e-2, int levels = 8);

}  // namespace freeconv
