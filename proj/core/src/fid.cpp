#include "freeconv/fid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>
#include <utility>

#include "freeconv/errors.hpp"
#include "freeconv/parallel.hpp"

namespace freeconv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double grid_step(double lo, double hi, std::size_t n) {
  return n > 1 ? (hi - lo) / static_cast<double>(n - 1) : 0.0;
}

void validate_grid(const GridSpec& g) {
  if (g.nx == 0 || g.ny == 0) throw DomainError("grid: nx and ny must be positive");
  if (!(g.xmax >= g.xmin) || !(g.ymax >= g.ymin) || !(g.ymin > 0.0)) {
    throw DomainError("grid: need xmin <= xmax and 0 < ymin <= ymax");
  }
}

double scale_of(const FamilyParams& params) {
  return std::max(1.0, std::pow(std::abs(params.s()), 1.0 / params.alpha()));
}

void require_admissible(const FamilyParams& params, const char* where) {
  if (!params.admissible()) {
    throw AdmissibilityError(std::string(where) + ": (alpha, s) is not admissible");
  }
}

// Im phi at z, NaN on evaluation failure.
double im_or_nan(const ComplexFunction& phi, Complex z) {
  try {
    const double v = phi(z).imag();
    return std::isfinite(v) ? v : kNaN;
  } catch (const Error&) {
    return kNaN;
  }
}

bool persists(const ComplexFunction& phi, const GridSpec& g, Complex z, double tol) {
  const double hx = g.dx() / 4.0;
  const double hy = g.dy() / 4.0;
  int hits = 0;
  for (int b = -4; b <= 4; ++b) {
    const double y = z.imag() + b * hy;
    if (y < g.ymin) continue;
    for (int a = -4; a <= 4; ++a) {
      if (a == 0 && b == 0) continue;
      if (im_or_nan(phi, Complex(z.real() + a * hx, y)) > tol && ++hits >= 2) return true;
    }
  }
  return false;
}

Complex central_difference(const ComplexFunction& map, Complex w) {
  const double h = 1e-7 * std::max(1.0, std::abs(w));
  return (map(w + h) - map(w - h)) / (2.0 * h);
}

}  // namespace

Complex GridSpec::point(std::size_t ix, std::size_t iy) const {
  return {xmin + static_cast<double>(ix) * dx(), ymin + static_cast<double>(iy) * dy()};
}

double GridSpec::dx() const { return grid_step(xmin, xmax, nx); }
double GridSpec::dy() const { return grid_step(ymin, ymax, ny); }

GridSpec default_fid_grid(const FamilyParams& params) {
  const double L = scale_of(params);
  return {-5.0 * L, 5.0 * L, 1e-6 * L, 5.0 * L, 400, 200};
}

const char* to_string(FidVerdict verdict) {
  return verdict == FidVerdict::violation_found ? "violation-found" : "no-violation-on-grid";
}

FidReport check_fid_grid(const ComplexFunction& phi, const GridSpec& grid, double tol) {
  validate_grid(grid);
  if (!(tol >= 0.0)) throw DomainError("check_fid_grid: tol must be nonnegative");

  std::vector<std::vector<double>> rows(grid.ny);
  std::vector<std::vector<EvaluationFailure>> row_failures(grid.ny);
  parallel_for(grid.ny, [&](std::size_t iy) {
    auto& row = rows[iy];
    row.resize(grid.nx);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const Complex z = grid.point(ix, iy);
      try {
        const double v = phi(z).imag();
        if (!std::isfinite(v)) throw DomainError("non-finite value");
        row[ix] = v;
      } catch (const Error& e) {
        row[ix] = kNaN;
        row_failures[iy].push_back({z, e.what()});
      }
    }
  });

  FidReport report;
  report.grid = grid;
  report.tol = tol;
  report.max_im_phi = -kInfinity;
  for (std::size_t iy = 0; iy < grid.ny; ++iy) {
    for (auto& f : row_failures[iy]) report.failures.push_back(std::move(f));
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const double v = rows[iy][ix];
      if (std::isnan(v)) continue;
      ++report.evaluated;
      const Complex z = grid.point(ix, iy);
      if (v > report.max_im_phi) {
        report.max_im_phi = v;
        report.argmax = z;
      }
      if (v > tol && !report.witness && persists(phi, grid, z, tol)) {
        report.witness = z;
        report.witness_im_phi = v;
        report.verdict = FidVerdict::violation_found;
      }
    }
  }
  if (report.evaluated == 0) report.max_im_phi = kNaN;
  return report;
}

FidReport check_fid_grid(const FamilyParams& params, const GridSpec& grid, double tol) {
  require_admissible(params, "check_fid_grid");
  FidReport report =
      check_fid_grid([&](Complex z) { return voiculescu_phi(params, z); }, grid, tol);
  report.params = params;
  return report;
}

Complex phi_cubic(Complex s0, Complex z) {
  ensure_finite(z, "phi_cubic");
  const Complex den = 3.0 * z * z + 3.0 * s0 * z + s0 * s0;
  if (std::abs(den) <= kCutTolerance) throw DomainError("phi_cubic: pole");
  return (-3.0 * s0 * z * z - s0 * s0 * z) / den;
}

double im_phi_cubic_pi2(double x, double y) {
  const double x2 = x * x;
  const double y2 = y * y;
  // |3 z^2 + 3 i z - 1|^2 with z = x + iy
  const double re = 3.0 * (x2 - y2) - 3.0 * y - 1.0;
  const double im = 6.0 * x * y + 3.0 * x;
  const double den = re * re + im * im;
  if (den <= kCutTolerance) throw DomainError("im_phi_cubic_pi2: pole");
  const double num = 9.0 * x2 * x2 + 18.0 * x2 * y2 + 9.0 * y2 * y2 + 12.0 * x2 * y +
                     12.0 * y2 * y + 6.0 * y2 + y;
  return -num / den;
}

LimitEstimate levy_density_estimate(const FamilyParams& params, double x, double y0,
                                    int levels) {
  if (x == 0.0 || !std::isfinite(x)) {
    throw DomainError("levy_density: x must be finite and nonzero");
  }
  require_admissible(params, "levy_density");
  const LimitEstimate f =
      density_from_G([&](Complex z) { return voiculescu_phi(params, z); }, x, y0, levels);
  return {f.value / (x * x), f.error / (x * x)};
}

double levy_density_numeric(const FamilyParams& params, double x, double y0, int levels) {
  return levy_density_estimate(params, x, y0, levels).value;
}

double levy_beta_closed(double r, double x) {
  if (!(r > 1.0 && r < 2.0)) throw DomainError("levy_beta_closed: r must lie in (1, 2)");
  if (!std::isfinite(x)) throw DomainError("levy_beta_closed: x must be finite");
  const double edge = 1.0 / r;
  if (!(x > 0.0 && x < edge)) return 0.0;
  const double a = std::pow(edge - x, r);
  const double b = std::pow(x, r);
  const double den = a * a - 2.0 * b * a * std::cos(r * kPi) + b * b;
  return std::abs(std::sin(r * kPi)) / kPi * std::pow(x, r - 2.0) * a / den;
}

double levy_cubic_closed(double x) {
  const double x2 = x * x;
  return 9.0 * x2 / (kPi * (9.0 * x2 * x2 + 3.0 * x2 + 1.0));
}

std::optional<Complex> find_E_zero(double alpha, Complex s, double r) {
  const FamilyParams params(alpha, s, r);
  require_admissible(params, "find_E_zero");
  if (!(r > 1.0)) return std::nullopt;
  for (int m = 1; m < r; ++m) {
    const int k = (m % 2 == 1) ? (m + 1) / 2 : -(m / 2);
    if (!(2.0 * std::abs(k) < r)) continue;
    const Complex w = std::polar(1.0, kTwoPi * k / r);
    const Complex t = (1.0 - w) * r / s;
    if (on_upper_cut(t)) continue;
    const double angle = arg_upper(t);
    if (!(angle > 0.0 && angle < alpha * kPi)) continue;
    const Complex z = -1.0 / pow_upper(t, 1.0 / alpha);
    if (!(z.imag() > 0.0)) continue;
    try {
      if (std::abs(inverse_inner(params, z)) < 1e-10) return z;
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

double r0_threshold(double alpha, Complex s) {
  if (!is_admissible(alpha, s)) throw AdmissibilityError("r0_threshold: not admissible");
  const double theta = normalized_arg(s);
  // rays 1 + rho e^{i psi} of the shifted sector; a ray with cos psi < 0 meets
  // the unit circle again at angle 2 psi + pi
  double widest = 0.0;
  for (const double psi : {theta - kPi, theta - kPi + alpha * kPi}) {
    if (!(std::cos(psi) < 0.0)) continue;
    double phi = std::remainder(2.0 * psi + kPi, kTwoPi);
    widest = std::max(widest, std::abs(phi));
  }
  return widest > 0.0 ? kTwoPi / widest : kInfinity;
}

UiResult ui_heuristic(const ComplexFunction& map, const GridSpec& grid) {
  validate_grid(grid);
  const std::size_t nx = grid.nx;
  const std::size_t n = nx * grid.ny;
  std::vector<Complex> values(n, Complex(kNaN, kNaN));
  parallel_for(grid.ny, [&](std::size_t iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      try {
        values[iy * nx + ix] = map(grid.point(ix, iy));
      } catch (const Error&) {
      }
    }
  });
  auto ok = [&](std::size_t i) { return std::isfinite(values[i].real()) && std::isfinite(values[i].imag()); };

  // local variation: largest jump to a 4-neighbour
  std::vector<double> spread(n, 0.0);
  for (std::size_t iy = 0; iy < grid.ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t i = iy * nx + ix;
      if (!ok(i)) continue;
      auto see = [&](std::size_t j) {
        if (ok(j)) spread[i] = std::max(spread[i], std::abs(values[i] - values[j]));
      };
      if (ix > 0) see(i - 1);
      if (ix + 1 < nx) see(i + 1);
      if (iy > 0) see(i - nx);
      if (iy + 1 < grid.ny) see(i + nx);
    }
  }
  std::vector<double> positive;
  for (std::size_t i = 0; i < n; ++i) {
    if (ok(i) && spread[i] > 0.0) positive.push_back(spread[i]);
  }
  UiResult result;
  if (positive.empty()) return result;
  std::nth_element(positive.begin(), positive.begin() + positive.size() / 2, positive.end());
  const double cell = positive[positive.size() / 2];

  using Key = std::pair<long long, long long>;
  auto key_of = [&](Complex v) {
    return Key{static_cast<long long>(std::floor(v.real() / cell)),
               static_cast<long long>(std::floor(v.imag() / cell))};
  };
  std::map<Key, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < n; ++i) {
    if (ok(i)) buckets[key_of(values[i])].push_back(i);
  }

  const double far = 4.0 * std::max(grid.dx(), grid.dy());
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ok(i)) continue;
    const Key k = key_of(values[i]);
    for (long long a = -1; a <= 1; ++a) {
      for (long long b = -1; b <= 1; ++b) {
        const auto it = buckets.find({k.first + a, k.second + b});
        if (it == buckets.end()) continue;
        for (const std::size_t j : it->second) {
          if (j <= i) continue;
          const Complex zi = grid.point(i % nx, i / nx);
          const Complex zj = grid.point(j % nx, j / nx);
          if (std::abs(zi - zj) <= far) continue;
          const double gap = std::abs(values[i] - values[j]);
          if (gap < std::max(spread[i], spread[j])) candidates.emplace_back(gap, i, j);
        }
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());
  result.candidates = candidates.size();

  constexpr std::size_t kMaxRefinements = 200;
  for (std::size_t c = 0; c < std::min(candidates.size(), kMaxRefinements); ++c) {
    const auto [gap, i, j] = candidates[c];
    const Complex z1 = grid.point(i % nx, i / nx);
    const Complex target = values[i];
    Complex w = grid.point(j % nx, j / nx);
    try {
      for (int it = 0; it < 60; ++it) {
        const Complex residual = map(w) - target;
        if (std::abs(residual) < 1e-14 * std::max(1.0, std::abs(target))) break;
        const Complex d = central_difference(map, w);
        if (std::abs(d) == 0.0) break;
        w -= residual / d;
        if (!(w.imag() > 0.0) || !std::isfinite(std::abs(w))) break;
      }
      if (!(w.imag() > 0.0) || !std::isfinite(std::abs(w))) continue;
      const double final_gap = std::abs(map(w) - target);
      if (final_gap < 1e-12 && std::abs(w - z1) > 1e-3) {
        result.collision = true;
        result.z1 = z1;
        result.z2 = w;
        result.value_gap = final_gap;
        return result;
      }
    } catch (const Error&) {
    }
  }
  return result;
}

UiReport ui_heuristic(const FamilyParams& params, const GridSpec& grid) {
  require_admissible(params, "ui_heuristic");
  UiReport report;
  report.forward = ui_heuristic([&](Complex z) { return reciprocal_F(params, z); }, grid);
  report.inverse = ui_heuristic([&](Complex z) { return inverse_F(params, z); }, grid);
  return report;
}

GridSpec default_ui_grid(const FamilyParams& params) {
  const double L = scale_of(params);
  return {-5.0 * L, 5.0 * L, 1e-3 * L, 5.0 * L, 100, 100};
}

Complex counterexample_inverse(Complex z) {
  ensure_finite(z, "counterexample_inverse");
  if (std::abs(z - 1.0) <= kCutTolerance || std::abs(z + 1.0) <= kCutTolerance) {
    throw DomainError("counterexample_inverse: pole");
  }
  return z + 1.0 / (z - 1.0) + 1.0 / (z + 1.0);
}

LimitEstimate tau_interval_mass(const FamilyParams& params, double u, double v, double y0,
                                int levels) {
  if (!(v > u)) throw DomainError("tau_interval_mass: need u < v");
  if (!(y0 > 0.0) || levels < 1) throw DomainError("tau_interval_mass: bad ladder");
  require_admissible(params, "tau_interval_mass");
  std::vector<double> samples;
  double y = y0;
  for (int k = 0; k <= levels; ++k, y *= 0.5) {
    samples.push_back(quadrature(
        [&](double x) { return -voiculescu_phi(params, Complex(x, y)).imag() / kPi; }, u, v));
  }
  return richardson_limit(samples);
}

double tau_atom(const FamilyParams& params, double x) {
  require_admissible(params, "tau_atom");
  const double mass = atom_mass([&](Complex z) { return voiculescu_phi(params, z); }, x);
  return mass / (1.0 + x * x);
}

LevyTriplet levy_triplet(const FamilyParams& params, std::span<const double> xs, double y0,
                         int levels) {
  require_admissible(params, "levy_triplet");
  std::vector<double> grid;
  for (const double x : xs) {
    if (x != 0.0) grid.push_back(x);
  }
  std::vector<double> values(grid.size());
  std::vector<double> errors(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    // same policy as density_table: a singular node keeps an err at least as large as its value
    try {
      const LimitEstimate est = levy_density_estimate(params, grid[i], y0, levels);
      values[i] = est.value;
      errors[i] = est.error;
    } catch (const ConvergenceError& e) {
      const double x2 = grid[i] * grid[i];
      values[i] = std::max(0.0, e.best_estimate() / x2);
      errors[i] = std::max(e.error_estimate(), std::abs(e.best_estimate())) / x2;
    }
  });
  std::vector<double> ladder;
  double y = y0;
  for (int k = 0; k <= levels; ++k, y *= 0.5) ladder.push_back(y);

  LevyTriplet triplet;
  triplet.gamma = voiculescu_phi(params, Complex(0.0, 1.0)).real();
  triplet.a = std::max(0.0, tau_atom(params, 0.0));
  triplet.nu = DensityTable(std::move(grid), std::move(values), std::move(errors),
                            std::move(ladder));
  return triplet;
}

}  // namespace freeconv
