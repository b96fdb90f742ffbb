#include <doctest.h>

#include <cmath>
#include <vector>

#include "freeconv/errors.hpp"
#include "freeconv/fid.hpp"
#include "freeconv/stable_poisson.hpp"
#include "property.hpp"

using namespace freeconv;

namespace {

const Complex I(0.0, 1.0);

}  // namespace

TEST_CASE("grid geometry") {
  const FamilyParams p(1.0, 3.0 * I, 3.0);
  const GridSpec g = default_fid_grid(p);
  CHECK(g.xmin == -15.0);
  CHECK(g.xmax == 15.0);
  CHECK(g.ymin == doctest::Approx(3e-6));
  CHECK(g.nx == 400);
  CHECK(g.ny == 200);
  CHECK(g.point(0, 0) == Complex(g.xmin, g.ymin));
  CHECK(std::abs(g.point(g.nx - 1, g.ny - 1) - Complex(g.xmax, g.ymax)) <= 1e-14);
}

TEST_CASE("FID verdicts of the cubic family") {
  // the window [-5, 5] x (1e-6, 5] from the examples
  GridSpec g{-5.0, 5.0, 1e-6, 5.0, 400, 200};
  const FidReport ok = check_fid_grid(FamilyParams(1.0, 3.0 * I, 3.0), g);
  CHECK(ok.verdict == FidVerdict::no_violation_on_grid);
  CHECK_FALSE(ok.witness.has_value());
  CHECK(ok.evaluated == g.nx * g.ny);

  for (const Complex s : {std::polar(3.0, kPi / 4), Complex(-3.0, 0.0)}) {
    const FidReport bad = check_fid_grid(FamilyParams(1.0, s, 3.0), g);
    CHECK(bad.verdict == FidVerdict::violation_found);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness_im_phi > bad.tol);
    CHECK(voiculescu_phi(FamilyParams(1.0, s, 3.0), *bad.witness).imag() > bad.tol);
  }
}

TEST_CASE("FID ranges give no violation") {
  proptest::for_all(12, 51, [](proptest::Gen& g) {
    double alpha, r;
    if (g.coin()) {
      alpha = g.uniform(0.1, 1.0);
      r = g.uniform(1.0, 2.0);
    } else {
      alpha = g.uniform(1.0, 2.0);
      r = g.uniform(1.0, 2.0 / alpha);
    }
    const double lo = alpha <= 1.0 ? (1.0 - alpha) * kPi : 0.0;
    const double hi = alpha <= 1.0 ? kPi : (2.0 - alpha) * kPi;
    const Complex s = std::polar(g.magnitude(0.3, 3.0), g.uniform(lo, hi));
    const FamilyParams p(alpha, s, r);
    GridSpec grid = default_fid_grid(p);
    grid.nx = 120;
    grid.ny = 60;
    CHECK(check_fid_grid(p, grid).verdict == FidVerdict::no_violation_on_grid);
  });
}

TEST_CASE("isolated spikes are not reported") {
  // Im phi positive at a single sample only
  const GridSpec g{-1.0, 1.0, 0.1, 1.0, 21, 10};
  const Complex spike = g.point(10, 3);
  const ComplexFunction phi = [&](Complex z) {
    return std::abs(z - spike) < 1e-12 ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
  };
  const FidReport rep = check_fid_grid(phi, g);
  CHECK(rep.verdict == FidVerdict::no_violation_on_grid);
  CHECK(rep.max_im_phi == 1.0);
}

TEST_CASE("evaluation failures are recorded, not fatal") {
  const GridSpec g{-1.0, 1.0, 0.1, 1.0, 11, 10};
  const ComplexFunction phi = [](Complex z) -> Complex {
    if (std::abs(z.real()) < 1e-12) throw BranchError("cut");
    return Complex(0.0, -z.imag());
  };
  const FidReport rep = check_fid_grid(phi, g);
  CHECK(rep.failures.size() == 10);
  CHECK(rep.evaluated == 100);
  CHECK(rep.verdict == FidVerdict::no_violation_on_grid);
}

TEST_CASE("the witness is the first confirmed sample in row-major order") {
  const GridSpec g{0.0, 9.0, 1.0, 9.0, 10, 9};
  const ComplexFunction phi = [](Complex z) { return Complex(0.0, z.real() >= 6.0 && z.imag() >= 4.0 ? 1.0 : -1.0); };
  const FidReport rep = check_fid_grid(phi, g);
  REQUIRE(rep.witness.has_value());
  CHECK(*rep.witness == Complex(6.0, 4.0));
}

TEST_CASE("cubic closed forms") {
  for (const Complex s0 : {I, std::polar(1.0, kPi / 4), Complex(-1.0, 0.0)}) {
    const FamilyParams p(1.0, 3.0 * s0, 3.0);
    for (const Complex z : cone_grid(default_cone(p), 200)) {
      CHECK(std::abs(phi_cubic(s0, z) - voiculescu_phi(p, z)) <= 1e-11);
    }
  }
  proptest::for_all(2000, 52, [](proptest::Gen& g) {
    const double x = g.uniform(-10.0, 10.0);
    const double y = g.uniform(1e-9, 10.0);
    const double v = im_phi_cubic_pi2(x, y);
    CHECK(v < 0.0);
    CHECK(std::abs(v - phi_cubic(I, Complex(x, y)).imag()) <= 1e-12 * std::max(1.0, std::abs(v)));
  });
  // boundary values: -9x^4 / |3x^2 + 3ix - 1|^2
  for (double x : {0.3, 1.0, 2.5}) {
    const double den = std::norm(Complex(3 * x * x - 1.0, 3 * x));
    CHECK(std::abs(im_phi_cubic_pi2(x, 0.0) + 9 * std::pow(x, 4) / den) <= 1e-15);
  }
  CHECK_THROWS_AS(phi_cubic(0.0, 0.0), DomainError);
}

TEST_CASE("Levy density of the cubic case") {
  const FamilyParams p(1.0, 3.0 * I, 3.0);
  CHECK(std::abs(levy_density_numeric(p, 1.0) - 9.0 / (13.0 * kPi)) <= 1e-6);
  CHECK(levy_cubic_closed(1.0) == doctest::Approx(9.0 / (13.0 * kPi)).epsilon(1e-15));
  CHECK(levy_cubic_closed(0.0) == 0.0);
  for (double x : {0.2, 1.7}) CHECK(levy_cubic_closed(x) == levy_cubic_closed(-x));
  CHECK_THROWS_AS(levy_density_numeric(p, 0.0), DomainError);
}

TEST_CASE("Levy density of the beta family") {
  const FamilyParams p(1.0, -1.0, 1.5);
  CHECK(std::abs(levy_density_numeric(p, 0.3) - levy_beta_closed(1.5, 0.3)) <= 1e-5);
  CHECK(std::abs(levy_density_numeric(p, 0.8)) <= 1e-6);
  // regression value, by direct substitution at x = 1/3
  const double x = 1.0 / 3.0;
  const double a = std::pow(2.0 / 3.0 - x, 1.5);
  const double b = std::pow(x, 1.5);
  const double expect = 1.0 / kPi * std::pow(x, -0.5) * a / (a * a + b * b);  // cos(1.5 pi) = 0
  CHECK(levy_beta_closed(1.5, x) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(levy_beta_closed(1.5, 2.0 / 3.0 - 1e-9) < 1e-10);
  CHECK(levy_beta_closed(1.5, 0.9) == 0.0);
  CHECK_THROWS_AS(levy_beta_closed(2.0, 0.1), DomainError);
  // min(1, x^2) against nu is finite
  const double m = quadrature([](double t) { return t * t * levy_beta_closed(1.5, t); }, 0.0, 2.0 / 3.0, 0.5, 1.5);
  CHECK(std::isfinite(m));
  CHECK(m > 0.0);
}

TEST_CASE("r = 2: the Levy density is the stable density") {
  for (auto [a, s] : std::vector<std::pair<double, Complex>>{{2.0, 1.0}, {0.5, -1.0}, {1.0, I}}) {
    const FamilyParams p(a, s, 2.0);
    const StableParams st(a, s / 4.0);
    for (double x : {-1.3, -0.2, 0.15, 0.35, 1.1, 2.0}) {
      if (a == 2.0 && std::abs(std::abs(x) - 0.5) < 0.1) continue;
      CHECK(std::abs(levy_density_numeric(p, x) - stable_density(st, x)) < 1e-4);
    }
  }
}

TEST_CASE("E zeros") {
  const auto z = find_E_zero(1.0, -1.0, 3.0);
  REQUIRE(z.has_value());
  CHECK(std::abs(*z - Complex(1.0 / 6.0, 1.0 / (6.0 * std::sqrt(3.0)))) <= 1e-10);
  CHECK(std::abs(inverse_inner(FamilyParams(1.0, -1.0, 3.0), *z)) < 1e-12);
  CHECK_FALSE(find_E_zero(1.0, -1.0, 2.0).has_value());
  const auto w = find_E_zero(1.5, 1.0, 8.0);
  REQUIRE(w.has_value());
  CHECK(w->imag() > 0.0);
  CHECK(std::abs(inverse_inner(FamilyParams(1.5, 1.0, 8.0), *w)) < 1e-10);
  CHECK(r0_threshold(1.5, 1.0) == doctest::Approx(2.0));
  CHECK_FALSE(find_E_zero(1.5, 1.0, 1.9).has_value());
  CHECK(find_E_zero(1.5, 1.0, 2.1).has_value());
}

TEST_CASE("property: zeros exist past r0 and none where the grid certifies") {
  proptest::for_all(40, 53, [](proptest::Gen& g) {
    const double alpha = g.uniform(1.05, 2.0);
    const Complex s = std::polar(g.magnitude(0.3, 3.0), g.uniform(0.0, (2.0 - alpha) * kPi));
    const double r0 = r0_threshold(alpha, s);
    if (!std::isfinite(r0)) return;
    const double r = r0 * g.uniform(1.05, 3.0);
    const auto z = find_E_zero(alpha, s, r);
    REQUIRE(z.has_value());
    CHECK(std::abs(inverse_inner(FamilyParams(alpha, s, r), *z)) < 1e-10);
  });
  for (auto [a, s, r] : std::vector<std::tuple<double, Complex, double>>{{1.0, -1.0, 2.0}, {1.0, 3.0 * I, 3.0}, {0.5, -1.0, 2.0}, {2.0, 1.0, 1.0}}) {
    const FamilyParams p(a, s, r);
    if (check_fid_grid(p, default_fid_grid(p)).verdict == FidVerdict::no_violation_on_grid) {
      CHECK_FALSE(find_E_zero(a, s, r).has_value());
    }
  }
}

TEST_CASE("UI heuristic") {
  for (auto [a, s, r] : std::vector<std::tuple<double, Complex, double>>{{1.0, -1.0, 2.0}, {2.0, 1.0, 1.0}}) {
    const FamilyParams p(a, s, r);
    CHECK_FALSE(ui_heuristic(p, default_ui_grid(p)).collision());
  }
  const UiResult hit = ui_heuristic(counterexample_inverse, GridSpec{-3.0, 3.0, 1e-3, 3.0, 100, 100});
  REQUIRE(hit.collision);
  CHECK(hit.z1.imag() > 0.0);
  CHECK(hit.z2.imag() > 0.0);
  CHECK(std::abs(hit.z1 - hit.z2) > 1e-3);
  CHECK(std::abs(counterexample_inverse(hit.z1) - counterexample_inverse(hit.z2)) < 1e-12);
  // phi = 1/(z-1) + 1/(z+1) maps C_+ into C_-
  proptest::for_all(500, 54, [](proptest::Gen& g) {
    const Complex z = g.upper(1e-2, 1e2, 1e-3);
    CHECK((counterexample_inverse(z) - z).imag() < 0.0);
  });
}

TEST_CASE("tau masses") {
  const FamilyParams trivial(1.0, -1.0, 1.0);
  CHECK(tau_interval_mass(trivial, -1.0, 2.0).value == 0.0);
  const FamilyParams p(1.0, 3.0 * I, 3.0);
  const LimitEstimate m = tau_interval_mass(p, 0.5, 1.5);
  // (1 + x^2) tau = x^2 nu on the continuous part
  const double ref = quadrature([](double x) { return x * x * levy_cubic_closed(x); }, 0.5, 1.5);
  CHECK(std::abs(m.value - ref) <= 1e-5);
  CHECK(std::abs(tau_atom(FamilyParams(2.0, 1.0, 2.0), 0.0)) <= 1e-6);
}

TEST_CASE("Levy triplet survives a node on the support edge") {
  // x = 1/2 is the edge of the Levy measure for (1, -1, 2)
  const LevyTriplet t = levy_triplet(FamilyParams(1.0, -1.0, 2.0), linspace(-1.0, 1.0, 9));
  CHECK(t.nu.size() == 8);
  for (std::size_t i = 0; i < t.nu.size(); ++i) {
    CHECK(std::isfinite(t.nu.values()[i]));
    CHECK(std::isfinite(t.nu.errors()[i]));
  }
}

TEST_CASE("Levy triplet") {
  const FamilyParams p(1.0, 3.0 * I, 3.0);
  const LevyTriplet t = levy_triplet(p, linspace(-3.0, 3.0, 31));
  CHECK(t.nu.size() == 30);  // x = 0 dropped
  CHECK(t.a >= 0.0);
  CHECK(std::abs(t.gamma - voiculescu_phi(p, I).real()) == 0.0);
  for (std::size_t i = 0; i < t.nu.size(); ++i) {
    CHECK(std::abs(t.nu.values()[i] - levy_cubic_closed(t.nu.xs()[i])) < 1e-5);
  }
}
