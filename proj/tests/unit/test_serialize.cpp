#include <doctest.h>

#include <cmath>

#include "freeconv/errors.hpp"
#include "freeconv/serialize.hpp"

using namespace freeconv;

TEST_CASE("parse_complex accepts the usual spellings") {
  CHECK(parse_complex("2") == Complex(2.0, 0.0));
  CHECK(parse_complex("-1") == Complex(-1.0, 0.0));
  CHECK(parse_complex("3i") == Complex(0.0, 3.0));
  CHECK(parse_complex("i") == Complex(0.0, 1.0));
  CHECK(parse_complex("-i") == Complex(0.0, -1.0));
  CHECK(parse_complex("1+2i") == Complex(1.0, 2.0));
  CHECK(parse_complex("1.5-0.25i") == Complex(1.5, -0.25));
  CHECK(parse_complex("1e-3+2e2i") == Complex(1e-3, 200.0));
  CHECK(parse_complex("-2-i") == Complex(-2.0, -1.0));
  CHECK(parse_complex("0.5+2j") == Complex(0.5, 2.0));
  CHECK(parse_complex(" 1 + 2i ") == Complex(1.0, 2.0));
}

TEST_CASE("parse_complex rejects junk") {
  for (const char* bad : {"", "abc", "1+", "2ii", "1+2", "i3", "1 2"}) {
    CHECK_THROWS_AS(parse_complex(bad), DomainError);
  }
}

TEST_CASE("complex JSON round trip") {
  for (const Complex z : {Complex(0.1, -3.0), Complex(-1e300, 1e-300), Complex(0.0, 0.0)}) {
    const Json j = complex_to_json(z);
    CHECK(j.at("re").get<double>() == z.real());
    CHECK(complex_from_json(Json::parse(j.dump())) == z);
  }
  CHECK(format_complex(Complex(0.0, -0.5)) == "0 -0.5");
}

TEST_CASE("family parameters as JSON") {
  const Json j = to_json(FamilyParams(1.5, Complex(0.0, 1.0), 1.25));
  CHECK(j.at("alpha").get<double>() == 1.5);
  CHECK(j.at("r").get<double>() == 1.25);
  CHECK(complex_from_json(j.at("s")) == Complex(0.0, 1.0));
}

TEST_CASE("FID report fields") {
  const GridSpec g{-1.0, 1.0, 0.1, 1.0, 5, 4};
  const FidReport rep = check_fid_grid([](Complex z) { return Complex(0.0, -z.imag()); }, g);
  const Json j = to_json(rep);
  CHECK(j.at("verdict").get<std::string>() == "no-violation-on-grid");
  CHECK(j.at("witness").is_null());
  CHECK(j.at("grid_spec").at("nx").get<int>() == 5);
  CHECK(j.at("tolerance").get<double>() == kFidTolerance);
}

TEST_CASE("residual report") {
  ResidualReport r;
  r.identity = "composition";
  r.params = to_json(FamilyParams(1.0, -1.0, 2.0));
  r.grid_spec = Json{{"points", 3}};
  r.residual.max_residual = 2e-12;
  r.residual.argmax = Complex(1.0, 1.0);
  r.tolerance = 1e-10;
  const Json j = to_json(r);
  CHECK(j.at("identity") == "composition");
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("max_residual").get<double>() == 2e-12);
  CHECK(complex_from_json(j.at("argmax_point")) == Complex(1.0, 1.0));
  r.tolerance = 1e-13;
  CHECK_FALSE(to_json(r).at("pass").get<bool>());
}

TEST_CASE("density table JSON") {
  const DensityTable t({0.0, 1.0}, {0.5, 0.25}, {0.0, 1e-9}, {});
  const Json j = to_json(t, "nu");
  CHECK(j.at("rows").size() == 2);
  CHECK(j.at("rows")[1].at("nu").get<double>() == 0.25);
}
