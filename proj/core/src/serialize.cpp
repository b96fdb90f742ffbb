#include "freeconv/serialize.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "freeconv/errors.hpp"

namespace freeconv {

namespace {

double parse_real(const std::string& text, std::string_view whole) {
  if (text.empty()) throw DomainError("cannot parse complex number '" + std::string(whole) + "'");
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw DomainError("cannot parse complex number '" + std::string(whole) + "'");
  }
  return v;
}

// "" -> 1, "+" -> 1, "-" -> -1, otherwise a number
double parse_coefficient(const std::string& text, std::string_view whole) {
  if (text.empty() || text == "+") return 1.0;
  if (text == "-") return -1.0;
  return parse_real(text, whole);
}

}  // namespace

Json complex_to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const Json& j) {
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

Complex parse_complex(std::string_view text) {
  // blanks may surround the sign ("1 + 2i") but never split a number
  std::string body;
  bool gap = false;
  for (const char c : text) {
    if (c == ' ' || c == '\t') {
      gap = !body.empty();
      continue;
    }
    if (gap && c != '+' && c != '-' && body.back() != '+' && body.back() != '-') {
      throw DomainError("cannot parse complex number '" + std::string(text) + "'");
    }
    gap = false;
    body.push_back(c);
  }
  if (body.empty()) throw DomainError("empty complex number");
  if (body.back() != 'i' && body.back() != 'j') return parse_real(body, text);
  body.pop_back();

  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    const char c = body[k];
    if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, parse_coefficient(body, text)};
  return {parse_real(body.substr(0, split), text), parse_coefficient(body.substr(split), text)};
}

std::string format_complex(Complex z) {
  return format_double(z.real()) + " " + format_double(z.imag());
}

Json to_json(const FamilyParams& params) {
  return Json{{"alpha", params.alpha()},
              {"s", complex_to_json(params.s())},
              {"r", params.r()},
              {"theta", params.theta()},
              {"admissible", params.admissible()}};
}

Json to_json(const GridSpec& grid) {
  return Json{{"xmin", grid.xmin}, {"xmax", grid.xmax}, {"ymin", grid.ymin},
              {"ymax", grid.ymax}, {"nx", grid.nx},     {"ny", grid.ny}};
}

Json to_json(const FidReport& report) {
  Json j;
  j["verdict"] = to_string(report.verdict);
  if (report.witness) {
    j["witness"] = complex_to_json(*report.witness);
    j["witness_im_phi"] = report.witness_im_phi;
  } else {
    j["witness"] = nullptr;
  }
  j["max_im_phi"] = report.max_im_phi;
  j["argmax_point"] = complex_to_json(report.argmax);
  j["tolerance"] = report.tol;
  j["grid_spec"] = to_json(report.grid);
  j["params"] = report.params ? to_json(*report.params) : Json(nullptr);
  j["evaluated"] = report.evaluated;
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    failures.push_back(Json{{"z", complex_to_json(f.z)}, {"message", f.message}});
  }
  j["failures"] = std::move(failures);
  return j;
}

Json to_json(const DensityTable& table, const std::string& value_column) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < table.size(); ++i) {
    rows.push_back(Json{{"x", table.xs()[i]},
                        {value_column, table.values()[i]},
                        {"err", table.errors()[i]}});
  }
  return Json{{"y_ladder", table.y_ladder()},
              {"clamped", table.clamped_count()},
              {"rows", std::move(rows)}};
}

Json to_json(const LevyTriplet& triplet) {
  return Json{{"gamma", triplet.gamma}, {"a", triplet.a}, {"nu", to_json(triplet.nu, "nu")}};
}

Json to_json(const ResidualReport& report) {
  return Json{{"identity", report.identity},
              {"params", report.params},
              {"grid_spec", report.grid_spec},
              {"max_residual", report.residual.max_residual},
              {"argmax_point", complex_to_json(report.residual.argmax)},
              {"tolerance", report.tolerance},
              {"pass", report.pass()}};
}

}  // namespace freeconv
