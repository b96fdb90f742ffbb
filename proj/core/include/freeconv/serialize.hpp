#pragma once

// JSON views of reports, and the a+bi text form of complex numbers.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "freeconv/branches.hpp"
#include "freeconv/family.hpp"
#include "freeconv/fid.hpp"
#include "freeconv/stieltjes.hpp"

namespace freeconv {

using Json = nlohmann::ordered_json;

/// {"re": ..., "im": ...}
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

/// Parses "a", "bi", "a+bi", "a-bi", "i", "-i", with optional exponents.
/// Throws DomainError on anything else.
Complex parse_complex(std::string_view text);

/// Two numbers "re im" with 17 significant digits.
std::string format_complex(Complex z);

Json to_json(const FamilyParams& params);
Json to_json(const GridSpec& grid);
Json to_json(const FidReport& report);
Json to_json(const LevyTriplet& triplet);
Json to_json(const DensityTable& table, const std::string& value_column = "density");

struct ResidualReport {
  std::string identity;
  Json params;
  Json grid_spec;
  Residual residual;
  double tolerance = 0.0;

  bool pass() const { return residual.max_residual <= tolerance; }
};

Json to_json(const ResidualReport& report);

}  // namespace freeconv
