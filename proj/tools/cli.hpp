#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "freeconv/branches.hpp"
#include "freeconv/serialize.hpp"

namespace freeconv::cli {

enum ExitCode : int {
  kOk = 0,
  kComputationError = 1,
  kConfigError = 2,
  kVerificationFailure = 3,
};

enum class Format { csv, json, plotdata };

struct RunConfig {
  std::string command;
  std::string law = "family";
  double alpha = 1.0;
  Complex s{-1.0, 0.0};
  double r = 2.0;
  double u = 0.5;  // composition partner for verify
  std::optional<double> xmin, xmax, ymin, ymax;
  std::size_t n = 201;
  std::optional<std::size_t> nx, ny;
  std::optional<double> tol;
  double y0 = 1e-2;
  int levels = 8;
  Format format = Format::csv;
  std::string out;  // empty: stdout
  std::string transform = "G";
  Complex z{0.0, 1.0};
  std::string suite = "all";
};

Json to_json(const RunConfig& config);

/// Full command line in, exit code out. Reports go to `out` (or --out),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run(argc, const_cast<const char* const*>(argv), out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freeconv::cli
