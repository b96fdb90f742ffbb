#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include <CLI11.hpp>

#include "freeconv/errors.hpp"
#include "freeconv/family.hpp"
#include "freeconv/fid.hpp"
#include "freeconv/stable_poisson.hpp"
#include "freeconv/stieltjes.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv::cli {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* format_name(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::plotdata: return "plotdata";
  }
  return "csv";
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::vector<std::string> header_lines(const RunConfig& cfg) {
  return {"freeconv " + cfg.command, "config " + to_json(cfg).dump()};
}

// temp file in the target directory, then rename over the target
void atomic_write(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out.empty()) {
    out << content;
  } else {
    atomic_write(cfg.out, content);
  }
}

bool needs_admissible(const std::string& law) { return law == "family" || law == "stable"; }

void validate(const RunConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 2.0)) throw ConfigError("--alpha must lie in (0, 2]");
  if (!std::isfinite(cfg.s.real()) || !std::isfinite(cfg.s.imag()) || std::abs(cfg.s) == 0.0) {
    throw ConfigError("--s must be finite and nonzero");
  }
  if (!(cfg.r > 0.0) || !std::isfinite(cfg.r)) throw ConfigError("--r must be positive");
  if (!(cfg.u > 0.0) || !std::isfinite(cfg.u)) throw ConfigError("--u must be positive");
  if (cfg.n == 0) throw ConfigError("--n must be positive");
  if ((cfg.nx && *cfg.nx == 0) || (cfg.ny && *cfg.ny == 0)) {
    throw ConfigError("--nx/--ny must be positive");
  }
  if (cfg.xmin && cfg.xmax && !(*cfg.xmin <= *cfg.xmax)) {
    throw ConfigError("--xmin must not exceed --xmax");
  }
  if (cfg.ymin && !(*cfg.ymin > 0.0)) throw ConfigError("--ymin must be positive");
  if (cfg.ymin && cfg.ymax && !(*cfg.ymin <= *cfg.ymax)) {
    throw ConfigError("--ymin must not exceed --ymax");
  }
  if (cfg.tol && !(*cfg.tol >= 0.0)) throw ConfigError("--tol must be nonnegative");
  if (!(cfg.y0 > 0.0)) throw ConfigError("--y0 must be positive");
  if (cfg.levels < 1 || cfg.levels > 40) throw ConfigError("--levels must lie in [1, 40]");

  const bool family_like = cfg.command != "density" && cfg.command != "eval";
  if ((family_like || needs_admissible(cfg.law)) && !is_admissible(cfg.alpha, cfg.s)) {
    throw ConfigError("--s: (alpha, s) is not admissible");
  }
  if ((cfg.command == "levy" || cfg.command == "density") && cfg.law == "family" && cfg.r < 1.0) {
    throw ConfigError("--r must be at least 1 for a probability measure");
  }
  if (cfg.law == "beta" && !(cfg.r > 1.0)) throw ConfigError("--r must exceed 1 for --law beta");
  if (cfg.law == "symbeta" && !(cfg.s.imag() == 0.0 && cfg.s.real() > 0.0)) {
    throw ConfigError("--s must be a positive real for --law symbeta");
  }
  if (cfg.command == "eval" && cfg.transform == "S" &&
      !(cfg.z.imag() == 0.0 && cfg.z.real() > -1.0 && cfg.z.real() < 0.0)) {
    throw ConfigError("--z must be real and inside (-1, 0) for --transform S");
  }
}

std::vector<double> x_grid(const RunConfig& cfg, double lo, double hi) {
  return linspace(cfg.xmin.value_or(lo), cfg.xmax.value_or(hi), cfg.n);
}

std::string render_table(const RunConfig& cfg, const DensityTable& table,
                         const std::string& column, std::vector<std::string> comments,
                         const Json& extra = Json::object()) {
  std::ostringstream os;
  switch (cfg.format) {
    case Format::csv:
      table.write_csv(os, comments, column);
      break;
    case Format::plotdata:
      table.write_plotdata(os, comments);
      break;
    case Format::json: {
      Json j{{"config", to_json(cfg)}};
      for (const auto& [k, v] : extra.items()) j[k] = v;
      j["table"] = freeconv::to_json(table, column);
      os << j.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

std::string cmd_density(const RunConfig& cfg) {
  const std::string& law = cfg.law;
  const auto xs = x_grid(cfg, -5.0, 5.0);
  auto closed = [&](const RealFunction& f) {
    return closed_form_table(
        [&](double x) {
          try {
            return f(x);
          } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (x = " + format_double(x) + ")");
          }
        },
        xs);
  };

  DensityTable table;
  if (law == "family") {
    const FamilyParams p(cfg.alpha, cfg.s, cfg.r);
    table = density_table([&](Complex z) { return cauchy_G(p, z); }, xs, cfg.y0, cfg.levels);
  } else if (law == "stable") {
    const StableParams p(cfg.alpha, cfg.s);
    table = density_table([&](Complex z) { return stable_G(p, z); }, xs, cfg.y0, cfg.levels);
  } else if (law == "mp") {
    table = density_table(mp_cauchy, xs, cfg.y0, cfg.levels);
  } else if (law == "beta") {
    table = closed([&](double x) { return closed_beta_density(cfg.r, x); });
  } else if (law == "symbeta") {
    table = closed([&](double x) { return closed_symmetric_beta_density(cfg.s.real(), x); });
  } else if (law == "cauchy-mix") {
    table = closed(example_density_cauchy_mix);
  } else if (law == "half-stable") {
    table = closed([](double x) { return x > 0.0 ? example_density_halfstable(x) : 0.0; });
  } else {
    throw ConfigError("--law: unknown law " + law);
  }
  auto comments = header_lines(cfg);
  if (table.clamped_count() > 0) {
    comments.push_back("clamped " + std::to_string(table.clamped_count()) +
                       " small negative values to 0");
  }
  return render_table(cfg, table, "density", comments);
}

std::string cmd_levy(const RunConfig& cfg) {
  const FamilyParams p(cfg.alpha, cfg.s, cfg.r);
  const auto xs = x_grid(cfg, -5.0, 5.0);
  const LevyTriplet t = levy_triplet(p, xs, cfg.y0, cfg.levels);
  auto comments = header_lines(cfg);
  comments.push_back("gamma " + format_double(t.gamma));
  comments.push_back("a " + format_double(t.a));
  return render_table(cfg, t.nu, "nu", comments, Json{{"gamma", t.gamma}, {"a", t.a}});
}

const char* fid_theory(double alpha, double r) {
  const bool known = (alpha <= 1.0 && r >= 1.0 && r <= 2.0) ||
                     (alpha >= 1.0 && r >= 1.0 && r <= 2.0 / alpha);
  return known ? "freely infinitely divisible" : "unknown";
}

std::string cmd_fid(const RunConfig& cfg) {
  const FamilyParams p(cfg.alpha, cfg.s, cfg.r);
  GridSpec g = default_fid_grid(p);
  if (cfg.xmin) g.xmin = *cfg.xmin;
  if (cfg.xmax) g.xmax = *cfg.xmax;
  if (cfg.ymin) g.ymin = *cfg.ymin;
  if (cfg.ymax) g.ymax = *cfg.ymax;
  if (cfg.nx) g.nx = *cfg.nx;
  if (cfg.ny) g.ny = *cfg.ny;
  if (!(g.xmin <= g.xmax) || !(g.ymin <= g.ymax)) {
    throw ConfigError("--xmin/--xmax/--ymin/--ymax: empty rectangle");
  }
  const FidReport report = check_fid_grid(p, g, cfg.tol.value_or(kFidTolerance));
  std::optional<Complex> zero;
  if (cfg.r > 1.0) zero = find_E_zero(cfg.alpha, cfg.s, cfg.r);

  std::ostringstream os;
  const std::string witness_re = report.witness ? format_double(report.witness->real()) : "";
  const std::string witness_im = report.witness ? format_double(report.witness->imag()) : "";
  const std::string witness_phi = report.witness ? format_double(report.witness_im_phi) : "";
  switch (cfg.format) {
    case Format::json: {
      Json j{{"config", to_json(cfg)}, {"report", freeconv::to_json(report)}};
      j["theory"] = fid_theory(cfg.alpha, cfg.r);
      j["e_zero"] = zero ? complex_to_json(*zero) : Json(nullptr);
      os << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      for (const auto& line : header_lines(cfg)) os << "# " << line << '\n';
      os << "verdict,witness_re,witness_im,witness_im_phi,max_im_phi,evaluated,failures\n";
      os << to_string(report.verdict) << ',' << witness_re << ',' << witness_im << ','
         << witness_phi << ',' << format_double(report.max_im_phi) << ',' << report.evaluated
         << ',' << report.failures.size() << '\n';
      break;
    case Format::plotdata:
      for (const auto& line : header_lines(cfg)) os << "# " << line << '\n';
      os << "# verdict " << to_string(report.verdict) << '\n';
      if (report.witness) os << witness_re << ' ' << witness_im << '\n';
      break;
  }
  return os.str();
}

struct VerifyOutcome {
  std::string text;
  bool pass = true;
};

VerifyOutcome cmd_verify(const RunConfig& cfg, bool n_given) {
  const FamilyParams p(cfg.alpha, cfg.s, cfg.r);
  const std::size_t count = n_given ? cfg.n : 1000;
  auto wants = [&](const std::string& name) { return cfg.suite == "all" || cfg.suite == name; };
  auto tol = [&](double fallback) { return cfg.tol.value_or(fallback); };
  auto cone_spec = [&](const TruncatedCone& c) {
    return Json{{"kind", "cone"}, {"eta", c.eta}, {"M", c.M}, {"count", count}};
  };

  std::vector<ResidualReport> reports;
  Json skipped = Json::array();

  const TruncatedCone cone =
      default_cone(FamilyParams(cfg.alpha, cfg.s, cfg.r * std::max(1.0, cfg.u)));
  const auto grid = cone_grid(cone, count);
  if (wants("composition")) {
    Json params = freeconv::to_json(p);
    params["u"] = cfg.u;
    reports.push_back({"composition", params, cone_spec(cone),
                       verify_composition(cfg.alpha, cfg.s, cfg.r, cfg.u, grid), tol(1e-10)});
  }
  if (wants("self-similarity")) {
    for (const double c : {0.25, 4.0}) {
      Json params = freeconv::to_json(p);
      params["c"] = c;
      reports.push_back({"self-similarity", params, cone_spec(cone),
                         verify_self_similarity(p, c, grid), tol(1e-11)});
    }
  }
  if (wants("inversion-consistency")) {
    const TruncatedCone c = default_cone(p);
    reports.push_back({"inversion-consistency", freeconv::to_json(p), cone_spec(c),
                       verify_inverse(p, cone_grid(c, count)), tol(1e-10)});
  }
  if (wants("compound-poisson")) {
    const FamilyParams p2(cfg.alpha, cfg.s, 2.0);
    const TruncatedCone c = default_cone(p2);
    reports.push_back({"compound-poisson", freeconv::to_json(p2), cone_spec(c),
                       verify_compound_poisson(cfg.alpha, cfg.s, cone_grid(c, count)),
                       tol(1e-10)});
  }
  if (wants("boxtimes")) {
    const FamilyParams p2(cfg.alpha, cfg.s, 2.0);
    if (factorization_supported(cfg.alpha, cfg.s)) {
      const auto zs = linspace(-0.95, -0.05, 20);
      const Json spec{{"kind", "interval"}, {"lo", -0.95}, {"hi", -0.05}, {"count", 20}};
      reports.push_back({"boxtimes", freeconv::to_json(p2), spec,
                         verify_boxtimes(cfg.alpha, cfg.s, zs), tol(1e-6)});
      reports.push_back({"s-closed-forms", freeconv::to_json(p2), spec,
                         verify_s_closed_forms(cfg.alpha, cfg.s, zs), tol(1e-6)});
    } else {
      skipped.push_back(Json{{"identity", "boxtimes"}, {"status", "unsupported by theory"}});
    }
  }

  VerifyOutcome outcome;
  for (const auto& rep : reports) outcome.pass = outcome.pass && rep.pass();
  std::ostringstream os;
  switch (cfg.format) {
    case Format::json: {
      Json list = Json::array();
      for (const auto& rep : reports) list.push_back(freeconv::to_json(rep));
      Json j{{"config", to_json(cfg)}, {"reports", list}, {"skipped", skipped},
             {"pass", outcome.pass}};
      os << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
    case Format::plotdata: {
      const char sep = cfg.format == Format::csv ? ',' : ' ';
      for (const auto& line : header_lines(cfg)) os << "# " << line << '\n';
      for (const auto& s : skipped) {
        os << "# skipped " << s["identity"].get<std::string>() << ": "
           << s["status"].get<std::string>() << '\n';
      }
      if (cfg.format == Format::csv) os << "identity,max_residual,tolerance,pass\n";
      for (const auto& rep : reports) {
        os << rep.identity << sep << format_double(rep.residual.max_residual) << sep
           << format_double(rep.tolerance) << sep << (rep.pass() ? "true" : "false") << '\n';
      }
      break;
    }
  }
  outcome.text = os.str();
  return outcome;
}

std::string cmd_eval(const RunConfig& cfg) {
  const std::string& t = cfg.transform;
  const Complex z = cfg.z;
  Complex value;
  if (cfg.law == "family") {
    const FamilyParams p(cfg.alpha, cfg.s, cfg.r);
    if (t == "G") value = cauchy_G(p, z);
    else if (t == "F") value = reciprocal_F(p, z);
    else if (t == "Finv") value = inverse_F(p, z);
    else if (t == "phi") value = voiculescu_phi(p, z);
    else if (t == "R") value = r_transform(p, z);
    else {
      const MeasureKind kind = factorization_supported(cfg.alpha, cfg.s)
                                   ? factorization_kind(cfg.alpha, cfg.s)
                                   : MeasureKind::positive;
      value = s_transform_numeric([&](Complex w) { return cauchy_G(p, w); }, z.real(), kind);
    }
  } else if (cfg.law == "stable") {
    const StableParams p(cfg.alpha, cfg.s);
    if (t == "G") value = stable_G(p, z);
    else if (t == "F") value = stable_F(p, z);
    else if (t == "Finv") value = stable_inverse_F(p, z);
    else if (t == "phi") value = stable_phi(p, z);
    else if (t == "R") {
      if (!(z.imag() < 0.0)) throw DomainError("R: 1/z must lie in the upper half-plane");
      value = z * stable_phi(p, 1.0 / z);
    } else if (factorization_supported(cfg.alpha, cfg.s)) {
      value = s_stable_closed(cfg.alpha, cfg.s, z.real());
    } else {
      value = s_transform_numeric([&](Complex w) { return stable_G(p, w); }, z.real(),
                                  MeasureKind::positive);
    }
  } else if (cfg.law == "mp") {
    if (t == "G") value = mp_cauchy(z);
    else if (t == "F") value = 1.0 / mp_cauchy(z);
    else if (t == "Finv") value = z + z / (z - 1.0);
    else if (t == "phi") value = z / (z - 1.0);
    else if (t == "R") value = z / (1.0 - z);
    else value = mp_s_transform(z.real());
  } else {
    throw ConfigError("--law: eval supports family, stable and mp");
  }
  ensure_finite(value, "eval");
  return format_complex(value) + "\n";
}

}  // namespace

Json to_json(const RunConfig& cfg) {
  return Json{{"command", cfg.command},
              {"law", cfg.law},
              {"alpha", cfg.alpha},
              {"s", complex_to_json(cfg.s)},
              {"r", cfg.r},
              {"u", cfg.u},
              {"xmin", optional_json(cfg.xmin)},
              {"xmax", optional_json(cfg.xmax)},
              {"ymin", optional_json(cfg.ymin)},
              {"ymax", optional_json(cfg.ymax)},
              {"n", cfg.n},
              {"nx", optional_json(cfg.nx)},
              {"ny", optional_json(cfg.ny)},
              {"tol", optional_json(cfg.tol)},
              {"y0", cfg.y0},
              {"levels", cfg.levels},
              {"format", format_name(cfg.format)},
              {"out", cfg.out},
              {"transform", cfg.transform},
              {"z", complex_to_json(cfg.z)},
              {"suite", cfg.suite}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free convolution toolkit: densities, Levy measures, FID scans, identity checks"};
  app.name("freeconv");
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig cfg;
  std::string s_text = "-1";
  std::string z_text = "i";
  std::string format_text = "csv";
  double s_mod = 0.0;
  double s_arg = 0.0;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0, tol = 0;
  std::size_t nx = 0, ny = 0;

  app.add_option("--alpha", cfg.alpha, "stability index in (0, 2]");
  auto* s_opt = app.add_option("--s", s_text, "complex scale parameter, e.g. -1, 3i, 1+2i");
  auto* mod_opt = app.add_option("--s-mod", s_mod, "|s|")->excludes(s_opt);
  auto* arg_opt = app.add_option("--s-arg", s_arg, "arg s in radians")->excludes(s_opt);
  mod_opt->needs(arg_opt);
  arg_opt->needs(mod_opt);
  app.add_option("--r", cfg.r, "family exponent r > 0");
  app.add_option("--u", cfg.u, "composition partner for verify");
  auto* xmin_opt = app.add_option("--xmin", xmin);
  auto* xmax_opt = app.add_option("--xmax", xmax);
  auto* ymin_opt = app.add_option("--ymin", ymin);
  auto* ymax_opt = app.add_option("--ymax", ymax);
  auto* n_opt = app.add_option("--n", cfg.n, "number of x points (verify: cone grid size)");
  auto* nx_opt = app.add_option("--nx", nx);
  auto* ny_opt = app.add_option("--ny", ny);
  auto* tol_opt = app.add_option("--tol", tol);
  app.add_option("--y0", cfg.y0, "first height of the extrapolation ladder");
  app.add_option("--levels", cfg.levels, "halvings of the ladder");
  app.add_option("--format", format_text)->check(CLI::IsMember({"csv", "json", "plotdata"}));
  app.add_option("--out", cfg.out, "output file, written atomically (default stdout)");
  app.add_option("--law", cfg.law)
      ->check(CLI::IsMember(
          {"family", "stable", "mp", "beta", "symbeta", "cauchy-mix", "half-stable"}));
  app.add_option("--transform", cfg.transform)
      ->check(CLI::IsMember({"G", "F", "Finv", "phi", "R", "S"}));
  app.add_option("--z", z_text, "evaluation point, e.g. 2i or 0.5+1i");
  app.add_option("--suite", cfg.suite)
      ->check(CLI::IsMember({"all", "composition", "self-similarity", "compound-poisson",
                             "boxtimes", "inversion-consistency"}));

  auto* density = app.add_subcommand("density", "density table by Stieltjes inversion or closed form");
  auto* levy = app.add_subcommand("levy", "Levy triplet of mu^alpha_{s,r}");
  auto* fid = app.add_subcommand("fid", "grid scan of Im phi");
  auto* verify = app.add_subcommand("verify", "identity residual suites");
  auto* eval = app.add_subcommand("eval", "one transform value at --z");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    for (auto* sub : {density, levy, fid, verify, eval}) {
      if (sub->parsed()) cfg.command = sub->get_name();
    }
    cfg.s = mod_opt->count() > 0 ? std::polar(s_mod, s_arg) : parse_complex(s_text);
    try {
      cfg.z = parse_complex(z_text);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("--z: ") + e.what());
    }
    if (xmin_opt->count()) cfg.xmin = xmin;
    if (xmax_opt->count()) cfg.xmax = xmax;
    if (ymin_opt->count()) cfg.ymin = ymin;
    if (ymax_opt->count()) cfg.ymax = ymax;
    if (nx_opt->count()) cfg.nx = nx;
    if (ny_opt->count()) cfg.ny = ny;
    if (tol_opt->count()) cfg.tol = tol;
    cfg.format = format_text == "json"       ? Format::json
                 : format_text == "plotdata" ? Format::plotdata
                                             : Format::csv;
    validate(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: --s: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (cfg.command == "density") {
      emit(cfg, cmd_density(cfg), out);
    } else if (cfg.command == "levy") {
      emit(cfg, cmd_levy(cfg), out);
    } else if (cfg.command == "fid") {
      emit(cfg, cmd_fid(cfg), out);
    } else if (cfg.command == "verify") {
      const VerifyOutcome v = cmd_verify(cfg, n_opt->count() > 0);
      emit(cfg, v.text, out);
      if (!v.pass) {
        err << "verification failed: residual over tolerance\n";
        return kVerificationFailure;
      }
    } else {
      emit(cfg, cmd_eval(cfg), out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  }
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("freeconv");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace freeconv::cli
