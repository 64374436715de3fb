#include "xydm/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "xydm/acceptance.hpp"
#include "xydm/chain.hpp"
#include "xydm/ed.hpp"
#include "xydm/errors.hpp"
#include "xydm/measures.hpp"
#include "xydm/sweep.hpp"
#include "xydm/table_io.hpp"

namespace xydm::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OracleViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamFlags {
  double J = 1.0;
  double gamma = 0.0;
  double D = 0.0;
  double T = 0.0;
  double beta = 0.0;
  int r = 1;
  CLI::Option* j_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* d_opt = nullptr;
  CLI::Option* t_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* r_opt = nullptr;

  void attach(CLI::App* app) {
    j_opt = app->add_option("--J", J, "coupling J (default 1)");
    gamma_opt = app->add_option("--gamma", gamma, "anisotropy gamma (default 0)");
    d_opt = app->add_option("--D", D, "DM strength D (default 0)");
    t_opt = app->add_option("--T", T, "temperature, 0 = ground state (default 0)");
    beta_opt = app->add_option("--beta", beta, "inverse temperature, 0 = infinite temperature");
    t_opt->excludes(beta_opt);
    r_opt = app->add_option("--r", r, "site separation (default 1)");
  }

  std::vector<CLI::Option*> all() const { return {j_opt, gamma_opt, d_opt, t_opt, beta_opt, r_opt}; }

  ChainParams params() const {
    ChainParams p;
    p.J = J;
    p.gamma = gamma;
    p.D = D;
    p.temperature = T;
    if (beta_opt->count()) {
      if (!(beta >= 0.0) || !std::isfinite(beta)) throw UsageError("--beta must be finite and >= 0");
      p.temperature = beta == 0.0 ? kInfiniteTemperature : 1.0 / beta;
    }
    return p;
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + path);
  f << text;
  if (!f) throw UsageError("failed writing " + path);
}

nlohmann::json point_json(const ChainParams& p, int r, const CorrelationSet& c, const MeasureReport& m) {
  nlohmann::json params{{"J", p.J},
                        {"gamma", p.gamma},
                        {"D", p.D},
                        {"T", json_number(p.temperature)},
                        {"beta", json_number(p.beta())},
                        {"r", r}};
  if (p.is_finite()) params["N"] = p.sites();
  return {{"params", params},
          {"correlations", {{"sz", c.sz}, {"xx", c.xx}, {"yy", c.yy}, {"zz", c.zz}}},
          {"measures",
           {{"MI", m.mutual_information},
            {"QD", m.quantum_discord},
            {"CC", m.classical_correlation},
            {"C", m.concurrence},
            {"discord_branch", std::string(to_string(m.discord_branch))},
            {"lambda_cap", m.lambda_cap},
            {"clamp_correction", m.clamp_correction}}}};
}

std::string point_csv(const ChainParams& p, int r, const CorrelationSet& c, const MeasureReport& m) {
  std::vector<std::string> header{"J", "gamma", "D", "T", "r"};
  std::vector<double> values{p.J, p.gamma, p.D, p.temperature, static_cast<double>(r)};
  if (p.is_finite()) {
    header.emplace_back("N");
    values.push_back(p.sites());
  }
  for (const char* q : {"sz", "xx", "yy", "zz", "MI", "QD", "CC", "C"}) header.emplace_back(q);
  for (double v : {c.sz, c.xx, c.yy, c.zz, m.mutual_information, m.quantum_discord,
                   m.classical_correlation, m.concurrence}) {
    values.push_back(v);
  }
  header.emplace_back("error");
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << format_number(values[i]);
  os << ",\n";
  return os.str();
}

// Largest absolute difference between numeric leaves; structural differences are infinite.
double json_distance(const nlohmann::json& a, const nlohmann::json& b) {
  if (a.is_number() && b.is_number()) return std::abs(a.get<double>() - b.get<double>());
  if (a.type() != b.type()) return std::numeric_limits<double>::infinity();
  if (a.is_object()) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (const auto& [k, v] : a.items()) {
      if (!b.contains(k)) return std::numeric_limits<double>::infinity();
      d = std::max(d, json_distance(v, b.at(k)));
    }
    return d;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, json_distance(a[i], b[i]));
    return d;
  }
  return a == b ? 0.0 : std::numeric_limits<double>::infinity();
}

constexpr double kGoldenTolerance = 1e-10;
constexpr double kFiniteSizeTolerance = 5e-2;

std::string oracle_table(const ed::ComparisonReport& rep) {
  std::ostringstream os;
  os << "quantity,TL";
  for (const auto& s : rep.sizes) os << ",ED_N" << s.sites << ",delta_N" << s.sites << ",formula_N" << s.sites;
  os << ",shrinking\n";
  for (std::size_t q = 0; q < 8; ++q) {
    os << ed::Observables::names[q] << ',' << format_number(rep.thermodynamic.values[q]);
    for (const auto& s : rep.sizes) {
      os << ',' << format_number(s.exact.values[q]) << ',' << format_number(s.delta.values[q]) << ','
         << format_number(s.finite_formula.values[q]);
    }
    os << ',' << (rep.shrinking[q] ? "yes" : "no") << '\n';
  }
  return os.str();
}

Axis parse_axis_or_throw(const std::string& s) {
  const auto a = parse_axis(s);
  if (!a) throw UsageError("unknown axis '" + s + "' (expected J, gamma, D or T)");
  return *a;
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw UsageError(what + ": '" + s + "' is not a number");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, sep);) out.push_back(tok);
  return out;
}

AxisSpec parse_axis_flag(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 4) throw UsageError("--axis expects name:min:max:n, got '" + s + "'");
  AxisSpec a;
  a.parameter = parse_axis_or_throw(parts[0]);
  a.min = parse_double(parts[1], "--axis min");
  a.max = parse_double(parts[2], "--axis max");
  char* end = nullptr;
  const long n = std::strtol(parts[3].c_str(), &end, 10);
  if (parts[3].empty() || *end != '\0' || n < 1 || n > 10'000'000) {
    throw UsageError("--axis point count must be a positive integer");
  }
  a.n_points = static_cast<int>(n);
  return a;
}

void require_valid(const ChainParams& p) {
  try {
    validate(p);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Correlations, quantum discord and concurrence of the anisotropic XY chain with a DM term",
               "xydm"};
  app.require_subcommand(1);

  // point
  auto* point = app.add_subcommand("point", "evaluate one parameter point");
  ParamFlags point_flags;
  point_flags.attach(point);
  int point_n = 0;
  std::string point_format = "csv";
  std::string point_output;
  std::string golden;
  bool bless = false;
  double point_quad_tol = QuadratureOptions{}.abs_tolerance;
  auto* point_n_opt = point->add_option("--N", point_n, "finite ring size (mode sums instead of integrals)");
  point->add_option("--format", point_format)->check(CLI::IsMember({"csv", "json"}));
  point->add_option("--output", point_output, "write to this file instead of stdout");
  auto* golden_opt = point->add_option("--golden", golden, "compare against this golden JSON file");
  point->add_flag("--bless", bless, "rewrite the golden file after an exact-diagonalization check")
      ->needs(golden_opt);
  point->add_option("--quad-tol", point_quad_tol, "absolute quadrature tolerance");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "scan one or two parameters");
  ParamFlags sweep_flags;
  sweep_flags.attach(sweep);
  std::vector<std::string> axis_flags;
  std::string spec_file;
  std::vector<std::string> deriv_flags;
  std::string quantities_flag;
  std::string sweep_format = "csv";
  std::string sweep_output;
  int sweep_workers = 0;
  double sweep_quad_tol = QuadratureOptions{}.abs_tolerance;
  auto* axis_opt = sweep->add_option("--axis", axis_flags, "name:min:max:n (one axis; use --spec for two)");
  auto* spec_opt = sweep->add_option("--spec", spec_file, "JSON sweep specification");
  auto* deriv_opt = sweep->add_option("--deriv", deriv_flags, "derivative request quantity:axis, e.g. QD:J");
  auto* quant_opt = sweep->add_option("--quantities", quantities_flag, "comma-separated output columns");
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--output", sweep_output, "write to this file instead of stdout");
  auto* workers_opt = sweep->add_option("--workers", sweep_workers, "worker threads (default XYDM_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  auto* quad_opt = sweep->add_option("--quad-tol", sweep_quad_tol, "absolute quadrature tolerance");
  spec_opt->excludes(axis_opt)->excludes(deriv_opt)->excludes(quant_opt);
  for (auto* o : sweep_flags.all()) spec_opt->excludes(o);
  (void)workers_opt;

  // oracle
  auto* oracle = app.add_subcommand("oracle", "compare against exact diagonalization");
  ParamFlags oracle_flags;
  oracle_flags.attach(oracle);
  int oracle_n = 12;
  bool oracle_gauge = false;
  double oracle_tol = kFiniteSizeTolerance;
  std::string oracle_format = "csv";
  oracle->add_option("--N", oracle_n, "largest ring size (sizes N-4, N-2, N are used)");
  auto* gauge_opt = oracle->add_flag("--gauge", oracle_gauge, "check the DM gauge mapping instead");
  auto* tol_opt = oracle->add_option("--tolerance", oracle_tol, "allowed |ED - thermodynamic limit|");
  oracle->add_option("--format", oracle_format)->check(CLI::IsMember({"csv", "json"}));
  gauge_opt->excludes(tol_opt)->excludes(oracle_flags.r_opt)->excludes(oracle_flags.t_opt)->excludes(
      oracle_flags.beta_opt);

  // check
  auto* check = app.add_subcommand("check", "run the acceptance suite");
  std::string filter;
  bool check_json = false;
  std::string check_output;
  int check_workers = 0;
  check->add_option("--filter", filter, "comma-separated criterion ids or names");
  check->add_flag("--json", check_json, "emit the machine-readable result document");
  check->add_option("--output", check_output, "write to this file instead of stdout");
  check->add_option("--workers", check_workers, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (point->parsed()) {
      ChainParams p = point_flags.params();
      if (point_n_opt->count()) p.lattice = FiniteRing{point_n};
      require_valid(p);
      if (point_flags.r < 1 || point_flags.r > kMaxSeparation) throw UsageError("--r out of range");
      QuadratureOptions q;
      q.abs_tolerance = point_quad_tol;
      if (!(q.abs_tolerance > 0.0)) throw UsageError("--quad-tol must be positive");
      const CorrelationSet c = correlations(p, point_flags.r, q);
      const MeasureReport m = discord_closed_form(xstate_from_correlations(c));
      const nlohmann::json doc = point_json(p, point_flags.r, c, m);

      if (bless) {
        ChainParams fp = p;
        fp.lattice = ThermodynamicLimit{};
        const auto rep = ed::compare_with_analytic(fp, point_flags.r, {8, 10, 12});
        out << oracle_table(rep);
        if (p.is_finite() || rep.max_delta_at_largest() > kFiniteSizeTolerance || !rep.all_shrinking()) {
          throw OracleViolation("refusing to bless: exact-diagonalization check did not pass");
        }
        std::ofstream f(golden, std::ios::binary);
        if (!f) throw UsageError("cannot write golden file " + golden);
        f << doc.dump(2) << '\n';
        err << "blessed " << golden << '\n';
        return kOk;
      }
      emit(point_format == "json" ? doc.dump(2) + "\n" : point_csv(p, point_flags.r, c, m), point_output, out);
      if (!golden.empty()) {
        std::ifstream f(golden);
        if (!f) throw UsageError("cannot read golden file " + golden);
        const nlohmann::json expected = nlohmann::json::parse(f);
        const double d = json_distance(expected, doc);
        if (!(d <= kGoldenTolerance)) {
          err << "golden mismatch: max deviation " << d << '\n';
          return kOracleViolation;
        }
      }
      return kOk;
    }

    if (sweep->parsed()) {
      SweepSpec spec;
      if (!spec_file.empty()) {
        std::ifstream f(spec_file);
        if (!f) throw UsageError("cannot read spec file " + spec_file);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(f);
        } catch (const nlohmann::json::exception& e) {
          throw UsageError(std::string("spec file is not valid JSON: ") + e.what());
        }
        try {
          spec = sweep_spec_from_json(j);
        } catch (const std::exception& e) {
          throw UsageError(std::string("spec file: ") + e.what());
        }
      } else {
        if (axis_flags.size() != 1) {
          throw UsageError("give exactly one --axis inline; two-axis sweeps need --spec");
        }
        spec.axes = {parse_axis_flag(axis_flags[0])};
        spec.base = sweep_flags.params();
        spec.r = sweep_flags.r;
        const std::map<Axis, CLI::Option*> fixed{{Axis::J, sweep_flags.j_opt},
                                                 {Axis::Gamma, sweep_flags.gamma_opt},
                                                 {Axis::D, sweep_flags.d_opt}};
        const Axis swept = spec.axes[0].parameter;
        if (fixed.count(swept) && fixed.at(swept)->count()) {
          throw UsageError("--" + std::string(to_string(swept)) + " conflicts with --axis on the same parameter");
        }
        if (swept == Axis::Temperature && (sweep_flags.t_opt->count() || sweep_flags.beta_opt->count())) {
          throw UsageError("--T/--beta conflict with a temperature axis");
        }
        for (const auto& d : deriv_flags) {
          const auto parts = split(d, ':');
          if (parts.size() != 2) throw UsageError("--deriv expects quantity:axis, got '" + d + "'");
          const auto qty = parse_quantity(parts[0]);
          if (!qty) throw UsageError("unknown quantity '" + parts[0] + "'");
          spec.derivatives.push_back({*qty, parse_axis_or_throw(parts[1])});
        }
        if (!quantities_flag.empty()) {
          for (const auto& name : split(quantities_flag, ',')) {
            const auto qty = parse_quantity(name);
            if (!qty) throw UsageError("unknown quantity '" + name + "'");
            spec.quantities.push_back(*qty);
          }
        }
      }
      if (quad_opt->count()) {
        if (!(sweep_quad_tol > 0.0)) throw UsageError("--quad-tol must be positive");
        spec.quadrature.abs_tolerance = sweep_quad_tol;
      }
      try {
        validate(spec);
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
      const SweepTable table = run_sweep(spec, sweep_workers);
      std::ostringstream os;
      if (sweep_format == "json") {
        os << to_json(table).dump(2) << '\n';
      } else {
        write_csv(table, os);
      }
      emit(os.str(), sweep_output, out);
      if (const auto n = table.failures()) err << "warning: " << n << " of " << table.rows.size() << " points failed\n";
      return kOk;
    }

    if (oracle->parsed()) {
      if (oracle_n < ed::kMinSites || oracle_n > ed::kMaxSites || oracle_n % 2) {
        throw UsageError("--N must be even and within [4, 14]");
      }
      ChainParams p = oracle_flags.params();
      require_valid(p);
      if (oracle_gauge) {
        const ChainParams partner = ed::gauge_partner(p);
        const ed::GaugeReport g = ed::verify_gauge_equivalence(p, partner, oracle_n);
        nlohmann::json doc{{"A", {{"J", p.J}, {"gamma", p.gamma}, {"D", p.D}}},
                           {"B", {{"J", partner.J}, {"gamma", partner.gamma}, {"D", partner.D}}},
                           {"N", oracle_n},
                           {"spectra_match", g.spectra_match},
                           {"measures_match", g.measures_match},
                           {"spectra_deviation", g.spectra_deviation},
                           {"measures_deviation", g.measures_deviation},
                           {"twisted_spectra_deviation", g.twisted_spectra_deviation}};
        if (oracle_format == "json") {
          out << doc.dump(2) << '\n';
        } else {
          out << "check,deviation,tolerance,match\n"
              << "spectra," << format_number(g.spectra_deviation) << ','
              << format_number(ed::kGaugeSpectraTolerance) << ',' << (g.spectra_match ? "yes" : "no") << '\n'
              << "measures," << format_number(g.measures_deviation) << ','
              << format_number(ed::kGaugeMeasuresTolerance) << ',' << (g.measures_match ? "yes" : "no") << '\n'
              << "spectra_with_boundary_twist," << format_number(g.twisted_spectra_deviation) << ','
              << format_number(ed::kGaugeSpectraTolerance) << ','
              << (g.twisted_spectra_deviation <= ed::kGaugeSpectraTolerance ? "yes" : "no") << '\n';
        }
        return g.spectra_match && g.measures_match ? kOk : kOracleViolation;
      }
      std::vector<int> sizes;
      for (int n : {oracle_n - 4, oracle_n - 2, oracle_n}) {
        if (n >= ed::kMinSites) sizes.push_back(n);
      }
      const auto rep = ed::compare_with_analytic(p, oracle_flags.r, sizes);
      const bool within = rep.max_delta_at_largest() <= oracle_tol;
      const bool shrinking = rep.all_shrinking();
      if (oracle_format == "json") {
        nlohmann::json doc{{"params", {{"J", p.J}, {"gamma", p.gamma}, {"D", p.D}, {"T", json_number(p.temperature)}}},
                           {"r", oracle_flags.r},
                           {"tolerance", oracle_tol},
                           {"max_delta", rep.max_delta_at_largest()},
                           {"all_shrinking", shrinking}};
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t q = 0; q < 8; ++q) {
          nlohmann::json row{{"quantity", std::string(ed::Observables::names[q])},
                             {"thermodynamic", json_number(rep.thermodynamic.values[q])},
                             {"shrinking", rep.shrinking[q]}};
          for (const auto& s : rep.sizes) {
            const std::string n = std::to_string(s.sites);
            row["ed_N" + n] = json_number(s.exact.values[q]);
            row["delta_N" + n] = json_number(s.delta.values[q]);
            row["formula_N" + n] = json_number(s.finite_formula.values[q]);
          }
          rows.push_back(row);
        }
        doc["rows"] = rows;
        out << doc.dump(2) << '\n';
      } else {
        out << oracle_table(rep);
        out << "max_delta," << format_number(rep.max_delta_at_largest()) << ",tolerance,"
            << format_number(oracle_tol) << ",shrinking," << (shrinking ? "yes" : "no") << '\n';
      }
      return within && shrinking ? kOk : kOracleViolation;
    }

    if (check->parsed()) {
      const auto selected = acceptance::select(filter);
      if (selected.empty()) throw UsageError("--filter matches no criterion");
      const auto results = acceptance::run(selected, check_workers > 0 ? check_workers : default_workers());
      const std::string text =
          check_json ? acceptance::to_json(results).dump(2) + "\n" : acceptance::to_table(results);
      emit(text, check_output, out);
      const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
      return all ? kOk : kAcceptanceFailure;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const OracleViolation& e) {
    err << "error: " << e.what() << '\n';
    return kOracleViolation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const StructuralError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace xydm::cli
