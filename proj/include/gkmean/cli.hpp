#pragma once

#include <chrono>
#include <complex>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gkmean/errors.hpp"
#include "gkmean/gkformula.hpp"
#include "gkmean/laurent.hpp"
#include "gkmean/problem.hpp"
#include "gkmean/report.hpp"
#include "gkmean/verifier.hpp"
#include "gkmean/zerofinder.hpp"

namespace gkmean::cli {

inline constexpr const char* kToolName = "gkmean";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { kOk = 0, kInputError = 2, kNumericalError = 3 };

struct Options {
  std::string command;
  std::string input;
  std::optional<double> R;
  std::string R_list = "5,10,20,40";
  double tol = 0.05;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string emit_points;
  double margin = 0.5;
  bool timing = false;
};

/// Parsed command output: the JSON results object plus its CSV rendering.
struct CommandOutput {
  nlohmann::json results;
  std::string csv;
};

namespace detail {

inline std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("'" + item + "' in --R-list is not a number");
    }
  }
  return out;
}

inline nlohmann::json frequency_json(const Frequency& a) {
  if (a.size() == 1) return to_string(a.coords()[0]);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& q : a.coords()) arr.push_back(to_string(q));
  return arr;
}

inline nlohmann::json frequencies_json(const std::vector<Frequency>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : v) arr.push_back(frequency_json(a));
  return arr;
}

inline std::string csv_complex_row(const std::string& name, std::complex<double> z) {
  return name + "," + format_double(z.real()) + "," + format_double(z.imag()) + "\n";
}

inline QuadratureConfig quadrature_config(const Options& o) {
  QuadratureConfig cfg;
  cfg.jitter_seed = o.seed;
  cfg.strip_margin = o.margin;
  return cfg;
}

inline nlohmann::json zeros_json(const std::vector<Zero>& zeros) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& z : zeros)
    arr.push_back({{"re", z.location.real()}, {"im", z.location.imag()}, {"multiplicity", z.multiplicity}});
  return arr;
}

template <Coefficient C>
CommandOutput run_mean(const ExponentialSum<C>& f, const ExponentialSum<C>& g) {
  const MeanValueResult<C> r = mean_value(f, g);
  CommandOutput out;
  auto& j = out.results;
  j["A_first"] = complex_json(r.numeric_A_first());
  j["A_last"] = complex_json(r.numeric_A_last());
  j["M"] = complex_json(r.numeric_mean());
  j["neg_generators"] = frequencies_json(r.neg_generators);
  j["pos_generators"] = frequencies_json(r.pos_generators);
  if constexpr (std::is_same_v<C, ExactCoeff>) {
    j["exact"] = {{"A_first", to_string(r.A_first)}, {"A_last", to_string(r.A_last)}, {"M", to_string(r.mean)}};
  }
  out.csv = "quantity,re,im\n" + csv_complex_row("A_first", r.numeric_A_first()) +
            csv_complex_row("A_last", r.numeric_A_last()) + csv_complex_row("M", r.numeric_mean());
  return out;
}

template <Coefficient C>
CommandOutput run_density(const ExponentialSum<C>& f, const Options& o) {
  CommandOutput out;
  const double density = mean_zero_count(f);
  out.results["mean_zero_count"] = density;
  out.results["mean_zero_count_exact"] = frequency_json(frequency_span(f));
  out.csv = "quantity,value\nmean_zero_count," + format_double(density) + "\n";
  if (o.R) {
    const FloatSum one = FloatSum::constant(FloatCoeff(1.0), f.basis());
    const EmpiricalMean em = empirical_mean(to_float(f), one, *o.R, quadrature_config(o));
    const double empirical = em.value.real();
    out.results["empirical"] = {{"R_requested", *o.R},
                                {"R_used", em.R_used()},
                                {"count", em.count()},
                                {"empirical_density", empirical},
                                {"abs_error", std::abs(empirical - density)},
                                {"outer_winding", em.search.outer_winding},
                                {"strip_bound", em.search.strip_bound}};
    out.csv += "R_used," + format_double(em.R_used()) + "\ncount," + std::to_string(em.count()) +
               "\nempirical_density," + format_double(empirical) + "\nabs_error," +
               format_double(std::abs(empirical - density)) + "\n";
  }
  return out;
}

template <Coefficient C>
CommandOutput run_zeros(const ExponentialSum<C>& f, const Options& o) {
  if (!o.R) throw InputError("zeros needs --R");
  const ZeroSearch zs = find_zeros(f, *o.R, quadrature_config(o));
  CommandOutput out;
  auto& j = out.results;
  j["R_requested"] = zs.requested_R;
  j["R_used"] = zs.ordinate;
  j["strip_bound"] = zs.strip_bound;
  j["outer_winding"] = zs.outer_winding;
  j["count"] = zs.total_multiplicity();
  j["zeros"] = zeros_json(zs.zeros);
  j["fewnomial_ok"] = fewnomial_check(zs.zeros, static_cast<int>(f.size()), mean_zero_count(f));

  std::string points = "re,im,multiplicity\n";
  for (const auto& z : zs.zeros)
    points += format_double(z.location.real()) + "," + format_double(z.location.imag()) + "," +
              std::to_string(z.multiplicity) + "\n";
  out.csv = points;
  if (!o.emit_points.empty()) {
    std::ofstream file(o.emit_points);
    if (!file) throw InputError("cannot write points file '" + o.emit_points + "'");
    file << points;
  }
  return out;
}

template <Coefficient C>
CommandOutput run_verify(const ExponentialSum<C>& f, const ExponentialSum<C>& g, const Options& o) {
  const std::vector<double> R_list = parse_csv_doubles(o.R_list);
  const ConvergenceReport rep = convergence_report(f, g, R_list, quadrature_config(o), o.tol);
  CommandOutput out;
  auto& j = out.results;
  j["symbolic_mean"] = complex_json(rep.symbolic_mean);
  j["tolerance"] = rep.tolerance;
  j["median_error_ratio"] = rep.median_ratio;
  j["verdict"] = rep.pass ? "pass" : "fail";
  nlohmann::json rows = nlohmann::json::array();
  bool fewnomial = true, conserved = true;
  out.csv = "R,R_used,count,weighted_sum_re,weighted_sum_im,empirical_mean_re,empirical_mean_im,abs_error\n";
  for (const auto& r : rep.rows) {
    rows.push_back({{"R", r.R},
                    {"R_used", r.R_used},
                    {"count", r.count},
                    {"weighted_sum", complex_json(r.weighted_sum)},
                    {"empirical_mean", complex_json(r.empirical_mean)},
                    {"abs_error", r.abs_error}});
    fewnomial = fewnomial && r.fewnomial_ok;
    conserved = conserved && r.conserved;
    out.csv += format_double(r.R) + "," + format_double(r.R_used) + "," + std::to_string(r.count) + "," +
               format_double(r.weighted_sum.real()) + "," + format_double(r.weighted_sum.imag()) + "," +
               format_double(r.empirical_mean.real()) + "," + format_double(r.empirical_mean.imag()) + "," +
               format_double(r.abs_error) + "\n";
  }
  j["rows"] = rows;
  j["fewnomial_ok"] = fewnomial;
  j["conserved"] = conserved;
  return out;
}

template <Coefficient C>
CommandOutput run_laurent_check(const ExponentialSum<C>& f, const ExponentialSum<C>& g) {
  const SubstitutedPair p = substitute_rational(f, g);
  const double q = static_cast<double>(p.q);
  const std::complex<double> residue = residue_formula_sum(p.f, p.g) / q;
  const std::complex<double> roots = sum_over_roots(p.f, p.g) / q;
  const std::complex<double> mean = mean_value(f, g).numeric_mean();
  CommandOutput out;
  auto& j = out.results;
  j["q"] = p.q;
  j["residue_formula_sum"] = complex_json(residue);
  j["sum_over_roots"] = complex_json(roots);
  j["mean_value"] = complex_json(mean);
  j["max_discrepancy"] = std::max({std::abs(residue - roots), std::abs(residue - mean), std::abs(roots - mean)});
  out.csv = "quantity,re,im\n" + csv_complex_row("residue_formula_sum", residue) +
            csv_complex_row("sum_over_roots", roots) + csv_complex_row("mean_value", mean);
  return out;
}

template <Coefficient C>
CommandOutput dispatch(const ProblemFile& problem, const Options& o) {
  const auto [f, g] = problem.build<C>();
  if (o.command == "mean") return run_mean(f, g);
  if (o.command == "density") return run_density(f, o);
  if (o.command == "zeros") return run_zeros(f, o);
  if (o.command == "verify") return run_verify(f, g, o);
  if (o.command == "laurent-check") return run_laurent_check(f, g);
  throw InputError("unknown command '" + o.command + "'");
}

inline nlohmann::json options_json(const Options& o) {
  nlohmann::json j;
  j["format"] = o.format;
  if (o.command == "density" || o.command == "zeros" || o.command == "verify") {
    j["seed"] = o.seed;
    j["margin"] = o.margin;
  }
  if (o.R && (o.command == "density" || o.command == "zeros")) j["R"] = *o.R;
  if (o.command == "verify") {
    j["R_list"] = parse_csv_doubles(o.R_list);
    j["tol"] = o.tol;
  }
  return j;
}

}  // namespace detail

/// Executes one command and writes the report to `out`.
inline int execute(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const auto start = std::chrono::steady_clock::now();
    const ProblemFile problem = ProblemFile::load(o.input);
    const CommandOutput result = problem.mode == CoeffMode::Exact ? detail::dispatch<ExactCoeff>(problem, o)
                                                                   : detail::dispatch<FloatCoeff>(problem, o);
    if (o.format == "csv") {
      out << result.csv;
      return kOk;
    }
    nlohmann::json env;
    env["command"] = o.command;
    env["inputs"] = {{"problem", problem.to_json()}, {"options", detail::options_json(o)}};
    env["results"] = result.results;
    env["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    if (o.timing) {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      env["timing"] = {{"wall_seconds", secs}};
    }
    out << dump_canonical(env);
    return kOk;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  }
}

/// Parses `args` (without the program name) and runs the selected command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean value of an exponential sum over the zeros of another", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "problem file (JSON)")->required();
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--timing", o.timing, "include wall-clock timing in the report");
  };
  auto add_numeric = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "jitter seed for contour subdivision");
    sub->add_option("--margin", o.margin, "tail-sum margin for the strip bound")->check(CLI::Range(0.0, 1.0));
  };

  auto* mean = app.add_subcommand("mean", "A_1, A_n, mean value M and support generators");
  add_common(mean);
  auto* density = app.add_subcommand("density", "mean number of zeros; with --R also the empirical count");
  add_common(density);
  add_numeric(density);
  density->add_option("--R", o.R, "half-height of the counting window");
  auto* zeros = app.add_subcommand("zeros", "zeros of f with |Im z| < R'");
  add_common(zeros);
  add_numeric(zeros);
  zeros->add_option("--R", o.R, "half-height of the search window")->required();
  zeros->add_option("--emit-points", o.emit_points, "write re,im,multiplicity rows to this CSV file");
  auto* verify = app.add_subcommand("verify", "convergence of S(R)/2R to the symbolic mean");
  add_common(verify);
  add_numeric(verify);
  verify->add_option("--R-list", o.R_list, "comma-separated increasing R values");
  verify->add_option("--tol", o.tol, "tolerance on the error at the largest R");
  auto* laurent = app.add_subcommand("laurent-check", "residue formula vs root sum vs mean value");
  add_common(laurent);

  std::vector<std::string> argv_store{kToolName};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kInputError;
  }
  for (auto* sub : {mean, density, zeros, verify, laurent})
    if (sub->parsed()) o.command = sub->get_name();
  return execute(o, out, err);
}

}  // namespace gkmean::cli
