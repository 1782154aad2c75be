#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "skipfree/chain_io.hpp"
#include "skipfree/errors.hpp"
#include "skipfree/hitting_law.hpp"
#include "skipfree/oracle.hpp"
#include "skipfree/table.hpp"
#include "skipfree/verify.hpp"

namespace skipfree::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kNumerical = 2, kIo = 3 };

enum class Format { csv, json };

struct RunConfig {
  std::string command;
  std::string input_path;
  Format format = Format::csv;
  std::string out_path;
  double eps = kDefaultPmfEps;
  double tol = kDefaultRealTolerance;
  std::optional<double> grid_max;
  std::size_t grid_points = kDefaultGridPoints;
  std::string method = "auto";
  std::uint64_t seed = 1;
  std::size_t paths = 10000;
  std::size_t verify_paths = 0;
  std::size_t start_state = 0;
  std::size_t lanes = 0;
  bool histogram = false;
};

namespace detail {

inline std::string quoted(const std::string& s) { return "\"" + s + "\""; }

inline DensityMethod parse_method(const std::string& m) {
  if (m == "auto") return DensityMethod::automatic;
  if (m == "partial_fractions") return DensityMethod::partial_fractions;
  return DensityMethod::uniformization;
}

inline void emit_table(std::ostream& os, const DistributionTable& t, Format f) {
  if (f == Format::csv)
    write_csv(os, t);
  else
    write_json(os, t);
}

inline void emit_validate(std::ostream& os, const Chain& chain, Format f) {
  const auto kind = std::holds_alternative<DiscreteChain>(chain) ? "discrete" : "continuous";
  const auto d = absorbing_state(chain);
  if (f == Format::csv)
    os << "kind,d,valid\n" << kind << ',' << d << ",true\n";
  else
    os << "{\"kind\":\"" << kind << "\",\"d\":" << d << ",\"valid\":true}\n";
}

inline void emit_spectrum(std::ostream& os, const Spectrum& s, Format f) {
  if (f == Format::csv) {
    os << "index,real,imag,classification\n";
    for (std::size_t i = 0; i < s.values.size(); ++i)
      os << i << ',' << format_number(s.values[i].real()) << ',' << format_number(s.values[i].imag()) << ','
         << to_string(s.classification) << '\n';
    return;
  }
  os << "{\"kind\":\"" << to_string(s.kind) << "\",\"classification\":\"" << to_string(s.classification)
     << "\",\"tolerance\":" << format_number(s.tolerance_used) << ",\"values\":[";
  for (std::size_t i = 0; i < s.values.size(); ++i)
    os << (i ? "," : "") << '[' << format_number(s.values[i].real()) << ',' << format_number(s.values[i].imag()) << ']';
  os << "]}\n";
}

inline void emit_law(std::ostream& os, const HittingLaw& law, Format f) {
  const auto phase = phase_representation(law);
  const auto mom = moments(law);
  if (f == Format::csv) {
    os << "quantity,index,value\n";
    os << "leading,0," << format_number(law.leading) << '\n';
    for (std::size_t k = 0; k < law.denom.size(); ++k) os << "denominator," << k << ',' << format_number(law.denom[k]) << '\n';
    for (std::size_t i = 0; i < law.spectrum.values.size(); ++i) {
      os << "eigenvalue_real," << i << ',' << format_number(law.spectrum.values[i].real()) << '\n';
      os << "eigenvalue_imag," << i << ',' << format_number(law.spectrum.values[i].imag()) << '\n';
    }
    if (phase.applicable())
      for (std::size_t i = 0; i < phase.parameters->size(); ++i)
        os << "phase_parameter," << i << ',' << format_number((*phase.parameters)[i]) << '\n';
    os << "mean,0," << format_number(mom.mean) << '\n';
    os << "variance,0," << format_number(mom.variance) << '\n';
    return;
  }
  os << "{\"kind\":\"" << to_string(law.kind) << "\",\"d\":" << law.d << ",\"leading\":" << format_number(law.leading)
     << ",\"denominator\":[";
  for (std::size_t k = 0; k < law.denom.size(); ++k) os << (k ? "," : "") << format_number(law.denom[k]);
  os << "],\"classification\":\"" << to_string(law.spectrum.classification) << "\",\"eigenvalues\":[";
  for (std::size_t i = 0; i < law.spectrum.values.size(); ++i)
    os << (i ? "," : "") << '[' << format_number(law.spectrum.values[i].real()) << ','
       << format_number(law.spectrum.values[i].imag()) << ']';
  os << "],\"phase_parameters\":";
  if (phase.applicable()) {
    os << '[';
    for (std::size_t i = 0; i < phase.parameters->size(); ++i) os << (i ? "," : "") << format_number((*phase.parameters)[i]);
    os << ']';
  } else {
    os << "null";
  }
  os << ",\"mean\":" << format_number(mom.mean) << ",\"variance\":" << format_number(mom.variance) << "}\n";
}

inline void emit_moments(std::ostream& os, const Moments& m, Format f) {
  if (f == Format::csv)
    os << "mean,variance\n" << format_number(m.mean) << ',' << format_number(m.variance) << '\n';
  else
    os << "{\"mean\":" << format_number(m.mean) << ",\"variance\":" << format_number(m.variance) << "}\n";
}

template <class T>
void emit_samples(std::ostream& os, const std::vector<T>& xs, const RunConfig& cfg) {
  auto fmt = [](T x) {
    if constexpr (std::is_integral_v<T>)
      return std::to_string(x);
    else
      return format_number(x);
  };
  if (cfg.format == Format::csv) {
    os << "path,hitting_time\n";
    for (std::size_t i = 0; i < xs.size(); ++i) os << i << ',' << fmt(xs[i]) << '\n';
    return;
  }
  os << "{\"seed\":" << cfg.seed << ",\"paths\":" << xs.size() << ",\"start_state\":" << cfg.start_state
     << ",\"samples\":[";
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << fmt(xs[i]);
  os << "]}\n";
}

inline void emit_reports(std::ostream& os, const std::vector<oracle::ComparisonReport>& reports, Format f) {
  if (f == Format::csv) {
    os << "check,max_abs_err,mean_err,n_points,threshold,passed\n";
    for (const auto& r : reports)
      os << r.name << ',' << format_number(r.max_abs_err) << ',' << format_number(r.mean_err) << ',' << r.n_points << ','
         << format_number(r.threshold) << ',' << (r.passed ? "true" : "false") << '\n';
    return;
  }
  os << '[';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    os << (i ? "," : "") << "{\"check\":" << quoted(r.name) << ",\"max_abs_err\":" << format_number(r.max_abs_err)
       << ",\"mean_err\":" << format_number(r.mean_err) << ",\"n_points\":" << r.n_points
       << ",\"threshold\":" << format_number(r.threshold) << ",\"passed\":" << (r.passed ? "true" : "false") << '}';
  }
  os << "]\n";
}

inline DistributionTable continuous_table(const HittingLaw& law, const RunConfig& cfg) {
  const double t_max = cfg.grid_max ? *cfg.grid_max : 5.0 * moments(law).mean;
  return pdf_cdf_table(law, make_grid(t_max, cfg.grid_points), parse_method(cfg.method));
}

// Runs one command; returns its exit code. Errors other than I/O propagate.
inline int dispatch(const RunConfig& cfg, std::ostream& doc, std::ostream& console) {
  const Chain chain = load_chain(cfg.input_path);
  const auto& cmd = cfg.command;
  if (cmd == "validate") {
    emit_validate(doc, chain, cfg.format);
    return kOk;
  }
  if (cmd == "spectrum") {
    const auto s = std::visit([&](const auto& c) { return eigenvalues(c, cfg.tol); }, chain);
    emit_spectrum(doc, s, cfg.format);
    return kOk;
  }
  if (cmd == "sample") {
    const oracle::SamplerConfig sc{cfg.seed, cfg.paths, cfg.start_state, cfg.lanes};
    std::visit([&](const auto& c) { emit_samples(doc, oracle::sample_hitting_times(c, sc), cfg); }, chain);
    return kOk;
  }
  if (cmd == "verify") {
    VerifyOptions vo;
    vo.eps = cfg.eps;
    vo.real_tol = cfg.tol;
    vo.paths = cfg.verify_paths;
    vo.seed = cfg.seed;
    vo.lanes = cfg.lanes;
    const auto reports = verify(chain, vo);
    emit_reports(doc, reports, cfg.format);
    return all_passed(reports) ? kOk : kNumerical;
  }

  const HittingLaw law = build_law(chain, cfg.tol);
  if (cmd == "law") {
    emit_law(doc, law, cfg.format);
    return kOk;
  }
  if (cmd == "moments") {
    emit_moments(doc, moments(law), cfg.format);
    return kOk;
  }
  DistributionTable table;
  if (cmd == "pmf") {
    table = pmf_table(law, cfg.eps);
  } else if (cmd == "pdf") {
    table = continuous_table(law, cfg);
  } else {  // cdf
    table = law.kind == TimeKind::discrete ? pmf_table(law, cfg.eps) : continuous_table(law, cfg);
  }
  emit_table(doc, table, cfg.format);
  if (cfg.histogram) write_histogram(console, table);
  return kOk;
}

}  // namespace detail

/*
 * Command-line entry point. Exit codes: 0 success, 1 invalid input or usage,
 * 2 numerical failure (including a failed verify), 3 I/O error.
 * Documents go to `out` (or --out), diagnostics to `err`.
 */
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact hitting-time laws of skip-free Markov chains", "skipfree"};
  app.require_subcommand(1);
  RunConfig cfg;
  const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};

  auto common = [&](CLI::App* sub) {
    sub->add_option("chain", cfg.input_path, "Chain-spec JSON file")->required();
    sub->add_option("--format", cfg.format, "Output format: csv or json (default csv)")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description(""))
        ->type_name("csv|json");
    sub->add_option("--out", cfg.out_path, "Write the document to this file instead of standard output");
    sub->add_option("--tol", cfg.tol, "Relative tolerance for treating eigenvalues as real (default 1e-9)")
        ->check(CLI::PositiveNumber);
  };
  auto table_opts = [&](CLI::App* sub) {
    sub->add_option("--eps", cfg.eps, "Stop the pmf table once the missing mass is below eps (default 1e-12)");
    sub->add_option("--grid-max", cfg.grid_max, "Last time of the continuous grid (default 5 x mean)");
    sub->add_option("--grid-points", cfg.grid_points, "Number of grid points (default 200)")->check(CLI::PositiveNumber);
    sub->add_option("--method", cfg.method, "Density method: auto, partial_fractions or uniformization (default auto)")
        ->check(CLI::IsMember({"auto", "partial_fractions", "uniformization"}));
    sub->add_flag("--histogram", cfg.histogram, "Also print a 60-column text histogram to standard output");
  };

  std::map<std::string, CLI::App*> subs;
  auto add = [&](const std::string& name, const std::string& help) {
    subs[name] = app.add_subcommand(name, help);
    common(subs[name]);
    return subs[name];
  };
  add("validate", "Parse and validate a chain");
  add("spectrum", "Transient-block eigenvalues and their classification");
  add("law", "Denominator polynomial, spectrum, phase parameters and moments");
  table_opts(add("pmf", "Point masses of the hitting time (discrete chains)"));
  table_opts(add("pdf", "Density and CDF on a time grid (continuous chains)"));
  table_opts(add("cdf", "Cumulative distribution table (pmf table for discrete chains)"));
  add("moments", "Mean and variance of the hitting time");
  auto* sample = add("sample", "Simulate hitting times");
  sample->add_option("--seed", cfg.seed, "Random seed (default 1)");
  sample->add_option("--paths", cfg.paths, "Number of paths (default 10000)")->check(CLI::PositiveNumber);
  sample->add_option("--start-state", cfg.start_state, "Start state (default 0)");
  sample->add_option("--lanes", cfg.lanes, "Worker threads, 0 = all cores (default 0)");
  auto* ver = add("verify", "Check every closed form against its brute-force oracle");
  ver->add_option("--eps", cfg.eps, "pmf table eps (default 1e-12)");
  ver->add_option("--paths", cfg.verify_paths, "Also compare the mean with this many simulated paths (default 0: off)");
  ver->add_option("--seed", cfg.seed, "Random seed for the Monte Carlo check (default 1)");
  ver->add_option("--lanes", cfg.lanes, "Worker threads, 0 = all cores (default 0)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalid;
  }
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) cfg.command = name;

  try {
    if (cfg.out_path.empty()) return detail::dispatch(cfg, out, out);
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + cfg.out_path + "' for writing");
    const int code = detail::dispatch(cfg, file, out);
    file.flush();
    if (!file) throw IoError("failed writing '" + cfg.out_path + "'");
    return code;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args), out, err);
}

}  // namespace skipfree::cli
