#include "cli.hpp"

#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "hodgefaas/diagnostics.hpp"
#include "hodgefaas/error.hpp"
#include "hodgefaas/fixtures.hpp"
#include "hodgefaas/flows.hpp"
#include "hodgefaas/hodge.hpp"
#include "hodgefaas/io.hpp"
#include "hodgefaas/topology.hpp"

namespace hodgefaas::cli {

namespace {

using io::Json;

struct Config {
  std::optional<double> tol;
  std::string format = "json";
  double support_fraction = 0.05;
  int laplacian = 1;
  std::optional<std::uint64_t> seed;
  std::optional<int> windows;
  std::optional<int> window;
  double eps = 1e-8;
  std::string output;
  std::vector<std::string> paths;
  std::string node_diff, covariance, weighted_metric;
  bool list = false;
};

RankTolerance tolerance(const Config& cfg) {
  if (cfg.tol) return RankTolerance(*cfg.tol);
  if (const char* env = std::getenv("HODGE_FAAS_TOL"); env && *env) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0))
      throw InputError("HODGE_FAAS_TOL must be a positive number, got '" + std::string(env) + "'");
    return RankTolerance(v);
  }
  return RankTolerance();
}

void warn_all(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

CellComplex load_complex(const std::string& path, std::ostream& err) {
  auto c = io::load_complex(path);
  warn_all(err, c.warnings());
  return c;
}

void emit(const Config& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) {
    out << text;
  } else {
    io::write_file(cfg.output, text);
  }
}

void require_format(const Config& cfg, std::initializer_list<const char*> allowed) {
  for (auto a : allowed)
    if (cfg.format == a) return;
  throw InputError("format '" + cfg.format + "' is not supported by this command");
}

int cmd_validate(const Config& cfg, std::ostream& out) {
  require_format(cfg, {"json", "text"});
  const auto& path = cfg.paths.at(0);
  auto desc = io::complex_from_json(io::load_json(path), path);
  auto rep = validate_description(desc);
  if (cfg.format == "text") {
    std::ostringstream os;
    os << (rep.ok() ? "valid" : "invalid") << ": " << path << "\n";
    for (const auto& e : rep.errors) os << "error: " << e << "\n";
    for (const auto& w : rep.warnings) os << "warning: " << w << "\n";
    emit(cfg, out, os.str());
  } else {
    Json j{{"valid", rep.ok()},
           {"nodes", desc.nodes.size()},
           {"edges", desc.edges.size()},
           {"faces", desc.faces.size()},
           {"errors", rep.errors},
           {"warnings", rep.warnings}};
    emit(cfg, out, io::dump(j));
  }
  return rep.ok() ? kOk : kValidation;
}

int cmd_betti(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json", "text"});
  auto c = load_complex(cfg.paths.at(0), err);
  auto b = betti(c, tolerance(cfg));
  if (cfg.format == "text") {
    emit(cfg, out, "beta0=" + std::to_string(b.beta0) + " beta1=" + std::to_string(b.beta1) +
                       " beta2=" + std::to_string(b.beta2) + "\n");
  } else {
    emit(cfg, out, io::betti_to_json(b).dump() + "\n");
  }
  return kOk;
}

int cmd_spectrum(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json", "text", "csv"});
  auto c = load_complex(cfg.paths.at(0), err);
  auto eigs = spectrum(c, cfg.laplacian);
  auto gap = spectral_gap(eigs, tolerance(cfg));
  if (cfg.format == "json") {
    emit(cfg, out, io::dump(io::spectrum_to_json(cfg.laplacian, eigs, gap)));
  } else {
    std::ostringstream os;
    if (cfg.format == "csv") {
      os << "index,eigenvalue\n";
      for (std::size_t i = 0; i < eigs.size(); ++i) os << i << "," << Json(eigs[i]).dump() << "\n";
    } else {
      os << "L" << cfg.laplacian << " eigenvalues:";
      for (double v : eigs) os << " " << Json(v).dump();
      os << "\nspectral gap: " << Json(gap.value).dump() << "\n";
    }
    emit(cfg, out, os.str());
  }
  return kOk;
}

std::vector<EdgeFlow> select_windows(const Config& cfg, io::ParsedFlows flows) {
  if (!cfg.window) return std::move(flows.windows);
  if (*cfg.window < 0 || static_cast<std::size_t>(*cfg.window) >= flows.windows.size())
    throw InputError("window " + std::to_string(*cfg.window) + " out of range");
  return {flows.windows[static_cast<std::size_t>(*cfg.window)]};
}

int cmd_decompose(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json", "csv"});
  auto c = load_complex(cfg.paths.at(0), err);
  auto parsed = io::load_flows(c, cfg.paths.at(1));
  warn_all(err, parsed.warnings);
  const bool windowed = parsed.windowed && !cfg.window;
  auto flows = select_windows(cfg, std::move(parsed));
  HodgeDecomposer dec(c, tolerance(cfg));

  if (cfg.format == "csv") {
    if (flows.size() != 1)
      throw InputError("CSV output needs a single window; pass --window");
    emit(cfg, out, io::decomposition_to_csv(c, flows[0], dec.decompose(flows[0])));
    return kOk;
  }
  if (!windowed) {
    emit(cfg, out, io::dump(io::decomposition_to_json(c, flows[0], dec.decompose(flows[0]))));
    return kOk;
  }
  Json arr = Json::array();
  for (const auto& f : flows) arr.push_back(io::decomposition_to_json(c, f, dec.decompose(f)));
  emit(cfg, out, io::dump(Json{{"windows", std::move(arr)}}));
  return kOk;
}

int cmd_report(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json", "text"});
  auto c = load_complex(cfg.paths.at(0), err);
  auto parsed = io::load_flows(c, cfg.paths.at(1));
  warn_all(err, parsed.warnings);
  const bool windowed = parsed.windowed && !cfg.window;
  const int first = cfg.window.value_or(0);
  auto flows = select_windows(cfg, std::move(parsed));
  Reporter reporter(c, tolerance(cfg), cfg.support_fraction);

  std::vector<DiagnosticReport> reports;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    std::optional<int> index;
    if (windowed || cfg.window) index = first + static_cast<int>(i);
    reports.push_back(reporter.report(flows[i], index));
  }

  if (cfg.format == "text") {
    std::ostringstream os;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (i) os << "\n";
      os << io::report_to_text(reports[i]);
    }
    if (reports.size() > 1) {
      auto t = compare_windows(reports);
      os << "\nstructure changes at windows:";
      if (t.structure_changes.empty()) os << " none";
      for (auto i : t.structure_changes) os << " " << i;
      os << "\n";
    }
    emit(cfg, out, os.str());
    return kOk;
  }
  if (reports.size() == 1 && !windowed) {
    emit(cfg, out, io::dump(io::report_to_json(reports[0])));
    return kOk;
  }
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(io::report_to_json(r));
  Json doc{{"reports", std::move(arr)}};
  if (reports.size() > 1) doc["trend"] = io::trend_to_json(compare_windows(reports));
  emit(cfg, out, io::dump(doc));
  return kOk;
}

EdgeFlow single_flow(const CellComplex& c, const std::string& path, std::ostream& err) {
  auto parsed = io::load_flows(c, path);
  warn_all(err, parsed.warnings);
  if (parsed.windows.size() != 1)
    throw InputError(path + ": expected a single flow, found " +
                     std::to_string(parsed.windows.size()) + " windows");
  return parsed.windows[0];
}

int cmd_equiv(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json", "text"});
  auto c = load_complex(cfg.paths.at(0), err);
  auto f1 = single_flow(c, cfg.paths.at(1), err);
  auto f2 = single_flow(c, cfg.paths.at(2), err);
  auto eq = flows_equivalent(c, f1, f2, cfg.eps, tolerance(cfg));
  if (cfg.format == "text") {
    emit(cfg, out, std::string("equivalent: ") + (eq.equivalent ? "true" : "false") +
                       "\nharmonic residual norm: " + Json(eq.harmonic_residual_norm).dump() +
                       "\n");
  } else {
    emit(cfg, out, io::dump(Json{{"equivalent", eq.equivalent},
                                 {"harmonic_residual_norm", eq.harmonic_residual_norm},
                                 {"threshold", eq.threshold}}));
  }
  return kOk;
}

int cmd_gen_flow(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json"});
  auto c = load_complex(cfg.paths.at(0), err);
  auto w = io::workload_from_json(io::load_json(cfg.paths.at(1)));
  if (cfg.seed) w.seed = *cfg.seed;
  if (cfg.windows) w.windows = *cfg.windows;
  emit(cfg, out, io::dump(io::flows_to_json(c, poisson_flow(c, w))));
  return kOk;
}

int cmd_coldstart(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json"});
  auto c = load_complex(cfg.paths.at(0), err);
  auto parsed = io::load_flows(c, cfg.paths.at(1));
  warn_all(err, parsed.warnings);
  auto cs = io::coldstart_from_json(io::load_json(cfg.paths.at(2)));
  std::vector<EdgeFlow> lat;
  for (const auto& f : parsed.windows) lat.push_back(coldstart_flow(c, f, cs));
  emit(cfg, out, io::dump(io::flows_to_json(c, lat)));
  return kOk;
}

int cmd_derive(const Config& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json"});
  const int chosen = !cfg.node_diff.empty() + !cfg.covariance.empty() + !cfg.weighted_metric.empty();
  if (chosen != 1)
    throw InputError("derive needs exactly one of --node-diff, --covariance, --weighted");
  auto c = load_complex(cfg.paths.at(0), err);
  std::vector<std::string> warnings;
  EdgeFlow f;
  if (!cfg.node_diff.empty()) {
    f = node_diff_flow(c, io::node_metric_from_json(c, io::load_json(cfg.node_diff), &warnings));
  } else if (!cfg.covariance.empty()) {
    f = covariance_flow(c, io::node_series_from_json(c, io::load_json(cfg.covariance)));
  } else {
    if (cfg.paths.size() < 2) throw InputError("--weighted needs an edge-metric flow file");
    auto y = single_flow(c, cfg.paths[1], err);
    f = weighted_flow(c, y, io::node_metric_from_json(c, io::load_json(cfg.weighted_metric), &warnings));
  }
  warn_all(err, warnings);
  emit(cfg, out, io::dump(io::flow_to_json(c, f)));
  return kOk;
}

int cmd_fixture(const Config& cfg, std::ostream& out) {
  if (cfg.list || cfg.paths.empty()) {
    std::string s;
    for (const auto& n : fixtures::names()) s += n + "\n";
    emit(cfg, out, s);
    return kOk;
  }
  try {
    emit(cfg, out, std::string(fixtures::raw_json(cfg.paths[0])));
  } catch (const std::out_of_range& e) {
    throw InputError(e.what());
  }
  return kOk;
}

const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kValidation:
      return "validation";
    case ErrorCategory::kInput:
      return "input";
    case ErrorCategory::kNumerical:
      return "numerical";
  }
  return "error";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hodge decomposition diagnostics for serverless call graphs", "hodge-faas"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub, bool decomposition) {
    sub->add_option("--tol", cfg.tol, "absolute rank tolerance floor (default 1e-10 or $HODGE_FAAS_TOL)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    sub->add_option("-o,--output", cfg.output, "write to a file instead of stdout");
    if (decomposition) {
      sub->add_option("--window", cfg.window, "analyse a single window of a window file");
    }
  };

  auto* validate = app.add_subcommand("validate", "check a complex description");
  validate->add_option("complex", cfg.paths, "complex JSON")->required()->expected(1);
  common(validate, false);

  auto* betti_cmd = app.add_subcommand("betti", "Betti numbers of a complex");
  betti_cmd->add_option("complex", cfg.paths, "complex JSON")->required()->expected(1);
  common(betti_cmd, false);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Hodge Laplacian eigenvalues");
  spectrum_cmd->add_option("complex", cfg.paths, "complex JSON")->required()->expected(1);
  spectrum_cmd->add_option("--laplacian", cfg.laplacian, "degree k of L_k")->check(CLI::Range(0, 2));
  common(spectrum_cmd, false);

  auto* decompose_cmd = app.add_subcommand("decompose", "gradient/curl/harmonic split of a flow");
  decompose_cmd->add_option("inputs", cfg.paths, "complex.json flow.json")->required()->expected(2);
  common(decompose_cmd, true);

  auto* report_cmd = app.add_subcommand("report", "diagnostic report, one per window");
  report_cmd->add_option("inputs", cfg.paths, "complex.json flow.json")->required()->expected(2);
  report_cmd->add_option("--support-fraction", cfg.support_fraction,
                         "harmonic support threshold relative to max |h|")
      ->check(CLI::Range(0.0, 1.0));
  common(report_cmd, true);

  auto* equiv_cmd = app.add_subcommand("equiv", "test two flows for equivalence");
  equiv_cmd->add_option("inputs", cfg.paths, "complex.json f1.json f2.json")->required()->expected(3);
  equiv_cmd->add_option("--eps", cfg.eps, "relative harmonic tolerance")->check(CLI::PositiveNumber);
  common(equiv_cmd, false);

  auto* gen_cmd = app.add_subcommand("gen-flow", "Poisson workload flows");
  gen_cmd->add_option("inputs", cfg.paths, "complex.json workload.json")->required()->expected(2);
  gen_cmd->add_option("--seed", cfg.seed, "override the workload seed");
  gen_cmd->add_option("--windows", cfg.windows, "override the window count")->check(CLI::PositiveNumber);
  common(gen_cmd, false);

  auto* cold_cmd = app.add_subcommand("coldstart", "cold-start latency flow f_req * f_cs");
  cold_cmd->add_option("inputs", cfg.paths, "complex.json flow.json coldstart.json")->required()->expected(3);
  common(cold_cmd, false);

  auto* derive_cmd = app.add_subcommand("derive", "edge flow derived from node metrics");
  derive_cmd->add_option("inputs", cfg.paths, "complex.json [edge-flow.json]")->required()->expected(1, 2);
  derive_cmd->add_option("--node-diff", cfg.node_diff, "node metric file");
  derive_cmd->add_option("--covariance", cfg.covariance, "node metric series file");
  derive_cmd->add_option("--weighted", cfg.weighted_metric, "node metric file weighting an edge flow");
  common(derive_cmd, false);

  auto* fixture_cmd = app.add_subcommand("fixture", "print a bundled fixture file");
  fixture_cmd->add_option("name", cfg.paths)->expected(0, 1);
  fixture_cmd->add_flag("--list", cfg.list, "list fixture names");
  common(fixture_cmd, false);

  std::vector<std::string> argv_store{"hodge-faas"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    int rc = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (validate->parsed()) return cmd_validate(cfg, out);
    if (betti_cmd->parsed()) return cmd_betti(cfg, out, err);
    if (spectrum_cmd->parsed()) return cmd_spectrum(cfg, out, err);
    if (decompose_cmd->parsed()) return cmd_decompose(cfg, out, err);
    if (report_cmd->parsed()) {
      if (cfg.support_fraction <= 0.0) throw InputError("--support-fraction must be in (0, 1]");
      return cmd_report(cfg, out, err);
    }
    if (equiv_cmd->parsed()) return cmd_equiv(cfg, out, err);
    if (gen_cmd->parsed()) return cmd_gen_flow(cfg, out, err);
    if (cold_cmd->parsed()) return cmd_coldstart(cfg, out, err);
    if (derive_cmd->parsed()) return cmd_derive(cfg, out, err);
    if (fixture_cmd->parsed()) return cmd_fixture(cfg, out);
  } catch (const ValidationError& e) {
    for (const auto& f : e.findings()) err << "error[validation]: " << f << "\n";
    return kValidation;
  } catch (const Error& e) {
    err << "error[" << category_name(e.category()) << "]: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::invalid_argument& e) {
    err << "error[input]: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}

}  // namespace hodgefaas::cli
