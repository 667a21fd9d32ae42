#include "xycorr/cli/run.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <tuple>

#include <CLI11.hpp>
#include <json.hpp>

#include "xycorr/analytic_chain.hpp"
#include "xycorr/cli/output.hpp"
#include "xycorr/ergodicity.hpp"
#include "xycorr/parallel.hpp"

namespace xycorr::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::size_t measure_rank(const RunConfig& c, Measure m) {
  return static_cast<std::size_t>(std::find(c.measures.begin(), c.measures.end(), m) - c.measures.begin());
}

/// Model column: lattice description, with the edge appended when the
/// lattice has more than one inequivalent bond.
std::string model_label(const std::string& model, const std::string& edge, std::size_t num_edges) {
  return num_edges > 1 ? model + "/" + edge : model;
}

std::string file_token(std::string s) {
  for (char& ch : s) {
    if (ch == '/' || ch == ' ') ch = '_';
  }
  return s;
}

OptimizerOptions optimizer_for(const RunConfig&) { return OptimizerOptions{}; }

ordered_json config_echo(const RunConfig& c) {
  ordered_json j;
  j["command"] = to_string(c.command);
  j["model"] = c.model.describe();
  j["J"] = c.model.J;
  j["gamma"] = c.gamma;
  j["beta_tilde"] = c.beta_tilde;
  j["a_tilde"] = c.a_list;
  j["h_final_tilde"] = c.h_final_tilde;
  if (c.model.finite()) {
    j["t_min"] = c.t_min;
    j["t_max"] = c.t_max;
    j["num_samples"] = c.num_samples;
    j["window_check"] = c.window_check;
  }
  std::vector<std::string> names;
  for (Measure m : c.measures) names.emplace_back(short_name(m));
  j["measures"] = names;
  if (c.epsilon) {
    j["epsilon"] = *c.epsilon;
  } else {
    j["epsilon"] = "auto";
  }
  return j;
}

ordered_json range_json(const ScanRange& r) {
  ordered_json j;
  j["relevant_lo"] = r.relevant_lo;
  j["relevant_hi"] = r.relevant_hi;
  j["scan_lo"] = r.scan_lo;
  j["scan_hi"] = r.scan_hi;
  j["points"] = r.points;
  return j;
}

int run_analytic(const RunConfig& c, std::ostream& out) {
  if (c.model.finite()) throw ConfigError("model", "analytic runs use the chain-infinite model");
  CsvTable t;
  t.header = {"model", "gamma", "beta_tilde", "a_tilde", "region", "mz", "txx", "tyy", "tzz", "measure", "value"};
  struct Row {
    std::size_t m;
    double a;
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;
  for (double a : c.a_list) {
    const TwoSiteObservables o =
        analytic::evolved_long_time_observables(analytic::ChainParams{c.gamma, c.beta_tilde, a});
    const TwoQubitState rho = state_from_observables(o);
    for (Measure m : c.measures) {
      rows.push_back({measure_rank(c, m), a,
                      {"chain-infinite", format_number(c.gamma), format_number(c.beta_tilde), format_number(a),
                       analytic::to_string(analytic::classify_field_region(a)), format_number(o.mz),
                       format_number(o.txx), format_number(o.tyy), format_number(o.tzz),
                       std::string(short_name(m)), format_number(evaluate(m, rho, optimizer_for(c)))}});
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& x, const Row& y) { return std::tie(x.m, x.a) < std::tie(y.m, y.a); });
  for (auto& r : rows) t.rows.push_back(std::move(r.fields));
  const fs::path path = fs::path(c.output_dir) / "analytic.csv";
  write_csv(path, t);
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

int run_eq_curve(const RunConfig& c, std::ostream& out) {
  const std::vector<double> grid = c.beta_grid.grid();
  CurveOptions copts;
  copts.optimizer = optimizer_for(c);
  copts.workers = c.workers;
  copts.h_tilde = c.h_final_tilde;

  std::vector<EquilibriumCurve> curves;
  std::size_t num_edges = 1;
  if (!c.model.finite()) {
    curves.push_back(equilibrium_curve(c.model, c.gamma, grid, c.measures, nullptr, copts));
  } else {
    const SpinLattice lattice = c.model.lattice();
    const std::vector<Edge> edges = representative_edges(lattice);
    num_edges = edges.size();
    const FiniteEquilibrium eq(lattice, ModelParams{c.model.J, c.gamma, c.h_final_tilde * c.model.J});
    std::vector<double> betas = grid;
    for (double& b : betas) b /= std::abs(c.model.J);
    for (const Edge& e : edges) {
      EquilibriumCurve curve = equilibrium_curve(eq, lattice, e, c.gamma, betas, c.measures, copts);
      curve.beta_tilde_grid = grid;
      curves.push_back(std::move(curve));
    }
  }

  struct Row {
    std::size_t m;
    double beta;
    std::size_t edge;
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;
  for (std::size_t e = 0; e < curves.size(); ++e) {
    const auto& curve = curves[e];
    const std::string label = model_label(curve.model, curve.edge, num_edges);
    for (std::size_t mi = 0; mi < curve.measures.size(); ++mi) {
      for (std::size_t k = 0; k < grid.size(); ++k) {
        rows.push_back({measure_rank(c, curve.measures[mi]), grid[k], e,
                        {label, format_number(c.gamma), format_number(grid[k]),
                         std::string(short_name(curve.measures[mi])), format_number(curve.values[mi][k])}});
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    return std::tie(x.m, x.beta, x.edge) < std::tie(y.m, y.beta, y.edge);
  });
  CsvTable t;
  t.header = {"model", "gamma", "beta_tilde", "measure", "value"};
  for (auto& r : rows) t.rows.push_back(std::move(r.fields));
  const fs::path path = fs::path(c.output_dir) / "eq_curve.csv";
  write_csv(path, t);
  out << "wrote " << path.string() << " (" << t.rows.size() << " rows)\n";
  return kExitOk;
}

int run_quench_command(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const SpinLattice lattice = c.model.lattice();
  const std::vector<Edge> edges = representative_edges(lattice);
  QuenchOptions qopts;
  qopts.doubled_window_check = c.window_check;
  qopts.optimizer = optimizer_for(c);
  qopts.workers = c.workers;

  struct Row {
    std::size_t m;
    double a;
    std::size_t edge;
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;
  ordered_json records = ordered_json::array();
  bool all_converged = true;

  for (double a : c.a_list) {
    QuenchProtocol p;
    p.lattice = lattice;
    p.J = c.model.J;
    p.gamma = c.gamma;
    p.beta_tilde = c.beta_tilde;
    p.a_tilde = a;
    p.h_final_tilde = c.h_final_tilde;
    p.t_min = c.t_min;
    p.t_max = c.t_max;
    p.num_samples = c.num_samples;
    const auto results = run_quench(p, edges, c.measures, qopts);

    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::string edge = edge_label(lattice, edges[e]);
      const std::string label = model_label(lattice.describe(), edge, edges.size());
      CsvTable series;
      series.header = {"t", "measure", "value"};
      for (std::size_t mi = 0; mi < c.measures.size(); ++mi) {
        const QuenchSeriesResult& r = results[e * c.measures.size() + mi];
        for (std::size_t k = 0; k < r.series.times.size(); ++k) {
          series.rows.push_back({format_number(r.series.times[k]), r.series.measure_name,
                                 format_number(r.series.values[k])});
        }
        rows.push_back({measure_rank(c, r.measure), a, e,
                        {label, format_number(c.gamma), format_number(c.beta_tilde), format_number(a),
                         r.series.measure_name, format_number(r.series.mean), format_number(r.series.std_dev)}});
        ordered_json j;
        j["model"] = lattice.describe();
        j["edge"] = edge;
        j["a_tilde"] = a;
        j["measure"] = r.series.measure_name;
        j["mean"] = r.series.mean;
        j["std"] = r.series.std_dev;
        j["doubled_window_mean"] = r.doubled_window.mean;
        j["dephased_value"] = r.dephased_value;
        j["converged"] = r.converged;
        j["structure_warning"] = r.structure_warning;
        records.push_back(j);
        if (!r.converged) {
          all_converged = false;
          err << "warning: " << label << " a=" << format_number(a) << ' ' << r.series.measure_name
              << " did not pass the doubled-window check\n";
        }
        if (!r.structure_warning.empty()) err << "warning: " << label << ": " << r.structure_warning << '\n';
      }
      const fs::path spath =
          fs::path(c.output_dir) / ("quench_series_" + file_token(label) + "_a" + format_number(a) + ".csv");
      write_csv(spath, series);
      out << "wrote " << spath.string() << '\n';
    }
  }

  std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    return std::tie(x.m, x.a, x.edge) < std::tie(y.m, y.a, y.edge);
  });
  CsvTable summary;
  summary.header = {"model", "gamma", "beta_tilde", "a_tilde", "measure", "mean", "std"};
  for (auto& r : rows) summary.rows.push_back(std::move(r.fields));
  const fs::path path = fs::path(c.output_dir) / "quench_summary.csv";
  write_csv(path, summary);
  ordered_json doc;
  doc["config"] = config_echo(c);
  doc["results"] = records;
  write_text_file(fs::path(c.output_dir) / "quench_summary.json", doc.dump(2) + "\n");
  out << "wrote " << path.string() << '\n';
  return (!all_converged && c.strict) ? kExitNumerical : kExitOk;
}

int run_ergodicity(const RunConfig& c, std::ostream& out, std::ostream& err) {
  RegionOptions ro;
  ro.range = c.scan;
  ro.verdict.epsilon = c.epsilon;
  ro.optimizer = optimizer_for(c);
  ro.workers = c.workers;
  ro.h_final_tilde = c.h_final_tilde;
  ro.t_min = c.t_min;
  ro.t_max = c.t_max;
  ro.num_samples = c.num_samples;
  ro.doubled_window_check = c.window_check;
  std::vector<RegionRow> rows = region_report(c.model, c.gamma, c.beta_tilde, c.a_list, c.measures, ro);

  std::vector<std::string> edge_order;
  for (const auto& r : rows) {
    if (std::find(edge_order.begin(), edge_order.end(), r.edge) == edge_order.end()) edge_order.push_back(r.edge);
  }
  auto edge_rank = [&](const std::string& e) { return std::find(edge_order.begin(), edge_order.end(), e) - edge_order.begin(); };
  std::stable_sort(rows.begin(), rows.end(), [&](const RegionRow& x, const RegionRow& y) {
    return std::make_tuple(measure_rank(c, x.measure), x.a_tilde, edge_rank(x.edge)) <
           std::make_tuple(measure_rank(c, y.measure), y.a_tilde, edge_rank(y.edge));
  });

  CsvTable t;
  t.header = {"model", "edge", "a_tilde", "region", "measure", "p_infinity", "epsilon", "min_gap",
              "min_gap_relevant", "best_beta_prime", "verdict"};
  ordered_json records = ordered_json::array();
  bool all_converged = true;
  out << std::left << std::setw(16) << "model" << std::setw(6) << "edge" << std::setw(8) << "a" << std::setw(10)
      << "region" << std::setw(8) << "measure" << std::setw(14) << "P_inf" << std::setw(14) << "min_gap"
      << "verdict\n";
  for (const auto& r : rows) {
    const ErgodicityVerdict& v = r.verdict;
    t.rows.push_back({r.model, r.edge, format_number(r.a_tilde), analytic::to_string(r.region), v.measure_name,
                      format_number(v.p_infinity), format_number(v.epsilon), format_number(v.min_gap),
                      format_number(v.min_gap_relevant), format_number(v.best_beta_prime), to_string(v.verdict)});
    ordered_json j;
    j["model"] = r.model;
    j["edge"] = r.edge;
    j["a_tilde"] = r.a_tilde;
    j["region"] = analytic::to_string(r.region);
    j["measure_name"] = v.measure_name;
    j["p_infinity"] = v.p_infinity;
    j["epsilon"] = v.epsilon;
    j["best_beta_prime"] = v.best_beta_prime;
    j["min_gap"] = v.min_gap;
    j["min_gap_relevant"] = v.min_gap_relevant;
    j["verdict"] = to_string(v.verdict);
    j["scan_range"] = range_json(v.range);
    j["series_std"] = r.series_std;
    j["dephased_value"] = r.dephased_value;
    j["converged"] = r.converged;
    records.push_back(j);
    if (!r.converged) {
      all_converged = false;
      err << "warning: " << r.model << '/' << r.edge << " a=" << format_number(r.a_tilde) << ' ' << v.measure_name
          << " did not pass the doubled-window check\n";
    }
    out << std::setw(16) << r.model << std::setw(6) << r.edge << std::setw(8) << format_number(r.a_tilde)
        << std::setw(10) << analytic::to_string(r.region) << std::setw(8) << v.measure_name << std::setw(14)
        << format_number(v.p_infinity) << std::setw(14) << format_number(v.min_gap) << " " << to_string(v.verdict) << '\n';
  }
  write_csv(fs::path(c.output_dir) / "verdicts.csv", t);
  ordered_json doc;
  doc["config"] = config_echo(c);
  doc["config"]["scan_range"] = range_json(c.scan);
  doc["verdicts"] = records;
  write_text_file(fs::path(c.output_dir) / "verdicts.json", doc.dump(2) + "\n");
  return (!all_converged && c.strict) ? kExitNumerical : kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + config.output_dir + "': " + ec.message());
  switch (config.command) {
    case Command::analytic: return run_analytic(config, out);
    case Command::eq_curve: return run_eq_curve(config, out);
    case Command::quench: return run_quench_command(config, out, err);
    case Command::ergodicity: return run_ergodicity(config, out, err);
  }
  return kExitFailure;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum correlations and ergodicity in transverse XY models"};
  app.set_help_flag("-h,--help", "Show help");

  std::string command;
  std::string config_path;
  std::map<std::string, std::string> flags;
  app.add_option("command", command, "analytic | eq-curve | quench | ergodicity")->required();
  app.add_option("--config", config_path, "key=value file; flags override its entries");
  const std::map<std::string, std::string> help = {
      {"model", "chain-infinite | chain | ladder | torus"},
      {"geometry", "chain N, ladder L (or 2xL), torus NXxNY"},
      {"J", "coupling (default 1)"},
      {"gamma", "anisotropy"},
      {"beta", "initial inverse temperature beta J"},
      {"a", "comma-separated initial fields a/J"},
      {"h-final", "post-quench field h/J (default 0)"},
      {"t-min", "averaging window start (1/J)"},
      {"t-max", "averaging window end (1/J)"},
      {"samples", "time samples in the window"},
      {"window-check", "run the doubled-window convergence check (true|false)"},
      {"beta-grid", "start:stop:points[:linear|log] for eq-curve"},
      {"measures", "comma-separated subset of C,EN,Q,WD,I,J"},
      {"epsilon", "auto or a fixed tolerance"},
      {"relevant-lo", "lower end of the relevant beta' range"},
      {"relevant-hi", "upper end of the relevant beta' range"},
      {"scan-lo", "lower end of the scanned beta' range"},
      {"scan-points", "log-grid points across the relevant range"},
      {"out", "output directory"},
      {"workers", "worker threads (XYCORR_WORKERS also sets this)"},
  };
  for (const auto& [key, text] : help) app.add_option("--" + key, flags[key], text);
  bool strict = false;
  app.add_flag("--strict", strict, "exit 3 when a run fails its convergence check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    KeyValues kv;
    if (!config_path.empty()) {
      std::string text;
      try {
        text = read_text_file(config_path);
      } catch (const std::runtime_error& e) {
        throw ConfigError("config", e.what());
      }
      kv = parse_key_values(text);
    }
    if (std::getenv("XYCORR_WORKERS")) kv["workers"] = std::to_string(workers_from_env(1));
    kv["command"] = command;
    for (const auto& [key, value] : flags) {
      if (app.count("--" + key) > 0) kv[key] = value;
    }
    if (strict) kv["strict"] = "true";
    if (!kv.count("model")) kv["model"] = "chain-infinite";
    const RunConfig config = build_config(kv);
    return run(config, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace xycorr::cli
