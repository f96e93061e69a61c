#pragma once

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rimpute/csv.hpp"
#include "rimpute/density.hpp"
#include "rimpute/imputation.hpp"
#include "rimpute/pooling.hpp"
#include "rimpute/simharness.hpp"

namespace rimpute::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSeedEnv = "RIMPUTE_SEED";

enum ExitCode : int { kOk = 0, kInputError = 2, kStatisticalError = 3 };

/// Provenance for one invocation. Data files carry the deterministic part as
/// '#' comment lines; timestamps only go to the run manifest so identical
/// commands still produce byte-identical data files.
struct CliRunRecord {
  std::string command_line;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::vector<std::string> input_digests;
  std::string manifest_path;
  std::string started_utc;
  std::string finished_utc;

  std::vector<std::string> comment_lines() const {
    std::vector<std::string> lines{
        "# generator: rimpute " + version,
        "# command: " + command_line,
        "# seed: " + std::to_string(seed),
    };
    for (const auto& d : input_digests) lines.push_back("# input: " + d);
    if (!manifest_path.empty()) lines.push_back("# run_record: " + manifest_path);
    return lines;
  }
};

namespace detail {

inline std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  rimpute::detail::require(static_cast<bool>(in), ErrorKind::input_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string digest(const std::string& path, const std::string& bytes) {
  std::ostringstream os;
  os << path << " fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(bytes);
  return os.str();
}

inline csv::Table read_table(const std::string& path, CliRunRecord& record) {
  const std::string bytes = read_file(path);
  record.input_digests.push_back(digest(path, bytes));
  std::istringstream in(bytes);
  return csv::read(in);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  rimpute::detail::require(static_cast<bool>(out), ErrorKind::input_error,
                           "cannot write '" + path + "'");
  out << text;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    const auto trimmed = csv::detail::trim(item);
    if (!trimmed.empty()) items.emplace_back(trimmed);
  }
  return items;
}

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      rimpute::detail::fail(ErrorKind::input_error, std::string(kSeedEnv) + " is not an integer");
    }
  }
  return 1;
}

inline nlohmann::ordered_json record_json(const CliRunRecord& record, bool with_times) {
  nlohmann::ordered_json j;
  j["generator"] = std::string("rimpute ") + record.version;
  j["command"] = record.command_line;
  j["seed"] = record.seed;
  j["inputs"] = record.input_digests;
  if (with_times) {
    j["started_utc"] = record.started_utc;
    j["finished_utc"] = record.finished_utc;
  }
  return j;
}

inline void write_manifest(CliRunRecord& record, const std::vector<std::string>& outputs) {
  record.finished_utc = utc_now();
  auto j = record_json(record, true);
  j["outputs"] = outputs;
  write_text(record.manifest_path, j.dump(2) + "\n");
}

inline std::string table_text(csv::Table table, const CliRunRecord& record) {
  table.comments = record.comment_lines();
  std::ostringstream os;
  csv::write(os, table);
  return os.str();
}

inline nlohmann::ordered_json pooled_json(const std::string& method, const PooledEstimate& pooled,
                                          const std::vector<std::string>& names) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index j = 0; j < pooled.q_bar.size(); ++j) {
    nlohmann::ordered_json row;
    row["method"] = method;
    row["coefficient"] = names[static_cast<std::size_t>(j)];
    row["estimate"] = pooled.q_bar[j];
    row["se"] = std::sqrt(pooled.t[j]);
    row["ci_low"] = pooled.ci_low[j];
    row["ci_high"] = pooled.ci_high[j];
    if (std::isfinite(pooled.df[j])) {
      row["df"] = pooled.df[j];
    } else {
      row["df"] = nullptr;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

struct ImputeOptions {
  std::string input;
  std::string target;
  std::string covariates;
  std::string selection_covariates;
  std::string method = "ri";
  int m = 5;
  int iterations = 10;
  std::uint64_t seed = 1;
  std::string output_prefix;
};

inline int cmd_impute(const ImputeOptions& opt, CliRunRecord& record, std::ostream& err) {
  record.seed = opt.seed;
  record.manifest_path = opt.output_prefix + "_run.json";
  const csv::Table table = detail::read_table(opt.input, record);
  const std::size_t target_col = table.index_of(opt.target);
  const auto covariate_names = detail::split_list(opt.covariates);
  Eigen::MatrixXd z(table.rows(), static_cast<Eigen::Index>(covariate_names.size()));
  for (std::size_t k = 0; k < covariate_names.size(); ++k) {
    rimpute::detail::require(covariate_names[k] != opt.target, ErrorKind::input_error,
                             "target cannot also be a covariate");
    z.col(static_cast<Eigen::Index>(k)) = table.column(covariate_names[k]);
  }
  std::vector<std::string> names{opt.target};
  names.insert(names.end(), covariate_names.begin(), covariate_names.end());
  IncompleteDataset data(table.columns[target_col], z, names);
  if (!opt.selection_covariates.empty()) {
    const auto sel_names = detail::split_list(opt.selection_covariates);
    Eigen::MatrixXd sel(table.rows(), static_cast<Eigen::Index>(sel_names.size()));
    for (std::size_t k = 0; k < sel_names.size(); ++k) {
      sel.col(static_cast<Eigen::Index>(k)) = table.column(sel_names[k]);
    }
    data.set_selection_covariates(std::move(sel));
  }
  rimpute::detail::require(opt.m >= 1 && opt.iterations >= 1, ErrorKind::input_error,
                           "--m and --iterations must be >= 1");

  std::vector<std::string> coef_names{"(Intercept)"};
  coef_names.insert(coef_names.end(), covariate_names.begin(), covariate_names.end());
  std::vector<std::string> outputs;
  nlohmann::ordered_json summary;
  summary["run"] = detail::record_json(record, false);
  summary["method"] = opt.method;
  summary["target"] = opt.target;
  summary["n"] = data.rows();
  summary["n_missing"] = data.missing_count();

  if (opt.method == "cc") {
    const CompleteCases cc = complete_case(data);
    csv::Table filtered;
    filtered.header = table.header;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (data.response()[static_cast<std::size_t>(i)] == 1) keep.push_back(i);
    }
    for (const auto& col : table.columns) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(keep.size()));
      for (std::size_t k = 0; k < keep.size(); ++k) v[static_cast<Eigen::Index>(k)] = col[keep[k]];
      filtered.columns.push_back(std::move(v));
    }
    const std::string path = opt.output_prefix + "_cc.csv";
    detail::write_text(path, detail::table_text(filtered, record));
    outputs.push_back(path);
    summary["m"] = 1;
    if (!covariate_names.empty()) {
      const PooledEstimate est = single_fit_estimate(fit_analysis(cc.covariates, cc.target));
      summary["estimates"] = detail::pooled_json("cc", est, coef_names);
    }
  } else {
    std::vector<Eigen::VectorXd> completed;
    if (data.missing_count() == 0) err << "warning: target has no missing values; writing copies\n";
    if (opt.method == "ri") {
      RiConfig config;
      config.iterations = opt.iterations;
      config.num_imputations = opt.m;
      config.seed = opt.seed;
      RiResult result = ri_impute(data, config);
      for (const auto& w : result.warnings) {
        if (data.missing_count() > 0) err << "warning: " << w << '\n';
      }
      nlohmann::ordered_json deltas = nlohmann::ordered_json::array();
      for (const auto& chain : result.chains) {
        deltas.push_back(chain.delta_trace.empty() ? 0.0 : chain.delta_trace.back());
      }
      summary["final_delta_adj"] = deltas;
      completed = std::move(result.imputations);
    } else {
      RngStream rng(opt.seed, 0);
      completed = mar_impute(data, opt.m, rng);
    }
    for (std::size_t k = 0; k < completed.size(); ++k) {
      csv::Table out = table;
      out.columns[target_col] = completed[k];
      const std::string path = opt.output_prefix + "_imp" + std::to_string(k + 1) + ".csv";
      detail::write_text(path, detail::table_text(out, record));
      outputs.push_back(path);
    }
    summary["m"] = opt.m;
    if (!covariate_names.empty()) {
      if (completed.size() >= 2) {
        summary["estimates"] = detail::pooled_json(opt.method, analyse_and_pool(z, completed), coef_names);
      } else {
        summary["estimates"] = detail::pooled_json(
            opt.method, single_fit_estimate(fit_analysis(z, completed.front())), coef_names);
      }
    }
  }
  if (!covariate_names.empty()) {
    const std::string path = opt.output_prefix + "_pooled.json";
    detail::write_text(path, summary.dump(2) + "\n");
    outputs.push_back(path);
  }
  detail::write_manifest(record, outputs);
  return kOk;
}

struct SimulateOptions {
  std::string scenario;
  std::string scenario_file;
  std::string beta = "strong";
  int n = 1000;
  int replications = 1000;
  int m = 5;
  int iterations = 10;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string output;
  // Which options were given explicitly (these override the scenario file).
  bool n_set = false, replications_set = false, m_set = false, iterations_set = false,
       seed_set = false, beta_set = false;
};

/// Parses `key = value` scenario files. Keys: mechanism, beta, psi, n,
/// replications, m, iterations, seed. `beta` is three numbers or
/// strong/moderate; `psi` is psi0, psi1 and then one entry per covariate.
inline ScenarioConfig parse_scenario_file(const std::string& text, std::uint64_t default_seed = 1) {
  ScenarioConfig config;
  config.master_seed = default_seed;
  bool have_psi = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto numbers = [&](const std::string& value) {
    std::vector<double> out;
    for (const auto& item : detail::split_list(value)) {
      out.push_back(csv::detail::parse_cell(item, static_cast<std::size_t>(line_no), 0));
    }
    return out;
  };
  auto integer = [&](const std::string& value) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(value, &used);
      rimpute::detail::require(used == value.size(), ErrorKind::input_error, "trailing characters");
      return v;
    } catch (const std::logic_error&) {
      rimpute::detail::fail(ErrorKind::input_error,
                            "line " + std::to_string(line_no) + ": '" + value + "' is not an integer");
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (csv::detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    rimpute::detail::require(eq != std::string::npos, ErrorKind::input_error,
                             "scenario line " + std::to_string(line_no) + " is not key = value");
    const std::string key(csv::detail::trim(std::string_view(line).substr(0, eq)));
    const std::string value(csv::detail::trim(std::string_view(line).substr(eq + 1)));
    if (key == "mechanism" || key == "label") {
      config.mechanism_label = value;
    } else if (key == "beta") {
      if (value == "strong" || value == "moderate") {
        config.beta = beta_values(value == "strong" ? BetaSet::strong : BetaSet::moderate);
      } else {
        const auto b = numbers(value);
        rimpute::detail::require(b.size() == 3, ErrorKind::input_error, "beta needs three values");
        config.beta = {b[0], b[1], b[2]};
      }
    } else if (key == "psi") {
      const auto p = numbers(value);
      rimpute::detail::require(p.size() >= 2 && p.size() <= 4, ErrorKind::input_error,
                               "psi needs psi0, psi1 and at most two covariate entries");
      config.psi.psi0 = p[0];
      config.psi.psi1 = p[1];
      config.psi.psi_z = Eigen::VectorXd(static_cast<Eigen::Index>(p.size() - 2));
      for (std::size_t k = 2; k < p.size(); ++k) config.psi.psi_z[static_cast<Eigen::Index>(k - 2)] = p[k];
      have_psi = true;
    } else if (key == "n") {
      config.n = static_cast<int>(integer(value));
    } else if (key == "replications") {
      config.replications = static_cast<int>(integer(value));
    } else if (key == "m") {
      config.m = static_cast<int>(integer(value));
    } else if (key == "iterations") {
      config.iterations = static_cast<int>(integer(value));
    } else if (key == "seed") {
      config.master_seed = static_cast<std::uint64_t>(integer(value));
    } else {
      rimpute::detail::fail(ErrorKind::input_error, "unknown scenario key '" + key + "'");
    }
  }
  rimpute::detail::require(have_psi, ErrorKind::input_error, "scenario file needs a psi entry");
  if (config.mechanism_label.empty()) config.mechanism_label = "custom";
  return config;
}

inline int cmd_simulate(const SimulateOptions& opt, CliRunRecord& record, std::ostream& err) {
  rimpute::detail::require(opt.beta == "strong" || opt.beta == "moderate", ErrorKind::input_error,
                           "--beta must be strong or moderate");
  const BetaSet beta_set = opt.beta == "strong" ? BetaSet::strong : BetaSet::moderate;
  std::vector<ScenarioConfig> configs;
  if (!opt.scenario_file.empty()) {
    const std::string text = detail::read_file(opt.scenario_file);
    record.input_digests.push_back(detail::digest(opt.scenario_file, text));
    ScenarioConfig c = parse_scenario_file(text, opt.seed);
    if (opt.n_set) c.n = opt.n;
    if (opt.replications_set) c.replications = opt.replications;
    if (opt.m_set) c.m = opt.m;
    if (opt.iterations_set) c.iterations = opt.iterations;
    if (opt.seed_set) c.master_seed = opt.seed;
    if (opt.beta_set) c.beta = beta_values(beta_set);
    configs.push_back(c);
  } else {
    rimpute::detail::require(!opt.scenario.empty(), ErrorKind::input_error,
                             "give --scenario or --scenario-file");
    std::vector<std::string> names = detail::split_list(opt.scenario);
    if (names.size() == 1 && names[0] == "all") {
      names.assign(builtin_mechanism_names().begin(), builtin_mechanism_names().end());
    }
    for (const auto& name : names) {
      ScenarioConfig c = builtin_scenario(name, beta_set, opt.n, opt.replications, opt.seed);
      c.m = opt.m;
      c.iterations = opt.iterations;
      configs.push_back(c);
    }
  }
  record.seed = configs.front().master_seed;
  record.manifest_path = opt.output + ".run.json";

  std::ostringstream body;
  std::vector<std::string> header = record.comment_lines();
  for (const auto& c : configs) {
    c.validate();
    const ScenarioResult result = run_scenario(c, opt.threads);
    header.push_back("# scenario: " + c.mechanism_label);
    header.push_back("#   beta: " + csv::format_cell(c.beta[0]) + "," + csv::format_cell(c.beta[1]) +
                     "," + csv::format_cell(c.beta[2]));
    header.push_back("#   psi0: " + csv::format_cell(c.psi.psi0));
    header.push_back("#   psi1: " + csv::format_cell(c.psi.psi1));
    for (Eigen::Index k = 0; k < c.psi.psi_z.size(); ++k) {
      header.push_back("#   psi" + std::to_string(k + 2) + ": " + csv::format_cell(c.psi.psi_z[k]));
    }
    header.push_back("#   n: " + std::to_string(c.n) + ", replications: " + std::to_string(c.replications) +
                     ", m: " + std::to_string(c.m) + ", iterations: " + std::to_string(c.iterations) +
                     ", seed: " + std::to_string(c.master_seed));
    std::string failures;
    for (const auto& s : result.methods) {
      if (s.failures > 0) {
        failures += " " + to_string(s.method) + "=" + std::to_string(s.failures);
        err << "warning: " << c.mechanism_label << " " << to_string(s.method) << " failed in "
            << s.failures << " replications: " << s.first_error << '\n';
      }
    }
    if (!failures.empty()) header.push_back("#   failed replications:" + failures);
    write_results_rows(body, result);
  }
  std::ostringstream out;
  for (const auto& h : header) out << h << '\n';
  write_results_header(out);
  out << body.str();
  detail::write_text(opt.output, out.str());
  detail::write_manifest(record, {opt.output});
  return kOk;
}

struct DensityOptions {
  /// label=path:column
  std::vector<std::string> groups;
  std::string original;
  std::string imputed;
  std::string column;
  std::string output;
};

inline int cmd_density(const DensityOptions& opt, CliRunRecord& record, std::ostream&) {
  record.manifest_path = opt.output + ".run.json";
  std::vector<std::pair<std::string, Eigen::VectorXd>> groups;
  auto drop_missing = [](const Eigen::VectorXd& v) {
    std::vector<double> kept;
    for (double x : v) {
      if (!std::isnan(x)) kept.push_back(x);
    }
    return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size())));
  };
  for (const auto& spec : opt.groups) {
    const auto eq = spec.find('=');
    const auto colon = spec.rfind(':');
    rimpute::detail::require(eq != std::string::npos && colon != std::string::npos && colon > eq,
                             ErrorKind::input_error, "--group expects label=path:column");
    const csv::Table t = detail::read_table(spec.substr(eq + 1, colon - eq - 1), record);
    groups.emplace_back(spec.substr(0, eq), drop_missing(t.column(spec.substr(colon + 1))));
  }
  if (!opt.original.empty() || !opt.imputed.empty()) {
    rimpute::detail::require(!opt.original.empty() && !opt.imputed.empty() && !opt.column.empty(),
                             ErrorKind::input_error, "--original, --imputed and --column go together");
    const csv::Table orig = detail::read_table(opt.original, record);
    const csv::Table imp = detail::read_table(opt.imputed, record);
    const Eigen::VectorXd& before = orig.column(opt.column);
    const Eigen::VectorXd& after = imp.column(opt.column);
    rimpute::detail::require(before.size() == after.size(), ErrorKind::input_error,
                             "original and imputed files differ in row count");
    std::vector<double> observed;
    std::vector<double> imputed;
    for (Eigen::Index i = 0; i < before.size(); ++i) {
      if (std::isnan(before[i])) {
        rimpute::detail::require(!std::isnan(after[i]), ErrorKind::input_error,
                                 "imputed file still has missing values");
        imputed.push_back(after[i]);
      } else {
        observed.push_back(before[i]);
      }
    }
    groups.emplace_back("observed", Eigen::Map<Eigen::VectorXd>(observed.data(), static_cast<Eigen::Index>(observed.size())));
    groups.emplace_back("imputed", Eigen::Map<Eigen::VectorXd>(imputed.data(), static_cast<Eigen::Index>(imputed.size())));
  }
  rimpute::detail::require(!groups.empty(), ErrorKind::input_error, "no density groups given");

  std::ostringstream out;
  for (const auto& line : record.comment_lines()) out << line << '\n';
  out << "x,density,group\n";
  for (const auto& [label, values] : groups) {
    const DensitySummary d = density_summary(values, label);
    for (Eigen::Index g = 0; g < d.grid.size(); ++g) {
      out << csv::format_cell(d.grid[g]) << ',' << csv::format_cell(d.density[g]) << ','
          << csv::quote_if_needed(label) << '\n';
    }
  }
  detail::write_text(opt.output, out.str());
  detail::write_manifest(record, {opt.output});
  return kOk;
}

/// Entry point shared by the executable and the CLI tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliRunRecord record;
  record.started_utc = detail::utc_now();
  for (int i = 0; i < argc; ++i) {
    if (i > 0) record.command_line += ' ';
    record.command_line += argv[i];
  }

  CLI::App app{"Random-indicator multiple imputation for data missing not at random"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::uint64_t seed_default = 1;
  try {
    seed_default = detail::default_seed();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  ImputeOptions imp;
  imp.seed = seed_default;
  auto* impute = app.add_subcommand("impute", "Multiply impute one incomplete column of a CSV file");
  impute->add_option("--input", imp.input, "Input CSV")->required();
  impute->add_option("--target", imp.target, "Incomplete column to impute")->required();
  impute->add_option("--covariates", imp.covariates, "Comma-separated complete covariates");
  impute->add_option("--selection-covariates", imp.selection_covariates,
                     "Covariates of the nonresponse model (default: --covariates)");
  impute->add_option("--method", imp.method, "ri, mar or cc")
      ->check(CLI::IsMember({"ri", "mar", "cc"}));
  impute->add_option("--m", imp.m, "Number of imputations");
  impute->add_option("--iterations", imp.iterations, "RI sweeps per chain");
  impute->add_option("--seed", imp.seed, std::string("Seed (default $") + kSeedEnv + " or 1)");
  impute->add_option("--output-prefix", imp.output_prefix, "Prefix for output files")->required();

  SimulateOptions sim;
  sim.seed = seed_default;
  auto* simulate = app.add_subcommand("simulate", "Run the Monte Carlo study for one or more scenarios");
  simulate->add_option("--scenario", sim.scenario, "mcar, mar, mnar1, mnar2, mnar3, a comma list, or all");
  simulate->add_option("--scenario-file", sim.scenario_file, "key = value scenario file");
  auto* beta_opt = simulate->add_option("--beta", sim.beta, "strong or moderate");
  auto* n_opt = simulate->add_option("--n", sim.n, "Sample size");
  auto* reps_opt = simulate->add_option("--replications", sim.replications, "Replications");
  auto* m_opt = simulate->add_option("--m", sim.m, "Imputations per replication");
  auto* it_opt = simulate->add_option("--iterations", sim.iterations, "RI sweeps per chain");
  auto* seed_opt = simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--threads", sim.threads, "Worker threads");
  simulate->add_option("--output", sim.output, "Results table (CSV)")->required();

  DensityOptions den;
  auto* density = app.add_subcommand("density", "Kernel density curves for plotting");
  density->add_option("--group", den.groups, "label=path:column (repeatable)");
  density->add_option("--original", den.original, "CSV with missing cells");
  density->add_option("--imputed", den.imputed, "Completed CSV from `impute`");
  density->add_option("--column", den.column, "Column compared between --original and --imputed");
  density->add_option("--output", den.output, "Output CSV (x,density,group)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  sim.beta_set = beta_opt->count() > 0;
  sim.n_set = n_opt->count() > 0;
  sim.replications_set = reps_opt->count() > 0;
  sim.m_set = m_opt->count() > 0;
  sim.iterations_set = it_opt->count() > 0;
  sim.seed_set = seed_opt->count() > 0;

  try {
    if (impute->parsed()) return cmd_impute(imp, record, err);
    if (simulate->parsed()) return cmd_simulate(sim, record, err);
    if (density->parsed()) return cmd_density(den, record, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_statistical(e.kind()) ? kStatisticalError : kInputError;
  }
  return kInputError;
}

}  // namespace rimpute::cli
