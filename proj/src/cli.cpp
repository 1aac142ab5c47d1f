#include "slicemine/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "slicemine/hpd.hpp"
#include "slicemine/oracle.hpp"
#include "slicemine/stats.hpp"

namespace slicemine::cli {

IngestConfig RunConfig::ingest_config() const {
  IngestConfig c;
  c.ground_truth = ground_truth;
  c.prediction = prediction;
  c.delimiter = delimiter == "\\t" || delimiter == "tab" ? '\t' : delimiter.front();
  c.missing_token = missing_token;
  c.categorical_threshold = categorical_threshold;
  c.all_numeric = all_numeric;
  for (const auto& name : categorical) c.overrides[name] = FeatureKind::Categorical;
  for (const auto& name : continuous) c.overrides[name] = FeatureKind::Continuous;
  return c;
}

SlicerConfig RunConfig::slicer_config() const {
  SlicerConfig c;
  c.use_categorical = c.use_hpd = c.use_dt = false;
  for (const auto& h : heuristics) {
    switch (parse_heuristic(h)) {
      case Heuristic::Categorical:
        c.use_categorical = true;
        break;
      case Heuristic::Hpd:
        c.use_hpd = true;
        break;
      case Heuristic::DecisionTree:
        c.use_dt = true;
        break;
    }
  }
  c.max_order = max_order;
  c.p_value_max = p_value_max;
  c.gap = gap;
  c.support_fraction = support_fraction;
  c.support_floor = support_floor;
  c.hpd = {initial_density, epsilon, min_density_floor};
  c.max_depth = max_depth;
  c.ci_level = ci_level;
  c.workers = workers;
  return c;
}

report::ReportSettings RunConfig::report_settings() const {
  report::ReportSettings s;
  s.input = input;
  s.ground_truth = ground_truth;
  s.prediction = prediction;
  for (const char* h : {"categorical", "hpd", "dt"}) {
    if (std::find(heuristics.begin(), heuristics.end(), h) != heuristics.end()) s.heuristics.emplace_back(h);
  }
  s.max_order = max_order;
  s.p_value_max = p_value_max;
  s.gap = gap;
  s.support_fraction = support_fraction;
  s.support_floor = support_floor;
  s.epsilon = epsilon;
  s.initial_density = initial_density;
  s.min_density_floor = min_density_floor;
  s.max_depth = max_depth;
  s.ci_level = ci_level;
  s.all_numeric = all_numeric;
  s.categorical_threshold = categorical_threshold;
  return s;
}

void RunConfig::validate() const {
  if (input.empty()) throw ConfigError("an input file (or '-') is required");
  if (ground_truth.empty()) throw ConfigError("--ground-truth is required");
  if (prediction.empty()) throw ConfigError("--prediction is required");
  if (delimiter.empty() || (delimiter.size() != 1 && delimiter != "\\t" && delimiter != "tab")) {
    throw ConfigError("delimiter must be a single character");
  }
  if (categorical_threshold < 0) throw ConfigError("categorical threshold must be non-negative");
  for (const auto& name : categorical) {
    if (std::find(continuous.begin(), continuous.end(), name) != continuous.end()) {
      throw ConfigError("column '" + name + "' is overridden as both categorical and continuous");
    }
  }
  report::parse_format(format);
  slicer_config().validate();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
  try {
    config.validate();
    const Dataset dataset = load_table(config.input, config.ingest_config());
    const SliceRun result = run_slicer(dataset, config.slicer_config());
    const auto rep = report::make_report(dataset, result, config.report_settings());

    log << "records " << result.summary.N << ", correct " << result.summary.K << ", accuracy "
        << report::format_performance(result.summary.metric) << ", min support " << result.filters.min_support
        << ", performance threshold " << report::format_performance(result.filters.perf_threshold) << '\n';
    for (const auto& [key, count] : result.counts) {
      log << heuristic_name(key.first) << " order " << key.second << ": " << count.candidates << " candidates, "
          << count.reported << " reported\n";
    }

    const std::string text = report::render(rep, report::parse_format(config.format));
    if (config.out.empty()) {
      out << text;
      out.flush();
    } else {
      std::ofstream file(config.out, std::ios::binary);
      if (!file || !(file << text)) throw DataError("cannot write report to '" + config.out + "'");
    }
    return kSuccess;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DataError& e) {
    log << "error: " << e.what() << '\n';
    return kDataError;
  }
}

bool self_check(std::ostream& out) {
  bool all = true;
  const auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    all = all && ok;
  };
  const auto fmt = [](double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
  };

  const double p193 = stats::hypergeom_lower_pvalue({300, 230, 21, 14});
  check("credit-history slice p-value", p193 >= 0.188 && p193 <= 0.198, "p(300, 230, 21, 14) = " + fmt(p193));

  std::int64_t largest = -1;
  for (std::int64_t k = 0; k <= 21; ++k) {
    if (stats::hypergeom_lower_pvalue({300, 230, 21, k}) < 0.05) largest = k;
  }
  check("significance cut-off", largest == 12, "largest k with p < 0.05 at n = 21 is " + std::to_string(largest));

  const auto exact = oracle::exact_hypergeom_pvalue(10, 5, 4, 1);
  check("exact small tail", exact == oracle::ExactRational(55, 210), "P(X <= 1 | 10, 5, 4) = " + exact.str());

  double worst = 0.0;
  for (std::int64_t N = 1; N <= 30; ++N)
    for (std::int64_t K = 0; K <= N; K += 3)
      for (std::int64_t n = 0; n <= N; n += 2)
        for (std::int64_t k = std::max<std::int64_t>(0, n - (N - K)); k <= std::min(n, K); ++k) {
          const double fast = stats::hypergeom_lower_pvalue({N, K, n, k});
          const double ref = oracle::to_double(oracle::exact_hypergeom_pvalue(N, K, n, k));
          worst = std::max(worst, std::abs(fast - ref) / ref);
        }
  check("tail vs exact oracle", worst <= 1e-10, "max relative error " + fmt(worst));

  const auto ci = stats::wilson_interval(230, 300, 0.95);
  check("wilson interval", std::abs(ci.low - 0.715619) < 1e-5 && std::abs(ci.high - 0.810972) < 1e-5,
        "[" + fmt(ci.low) + ", " + fmt(ci.high) + "] for 230 / 300");

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool windows_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1 + trial * 3);
    for (auto& x : v) x = std::round(unit(rng) * 40.0) / 4.0;
    std::sort(v.begin(), v.end());
    for (int tenth = 1; tenth <= 10; ++tenth) {
      windows_ok = windows_ok && hpd::shortest_interval(v, tenth / 10.0) ==
                                     oracle::exhaustive_shortest_interval(v, tenth / 10.0);
    }
  }
  check("shortest interval vs exhaustive scan", windows_ok, "50 random samples x 10 densities");
  return all;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  config.workers = std::max(1u, std::thread::hardware_concurrency());

  CLI::App app{"Mines a labeled test set (features, ground truth, predictions) for under-performing data slices.",
               "slicemine"};
  app.option_defaults()->always_capture_default();
  const auto env = [](const std::string& name) { return std::string(kEnvPrefix) + name; };

  app.add_option("input", config.input, "Input table (delimited text with header), '-' for stdin")
      ->envname(env("INPUT"));
  app.add_option("-g,--ground-truth", config.ground_truth, "Ground-truth column name")->envname(env("GROUND_TRUTH"));
  app.add_option("-p,--prediction", config.prediction, "Model prediction column name")->envname(env("PREDICTION"));
  app.add_option("--heuristics", config.heuristics, "Heuristics to run: categorical, hpd, dt")
      ->delimiter(',')
      ->envname(env("HEURISTICS"));
  app.add_option("--max-order", config.max_order, "Largest number of features per slice (1-3)")
      ->envname(env("MAX_ORDER"));
  app.add_option("--pvalue", config.p_value_max, "Report slices with hypergeometric p-value below this")
      ->envname(env("PVALUE"));
  app.add_option("--gap", config.gap, "Required accuracy gap below the confidence-interval lower bound")
      ->envname(env("GAP"));
  app.add_option("--support-fraction", config.support_fraction,
                 "Minimal support as a fraction of mis-predicted records")
      ->envname(env("SUPPORT_FRACTION"));
  app.add_option("--support-floor", config.support_floor, "Minimal support lower bound")->envname(env("SUPPORT_FLOOR"));
  app.add_option("--epsilon", config.epsilon, "HPD density shrink step")->envname(env("EPSILON"));
  app.add_option("--initial-density", config.initial_density, "HPD starting density")
      ->envname(env("INITIAL_DENSITY"));
  app.add_option("--min-density-floor", config.min_density_floor, "HPD stops below this fraction of records")
      ->envname(env("MIN_DENSITY_FLOOR"));
  app.add_option("--ci-level", config.ci_level, "Confidence level of the accuracy interval")->envname(env("CI_LEVEL"));
  app.add_option("--max-depth", config.max_depth, "Decision tree depth")->envname(env("MAX_DEPTH"));
  app.add_option("--categorical", config.categorical, "Treat these columns as categorical")
      ->delimiter(',')
      ->envname(env("CATEGORICAL"));
  app.add_option("--continuous", config.continuous, "Treat these columns as continuous")
      ->delimiter(',')
      ->envname(env("CONTINUOUS"));
  app.add_option("--categorical-threshold", config.categorical_threshold,
                 "Numeric columns with at most this many distinct values are categorical")
      ->envname(env("CATEGORICAL_THRESHOLD"));
  app.add_flag("--all-numeric", config.all_numeric, "Treat every numeric column as continuous")
      ->envname(env("ALL_NUMERIC"));
  app.add_option("--delimiter", config.delimiter, "Field delimiter (use '\\t' for tab)")->envname(env("DELIMITER"));
  app.add_option("--missing", config.missing_token, "Extra missing-value marker besides the empty field")
      ->envname(env("MISSING"));
  app.add_option("-f,--format", config.format, "Report format: json, markdown, csv")->envname(env("FORMAT"));
  app.add_option("-o,--out", config.out, "Write the report here instead of stdout")->envname(env("OUT"));
  app.add_option("-j,--workers", config.workers, "Worker threads (1 = sequential)")->envname(env("WORKERS"));
  app.add_flag("--self-check", config.self_check, "Run the built-in numeric checks and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  if (config.self_check) return self_check(out) ? kSuccess : kDataError;
  return run(config, out, err);
}

}  // namespace slicemine::cli
