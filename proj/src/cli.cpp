#include "covbal/cli.hpp"

#include <CLI11.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "covbal/baselines.hpp"
#include "covbal/crossmst.hpp"
#include "covbal/crossnn.hpp"
#include "covbal/dataset.hpp"
#include "covbal/error.hpp"
#include "covbal/graphs.hpp"
#include "covbal/parallel.hpp"
#include "covbal/report.hpp"
#include "covbal/simharness.hpp"

namespace covbal::cli {

namespace {

using Json = nlohmann::ordered_json;

double chi_square_sf(double x, double df) {
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), x));
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

PValueMode parse_mode(const std::string& s) {
  if (s == "auto") return PValueMode::Auto;
  if (s == "asymptotic") return PValueMode::Asymptotic;
  if (s == "permutation") return PValueMode::Permutation;
  if (s == "both") return PValueMode::Both;
  throw UsageError("--mode must be auto, asymptotic, permutation or both");
}

struct Common {
  std::string format;  // empty: csv for simulate and agreement, text otherwise
  std::size_t threads = 0;
  std::uint64_t seed = 1;
};

struct TestConfig {
  std::string input;
  std::string label = "group";
  std::string treated = "T";
  std::string distances;
  bool standardize = false;
  std::string tests = "crossnn,crossmst";
  std::size_t k = 1;
  std::string mode = "auto";
  std::size_t n_perm = 10000;
  double alpha = 0.05;
  std::string interactions = "pairwise";
};

struct SimulateConfig {
  std::string scenario;
  std::string preset;
  std::string tests = "crossnn,crossmst,hotelling";
  std::size_t replicates = 0;
  bool seed_given = false;
  std::string sd_quantiles;
};

struct AgreementConfig {
  std::string sizes = "100";
  std::size_t dim = 10;
  std::size_t n_perm = 10000;
  std::size_t replicates = 100;
  std::string raw;
};

struct BalanceConfig {
  std::string input;
  std::string label = "group";
  std::string treated = "T";
};

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw UsageError("--format must be one of: " + list);
}

Json provenance(const std::string& command, const Common& common, Json config) {
  Json p;
  p["program"] = "covbal";
  p["version"] = library_version();
  p["timestamp"] = utc_timestamp();
  p["command"] = command;
  p["threads"] = common.threads;
  p["config"] = std::move(config);
  return p;
}

void emit(const Json& prov, const std::vector<Json>& blocks, const std::string& format,
          std::ostream& out) {
  if (format == "json") {
    Json doc;
    doc["provenance"] = prov;
    doc["results"] = blocks;
    out << doc.dump(2) << '\n';
    return;
  }
  out << "program = covbal\n"
      << "version = " << prov["version"].get<std::string>() << '\n'
      << "timestamp = " << prov["timestamp"].get<std::string>() << '\n'
      << "command = " << prov["command"].get<std::string>() << '\n';
  write_text_block(prov["config"], out);
  for (const auto& b : blocks) {
    out << "\n[" << b["test"].get<std::string>() << "]\n";
    write_text_block(b, out);
  }
}

int run_test(const TestConfig& c, const Common& common, std::ostream& out) {
  check_format(common.format, {"text", "json"});
  const PValueMode mode = parse_mode(c.mode);
  if (c.k < 1) throw UsageError("--k must be at least 1");
  if (c.k > 1 && (mode == PValueMode::Asymptotic || mode == PValueMode::Both)) {
    throw UsageError("--k > 1 has no asymptotic null; use --mode permutation or auto");
  }
  if (mode != PValueMode::Asymptotic && c.n_perm < 100) {
    throw UsageError("--n-perm must be at least 100");
  }
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  if (!c.distances.empty() && c.standardize) {
    throw UsageError("--standardize does not apply to a precomputed --distances matrix");
  }
  Interactions inter = Interactions::Pairwise;
  if (c.interactions == "none") inter = Interactions::None;
  else if (c.interactions != "pairwise") throw UsageError("--interactions must be none or pairwise");
  const auto tests = split_list(c.tests);
  if (tests.empty()) throw UsageError("--tests is empty");
  for (const auto& t : tests) {
    if (t != "crossnn" && t != "crossmst" && t != "hotelling" && t != "logit") {
      throw UsageError("unknown test '" + t + "' (expected crossnn, crossmst, hotelling, logit)");
    }
  }

  Json config;
  config["input"] = c.input;
  config["label"] = c.label;
  config["treated"] = c.treated;
  config["metric"] = c.distances.empty() ? "euclidean" : "precomputed";
  config["distances"] = c.distances.empty() ? Json(nullptr) : Json(c.distances);
  config["standardize"] = c.standardize;
  config["tests"] = tests;
  config["k"] = c.k;
  config["mode"] = c.mode;
  config["n_perm"] = c.n_perm;
  config["seed"] = common.seed;
  config["alpha"] = c.alpha;
  config["interactions"] = c.interactions;

  const Dataset d = load_csv(c.input, c.label, c.treated);
  const bool graph_tests = std::any_of(tests.begin(), tests.end(), [](const std::string& t) {
    return t == "crossnn" || t == "crossmst";
  });
  std::optional<DistanceMatrix> dm;
  if (graph_tests) {
    if (c.distances.empty()) {
      dm = pairwise_distances(d, {.standardize = c.standardize, .threads = common.threads});
    } else {
      dm = load_distance_csv(c.distances, d.size());
    }
  }

  TestOptions opt;
  opt.mode = mode;
  opt.k = c.k;
  opt.n_perm = c.n_perm;
  opt.seed = common.seed;
  opt.threads = common.threads;

  std::vector<Json> blocks;
  for (const auto& t : tests) {
    Json b;
    double p = 1.0;
    if (t == "crossnn" || t == "crossmst") {
      const TestResult r = t == "crossnn" ? crossnn_test(d, *dm, opt) : crossmst_test(d, *dm, opt);
      b = to_json(r);
      b["mode"] = mode_name(resolve_mode(opt, d.size()));
      p = r.p_asymptotic ? *r.p_asymptotic : r.permutation->p;
    } else if (t == "hotelling") {
      const HotellingResult h = hotelling_t2(d);
      b = to_json(h);
      p = h.p_value;
    } else {
      const LogitFit fit = logistic_fit(d, inter);
      b = to_json(fit);
      // Likelihood-ratio p-value against the intercept-only model.
      const double nt = static_cast<double>(d.n_treated());
      const double nc = static_cast<double>(d.n_control());
      const double n = nt + nc;
      const double null_dev = -2.0 * (nt * std::log(nt / n) + nc * std::log(nc / n));
      const double lr = null_dev - fit.deviance;
      const double df = static_cast<double>(fit.terms.size()) - 1.0;
      b["lr_statistic"] = lr;
      b["lr_df"] = df;
      p = df > 0 && fit.converged ? chi_square_sf(std::max(lr, 0.0), df) : 1.0;
      b["lr_p_value"] = p;
    }
    b["alpha"] = c.alpha;
    b["reject_balance"] = p < c.alpha;
    blocks.push_back(std::move(b));
  }
  emit(provenance("test", common, std::move(config)), blocks, common.format, out);
  return kExitOk;
}

int run_balance(const BalanceConfig& c, const Common& common, std::ostream& out) {
  check_format(common.format, {"text", "json"});
  Json config;
  config["input"] = c.input;
  config["label"] = c.label;
  config["treated"] = c.treated;
  const Dataset d = load_csv(c.input, c.label, c.treated);
  const BalanceTable table = standardized_differences(d);
  if (common.format == "json") {
    emit(provenance("balance", common, std::move(config)), {to_json(table)}, "json", out);
  } else {
    write_balance_text(table, out);
  }
  return kExitOk;
}

std::vector<PowerTest> power_tests(const std::string& list) {
  std::vector<PowerTest> out;
  for (const auto& t : split_list(list)) {
    try {
      out.push_back(parse_power_test(t));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("--tests is empty");
  return out;
}

int run_simulate(const SimulateConfig& c, const Common& common, std::ostream& out) {
  check_format(common.format, {"csv", "text"});
  if (c.scenario.empty() == c.preset.empty()) {
    throw UsageError("give exactly one of --scenario and --preset");
  }
  const auto tests = power_tests(c.tests);
  SimScenario s;
  if (!c.preset.empty()) {
    try {
      s = scenario_preset(c.preset);
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
  } else {
    s = load_scenario(c.scenario);
  }
  if (c.replicates) s.n_replicates = c.replicates;
  if (c.seed_given) s.seed = common.seed;
  const PowerStudyResult r = run_power_study(s, tests, common.threads);
  if (common.format == "csv") {
    write_power_csv(r, out, true);
  } else {
    write_power_summary(r, out);
  }
  if (!c.sd_quantiles.empty()) {
    std::ofstream sd(c.sd_quantiles);
    if (!sd) throw DataError("cannot write '" + c.sd_quantiles + "'");
    write_sd_quantiles_csv(r, sd);
  }
  return kExitOk;
}

int run_agreement(const AgreementConfig& c, const Common& common, std::ostream& out) {
  check_format(common.format, {"csv"});
  std::vector<std::size_t> sizes;
  for (const auto& s : split_list(c.sizes)) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 2) {
      throw UsageError("--n takes a comma-separated list of per-group sizes >= 2");
    }
    sizes.push_back(v);
  }
  if (sizes.empty()) throw UsageError("--n is empty");
  if (c.n_perm < 100) throw UsageError("--n-perm must be at least 100");
  if (c.dim < 1) throw UsageError("--d must be at least 1");
  const auto rows =
      pvalue_agreement_study(sizes, c.dim, c.n_perm, c.replicates, common.seed, common.threads);
  write_agreement_csv(rows, out);
  if (!c.raw.empty()) {
    std::ofstream raw(c.raw);
    if (!raw) throw DataError("cannot write '" + c.raw + "'");
    raw << "n,dim,test,replicate,difference\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.differences.size(); ++i) {
        raw << row.n << ',' << row.dim << ',' << row.test << ',' << i << ','
            << format_double(row.differences[i]) << '\n';
      }
    }
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Common& common, bool with_seed = true) {
  sub->add_option("--format", common.format, "Output format");
  sub->add_option("--threads", common.threads,
                  "Worker threads (0: COVBAL_THREADS or all cores)");
  if (with_seed) sub->add_option("--seed", common.seed, "Random seed");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covariate-balance tests for matched observational studies", "covbal"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);

  Common common;
  TestConfig tc;
  SimulateConfig sc;
  AgreementConfig ac;
  BalanceConfig bc;

  auto* test = app.add_subcommand("test", "Run CrossNN, CrossMST and baseline tests on a CSV");
  test->add_option("--input", tc.input, "CSV with a header row")->required();
  test->add_option("--label", tc.label, "Name of the group column");
  test->add_option("--treated", tc.treated, "Label value marking treated rows");
  test->add_option("--distances", tc.distances, "Precomputed N x N distance CSV");
  test->add_flag("--standardize", tc.standardize, "Scale covariates to unit SD first");
  test->add_option("--tests", tc.tests, "Comma list of crossnn, crossmst, hotelling, logit");
  test->add_option("--k", tc.k, "Neighbours / spanning trees per subject");
  test->add_option("--mode", tc.mode, "auto, asymptotic, permutation or both");
  test->add_option("--n-perm", tc.n_perm, "Permutation replicates");
  test->add_option("--alpha", tc.alpha, "Rejection level");
  test->add_option("--interactions", tc.interactions, "Logit design: none or pairwise");
  add_common(test, common);

  auto* sim = app.add_subcommand("simulate", "Power study on simulated matched cohorts");
  sim->add_option("--scenario", sc.scenario, "Scenario config file");
  sim->add_option("--preset", sc.preset, "Built-in scenario i, ii or iii");
  sim->add_option("--tests", sc.tests, "Comma list of crossnn, crossmst, hotelling");
  sim->add_option("--replicates", sc.replicates, "Override the replicate count");
  sim->add_option("--sd-quantiles", sc.sd_quantiles, "Write SD quantiles CSV here");
  add_common(sim, common, false);
  auto* sim_seed = sim->add_option("--seed", common.seed, "Override the scenario seed");

  auto* agree = app.add_subcommand("agreement", "Asymptotic vs permutation p-values under the null");
  agree->add_option("--n", ac.sizes, "Comma list of per-group sizes");
  agree->add_option("--d", ac.dim, "Dimension");
  agree->add_option("--n-perm", ac.n_perm, "Permutation replicates");
  agree->add_option("--replicates", ac.replicates, "Null datasets per size");
  agree->add_option("--raw", ac.raw, "Write per-replicate differences CSV here");
  add_common(agree, common);

  auto* bal = app.add_subcommand("balance", "Standardized-difference table");
  bal->add_option("--input", bc.input, "CSV with a header row")->required();
  bal->add_option("--label", bc.label, "Name of the group column");
  bal->add_option("--treated", bc.treated, "Label value marking treated rows");
  add_common(bal, common, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (common.format.empty()) common.format = sim->parsed() || agree->parsed() ? "csv" : "text";

  try {
    if (test->parsed()) return run_test(tc, common, out);
    if (sim->parsed()) {
      sc.seed_given = sim_seed->count() > 0;
      return run_simulate(sc, common, out);
    }
    if (agree->parsed()) return run_agreement(ac, common, out);
    return run_balance(bc, common, out);
  } catch (const UsageError& e) {
    err << "covbal: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "covbal: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "covbal: " << e.what() << '\n';
    return kExitDataError;
  }
}

}  // namespace covbal::cli
