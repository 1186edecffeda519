#include "covbal/simharness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "covbal/assignment.hpp"
#include "covbal/baselines.hpp"
#include "covbal/crossmst.hpp"
#include "covbal/crossnn.hpp"
#include "covbal/error.hpp"
#include "covbal/parallel.hpp"
#include "covbal/random.hpp"

namespace covbal {

namespace {

constexpr std::uint64_t kCohortStream = 0x636f686fULL;     // "coho"
constexpr std::uint64_t kAgreementStream = 0x61677265ULL;  // "agre"
constexpr std::uint64_t kTestSeedStream = 0x74657374ULL;   // "test"
constexpr std::size_t kMaxAttempts = 100;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw DataError("scenario: bad value '" + value + "' for " + key);
  }
  return out;
}

}  // namespace

SimScenario scenario_preset(std::string_view name) {
  SimScenario s;
  s.name = std::string(name);
  if (name == "i") {
    s.a = 0.4;
  } else if (name == "ii") {
    s.a = 0.4;
    s.b = 0.4;
  } else if (name == "iii") {
    s.b = 0.4;
  } else {
    throw DataError("unknown scenario preset '" + std::string(name) + "' (expected i, ii or iii)");
  }
  return s;
}

SimScenario parse_scenario(std::istream& in) {
  SimScenario s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("scenario: line " + std::to_string(lineno) + " is not key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "name") s.name = value;
    else if (key == "a") s.a = parse_number<double>(key, value);
    else if (key == "b") s.b = parse_number<double>(key, value);
    else if (key == "alpha0") s.alpha0 = parse_number<double>(key, value);
    else if (key == "n_subjects") s.n_subjects = parse_number<std::size_t>(key, value);
    else if (key == "n_replicates") s.n_replicates = parse_number<std::size_t>(key, value);
    else if (key == "alpha_level") s.alpha_level = parse_number<double>(key, value);
    else if (key == "seed") s.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "n_perm") s.n_perm = parse_number<std::size_t>(key, value);
    else throw DataError("scenario: unknown key '" + key + "' on line " + std::to_string(lineno));
  }
  if (s.n_subjects < 8) throw DataError("scenario: n_subjects must be at least 8");
  if (!(s.alpha_level > 0.0 && s.alpha_level < 1.0)) {
    throw DataError("scenario: alpha_level must lie in (0, 1)");
  }
  return s;
}

SimScenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_scenario(in);
}

void write_scenario(const SimScenario& s, std::ostream& out) {
  out << "name = " << s.name << '\n'
      << "a = " << s.a << '\n'
      << "b = " << s.b << '\n';
  if (s.alpha0) out << "alpha0 = " << *s.alpha0 << '\n';
  out << "n_subjects = " << s.n_subjects << '\n'
      << "n_replicates = " << s.n_replicates << '\n'
      << "alpha_level = " << s.alpha_level << '\n'
      << "seed = " << s.seed << '\n'
      << "n_perm = " << s.n_perm << '\n';
}

Cohort generate_cohort(const SimScenario& s, std::size_t replicate, std::size_t attempt) {
  Rng rng(derive_seed(s.seed, {kCohortStream, replicate, attempt}));
  const auto n = static_cast<Eigen::Index>(s.n_subjects);
  const double alpha0 = s.resolved_alpha0();
  Cohort c;
  c.covariates.resize(n, static_cast<Eigen::Index>(kSimCovariates));
  c.treatment.resize(s.n_subjects);
  for (Eigen::Index i = 0; i < n; ++i) {
    double main = 0.0;
    double quad = 0.0;
    for (Eigen::Index j = 0; j < 6; ++j) {
      const double x = rng.normal();
      c.covariates(i, j) = x;
      main += x;
    }
    for (Eigen::Index j = 0; j < 4; ++j) {
      const double sq = c.covariates(i, j) * c.covariates(i, j);
      c.covariates(i, 6 + j) = sq;
      quad += sq;
    }
    const double logit = alpha0 + s.a * main + s.b * quad;
    c.treatment[static_cast<std::size_t>(i)] = rng.bernoulli(1.0 / (1.0 + std::exp(-logit)));
  }
  return c;
}

MatchedPairSet fit_propensity_and_match(const Eigen::MatrixXd& covariates,
                                        std::span<const std::uint8_t> treatment) {
  const Eigen::Index n = covariates.rows();
  if (static_cast<std::size_t>(n) != treatment.size()) {
    throw std::invalid_argument("fit_propensity_and_match: row count != treatment length");
  }
  if (covariates.cols() < 6) throw std::invalid_argument("fit_propensity_and_match: need X1..X6");
  std::vector<std::size_t> treated, controls;
  for (std::size_t i = 0; i < treatment.size(); ++i) (treatment[i] ? treated : controls).push_back(i);
  if (treated.empty()) throw DataError("matching: no treated subjects");
  if (controls.size() < treated.size()) {
    throw DataError("matching: " + std::to_string(controls.size()) + " controls for " +
                    std::to_string(treated.size()) + " treated");
  }

  Eigen::MatrixXd design(n, 7);
  design.col(0).setOnes();
  design.rightCols(6) = covariates.leftCols(6);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = treatment[static_cast<std::size_t>(i)];
  const LogitFit fit =
      fit_logistic(design, y, {"(Intercept)", "X1", "X2", "X3", "X4", "X5", "X6"});
  if (!fit.converged || !fit.dropped.empty()) throw DataError("matching: propensity fit failed");
  Eigen::VectorXd beta(7);
  for (Eigen::Index j = 0; j < 7; ++j) beta[j] = fit.terms[static_cast<std::size_t>(j)].estimate;
  const Eigen::VectorXd score = design * beta;

  CostMatrix cost(static_cast<Eigen::Index>(treated.size()), static_cast<Eigen::Index>(controls.size()));
  for (std::size_t r = 0; r < treated.size(); ++r) {
    for (std::size_t c = 0; c < controls.size(); ++c) {
      cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          std::abs(score[static_cast<Eigen::Index>(treated[r])] -
                   score[static_cast<Eigen::Index>(controls[c])]);
    }
  }
  const AssignmentSolution sol = solve_assignment(cost);
  MatchedPairSet m;
  m.total_distance = sol.cost;
  for (std::size_t r = 0; r < treated.size(); ++r) {
    m.pairs.emplace_back(treated[r], controls[sol.row_to_col[r]]);
  }
  return m;
}

Dataset matched_dataset(const Cohort& cohort, const MatchedPairSet& match, std::size_t columns) {
  const std::size_t dim = std::min(columns, static_cast<std::size_t>(cohort.covariates.cols()));
  const std::size_t pairs = match.pairs.size();
  std::vector<double> values(2 * pairs * dim);
  std::vector<Group> labels(2 * pairs);
  for (std::size_t p = 0; p < pairs; ++p) {
    for (std::size_t j = 0; j < dim; ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      values[p * dim + j] = cohort.covariates(static_cast<Eigen::Index>(match.pairs[p].first), col);
      values[(pairs + p) * dim + j] =
          cohort.covariates(static_cast<Eigen::Index>(match.pairs[p].second), col);
    }
    labels[p] = Group::Treated;
    labels[pairs + p] = Group::Control;
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < dim; ++j) names.push_back("X" + std::to_string(j + 1));
  return Dataset(std::move(values), dim, std::move(labels), std::move(names));
}

std::array<double, kSimCovariates> cohort_standardized_differences(const Cohort& cohort) {
  std::vector<double> values(static_cast<std::size_t>(cohort.covariates.size()));
  std::vector<Group> labels(cohort.treatment.size());
  const auto dim = static_cast<std::size_t>(cohort.covariates.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = cohort.treatment[i] ? Group::Treated : Group::Control;
    for (std::size_t j = 0; j < dim; ++j) {
      values[i * dim + j] =
          cohort.covariates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  const BalanceTable t = standardized_differences(Dataset(std::move(values), dim, std::move(labels)));
  std::array<double, kSimCovariates> out{};
  for (std::size_t j = 0; j < kSimCovariates && j < t.rows.size(); ++j) {
    out[j] = t.rows[j].standardized_difference;
  }
  return out;
}

const char* power_test_name(PowerTest t) {
  switch (t) {
    case PowerTest::CrossNN: return "crossnn";
    case PowerTest::CrossMST: return "crossmst";
    case PowerTest::Hotelling: return "hotelling";
  }
  return "unknown";
}

PowerTest parse_power_test(std::string_view name) {
  for (PowerTest t : {PowerTest::CrossNN, PowerTest::CrossMST, PowerTest::Hotelling}) {
    if (name == power_test_name(t)) return t;
  }
  throw std::invalid_argument("unknown test '" + std::string(name) +
                              "' (expected crossnn, crossmst or hotelling)");
}

PowerStudyResult run_power_study(const SimScenario& s, std::span<const PowerTest> tests,
                                 std::size_t threads) {
  PowerStudyResult result;
  result.scenario = s;
  result.tests.assign(tests.begin(), tests.end());
  result.replicates.resize(s.n_replicates);

  parallel_for(s.n_replicates, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      ReplicateRecord& rec = result.replicates[r];
      for (std::size_t attempt = 0;; ++attempt) {
        if (attempt == kMaxAttempts) {
          throw DataError("power study: matching failed " + std::to_string(kMaxAttempts) +
                          " times for replicate " + std::to_string(r));
        }
        const Cohort cohort = generate_cohort(s, r, attempt);
        const auto treated = static_cast<std::size_t>(
            std::count(cohort.treatment.begin(), cohort.treatment.end(), 1));
        if (treated < 2 || 2 * treated > cohort.treatment.size()) continue;
        MatchedPairSet match;
        try {
          match = fit_propensity_and_match(cohort.covariates, cohort.treatment);
        } catch (const DataError&) {
          continue;
        }
        rec.attempts = attempt + 1;
        rec.n_treated = treated;
        rec.sd_before = cohort_standardized_differences(cohort);
        const BalanceTable after = standardized_differences(matched_dataset(cohort, match));
        for (std::size_t j = 0; j < kSimCovariates; ++j) {
          rec.sd_after[j] = after.rows[j].standardized_difference;
        }
        const Dataset d = matched_dataset(cohort, match, kObservedCovariates);
        const DistanceMatrix dm = pairwise_distances(d, {.standardize = false, .threads = 1});
        TestOptions opt;
        opt.n_perm = s.n_perm;
        opt.seed = derive_seed(s.seed, {kTestSeedStream, r});
        opt.threads = 1;
        for (PowerTest t : tests) {
          double p = 1.0;
          if (t == PowerTest::Hotelling) {
            p = hotelling_t2(d).p_value;
          } else {
            const TestResult tr =
                t == PowerTest::CrossNN ? crossnn_test(d, dm, opt) : crossmst_test(d, dm, opt);
            p = tr.p_asymptotic ? *tr.p_asymptotic : tr.permutation->p;
          }
          rec.p_values.push_back(p);
        }
        break;
      }
    }
  });

  for (std::size_t t = 0; t < tests.size(); ++t) {
    PowerRow row{tests[t], 0, s.n_replicates, 0.0};
    for (const auto& rec : result.replicates) row.rejections += rec.p_values[t] < s.alpha_level;
    row.proportion = s.n_replicates ? static_cast<double>(row.rejections) /
                                          static_cast<double>(s.n_replicates)
                                    : 0.0;
    result.rows.push_back(row);
  }
  for (const auto& rec : result.replicates) result.regenerated += rec.attempts - 1;
  return result;
}

void write_power_csv(const PowerStudyResult& r, std::ostream& out, bool header) {
  const SimScenario& s = r.scenario;
  if (header) {
    out << "scenario,a,b,alpha0,n_subjects,replicates,alpha,seed";
    for (const auto& row : r.rows) out << ',' << power_test_name(row.test);
    out << ",regenerated\n";
  }
  out << s.name << ',' << s.a << ',' << s.b << ',' << s.resolved_alpha0() << ',' << s.n_subjects
      << ',' << s.n_replicates << ',' << s.alpha_level << ',' << s.seed;
  for (const auto& row : r.rows) out << ',' << row.proportion;
  out << ',' << r.regenerated << '\n';
}

Quantiles quantiles(std::vector<double> values) {
  Quantiles q;
  if (values.empty()) return q;
  std::sort(values.begin(), values.end());
  const auto at = [&](double prob) {
    const double h = prob * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  q.min = values.front();
  q.q25 = at(0.25);
  q.median = at(0.5);
  q.q75 = at(0.75);
  q.max = values.back();
  return q;
}

void write_sd_quantiles_csv(const PowerStudyResult& r, std::ostream& out) {
  out << "scenario,stage,covariate,min,q25,median,q75,max\n";
  for (int stage = 0; stage < 2; ++stage) {
    for (std::size_t j = 0; j < kSimCovariates; ++j) {
      std::vector<double> v;
      for (const auto& rec : r.replicates) v.push_back(stage == 0 ? rec.sd_before[j] : rec.sd_after[j]);
      const Quantiles q = quantiles(std::move(v));
      out << r.scenario.name << ',' << (stage == 0 ? "before" : "after") << ",X" << j + 1 << ','
          << q.min << ',' << q.q25 << ',' << q.median << ',' << q.q75 << ',' << q.max << '\n';
    }
  }
}

void write_power_summary(const PowerStudyResult& r, std::ostream& out) {
  const SimScenario& s = r.scenario;
  std::size_t treated = 0;
  for (const auto& rec : r.replicates) treated += rec.n_treated;
  out << "scenario " << s.name << ": a = " << s.a << ", b = " << s.b
      << ", alpha0 = " << s.resolved_alpha0() << ", " << s.n_subjects << " subjects, "
      << s.n_replicates << " replicates, level " << s.alpha_level << '\n';
  if (!r.replicates.empty()) {
    out << "mean treated per replicate: "
        << static_cast<double>(treated) / static_cast<double>(r.replicates.size())
        << "; regenerated cohorts: " << r.regenerated << '\n';
  }
  for (const auto& row : r.rows) {
    out << "  " << std::left << std::setw(10) << power_test_name(row.test) << std::right
        << " rejected " << std::setw(4) << row.rejections << " / " << row.replicates << "  ("
        << row.proportion << ")\n";
  }
}

std::vector<AgreementRow> pvalue_agreement_study(std::span<const std::size_t> n_grid,
                                                 std::size_t dim, std::size_t n_perm,
                                                 std::size_t n_reps, std::uint64_t seed,
                                                 std::size_t threads) {
  std::vector<AgreementRow> rows;
  for (std::size_t n : n_grid) {
    if (n < 2) throw std::invalid_argument("agreement study: n must be at least 2 per group");
    std::vector<std::array<double, 2>> diffs(n_reps);
    parallel_for(n_reps, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t rep = begin; rep < end; ++rep) {
        Rng rng(derive_seed(seed, {kAgreementStream, n, dim, rep}));
        std::vector<double> values(2 * n * dim);
        for (double& v : values) v = rng.normal();
        std::vector<Group> labels(2 * n, Group::Control);
        std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n), Group::Treated);
        const Dataset d(std::move(values), dim, std::move(labels));
        const DistanceMatrix dm = pairwise_distances(d, {.standardize = false, .threads = 1});
        TestOptions opt;
        opt.mode = PValueMode::Both;
        opt.n_perm = n_perm;
        opt.seed = derive_seed(seed, {kTestSeedStream, n, dim, rep});
        opt.threads = 1;
        const TestResult nn = crossnn_test(d, dm, opt);
        const TestResult mst = crossmst_test(d, dm, opt);
        diffs[rep] = {*nn.p_asymptotic - nn.permutation->p, *mst.p_asymptotic - mst.permutation->p};
      }
    });
    for (std::size_t t = 0; t < 2; ++t) {
      AgreementRow row;
      row.n = n;
      row.dim = dim;
      row.test = t == 0 ? "crossnn" : "crossmst";
      row.replicates = n_reps;
      for (const auto& d : diffs) row.differences.push_back(d[t]);
      row.difference = quantiles(row.differences);
      std::vector<double> abs_diff;
      for (double v : row.differences) abs_diff.push_back(std::abs(v));
      const Quantiles qa = quantiles(abs_diff);
      row.median_abs = qa.median;
      row.max_abs = qa.max;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_agreement_csv(std::span<const AgreementRow> rows, std::ostream& out) {
  out << "n,dim,test,replicates,min,q25,median,q75,max,median_abs,max_abs\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.dim << ',' << r.test << ',' << r.replicates << ',' << r.difference.min
        << ',' << r.difference.q25 << ',' << r.difference.median << ',' << r.difference.q75 << ','
        << r.difference.max << ',' << r.median_abs << ',' << r.max_abs << '\n';
  }
}

}  // namespace covbal
