#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "covbal/dataset.hpp"

namespace covbal {

// Data-generating model of the power study: X1..X6 iid N(0, 1),
// X7..X10 = X1^2..X4^2, logit P(T = 1) = alpha0 + a (X1 + .. + X6) + b (X7 + .. + X10).
struct SimScenario {
  std::string name = "custom";
  double a = 0.0;
  double b = 0.0;
  // Unset: -3.5 - 4b. The -4b term subtracts E(X7 + .. + X10) = 4, keeping
  // the treated fraction near 5% whatever b is.
  std::optional<double> alpha0;
  std::size_t n_subjects = 1000;
  std::size_t n_replicates = 100;
  double alpha_level = 0.05;
  std::uint64_t seed = 1;
  // Only used when a matched sample is smaller than 100 subjects and the
  // tests fall back to permutation p-values.
  std::size_t n_perm = 10000;

  double resolved_alpha0() const { return alpha0 ? *alpha0 : -3.5 - 4.0 * b; }
};

inline constexpr std::size_t kSimCovariates = 10;
// The balance tests see X1..X6; X7..X10 are functions of them and enter only
// the data-generating model and the standardized-difference table.
inline constexpr std::size_t kObservedCovariates = 6;

// "i" (a = 0.4, b = 0), "ii" (a = b = 0.4), "iii" (a = 0, b = 0.4).
SimScenario scenario_preset(std::string_view name);

// Flat "key = value" text; '#' starts a comment. Keys are the SimScenario
// field names (alpha0 optional). Unknown keys and bad values throw DataError.
SimScenario parse_scenario(std::istream& in);
SimScenario load_scenario(const std::filesystem::path& path);
void write_scenario(const SimScenario& s, std::ostream& out);

struct Cohort {
  Eigen::MatrixXd covariates;          // n_subjects x 10
  std::vector<std::uint8_t> treatment; // 1 = treated
};

// Deterministic in (scenario seed, replicate, attempt).
Cohort generate_cohort(const SimScenario& s, std::size_t replicate, std::size_t attempt = 0);

struct MatchedPairSet {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (treated row, control row)
  double total_distance = 0.0;
};

// Fits logit P(T = 1) on an intercept and X1..X6, then pairs every treated
// subject with a distinct control minimising the total absolute difference
// of fitted linear predictors. DataError when there are fewer controls than
// treated or the propensity fit does not converge.
MatchedPairSet fit_propensity_and_match(const Eigen::MatrixXd& covariates,
                                        std::span<const std::uint8_t> treatment);

// Treated rows (in pair order) followed by their matched controls, keeping
// the first `columns` covariates.
Dataset matched_dataset(const Cohort& cohort, const MatchedPairSet& match,
                        std::size_t columns = kSimCovariates);

// Standardized difference per column between treated and control rows.
std::array<double, kSimCovariates> cohort_standardized_differences(const Cohort& cohort);

enum class PowerTest { CrossNN, CrossMST, Hotelling };

const char* power_test_name(PowerTest t);
PowerTest parse_power_test(std::string_view name);

struct ReplicateRecord {
  std::size_t n_treated = 0;
  std::size_t attempts = 1;
  std::vector<double> p_values;  // one per requested test
  std::array<double, kSimCovariates> sd_before{};
  std::array<double, kSimCovariates> sd_after{};
};

struct PowerRow {
  PowerTest test;
  std::size_t rejections = 0;
  std::size_t replicates = 0;
  double proportion = 0.0;
};

struct PowerStudyResult {
  SimScenario scenario;
  std::vector<PowerTest> tests;
  std::vector<PowerRow> rows;
  std::vector<ReplicateRecord> replicates;
  std::size_t regenerated = 0;  // cohorts redrawn because matching failed
};

// Rejection proportion (p < alpha_level) of each test over the scenario's
// replicates, computed on X1..X6 of the matched samples. Bit-identical for any thread
// count.
PowerStudyResult run_power_study(const SimScenario& s, std::span<const PowerTest> tests,
                                 std::size_t threads = 0);

// One CSV row of rejection proportions per test (with header when requested).
void write_power_csv(const PowerStudyResult& r, std::ostream& out, bool header = true);
// Quantiles of standardized differences per covariate, before and after matching.
void write_sd_quantiles_csv(const PowerStudyResult& r, std::ostream& out);
void write_power_summary(const PowerStudyResult& r, std::ostream& out);

struct Quantiles {
  double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
};
// Linear interpolation between order statistics (R's type 7).
Quantiles quantiles(std::vector<double> values);

struct AgreementRow {
  std::size_t n = 0;  // subjects per group (N = 2n)
  std::size_t dim = 0;
  std::string test;
  std::size_t replicates = 0;
  Quantiles difference;  // asymptotic p - permutation p
  double median_abs = 0.0;
  double max_abs = 0.0;
  std::vector<double> differences;
};

// For every n in n_grid: n_reps null datasets of 2n iid N(0, I_dim) points,
// n labelled treated, each test evaluated with both p-values.
std::vector<AgreementRow> pvalue_agreement_study(std::span<const std::size_t> n_grid,
                                                 std::size_t dim, std::size_t n_perm,
                                                 std::size_t n_reps, std::uint64_t seed,
                                                 std::size_t threads = 0);

void write_agreement_csv(std::span<const AgreementRow> rows, std::ostream& out);

}  // namespace covbal
