#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <stdexcept>

#include "doctest.h"
#include "qfs/distribution.hpp"
#include "qfs/risk.hpp"
#include "qfs/rng.hpp"

namespace {

std::string data_path(const std::string& name) {
  return std::string(QFS_DATA_DIR) + "/" + name;
}

qfs::DiscreteDistribution random_dist(int bins, qfs::Rng& rng) {
  qfs::DiscreteDistribution d;
  d.probabilities.resize(bins);
  double total = 0.0;
  for (auto& p : d.probabilities) {
    p = rng.uniform01() + 1e-3;
    total += p;
  }
  for (auto& p : d.probabilities) p /= total;
  return d;
}

}  // namespace

TEST_SUITE("risk") {

TEST_CASE("exact quantum metrics equal the closed-form oracle") {
  qfs::Rng rng(808);
  const std::vector<double> alphas = {0.95, 0.99};
  for (int n = 1; n <= 4; ++n) {
    const auto dist = random_dist(1 << n, rng);
    const auto classical = qfs::classical_risk_oracle(dist, alphas);
    const auto quantum =
        qfs::quantum_risk_report(dist, alphas, qfs::RiskMode::kExact, 0, 1);
    CAPTURE(n);
    CHECK(quantum.backend == "exact");
    CHECK(quantum.expected_value ==
          doctest::Approx(classical.expected_value).epsilon(1e-9));
    CHECK(quantum.std_dev ==
          doctest::Approx(classical.std_dev).epsilon(1e-9));
    REQUIRE(quantum.var_bins.size() == 2);
    CHECK(quantum.var_bins[0] == classical.var_bins[0]);
    CHECK(quantum.var_bins[1] == classical.var_bins[1]);
    CHECK(quantum.cvar_bins[0] ==
          doctest::Approx(classical.cvar_bins[0]).epsilon(1e-9));
    CHECK(quantum.cvar_bins[1] ==
          doctest::Approx(classical.cvar_bins[1]).epsilon(1e-9));
  }
}

TEST_CASE("8-bin desk distribution reproduces the published metrics") {
  const auto dist = qfs::load_probability_file(data_path("daily_pl_8bin.txt"));
  const auto report = qfs::quantum_risk_report(dist, {0.95, 0.99},
                                               qfs::RiskMode::kExact, 0, 1);
  CHECK(std::abs(report.expected_value - 3.584) < 1e-3);
  CHECK(std::abs(report.std_dev - 0.948) < 1e-3);
  REQUIRE(report.var_bins.size() == 2);
  CHECK(report.var_bins[0] == 2);
  CHECK(report.var_bins[1] == 1);
  CHECK(std::abs(report.cvar_bins[0] - 1.802) < 1e-3);
  CHECK(std::abs(report.cvar_bins[1] - 0.667) < 1e-3);
}

TEST_CASE("16-bin desk distribution reproduces the published metrics") {
  const auto dist =
      qfs::load_probability_file(data_path("daily_pl_16bin.txt"));
  const auto report = qfs::quantum_risk_report(dist, {0.95, 0.99},
                                               qfs::RiskMode::kExact, 0, 1);
  CHECK(std::abs(report.expected_value - 7.666) < 1e-3);
  CHECK(std::abs(report.std_dev - 2.089) < 1e-3);
  REQUIRE(report.var_bins.size() == 2);
  CHECK(report.var_bins[0] == 4);
  CHECK(report.var_bins[1] == 2);
  CHECK(std::abs(report.cvar_bins[0] - 3.137) < 1e-3);
  CHECK(std::abs(report.cvar_bins[1] - 1.091) < 1e-3);
}

TEST_CASE("VaR is the smallest level with cumulative mass >= 1 - alpha") {
  qfs::DiscreteDistribution d;
  d.probabilities = {0.02, 0.03, 0.10, 0.85};
  // Cumulative: 0.02, 0.05, 0.15, 1.0. At alpha = 0.99 the first bin already
  // covers the 1% tail, so the answer is bin 0. Alphas sit strictly between
  // cumulative masses so rounding in 1 - alpha cannot flip a comparison.
  CHECK(qfs::value_at_risk(d, 0.99, qfs::RiskMode::kExact, 0, 1) == 0);
  CHECK(qfs::value_at_risk(d, 0.96, qfs::RiskMode::kExact, 0, 1) == 1);
  CHECK(qfs::value_at_risk(d, 0.90, qfs::RiskMode::kExact, 0, 1) == 2);
  CHECK(qfs::value_at_risk(d, 0.50, qfs::RiskMode::kExact, 0, 1) == 3);
  CHECK_THROWS_AS(qfs::value_at_risk(d, 0.0, qfs::RiskMode::kExact, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(qfs::value_at_risk(d, 1.0, qfs::RiskMode::kExact, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("heavy first bin short-circuits VaR and CVaR to zero") {
  qfs::DiscreteDistribution d;
  d.probabilities = {0.5, 0.2, 0.2, 0.1};
  // threshold = 1 - 0.6 = 0.4 <= p0, so the classical guard fires: no
  // probes, VaR = 0, and CVaR = 0 by the var-level-zero rule.
  CHECK(qfs::value_at_risk(d, 0.6, qfs::RiskMode::kSampled, 128, 1) == 0);
  CHECK(qfs::conditional_var(d, 0.6, qfs::RiskMode::kSampled, 128, 1) == 0.0);
  CHECK(qfs::value_at_risk(d, 0.6, qfs::RiskMode::kExact, 0, 1) == 0);
}

TEST_CASE("exact CVaR matches the conditional tail mean") {
  qfs::DiscreteDistribution d;
  d.probabilities = {0.05, 0.05, 0.30, 0.60};
  // threshold 0.04 < p0 = 0.05, so the first bin covers the tail: VaR = 0.
  CHECK(qfs::value_at_risk(d, 0.96, qfs::RiskMode::kExact, 0, 1) == 0);
  // A slightly deeper tail: threshold 0.08 lands VaR at bin 1, and
  // CVaR = (0*0.05 + 1*0.05) / 0.10 = 0.5.
  CHECK(qfs::value_at_risk(d, 0.92, qfs::RiskMode::kExact, 0, 1) == 1);
  CHECK(qfs::conditional_var(d, 0.92, qfs::RiskMode::kExact, 0, 1) ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("point mass at the top bin has zero spread") {
  qfs::DiscreteDistribution d;
  d.probabilities = {0.0, 0.0, 0.0, 1.0};
  CHECK(qfs::expected_value(d, qfs::RiskMode::kExact, 0, 1) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(qfs::std_dev(d, qfs::RiskMode::kExact, 0, 1) ==
        doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("sampled estimates are deterministic in the seed") {
  const auto dist = qfs::load_probability_file(data_path("daily_pl_8bin.txt"));
  const auto a = qfs::quantum_risk_report(dist, {0.95}, qfs::RiskMode::kSampled,
                                          4096, 42);
  const auto b = qfs::quantum_risk_report(dist, {0.95}, qfs::RiskMode::kSampled,
                                          4096, 42);
  const auto c = qfs::quantum_risk_report(dist, {0.95}, qfs::RiskMode::kSampled,
                                          4096, 43);
  CHECK(a.expected_value == b.expected_value);
  CHECK(a.std_dev == b.std_dev);
  CHECK(a.var_bins == b.var_bins);
  CHECK(a.cvar_bins == b.cvar_bins);
  CHECK(a.expected_value != c.expected_value);
  CHECK(a.backend == "sampled");
  CHECK(a.shots == 4096);
  CHECK(a.seed == 42);
}

TEST_CASE("report metrics equal the standalone metric functions") {
  // The report shares per-metric child seed streams with the granular API,
  // so assembling the report must not change any sampled number.
  const auto dist = qfs::load_probability_file(data_path("daily_pl_8bin.txt"));
  const std::uint64_t seed = 11;
  const int shots = 2048;
  const auto report = qfs::quantum_risk_report(dist, {0.95, 0.99},
                                               qfs::RiskMode::kSampled, shots,
                                               seed);
  CHECK(report.expected_value ==
        qfs::expected_value(dist, qfs::RiskMode::kSampled, shots,
                            qfs::child_seed(seed, 1)));
  CHECK(report.std_dev == qfs::std_dev(dist, qfs::RiskMode::kSampled, shots,
                                       seed));
  CHECK(report.var_bins[0] ==
        qfs::value_at_risk(dist, 0.95, qfs::RiskMode::kSampled, shots,
                           qfs::child_seed(seed, 3)));
  CHECK(report.var_bins[1] ==
        qfs::value_at_risk(dist, 0.99, qfs::RiskMode::kSampled, shots,
                           qfs::child_seed(seed, 5)));
}

TEST_CASE("sampled metrics land near the exact values at 8192 shots") {
  const auto dist = qfs::load_probability_file(data_path("daily_pl_8bin.txt"));
  const auto exact = qfs::quantum_risk_report(dist, {0.95, 0.99},
                                              qfs::RiskMode::kExact, 0, 1);
  // Fixed seeds; the binomial sigma on E[X] at 8192 shots is ~0.039 bins,
  // so 0.15 is a ~4 sigma envelope. The sigma estimate combines two sampled
  // moments and E[X] enters squared (dSigma/dE = -E/sigma = -3.8), so its
  // 4-sigma envelope is a much wider ~0.8 bins.
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const auto sampled = qfs::quantum_risk_report(
        dist, {0.95, 0.99}, qfs::RiskMode::kSampled, 8192, seed);
    CAPTURE(seed);
    CHECK(std::abs(sampled.expected_value - exact.expected_value) < 0.15);
    CHECK(std::abs(sampled.std_dev - exact.std_dev) < 0.9);
    CHECK(sampled.var_bins[0] == exact.var_bins[0]);
    CHECK(sampled.var_bins[1] == exact.var_bins[1]);
    CHECK(std::abs(sampled.cvar_bins[0] - exact.cvar_bins[0]) < 0.25);
    CHECK(std::abs(sampled.cvar_bins[1] - exact.cvar_bins[1]) < 0.25);
  }
}

TEST_CASE("sampled mode requires a positive shot count") {
  qfs::DiscreteDistribution d;
  d.probabilities = {0.5, 0.5};
  CHECK_THROWS_AS(
      qfs::expected_value(d, qfs::RiskMode::kSampled, 0, 1),
      std::invalid_argument);
  CHECK_NOTHROW(qfs::expected_value(d, qfs::RiskMode::kExact, 0, 1));
}

TEST_CASE("classical_series_metrics computes order-statistic VaR/CVaR") {
  std::vector<double> series(20);
  std::iota(series.begin(), series.end(), 1.0);  // 1..20
  const auto m95 = qfs::classical_series_metrics(series, 0.95);
  CHECK(m95.mean == doctest::Approx(10.5));
  // Population standard deviation of 1..20.
  double var = 0.0;
  for (double v : series) var += (v - 10.5) * (v - 10.5);
  var /= series.size();
  CHECK(m95.std_dev == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
  // ceil((1 - alpha) * 20) values in the tail; alphas chosen so the product
  // is never an exact integer (rounding in 1 - alpha would move the ceil).
  const auto m999 = qfs::classical_series_metrics(series, 0.999);
  CHECK(m999.var == doctest::Approx(1.0));   // single worst outcome
  CHECK(m999.cvar == doctest::Approx(1.0));
  const auto m90 = qfs::classical_series_metrics(series, 0.90);
  CHECK(m90.var == doctest::Approx(2.0));    // two-element tail {1, 2}
  CHECK(m90.cvar == doctest::Approx(1.5));
  const auto m72 = qfs::classical_series_metrics(series, 0.72);
  CHECK(m72.var == doctest::Approx(6.0));    // ceil(5.6) = 6 elements
  CHECK(m72.cvar == doctest::Approx(3.5));
  CHECK_THROWS_AS(qfs::classical_series_metrics({}, 0.95),
                  std::invalid_argument);
}

TEST_CASE("binned metrics track the underlying series as bins refine") {
  const auto series = qfs::load_series_csv(data_path("sample_pl_series.csv"));
  const double lo = -50.0, hi = 50.0;
  const auto d16 = qfs::discretize(series, 16, lo, hi,
                                   qfs::OutlierPolicy::kClip);
  const auto report = qfs::classical_risk_oracle(d16, {0.95});
  const auto truth = qfs::classical_series_metrics(series, 0.95);
  // Map binned E[X] back to P/L units via the bin centers' linear scale:
  // bin width 6.25, bin 0 center at -46.875.
  const double width = (hi - lo) / 16;
  const double mean_units = lo + width * (report.expected_value + 0.5);
  CHECK(std::abs(mean_units - truth.mean) < width);
  // VaR bracket from the edges contains the order-statistic VaR.
  const auto [vlo, vhi] =
      qfs::bins_to_units(report.var_bins[0], d16.bin_edges);
  CHECK(vlo <= truth.var);
  CHECK(truth.var <= vhi + width);  // binning granularity
}

}  // TEST_SUITE("risk")
