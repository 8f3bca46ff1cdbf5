#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "dab/bounds.hpp"
#include "dab/errors.hpp"

using namespace dab;

namespace {

// Frozen externally computed constants used as fixture inputs.
constexpr double kEps8ExpM100 = 2.9760607808166689e-43;  // 8 * exp(-100)
constexpr double kEpsExpM2 = 0.1353352832366127;         // exp(-2)
constexpr double kTwoOverE = 0.73575888234288467;        // 2 / e
constexpr double kInvSqrt2 = 0.70710678118654757;        // 1 / sqrt(2)

bool decomposed(const BoundReport& r) {
  return std::abs(r.total - (r.divergence_term + r.complexity_term + r.confidence_term)) <= 1e-12;
}

}  // namespace

TEST_CASE("multi-source entropy bound hits a frozen closed form") {
  // ln_uen = 0, width 1, single block of 3200 points, epsilon = 8 exp(-100):
  // the radical is (0 + 100 - ln 8 + ln 8) * 32 / 3200 = 1 exactly.
  const BoundReport r = bound_multi_uen(0.0, 0.0, SimplexWeights{{1.0}}, {3200}, 1.0, kEps8ExpM100);
  CHECK(r.confidence_term == 1.0);
  CHECK(r.divergence_term == 0.0);
  CHECK(r.complexity_term == 0.0);
  CHECK(r.total == 1.0);
  CHECK(r.gate_satisfied);
  CHECK(r.kind == BoundKind::MultiUen);
  CHECK(decomposed(r));
}

TEST_CASE("multi-source complexity bound hits a frozen closed form") {
  // K = 1, w = 1, r = 0, width 1, N = 1, epsilon = exp(-2):
  // term = sqrt(1 * 2 / 2 * 1) = 1.
  const BoundReport r =
      bound_multi_rademacher(0.25, {0.0}, SimplexWeights{{1.0}}, {1}, 1.0, kEpsExpM2);
  CHECK(r.confidence_term == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.divergence_term == 0.25);
  CHECK(r.complexity_term == 0.0);
  CHECK(decomposed(r));
  // complexity term is 2 sum w_k r_k
  const BoundReport r2 =
      bound_multi_rademacher(0.0, {0.5, 0.25}, SimplexWeights{{0.5, 0.5}}, {10, 10}, 1.0, 0.5);
  CHECK(r2.complexity_term == doctest::Approx(2.0 * (0.5 * 0.5 + 0.5 * 0.25)));
}

TEST_CASE("two-part complexity bound keeps its first radical width unsquared") {
  // tau = 1, width 2, n_t = 2, epsilon = 4 exp(-2) makes ln(4/eps) = 2, so
  // the target-side term is 3 * sqrt(2 * 2 / (2*2)) = 3.  Squaring the width
  // would give 3 * sqrt(2) instead.
  const double eps = 4.0 * kEpsExpM2;
  const BoundReport r =
      bound_combined_rademacher(0.0, 0.0, 0.0, MixCoefficient{1.0}, 5, 2, 2.0, eps);
  CHECK(r.confidence_term == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(r.confidence_term < 4.0);  // distinguishes from the squared-width value
  CHECK(r.divergence_term == 0.0);
  CHECK(r.complexity_term == 0.0);
  CHECK(decomposed(r));
}

TEST_CASE("two-part complexity bound at tau = 0 collapses to the baseline at half epsilon") {
  const double eps = kTwoOverE;  // ln(2/eps) = 1 at eps = 2/e
  const BoundReport r =
      bound_combined_rademacher(0.0, 0.0, 0.0, MixCoefficient{0.0}, 1, 7, 1.0, eps);
  // remaining radical: sqrt(1 * ln(2/eps) / 2 * (0 + 1/1)) = 1/sqrt(2)
  CHECK(r.confidence_term == doctest::Approx(kInvSqrt2).epsilon(1e-15));
  const BoundReport base = bound_classical_rademacher(0.0, 1, 1.0, eps / 2.0);
  CHECK(r.total == doctest::Approx(base.total).epsilon(1e-12));
}

TEST_CASE("adapted bounds collapse to the baselines in the degenerate corners") {
  const double eps = 0.05;
  const double width = 2.0;
  const long long n = 400;
  const double ln_uen = 1.7;
  // one source with full weight, zero divergence
  const BoundReport multi = bound_multi_uen(0.0, ln_uen, SimplexWeights{{1.0}}, {n}, width, eps);
  const BoundReport classical = bound_classical_uen(ln_uen, n, width, eps);
  CHECK(std::abs(multi.total - classical.total) <= 1e-12);
  CHECK(multi.gate_satisfied == classical.gate_satisfied);

  const BoundReport multi_r =
      bound_multi_rademacher(0.0, {0.3}, SimplexWeights{{1.0}}, {n}, width, eps);
  const BoundReport classical_r = bound_classical_rademacher(0.3, n, width, eps);
  CHECK(std::abs(multi_r.total - classical_r.total) <= 1e-12);

  // tau = 0 and zero divergence: only the source part remains
  const BoundReport comb = bound_combined_uen(0.0, ln_uen, MixCoefficient{0.0}, n, 9, width, eps);
  CHECK(std::abs(comb.total - classical.total) <= 1e-12);

  const BoundReport comb_r =
      bound_combined_rademacher(0.0, 0.3, 0.9, MixCoefficient{0.0}, n, 9, width, eps);
  const BoundReport classical_r_half = bound_classical_rademacher(0.3, n, width, eps / 2.0);
  CHECK(std::abs(comb_r.total - classical_r_half.total) <= 1e-12);
}

TEST_CASE("entropy-based radicals agree with the direct product form for few blocks") {
  // For K blocks the variance factor sum_k w_k^2 / N_k can also be computed
  // as a single fraction over the product of the N_k.
  const std::vector<std::vector<long long>> ns_sets = {{7}, {7, 13}, {3, 5, 11}, {2, 9, 4, 25}};
  const std::vector<std::vector<double>> w_sets = {
      {1.0}, {0.3, 0.7}, {0.2, 0.5, 0.3}, {0.1, 0.4, 0.25, 0.25}};
  for (size_t i = 0; i < ns_sets.size(); ++i) {
    const auto& ns = ns_sets[i];
    const auto& w = w_sets[i];
    double prod = 1.0;
    for (long long n : ns) prod *= static_cast<double>(n);
    double numer = 0.0;
    for (size_t k = 0; k < ns.size(); ++k) {
      double other = 1.0;
      for (size_t j = 0; j < ns.size(); ++j) {
        if (j != k) other *= static_cast<double>(ns[j]);
      }
      numer += w[k] * w[k] * other;
    }
    const double direct = numer / prod;
    double sum_form = 0.0;
    for (size_t k = 0; k < ns.size(); ++k) sum_form += w[k] * w[k] / static_cast<double>(ns[k]);
    CHECK(sum_form == doctest::Approx(direct).epsilon(1e-9));
    // and the bound built on it is finite and decomposes
    const BoundReport r = bound_multi_uen(0.1, 0.5, SimplexWeights{w}, ns, 1.0, 0.05);
    CHECK(std::isfinite(r.total));
    CHECK(decomposed(r));
  }
}

TEST_CASE("sample-size gate flips on an adversarial small-sample fixture") {
  // Nine singleton blocks at uniform weight, ln_uen = 0, width 1,
  // epsilon = 0.99: radical^2 = (ln 8 - ln 0.99 + ... ) -- the explicit gate
  // quantity 8 * width^2 / radical^2 exceeds the product of sizes (1).
  const std::vector<long long> ones(9, 1);
  const SimplexWeights w{std::vector<double>(9, 1.0 / 9.0)};
  const BoundReport bad = bound_multi_uen(0.0, 0.0, w, ones, 1.0, 0.99);
  CHECK_FALSE(bad.gate_satisfied);
  CHECK(std::isfinite(bad.total));  // still evaluated, only flagged

  const BoundReport good = bound_multi_uen(0.0, 0.0, SimplexWeights{{1.0}}, {3200}, 1.0, 0.05);
  CHECK(good.gate_satisfied);

  // With only two blocks the gate threshold 0.25 (n_s + n_t) / ln 8 never
  // exceeds n_s * n_t, so the two-part variant reports true even in the
  // tiniest corner.
  const BoundReport comb_tiny = bound_combined_uen(0.0, 0.0, MixCoefficient{0.5}, 1, 1, 1.0, 0.99);
  CHECK(comb_tiny.gate_satisfied);
  const BoundReport comb_good =
      bound_combined_uen(0.0, 0.0, MixCoefficient{0.5}, 2000, 2000, 1.0, 0.05);
  CHECK(comb_good.gate_satisfied);
}

TEST_CASE("proportional weights minimize the variance factor over a grid") {
  const std::vector<long long> ns = {120, 40, 240};
  const SimplexWeights opt = optimal_weights(ns);
  CHECK(opt.w[0] == doctest::Approx(120.0 / 400.0));
  CHECK(opt.w[1] == doctest::Approx(40.0 / 400.0));
  CHECK(opt.w[2] == doctest::Approx(240.0 / 400.0));
  auto variance_factor = [&](const std::vector<double>& w) {
    double acc = 0.0;
    for (size_t k = 0; k < ns.size(); ++k) acc += w[k] * w[k] / static_cast<double>(ns[k]);
    return acc;
  };
  const double best = variance_factor(opt.w);
  for (double a = 0.0; a <= 1.0; a += 0.01) {
    for (double b = 0.0; a + b <= 1.0; b += 0.01) {
      CHECK(best <= variance_factor({a, b, 1.0 - a - b}) + 1e-15);
    }
  }
}

TEST_CASE("the optimal mix weight is the target share of all samples") {
  CHECK(optimal_tau(2000, 100) == doctest::Approx(100.0 / 2100.0));
  CHECK(optimal_tau(1, 1) == 0.5);
  auto factor = [](double tau, double n_s, double n_t) {
    return tau * tau / n_t + (1.0 - tau) * (1.0 - tau) / n_s;
  };
  const double best = factor(optimal_tau(2000, 100), 2000, 100);
  for (double tau = 0.0; tau <= 1.0; tau += 0.01) {
    CHECK(best <= factor(tau, 2000, 100) + 1e-15);
  }
}

TEST_CASE("convergence predicate separates vanishing and exploding radicals") {
  // entropy growing like sqrt(n): ratio shrinks
  std::vector<ConvergenceStepMulti> good;
  for (long long n = 100; n <= 100000; n *= 10) {
    good.push_back({std::sqrt(static_cast<double>(n)), {n, n}});
  }
  CHECK(convergence_bounded_multi(good, std::nullopt, 1.0));

  // entropy growing like n^2: ratio explodes
  std::vector<ConvergenceStepMulti> bad;
  for (long long n = 100; n <= 100000; n *= 10) {
    bad.push_back({static_cast<double>(n) * static_cast<double>(n), {n, n}});
  }
  CHECK_FALSE(convergence_bounded_multi(bad, std::nullopt, 1.0));

  // fixed weights are honored: weight stuck on a non-growing block explodes
  std::vector<ConvergenceStepMulti> fixed;
  for (long long n = 100; n <= 100000; n *= 10) {
    fixed.push_back({std::sqrt(static_cast<double>(n)), {n, 1}});
  }
  CHECK(convergence_bounded_multi(fixed, SimplexWeights{{1.0, 0.0}}, 1.0));
  CHECK_FALSE(convergence_bounded_multi(fixed, SimplexWeights{{0.0, 1.0}}, 1.0));

  std::vector<ConvergenceStepCombined> comb_good, comb_bad;
  for (long long n = 100; n <= 100000; n *= 10) {
    comb_good.push_back({std::log(static_cast<double>(n)), n, n / 10});
    comb_bad.push_back({static_cast<double>(n) * static_cast<double>(n), n, n / 10});
  }
  CHECK(convergence_bounded_combined(comb_good, std::nullopt, 1.0));
  CHECK_FALSE(convergence_bounded_combined(comb_bad, std::nullopt, 1.0));

  // single step is trivially bounded
  CHECK(convergence_bounded_multi({{1.0, {5}}}, std::nullopt, 1.0));
}

TEST_CASE("huge sample counts stay finite") {
  const long long huge = 4000000000000ll;
  const BoundReport r = bound_multi_uen(0.0, 3.0, SimplexWeights{{1.0}}, {huge}, 1.0, 0.05);
  CHECK(std::isfinite(r.total));
  CHECK(r.total > 0.0);
  const BoundReport rc = bound_combined_uen(0.0, 3.0, MixCoefficient{0.5}, huge, huge, 1.0, 0.05);
  CHECK(std::isfinite(rc.total));
}

TEST_CASE("input validation covers epsilon, width, counts, and negatives") {
  const SimplexWeights w1{{1.0}};
  CHECK_THROWS_AS(bound_multi_uen(0.0, 0.0, w1, {10}, 1.0, 0.0), config_error);
  CHECK_THROWS_AS(bound_multi_uen(0.0, 0.0, w1, {10}, 1.0, 1.0), config_error);
  CHECK_THROWS_AS(bound_multi_uen(0.0, 0.0, w1, {10}, 0.0, 0.5), config_error);
  CHECK_THROWS_AS(bound_multi_uen(0.0, -0.5, w1, {10}, 1.0, 0.5), validation_error);
  CHECK_THROWS_AS(bound_multi_uen(-0.1, 0.0, w1, {10}, 1.0, 0.5), validation_error);
  CHECK_THROWS_AS(bound_multi_uen(0.0, 0.0, w1, {0}, 1.0, 0.5), config_error);
  CHECK_THROWS_AS(bound_multi_uen(0.0, 0.0, w1, {10, 10}, 1.0, 0.5), config_error);
  CHECK_THROWS_AS(
      bound_multi_rademacher(0.0, {0.1, 0.2}, w1, {10}, 1.0, 0.5), config_error);
  CHECK_THROWS_AS(
      bound_multi_rademacher(0.0, {-0.1}, w1, {10}, 1.0, 0.5), validation_error);
  CHECK_THROWS_AS(bound_classical_uen(0.0, 0, 1.0, 0.5), config_error);
  CHECK_THROWS_AS(bound_classical_rademacher(-0.1, 10, 1.0, 0.5), validation_error);
  CHECK_THROWS_AS(optimal_tau(0, 5), config_error);
  CHECK_THROWS_AS(optimal_weights({}), config_error);
}

TEST_CASE("reports serialize with names, terms, and echoed inputs") {
  const BoundReport r = bound_multi_uen(0.1, 0.5, SimplexWeights{{1.0}}, {100}, 1.0, 0.05);
  const std::string kv = to_kv(r);
  CHECK(kv.find("theorem=multi_uen") != std::string::npos);
  CHECK(kv.find("divergence_term=") != std::string::npos);
  CHECK(kv.find("complexity_term=") != std::string::npos);
  CHECK(kv.find("confidence_term=") != std::string::npos);
  CHECK(kv.find("total=") != std::string::npos);
  CHECK(kv.find("gate_satisfied=true") != std::string::npos);
  CHECK(kv.find("echo_") != std::string::npos);
  CHECK(bound_kind_name(BoundKind::CombinedRademacher) == "combined_rademacher");
  const std::string header = bound_csv_header();
  const std::string row = bound_csv_row(r);
  CHECK(header.find("total") != std::string::npos);
  CHECK(!row.empty());
}
