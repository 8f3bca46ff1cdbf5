#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "dab/domains.hpp"
#include "dab/hypotheses.hpp"

namespace dab {

enum class NormKind { BlockWeightedL1, MixWeightedL1 };

// Weighted empirical L1 seminorm over a concatenated sample.
//   BlockWeightedL1: K blocks of sizes N_k, per-point coefficient w_k / N_k.
//   MixWeightedL1: two blocks [target, source] of sizes {N_T, N_S} with
//   per-point coefficients tau / N_T and (1 - tau) / N_S.
struct NormSpec {
  NormKind kind = NormKind::BlockWeightedL1;
  SimplexWeights weights;           // BlockWeightedL1 only
  MixCoefficient mix;               // MixWeightedL1 only
  std::vector<long long> block_sizes;

  void validate() const;
  long long total() const;
  std::vector<double> point_coefficients() const;
  NormSpec doubled() const;  // same weights, every block size doubled
};

double norm_distance(const Eigen::Ref<const Eigen::VectorXd>& fa,
                     const Eigen::Ref<const Eigen::VectorXd>& fb, const NormSpec& norm);

// Size of a greedy xi-cover of the rows of `values` under `norm`:
// repeatedly pick the first uncovered row as a center and cover every row
// within distance xi (inclusive).  Deterministic; at most `functions` balls.
long long covering_number_greedy(const EvaluationMatrix& values, double xi, const NormSpec& norm);

using BlockDomain = std::variant<DiscreteDomain, LinearGaussianDomainSpec>;

Dataset sample_block(const BlockDomain& domain, long long n, std::uint64_t seed);

// Monte Carlo estimate of the uniform entropy number at scale xi: the max
// over `realizations` draws of ln(covering number), where each draw samples
// 2 * N_k points per block (the ghost-sample convention) and covers under
// the doubled norm.  Always <= ln(class size).
double uniform_entropy_estimate(const FiniteFunctionClass& cls,
                                const std::vector<BlockDomain>& block_domains,
                                const NormSpec& base_norm, double xi, int realizations,
                                std::uint64_t seed);

enum class RademacherMode { EmpiricalFixedSample, ExpectedOverData };

struct RademacherEstimate {
  double value = 0.0;
  double std_error = 0.0;     // 0 for exact enumeration
  long long mc_trials = 0;    // 2^N for exact enumeration
  RademacherMode mode = RademacherMode::EmpiricalFixedSample;
};

// Empirical sign-symmetrized complexity of the class on a fixed sample:
// E_sigma sup_j |(1/N) sum_i sigma_i f_j(z_i)|.  Exact enumeration of all
// 2^N sign vectors when N <= 20, Monte Carlo otherwise.
RademacherEstimate rademacher_empirical(const EvaluationMatrix& values, long long mc_trials,
                                        std::uint64_t seed);

// Monte Carlo path regardless of N (exposed for cross-validation in tests).
RademacherEstimate rademacher_empirical_mc(const EvaluationMatrix& values, long long mc_trials,
                                           std::uint64_t seed);

// Outer average over fresh size-n samples of the empirical quantity.
RademacherEstimate rademacher_expected(const FiniteFunctionClass& cls, const BlockDomain& domain,
                                       long long n, int outer_trials, long long inner_trials,
                                       std::uint64_t seed);

}  // namespace dab
