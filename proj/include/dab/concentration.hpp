#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dab/domains.hpp"
#include "dab/hypotheses.hpp"

namespace dab {

// Empirical tail probabilities of a deviation statistic against the
// matching closed-form bound, evaluated on a grid of thresholds.
// violation_count is the number of grid points where the empirical tail
// exceeds the theoretical bound by more than 4 binomial standard errors.
struct TailCurve {
  std::vector<double> xi_grid;
  std::vector<double> empirical_tail;
  std::vector<double> theoretical_bound;
  std::vector<double> std_error;
  long long mc_trials = 0;
  int violation_count = 0;
};

using PointFn = std::function<double(const SupportPoint&)>;

// Deviation of the weighted multi-block empirical mean from its exact
// expectation: stat = sum_k w_k mean_k(f), centered at sum_k w_k E_k[f].
// Tail bound: 2 exp(-2 xi^2 / ((hi-lo)^2 sum_k w_k^2 / N_k)).
// Requires exact finite domains; f must map every support point into
// [lo, hi].
TailCurve verify_deviation_multi(const PointFn& f, double lo, double hi,
                                 const std::vector<DiscreteDomain>& sources,
                                 const SimplexWeights& weights, const std::vector<long long>& ns,
                                 const std::vector<double>& xi_grid, long long mc_trials,
                                 std::uint64_t seed);

// Two-block variant: stat = (1-tau) mean_S + tau mean_T, bound
// 2 exp(-2 xi^2 / ((hi-lo)^2 (tau^2/N_T + (1-tau)^2/N_S))).
TailCurve verify_deviation_combined(const PointFn& f, double lo, double hi,
                                    const DiscreteDomain& source, const DiscreteDomain& target,
                                    const MixCoefficient& mix, long long n_s, long long n_t,
                                    const std::vector<double>& xi_grid, long long mc_trials,
                                    std::uint64_t seed);

// A sample arranged as one vector of points per block.
using BlockSample = std::vector<std::vector<SupportPoint>>;
using BlockStatFn = std::function<double(const BlockSample&)>;

// One-sided bounded-differences tail: P{H - E[H] > xi} <= exp(-2 xi^2 / sum c^2),
// where c_matrix[k][n] certifies the max change of H when coordinate n of
// block k is replaced.  The certificate is spot-checked on 50 random single
// -coordinate perturbations (tolerance 1e-12) before any trials run; a
// violated certificate throws validation_error.  E[H] is itself estimated
// from 10x mc_trials, and its uncertainty is folded into the violation
// rule: a grid point counts as violated only if the empirical tail exceeds
// the bound re-evaluated at xi - 4 se(E[H]) by more than 4 binomial
// standard errors.
TailCurve verify_mcdiarmid_generalized(const BlockStatFn& h,
                                       const std::vector<std::vector<double>>& c_matrix,
                                       const std::vector<DiscreteDomain>& domains,
                                       const std::vector<long long>& ns,
                                       const std::vector<double>& xi_grid, long long mc_trials,
                                       std::uint64_t seed);

// Ghost-sample comparison: lhs = P{sup_j |E_T f_j - weighted mean_j| > xi},
// rhs = P{sup_j |ghost weighted mean_j - weighted mean_j| > xi'/2} with
// xi' = xi - divergence.  The relation lhs <= 2 rhs is reported with Monte
// Carlo slack 4 sqrt(se_lhs^2 + 4 se_rhs^2).  Requires xi > divergence
// (validation_error otherwise); gate_satisfied reports
// prod N_k >= 8 (hi-lo)^2 / xi'^2.
struct SymmetrizationResult {
  double lhs_prob = 0.0;
  double rhs_prob = 0.0;
  double lhs_std_error = 0.0;
  double rhs_std_error = 0.0;
  double divergence = 0.0;
  bool gate_satisfied = false;
  bool holds_within_slack = false;
  long long mc_trials = 0;
};

SymmetrizationResult verify_symmetrization_multi(const FiniteFunctionClass& cls,
                                                 const std::vector<DiscreteDomain>& sources,
                                                 const DiscreteDomain& target,
                                                 const SimplexWeights& weights,
                                                 const std::vector<long long>& ns, double xi,
                                                 long long mc_trials, std::uint64_t seed);

SymmetrizationResult verify_symmetrization_combined(const FiniteFunctionClass& cls,
                                                    const DiscreteDomain& source,
                                                    const DiscreteDomain& target,
                                                    const MixCoefficient& mix, long long n_s,
                                                    long long n_t, double xi, long long mc_trials,
                                                    std::uint64_t seed);

// CSV layout: header xi,empirical_tail,theoretical_bound,std_error.
std::string tailcurve_csv(const TailCurve& c);
void write_tailcurve_csv(const TailCurve& c, const std::string& path);
std::string to_kv(const TailCurve& c);
std::string to_kv(const SymmetrizationResult& r);

}  // namespace dab
