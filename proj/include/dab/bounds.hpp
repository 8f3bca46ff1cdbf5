#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dab/hypotheses.hpp"

namespace dab {

enum class BoundKind {
  MultiUen,
  MultiRademacher,
  CombinedUen,
  CombinedRademacher,
  ClassicalUen,
  ClassicalRademacher,
};

// One evaluated generalization bound, decomposed into the three standard
// pieces (total = divergence + complexity + confidence, within 1e-12).
// gate_satisfied reports the sample-size precondition of entropy-based
// bounds (product of block sizes >= 8 * width^2 / radical^2); bounds with
// no such precondition report true.
struct BoundReport {
  BoundKind kind = BoundKind::ClassicalUen;
  double divergence_term = 0.0;
  double complexity_term = 0.0;
  double confidence_term = 0.0;
  double total = 0.0;
  bool gate_satisfied = true;
  std::map<std::string, double> inputs_echo;
};

// Multi-source, entropy-based: with probability >= 1 - epsilon the target
// risk deviates from the weighted source risk by at most
//   d_w + sqrt((ln_uen - ln(epsilon/8)) * 32 * width^2 * sum_k w_k^2 / N_k).
BoundReport bound_multi_uen(double d_w, double ln_uen, const SimplexWeights& w,
                            const std::vector<long long>& ns, double range_width, double epsilon);

// Multi-source, complexity-based:
//   d_w + 2 sum_k w_k r_k + sqrt(width^2 * ln(1/epsilon) / 2 * sum_k w_k^2 / N_k).
BoundReport bound_multi_rademacher(double d_w, const std::vector<double>& rademachers,
                                   const SimplexWeights& w, const std::vector<long long>& ns,
                                   double range_width, double epsilon);

// Two-part mixture, entropy-based:
//   (1-tau) d + sqrt((ln_uen - ln(epsilon/8)) * 32 * width^2
//                    * ((1-tau)^2/n_s + tau^2/n_t)).
BoundReport bound_combined_uen(double d, double ln_uen, const MixCoefficient& mix, long long n_s,
                               long long n_t, double range_width, double epsilon);

// Two-part mixture, complexity-based:
//   (1-tau) d + 2 (1-tau) r_source + 2 tau r_target
//   + 3 tau sqrt(width * ln(4/epsilon) / (2 n_t))
//   + (1-tau) sqrt(width^2 * ln(2/epsilon) / 2 * (tau^2/n_t + (1-tau)^2/n_s)).
// Note the first radical carries the width unsquared.
BoundReport bound_combined_rademacher(double d, double r_source, double r_target,
                                      const MixCoefficient& mix, long long n_s, long long n_t,
                                      double range_width, double epsilon);

// Single-domain baselines the adapted bounds collapse to.
BoundReport bound_classical_uen(double ln_uen, long long n, double range_width, double epsilon);
BoundReport bound_classical_rademacher(double rademacher, long long n, double range_width,
                                       double epsilon);

// Confidence-radical minimizers: proportional weights w_k = N_k / sum N,
// and tau* = n_t / (n_t + n_s).
SimplexWeights optimal_weights(const std::vector<long long>& ns);
double optimal_tau(long long n_s, long long n_t);

// Convergence headroom: the entropy-based radical vanishes along a sequence
// of (ln_uen, sample sizes) steps iff ln_uen grows slower than the
// effective sample size.  The predicate checks boundedness of the ratio
//   ln_uen * 32 * width^2 * sum_k w_k^2 / N_k-denominator
// over the finite sequence: max of the second half must not exceed the max
// of the first half (tolerance factor 1 + 1e-9).  Weights/tau default to
// the optimal choice per step when not supplied.
struct ConvergenceStepMulti {
  double ln_uen = 0.0;
  std::vector<long long> ns;
};
struct ConvergenceStepCombined {
  double ln_uen = 0.0;
  long long n_s = 1;
  long long n_t = 1;
};
bool convergence_bounded_multi(const std::vector<ConvergenceStepMulti>& steps,
                               const std::optional<SimplexWeights>& w, double range_width);
bool convergence_bounded_combined(const std::vector<ConvergenceStepCombined>& steps,
                                  const std::optional<double>& tau, double range_width);

std::string bound_kind_name(BoundKind k);
std::string to_kv(const BoundReport& r);
std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& r);

}  // namespace dab
