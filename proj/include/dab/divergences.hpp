#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "dab/domains.hpp"
#include "dab/hypotheses.hpp"

namespace dab {

// Uniform carrier for "distribution-like" objects: finitely many weighted
// points.  Exact finite domains and empirical samples both reduce to this,
// so every divergence is implemented once.
struct WeightedPoints {
  Eigen::MatrixXd xs;     // points x input_dim
  Eigen::VectorXd ys;     // labels
  Eigen::VectorXd probs;  // nonnegative, sums to 1
  bool exact = false;     // true when built from a finite domain

  static WeightedPoints from_domain(const DiscreteDomain& d);
  static WeightedPoints from_dataset(const Dataset& d);  // uniform 1/N weights
  long long size() const { return xs.rows(); }
  int dim() const { return static_cast<int>(xs.cols()); }
};

enum class DivergenceMode { ExactDiscrete, EmpiricalSamples };

using LabelingFn = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

// sup over the function class of |E_S f - E_T f| (expectations over labeled
// points).  Always >= 0; zero when both sides agree on every class member.
double ipm(const FiniteFunctionClass& cls, const WeightedPoints& s, const WeightedPoints& t);

// sup over ordered hypothesis pairs (g, g') of
// |E_{x~S} loss(g(x), g'(x)) - E_{x~T} loss(g(x), g'(x))|.
// Depends on input marginals only; labels of s/t are ignored.
double discrepancy_distance(const std::vector<LinearModel>& hyps, const LossFunction& loss,
                            const WeightedPoints& s_inputs, const WeightedPoints& t_inputs);

// sup over hypotheses g of
// |E_{x~T} loss(g(x), gt(x)) - E_{x~T} loss(g(x), gs(x))|:
// the labeling-mismatch term measured on the target inputs.
double q_quantity(const std::vector<LinearModel>& hyps, const LossFunction& loss,
                  const WeightedPoints& t_inputs, const LabelingFn& gs, const LabelingFn& gt);

// sup over the class of |sum_k w_k E_{S_k} f - E_T f|.
double weighted_ipm(const FiniteFunctionClass& cls, const std::vector<WeightedPoints>& sources,
                    const WeightedPoints& t, const SimplexWeights& weights);

// All three quantities on exact finite domains, labels regenerated by the
// supplied labeling functions.  When both labeling functions are members of
// the hypothesis list the decomposition ipm <= disc + q holds; it is
// checked here (tolerance 1e-9) and a violation throws validation_error.
struct DivergenceReport {
  double ipm = 0.0;
  double disc = 0.0;
  double q = 0.0;
  DivergenceMode mode = DivergenceMode::ExactDiscrete;
};

DivergenceReport divergence_report(const std::vector<LinearModel>& hyps, const LossFunction& loss,
                                   const DiscreteDomain& s, const DiscreteDomain& t,
                                   const LabelingFn& gs, const LabelingFn& gt);

// Empirical variant on sampled data; no decomposition check (the relation
// is only guaranteed for exact expectations with member labelings).
DivergenceReport divergence_report_empirical(const std::vector<LinearModel>& hyps,
                                             const LossFunction& loss, const Dataset& s,
                                             const Dataset& t, const LabelingFn& gs,
                                             const LabelingFn& gt);

std::string to_kv(const DivergenceReport& r);

// Convenience: wraps a linear model as a labeling function.
LabelingFn linear_labeling(const LinearModel& m);

}  // namespace dab
