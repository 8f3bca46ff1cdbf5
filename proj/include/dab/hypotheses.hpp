#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "dab/domains.hpp"

namespace dab {

enum class LossKind { Squared, Absolute };

struct ClipRange {
  double lo = 0.0;
  double hi = 1.0;
};

// Pointwise loss with optional clipping applied to the loss value itself.
// Everything downstream that needs a bounded function class goes through a
// clipped loss; the clip range then doubles as the [a, b] value range.
struct LossFunction {
  LossKind kind = LossKind::Squared;
  std::optional<ClipRange> clip;

  void validate() const;  // clip.lo < clip.hi when present
  double operator()(double prediction, double label) const;
  bool bounded() const { return clip.has_value(); }
  double lo() const;          // requires clip
  double hi() const;          // requires clip
  double range_width() const; // hi - lo
};

// Homogeneous linear predictor x -> theta . x.
struct LinearModel {
  Eigen::VectorXd coefficients;

  void validate() const;  // nonempty, finite entries
  double predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

// Convex weights over source blocks: nonnegative, sum within 1e-12 of 1.
struct SimplexWeights {
  std::vector<double> w;

  void validate() const;
  int k() const { return static_cast<int>(w.size()); }
};

// Convex weight on the target part of a two-part empirical risk, in [0, 1].
struct MixCoefficient {
  double tau = 0.0;

  void validate() const;
};

// Finite class of loss-composed functions z -> loss(model(x), y).  A bounded
// (clipped) loss is required: the class feeds complexity and divergence
// computations that assume a [lo, hi] value range.
struct FiniteFunctionClass {
  std::vector<LinearModel> hypotheses;
  LossFunction loss;

  void validate() const;
  int size() const { return static_cast<int>(hypotheses.size()); }
  int dim() const;
  double eval(int j, const Eigen::Ref<const Eigen::VectorXd>& x, double y) const;
  double eval(int j, const SupportPoint& z) const;
};

// Function-class values on a fixed sample: one row per function, one column
// per sample point, all entries inside [lo, hi].
struct EvaluationMatrix {
  Eigen::MatrixXd values;
  double lo = 0.0;
  double hi = 1.0;

  static EvaluationMatrix from_class(const FiniteFunctionClass& cls, const Dataset& data);
  static EvaluationMatrix from_raw(Eigen::MatrixXd values, double lo, double hi);
  int functions() const { return static_cast<int>(values.rows()); }
  long long points() const { return values.cols(); }
};

double empirical_risk(const LinearModel& model, const Dataset& data, const LossFunction& loss);

// Convex combination over source datasets: sum_k w_k * risk_k.
double weighted_empirical_risk(const LinearModel& model, const std::vector<Dataset>& sources,
                               const SimplexWeights& weights, const LossFunction& loss);

// tau * target risk + (1 - tau) * source risk.
double combined_empirical_risk(const LinearModel& model, const Dataset& source,
                               const Dataset& target, const MixCoefficient& mix,
                               const LossFunction& loss);

// Least squares minimizers of the corresponding empirical risks (squared
// loss, no clipping).  Throw validation_error on degenerate designs, where
// degenerate means the normal-equation matrix has eigenvalue ratio > 1e12.
LinearModel fit_weighted_least_squares(const std::vector<Dataset>& sources,
                                       const SimplexWeights& weights);
LinearModel fit_combined_least_squares(const Dataset& source, const Dataset& target,
                                       const MixCoefficient& mix);

// Index of the smallest risk; ties resolve to the lowest index.
int argmin_risk(const std::vector<double>& risks);

// CSV layout: header theta_0,...,theta_{I-1}, one row per model, %.17g.
std::string models_csv(const std::vector<LinearModel>& models);
void write_models_csv(const std::vector<LinearModel>& models, const std::string& path);
std::vector<LinearModel> parse_models_csv(const std::string& text);
std::vector<LinearModel> read_models_csv(const std::string& path);

}  // namespace dab
