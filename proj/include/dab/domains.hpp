#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dab {

// Whether the coefficient vector of a linear-Gaussian domain is redrawn for
// every sample (each row gets its own coefficients) or drawn once and shared
// by all rows of one dataset.
enum class BetaMode { PerSample, FixedAcrossSamples };

// Generative model: x has i.i.d. Gaussian coordinates, y = beta . x + noise,
// with beta itself Gaussian and noise Gaussian.  Second parameters of every
// Gaussian are standard deviations.
struct LinearGaussianDomainSpec {
  int input_dim = 1;
  double x_mean = 0.0;
  double x_std = 1.0;
  double beta_mean = 1.0;
  double beta_std = 5.0;
  double noise_std = 0.5;
  BetaMode beta_mode = BetaMode::PerSample;

  void validate() const;  // throws config_error on out-of-domain fields
};

// One support point of a finite domain: an input vector plus its label.
struct SupportPoint {
  std::vector<double> x;
  double y = 0.0;
};

// Finite distribution over labeled points.  Exact expectations over this
// object are what the tail verifiers center their statistics on.
struct DiscreteDomain {
  std::vector<SupportPoint> support;
  std::vector<double> probabilities;

  void validate() const;  // sizes match, probs nonneg, sum within 1e-12 of 1
  int input_dim() const;
  std::vector<double> cumulative() const;
};

// Sampled data: one row per draw, inputs in `features`, labels in `labels`.
struct Dataset {
  Eigen::MatrixXd features;  // rows x input_dim
  Eigen::VectorXd labels;    // rows
  std::string domain_tag;    // free-form provenance marker

  long long rows() const { return features.rows(); }
  int dim() const { return static_cast<int>(features.cols()); }
};

// Draw order is part of the reproducibility contract:
//   FixedAcrossSamples: all beta coordinates first, then per row the x
//   coordinates followed by the noise draw.
//   PerSample: per row the x coordinates, then that row's beta coordinates,
//   then the noise draw.
Dataset sample_linear_gaussian(const LinearGaussianDomainSpec& spec, long long n, std::uint64_t seed);

// Same generative model with an externally supplied coefficient vector
// (ignores beta_mode/beta_mean/beta_std).  Per row: x coordinates, noise.
Dataset sample_linear_gaussian_with_beta(const LinearGaussianDomainSpec& spec, long long n,
                                         std::uint64_t seed, const Eigen::VectorXd& beta);

// Draws n support points by inversion of the cumulative table.
Dataset sample_discrete(const DiscreteDomain& domain, long long n, std::uint64_t seed);

// Exact expectation of f under the finite domain.
double exact_expectation(const DiscreteDomain& domain,
                         const std::function<double(const SupportPoint&)>& f);

// CSV layout: header x_0,...,x_{I-1},y then one row per sample, %.17g.
std::string dataset_csv(const Dataset& ds);
void write_dataset_csv(const Dataset& ds, const std::string& path);
Dataset parse_dataset_csv(const std::string& text, const std::string& tag);
Dataset read_dataset_csv(const std::string& path);

}  // namespace dab
