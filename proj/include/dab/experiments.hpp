#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dab/config.hpp"
#include "dab/domains.hpp"

namespace dab {

enum class ExperimentKind { MultiSource, Combined };

// How the label-generating coefficient vector relates across the domains of
// one replication.  SharedFixed draws one vector per replication and reuses
// it for every domain (all domains then share one ground-truth labeling, so
// the train/test risk gap of a fitted model vanishes as samples grow).
// Independent lets every dataset draw its own coefficients per its spec.
enum class BetaSharing { SharedFixed, Independent };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::MultiSource;
  LinearGaussianDomainSpec target;
  LinearGaussianDomainSpec source1;
  LinearGaussianDomainSpec source2;  // multi-source only
  std::vector<double> param_grid;    // multi: weight on source 1; combined: tau
  long long n_start = 200;
  long long n_step = 200;
  long long n_max = 2000;
  int repeats = 30;
  std::uint64_t seed = 0;
  long long test_set_size = 4000;
  long long target_train_size = 100;  // combined only
  bool fixed_test_set = false;
  BetaSharing beta_sharing = BetaSharing::SharedFixed;

  void validate() const;
};

// Published defaults for the two synthetic studies.
ExperimentConfig multi_source_defaults();
ExperimentConfig combined_defaults();

struct ExperimentRow {
  double param_value = 0.0;
  long long n_total = 0;
  double mean_gap = 0.0;
  double std_gap = 0.0;
  int repeats = 0;
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::MultiSource;
  std::vector<ExperimentRow> rows;  // sorted by (param_value, n_total)
};

// Multi-source study: two sources with n samples each (n_total = 2n), a
// weighted least squares fit with weights (w, 1-w), and the absolute gap
// between the weighted training risk and the target test risk (squared,
// unclipped loss).  Rows aggregate mean/std over repeats.
ExperimentResult run_multi_source(const ExperimentConfig& cfg);

// Combined study: one source with n samples plus target_train_size target
// samples (n_total = n + target_train_size), a tau-mixed least squares fit,
// and the absolute gap between the tau-mixed training risk and the target
// test risk.
ExperimentResult run_combined(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// CSV layout: header param,n_total,mean_gap,std_gap,repeats.
std::string experiment_csv(const ExperimentResult& r);
void write_experiment_csv(const ExperimentResult& r, const std::string& path);
ExperimentResult parse_experiment_csv(const std::string& text);

// key=value schema; starts from the kind's defaults and applies overrides.
ExperimentConfig parse_experiment_config(Config& cfg);

}  // namespace dab
