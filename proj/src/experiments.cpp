#include "dab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dab/csv.hpp"
#include "dab/errors.hpp"
#include "dab/hypotheses.hpp"
#include "dab/parallel.hpp"
#include "dab/parsing.hpp"
#include "dab/rng.hpp"

namespace dab {

void ExperimentConfig::validate() const {
  target.validate();
  source1.validate();
  if (kind == ExperimentKind::MultiSource) {
    source2.validate();
    if (source2.input_dim != target.input_dim) {
      throw config_error("experiment: source2 input_dim must match the target");
    }
  }
  if (source1.input_dim != target.input_dim) {
    throw config_error("experiment: source1 input_dim must match the target");
  }
  if (param_grid.empty()) throw config_error("experiment: params must be nonempty");
  for (double p : param_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw config_error("experiment: params must lie in [0, 1]");
  }
  if (n_start < 1 || n_step < 1 || n_max < n_start) {
    throw config_error("experiment: need n_start >= 1, n_step >= 1, n_max >= n_start");
  }
  if (repeats < 1) throw config_error("experiment: repeats must be >= 1");
  if (test_set_size < 1) throw config_error("experiment: test_set_size must be >= 1");
  if (kind == ExperimentKind::Combined && target_train_size < 1) {
    throw config_error("experiment: target_train_size must be >= 1");
  }
}

ExperimentConfig multi_source_defaults() {
  ExperimentConfig c;
  c.kind = ExperimentKind::MultiSource;
  c.target = {100, 0.0, 1.0, 1.0, 5.0, 0.5, BetaMode::PerSample};
  c.source1 = {100, 0.5, 1.0, 1.0, 5.0, 0.5, BetaMode::PerSample};
  c.source2 = {100, 2.0, 5.0, 1.0, 5.0, 0.5, BetaMode::PerSample};
  c.param_grid = {0.1, 0.3, 0.5, 0.9};
  c.n_start = 200;
  c.n_step = 200;
  c.n_max = 2000;
  c.repeats = 30;
  c.test_set_size = 4000;
  return c;
}

ExperimentConfig combined_defaults() {
  ExperimentConfig c;
  c.kind = ExperimentKind::Combined;
  c.target = {100, 0.0, 1.0, 1.0, 5.0, 0.5, BetaMode::PerSample};
  c.source1 = {100, 1.0, 2.0, 1.0, 5.0, 0.5, BetaMode::PerSample};
  c.source2 = c.source1;
  c.param_grid = {0.1, 0.3, 0.5, 0.9};
  c.n_start = 200;
  c.n_step = 200;
  c.n_max = 4000;
  c.repeats = 100;
  c.test_set_size = 3900;
  c.target_train_size = 100;
  return c;
}

namespace {

// Seed-stream roles within one (param, n_total, replication) cell.
constexpr std::uint64_t kRoleBeta = 0;
constexpr std::uint64_t kRoleSource1 = 1;
constexpr std::uint64_t kRoleSource2 = 2;
constexpr std::uint64_t kRoleTargetTrain = 3;
constexpr std::uint64_t kRoleTargetTest = 4;

std::uint64_t cell_seed(const ExperimentConfig& cfg, double param, long long n_total, int rep,
                        std::uint64_t role) {
  return derive_seed(cfg.seed, {hash_double(param), static_cast<std::uint64_t>(n_total),
                                static_cast<std::uint64_t>(rep), role});
}

Eigen::VectorXd draw_beta(const LinearGaussianDomainSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd beta(spec.input_dim);
  for (int j = 0; j < spec.input_dim; ++j) beta[j] = rng.normal(spec.beta_mean, spec.beta_std);
  return beta;
}

Dataset draw(const ExperimentConfig& cfg, const LinearGaussianDomainSpec& spec, long long n,
             std::uint64_t seed, const Eigen::VectorXd& shared_beta) {
  if (cfg.beta_sharing == BetaSharing::SharedFixed) {
    return sample_linear_gaussian_with_beta(spec, n, seed, shared_beta);
  }
  return sample_linear_gaussian(spec, n, seed);
}

std::vector<long long> n_grid(const ExperimentConfig& cfg) {
  std::vector<long long> ns;
  for (long long n = cfg.n_start; n <= cfg.n_max; n += cfg.n_step) ns.push_back(n);
  return ns;
}

struct CellAccumulator {
  double param = 0.0;
  long long n_total = 0;
  std::vector<double> gaps;
};

ExperimentResult aggregate(ExperimentKind kind, std::vector<CellAccumulator>& cells) {
  ExperimentResult result;
  result.kind = kind;
  for (auto& cell : cells) {
    ExperimentRow row;
    row.param_value = cell.param;
    row.n_total = cell.n_total;
    row.repeats = static_cast<int>(cell.gaps.size());
    double mean = 0.0;
    for (double g : cell.gaps) mean += g;
    mean /= static_cast<double>(cell.gaps.size());
    double var = 0.0;
    if (cell.gaps.size() > 1) {
      for (double g : cell.gaps) var += (g - mean) * (g - mean);
      var /= static_cast<double>(cell.gaps.size() - 1);
    }
    row.mean_gap = mean;
    row.std_gap = std::sqrt(var);
    result.rows.push_back(row);
  }
  std::sort(result.rows.begin(), result.rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
    if (a.param_value != b.param_value) return a.param_value < b.param_value;
    return a.n_total < b.n_total;
  });
  return result;
}

}  // namespace

ExperimentResult run_multi_source(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::MultiSource) {
    throw config_error("run_multi_source called with a combined configuration");
  }
  cfg.validate();
  const LossFunction sq{LossKind::Squared, std::nullopt};
  const auto ns = n_grid(cfg);
  const bool fixed_global = cfg.fixed_test_set;
  Eigen::VectorXd global_beta;
  Dataset global_test;
  if (fixed_global) {
    global_beta = draw_beta(cfg.target, derive_seed(cfg.seed, {0, 0, 0, kRoleBeta}));
    global_test = cfg.beta_sharing == BetaSharing::SharedFixed
                      ? sample_linear_gaussian_with_beta(cfg.target, cfg.test_set_size,
                                                         derive_seed(cfg.seed, {0, 0, 0, kRoleTargetTest}),
                                                         global_beta)
                      : sample_linear_gaussian(cfg.target, cfg.test_set_size,
                                               derive_seed(cfg.seed, {0, 0, 0, kRoleTargetTest}));
  }

  std::vector<CellAccumulator> cells;
  for (double w1 : cfg.param_grid) {
    for (long long n : ns) {
      cells.push_back({w1, 2 * n, std::vector<double>(static_cast<size_t>(cfg.repeats), 0.0)});
    }
  }
  const long long jobs = static_cast<long long>(cells.size()) * cfg.repeats;
  parallel_for(jobs, [&](std::int64_t j) {
    const size_t cell_idx = static_cast<size_t>(j) / static_cast<size_t>(cfg.repeats);
    const int rep = static_cast<int>(j % cfg.repeats);
    CellAccumulator& cell = cells[cell_idx];
    const double w1 = cell.param;
    const long long n = cell.n_total / 2;
    Eigen::VectorXd beta;
    if (cfg.beta_sharing == BetaSharing::SharedFixed) {
      beta = fixed_global ? global_beta
                          : draw_beta(cfg.target, cell_seed(cfg, w1, cell.n_total, rep, kRoleBeta));
    }
    const Dataset s1 = draw(cfg, cfg.source1, n, cell_seed(cfg, w1, cell.n_total, rep, kRoleSource1), beta);
    const Dataset s2 = draw(cfg, cfg.source2, n, cell_seed(cfg, w1, cell.n_total, rep, kRoleSource2), beta);
    const Dataset test =
        fixed_global ? global_test
                     : draw(cfg, cfg.target, cfg.test_set_size,
                            cell_seed(cfg, w1, cell.n_total, rep, kRoleTargetTest), beta);
    SimplexWeights weights{{w1, 1.0 - w1}};
    const LinearModel model = fit_weighted_least_squares({s1, s2}, weights);
    const double train = weighted_empirical_risk(model, {s1, s2}, weights, sq);
    const double held_out = empirical_risk(model, test, sq);
    cell.gaps[static_cast<size_t>(rep)] = std::abs(train - held_out);
  });
  return aggregate(cfg.kind, cells);
}

ExperimentResult run_combined(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::Combined) {
    throw config_error("run_combined called with a multi-source configuration");
  }
  cfg.validate();
  const LossFunction sq{LossKind::Squared, std::nullopt};
  const auto ns = n_grid(cfg);
  const bool fixed_global = cfg.fixed_test_set;
  Eigen::VectorXd global_beta;
  Dataset global_test;
  if (fixed_global) {
    global_beta = draw_beta(cfg.target, derive_seed(cfg.seed, {0, 0, 0, kRoleBeta}));
    global_test = cfg.beta_sharing == BetaSharing::SharedFixed
                      ? sample_linear_gaussian_with_beta(cfg.target, cfg.test_set_size,
                                                         derive_seed(cfg.seed, {0, 0, 0, kRoleTargetTest}),
                                                         global_beta)
                      : sample_linear_gaussian(cfg.target, cfg.test_set_size,
                                               derive_seed(cfg.seed, {0, 0, 0, kRoleTargetTest}));
  }

  std::vector<CellAccumulator> cells;
  for (double tau : cfg.param_grid) {
    for (long long n : ns) {
      cells.push_back(
          {tau, n + cfg.target_train_size, std::vector<double>(static_cast<size_t>(cfg.repeats), 0.0)});
    }
  }
  const long long jobs = static_cast<long long>(cells.size()) * cfg.repeats;
  parallel_for(jobs, [&](std::int64_t j) {
    const size_t cell_idx = static_cast<size_t>(j) / static_cast<size_t>(cfg.repeats);
    const int rep = static_cast<int>(j % cfg.repeats);
    CellAccumulator& cell = cells[cell_idx];
    const double tau = cell.param;
    const long long n = cell.n_total - cfg.target_train_size;
    Eigen::VectorXd beta;
    if (cfg.beta_sharing == BetaSharing::SharedFixed) {
      beta = fixed_global ? global_beta
                          : draw_beta(cfg.target, cell_seed(cfg, tau, cell.n_total, rep, kRoleBeta));
    }
    const Dataset src = draw(cfg, cfg.source1, n, cell_seed(cfg, tau, cell.n_total, rep, kRoleSource1), beta);
    const Dataset train_t = draw(cfg, cfg.target, cfg.target_train_size,
                                 cell_seed(cfg, tau, cell.n_total, rep, kRoleTargetTrain), beta);
    const Dataset test =
        fixed_global ? global_test
                     : draw(cfg, cfg.target, cfg.test_set_size,
                            cell_seed(cfg, tau, cell.n_total, rep, kRoleTargetTest), beta);
    MixCoefficient mix{tau};
    const LinearModel model = fit_combined_least_squares(src, train_t, mix);
    const double train = combined_empirical_risk(model, src, train_t, mix, sq);
    const double held_out = empirical_risk(model, test, sq);
    cell.gaps[static_cast<size_t>(rep)] = std::abs(train - held_out);
  });
  return aggregate(cfg.kind, cells);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  return cfg.kind == ExperimentKind::MultiSource ? run_multi_source(cfg) : run_combined(cfg);
}

std::string experiment_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "param,n_total,mean_gap,std_gap,repeats\n";
  for (const auto& row : r.rows) {
    out << g17(row.param_value) << "," << row.n_total << "," << g17(row.mean_gap) << ","
        << g17(row.std_gap) << "," << row.repeats << "\n";
  }
  return out.str();
}

void write_experiment_csv(const ExperimentResult& r, const std::string& path) {
  write_text_file(path, experiment_csv(r));
}

ExperimentResult parse_experiment_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "param,n_total,mean_gap,std_gap,repeats") {
    throw validation_error("experiment CSV: unexpected header");
  }
  ExperimentResult r;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto fields = split(t, ',');
    if (fields.size() != 5) throw validation_error("experiment CSV: expected 5 fields per row");
    ExperimentRow row;
    try {
      row.param_value = parse_double(fields[0], "param");
      row.n_total = parse_int(fields[1], "n_total");
      row.mean_gap = parse_double(fields[2], "mean_gap");
      row.std_gap = parse_double(fields[3], "std_gap");
      row.repeats = static_cast<int>(parse_int(fields[4], "repeats"));
    } catch (const config_error& e) {
      throw validation_error(e.what());
    }
    r.rows.push_back(row);
  }
  return r;
}

ExperimentConfig parse_experiment_config(Config& cfg) {
  const std::string kind = cfg.get_string("experiment");
  ExperimentConfig c;
  if (kind == "multi_source") {
    c = multi_source_defaults();
  } else if (kind == "combined") {
    c = combined_defaults();
  } else {
    throw config_error("experiment must be multi_source or combined, got '" + kind + "'");
  }
  c.target = parse_linear_gaussian(cfg, "target_", c.target);
  c.source1 = parse_linear_gaussian(cfg, "source1_", c.source1);
  if (c.kind == ExperimentKind::MultiSource) {
    c.source2 = parse_linear_gaussian(cfg, "source2_", c.source2);
  }
  if (cfg.has("params")) c.param_grid = cfg.get_double_list("params");
  c.n_start = cfg.get_int("n_start", c.n_start);
  c.n_step = cfg.get_int("n_step", c.n_step);
  c.n_max = cfg.get_int("n_max", c.n_max);
  c.repeats = static_cast<int>(cfg.get_int("repeats", c.repeats));
  c.seed = cfg.get_u64("seed", c.seed);
  c.test_set_size = cfg.get_int("test_set_size", c.test_set_size);
  if (c.kind == ExperimentKind::Combined) {
    c.target_train_size = cfg.get_int("target_train_size", c.target_train_size);
  }
  c.fixed_test_set = cfg.get_bool("fixed_test_set", c.fixed_test_set);
  const std::string sharing = cfg.get_string("beta_sharing", "shared_fixed");
  if (sharing == "shared_fixed") {
    c.beta_sharing = BetaSharing::SharedFixed;
  } else if (sharing == "independent") {
    c.beta_sharing = BetaSharing::Independent;
  } else {
    throw config_error("beta_sharing must be shared_fixed or independent, got '" + sharing + "'");
  }
  c.validate();
  return c;
}

}  // namespace dab
