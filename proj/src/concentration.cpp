#include "dab/concentration.hpp"

#include <cmath>
#include <sstream>

#include "dab/csv.hpp"
#include "dab/errors.hpp"
#include "dab/parallel.hpp"
#include "dab/rng.hpp"

namespace dab {

namespace {

// Stream tags keep every random purpose on a disjoint seed stream, so
// adding trials of one kind never shifts another kind's draws.
constexpr std::uint64_t kTagTrial = 0;
constexpr std::uint64_t kTagGhost = 1;
constexpr std::uint64_t kTagCenter = 2;
constexpr std::uint64_t kTagSpot = 3;

void check_grid(const std::vector<double>& xi_grid) {
  if (xi_grid.empty()) throw config_error("xi_grid must be nonempty");
  for (double xi : xi_grid) {
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw config_error("xi_grid entries must be >= 0 and finite");
  }
}

void check_trials(long long trials) {
  if (trials < 2) throw config_error("mc_trials must be >= 2");
}

void check_range(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw validation_error("value range must satisfy lo < hi and be finite");
  }
}

// f tabulated on the support of a finite domain, verified against [lo, hi].
std::vector<double> tabulate(const PointFn& f, const DiscreteDomain& d, double lo, double hi) {
  d.validate();
  std::vector<double> vals(d.support.size());
  for (size_t i = 0; i < d.support.size(); ++i) {
    const double v = f(d.support[i]);
    if (!(v >= lo && v <= hi)) {
      throw validation_error("function value " + g17(v) + " outside the declared range [" + g17(lo) +
                             ", " + g17(hi) + "]");
    }
    vals[i] = v;
  }
  return vals;
}

double exact_mean(const std::vector<double>& vals, const DiscreteDomain& d) {
  double acc = 0.0;
  for (size_t i = 0; i < vals.size(); ++i) acc += d.probabilities[i] * vals[i];
  return acc;
}

double binomial_se(double p, long long trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

TailCurve build_curve(const std::vector<double>& devs, const std::vector<double>& xi_grid,
                      const std::function<double(double)>& bound, long long trials) {
  TailCurve c;
  c.xi_grid = xi_grid;
  c.mc_trials = trials;
  for (double xi : xi_grid) {
    long long hits = 0;
    for (double d : devs) {
      if (d > xi) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    const double theo = bound(xi);
    const double se = binomial_se(p, trials);
    c.empirical_tail.push_back(p);
    c.theoretical_bound.push_back(theo);
    c.std_error.push_back(se);
    if (p > theo + 4.0 * se) ++c.violation_count;
  }
  return c;
}

bool log_space_gate(const std::vector<long long>& ns, double width, double radius) {
  double log_prod = 0.0;
  for (long long n : ns) log_prod += std::log(static_cast<double>(n));
  return log_prod >= std::log(8.0) + 2.0 * std::log(width) - 2.0 * std::log(radius);
}

}  // namespace

TailCurve verify_deviation_multi(const PointFn& f, double lo, double hi,
                                 const std::vector<DiscreteDomain>& sources,
                                 const SimplexWeights& weights, const std::vector<long long>& ns,
                                 const std::vector<double>& xi_grid, long long mc_trials,
                                 std::uint64_t seed) {
  weights.validate();
  check_range(lo, hi);
  check_grid(xi_grid);
  check_trials(mc_trials);
  const size_t kk = sources.size();
  if (kk == 0 || kk != ns.size() || static_cast<int>(kk) != weights.k()) {
    throw validation_error("deviation check: sources, weights and sample sizes must have equal counts");
  }
  for (long long n : ns) {
    if (n < 1) throw config_error("sample sizes must be >= 1");
  }
  std::vector<std::vector<double>> fvals(kk);
  std::vector<std::vector<double>> cums(kk);
  double center = 0.0;
  double var_scale = 0.0;
  for (size_t k = 0; k < kk; ++k) {
    fvals[k] = tabulate(f, sources[k], lo, hi);
    cums[k] = sources[k].cumulative();
    center += weights.w[k] * exact_mean(fvals[k], sources[k]);
    var_scale += weights.w[k] * weights.w[k] / static_cast<double>(ns[k]);
  }
  const double width = hi - lo;
  std::vector<double> devs(static_cast<size_t>(mc_trials), 0.0);
  parallel_for(mc_trials, [&](std::int64_t t) {
    double stat = 0.0;
    for (size_t k = 0; k < kk; ++k) {
      Rng rng(derive_seed(seed, {kTagTrial, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(k)}));
      double acc = 0.0;
      for (long long i = 0; i < ns[k]; ++i) {
        acc += fvals[k][static_cast<size_t>(
            rng.pick_index(cums[k].data(), static_cast<int>(cums[k].size())))];
      }
      stat += weights.w[k] * acc / static_cast<double>(ns[k]);
    }
    devs[static_cast<size_t>(t)] = std::abs(stat - center);
  });
  return build_curve(devs, xi_grid,
                     [&](double xi) {
                       return 2.0 * std::exp(-2.0 * xi * xi / (width * width * var_scale));
                     },
                     mc_trials);
}

TailCurve verify_deviation_combined(const PointFn& f, double lo, double hi,
                                    const DiscreteDomain& source, const DiscreteDomain& target,
                                    const MixCoefficient& mix, long long n_s, long long n_t,
                                    const std::vector<double>& xi_grid, long long mc_trials,
                                    std::uint64_t seed) {
  mix.validate();
  check_range(lo, hi);
  check_grid(xi_grid);
  check_trials(mc_trials);
  if (n_s < 1 || n_t < 1) throw config_error("sample sizes must be >= 1");
  const std::vector<double> fs = tabulate(f, source, lo, hi);
  const std::vector<double> ft = tabulate(f, target, lo, hi);
  const auto cs = source.cumulative();
  const auto ct = target.cumulative();
  const double tau = mix.tau;
  const double center = (1.0 - tau) * exact_mean(fs, source) + tau * exact_mean(ft, target);
  const double var_scale = tau * tau / static_cast<double>(n_t) +
                           (1.0 - tau) * (1.0 - tau) / static_cast<double>(n_s);
  const double width = hi - lo;
  std::vector<double> devs(static_cast<size_t>(mc_trials), 0.0);
  parallel_for(mc_trials, [&](std::int64_t t) {
    Rng rs(derive_seed(seed, {kTagTrial, static_cast<std::uint64_t>(t), 0}));
    double acc_s = 0.0;
    for (long long i = 0; i < n_s; ++i) {
      acc_s += fs[static_cast<size_t>(rs.pick_index(cs.data(), static_cast<int>(cs.size())))];
    }
    Rng rt(derive_seed(seed, {kTagTrial, static_cast<std::uint64_t>(t), 1}));
    double acc_t = 0.0;
    for (long long i = 0; i < n_t; ++i) {
      acc_t += ft[static_cast<size_t>(rt.pick_index(ct.data(), static_cast<int>(ct.size())))];
    }
    const double stat = (1.0 - tau) * acc_s / static_cast<double>(n_s) +
                        tau * acc_t / static_cast<double>(n_t);
    devs[static_cast<size_t>(t)] = std::abs(stat - center);
  });
  return build_curve(devs, xi_grid,
                     [&](double xi) {
                       return 2.0 * std::exp(-2.0 * xi * xi / (width * width * var_scale));
                     },
                     mc_trials);
}

TailCurve verify_mcdiarmid_generalized(const BlockStatFn& h,
                                       const std::vector<std::vector<double>>& c_matrix,
                                       const std::vector<DiscreteDomain>& domains,
                                       const std::vector<long long>& ns,
                                       const std::vector<double>& xi_grid, long long mc_trials,
                                       std::uint64_t seed) {
  check_grid(xi_grid);
  check_trials(mc_trials);
  const size_t kk = domains.size();
  if (kk == 0 || kk != ns.size() || kk != c_matrix.size()) {
    throw validation_error("bounded-differences check: domains, sizes and certificate must have equal counts");
  }
  double sum_c2 = 0.0;
  for (size_t k = 0; k < kk; ++k) {
    domains[k].validate();
    if (ns[k] < 1) throw config_error("sample sizes must be >= 1");
    if (static_cast<long long>(c_matrix[k].size()) != ns[k]) {
      throw validation_error("bounded-differences check: certificate row " + std::to_string(k) +
                             " does not match its block size");
    }
    for (double c : c_matrix[k]) {
      if (!(c >= 0.0) || !std::isfinite(c)) {
        throw validation_error("bounded-differences certificate entries must be >= 0 and finite");
      }
      sum_c2 += c * c;
    }
  }
  if (!(sum_c2 > 0.0)) throw validation_error("bounded-differences certificate is identically zero");
  std::vector<std::vector<double>> cums(kk);
  long long total_coords = 0;
  for (size_t k = 0; k < kk; ++k) {
    cums[k] = domains[k].cumulative();
    total_coords += ns[k];
  }
  const auto draw_sample = [&](Rng& rng) {
    BlockSample s(kk);
    for (size_t k = 0; k < kk; ++k) {
      s[k].reserve(static_cast<size_t>(ns[k]));
      for (long long i = 0; i < ns[k]; ++i) {
        s[k].push_back(domains[k].support[static_cast<size_t>(
            rng.pick_index(cums[k].data(), static_cast<int>(cums[k].size())))]);
      }
    }
    return s;
  };
  // Certificate spot check before trusting the bound.
  for (int spot = 0; spot < 50; ++spot) {
    Rng rng(derive_seed(seed, {kTagSpot, static_cast<std::uint64_t>(spot)}));
    BlockSample base = draw_sample(rng);
    const double h0 = h(base);
    long long m = static_cast<long long>(rng.uniform() * static_cast<double>(total_coords));
    if (m >= total_coords) m = total_coords - 1;
    size_t k = 0;
    while (m >= ns[k]) {
      m -= ns[k];
      ++k;
    }
    BlockSample pert = base;
    pert[k][static_cast<size_t>(m)] = domains[k].support[static_cast<size_t>(
        rng.pick_index(cums[k].data(), static_cast<int>(cums[k].size())))];
    const double h1 = h(pert);
    if (std::abs(h1 - h0) > c_matrix[k][static_cast<size_t>(m)] + 1e-12) {
      throw validation_error("bounded-differences certificate violated: |delta|=" +
                             g17(std::abs(h1 - h0)) + " > c=" + g17(c_matrix[k][static_cast<size_t>(m)]));
    }
  }
  // Center estimate from an independent, larger run.
  const long long center_trials = 10 * mc_trials;
  std::vector<double> center_vals(static_cast<size_t>(center_trials), 0.0);
  parallel_for(center_trials, [&](std::int64_t t) {
    Rng rng(derive_seed(seed, {kTagCenter, static_cast<std::uint64_t>(t)}));
    BlockSample s = draw_sample(rng);
    center_vals[static_cast<size_t>(t)] = h(s);
  });
  double center = 0.0;
  for (double v : center_vals) center += v;
  center /= static_cast<double>(center_trials);
  double center_var = 0.0;
  for (double v : center_vals) center_var += (v - center) * (v - center);
  center_var /= static_cast<double>(center_trials - 1);
  const double center_se = std::sqrt(center_var / static_cast<double>(center_trials));

  std::vector<double> stats(static_cast<size_t>(mc_trials), 0.0);
  parallel_for(mc_trials, [&](std::int64_t t) {
    Rng rng(derive_seed(seed, {kTagTrial, static_cast<std::uint64_t>(t)}));
    BlockSample s = draw_sample(rng);
    stats[static_cast<size_t>(t)] = h(s);
  });

  TailCurve c;
  c.xi_grid = xi_grid;
  c.mc_trials = mc_trials;
  for (double xi : xi_grid) {
    long long hits = 0;
    for (double v : stats) {
      if (v - center > xi) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(mc_trials);
    const double theo = std::exp(-2.0 * xi * xi / sum_c2);
    const double se = binomial_se(p, mc_trials);
    c.empirical_tail.push_back(p);
    c.theoretical_bound.push_back(theo);
    c.std_error.push_back(se);
    // Fold the center estimate's uncertainty into the pass rule.
    const double xi_relaxed = std::max(xi - 4.0 * center_se, 0.0);
    const double relaxed_bound = std::exp(-2.0 * xi_relaxed * xi_relaxed / sum_c2);
    if (p > relaxed_bound + 4.0 * se) ++c.violation_count;
  }
  return c;
}

namespace {

struct ClassTables {
  std::vector<Eigen::MatrixXd> fvals;  // per block: |F| x support size
  std::vector<std::vector<double>> cums;
};

ClassTables tabulate_class(const FiniteFunctionClass& cls, const std::vector<DiscreteDomain>& blocks) {
  ClassTables t;
  t.fvals.reserve(blocks.size());
  t.cums.reserve(blocks.size());
  for (const auto& b : blocks) {
    b.validate();
    if (b.input_dim() != cls.dim()) {
      throw validation_error("ghost-sample check: domain dimension does not match hypotheses");
    }
    Eigen::MatrixXd m(cls.size(), static_cast<Eigen::Index>(b.support.size()));
    for (int j = 0; j < cls.size(); ++j) {
      for (size_t i = 0; i < b.support.size(); ++i) {
        m(j, static_cast<Eigen::Index>(i)) = cls.eval(j, b.support[i]);
      }
    }
    t.fvals.push_back(std::move(m));
    t.cums.push_back(b.cumulative());
  }
  return t;
}

// Per-function empirical means of one drawn block, via support-point counts.
Eigen::VectorXd draw_block_means(const Eigen::MatrixXd& fvals, const std::vector<double>& cum,
                                 long long n, Rng& rng) {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cum.size()));
  for (long long i = 0; i < n; ++i) {
    counts[rng.pick_index(cum.data(), static_cast<int>(cum.size()))] += 1.0;
  }
  return fvals * (counts / static_cast<double>(n));
}

SymmetrizationResult finish_symmetrization(const std::vector<char>& lhs_flags,
                                           const std::vector<char>& rhs_flags, double divergence,
                                           bool gate, long long trials) {
  long long lhs_hits = 0, rhs_hits = 0;
  for (char f : lhs_flags) lhs_hits += f;
  for (char f : rhs_flags) rhs_hits += f;
  SymmetrizationResult r;
  r.lhs_prob = static_cast<double>(lhs_hits) / static_cast<double>(trials);
  r.rhs_prob = static_cast<double>(rhs_hits) / static_cast<double>(trials);
  r.lhs_std_error = binomial_se(r.lhs_prob, trials);
  r.rhs_std_error = binomial_se(r.rhs_prob, trials);
  r.divergence = divergence;
  r.gate_satisfied = gate;
  r.mc_trials = trials;
  const double slack =
      4.0 * std::sqrt(r.lhs_std_error * r.lhs_std_error + 4.0 * r.rhs_std_error * r.rhs_std_error);
  r.holds_within_slack = r.lhs_prob <= 2.0 * r.rhs_prob + slack;
  return r;
}

}  // namespace

SymmetrizationResult verify_symmetrization_multi(const FiniteFunctionClass& cls,
                                                 const std::vector<DiscreteDomain>& sources,
                                                 const DiscreteDomain& target,
                                                 const SimplexWeights& weights,
                                                 const std::vector<long long>& ns, double xi,
                                                 long long mc_trials, std::uint64_t seed) {
  cls.validate();
  weights.validate();
  check_trials(mc_trials);
  const size_t kk = sources.size();
  if (kk == 0 || kk != ns.size() || static_cast<int>(kk) != weights.k()) {
    throw validation_error("ghost-sample check: sources, weights and sizes must have equal counts");
  }
  for (long long n : ns) {
    if (n < 1) throw config_error("sample sizes must be >= 1");
  }
  if (!(xi > 0.0) || !std::isfinite(xi)) throw config_error("xi must be positive and finite");
  const ClassTables tables = tabulate_class(cls, sources);
  const ClassTables target_table = tabulate_class(cls, {target});
  // Exact target means and the exact weighted divergence.
  Eigen::VectorXd target_means(cls.size());
  for (int j = 0; j < cls.size(); ++j) {
    double acc = 0.0;
    for (size_t i = 0; i < target.support.size(); ++i) {
      acc += target.probabilities[i] * target_table.fvals[0](j, static_cast<Eigen::Index>(i));
    }
    target_means[j] = acc;
  }
  Eigen::VectorXd mix_means = Eigen::VectorXd::Zero(cls.size());
  for (size_t k = 0; k < kk; ++k) {
    for (int j = 0; j < cls.size(); ++j) {
      double acc = 0.0;
      for (size_t i = 0; i < sources[k].support.size(); ++i) {
        acc += sources[k].probabilities[i] * tables.fvals[k](j, static_cast<Eigen::Index>(i));
      }
      mix_means[j] += weights.w[k] * acc;
    }
  }
  const double divergence = (mix_means - target_means).cwiseAbs().maxCoeff();
  if (!(xi > divergence)) {
    throw validation_error("xi must exceed the divergence term (xi=" + g17(xi) +
                           ", divergence=" + g17(divergence) + ")");
  }
  const double xi_prime = xi - divergence;
  const double width = cls.loss.range_width();
  const bool gate = log_space_gate(ns, width, xi_prime);

  std::vector<char> lhs_flags(static_cast<size_t>(mc_trials), 0);
  std::vector<char> rhs_flags(static_cast<size_t>(mc_trials), 0);
  parallel_for(mc_trials, [&](std::int64_t t) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(cls.size());
    Eigen::VectorXd ghost = Eigen::VectorXd::Zero(cls.size());
    for (size_t k = 0; k < kk; ++k) {
      Rng r1(derive_seed(seed, {kTagTrial, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(k)}));
      mean += weights.w[k] * draw_block_means(tables.fvals[k], tables.cums[k], ns[k], r1);
      Rng r2(derive_seed(seed, {kTagGhost, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(k)}));
      ghost += weights.w[k] * draw_block_means(tables.fvals[k], tables.cums[k], ns[k], r2);
    }
    const double sup_lhs = (target_means - mean).cwiseAbs().maxCoeff();
    const double sup_rhs = (ghost - mean).cwiseAbs().maxCoeff();
    lhs_flags[static_cast<size_t>(t)] = sup_lhs > xi ? 1 : 0;
    rhs_flags[static_cast<size_t>(t)] = sup_rhs > xi_prime / 2.0 ? 1 : 0;
  });
  return finish_symmetrization(lhs_flags, rhs_flags, divergence, gate, mc_trials);
}

SymmetrizationResult verify_symmetrization_combined(const FiniteFunctionClass& cls,
                                                    const DiscreteDomain& source,
                                                    const DiscreteDomain& target,
                                                    const MixCoefficient& mix, long long n_s,
                                                    long long n_t, double xi, long long mc_trials,
                                                    std::uint64_t seed) {
  cls.validate();
  mix.validate();
  check_trials(mc_trials);
  if (n_s < 1 || n_t < 1) throw config_error("sample sizes must be >= 1");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw config_error("xi must be positive and finite");
  const double tau = mix.tau;
  const ClassTables tables = tabulate_class(cls, {source, target});
  Eigen::VectorXd source_means(cls.size());
  Eigen::VectorXd target_means(cls.size());
  for (int j = 0; j < cls.size(); ++j) {
    double acc_s = 0.0;
    for (size_t i = 0; i < source.support.size(); ++i) {
      acc_s += source.probabilities[i] * tables.fvals[0](j, static_cast<Eigen::Index>(i));
    }
    source_means[j] = acc_s;
    double acc_t = 0.0;
    for (size_t i = 0; i < target.support.size(); ++i) {
      acc_t += target.probabilities[i] * tables.fvals[1](j, static_cast<Eigen::Index>(i));
    }
    target_means[j] = acc_t;
  }
  const double class_ipm = (source_means - target_means).cwiseAbs().maxCoeff();
  const double divergence = (1.0 - tau) * class_ipm;
  if (!(xi > divergence)) {
    throw validation_error("xi must exceed the divergence term (xi=" + g17(xi) +
                           ", divergence=" + g17(divergence) + ")");
  }
  const double xi_prime = xi - divergence;
  const double width = cls.loss.range_width();
  const bool gate = log_space_gate({n_s, n_t}, width, xi_prime);

  std::vector<char> lhs_flags(static_cast<size_t>(mc_trials), 0);
  std::vector<char> rhs_flags(static_cast<size_t>(mc_trials), 0);
  parallel_for(mc_trials, [&](std::int64_t t) {
    Rng rs(derive_seed(seed, {kTagTrial, static_cast<std::uint64_t>(t), 0}));
    Rng rt(derive_seed(seed, {kTagTrial, static_cast<std::uint64_t>(t), 1}));
    Rng gs(derive_seed(seed, {kTagGhost, static_cast<std::uint64_t>(t), 0}));
    Rng gt(derive_seed(seed, {kTagGhost, static_cast<std::uint64_t>(t), 1}));
    const Eigen::VectorXd mean = (1.0 - tau) * draw_block_means(tables.fvals[0], tables.cums[0], n_s, rs) +
                                 tau * draw_block_means(tables.fvals[1], tables.cums[1], n_t, rt);
    const Eigen::VectorXd ghost = (1.0 - tau) * draw_block_means(tables.fvals[0], tables.cums[0], n_s, gs) +
                                  tau * draw_block_means(tables.fvals[1], tables.cums[1], n_t, gt);
    const double sup_lhs = (target_means - mean).cwiseAbs().maxCoeff();
    const double sup_rhs = (ghost - mean).cwiseAbs().maxCoeff();
    lhs_flags[static_cast<size_t>(t)] = sup_lhs > xi ? 1 : 0;
    rhs_flags[static_cast<size_t>(t)] = sup_rhs > xi_prime / 2.0 ? 1 : 0;
  });
  return finish_symmetrization(lhs_flags, rhs_flags, divergence, gate, mc_trials);
}

std::string tailcurve_csv(const TailCurve& c) {
  std::ostringstream out;
  out << "xi,empirical_tail,theoretical_bound,std_error\n";
  for (size_t i = 0; i < c.xi_grid.size(); ++i) {
    out << g17(c.xi_grid[i]) << "," << g17(c.empirical_tail[i]) << ","
        << g17(c.theoretical_bound[i]) << "," << g17(c.std_error[i]) << "\n";
  }
  return out.str();
}

void write_tailcurve_csv(const TailCurve& c, const std::string& path) {
  write_text_file(path, tailcurve_csv(c));
}

std::string to_kv(const TailCurve& c) {
  std::ostringstream out;
  out << "mc_trials=" << c.mc_trials << "\n";
  out << "grid_points=" << c.xi_grid.size() << "\n";
  out << "violation_count=" << c.violation_count << "\n";
  return out.str();
}

std::string to_kv(const SymmetrizationResult& r) {
  std::ostringstream out;
  out << "lhs_prob=" << g17(r.lhs_prob) << "\n";
  out << "rhs_prob=" << g17(r.rhs_prob) << "\n";
  out << "lhs_std_error=" << g17(r.lhs_std_error) << "\n";
  out << "rhs_std_error=" << g17(r.rhs_std_error) << "\n";
  out << "divergence=" << g17(r.divergence) << "\n";
  out << "gate_satisfied=" << (r.gate_satisfied ? "true" : "false") << "\n";
  out << "holds_within_slack=" << (r.holds_within_slack ? "true" : "false") << "\n";
  out << "mc_trials=" << r.mc_trials << "\n";
  return out.str();
}

}  // namespace dab
