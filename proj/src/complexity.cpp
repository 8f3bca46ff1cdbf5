#include "dab/complexity.hpp"

#include <cmath>

#include "dab/errors.hpp"
#include "dab/parallel.hpp"
#include "dab/rng.hpp"

namespace dab {

void NormSpec::validate() const {
  if (block_sizes.empty()) throw config_error("norm: block_sizes must be nonempty");
  for (long long n : block_sizes) {
    if (n < 1) throw config_error("norm: block sizes must be >= 1");
  }
  switch (kind) {
    case NormKind::BlockWeightedL1:
      weights.validate();
      if (weights.k() != static_cast<int>(block_sizes.size())) {
        throw config_error("norm: weight count does not match block count");
      }
      break;
    case NormKind::MixWeightedL1:
      mix.validate();
      if (block_sizes.size() != 2) {
        throw config_error("norm: mix-weighted norm needs exactly two blocks [target, source]");
      }
      break;
  }
}

long long NormSpec::total() const {
  long long t = 0;
  for (long long n : block_sizes) t += n;
  return t;
}

std::vector<double> NormSpec::point_coefficients() const {
  validate();
  std::vector<double> c;
  c.reserve(static_cast<size_t>(total()));
  if (kind == NormKind::BlockWeightedL1) {
    for (size_t k = 0; k < block_sizes.size(); ++k) {
      const double v = weights.w[k] / static_cast<double>(block_sizes[k]);
      for (long long i = 0; i < block_sizes[k]; ++i) c.push_back(v);
    }
  } else {
    const double vt = mix.tau / static_cast<double>(block_sizes[0]);
    const double vs = (1.0 - mix.tau) / static_cast<double>(block_sizes[1]);
    for (long long i = 0; i < block_sizes[0]; ++i) c.push_back(vt);
    for (long long i = 0; i < block_sizes[1]; ++i) c.push_back(vs);
  }
  return c;
}

NormSpec NormSpec::doubled() const {
  NormSpec d = *this;
  for (auto& n : d.block_sizes) n *= 2;
  return d;
}

double norm_distance(const Eigen::Ref<const Eigen::VectorXd>& fa,
                     const Eigen::Ref<const Eigen::VectorXd>& fb, const NormSpec& norm) {
  const auto coeff = norm.point_coefficients();
  if (fa.size() != fb.size() || fa.size() != static_cast<Eigen::Index>(coeff.size())) {
    throw validation_error("norm distance: vector lengths do not match the norm layout");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < fa.size(); ++i) {
    acc += coeff[static_cast<size_t>(i)] * std::abs(fa[i] - fb[i]);
  }
  return acc;
}

long long covering_number_greedy(const EvaluationMatrix& values, double xi, const NormSpec& norm) {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw validation_error("covering: xi must be >= 0 and finite");
  const auto coeff = norm.point_coefficients();
  if (values.points() != static_cast<long long>(coeff.size())) {
    throw validation_error("covering: evaluation width does not match the norm layout");
  }
  const int m = values.functions();
  std::vector<bool> covered(static_cast<size_t>(m), false);
  long long balls = 0;
  for (int pivot = 0; pivot < m; ++pivot) {
    if (covered[static_cast<size_t>(pivot)]) continue;
    ++balls;
    for (int j = pivot; j < m; ++j) {
      if (covered[static_cast<size_t>(j)]) continue;
      double d = 0.0;
      for (long long i = 0; i < values.points(); ++i) {
        d += coeff[static_cast<size_t>(i)] * std::abs(values.values(pivot, i) - values.values(j, i));
      }
      if (d <= xi) covered[static_cast<size_t>(j)] = true;
    }
  }
  return balls;
}

Dataset sample_block(const BlockDomain& domain, long long n, std::uint64_t seed) {
  if (std::holds_alternative<DiscreteDomain>(domain)) {
    return sample_discrete(std::get<DiscreteDomain>(domain), n, seed);
  }
  return sample_linear_gaussian(std::get<LinearGaussianDomainSpec>(domain), n, seed);
}

double uniform_entropy_estimate(const FiniteFunctionClass& cls,
                                const std::vector<BlockDomain>& block_domains,
                                const NormSpec& base_norm, double xi, int realizations,
                                std::uint64_t seed) {
  cls.validate();
  base_norm.validate();
  if (realizations < 1) throw config_error("uniform entropy: realizations must be >= 1");
  if (block_domains.size() != base_norm.block_sizes.size()) {
    throw validation_error("uniform entropy: domain count does not match block count");
  }
  const NormSpec ghost_norm = base_norm.doubled();
  const long long width = ghost_norm.total();
  std::vector<double> ln_cover(static_cast<size_t>(realizations), 0.0);
  parallel_for(realizations, [&](std::int64_t r) {
    Eigen::MatrixXd vals(cls.size(), width);
    long long col = 0;
    for (size_t k = 0; k < block_domains.size(); ++k) {
      const long long nk = 2 * base_norm.block_sizes[k];
      const Dataset d = sample_block(block_domains[k],
                                     nk,
                                     derive_seed(seed, {static_cast<std::uint64_t>(r),
                                                        static_cast<std::uint64_t>(k)}));
      for (long long i = 0; i < nk; ++i) {
        for (int j = 0; j < cls.size(); ++j) {
          vals(j, col) = cls.eval(j, d.features.row(i).transpose(), d.labels[i]);
        }
        ++col;
      }
    }
    const EvaluationMatrix m = EvaluationMatrix::from_raw(std::move(vals), cls.loss.lo(), cls.loss.hi());
    ln_cover[static_cast<size_t>(r)] =
        std::log(static_cast<double>(covering_number_greedy(m, xi, ghost_norm)));
  });
  double best = ln_cover[0];
  for (double v : ln_cover) best = std::max(best, v);
  return best;
}

namespace {

double sup_signed_mean(const EvaluationMatrix& values, const std::vector<double>& sigma) {
  const long long n = values.points();
  double best = 0.0;
  for (int j = 0; j < values.functions(); ++j) {
    double acc = 0.0;
    for (long long i = 0; i < n; ++i) acc += sigma[static_cast<size_t>(i)] * values.values(j, i);
    best = std::max(best, std::abs(acc));
  }
  return best / static_cast<double>(n);
}

RademacherEstimate enumerate_signs(const EvaluationMatrix& values) {
  const long long n = values.points();
  const long long total = 1ll << n;
  double acc = 0.0;
  std::vector<double> sigma(static_cast<size_t>(n));
  for (long long s = 0; s < total; ++s) {
    for (long long i = 0; i < n; ++i) {
      sigma[static_cast<size_t>(i)] = ((s >> i) & 1) ? 1.0 : -1.0;
    }
    acc += sup_signed_mean(values, sigma);
  }
  RademacherEstimate est;
  est.value = acc / static_cast<double>(total);
  est.std_error = 0.0;
  est.mc_trials = total;
  est.mode = RademacherMode::EmpiricalFixedSample;
  return est;
}

}  // namespace

RademacherEstimate rademacher_empirical_mc(const EvaluationMatrix& values, long long mc_trials,
                                           std::uint64_t seed) {
  if (mc_trials < 2) throw config_error("sign-symmetrized complexity: mc_trials must be >= 2");
  const long long n = values.points();
  std::vector<double> draws(static_cast<size_t>(mc_trials), 0.0);
  parallel_for(mc_trials, [&](std::int64_t t) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    std::vector<double> sigma(static_cast<size_t>(n));
    for (long long i = 0; i < n; ++i) sigma[static_cast<size_t>(i)] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    draws[static_cast<size_t>(t)] = sup_signed_mean(values, sigma);
  });
  double mean = 0.0;
  for (double v : draws) mean += v;
  mean /= static_cast<double>(mc_trials);
  double var = 0.0;
  for (double v : draws) var += (v - mean) * (v - mean);
  var /= static_cast<double>(mc_trials - 1);
  RademacherEstimate est;
  est.value = mean;
  est.std_error = std::sqrt(var / static_cast<double>(mc_trials));
  est.mc_trials = mc_trials;
  est.mode = RademacherMode::EmpiricalFixedSample;
  return est;
}

RademacherEstimate rademacher_empirical(const EvaluationMatrix& values, long long mc_trials,
                                        std::uint64_t seed) {
  if (values.points() <= 20) return enumerate_signs(values);
  return rademacher_empirical_mc(values, mc_trials, seed);
}

RademacherEstimate rademacher_expected(const FiniteFunctionClass& cls, const BlockDomain& domain,
                                       long long n, int outer_trials, long long inner_trials,
                                       std::uint64_t seed) {
  cls.validate();
  if (n < 1) throw config_error("expected complexity: sample size must be >= 1");
  if (outer_trials < 2) throw config_error("expected complexity: outer_trials must be >= 2");
  std::vector<double> outer(static_cast<size_t>(outer_trials), 0.0);
  parallel_for(outer_trials, [&](std::int64_t o) {
    const Dataset d = sample_block(domain, n, derive_seed(seed, {static_cast<std::uint64_t>(o), 0}));
    const EvaluationMatrix m = EvaluationMatrix::from_class(cls, d);
    outer[static_cast<size_t>(o)] =
        rademacher_empirical(m, inner_trials, derive_seed(seed, {static_cast<std::uint64_t>(o), 1}))
            .value;
  });
  double mean = 0.0;
  for (double v : outer) mean += v;
  mean /= static_cast<double>(outer_trials);
  double var = 0.0;
  for (double v : outer) var += (v - mean) * (v - mean);
  var /= static_cast<double>(outer_trials - 1);
  RademacherEstimate est;
  est.value = mean;
  est.std_error = std::sqrt(var / static_cast<double>(outer_trials));
  est.mc_trials = outer_trials;
  est.mode = RademacherMode::ExpectedOverData;
  return est;
}

}  // namespace dab
