#include "dab/bounds.hpp"

#include <cmath>
#include <sstream>

#include "dab/csv.hpp"
#include "dab/errors.hpp"

namespace dab {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw config_error("epsilon must lie in (0, 1)");
}

void check_width(double range_width) {
  if (!(range_width > 0.0) || !std::isfinite(range_width)) {
    throw config_error("range_width must be positive and finite");
  }
}

void check_ln_uen(double ln_uen) {
  if (!(ln_uen >= 0.0) || !std::isfinite(ln_uen)) {
    throw validation_error("ln_uen must be >= 0 and finite");
  }
}

void check_divergence(double d) {
  if (!(d >= 0.0) || !std::isfinite(d)) throw validation_error("divergence must be >= 0 and finite");
}

void check_rademacher(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw validation_error("complexity estimates must be >= 0 and finite");
  }
}

void check_sizes(const std::vector<long long>& ns) {
  if (ns.empty()) throw config_error("sample sizes must be nonempty");
  for (long long n : ns) {
    if (n < 1) throw config_error("sample sizes must be >= 1");
  }
}

double sum_w2_over_n(const SimplexWeights& w, const std::vector<long long>& ns) {
  double acc = 0.0;
  for (size_t k = 0; k < w.w.size(); ++k) {
    acc += w.w[k] * w.w[k] / static_cast<double>(ns[k]);
  }
  return acc;
}

// Entropy-bound sample-size precondition, evaluated in log space so that
// astronomically large sizes neither overflow nor lose the comparison:
// prod(ns) >= 8 width^2 / radical^2.
bool entropy_gate(const std::vector<long long>& ns, double range_width, double radical) {
  double log_prod = 0.0;
  for (long long n : ns) log_prod += std::log(static_cast<double>(n));
  const double rhs = std::log(8.0) + 2.0 * std::log(range_width) - 2.0 * std::log(radical);
  return log_prod >= rhs;
}

void finish(BoundReport& r) {
  r.total = r.divergence_term + r.complexity_term + r.confidence_term;
}

}  // namespace

BoundReport bound_multi_uen(double d_w, double ln_uen, const SimplexWeights& w,
                            const std::vector<long long>& ns, double range_width, double epsilon) {
  check_divergence(d_w);
  check_ln_uen(ln_uen);
  w.validate();
  check_sizes(ns);
  if (w.k() != static_cast<int>(ns.size())) {
    throw config_error("weight count does not match sample-size count");
  }
  check_width(range_width);
  check_epsilon(epsilon);
  BoundReport r;
  r.kind = BoundKind::MultiUen;
  r.divergence_term = d_w;
  r.complexity_term = 0.0;
  const double radicand = (ln_uen - std::log(epsilon / 8.0)) * 32.0 * range_width * range_width *
                          sum_w2_over_n(w, ns);
  r.confidence_term = std::sqrt(radicand);
  r.gate_satisfied = entropy_gate(ns, range_width, r.confidence_term);
  r.inputs_echo = {{"d", d_w}, {"ln_uen", ln_uen}, {"range_width", range_width}, {"epsilon", epsilon}};
  for (size_t k = 0; k < w.w.size(); ++k) {
    r.inputs_echo["w_" + std::to_string(k)] = w.w[k];
    r.inputs_echo["n_" + std::to_string(k)] = static_cast<double>(ns[k]);
  }
  finish(r);
  return r;
}

BoundReport bound_multi_rademacher(double d_w, const std::vector<double>& rademachers,
                                   const SimplexWeights& w, const std::vector<long long>& ns,
                                   double range_width, double epsilon) {
  check_divergence(d_w);
  w.validate();
  check_sizes(ns);
  if (w.k() != static_cast<int>(ns.size()) || rademachers.size() != ns.size()) {
    throw config_error("weights, sample sizes and complexity estimates must have equal counts");
  }
  for (double rk : rademachers) check_rademacher(rk);
  check_width(range_width);
  check_epsilon(epsilon);
  BoundReport r;
  r.kind = BoundKind::MultiRademacher;
  r.divergence_term = d_w;
  double comp = 0.0;
  for (size_t k = 0; k < rademachers.size(); ++k) comp += w.w[k] * rademachers[k];
  r.complexity_term = 2.0 * comp;
  r.confidence_term = std::sqrt(range_width * range_width * std::log(1.0 / epsilon) / 2.0 *
                                sum_w2_over_n(w, ns));
  r.gate_satisfied = true;
  r.inputs_echo = {{"d", d_w}, {"range_width", range_width}, {"epsilon", epsilon}};
  for (size_t k = 0; k < w.w.size(); ++k) {
    r.inputs_echo["w_" + std::to_string(k)] = w.w[k];
    r.inputs_echo["n_" + std::to_string(k)] = static_cast<double>(ns[k]);
    r.inputs_echo["r_" + std::to_string(k)] = rademachers[k];
  }
  finish(r);
  return r;
}

BoundReport bound_combined_uen(double d, double ln_uen, const MixCoefficient& mix, long long n_s,
                               long long n_t, double range_width, double epsilon) {
  check_divergence(d);
  check_ln_uen(ln_uen);
  mix.validate();
  check_sizes({n_s, n_t});
  check_width(range_width);
  check_epsilon(epsilon);
  const double tau = mix.tau;
  BoundReport r;
  r.kind = BoundKind::CombinedUen;
  r.divergence_term = (1.0 - tau) * d;
  r.complexity_term = 0.0;
  const double shares = (1.0 - tau) * (1.0 - tau) / static_cast<double>(n_s) +
                        tau * tau / static_cast<double>(n_t);
  const double radicand =
      (ln_uen - std::log(epsilon / 8.0)) * 32.0 * range_width * range_width * shares;
  r.confidence_term = std::sqrt(radicand);
  r.gate_satisfied = entropy_gate({n_s, n_t}, range_width, r.confidence_term);
  r.inputs_echo = {{"d", d},
                   {"ln_uen", ln_uen},
                   {"tau", tau},
                   {"n_s", static_cast<double>(n_s)},
                   {"n_t", static_cast<double>(n_t)},
                   {"range_width", range_width},
                   {"epsilon", epsilon}};
  finish(r);
  return r;
}

BoundReport bound_combined_rademacher(double d, double r_source, double r_target,
                                      const MixCoefficient& mix, long long n_s, long long n_t,
                                      double range_width, double epsilon) {
  check_divergence(d);
  check_rademacher(r_source);
  check_rademacher(r_target);
  mix.validate();
  check_sizes({n_s, n_t});
  check_width(range_width);
  check_epsilon(epsilon);
  const double tau = mix.tau;
  BoundReport r;
  r.kind = BoundKind::CombinedRademacher;
  r.divergence_term = (1.0 - tau) * d;
  r.complexity_term = 2.0 * (1.0 - tau) * r_source + 2.0 * tau * r_target;
  // First radical: width enters unsquared.
  const double target_term =
      3.0 * tau * std::sqrt(range_width * std::log(4.0 / epsilon) / (2.0 * static_cast<double>(n_t)));
  const double shares = tau * tau / static_cast<double>(n_t) +
                        (1.0 - tau) * (1.0 - tau) / static_cast<double>(n_s);
  const double mixed_term =
      (1.0 - tau) * std::sqrt(range_width * range_width * std::log(2.0 / epsilon) / 2.0 * shares);
  r.confidence_term = target_term + mixed_term;
  r.gate_satisfied = true;
  r.inputs_echo = {{"d", d},
                   {"r_source", r_source},
                   {"r_target", r_target},
                   {"tau", tau},
                   {"n_s", static_cast<double>(n_s)},
                   {"n_t", static_cast<double>(n_t)},
                   {"range_width", range_width},
                   {"epsilon", epsilon}};
  finish(r);
  return r;
}

BoundReport bound_classical_uen(double ln_uen, long long n, double range_width, double epsilon) {
  check_ln_uen(ln_uen);
  check_sizes({n});
  check_width(range_width);
  check_epsilon(epsilon);
  BoundReport r;
  r.kind = BoundKind::ClassicalUen;
  r.divergence_term = 0.0;
  r.complexity_term = 0.0;
  const double radicand = (ln_uen - std::log(epsilon / 8.0)) * 32.0 * range_width * range_width /
                          static_cast<double>(n);
  r.confidence_term = std::sqrt(radicand);
  r.gate_satisfied = entropy_gate({n}, range_width, r.confidence_term);
  r.inputs_echo = {{"ln_uen", ln_uen},
                   {"n", static_cast<double>(n)},
                   {"range_width", range_width},
                   {"epsilon", epsilon}};
  finish(r);
  return r;
}

BoundReport bound_classical_rademacher(double rademacher, long long n, double range_width,
                                       double epsilon) {
  check_rademacher(rademacher);
  check_sizes({n});
  check_width(range_width);
  check_epsilon(epsilon);
  BoundReport r;
  r.kind = BoundKind::ClassicalRademacher;
  r.divergence_term = 0.0;
  r.complexity_term = 2.0 * rademacher;
  r.confidence_term =
      std::sqrt(range_width * range_width * std::log(1.0 / epsilon) / (2.0 * static_cast<double>(n)));
  r.gate_satisfied = true;
  r.inputs_echo = {{"r", rademacher},
                   {"n", static_cast<double>(n)},
                   {"range_width", range_width},
                   {"epsilon", epsilon}};
  finish(r);
  return r;
}

SimplexWeights optimal_weights(const std::vector<long long>& ns) {
  check_sizes(ns);
  double total = 0.0;
  for (long long n : ns) total += static_cast<double>(n);
  SimplexWeights w;
  w.w.reserve(ns.size());
  for (long long n : ns) w.w.push_back(static_cast<double>(n) / total);
  return w;
}

double optimal_tau(long long n_s, long long n_t) {
  check_sizes({n_s, n_t});
  return static_cast<double>(n_t) / static_cast<double>(n_t + n_s);
}

bool convergence_bounded_multi(const std::vector<ConvergenceStepMulti>& steps,
                               const std::optional<SimplexWeights>& w, double range_width) {
  check_width(range_width);
  if (steps.size() <= 1) return true;
  std::vector<double> ratio;
  ratio.reserve(steps.size());
  for (const auto& s : steps) {
    check_ln_uen(s.ln_uen);
    check_sizes(s.ns);
    const SimplexWeights weights = w ? *w : optimal_weights(s.ns);
    if (weights.k() != static_cast<int>(s.ns.size())) {
      throw config_error("convergence check: weight count does not match sample sizes");
    }
    ratio.push_back(s.ln_uen * 32.0 * range_width * range_width * sum_w2_over_n(weights, s.ns));
  }
  const size_t mid = ratio.size() / 2;
  double first = 0.0, second = 0.0;
  for (size_t i = 0; i < mid; ++i) first = std::max(first, ratio[i]);
  for (size_t i = mid; i < ratio.size(); ++i) second = std::max(second, ratio[i]);
  return second <= first * (1.0 + 1e-9);
}

bool convergence_bounded_combined(const std::vector<ConvergenceStepCombined>& steps,
                                  const std::optional<double>& tau, double range_width) {
  check_width(range_width);
  if (steps.size() <= 1) return true;
  std::vector<double> ratio;
  ratio.reserve(steps.size());
  for (const auto& s : steps) {
    check_ln_uen(s.ln_uen);
    check_sizes({s.n_s, s.n_t});
    const double t = tau ? *tau : optimal_tau(s.n_s, s.n_t);
    MixCoefficient m{t};
    m.validate();
    const double shares = t * t / static_cast<double>(s.n_t) +
                          (1.0 - t) * (1.0 - t) / static_cast<double>(s.n_s);
    ratio.push_back(s.ln_uen * 32.0 * range_width * range_width * shares);
  }
  const size_t mid = ratio.size() / 2;
  double first = 0.0, second = 0.0;
  for (size_t i = 0; i < mid; ++i) first = std::max(first, ratio[i]);
  for (size_t i = mid; i < ratio.size(); ++i) second = std::max(second, ratio[i]);
  return second <= first * (1.0 + 1e-9);
}

std::string bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::MultiUen: return "multi_uen";
    case BoundKind::MultiRademacher: return "multi_rademacher";
    case BoundKind::CombinedUen: return "combined_uen";
    case BoundKind::CombinedRademacher: return "combined_rademacher";
    case BoundKind::ClassicalUen: return "classical_uen";
    case BoundKind::ClassicalRademacher: return "classical_rademacher";
  }
  return "unknown";
}

std::string to_kv(const BoundReport& r) {
  std::ostringstream out;
  out << "theorem=" << bound_kind_name(r.kind) << "\n";
  out << "divergence_term=" << g17(r.divergence_term) << "\n";
  out << "complexity_term=" << g17(r.complexity_term) << "\n";
  out << "confidence_term=" << g17(r.confidence_term) << "\n";
  out << "total=" << g17(r.total) << "\n";
  out << "gate_satisfied=" << (r.gate_satisfied ? "true" : "false") << "\n";
  for (const auto& [key, value] : r.inputs_echo) {
    out << "echo_" << key << "=" << g17(value) << "\n";
  }
  return out.str();
}

std::string bound_csv_header() {
  return "theorem,divergence_term,complexity_term,confidence_term,total,gate_satisfied\n";
}

std::string bound_csv_row(const BoundReport& r) {
  std::ostringstream out;
  out << bound_kind_name(r.kind) << "," << g17(r.divergence_term) << "," << g17(r.complexity_term)
      << "," << g17(r.confidence_term) << "," << g17(r.total) << ","
      << (r.gate_satisfied ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace dab
