#include "dab/divergences.hpp"

#include <cmath>
#include <sstream>

#include "dab/csv.hpp"
#include "dab/errors.hpp"

namespace dab {

WeightedPoints WeightedPoints::from_domain(const DiscreteDomain& d) {
  d.validate();
  WeightedPoints p;
  const long long m = static_cast<long long>(d.support.size());
  p.xs.resize(m, d.input_dim());
  p.ys.resize(m);
  p.probs.resize(m);
  for (long long i = 0; i < m; ++i) {
    const SupportPoint& sp = d.support[static_cast<size_t>(i)];
    for (size_t j = 0; j < sp.x.size(); ++j) p.xs(i, static_cast<long long>(j)) = sp.x[j];
    p.ys[i] = sp.y;
    p.probs[i] = d.probabilities[static_cast<size_t>(i)];
  }
  p.exact = true;
  return p;
}

WeightedPoints WeightedPoints::from_dataset(const Dataset& d) {
  if (d.rows() == 0) throw validation_error("weighted points from an empty dataset");
  WeightedPoints p;
  p.xs = d.features;
  p.ys = d.labels;
  p.probs = Eigen::VectorXd::Constant(d.rows(), 1.0 / static_cast<double>(d.rows()));
  p.exact = false;
  return p;
}

namespace {

void check_dims(const WeightedPoints& a, const WeightedPoints& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw validation_error(std::string(what) + ": point dimensions differ");
  }
}

// E_p f_j for every class member: row j of the evaluation against (xs, ys).
Eigen::VectorXd class_means(const FiniteFunctionClass& cls, const WeightedPoints& p) {
  Eigen::VectorXd means(cls.size());
  for (int j = 0; j < cls.size(); ++j) {
    double acc = 0.0;
    for (long long i = 0; i < p.size(); ++i) {
      acc += p.probs[i] * cls.eval(j, p.xs.row(i).transpose(), p.ys[i]);
    }
    means[j] = acc;
  }
  return means;
}

}  // namespace

double ipm(const FiniteFunctionClass& cls, const WeightedPoints& s, const WeightedPoints& t) {
  cls.validate();
  check_dims(s, t, "ipm");
  if (s.dim() != cls.dim()) throw validation_error("ipm: class dimension does not match points");
  const Eigen::VectorXd ms = class_means(cls, s);
  const Eigen::VectorXd mt = class_means(cls, t);
  return (ms - mt).cwiseAbs().maxCoeff();
}

double discrepancy_distance(const std::vector<LinearModel>& hyps, const LossFunction& loss,
                            const WeightedPoints& s_inputs, const WeightedPoints& t_inputs) {
  if (hyps.empty()) throw validation_error("discrepancy: empty hypothesis list");
  loss.validate();
  if (!loss.bounded()) throw validation_error("discrepancy requires a clipped loss");
  check_dims(s_inputs, t_inputs, "discrepancy");
  const int h = static_cast<int>(hyps.size());
  // Predictions of every hypothesis on every point, computed once per side.
  const Eigen::MatrixXd ps = [&] {
    Eigen::MatrixXd m(h, s_inputs.size());
    for (int j = 0; j < h; ++j)
      for (long long i = 0; i < s_inputs.size(); ++i)
        m(j, i) = hyps[static_cast<size_t>(j)].predict(s_inputs.xs.row(i).transpose());
    return m;
  }();
  const Eigen::MatrixXd pt = [&] {
    Eigen::MatrixXd m(h, t_inputs.size());
    for (int j = 0; j < h; ++j)
      for (long long i = 0; i < t_inputs.size(); ++i)
        m(j, i) = hyps[static_cast<size_t>(j)].predict(t_inputs.xs.row(i).transpose());
    return m;
  }();
  double best = 0.0;
  for (int j1 = 0; j1 < h; ++j1) {
    for (int j2 = 0; j2 < h; ++j2) {
      double es = 0.0, et = 0.0;
      for (long long i = 0; i < s_inputs.size(); ++i) {
        es += s_inputs.probs[i] * loss(ps(j1, i), ps(j2, i));
      }
      for (long long i = 0; i < t_inputs.size(); ++i) {
        et += t_inputs.probs[i] * loss(pt(j1, i), pt(j2, i));
      }
      best = std::max(best, std::abs(es - et));
    }
  }
  return best;
}

double q_quantity(const std::vector<LinearModel>& hyps, const LossFunction& loss,
                  const WeightedPoints& t_inputs, const LabelingFn& gs, const LabelingFn& gt) {
  if (hyps.empty()) throw validation_error("labeling-mismatch quantity: empty hypothesis list");
  loss.validate();
  if (!loss.bounded()) throw validation_error("labeling-mismatch quantity requires a clipped loss");
  double best = 0.0;
  for (const auto& g : hyps) {
    double e_t = 0.0, e_s = 0.0;
    for (long long i = 0; i < t_inputs.size(); ++i) {
      const Eigen::VectorXd x = t_inputs.xs.row(i).transpose();
      const double pred = g.predict(x);
      e_t += t_inputs.probs[i] * loss(pred, gt(x));
      e_s += t_inputs.probs[i] * loss(pred, gs(x));
    }
    best = std::max(best, std::abs(e_t - e_s));
  }
  return best;
}

double weighted_ipm(const FiniteFunctionClass& cls, const std::vector<WeightedPoints>& sources,
                    const WeightedPoints& t, const SimplexWeights& weights) {
  cls.validate();
  weights.validate();
  if (static_cast<int>(sources.size()) != weights.k()) {
    throw validation_error("weighted ipm: weight count does not match source count");
  }
  Eigen::VectorXd mix = Eigen::VectorXd::Zero(cls.size());
  for (size_t k = 0; k < sources.size(); ++k) {
    check_dims(sources[k], t, "weighted ipm");
    mix += weights.w[k] * class_means(cls, sources[k]);
  }
  const Eigen::VectorXd mt = class_means(cls, t);
  return (mix - mt).cwiseAbs().maxCoeff();
}

namespace {

// Relabels a finite domain through a labeling function.
DiscreteDomain relabel(const DiscreteDomain& d, const LabelingFn& g) {
  DiscreteDomain out = d;
  for (auto& sp : out.support) {
    const Eigen::Map<const Eigen::VectorXd> x(sp.x.data(), static_cast<Eigen::Index>(sp.x.size()));
    sp.y = g(x);
  }
  return out;
}

}  // namespace

DivergenceReport divergence_report(const std::vector<LinearModel>& hyps, const LossFunction& loss,
                                   const DiscreteDomain& s, const DiscreteDomain& t,
                                   const LabelingFn& gs, const LabelingFn& gt) {
  FiniteFunctionClass cls{hyps, loss};
  cls.validate();
  const WeightedPoints ws = WeightedPoints::from_domain(relabel(s, gs));
  const WeightedPoints wt = WeightedPoints::from_domain(relabel(t, gt));
  DivergenceReport r;
  r.mode = DivergenceMode::ExactDiscrete;
  r.ipm = ipm(cls, ws, wt);
  r.disc = discrepancy_distance(hyps, loss, ws, wt);
  r.q = q_quantity(hyps, loss, wt, gs, gt);
  if (r.ipm > r.disc + r.q + 1e-9) {
    throw validation_error(
        "divergence decomposition violated: ipm=" + g17(r.ipm) + " > disc+q=" + g17(r.disc + r.q) +
        " (are both labeling functions members of the hypothesis list?)");
  }
  return r;
}

DivergenceReport divergence_report_empirical(const std::vector<LinearModel>& hyps,
                                             const LossFunction& loss, const Dataset& s,
                                             const Dataset& t, const LabelingFn& gs,
                                             const LabelingFn& gt) {
  FiniteFunctionClass cls{hyps, loss};
  cls.validate();
  const WeightedPoints ws = WeightedPoints::from_dataset(s);
  const WeightedPoints wt = WeightedPoints::from_dataset(t);
  DivergenceReport r;
  r.mode = DivergenceMode::EmpiricalSamples;
  r.ipm = ipm(cls, ws, wt);
  r.disc = discrepancy_distance(hyps, loss, ws, wt);
  r.q = q_quantity(hyps, loss, wt, gs, gt);
  return r;
}

std::string to_kv(const DivergenceReport& r) {
  std::ostringstream out;
  out << "mode=" << (r.mode == DivergenceMode::ExactDiscrete ? "exact_discrete" : "empirical_samples")
      << "\n";
  out << "ipm=" << g17(r.ipm) << "\n";
  out << "disc=" << g17(r.disc) << "\n";
  out << "q=" << g17(r.q) << "\n";
  return out.str();
}

LabelingFn linear_labeling(const LinearModel& m) {
  LinearModel copy = m;
  copy.validate();
  return [copy](const Eigen::Ref<const Eigen::VectorXd>& x) { return copy.predict(x); };
}

}  // namespace dab
