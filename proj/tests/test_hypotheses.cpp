#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "dab/domains.hpp"
#include "dab/errors.hpp"
#include "dab/hypotheses.hpp"

using namespace dab;

namespace {

LinearModel model(std::initializer_list<double> coefs) {
  LinearModel m;
  m.coefficients = Eigen::VectorXd(static_cast<long>(coefs.size()));
  int i = 0;
  for (double c : coefs) m.coefficients(i++) = c;
  return m;
}

Dataset tiny_dataset(std::initializer_list<double> xs, std::initializer_list<double> ys) {
  Dataset d;
  d.features = Eigen::MatrixXd(static_cast<long>(xs.size()), 1);
  d.labels = Eigen::VectorXd(static_cast<long>(ys.size()));
  int i = 0;
  for (double x : xs) d.features(i++, 0) = x;
  i = 0;
  for (double y : ys) d.labels(i++) = y;
  return d;
}

// Independent minimizer of the same weighted objective: steepest descent with
// exact line search on F(theta) = theta'A theta - 2 b'theta.
Eigen::VectorXd descend_weighted(const std::vector<Dataset>& sources,
                                 const SimplexWeights& weights) {
  const int dim = sources[0].dim();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  for (size_t k = 0; k < sources.size(); ++k) {
    const double c = weights.w[k] / static_cast<double>(sources[k].rows());
    A += c * sources[k].features.transpose() * sources[k].features;
    b += c * sources[k].features.transpose() * sources[k].labels;
  }
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  for (int it = 0; it < 500; ++it) {
    const Eigen::VectorXd g = 2.0 * (A * theta - b);
    const double gg = g.dot(g);
    if (gg < 1e-24) break;
    const double gAg = g.dot(A * g);
    theta -= (gg / (2.0 * gAg)) * g;
  }
  return theta;
}

}  // namespace

TEST_CASE("loss values with and without clipping") {
  LossFunction sq{LossKind::Squared, std::nullopt};
  CHECK(sq(3.0, 1.0) == 4.0);
  LossFunction ab{LossKind::Absolute, std::nullopt};
  CHECK(ab(3.0, 1.0) == 2.0);
  LossFunction sqc{LossKind::Squared, ClipRange{0.0, 1.0}};
  CHECK(sqc(3.0, 0.0) == 1.0);  // raw loss 9 clips to the range top
  CHECK(sqc(0.5, 0.0) == 0.25);
  CHECK(sqc.range_width() == 1.0);
  LossFunction abc{LossKind::Absolute, ClipRange{0.25, 0.75}};
  CHECK(abc(0.0, 0.0) == 0.25);  // raw loss 0 clips up to the range bottom
  CHECK(abc(5.0, 0.0) == 0.75);
  CHECK_THROWS_AS((LossFunction{LossKind::Squared, ClipRange{1.0, 0.0}}.validate()), config_error);
  CHECK_THROWS_AS(sq.range_width(), validation_error);
}

TEST_CASE("simplex weights and mix coefficient validation") {
  SimplexWeights ok{{0.25, 0.75}};
  ok.validate();
  const SimplexWeights not_one{{0.5, 0.4}};
  CHECK_THROWS_AS(not_one.validate(), config_error);
  const SimplexWeights negative{{-0.5, 1.5}};
  CHECK_THROWS_AS(negative.validate(), config_error);
  const SimplexWeights empty{{}};
  CHECK_THROWS_AS(empty.validate(), config_error);
  MixCoefficient{0.0}.validate();
  MixCoefficient{1.0}.validate();
  CHECK_THROWS_AS(MixCoefficient{1.5}.validate(), config_error);
  CHECK_THROWS_AS(MixCoefficient{-0.1}.validate(), config_error);
}

TEST_CASE("a finite function class requires a bounded loss") {
  FiniteFunctionClass cls;
  cls.hypotheses = {model({1.0}), model({2.0})};
  cls.loss = LossFunction{LossKind::Squared, std::nullopt};
  CHECK_THROWS_AS(cls.validate(), validation_error);
  cls.loss.clip = ClipRange{0.0, 4.0};
  cls.validate();
  Eigen::VectorXd x(1);
  x << 1.0;
  CHECK(cls.eval(0, x, 0.0) == 1.0);
  CHECK(cls.eval(1, x, 0.0) == 4.0);
  SupportPoint p{{1.0}, 0.0};
  CHECK(cls.eval(1, p) == 4.0);
}

TEST_CASE("evaluation matrices carry and enforce the value range") {
  FiniteFunctionClass cls;
  cls.hypotheses = {model({1.0}), model({0.0})};
  cls.loss = LossFunction{LossKind::Squared, ClipRange{0.0, 1.0}};
  const Dataset data = tiny_dataset({1.0, 2.0}, {0.0, 0.0});
  const EvaluationMatrix em = EvaluationMatrix::from_class(cls, data);
  CHECK(em.functions() == 2);
  CHECK(em.points() == 2);
  CHECK(em.values(0, 0) == 1.0);
  CHECK(em.values(0, 1) == 1.0);
  CHECK(em.values(1, 0) == 0.0);
  CHECK(em.lo == 0.0);
  CHECK(em.hi == 1.0);

  Eigen::MatrixXd raw(1, 2);
  raw << 0.5, 1.5;
  CHECK_THROWS_AS(EvaluationMatrix::from_raw(raw, 0.0, 1.0), validation_error);
  raw << 0.5, 1.0;
  const EvaluationMatrix ok = EvaluationMatrix::from_raw(raw, 0.0, 1.0);
  CHECK(ok.points() == 2);
}

TEST_CASE("empirical risks are plain, weighted, and two-part averages") {
  const Dataset d1 = tiny_dataset({1.0, 2.0}, {1.0, 2.0});
  const Dataset d2 = tiny_dataset({1.0}, {3.0});
  const LinearModel m = model({1.0});
  const LossFunction sq{LossKind::Squared, std::nullopt};
  CHECK(empirical_risk(m, d1, sq) == 0.0);
  CHECK(empirical_risk(m, d2, sq) == 4.0);
  const SimplexWeights w{{0.25, 0.75}};
  CHECK(weighted_empirical_risk(m, {d1, d2}, w, sq) == doctest::Approx(0.25 * 0.0 + 0.75 * 4.0));
  const MixCoefficient tau{0.25};
  CHECK(combined_empirical_risk(m, d1, d2, tau, sq) == doctest::Approx(0.25 * 4.0 + 0.75 * 0.0));
}

TEST_CASE("weighted least squares agrees with an independent descent oracle") {
  LinearGaussianDomainSpec spec;
  spec.input_dim = 3;
  spec.beta_mode = BetaMode::FixedAcrossSamples;
  const std::vector<Dataset> sources = {sample_linear_gaussian(spec, 40, 1),
                                        sample_linear_gaussian(spec, 60, 2)};
  const SimplexWeights w{{0.3, 0.7}};
  const LinearModel fit = fit_weighted_least_squares(sources, w);
  const Eigen::VectorXd oracle = descend_weighted(sources, w);
  CHECK((fit.coefficients - oracle).cwiseAbs().maxCoeff() < 1e-8);

  // First-order optimality: the normal-equation residual vanishes.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3);
  for (size_t k = 0; k < sources.size(); ++k) {
    const double c = w.w[k] / static_cast<double>(sources[k].rows());
    A += c * sources[k].features.transpose() * sources[k].features;
    b += c * sources[k].features.transpose() * sources[k].labels;
  }
  CHECK((A * fit.coefficients - b).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("noise-free data identifies the generating coefficients") {
  LinearGaussianDomainSpec spec;
  spec.input_dim = 4;
  spec.noise_std = 0.0;
  Eigen::VectorXd beta(4);
  beta << 1.5, -2.0, 0.0, 3.25;
  const Dataset ds = sample_linear_gaussian_with_beta(spec, 50, 99, beta);
  const LinearModel fit = fit_weighted_least_squares({ds}, SimplexWeights{{1.0}});
  CHECK((fit.coefficients - beta).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("two-part least squares reduces to each side at the tau extremes") {
  LinearGaussianDomainSpec spec;
  spec.input_dim = 2;
  const Dataset src = sample_linear_gaussian(spec, 30, 5);
  const Dataset tgt = sample_linear_gaussian(spec, 25, 6);
  const LinearModel at0 = fit_combined_least_squares(src, tgt, MixCoefficient{0.0});
  const LinearModel src_only = fit_weighted_least_squares({src}, SimplexWeights{{1.0}});
  CHECK((at0.coefficients - src_only.coefficients).cwiseAbs().maxCoeff() < 1e-12);
  const LinearModel at1 = fit_combined_least_squares(src, tgt, MixCoefficient{1.0});
  const LinearModel tgt_only = fit_weighted_least_squares({tgt}, SimplexWeights{{1.0}});
  CHECK((at1.coefficients - tgt_only.coefficients).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degenerate designs are rejected") {
  Dataset d;
  d.features = Eigen::MatrixXd(3, 2);
  d.features << 1, 1, 2, 2, 3, 3;  // duplicated column
  d.labels = Eigen::VectorXd(3);
  d.labels << 1, 2, 3;
  CHECK_THROWS_AS(fit_weighted_least_squares({d}, SimplexWeights{{1.0}}), validation_error);
}

TEST_CASE("risk argmin resolves ties to the lowest index") {
  CHECK(argmin_risk({3.0, 1.0, 2.0}) == 1);
  CHECK(argmin_risk({1.0, 1.0, 1.0}) == 0);
  CHECK(argmin_risk({5.0}) == 0);
  CHECK_THROWS_AS(argmin_risk({}), validation_error);
}

TEST_CASE("model CSV round trips and enforces its header") {
  const std::vector<LinearModel> models_in = {model({0.1, -2.5}), model({1e-17, 3.0})};
  const std::string text = models_csv(models_in);
  const std::vector<LinearModel> back = parse_models_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].coefficients == models_in[0].coefficients);
  CHECK(back[1].coefficients == models_in[1].coefficients);
  CHECK_THROWS_AS(parse_models_csv("wrong_0\n1\n"), validation_error);
  CHECK_THROWS_AS(parse_models_csv("theta_0,theta_1\n1\n"), validation_error);
  CHECK_THROWS_AS(parse_models_csv(""), validation_error);
}
