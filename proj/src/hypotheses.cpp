#include "dab/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dab/csv.hpp"
#include "dab/errors.hpp"

namespace dab {

void LossFunction::validate() const {
  if (clip && !(clip->lo < clip->hi)) {
    throw config_error("loss clip range must satisfy lo < hi");
  }
  if (clip && (!std::isfinite(clip->lo) || !std::isfinite(clip->hi))) {
    throw config_error("loss clip range must be finite");
  }
}

double LossFunction::operator()(double prediction, double label) const {
  double v = 0.0;
  switch (kind) {
    case LossKind::Squared: {
      const double d = prediction - label;
      v = d * d;
      break;
    }
    case LossKind::Absolute:
      v = std::abs(prediction - label);
      break;
  }
  if (clip) v = std::clamp(v, clip->lo, clip->hi);
  return v;
}

double LossFunction::lo() const {
  if (!clip) throw validation_error("loss range requested but loss is unclipped");
  return clip->lo;
}

double LossFunction::hi() const {
  if (!clip) throw validation_error("loss range requested but loss is unclipped");
  return clip->hi;
}

double LossFunction::range_width() const { return hi() - lo(); }

void LinearModel::validate() const {
  if (coefficients.size() == 0) throw validation_error("linear model has no coefficients");
  for (Eigen::Index j = 0; j < coefficients.size(); ++j) {
    if (!std::isfinite(coefficients[j])) throw validation_error("linear model coefficient is not finite");
  }
}

double LinearModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != coefficients.size()) {
    throw validation_error("predict: input dimension does not match model");
  }
  return coefficients.dot(x);
}

void SimplexWeights::validate() const {
  if (w.empty()) throw config_error("weights must be nonempty");
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw config_error("weights must be nonnegative and finite");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw config_error("weights sum to " + g17(sum) + ", expected 1 within 1e-12");
  }
}

void MixCoefficient::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw config_error("tau must lie in [0, 1]");
}

void FiniteFunctionClass::validate() const {
  if (hypotheses.empty()) throw validation_error("function class needs at least one hypothesis");
  loss.validate();
  if (!loss.bounded()) {
    throw validation_error("function class requires a clipped loss (bounded value range)");
  }
  const Eigen::Index d = hypotheses.front().coefficients.size();
  for (const auto& h : hypotheses) {
    h.validate();
    if (h.coefficients.size() != d) {
      throw validation_error("function class hypotheses have mixed dimensions");
    }
  }
}

int FiniteFunctionClass::dim() const {
  return static_cast<int>(hypotheses.front().coefficients.size());
}

double FiniteFunctionClass::eval(int j, const Eigen::Ref<const Eigen::VectorXd>& x, double y) const {
  return loss(hypotheses[static_cast<size_t>(j)].predict(x), y);
}

double FiniteFunctionClass::eval(int j, const SupportPoint& z) const {
  const Eigen::Map<const Eigen::VectorXd> x(z.x.data(), static_cast<Eigen::Index>(z.x.size()));
  return loss(hypotheses[static_cast<size_t>(j)].coefficients.dot(x), z.y);
}

EvaluationMatrix EvaluationMatrix::from_class(const FiniteFunctionClass& cls, const Dataset& data) {
  cls.validate();
  if (data.rows() == 0) throw validation_error("evaluation matrix: empty dataset");
  if (data.dim() != cls.dim()) {
    throw validation_error("evaluation matrix: dataset dimension does not match hypotheses");
  }
  EvaluationMatrix m;
  m.lo = cls.loss.lo();
  m.hi = cls.loss.hi();
  m.values.resize(cls.size(), data.rows());
  for (int j = 0; j < cls.size(); ++j) {
    for (long long i = 0; i < data.rows(); ++i) {
      m.values(j, i) = cls.eval(j, data.features.row(i).transpose(), data.labels[i]);
    }
  }
  return m;
}

EvaluationMatrix EvaluationMatrix::from_raw(Eigen::MatrixXd values, double lo, double hi) {
  if (!(lo < hi)) throw validation_error("evaluation matrix: lo must be < hi");
  if (values.rows() == 0 || values.cols() == 0) {
    throw validation_error("evaluation matrix: empty value matrix");
  }
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      const double v = values(r, c);
      if (!(v >= lo && v <= hi)) {
        throw validation_error("evaluation matrix: value outside [lo, hi]");
      }
    }
  }
  EvaluationMatrix m;
  m.values = std::move(values);
  m.lo = lo;
  m.hi = hi;
  return m;
}

double empirical_risk(const LinearModel& model, const Dataset& data, const LossFunction& loss) {
  model.validate();
  loss.validate();
  if (data.rows() == 0) throw validation_error("empirical risk over an empty dataset");
  if (data.dim() != model.coefficients.size()) {
    throw validation_error("empirical risk: dataset dimension does not match model");
  }
  double acc = 0.0;
  for (long long i = 0; i < data.rows(); ++i) {
    acc += loss(model.coefficients.dot(data.features.row(i)), data.labels[i]);
  }
  return acc / static_cast<double>(data.rows());
}

double weighted_empirical_risk(const LinearModel& model, const std::vector<Dataset>& sources,
                               const SimplexWeights& weights, const LossFunction& loss) {
  weights.validate();
  if (static_cast<int>(sources.size()) != weights.k()) {
    throw validation_error("weighted risk: weight count does not match source count");
  }
  double acc = 0.0;
  for (size_t k = 0; k < sources.size(); ++k) {
    acc += weights.w[k] * empirical_risk(model, sources[k], loss);
  }
  return acc;
}

double combined_empirical_risk(const LinearModel& model, const Dataset& source,
                               const Dataset& target, const MixCoefficient& mix,
                               const LossFunction& loss) {
  mix.validate();
  return mix.tau * empirical_risk(model, target, loss) +
         (1.0 - mix.tau) * empirical_risk(model, source, loss);
}

namespace {

// Solves A theta = rhs where A is symmetric PSD, rejecting ill conditioned
// systems instead of returning garbage.
LinearModel solve_normal_equations(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) {
    throw validation_error("least squares: eigen decomposition failed");
  }
  const double lmax = es.eigenvalues().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  if (!(lmax > 0.0) || lmin <= 0.0 || lmax / lmin > 1e12) {
    throw validation_error("least squares: degenerate design (condition estimate > 1e12)");
  }
  LinearModel m;
  m.coefficients = es.eigenvectors() *
                   (es.eigenvectors().transpose() * rhs).cwiseQuotient(es.eigenvalues());
  return m;
}

}  // namespace

LinearModel fit_weighted_least_squares(const std::vector<Dataset>& sources,
                                       const SimplexWeights& weights) {
  weights.validate();
  if (sources.empty() || static_cast<int>(sources.size()) != weights.k()) {
    throw validation_error("weighted fit: weight count does not match source count");
  }
  const int dim = sources.front().dim();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  for (size_t k = 0; k < sources.size(); ++k) {
    const Dataset& d = sources[k];
    if (d.rows() == 0) throw validation_error("weighted fit: empty source dataset");
    if (d.dim() != dim) throw validation_error("weighted fit: sources have mixed dimensions");
    const double c = weights.w[k] / static_cast<double>(d.rows());
    a.noalias() += c * (d.features.transpose() * d.features);
    rhs.noalias() += c * (d.features.transpose() * d.labels);
  }
  return solve_normal_equations(a, rhs);
}

LinearModel fit_combined_least_squares(const Dataset& source, const Dataset& target,
                                       const MixCoefficient& mix) {
  mix.validate();
  if (source.rows() == 0 || target.rows() == 0) {
    throw validation_error("combined fit: empty dataset");
  }
  if (source.dim() != target.dim()) {
    throw validation_error("combined fit: source and target dimensions differ");
  }
  const double cs = (1.0 - mix.tau) / static_cast<double>(source.rows());
  const double ct = mix.tau / static_cast<double>(target.rows());
  Eigen::MatrixXd a = cs * (source.features.transpose() * source.features) +
                      ct * (target.features.transpose() * target.features);
  Eigen::VectorXd rhs = cs * (source.features.transpose() * source.labels) +
                        ct * (target.features.transpose() * target.labels);
  return solve_normal_equations(a, rhs);
}

int argmin_risk(const std::vector<double>& risks) {
  if (risks.empty()) throw validation_error("argmin over an empty risk list");
  int best = 0;
  for (int i = 1; i < static_cast<int>(risks.size()); ++i) {
    if (risks[static_cast<size_t>(i)] < risks[static_cast<size_t>(best)]) best = i;
  }
  return best;
}

std::string models_csv(const std::vector<LinearModel>& models) {
  if (models.empty()) throw validation_error("models CSV: no models");
  const Eigen::Index dim = models.front().coefficients.size();
  std::ostringstream out;
  for (Eigen::Index j = 0; j < dim; ++j) {
    out << "theta_" << j << (j + 1 < dim ? "," : "\n");
  }
  for (const auto& m : models) {
    m.validate();
    if (m.coefficients.size() != dim) throw validation_error("models CSV: mixed dimensions");
    for (Eigen::Index j = 0; j < dim; ++j) {
      out << g17(m.coefficients[j]) << (j + 1 < dim ? "," : "\n");
    }
  }
  return out.str();
}

void write_models_csv(const std::vector<LinearModel>& models, const std::string& path) {
  write_text_file(path, models_csv(models));
}

std::vector<LinearModel> parse_models_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw validation_error("models CSV: empty input");
  const auto header = split(trim(line), ',');
  const int dim = static_cast<int>(header.size());
  for (int j = 0; j < dim; ++j) {
    if (header[j] != "theta_" + std::to_string(j)) {
      throw validation_error("models CSV: unexpected header column '" + header[j] + "'");
    }
  }
  std::vector<LinearModel> models;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto fields = split(t, ',');
    if (static_cast<int>(fields.size()) != dim) {
      throw validation_error("models CSV: row width does not match header");
    }
    LinearModel m;
    m.coefficients.resize(dim);
    for (int j = 0; j < dim; ++j) {
      try {
        m.coefficients[j] = parse_double(fields[j], "models CSV field");
      } catch (const config_error& e) {
        throw validation_error(e.what());
      }
    }
    models.push_back(std::move(m));
  }
  if (models.empty()) throw validation_error("models CSV: no model rows");
  return models;
}

std::vector<LinearModel> read_models_csv(const std::string& path) {
  return parse_models_csv(read_text_file(path));
}

}  // namespace dab
