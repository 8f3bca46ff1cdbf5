#include "dab/domains.hpp"

#include <cmath>
#include <sstream>

#include "dab/csv.hpp"
#include "dab/errors.hpp"
#include "dab/rng.hpp"

namespace dab {

void LinearGaussianDomainSpec::validate() const {
  if (input_dim < 1) throw config_error("input_dim must be >= 1");
  if (!(x_std > 0.0) || !std::isfinite(x_std)) throw config_error("x_std must be positive and finite");
  if (!(beta_std >= 0.0) || !std::isfinite(beta_std)) throw config_error("beta_std must be >= 0 and finite");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw config_error("noise_std must be >= 0 and finite");
  if (!std::isfinite(x_mean) || !std::isfinite(beta_mean)) throw config_error("means must be finite");
}

void DiscreteDomain::validate() const {
  if (support.empty()) throw config_error("discrete domain needs at least one support point");
  if (support.size() != probabilities.size()) {
    throw config_error("discrete domain: support and probabilities sizes differ");
  }
  const size_t d = support.front().x.size();
  if (d == 0) throw config_error("discrete domain: support points need at least one coordinate");
  double sum = 0.0;
  for (size_t i = 0; i < support.size(); ++i) {
    if (support[i].x.size() != d) {
      throw config_error("discrete domain: support points have mixed dimensions");
    }
    const double p = probabilities[i];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw config_error("discrete domain: probabilities must be nonnegative and finite");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw config_error("discrete domain: probabilities sum to " + g17(sum) + ", expected 1 within 1e-12");
  }
}

int DiscreteDomain::input_dim() const {
  return static_cast<int>(support.front().x.size());
}

std::vector<double> DiscreteDomain::cumulative() const {
  std::vector<double> c(probabilities.size());
  double acc = 0.0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    c[i] = acc;
  }
  return c;
}

namespace {

Dataset make_dataset(long long n, int dim, const std::string& tag) {
  Dataset ds;
  ds.features.resize(n, dim);
  ds.labels.resize(n);
  ds.domain_tag = tag;
  return ds;
}

}  // namespace

Dataset sample_linear_gaussian(const LinearGaussianDomainSpec& spec, long long n, std::uint64_t seed) {
  spec.validate();
  if (n < 0) throw config_error("sample count must be >= 0");
  Rng rng(seed);
  Dataset ds = make_dataset(n, spec.input_dim, "linear_gaussian");
  Eigen::VectorXd beta(spec.input_dim);
  if (spec.beta_mode == BetaMode::FixedAcrossSamples) {
    for (int j = 0; j < spec.input_dim; ++j) beta[j] = rng.normal(spec.beta_mean, spec.beta_std);
  }
  for (long long i = 0; i < n; ++i) {
    for (int j = 0; j < spec.input_dim; ++j) ds.features(i, j) = rng.normal(spec.x_mean, spec.x_std);
    if (spec.beta_mode == BetaMode::PerSample) {
      for (int j = 0; j < spec.input_dim; ++j) beta[j] = rng.normal(spec.beta_mean, spec.beta_std);
    }
    ds.labels[i] = ds.features.row(i).dot(beta) + rng.normal(0.0, spec.noise_std);
  }
  return ds;
}

Dataset sample_linear_gaussian_with_beta(const LinearGaussianDomainSpec& spec, long long n,
                                         std::uint64_t seed, const Eigen::VectorXd& beta) {
  spec.validate();
  if (n < 0) throw config_error("sample count must be >= 0");
  if (beta.size() != spec.input_dim) {
    throw validation_error("coefficient vector length does not match input_dim");
  }
  Rng rng(seed);
  Dataset ds = make_dataset(n, spec.input_dim, "linear_gaussian");
  for (long long i = 0; i < n; ++i) {
    for (int j = 0; j < spec.input_dim; ++j) ds.features(i, j) = rng.normal(spec.x_mean, spec.x_std);
    ds.labels[i] = ds.features.row(i).dot(beta) + rng.normal(0.0, spec.noise_std);
  }
  return ds;
}

Dataset sample_discrete(const DiscreteDomain& domain, long long n, std::uint64_t seed) {
  domain.validate();
  if (n < 0) throw config_error("sample count must be >= 0");
  Rng rng(seed);
  const auto cum = domain.cumulative();
  Dataset ds = make_dataset(n, domain.input_dim(), "discrete");
  for (long long i = 0; i < n; ++i) {
    const int idx = rng.pick_index(cum.data(), static_cast<int>(cum.size()));
    const SupportPoint& p = domain.support[idx];
    for (size_t j = 0; j < p.x.size(); ++j) ds.features(i, static_cast<int>(j)) = p.x[j];
    ds.labels[i] = p.y;
  }
  return ds;
}

double exact_expectation(const DiscreteDomain& domain,
                         const std::function<double(const SupportPoint&)>& f) {
  domain.validate();
  double acc = 0.0;
  for (size_t i = 0; i < domain.support.size(); ++i) {
    acc += domain.probabilities[i] * f(domain.support[i]);
  }
  return acc;
}

std::string dataset_csv(const Dataset& ds) {
  std::ostringstream out;
  for (int j = 0; j < ds.dim(); ++j) out << "x_" << j << ",";
  out << "y\n";
  for (long long i = 0; i < ds.rows(); ++i) {
    for (int j = 0; j < ds.dim(); ++j) out << g17(ds.features(i, j)) << ",";
    out << g17(ds.labels[i]) << "\n";
  }
  return out.str();
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  write_text_file(path, dataset_csv(ds));
}

Dataset parse_dataset_csv(const std::string& text, const std::string& tag) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw validation_error("dataset CSV: empty input");
  const auto header = split(trim(line), ',');
  if (header.size() < 2 || header.back() != "y") {
    throw validation_error("dataset CSV: expected header x_0,...,y");
  }
  const int dim = static_cast<int>(header.size()) - 1;
  for (int j = 0; j < dim; ++j) {
    if (header[j] != "x_" + std::to_string(j)) {
      throw validation_error("dataset CSV: unexpected header column '" + header[j] + "'");
    }
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto fields = split(t, ',');
    if (static_cast<int>(fields.size()) != dim + 1) {
      throw validation_error("dataset CSV: row with " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(dim + 1));
    }
    std::vector<double> row(dim + 1);
    for (int j = 0; j <= dim; ++j) {
      try {
        row[j] = parse_double(fields[j], "dataset CSV field");
      } catch (const config_error& e) {
        throw validation_error(e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  Dataset ds = make_dataset(static_cast<long long>(rows.size()), dim, tag);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < dim; ++j) ds.features(static_cast<long long>(i), j) = rows[i][j];
    ds.labels[static_cast<long long>(i)] = rows[i][dim];
  }
  return ds;
}

Dataset read_dataset_csv(const std::string& path) {
  return parse_dataset_csv(read_text_file(path), path);
}

}  // namespace dab
