#include "dab/parsing.hpp"

#include "dab/csv.hpp"
#include "dab/errors.hpp"

namespace dab {

LinearGaussianDomainSpec parse_linear_gaussian(Config& cfg, const std::string& prefix,
                                               const LinearGaussianDomainSpec& defaults) {
  LinearGaussianDomainSpec s = defaults;
  s.input_dim = static_cast<int>(cfg.get_int(prefix + "input_dim", s.input_dim));
  s.x_mean = cfg.get_double(prefix + "x_mean", s.x_mean);
  s.x_std = cfg.get_double(prefix + "x_std", s.x_std);
  s.beta_mean = cfg.get_double(prefix + "beta_mean", s.beta_mean);
  s.beta_std = cfg.get_double(prefix + "beta_std", s.beta_std);
  s.noise_std = cfg.get_double(prefix + "noise_std", s.noise_std);
  const std::string mode =
      cfg.get_string(prefix + "beta_mode",
                     s.beta_mode == BetaMode::PerSample ? "per_sample" : "fixed");
  if (mode == "per_sample") {
    s.beta_mode = BetaMode::PerSample;
  } else if (mode == "fixed") {
    s.beta_mode = BetaMode::FixedAcrossSamples;
  } else {
    throw config_error(prefix + "beta_mode must be per_sample or fixed, got '" + mode + "'");
  }
  s.validate();
  return s;
}

DiscreteDomain parse_discrete(Config& cfg, const std::string& prefix) {
  DiscreteDomain d;
  const std::string support = cfg.get_string(prefix + "support");
  for (const auto& piece : split(support, ';')) {
    const auto coords = split(piece, ',');
    if (coords.size() < 2) {
      throw config_error(prefix + "support: each point needs at least one input and a label");
    }
    SupportPoint p;
    for (size_t i = 0; i + 1 < coords.size(); ++i) {
      p.x.push_back(parse_double(coords[i], prefix + "support"));
    }
    p.y = parse_double(coords.back(), prefix + "support");
    d.support.push_back(std::move(p));
  }
  for (const auto& piece : split(cfg.get_string(prefix + "probabilities"), ',')) {
    d.probabilities.push_back(parse_double(piece, prefix + "probabilities"));
  }
  d.validate();
  return d;
}

LossFunction parse_loss(Config& cfg) {
  LossFunction loss;
  const std::string kind = cfg.get_string("loss", "squared");
  if (kind == "squared") {
    loss.kind = LossKind::Squared;
  } else if (kind == "absolute") {
    loss.kind = LossKind::Absolute;
  } else {
    throw config_error("loss must be squared or absolute, got '" + kind + "'");
  }
  if (cfg.get_bool("clip", true)) {
    loss.clip = ClipRange{cfg.get_double("clip_lo", 0.0), cfg.get_double("clip_hi", 1.0)};
  }
  loss.validate();
  return loss;
}

PointFn parse_point_fn(Config& cfg) {
  const std::string f = cfg.get_string("f", "label");
  if (f == "label") {
    return [](const SupportPoint& z) { return z.y; };
  }
  if (f.size() > 1 && f[0] == 'x') {
    const long long j = parse_int(f.substr(1), "f");
    if (j < 0) throw config_error("f: coordinate index must be >= 0");
    return [j](const SupportPoint& z) {
      if (j >= static_cast<long long>(z.x.size())) {
        throw validation_error("f: coordinate index out of range");
      }
      return z.x[static_cast<size_t>(j)];
    };
  }
  throw config_error("f must be 'label' or 'x<j>', got '" + f + "'");
}

}  // namespace dab
