#pragma once

#include <string>

#include "dab/concentration.hpp"
#include "dab/config.hpp"
#include "dab/domains.hpp"
#include "dab/hypotheses.hpp"

namespace dab {

// Shared key=value schemas for domain-like objects, used by the command
// line tool and the experiment runner.  All keys are read under `prefix`.
//
// Linear-Gaussian keys: {p}input_dim, {p}x_mean, {p}x_std, {p}beta_mean,
// {p}beta_std, {p}noise_std, {p}beta_mode (per_sample | fixed).
LinearGaussianDomainSpec parse_linear_gaussian(Config& cfg, const std::string& prefix,
                                               const LinearGaussianDomainSpec& defaults);

// Finite-domain keys: {p}support (points separated by ';', coordinates by
// ',', last coordinate is the label: "0,1;1,-1" is two 1-d labeled points),
// {p}probabilities (comma list, sums to 1).
DiscreteDomain parse_discrete(Config& cfg, const std::string& prefix);

// Loss keys: loss (squared | absolute, default squared), clip (bool,
// default true), clip_lo / clip_hi (defaults 0 / 1).
LossFunction parse_loss(Config& cfg);

// Point-function key `f`: "label" evaluates to the point's label, "x<j>"
// to input coordinate j.
PointFn parse_point_fn(Config& cfg);

}  // namespace dab
