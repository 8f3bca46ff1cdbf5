#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "dab/bounds.hpp"
#include "dab/complexity.hpp"
#include "dab/concentration.hpp"
#include "dab/config.hpp"
#include "dab/csv.hpp"
#include "dab/divergences.hpp"
#include "dab/domains.hpp"
#include "dab/errors.hpp"
#include "dab/experiments.hpp"
#include "dab/hypotheses.hpp"
#include "dab/parallel.hpp"
#include "dab/parsing.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::string seed;
  int threads = 1;
  bool verbose = false;
};

void add_common(CLI::App* sub, CommonArgs& c) {
  sub->add_option("--config", c.config, "key=value configuration file")->required();
  sub->add_option("--out", c.out, "output file (stdout when omitted)");
  sub->add_option("--seed", c.seed, "seed override (unsigned 64-bit, wins over the config)");
  sub->add_option("--threads", c.threads, "worker thread count (default 1)");
  sub->add_flag("--verbose", c.verbose, "diagnostic logging to stderr");
}

dab::Config load_config(const CommonArgs& c) {
  dab::Config cfg = dab::Config::from_file(c.config);
  if (!c.seed.empty()) {
    (void)dab::parse_u64(c.seed, "--seed");
    cfg.set("seed", c.seed);
  }
  dab::set_thread_count(c.threads);
  if (c.verbose) std::cerr << "config loaded from " << c.config << "\n";
  return cfg;
}

// Primary artifact goes to --out when given, stdout otherwise.  `summary`
// (may be empty) goes to stdout when the artifact went to a file.
void emit(const CommonArgs& c, const std::string& artifact, const std::string& summary) {
  if (c.out.empty()) {
    std::cout << artifact;
  } else {
    dab::write_text_file(c.out, artifact);
    std::cout << summary;
  }
}

dab::SimplexWeights weights_from(dab::Config& cfg, const std::string& key = "weights") {
  dab::SimplexWeights w;
  w.w = cfg.get_double_list(key);
  w.validate();
  return w;
}

dab::LinearModel model_from_list(const std::vector<double>& coefs) {
  dab::LinearModel m;
  m.coefficients = Eigen::Map<const Eigen::VectorXd>(coefs.data(), static_cast<Eigen::Index>(coefs.size()));
  m.validate();
  return m;
}

dab::NormSpec norm_from(dab::Config& cfg) {
  dab::NormSpec norm;
  const std::string kind = cfg.get_string("norm", "block_weighted");
  if (kind == "block_weighted") {
    norm.kind = dab::NormKind::BlockWeightedL1;
    norm.weights = weights_from(cfg);
  } else if (kind == "mix_weighted") {
    norm.kind = dab::NormKind::MixWeightedL1;
    norm.mix.tau = cfg.get_double("tau");
  } else {
    throw dab::config_error("norm must be block_weighted or mix_weighted, got '" + kind + "'");
  }
  norm.block_sizes = cfg.get_int_list("block_sizes");
  norm.validate();
  return norm;
}

dab::BlockDomain block_domain_from(dab::Config& cfg, const std::string& prefix) {
  const std::string kind = cfg.get_string(prefix + "kind", "discrete");
  if (kind == "discrete") return dab::parse_discrete(cfg, prefix);
  if (kind == "linear_gaussian") {
    return dab::parse_linear_gaussian(cfg, prefix, dab::LinearGaussianDomainSpec{});
  }
  throw dab::config_error(prefix + "kind must be discrete or linear_gaussian, got '" + kind + "'");
}

int count_prefixed_domains(const dab::Config& cfg, const std::string& stem) {
  int k = 0;
  while (cfg.has(stem + std::to_string(k + 1) + "_support") ||
         cfg.has(stem + std::to_string(k + 1) + "_kind")) {
    ++k;
  }
  if (k == 0) throw dab::config_error("expected at least one domain under prefix '" + stem + "1_'");
  return k;
}

void cmd_gen(dab::Config& cfg, const CommonArgs& c) {
  const std::string kind = cfg.get_string("kind");
  const long long n = cfg.get_int("n");
  const std::uint64_t seed = cfg.get_u64("seed", 0);
  dab::Dataset ds;
  if (kind == "linear_gaussian") {
    ds = dab::sample_linear_gaussian(dab::parse_linear_gaussian(cfg, "", {}), n, seed);
  } else if (kind == "discrete") {
    ds = dab::sample_discrete(dab::parse_discrete(cfg, ""), n, seed);
  } else {
    throw dab::config_error("kind must be linear_gaussian or discrete, got '" + kind + "'");
  }
  cfg.require_all_consumed();
  emit(c, dab::dataset_csv(ds), "rows=" + std::to_string(ds.rows()) + "\n");
}

void cmd_fit(dab::Config& cfg, const CommonArgs& c) {
  const std::string mode = cfg.get_string("mode");
  dab::LinearModel model;
  if (mode == "weighted") {
    std::vector<dab::Dataset> sources;
    for (const auto& path : dab::split(cfg.get_string("sources"), ';')) {
      sources.push_back(dab::read_dataset_csv(dab::trim(path)));
    }
    model = dab::fit_weighted_least_squares(sources, weights_from(cfg));
  } else if (mode == "combined") {
    const dab::Dataset src = dab::read_dataset_csv(cfg.get_string("source"));
    const dab::Dataset tgt = dab::read_dataset_csv(cfg.get_string("target"));
    dab::MixCoefficient mix{cfg.get_double("tau")};
    model = dab::fit_combined_least_squares(src, tgt, mix);
  } else {
    throw dab::config_error("mode must be weighted or combined, got '" + mode + "'");
  }
  cfg.require_all_consumed();
  emit(c, dab::models_csv({model}), "coefficients=" + std::to_string(model.coefficients.size()) + "\n");
}

void cmd_divergence(dab::Config& cfg, const CommonArgs& c) {
  const auto hyps = dab::read_models_csv(cfg.get_string("hypotheses"));
  const dab::LossFunction loss = dab::parse_loss(cfg);
  const dab::LabelingFn gs = dab::linear_labeling(model_from_list(cfg.get_double_list("gs")));
  const dab::LabelingFn gt = dab::linear_labeling(model_from_list(cfg.get_double_list("gt")));
  dab::DivergenceReport report;
  if (cfg.has("s_support")) {
    const dab::DiscreteDomain s = dab::parse_discrete(cfg, "s_");
    const dab::DiscreteDomain t = dab::parse_discrete(cfg, "t_");
    report = dab::divergence_report(hyps, loss, s, t, gs, gt);
  } else {
    const dab::Dataset s = dab::read_dataset_csv(cfg.get_string("s_data"));
    const dab::Dataset t = dab::read_dataset_csv(cfg.get_string("t_data"));
    report = dab::divergence_report_empirical(hyps, loss, s, t, gs, gt);
  }
  cfg.require_all_consumed();
  emit(c, dab::to_kv(report), "");
}

void cmd_complexity(dab::Config& cfg, const CommonArgs& c) {
  const std::string op = cfg.get_string("op");
  std::string artifact;
  if (op == "covering") {
    const dab::FiniteFunctionClass cls{dab::read_models_csv(cfg.get_string("hypotheses")),
                                       dab::parse_loss(cfg)};
    const dab::Dataset data = dab::read_dataset_csv(cfg.get_string("data"));
    const dab::NormSpec norm = norm_from(cfg);
    const double xi = cfg.get_double("xi");
    const long long cover = dab::covering_number_greedy(
        dab::EvaluationMatrix::from_class(cls, data), xi, norm);
    artifact = "covering_number=" + std::to_string(cover) + "\nln_covering=" +
               dab::g17(std::log(static_cast<double>(cover))) + "\n";
  } else if (op == "uen") {
    const dab::FiniteFunctionClass cls{dab::read_models_csv(cfg.get_string("hypotheses")),
                                       dab::parse_loss(cfg)};
    const dab::NormSpec norm = norm_from(cfg);
    std::vector<dab::BlockDomain> domains;
    for (size_t k = 0; k < norm.block_sizes.size(); ++k) {
      domains.push_back(block_domain_from(cfg, "block" + std::to_string(k + 1) + "_"));
    }
    const double value = dab::uniform_entropy_estimate(
        cls, domains, norm, cfg.get_double("xi"),
        static_cast<int>(cfg.get_int("realizations", 20)), cfg.get_u64("seed", 0));
    artifact = "ln_uen=" + dab::g17(value) + "\n";
  } else if (op == "rademacher_empirical") {
    const dab::FiniteFunctionClass cls{dab::read_models_csv(cfg.get_string("hypotheses")),
                                       dab::parse_loss(cfg)};
    const dab::Dataset data = dab::read_dataset_csv(cfg.get_string("data"));
    const dab::RademacherEstimate est = dab::rademacher_empirical(
        dab::EvaluationMatrix::from_class(cls, data), cfg.get_int("mc_trials", 10000),
        cfg.get_u64("seed", 0));
    artifact = "value=" + dab::g17(est.value) + "\nstd_error=" + dab::g17(est.std_error) +
               "\nmc_trials=" + std::to_string(est.mc_trials) + "\nmode=empirical_fixed_sample\n";
  } else if (op == "rademacher_expected") {
    const dab::FiniteFunctionClass cls{dab::read_models_csv(cfg.get_string("hypotheses")),
                                       dab::parse_loss(cfg)};
    const dab::BlockDomain domain = block_domain_from(cfg, "domain_");
    const dab::RademacherEstimate est = dab::rademacher_expected(
        cls, domain, cfg.get_int("n"), static_cast<int>(cfg.get_int("outer_trials", 50)),
        cfg.get_int("inner_trials", 10000), cfg.get_u64("seed", 0));
    artifact = "value=" + dab::g17(est.value) + "\nstd_error=" + dab::g17(est.std_error) +
               "\nmc_trials=" + std::to_string(est.mc_trials) + "\nmode=expected_over_data\n";
  } else {
    throw dab::config_error(
        "op must be covering, uen, rademacher_empirical or rademacher_expected, got '" + op + "'");
  }
  cfg.require_all_consumed();
  emit(c, artifact, "");
}

void cmd_bound(dab::Config& cfg, const CommonArgs& c) {
  const std::string theorem = cfg.get_string("theorem");
  std::string artifact;
  if (theorem == "multi_uen") {
    const dab::BoundReport r = dab::bound_multi_uen(
        cfg.get_double("d"), cfg.get_double("ln_uen"), weights_from(cfg), cfg.get_int_list("ns"),
        cfg.get_double("range_width"), cfg.get_double("epsilon"));
    artifact = dab::to_kv(r);
  } else if (theorem == "multi_rademacher") {
    const dab::BoundReport r = dab::bound_multi_rademacher(
        cfg.get_double("d"), cfg.get_double_list("rademachers"), weights_from(cfg),
        cfg.get_int_list("ns"), cfg.get_double("range_width"), cfg.get_double("epsilon"));
    artifact = dab::to_kv(r);
  } else if (theorem == "combined_uen") {
    const dab::BoundReport r = dab::bound_combined_uen(
        cfg.get_double("d"), cfg.get_double("ln_uen"), dab::MixCoefficient{cfg.get_double("tau")},
        cfg.get_int("n_s"), cfg.get_int("n_t"), cfg.get_double("range_width"),
        cfg.get_double("epsilon"));
    artifact = dab::to_kv(r);
  } else if (theorem == "combined_rademacher") {
    const dab::BoundReport r = dab::bound_combined_rademacher(
        cfg.get_double("d"), cfg.get_double("r_source"), cfg.get_double("r_target"),
        dab::MixCoefficient{cfg.get_double("tau")}, cfg.get_int("n_s"), cfg.get_int("n_t"),
        cfg.get_double("range_width"), cfg.get_double("epsilon"));
    artifact = dab::to_kv(r);
  } else if (theorem == "classical_uen") {
    const dab::BoundReport r =
        dab::bound_classical_uen(cfg.get_double("ln_uen"), cfg.get_int("n"),
                                 cfg.get_double("range_width"), cfg.get_double("epsilon"));
    artifact = dab::to_kv(r);
  } else if (theorem == "classical_rademacher") {
    const dab::BoundReport r =
        dab::bound_classical_rademacher(cfg.get_double("r"), cfg.get_int("n"),
                                        cfg.get_double("range_width"), cfg.get_double("epsilon"));
    artifact = dab::to_kv(r);
  } else if (theorem == "optimal_weights") {
    const dab::SimplexWeights w = dab::optimal_weights(cfg.get_int_list("ns"));
    std::string s;
    for (size_t k = 0; k < w.w.size(); ++k) {
      s += "w_" + std::to_string(k) + "=" + dab::g17(w.w[k]) + "\n";
    }
    artifact = s;
  } else if (theorem == "optimal_tau") {
    artifact = "tau=" + dab::g17(dab::optimal_tau(cfg.get_int("n_s"), cfg.get_int("n_t"))) + "\n";
  } else if (theorem == "convergence_multi" || theorem == "convergence_combined") {
    // steps: ';'-separated entries, each "ln_uen:n_1:...:n_K".
    const std::string steps_text = cfg.get_string("steps");
    bool bounded = false;
    if (theorem == "convergence_multi") {
      std::vector<dab::ConvergenceStepMulti> steps;
      for (const auto& entry : dab::split(steps_text, ';')) {
        const auto fields = dab::split(entry, ':');
        if (fields.size() < 2) throw dab::config_error("steps: each entry needs ln_uen and sizes");
        dab::ConvergenceStepMulti s;
        s.ln_uen = dab::parse_double(fields[0], "steps");
        for (size_t i = 1; i < fields.size(); ++i) s.ns.push_back(dab::parse_int(fields[i], "steps"));
        steps.push_back(std::move(s));
      }
      std::optional<dab::SimplexWeights> w;
      if (cfg.has("weights")) w = weights_from(cfg);
      bounded = dab::convergence_bounded_multi(steps, w, cfg.get_double("range_width"));
    } else {
      std::vector<dab::ConvergenceStepCombined> steps;
      for (const auto& entry : dab::split(steps_text, ';')) {
        const auto fields = dab::split(entry, ':');
        if (fields.size() != 3) throw dab::config_error("steps: each entry needs ln_uen:n_s:n_t");
        steps.push_back({dab::parse_double(fields[0], "steps"), dab::parse_int(fields[1], "steps"),
                         dab::parse_int(fields[2], "steps")});
      }
      std::optional<double> tau;
      if (cfg.has("tau")) tau = cfg.get_double("tau");
      bounded = dab::convergence_bounded_combined(steps, tau, cfg.get_double("range_width"));
    }
    artifact = std::string("bounded=") + (bounded ? "true" : "false") + "\n";
  } else {
    throw dab::config_error("unknown theorem '" + theorem + "'");
  }
  cfg.require_all_consumed();
  emit(c, artifact, "");
}

void cmd_verify(dab::Config& cfg, const CommonArgs& c) {
  const std::string verifier = cfg.get_string("verifier");
  if (verifier == "deviation_multi" || verifier == "mcdiarmid") {
    const int kk = count_prefixed_domains(cfg, "s");
    std::vector<dab::DiscreteDomain> sources;
    for (int k = 1; k <= kk; ++k) {
      sources.push_back(dab::parse_discrete(cfg, "s" + std::to_string(k) + "_"));
    }
    const dab::SimplexWeights w = weights_from(cfg);
    const std::vector<long long> ns = cfg.get_int_list("ns");
    const dab::PointFn f = dab::parse_point_fn(cfg);
    const double lo = cfg.get_double("lo");
    const double hi = cfg.get_double("hi");
    const std::vector<double> grid = cfg.get_double_list("xi_grid");
    const long long trials = cfg.get_int("mc_trials");
    const std::uint64_t seed = cfg.get_u64("seed", 0);
    dab::TailCurve curve;
    if (verifier == "deviation_multi") {
      curve = dab::verify_deviation_multi(f, lo, hi, sources, w, ns, grid, trials, seed);
    } else {
      // Weighted-mean statistic with its exact per-coordinate certificate.
      std::vector<std::vector<double>> cert(sources.size());
      for (size_t k = 0; k < sources.size(); ++k) {
        cert[k].assign(static_cast<size_t>(ns[k]), (hi - lo) * w.w[k] / static_cast<double>(ns[k]));
      }
      const dab::BlockStatFn h = [&f, &w](const dab::BlockSample& sample) {
        double acc = 0.0;
        for (size_t k = 0; k < sample.size(); ++k) {
          double mean = 0.0;
          for (const auto& z : sample[k]) mean += f(z);
          acc += w.w[k] * mean / static_cast<double>(sample[k].size());
        }
        return acc;
      };
      curve = dab::verify_mcdiarmid_generalized(h, cert, sources, ns, grid, trials, seed);
    }
    cfg.require_all_consumed();
    emit(c, dab::tailcurve_csv(curve), dab::to_kv(curve));
  } else if (verifier == "deviation_combined") {
    const dab::DiscreteDomain source = dab::parse_discrete(cfg, "s_");
    const dab::DiscreteDomain target = dab::parse_discrete(cfg, "t_");
    const dab::TailCurve curve = dab::verify_deviation_combined(
        dab::parse_point_fn(cfg), cfg.get_double("lo"), cfg.get_double("hi"), source, target,
        dab::MixCoefficient{cfg.get_double("tau")}, cfg.get_int("n_s"), cfg.get_int("n_t"),
        cfg.get_double_list("xi_grid"), cfg.get_int("mc_trials"), cfg.get_u64("seed", 0));
    cfg.require_all_consumed();
    emit(c, dab::tailcurve_csv(curve), dab::to_kv(curve));
  } else if (verifier == "symmetrization_multi") {
    const dab::FiniteFunctionClass cls{dab::read_models_csv(cfg.get_string("hypotheses")),
                                       dab::parse_loss(cfg)};
    const int kk = count_prefixed_domains(cfg, "s");
    std::vector<dab::DiscreteDomain> sources;
    for (int k = 1; k <= kk; ++k) {
      sources.push_back(dab::parse_discrete(cfg, "s" + std::to_string(k) + "_"));
    }
    const dab::DiscreteDomain target = dab::parse_discrete(cfg, "t_");
    const dab::SymmetrizationResult r = dab::verify_symmetrization_multi(
        cls, sources, target, weights_from(cfg), cfg.get_int_list("ns"), cfg.get_double("xi"),
        cfg.get_int("mc_trials"), cfg.get_u64("seed", 0));
    cfg.require_all_consumed();
    emit(c, dab::to_kv(r), "");
  } else if (verifier == "symmetrization_combined") {
    const dab::FiniteFunctionClass cls{dab::read_models_csv(cfg.get_string("hypotheses")),
                                       dab::parse_loss(cfg)};
    const dab::DiscreteDomain source = dab::parse_discrete(cfg, "s_");
    const dab::DiscreteDomain target = dab::parse_discrete(cfg, "t_");
    const dab::SymmetrizationResult r = dab::verify_symmetrization_combined(
        cls, source, target, dab::MixCoefficient{cfg.get_double("tau")}, cfg.get_int("n_s"),
        cfg.get_int("n_t"), cfg.get_double("xi"), cfg.get_int("mc_trials"), cfg.get_u64("seed", 0));
    cfg.require_all_consumed();
    emit(c, dab::to_kv(r), "");
  } else {
    throw dab::config_error("unknown verifier '" + verifier + "'");
  }
}

void cmd_experiment(dab::Config& cfg, const CommonArgs& c) {
  const dab::ExperimentConfig ec = dab::parse_experiment_config(cfg);
  cfg.require_all_consumed();
  const dab::ExperimentResult result = dab::run_experiment(ec);
  emit(c, dab::experiment_csv(result), "rows=" + std::to_string(result.rows.size()) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain-adaptation bound toolkit"};
  app.require_subcommand(1);

  CommonArgs gen_args, fit_args, div_args, comp_args, bound_args, verify_args, exp_args;
  CLI::App* sub_gen = app.add_subcommand("gen", "sample a dataset from a domain spec");
  add_common(sub_gen, gen_args);
  CLI::App* sub_fit = app.add_subcommand("fit", "least squares fits over one or more datasets");
  add_common(sub_fit, fit_args);
  CLI::App* sub_div = app.add_subcommand("divergence", "divergence quantities between two domains");
  add_common(sub_div, div_args);
  CLI::App* sub_comp = app.add_subcommand("complexity", "covering / entropy / sign-complexity estimates");
  add_common(sub_comp, comp_args);
  CLI::App* sub_bound = app.add_subcommand("bound", "evaluate a generalization bound from scalar inputs");
  add_common(sub_bound, bound_args);
  CLI::App* sub_verify = app.add_subcommand("verify", "Monte Carlo checks of the concentration tools");
  add_common(sub_verify, verify_args);
  CLI::App* sub_exp = app.add_subcommand("experiment", "synthetic train/test gap studies");
  add_common(sub_exp, exp_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (sub_gen->parsed()) {
      dab::Config cfg = load_config(gen_args);
      cmd_gen(cfg, gen_args);
    } else if (sub_fit->parsed()) {
      dab::Config cfg = load_config(fit_args);
      cmd_fit(cfg, fit_args);
    } else if (sub_div->parsed()) {
      dab::Config cfg = load_config(div_args);
      cmd_divergence(cfg, div_args);
    } else if (sub_comp->parsed()) {
      dab::Config cfg = load_config(comp_args);
      cmd_complexity(cfg, comp_args);
    } else if (sub_bound->parsed()) {
      dab::Config cfg = load_config(bound_args);
      cmd_bound(cfg, bound_args);
    } else if (sub_verify->parsed()) {
      dab::Config cfg = load_config(verify_args);
      cmd_verify(cfg, verify_args);
    } else if (sub_exp->parsed()) {
      dab::Config cfg = load_config(exp_args);
      cmd_experiment(cfg, exp_args);
    }
  } catch (const dab::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
