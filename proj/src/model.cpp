#include "sigsoft/model.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "sigsoft/rng.hpp"

namespace sigsoft {
namespace {

void require_consistent(const FactorModel& model,
                        const SyntheticLanguage& language) {
  if (model.hidden.rows() != language.contexts() ||
      model.output.rows() != language.tokens() ||
      model.hidden.cols() != model.output.cols())
    throw std::invalid_argument("model/language dimensions disagree");
  if (model.bias && model.bias->size() != model.output.rows())
    throw std::invalid_argument("bias length != token count");
}

bool all_finite(const FactorModel& model) {
  return model.hidden.allFinite() && model.output.allFinite() &&
         (!model.bias || model.bias->allFinite());
}

std::vector<double> kl_per_context(const FactorModel& model,
                                   const SyntheticLanguage& language) {
  std::vector<double> kl(static_cast<size_t>(language.contexts()));
  for (Eigen::Index n = 0; n < language.contexts(); ++n) {
    const Eigen::VectorXd logp =
        log_forward(model.activation, model.logits(n));
    double sum = 0.0;
    for (Eigen::Index i = 0; i < language.tokens(); ++i) {
      const double p = language.true_probs(n, i);
      sum += p * (std::log(p) - logp(i));
    }
    // Clamp the tiny negative roundoff a perfect fit can produce.
    kl[static_cast<size_t>(n)] = std::max(sum, 0.0);
  }
  return kl;
}

}  // namespace

Eigen::VectorXd FactorModel::logits(Eigen::Index n) const {
  Eigen::VectorXd z = output * hidden.row(n).transpose();
  if (bias) z += *bias;
  return z;
}

FactorModel init_factor_model(const Activation& act, Eigen::Index contexts,
                              Eigen::Index tokens, int width, bool with_bias,
                              std::uint64_t seed) {
  if (contexts < 1 || tokens < 2 || width < 1)
    throw std::invalid_argument("init_factor_model: bad dimensions");
  Prng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(width));
  FactorModel model;
  model.hidden = uniform_matrix(rng, contexts, width, -bound, bound);
  model.output = uniform_matrix(rng, tokens, width, -bound, bound);
  if (with_bias) model.bias = Eigen::VectorXd::Zero(tokens);
  model.activation = act;
  return model;
}

double nll_and_gradients(const FactorModel& model,
                         const SyntheticLanguage& language, Gradients* grads) {
  require_consistent(model, language);
  const Eigen::Index n_contexts = language.contexts();
  const double inv_n = 1.0 / static_cast<double>(n_contexts);
  if (grads) {
    grads->hidden.setZero(model.hidden.rows(), model.hidden.cols());
    grads->output.setZero(model.output.rows(), model.output.cols());
    if (model.bias)
      grads->bias = Eigen::VectorXd::Zero(model.output.rows());
    else
      grads->bias.reset();
  }
  double nll = 0.0;
  for (Eigen::Index n = 0; n < n_contexts; ++n) {
    const Eigen::VectorXd z = model.logits(n);
    const Eigen::VectorXd logp = log_forward(model.activation, z);
    const Eigen::VectorXd pstar = language.true_probs.row(n).transpose();
    nll -= inv_n * pstar.dot(logp);
    if (!grads) continue;
    // d nll / d z_n = -(1/N) J' pstar; with J_ij = (delta_ij - f_j) s_j and
    // sum(pstar) = 1 this collapses to -(1/N) s .* (pstar - f).
    const Eigen::VectorXd f = logp.array().exp();
    const Eigen::VectorXd s = log_g_slope(model.activation, z);
    const Eigen::VectorXd dz =
        (-inv_n) * (s.array() * (pstar - f).array()).matrix();
    grads->output.noalias() += dz * model.hidden.row(n);
    grads->hidden.row(n) = (model.output.transpose() * dz).transpose();
    if (grads->bias) *grads->bias += dz;
  }
  return nll;
}

FitReport fit(FactorModel& model, const SyntheticLanguage& language,
              const TrainConfig& config) {
  config.validate();
  require_consistent(model, language);
  constexpr int kWindow = 50;
  std::array<double, kWindow> history{};  // nll at epoch e - kWindow
  FitReport report;
  Gradients grads;
  FactorModel last_finite = model;
  double nll = nll_and_gradients(model, language, &grads);
  if (!std::isfinite(nll))
    throw std::invalid_argument("fit: initial loss is not finite");
  history.fill(nll);
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    model.hidden -= config.learning_rate * grads.hidden;
    model.output -= config.learning_rate * grads.output;
    if (model.bias && grads.bias)
      *model.bias -= config.learning_rate * *grads.bias;
    report.epochs_run = epoch;
    bool diverged = !all_finite(model);
    if (!diverged) {
      try {
        nll = nll_and_gradients(model, language, &grads);
      } catch (const std::invalid_argument&) {
        diverged = true;  // finite parameters, overflowed logits
      }
      if (!diverged && !std::isfinite(nll)) diverged = true;
    }
    if (diverged) {
      model = last_finite;
      nll = nll_and_gradients(model, language, nullptr);
      report.converged = false;
      report.note = "diverged at epoch " + std::to_string(epoch) +
                    "; parameters reverted to the last finite state";
      break;
    }
    last_finite = model;
    const double before = history[static_cast<size_t>(epoch % kWindow)];
    history[static_cast<size_t>(epoch % kWindow)] = nll;
    if (epoch >= kWindow && before - nll < config.tol) {
      report.converged = true;
      break;
    }
  }
  report.final_nll = nll;
  report.per_context_kl = kl_per_context(model, language);
  double total = 0.0;
  for (double k : report.per_context_kl) total += k;
  report.mean_kl = total / static_cast<double>(report.per_context_kl.size());
  return report;
}

ComparisonTable compare_activations(const SyntheticLanguage& language,
                                    int width,
                                    const std::vector<Activation>& kinds,
                                    const TrainConfig& config,
                                    const std::vector<std::uint64_t>& seeds) {
  if (kinds.empty() || seeds.empty())
    throw std::invalid_argument(
        "compare_activations: need at least one kind and one seed");
  ComparisonTable table;
  table.hidden_dim = width;
  table.config = config;
  for (const Activation& act : kinds) {
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t seed : seeds) {
      FactorModel model =
          init_factor_model(act, language.contexts(), language.tokens(),
                            width, false, seed);
      ComparisonRow row;
      row.kind = act.name();
      row.seed = seed;
      row.fit = fit(model, language, config);
      std::vector<Eigen::VectorXd> inputs;
      inputs.reserve(static_cast<size_t>(model.contexts()));
      for (Eigen::Index n = 0; n < model.contexts(); ++n)
        inputs.push_back(model.hidden.row(n).transpose());
      row.rank = rank_report(
          collect_log_outputs(act, model.output, model.bias, inputs), width,
          model.bias.has_value());
      sum += row.fit.mean_kl;
      sumsq += row.fit.mean_kl * row.fit.mean_kl;
      table.rows.push_back(std::move(row));
    }
    KindAggregate agg;
    agg.kind = act.name();
    const double n = static_cast<double>(seeds.size());
    agg.mean_kl_mean = sum / n;
    if (seeds.size() > 1) {
      const double var =
          std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0));
      agg.mean_kl_stddev = std::sqrt(var);
    }
    table.aggregates.push_back(std::move(agg));
  }
  return table;
}

}  // namespace sigsoft
