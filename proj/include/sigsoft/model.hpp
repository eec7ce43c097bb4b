// Factor models P(y|x_n) = activation(W h_n + bias): every context row h_n is
// a free parameter, so the only capacity limit is the width d. Full-batch
// gradient descent against the known true distributions probes that limit.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sigsoft/activation.hpp"
#include "sigsoft/config.hpp"
#include "sigsoft/language.hpp"
#include "sigsoft/rank.hpp"

namespace sigsoft {

struct FactorModel {
  Eigen::MatrixXd hidden;              // H, N x d
  Eigen::MatrixXd output;              // W, M x d
  std::optional<Eigen::VectorXd> bias; // length M
  Activation activation;

  Eigen::Index contexts() const { return hidden.rows(); }
  Eigen::Index tokens() const { return output.rows(); }
  int width() const { return static_cast<int>(output.cols()); }

  // Logits for context n.
  Eigen::VectorXd logits(Eigen::Index n) const;
};

// H, W i.i.d. uniform on (-1/sqrt(d), 1/sqrt(d)); bias (when present) zero.
FactorModel init_factor_model(const Activation& act, Eigen::Index contexts,
                              Eigen::Index tokens, int width, bool with_bias,
                              std::uint64_t seed);

struct Gradients {
  Eigen::MatrixXd hidden;
  Eigen::MatrixXd output;
  std::optional<Eigen::VectorXd> bias;
};

// Cross entropy against the full true distribution,
//   nll = -(1/N) sum_n sum_i P*(y_i|x_n) log P(y_i|x_n),
// with exact gradients assembled through the log-output Jacobian. Pass
// grads = nullptr to get the loss alone.
double nll_and_gradients(const FactorModel& model,
                         const SyntheticLanguage& language, Gradients* grads);

struct FitReport {
  std::vector<double> per_context_kl;  // KL(P*_n || P_n), length N
  double mean_kl = 0.0;
  double final_nll = 0.0;
  int epochs_run = 0;
  bool converged = false;  // true when the tol window stopped the descent
  std::string note;        // divergence diagnostics; empty otherwise
};

// Full-batch fixed-rate descent. Stops when the nll improvement over the last
// 50 epochs falls below config.tol, or at max_epochs. A non-finite loss or
// parameter reverts the model to its last finite state and reports
// converged = false with a note.
FitReport fit(FactorModel& model, const SyntheticLanguage& language,
              const TrainConfig& config);

// One fitted model per (kind, seed), each initialized from the given seed and
// summarized with a fit report plus a rank report of its log-output matrix.
struct ComparisonRow {
  std::string kind;
  std::uint64_t seed = 0;
  FitReport fit;
  RankReport rank;
};

struct KindAggregate {
  std::string kind;
  double mean_kl_mean = 0.0;
  double mean_kl_stddev = 0.0;  // sample stddev, 0 when a single seed
};

struct ComparisonTable {
  int hidden_dim = 0;
  TrainConfig config;
  std::vector<ComparisonRow> rows;        // ordered by (kind, seed) as given
  std::vector<KindAggregate> aggregates;  // one per kind, input order
};

ComparisonTable compare_activations(const SyntheticLanguage& language,
                                    int width,
                                    const std::vector<Activation>& kinds,
                                    const TrainConfig& config,
                                    const std::vector<std::uint64_t>& seeds);

}  // namespace sigsoft
