// Mixture heads over K components: mixture-of-softmax and
// mixture-of-sigsoftmax. Component k computes its distribution with the
// matching activation over W * tanh(A_k h'); priors come from the same
// activation applied to the K prior logits w_k' h'.
#pragma once

#include <vector>

#include "sigsoft/activation.hpp"

namespace sigsoft {

enum class MixtureKind { mos, moss };

struct MixtureParams {
  std::vector<Eigen::MatrixXd> context_maps;   // K matrices, d x d'
  std::vector<Eigen::VectorXd> prior_weights;  // K vectors, length d'
  Eigen::MatrixXd output_matrix;               // M x d

  int components() const { return static_cast<int>(context_maps.size()); }

  // Throws invalid_argument unless K >= 1 and all dimensions agree with
  // `hidden_dim` (= d').
  void validate(Eigen::Index hidden_dim) const;
};

// Mixture weights pi(k), length K. K = 1 yields [1] without touching the
// activation (a distribution over a single component is degenerate).
Eigen::VectorXd mixture_priors(MixtureKind kind, const MixtureParams& params,
                               const Eigen::VectorXd& hidden);

// sum_k pi_k * component_k, an M-vector probability distribution.
Eigen::VectorXd mixture_forward(MixtureKind kind, const MixtureParams& params,
                                const Eigen::VectorXd& hidden);

// log of mixture_forward, assembled per output index as
// logsumexp_k(log pi_k + log p_{k,i}) so extreme logits stay finite.
Eigen::VectorXd mixture_log_forward(MixtureKind kind,
                                    const MixtureParams& params,
                                    const Eigen::VectorXd& hidden);

// i.i.d. uniform(-1/sqrt(dim), 1/sqrt(dim)) initialization used by the tests:
// dim is the column count of each matrix.
MixtureParams random_mixture_params(int components, Eigen::Index tokens,
                                    Eigen::Index d, Eigen::Index hidden_dim,
                                    std::uint64_t seed);

}  // namespace sigsoft
