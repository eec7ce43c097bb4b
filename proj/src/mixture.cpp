#include "sigsoft/mixture.hpp"

#include <cmath>
#include <stdexcept>

#include "sigsoft/rng.hpp"

namespace sigsoft {
namespace {

Activation component_activation(MixtureKind kind) {
  return kind == MixtureKind::mos ? Activation::softmax()
                                  : Activation::sigsoftmax();
}

// Prior logits w_k' h', length K.
Eigen::VectorXd prior_logits(const MixtureParams& params,
                             const Eigen::VectorXd& hidden) {
  Eigen::VectorXd q(params.components());
  for (int k = 0; k < params.components(); ++k)
    q(k) = params.prior_weights[static_cast<size_t>(k)].dot(hidden);
  return q;
}

}  // namespace

void MixtureParams::validate(Eigen::Index hidden_dim) const {
  if (context_maps.empty())
    throw std::invalid_argument("MixtureParams: need at least one component");
  if (prior_weights.size() != context_maps.size())
    throw std::invalid_argument(
        "MixtureParams: context_maps and prior_weights disagree on K");
  const Eigen::Index d = output_matrix.cols();
  if (output_matrix.rows() < 2)
    throw std::invalid_argument("MixtureParams: need at least two outputs");
  for (size_t k = 0; k < context_maps.size(); ++k) {
    if (context_maps[k].rows() != d || context_maps[k].cols() != hidden_dim)
      throw std::invalid_argument("MixtureParams: context map dimensions");
    if (prior_weights[k].size() != hidden_dim)
      throw std::invalid_argument("MixtureParams: prior weight dimensions");
  }
}

Eigen::VectorXd mixture_priors(MixtureKind kind, const MixtureParams& params,
                               const Eigen::VectorXd& hidden) {
  params.validate(hidden.size());
  if (params.components() == 1) return Eigen::VectorXd::Ones(1);
  return forward(component_activation(kind), prior_logits(params, hidden));
}

Eigen::VectorXd mixture_forward(MixtureKind kind, const MixtureParams& params,
                                const Eigen::VectorXd& hidden) {
  params.validate(hidden.size());
  const Activation act = component_activation(kind);
  const Eigen::VectorXd pi = mixture_priors(kind, params, hidden);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(params.output_matrix.rows());
  for (int k = 0; k < params.components(); ++k) {
    const Eigen::VectorXd hk =
        (params.context_maps[static_cast<size_t>(k)] * hidden)
            .array()
            .tanh();
    out += pi(k) * forward(act, params.output_matrix * hk);
  }
  return out;
}

Eigen::VectorXd mixture_log_forward(MixtureKind kind,
                                    const MixtureParams& params,
                                    const Eigen::VectorXd& hidden) {
  params.validate(hidden.size());
  const Activation act = component_activation(kind);
  const int kcount = params.components();
  Eigen::VectorXd log_pi(kcount);
  if (kcount == 1)
    log_pi(0) = 0.0;
  else
    log_pi = log_forward(act, prior_logits(params, hidden));
  const Eigen::Index m = params.output_matrix.rows();
  Eigen::MatrixXd log_comp(m, kcount);
  for (int k = 0; k < kcount; ++k) {
    const Eigen::VectorXd hk =
        (params.context_maps[static_cast<size_t>(k)] * hidden)
            .array()
            .tanh();
    log_comp.col(k) =
        log_forward(act, params.output_matrix * hk).array() + log_pi(k);
  }
  Eigen::VectorXd out(m);
  for (Eigen::Index i = 0; i < m; ++i)
    out(i) = logsumexp(log_comp.row(i).transpose());
  return out;
}

MixtureParams random_mixture_params(int components, Eigen::Index tokens,
                                    Eigen::Index d, Eigen::Index hidden_dim,
                                    std::uint64_t seed) {
  if (components < 1)
    throw std::invalid_argument(
        "random_mixture_params: need at least one component");
  Prng rng(seed);
  MixtureParams params;
  const double bound_d = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  const double bound_w = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < components; ++k) {
    params.context_maps.push_back(
        uniform_matrix(rng, d, hidden_dim, -bound_d, bound_d));
    params.prior_weights.push_back(
        uniform_matrix(rng, hidden_dim, 1, -bound_d, bound_d).col(0));
  }
  params.output_matrix = uniform_matrix(rng, tokens, d, -bound_w, bound_w);
  return params;
}

}  // namespace sigsoft
