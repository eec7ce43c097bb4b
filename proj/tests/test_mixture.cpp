#include <doctest.h>

#include <cmath>

#include "sigsoft/mixture.hpp"
#include "sigsoft/rng.hpp"

using sigsoft::Activation;
using sigsoft::MixtureKind;
using sigsoft::MixtureParams;

namespace {

Eigen::VectorXd random_hidden(Eigen::Index dim, std::uint64_t seed) {
  sigsoft::Prng rng(seed);
  Eigen::VectorXd h(dim);
  for (Eigen::Index i = 0; i < dim; ++i) h(i) = rng.uniform(-1.0, 1.0);
  return h;
}

}  // namespace

TEST_CASE("single-component mixtures reduce to the bare activation") {
  const MixtureParams params = sigsoft::random_mixture_params(1, 5, 3, 4, 10);
  const Eigen::VectorXd h = random_hidden(4, 20);
  const Eigen::VectorXd mixed =
      sigsoft::mixture_forward(MixtureKind::mos, params, h);
  const Eigen::VectorXd hk = (params.context_maps[0] * h).array().tanh();
  const Eigen::VectorXd direct =
      sigsoft::forward(Activation::softmax(), params.output_matrix * hk);
  CHECK((mixed - direct).cwiseAbs().maxCoeff() <= 1e-14);

  const Eigen::VectorXd log_mixed =
      sigsoft::mixture_log_forward(MixtureKind::moss, params, h);
  const Eigen::VectorXd log_direct =
      sigsoft::log_forward(Activation::sigsoftmax(), params.output_matrix * hk);
  CHECK((log_mixed - log_direct).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("identical components collapse to a single component") {
  MixtureParams params = sigsoft::random_mixture_params(2, 6, 3, 4, 30);
  params.context_maps[1] = params.context_maps[0];
  const Eigen::VectorXd h = random_hidden(4, 40);
  for (MixtureKind kind : {MixtureKind::mos, MixtureKind::moss}) {
    const Eigen::VectorXd mixed = sigsoft::mixture_forward(kind, params, h);
    const Activation act = kind == MixtureKind::mos
                               ? Activation::softmax()
                               : Activation::sigsoftmax();
    const Eigen::VectorXd hk = (params.context_maps[0] * h).array().tanh();
    const Eigen::VectorXd component =
        sigsoft::forward(act, params.output_matrix * hk);
    CHECK((mixed - component).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("three-component mixture matches the explicit loop oracle") {
  const MixtureParams params = sigsoft::random_mixture_params(3, 7, 4, 5, 50);
  const Eigen::VectorXd h = random_hidden(5, 60);
  for (MixtureKind kind : {MixtureKind::mos, MixtureKind::moss}) {
    const Activation act = kind == MixtureKind::mos
                               ? Activation::softmax()
                               : Activation::sigsoftmax();
    // Independent re-computation: priors and components by hand.
    Eigen::VectorXd prior_logits(3);
    for (int k = 0; k < 3; ++k)
      prior_logits(k) = params.prior_weights[k].dot(h);
    const Eigen::VectorXd pi = sigsoft::forward(act, prior_logits);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(7);
    for (int k = 0; k < 3; ++k) {
      const Eigen::VectorXd hk = (params.context_maps[k] * h).array().tanh();
      expected += pi(k) * sigsoft::forward(act, params.output_matrix * hk);
    }
    const Eigen::VectorXd mixed = sigsoft::mixture_forward(kind, params, h);
    CHECK(mixed.minCoeff() >= 0.0);
    CHECK(std::abs(mixed.sum() - 1.0) <= 1e-12);
    CHECK((mixed - expected).cwiseAbs().maxCoeff() <= 1e-13);

    const Eigen::VectorXd pri = sigsoft::mixture_priors(kind, params, h);
    CHECK(pri.size() == 3);
    CHECK(std::abs(pri.sum() - 1.0) <= 1e-12);
  }
}

TEST_CASE("mixture output is a convex combination of its components") {
  const MixtureParams params = sigsoft::random_mixture_params(3, 6, 3, 4, 70);
  const Eigen::VectorXd h = random_hidden(4, 80);
  const Activation act = Activation::softmax();
  std::vector<Eigen::VectorXd> components;
  for (int k = 0; k < 3; ++k) {
    const Eigen::VectorXd hk = (params.context_maps[k] * h).array().tanh();
    components.push_back(
        sigsoft::forward(act, params.output_matrix * hk));
  }
  const Eigen::VectorXd mixed =
      sigsoft::mixture_forward(MixtureKind::mos, params, h);
  for (Eigen::Index i = 0; i < 6; ++i) {
    double lo = 1.0, hi = 0.0;
    for (const auto& c : components) {
      lo = std::min(lo, c(i));
      hi = std::max(hi, c(i));
    }
    CHECK(mixed(i) >= lo - 1e-14);
    CHECK(mixed(i) <= hi + 1e-14);
  }
}

TEST_CASE("log mixture agrees with the linear mixture") {
  const MixtureParams params = sigsoft::random_mixture_params(2, 4, 3, 3, 90);
  const Eigen::VectorXd h = random_hidden(3, 100);
  for (MixtureKind kind : {MixtureKind::mos, MixtureKind::moss}) {
    const Eigen::VectorXd mixed = sigsoft::mixture_forward(kind, params, h);
    const Eigen::VectorXd logm = sigsoft::mixture_log_forward(kind, params, h);
    for (Eigen::Index i = 0; i < 4; ++i)
      CHECK(std::exp(logm(i)) ==
            doctest::Approx(mixed(i)).epsilon(1e-10));
  }
}

TEST_CASE("extreme logits keep the log mixture finite") {
  MixtureParams params = sigsoft::random_mixture_params(2, 4, 2, 3, 110);
  params.output_matrix *= 300.0 / params.output_matrix.cwiseAbs().maxCoeff();
  const Eigen::VectorXd h = random_hidden(3, 120);
  for (MixtureKind kind : {MixtureKind::mos, MixtureKind::moss})
    CHECK(sigsoft::mixture_log_forward(kind, params, h).allFinite());
}

TEST_CASE("mixtures validate their shapes") {
  MixtureParams params = sigsoft::random_mixture_params(2, 5, 3, 4, 130);
  const Eigen::VectorXd h = random_hidden(4, 140);
  MixtureParams wrong = params;
  wrong.prior_weights.pop_back();
  CHECK_THROWS_AS(sigsoft::mixture_forward(MixtureKind::mos, wrong, h),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      sigsoft::mixture_forward(MixtureKind::mos, params, random_hidden(3, 1)),
      std::invalid_argument);
  MixtureParams empty;
  CHECK_THROWS_AS(sigsoft::mixture_forward(MixtureKind::mos, empty, h),
                  std::invalid_argument);
}

TEST_CASE("random mixture parameters are deterministic in the seed") {
  const MixtureParams a = sigsoft::random_mixture_params(2, 5, 3, 4, 7);
  const MixtureParams b = sigsoft::random_mixture_params(2, 5, 3, 4, 7);
  CHECK((a.output_matrix - b.output_matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.context_maps[1] - b.context_maps[1]).cwiseAbs().maxCoeff() == 0.0);
  const double bound = 1.0 / std::sqrt(4.0);
  CHECK(a.context_maps[0].cwiseAbs().maxCoeff() <= bound);
}
