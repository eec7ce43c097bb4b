#include "sigsoft/activation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sigsoft {
namespace {

void require_finite(const Eigen::VectorXd& z, const char* where) {
  if (!z.allFinite())
    throw std::invalid_argument(std::string(where) +
                                ": logits must be finite");
}

void require_vector(const Activation& act, const Eigen::VectorXd& z,
                    const char* where) {
  if (z.size() < 2)
    throw std::invalid_argument(std::string(where) +
                                ": need at least two logits");
  require_finite(z, where);
  if (act.kind == ActivationKind::relu_based && !(act.epsilon > 0.0))
    throw std::invalid_argument(std::string(where) +
                                ": relu_based requires epsilon > 0");
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log sigmoid(x) = -softplus(-x)
double log_sigmoid(double x) { return -softplus(-x); }

}  // namespace

const char* Activation::name() const {
  switch (kind) {
    case ActivationKind::softmax: return "softmax";
    case ActivationKind::sigsoftmax: return "sigsoftmax";
    case ActivationKind::relu_based: return "relu_based";
    case ActivationKind::sigmoid_based: return "sigmoid_based";
  }
  return "unknown";
}

std::optional<Activation> Activation::parse(std::string_view name) {
  if (name == "softmax") return softmax();
  if (name == "sigsoftmax") return sigsoftmax();
  if (name == "relu_based" || name == "relu") return relu_based();
  if (name == "sigmoid_based" || name == "sigmoid") return sigmoid_based();
  return std::nullopt;
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double logsumexp(const Eigen::VectorXd& z) {
  if (z.size() == 0) throw std::invalid_argument("logsumexp: empty input");
  require_finite(z, "logsumexp");
  const double zmax = z.maxCoeff();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) sum += std::exp(z(i) - zmax);
  return zmax + std::log(sum);
}

Eigen::VectorXd unnormalized_log_g(const Activation& act,
                                   const Eigen::VectorXd& z) {
  if (z.size() == 0)
    throw std::invalid_argument("unnormalized_log_g: empty input");
  require_finite(z, "unnormalized_log_g");
  Eigen::VectorXd out(z.size());
  switch (act.kind) {
    case ActivationKind::softmax:
      out = z;
      break;
    case ActivationKind::sigsoftmax:
      for (Eigen::Index i = 0; i < z.size(); ++i)
        out(i) = z(i) + log_sigmoid(z(i) + act.shift);
      break;
    case ActivationKind::relu_based:
      if (!(act.epsilon > 0.0))
        throw std::invalid_argument(
            "unnormalized_log_g: relu_based requires epsilon > 0");
      for (Eigen::Index i = 0; i < z.size(); ++i)
        out(i) = std::log(std::max(z(i), 0.0) + act.epsilon);
      break;
    case ActivationKind::sigmoid_based:
      for (Eigen::Index i = 0; i < z.size(); ++i) out(i) = log_sigmoid(z(i));
      break;
  }
  return out;
}

Eigen::VectorXd log_forward(const Activation& act, const Eigen::VectorXd& z) {
  require_vector(act, z, "log_forward");
  Eigen::VectorXd lg = unnormalized_log_g(act, z);
  lg.array() -= logsumexp(lg);
  return lg;
}

Eigen::VectorXd forward(const Activation& act, const Eigen::VectorXd& z) {
  require_vector(act, z, "forward");
  switch (act.kind) {
    case ActivationKind::relu_based: {
      Eigen::VectorXd num = z.array().max(0.0) + act.epsilon;
      return num / num.sum();
    }
    case ActivationKind::sigmoid_based: {
      Eigen::VectorXd num(z.size());
      for (Eigen::Index i = 0; i < z.size(); ++i) num(i) = sigmoid(z(i));
      return num / num.sum();
    }
    default:
      return log_forward(act, z).array().exp();
  }
}

Eigen::VectorXd log_g_slope(const Activation& act, const Eigen::VectorXd& z) {
  require_vector(act, z, "log_g_slope");
  const Eigen::Index m = z.size();
  Eigen::VectorXd s(m);
  switch (act.kind) {
    case ActivationKind::softmax:
      s.setOnes();
      break;
    case ActivationKind::sigsoftmax:
      for (Eigen::Index j = 0; j < m; ++j)
        s(j) = 2.0 - sigmoid(z(j) + act.shift);
      break;
    case ActivationKind::relu_based:
      // Subgradient 0 at the kink z = 0.
      for (Eigen::Index j = 0; j < m; ++j)
        s(j) = z(j) > 0.0 ? 1.0 / (z(j) + act.epsilon) : 0.0;
      break;
    case ActivationKind::sigmoid_based:
      for (Eigen::Index j = 0; j < m; ++j) s(j) = 1.0 - sigmoid(z(j));
      break;
  }
  return s;
}

JacobianMatrix log_jacobian(const Activation& act, const Eigen::VectorXd& z) {
  require_vector(act, z, "log_jacobian");
  const Eigen::VectorXd f = forward(act, z);
  const Eigen::VectorXd s = log_g_slope(act, z);
  const Eigen::Index m = z.size();
  JacobianMatrix jac;
  jac.entries.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      jac.entries(i, j) = ((i == j ? 1.0 : 0.0) - f(j)) * s(j);
  jac.large_entries = jac.entries.cwiseAbs().maxCoeff() >= 1e6;
  return jac;
}

Eigen::MatrixXd finite_difference_log_jacobian(const Activation& act,
                                               const Eigen::VectorXd& z,
                                               double step) {
  if (!(step > 0.0))
    throw std::invalid_argument(
        "finite_difference_log_jacobian: step must be positive");
  require_vector(act, z, "finite_difference_log_jacobian");
  const Eigen::Index m = z.size();
  Eigen::MatrixXd jac(m, m);
  Eigen::VectorXd zp = z, zm = z;
  for (Eigen::Index j = 0; j < m; ++j) {
    zp(j) = z(j) + step;
    zm(j) = z(j) - step;
    jac.col(j) = (log_forward(act, zp) - log_forward(act, zm)) / (2.0 * step);
    zp(j) = z(j);
    zm(j) = z(j);
  }
  return jac;
}

}  // namespace sigsoft
