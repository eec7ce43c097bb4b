// Output activations mapping logit vectors to probability vectors, their
// log-space forms, and exact Jacobians of the log-output. All evaluation
// routes through softplus/logsumexp with max-shift so |z| up to ~700 cannot
// overflow.
#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Core>

namespace sigsoft {

enum class ActivationKind { softmax, sigsoftmax, relu_based, sigmoid_based };

// Activation kind plus its numeric knobs. `shift` offsets the sigmoid factor
// of sigsoftmax (g(z)_i = exp(z_i) * sigmoid(z_i + shift); 0 recovers the
// plain definition). `epsilon` keeps relu_based numerators positive and must
// be > 0 for that kind.
struct Activation {
  ActivationKind kind = ActivationKind::softmax;
  double shift = 0.0;
  double epsilon = 1e-8;

  static Activation softmax() { return {ActivationKind::softmax, 0.0, 1e-8}; }
  static Activation sigsoftmax(double shift = 0.0) {
    return {ActivationKind::sigsoftmax, shift, 1e-8};
  }
  static Activation relu_based(double epsilon = 1e-8) {
    return {ActivationKind::relu_based, 0.0, epsilon};
  }
  static Activation sigmoid_based() {
    return {ActivationKind::sigmoid_based, 0.0, 1e-8};
  }

  const char* name() const;
  // Accepts the four canonical names plus the "relu" / "sigmoid" shorthands.
  static std::optional<Activation> parse(std::string_view name);
};

// Jacobian of the log-output, entry (i,j) = d[log f(z)]_i / d z_j.
// `large_entries` flags any magnitude >= 1e6; relu_based produces such
// entries just above the kink, where 1/(ReLU(z)+epsilon) blows up.
struct JacobianMatrix {
  Eigen::MatrixXd entries;
  bool large_entries = false;
};

// log(1 + exp(x)) computed as max(x,0) + log1p(exp(-|x|)).
double softplus(double x);

// log sum_m exp(z_m) via max-shift. Rejects empty or non-finite input.
double logsumexp(const Eigen::VectorXd& z);

// Elementwise log of the unnormalized score g:
//   softmax        z_i
//   sigsoftmax     z_i + log sigmoid(z_i + shift)   (= 2z_i - softplus(z_i)
//                                                     when shift = 0)
//   relu_based     log(ReLU(z_i) + epsilon)
//   sigmoid_based  z_i - softplus(z_i)              (= log sigmoid(z_i))
Eigen::VectorXd unnormalized_log_g(const Activation& act,
                                   const Eigen::VectorXd& z);

// Normalized log-probabilities: unnormalized_log_g(z) minus its logsumexp.
// Requires at least two components, all finite.
Eigen::VectorXd log_forward(const Activation& act, const Eigen::VectorXd& z);

// Probability vector. softmax/sigsoftmax take exp(log_forward(z));
// relu_based and sigmoid_based normalize their numerators directly.
Eigen::VectorXd forward(const Activation& act, const Eigen::VectorXd& z);

// Diagonal slope s_j = d[log g]_j / d z_j, the per-column scale of the
// log-output Jacobian:
//   softmax        s_j = 1
//   sigsoftmax     s_j = 2 - sigmoid(z_j + shift)
//   relu_based     s_j = 1[z_j > 0] / (ReLU(z_j) + epsilon)  (0 at the kink)
//   sigmoid_based  s_j = 1 - sigmoid(z_j)
Eigen::VectorXd log_g_slope(const Activation& act, const Eigen::VectorXd& z);

// Closed-form Jacobian of the log-output: (delta_ij - f_j(z)) * s_j.
JacobianMatrix log_jacobian(const Activation& act, const Eigen::VectorXd& z);

// Central differences (log_forward(z + step e_j) - log_forward(z - step e_j))
// / (2 step), column j. Oracle for log_jacobian.
Eigen::MatrixXd finite_difference_log_jacobian(const Activation& act,
                                               const Eigen::VectorXd& z,
                                               double step);

}  // namespace sigsoft
