// Log-output matrix assembly, singular values, numerical rank, and the
// dimension-bound checks: softmax log-outputs live in a (d+1)-dimensional
// space (d+2 with bias) while sigsoftmax escapes it, down to a fixed 3x3
// counterexample with nonzero determinant.
#pragma once

#include <optional>
#include <vector>

#include "sigsoft/activation.hpp"

namespace sigsoft {

struct RankReport {
  std::vector<double> singular_values;  // descending
  double threshold = 0.0;   // max(rows, cols) * machine epsilon * sv[0]
  int numerical_rank = 0;   // count of singular values above threshold
  int bound = 0;            // d+1, or d+2 with bias
  bool bound_respected = false;
};

// Columns are log_forward(act, W * h_t + bias) over the given inputs: M x T.
Eigen::MatrixXd collect_log_outputs(const Activation& act,
                                    const Eigen::MatrixXd& W,
                                    const std::optional<Eigen::VectorXd>& bias,
                                    const std::vector<Eigen::VectorXd>& inputs);

// Singular values, descending. QR-preconditioned Jacobi SVD below 512x512,
// divide-and-conquer above.
std::vector<double> singular_values(const Eigen::MatrixXd& m);

// Thin SVD factors for reconstruction checks.
struct SvdFactors {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;
};
SvdFactors svd_factors(const Eigen::MatrixXd& m);

// Threshold and rank only; sv must be descending and non-negative. The zero
// matrix gets threshold 0 and rank 0.
struct NumericalRank {
  double threshold = 0.0;
  int rank = 0;
};
NumericalRank numerical_rank(const std::vector<double>& sv, Eigen::Index rows,
                             Eigen::Index cols);

// Full report for a log-output matrix collected from a width-d model.
RankReport rank_report(const Eigen::MatrixXd& log_outputs, int d,
                       bool has_bias);

// numerical_rank <= d+1 (d+2 with bias).
bool verify_bound(const RankReport& report, int d, bool has_bias);

// Fixed construction u = [1,2,0], logit rows {0, u, -u} from a width-1 input
// space. Softmax keeps the three log-outputs in a plane (determinant 0);
// sigsoftmax yields three independent ones (|determinant| well above 0).
struct Counterexample {
  Eigen::Matrix3d log_outputs;  // column t = log_forward(act, z_t)
  double determinant = 0.0;
};
Counterexample rank_counterexample(const Activation& act);

}  // namespace sigsoft
