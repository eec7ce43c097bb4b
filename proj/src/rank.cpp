#include "sigsoft/rank.hpp"

#include <limits>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace sigsoft {

Eigen::MatrixXd collect_log_outputs(
    const Activation& act, const Eigen::MatrixXd& W,
    const std::optional<Eigen::VectorXd>& bias,
    const std::vector<Eigen::VectorXd>& inputs) {
  if (inputs.empty())
    throw std::invalid_argument("collect_log_outputs: no inputs");
  if (bias && bias->size() != W.rows())
    throw std::invalid_argument("collect_log_outputs: bias length != rows(W)");
  Eigen::MatrixXd out(W.rows(), static_cast<Eigen::Index>(inputs.size()));
  for (size_t t = 0; t < inputs.size(); ++t) {
    if (inputs[t].size() != W.cols())
      throw std::invalid_argument(
          "collect_log_outputs: input length != cols(W)");
    Eigen::VectorXd z = W * inputs[t];
    if (bias) z += *bias;
    out.col(static_cast<Eigen::Index>(t)) = log_forward(act, z);
  }
  return out;
}

std::vector<double> singular_values(const Eigen::MatrixXd& m) {
  if (!m.allFinite())
    throw std::invalid_argument("singular_values: matrix must be finite");
  Eigen::VectorXd sv;
  if (m.rows() > 512 && m.cols() > 512)
    sv = Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
  else
    sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

SvdFactors svd_factors(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

NumericalRank numerical_rank(const std::vector<double>& sv, Eigen::Index rows,
                             Eigen::Index cols) {
  NumericalRank result;
  if (sv.empty()) return result;
  result.threshold = static_cast<double>(std::max(rows, cols)) *
                     std::numeric_limits<double>::epsilon() * sv.front();
  for (double s : sv)
    if (s > result.threshold) ++result.rank;
  return result;
}

RankReport rank_report(const Eigen::MatrixXd& log_outputs, int d,
                       bool has_bias) {
  RankReport report;
  report.singular_values = singular_values(log_outputs);
  const NumericalRank nr =
      numerical_rank(report.singular_values, log_outputs.rows(),
                     log_outputs.cols());
  report.threshold = nr.threshold;
  report.numerical_rank = nr.rank;
  report.bound = d + 1 + (has_bias ? 1 : 0);
  report.bound_respected = report.numerical_rank <= report.bound;
  return report;
}

bool verify_bound(const RankReport& report, int d, bool has_bias) {
  return report.numerical_rank <= d + 1 + (has_bias ? 1 : 0);
}

Counterexample rank_counterexample(const Activation& act) {
  const Eigen::Vector3d u(1.0, 2.0, 0.0);
  const double scales[3] = {0.0, 1.0, -1.0};
  Counterexample ce;
  for (int t = 0; t < 3; ++t)
    ce.log_outputs.col(t) = log_forward(act, (scales[t] * u).eval());
  ce.determinant = ce.log_outputs.determinant();
  return ce;
}

}  // namespace sigsoft
