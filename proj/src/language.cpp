#include "sigsoft/language.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigsoft/activation.hpp"
#include "sigsoft/rank.hpp"
#include "sigsoft/rng.hpp"

namespace sigsoft {
namespace {

// Row-wise softmax plus the numerical rank of the log of the result.
SyntheticLanguage language_from_logits(const Eigen::MatrixXd& logits) {
  SyntheticLanguage lang;
  lang.true_probs.resize(logits.rows(), logits.cols());
  const Activation softmax = Activation::softmax();
  for (Eigen::Index n = 0; n < logits.rows(); ++n)
    lang.true_probs.row(n) =
        forward(softmax, logits.row(n).transpose()).transpose();
  const Eigen::MatrixXd a = lang.true_probs.array().log();
  lang.true_log_rank =
      numerical_rank(singular_values(a), a.rows(), a.cols()).rank;
  return lang;
}

}  // namespace

Eigen::MatrixXd SyntheticLanguage::log_probs() const {
  return true_probs.array().log();
}

SyntheticLanguage generate_language(int contexts, int tokens, int logit_rank,
                                    double concentration, std::uint64_t seed) {
  if (contexts < 2 || tokens < 2)
    throw std::invalid_argument("generate_language: need N, M >= 2");
  if (logit_rank < 1 || logit_rank > std::min(contexts, tokens))
    throw std::invalid_argument(
        "generate_language: need 1 <= logit_rank <= min(N, M)");
  if (!(concentration > 0.0))
    throw std::invalid_argument(
        "generate_language: concentration must be positive");
  Prng rng(seed);
  const Eigen::MatrixXd u = gaussian_matrix(rng, contexts, logit_rank, 1.0);
  const Eigen::MatrixXd v = gaussian_matrix(rng, tokens, logit_rank, 1.0);
  const double scale =
      concentration / std::sqrt(static_cast<double>(logit_rank));
  return language_from_logits(scale * (u * v.transpose()));
}

SyntheticLanguage bigram_language_from_text(const std::filesystem::path& path,
                                            int vocab_cap, double alpha) {
  if (vocab_cap < 1)
    throw std::invalid_argument("bigram_language_from_text: vocab_cap >= 1");
  if (!(alpha > 0.0))
    throw std::invalid_argument("bigram_language_from_text: alpha > 0");
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("bigram_language_from_text: cannot read " +
                             path.string());
  std::vector<std::string> stream;
  std::string token;
  while (in >> token) stream.push_back(token);
  if (stream.size() < 2)
    throw std::runtime_error(
        "bigram_language_from_text: empty bigram table (corpus " +
        path.string() + " has fewer than two tokens)");

  std::map<std::string, long> freq;
  for (const auto& t : stream) ++freq[t];
  // Most frequent first; lexicographic among equals keeps the cut
  // deterministic.
  std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const size_t kept =
      std::min(ranked.size(), static_cast<size_t>(vocab_cap));
  std::map<std::string, int> vocab;
  for (size_t i = 0; i < kept; ++i) vocab[ranked[i].first] = 0;
  int id = 0;
  for (auto& [word, idx] : vocab) idx = id++;  // lexicographic id order
  const int unk = id;
  const int m = unk + 1;

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(m, m);
  auto lookup = [&](const std::string& w) {
    auto it = vocab.find(w);
    return it == vocab.end() ? unk : it->second;
  };
  for (size_t t = 0; t + 1 < stream.size(); ++t)
    counts(lookup(stream[t]), lookup(stream[t + 1])) += 1.0;

  SyntheticLanguage lang;
  lang.true_probs.resize(m, m);
  for (int i = 0; i < m; ++i) {
    const double row_total = counts.row(i).sum() + alpha * m;
    lang.true_probs.row(i) = (counts.row(i).array() + alpha) / row_total;
  }
  const Eigen::MatrixXd a = lang.true_probs.array().log();
  lang.true_log_rank =
      numerical_rank(singular_values(a), a.rows(), a.cols()).rank;
  return lang;
}

}  // namespace sigsoft
