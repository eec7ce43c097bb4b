// Finite languages: a set of contexts with known next-token distributions,
// either generated with a controlled logit rank or counted from a text file
// as a smoothed bigram table.
#pragma once

#include <cstdint>
#include <filesystem>

#include <Eigen/Core>

namespace sigsoft {

struct SyntheticLanguage {
  Eigen::MatrixXd true_probs;  // N x M, rows strictly positive, row sums 1
  int true_log_rank = 0;       // numerical rank of log(true_probs)

  Eigen::Index contexts() const { return true_probs.rows(); }
  Eigen::Index tokens() const { return true_probs.cols(); }
  Eigen::MatrixXd log_probs() const;
};

// Rows of true_probs = softmax of rows of B, B = (concentration/sqrt(r)) U V'
// with U (N x r), V (M x r) standard normal, so each logit entry has standard
// deviation `concentration`. true_log_rank is typically r+1 (the extra
// dimension is the per-row normalizer).
SyntheticLanguage generate_language(int contexts, int tokens, int logit_rank,
                                    double concentration, std::uint64_t seed);

// Whitespace-tokenized bigram table with add-alpha smoothing. Vocabulary is
// the `vocab_cap` most frequent tokens (ties broken lexicographically) plus
// an out-of-vocabulary token, so M = min(vocab_cap, distinct) + 1; every
// vocabulary entry is also a context row.
SyntheticLanguage bigram_language_from_text(const std::filesystem::path& path,
                                            int vocab_cap, double alpha);

}  // namespace sigsoft
