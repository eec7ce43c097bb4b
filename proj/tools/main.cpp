// Command-line front end. Six subcommands, canonical JSON on stdout (byte
// identical across reruns with the same flags), timing on stderr only.
// Exit codes: 0 success, 1 check/experiment failure, 2 usage error.
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sigsoft/activation.hpp"
#include "sigsoft/config.hpp"
#include "sigsoft/language.hpp"
#include "sigsoft/model.hpp"
#include "sigsoft/rank.hpp"
#include "sigsoft/report.hpp"
#include "sigsoft/rng.hpp"

namespace {

using sigsoft::Activation;
using sigsoft::ordered_json;

constexpr int kExitSuccess = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\nRun with --help for usage.\n";
  return kExitUsage;
}

// stdout, plus a copy at `path` when non-empty. False on I/O failure.
bool emit_report(const ordered_json& report, const std::string& path) {
  const std::string text = sigsoft::serialize_report(report);
  std::cout << text;
  if (path.empty()) return true;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

std::optional<std::vector<Activation>> parse_kind_list(
    const std::string& csv) {
  std::vector<Activation> kinds;
  size_t start = 0;
  while (start <= csv.size()) {
    const size_t comma = csv.find(',', start);
    const std::string name =
        csv.substr(start, comma == std::string::npos ? comma : comma - start);
    const auto act = Activation::parse(name);
    if (!act) return std::nullopt;
    kinds.push_back(*act);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return kinds;
}

std::optional<std::vector<std::uint64_t>> parse_seed_list(
    const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  size_t start = 0;
  while (start <= csv.size()) {
    const size_t comma = csv.find(',', start);
    const std::string item =
        csv.substr(start, comma == std::string::npos ? comma : comma - start);
    try {
      size_t used = 0;
      seeds.push_back(std::stoull(item, &used));
      if (used != item.size()) return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return seeds;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct GradCheckArgs {
  std::string kind = "sigsoftmax";
  int dim = 10;
  int trials = 100;
  double step = 0.0;  // 0 = kind-dependent default
  std::uint64_t seed = 1;
  std::string out;
};

int run_grad_check(const GradCheckArgs& args) {
  const auto act = Activation::parse(args.kind);
  if (!act) return usage_error("unknown kind '" + args.kind + "'");
  if (args.dim < 2 || args.trials < 1)
    return usage_error("grad-check needs --dim >= 2 and --trials >= 1");
  // Central differences on log(ReLU(z)+eps) need a much smaller step than the
  // smooth kinds: the third derivative is ~2/z^3 near the kink exclusion zone.
  const bool relu = act->kind == sigsoft::ActivationKind::relu_based;
  const double step = args.step > 0.0 ? args.step : (relu ? 3e-8 : 1e-5);
  constexpr double kTolerance = 1e-6;
  constexpr double kKinkExclusion = 1e-3;

  sigsoft::Prng rng(args.seed);
  double max_err = 0.0;
  int worst_trial = 0;
  Eigen::Index worst_row = 0, worst_col = 0;
  double worst_analytic = 0.0, worst_numeric = 0.0;
  Eigen::VectorXd worst_z = Eigen::VectorXd::Zero(args.dim);
  for (int t = 0; t < args.trials; ++t) {
    Eigen::VectorXd z(args.dim);
    for (int attempt = 0;; ++attempt) {
      for (int i = 0; i < args.dim; ++i) z(i) = rng.uniform(-5.0, 5.0);
      if (!relu || z.cwiseAbs().minCoeff() >= kKinkExclusion) break;
      if (attempt > 10000)
        throw std::runtime_error("grad-check: kink exclusion failed");
    }
    const Eigen::MatrixXd analytic = sigsoft::log_jacobian(*act, z).entries;
    const Eigen::MatrixXd numeric =
        sigsoft::finite_difference_log_jacobian(*act, z, step);
    for (Eigen::Index i = 0; i < analytic.rows(); ++i)
      for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
        const double err = std::abs(analytic(i, j) - numeric(i, j));
        if (err > max_err) {
          max_err = err;
          worst_trial = t;
          worst_row = i;
          worst_col = j;
          worst_analytic = analytic(i, j);
          worst_numeric = numeric(i, j);
          worst_z = z;
        }
      }
  }
  const bool pass = max_err <= kTolerance;
  ordered_json report{
      {"subcommand", "grad-check"},
      {"kind", act->name()},
      {"dim", args.dim},
      {"trials", args.trials},
      {"step", step},
      {"seed", args.seed},
      {"tolerance", kTolerance},
      {"max_abs_error", max_err},
      {"worst",
       ordered_json{{"trial", worst_trial},
                    {"row", worst_row},
                    {"col", worst_col},
                    {"analytic", worst_analytic},
                    {"numeric", worst_numeric},
                    {"z", std::vector<double>(worst_z.data(),
                                              worst_z.data() + worst_z.size())}}},
      {"pass", pass}};
  if (!emit_report(report, args.out)) return kExitFailure;
  return pass ? kExitSuccess : kExitFailure;
}

struct LimitCheckArgs {
  int dim = 10;
  int kmax = 30;
  int trials = 20;
  std::uint64_t seed = 1;
  std::string out;
};

int run_limit_check(const LimitCheckArgs& args) {
  if (args.dim < 2 || args.kmax < 1 || args.trials < 1)
    return usage_error("limit-check needs --dim >= 2, --kmax >= 1, --trials >= 1");
  sigsoft::Prng rng(args.seed);
  std::vector<Eigen::VectorXd> draws;
  for (int t = 0; t < args.trials; ++t) {
    Eigen::VectorXd z(args.dim);
    for (int i = 0; i < args.dim; ++i) z(i) = rng.uniform(-10.0, 10.0);
    draws.push_back(std::move(z));
  }
  const Activation sig = Activation::sigsoftmax();
  const Activation soft = Activation::softmax();
  std::vector<double> diffs;
  for (int k = 0; k <= args.kmax; ++k) {
    double worst = 0.0;
    for (const Eigen::VectorXd& z : draws) {
      const Eigen::VectorXd shifted = z.array() + static_cast<double>(k);
      const double diff = (sigsoft::forward(sig, shifted) -
                           sigsoft::forward(soft, z))
                              .cwiseAbs()
                              .maxCoeff();
      worst = std::max(worst, diff);
    }
    diffs.push_back(worst);
  }
  constexpr double kJitter = 1e-12;
  bool monotone = true;
  for (size_t k = 0; k + 1 < diffs.size(); ++k)
    if (diffs[k + 1] > diffs[k] + kJitter) monotone = false;
  const bool limit_ok = args.kmax < 30 || diffs[30] <= 1e-10;
  const bool pass = monotone && limit_ok;
  ordered_json report{{"subcommand", "limit-check"},
                      {"dim", args.dim},
                      {"kmax", args.kmax},
                      {"trials", args.trials},
                      {"seed", args.seed},
                      {"differences", diffs},
                      {"monotone", monotone},
                      {"final_difference", diffs.back()},
                      {"pass", pass}};
  if (!emit_report(report, args.out)) return kExitFailure;
  return pass ? kExitSuccess : kExitFailure;
}

int run_counterexample(const std::string& out) {
  const sigsoft::Counterexample sig =
      sigsoft::rank_counterexample(Activation::sigsoftmax());
  const sigsoft::Counterexample soft =
      sigsoft::rank_counterexample(Activation::softmax());
  const bool pass =
      std::abs(sig.determinant) > 0.01 && std::abs(soft.determinant) <= 1e-10;
  ordered_json report{
      {"subcommand", "counterexample"},
      {"u", {1.0, 2.0, 0.0}},
      {"scales", {0.0, 1.0, -1.0}},
      {"sigsoftmax", ordered_json{{"log_outputs", matrix_json(sig.log_outputs)},
                                  {"determinant", sig.determinant}}},
      {"softmax", ordered_json{{"log_outputs", matrix_json(soft.log_outputs)},
                               {"determinant", soft.determinant}}},
      {"pass", pass}};
  if (!emit_report(report, out)) return kExitFailure;
  return pass ? kExitSuccess : kExitFailure;
}

struct RankDemoArgs {
  int tokens = 50;  // M
  int width = 5;    // d
  int inputs = 200; // T
  std::string kind = "softmax";
  bool bias = false;
  std::uint64_t seed = 1;
  std::string csv;
  std::string out;
};

int run_rank_demo(const RankDemoArgs& args) {
  const auto act = Activation::parse(args.kind);
  if (!act) return usage_error("unknown kind '" + args.kind + "'");
  if (args.width < 1 || args.tokens <= args.width || args.inputs < 1)
    return usage_error("rank-demo needs --M > --d >= 1 and --T >= 1");
  sigsoft::Prng rng(args.seed);
  Eigen::MatrixXd w;
  do {  // full column rank, smallest singular value above 1e-8
    w = sigsoft::gaussian_matrix(rng, args.tokens, args.width, 1.0);
  } while (sigsoft::singular_values(w).back() <= 1e-8);
  std::optional<Eigen::VectorXd> bias;
  if (args.bias)
    bias = sigsoft::gaussian_matrix(rng, args.tokens, 1, 1.0).col(0);
  std::vector<Eigen::VectorXd> inputs;
  for (int t = 0; t < args.inputs; ++t)
    inputs.push_back(sigsoft::gaussian_matrix(rng, args.width, 1, 1.0).col(0));
  const Eigen::MatrixXd a =
      sigsoft::collect_log_outputs(*act, w, bias, inputs);
  const sigsoft::RankReport report =
      sigsoft::rank_report(a, args.width, args.bias);

  bool pass = true;
  if (act->kind == sigsoft::ActivationKind::softmax)
    pass = report.bound_respected;
  else if (act->kind == sigsoft::ActivationKind::sigsoftmax)
    pass = report.numerical_rank > args.width + 1;
  ordered_json json{{"subcommand", "rank-demo"},
                    {"kind", act->name()},
                    {"M", args.tokens},
                    {"d", args.width},
                    {"T", args.inputs},
                    {"bias", args.bias},
                    {"seed", args.seed},
                    {"report", sigsoft::rank_report_json(report)},
                    {"pass", pass}};
  if (!emit_report(json, args.out)) return kExitFailure;
  if (!args.csv.empty() &&
      !write_file(args.csv,
                  sigsoft::singular_values_csv(report.singular_values))) {
    std::cerr << "error: cannot write " << args.csv << "\n";
    return kExitFailure;
  }
  return pass ? kExitSuccess : kExitFailure;
}

struct TableArgs {
  std::string kinds = "softmax,sigsoftmax";
  std::string seeds = "1,2,3,4,5";
  int width = 2;  // d
  double learning_rate = 0.5;
  int epochs = 20000;
  double tol = 1e-9;
  std::string out;
};

int run_comparison(const sigsoft::SyntheticLanguage& language,
                   const ordered_json& language_meta, const TableArgs& args) {
  const auto kinds = parse_kind_list(args.kinds);
  if (!kinds) return usage_error("unknown kind in '" + args.kinds + "'");
  const auto seeds = parse_seed_list(args.seeds);
  if (!seeds || seeds->empty())
    return usage_error("bad seed list '" + args.seeds + "'");
  sigsoft::TrainConfig config;
  config.learning_rate = args.learning_rate;
  config.max_epochs = args.epochs;
  config.tol = args.tol;
  const sigsoft::ComparisonTable table = sigsoft::compare_activations(
      language, args.width, *kinds, config, *seeds);
  const ordered_json json = comparison_table_json(table, language_meta);
  if (!emit_report(json, args.out.empty() ? "" : args.out + ".json"))
    return kExitFailure;
  if (!args.out.empty() &&
      !write_file(args.out + ".csv", sigsoft::comparison_table_csv(table))) {
    std::cerr << "error: cannot write " << args.out << ".csv\n";
    return kExitFailure;
  }
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sigsoftmax toolkit: output activations, log-output rank analysis, "
      "and capacity experiments"};
  app.require_subcommand(1);

  GradCheckArgs grad_args;
  CLI::App* grad = app.add_subcommand(
      "grad-check", "Analytic log-Jacobian vs central finite differences");
  grad->add_option("--kind", grad_args.kind,
                   "softmax|sigsoftmax|relu_based|sigmoid_based");
  grad->add_option("--dim", grad_args.dim, "Logit dimension M");
  grad->add_option("--trials", grad_args.trials, "Random points to test");
  grad->add_option("--step", grad_args.step,
                   "Finite-difference step (default 1e-5; 3e-8 for relu)");
  grad->add_option("--seed", grad_args.seed, "PRNG seed");
  grad->add_option("--out", grad_args.out, "Also write the JSON here");

  LimitCheckArgs limit_args;
  CLI::App* limit = app.add_subcommand(
      "limit-check", "sigsoftmax(z + k*1) -> softmax(z) as k grows");
  limit->add_option("--dim", limit_args.dim, "Logit dimension M");
  limit->add_option("--kmax", limit_args.kmax, "Largest shift k");
  limit->add_option("--trials", limit_args.trials, "Random z per k");
  limit->add_option("--seed", limit_args.seed, "PRNG seed");
  limit->add_option("--out", limit_args.out, "Also write the JSON here");

  std::string counter_out;
  CLI::App* counter = app.add_subcommand(
      "counterexample",
      "Fixed 3x3 construction: sigsoftmax log-outputs of a width-1 family "
      "are linearly independent, softmax's are not");
  counter->add_option("--out", counter_out, "Also write the JSON here");

  RankDemoArgs rank_args;
  CLI::App* rank = app.add_subcommand(
      "rank-demo", "Numerical rank of a random model's log-output matrix");
  rank->add_option("--M", rank_args.tokens, "Token count (rows)");
  rank->add_option("--d", rank_args.width, "Hidden width");
  rank->add_option("--T", rank_args.inputs, "Input count (columns)");
  rank->add_option("--kind", rank_args.kind, "Activation kind");
  rank->add_flag("--bias", rank_args.bias, "Include a bias vector");
  rank->add_option("--seed", rank_args.seed, "PRNG seed");
  rank->add_option("--csv", rank_args.csv, "Write singular values here");
  rank->add_option("--out", rank_args.out, "Also write the JSON here");

  TableArgs bottle_table;
  int bottle_n = 40, bottle_m = 10, bottle_rank = 6;
  double bottle_conc = 2.0;
  std::uint64_t bottle_lang_seed = 7;
  CLI::App* bottle = app.add_subcommand(
      "bottleneck", "Fit factor models to a generated low-logit-rank language");
  bottle->add_option("--N", bottle_n, "Context count");
  bottle->add_option("--M", bottle_m, "Token count");
  bottle->add_option("--rank", bottle_rank, "Logit rank of the language");
  bottle->add_option("--concentration", bottle_conc,
                     "Logit standard deviation of the language");
  bottle->add_option("--lang-seed", bottle_lang_seed, "Language seed");
  bottle->add_option("--d", bottle_table.width, "Model hidden width");
  bottle->add_option("--kinds", bottle_table.kinds, "Comma-separated kinds");
  bottle->add_option("--seeds", bottle_table.seeds,
                     "Comma-separated init seeds");
  bottle->add_option("--lr", bottle_table.learning_rate, "Learning rate");
  bottle->add_option("--epochs", bottle_table.epochs, "Max epochs per fit");
  bottle->add_option("--tol", bottle_table.tol,
                     "50-epoch nll improvement floor");
  bottle->add_option("--out", bottle_table.out,
                     "Prefix: writes PREFIX.json and PREFIX.csv");

  TableArgs bigram_table;
  bigram_table.seeds = "1";
  bigram_table.width = 5;
  std::string bigram_corpus;
  int bigram_cap = 100;
  double bigram_alpha = 1.0;
  CLI::App* bigram = app.add_subcommand(
      "bigram", "Fit factor models to a smoothed bigram table of a corpus");
  bigram->add_option("--corpus", bigram_corpus, "UTF-8 text file")
      ->required();
  bigram->add_option("--vocab-cap", bigram_cap, "Vocabulary size cap");
  bigram->add_option("--alpha", bigram_alpha, "Add-alpha smoothing");
  bigram->add_option("--d", bigram_table.width, "Model hidden width");
  bigram->add_option("--kinds", bigram_table.kinds, "Comma-separated kinds");
  bigram->add_option("--seeds", bigram_table.seeds,
                     "Comma-separated init seeds");
  bigram->add_option("--lr", bigram_table.learning_rate, "Learning rate");
  bigram->add_option("--epochs", bigram_table.epochs, "Max epochs per fit");
  bigram->add_option("--tol", bigram_table.tol,
                     "50-epoch nll improvement floor");
  bigram->add_option("--out", bigram_table.out,
                     "Prefix: writes PREFIX.json and PREFIX.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  int code = kExitFailure;
  try {
    if (grad->parsed()) {
      code = run_grad_check(grad_args);
    } else if (limit->parsed()) {
      code = run_limit_check(limit_args);
    } else if (counter->parsed()) {
      code = run_counterexample(counter_out);
    } else if (rank->parsed()) {
      code = run_rank_demo(rank_args);
    } else if (bottle->parsed()) {
      try {
        const sigsoft::SyntheticLanguage language = sigsoft::generate_language(
            bottle_n, bottle_m, bottle_rank, bottle_conc, bottle_lang_seed);
        const ordered_json meta{{"source", "generated"},
                                {"contexts", bottle_n},
                                {"tokens", bottle_m},
                                {"logit_rank", bottle_rank},
                                {"concentration", bottle_conc},
                                {"seed", bottle_lang_seed},
                                {"true_log_rank", language.true_log_rank}};
        code = run_comparison(language, meta, bottle_table);
      } catch (const std::invalid_argument& e) {
        return usage_error(e.what());
      }
    } else if (bigram->parsed()) {
      try {
        const sigsoft::SyntheticLanguage language =
            sigsoft::bigram_language_from_text(bigram_corpus, bigram_cap,
                                               bigram_alpha);
        const ordered_json meta{
            {"source", "bigram"},
            {"corpus", bigram_corpus},
            {"vocab_cap", bigram_cap},
            {"alpha", bigram_alpha},
            {"contexts", static_cast<int>(language.contexts())},
            {"tokens", static_cast<int>(language.tokens())},
            {"true_log_rank", language.true_log_rank}};
        code = run_comparison(language, meta, bigram_table);
      } catch (const std::invalid_argument& e) {
        return usage_error(e.what());
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - started;
  std::cerr << "elapsed_seconds " << elapsed.count() << "\n";
  return code;
}
