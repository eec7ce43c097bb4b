#include "sigsoft/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sigsoft {
namespace {

void require_finite_json(const ordered_json& node, const std::string& path) {
  switch (node.type()) {
    case nlohmann::detail::value_t::number_float:
      if (!std::isfinite(node.get<double>()))
        throw std::domain_error("serialize_report: non-finite value at " +
                                path);
      break;
    case nlohmann::detail::value_t::object:
      for (const auto& [key, value] : node.items())
        require_finite_json(value, path + "." + key);
      break;
    case nlohmann::detail::value_t::array: {
      size_t i = 0;
      for (const auto& value : node)
        require_finite_json(value, path + "[" + std::to_string(i++) + "]");
      break;
    }
    default:
      break;
  }
}

}  // namespace

ordered_json rank_report_json(const RankReport& report) {
  return ordered_json{{"singular_values", report.singular_values},
                      {"threshold", report.threshold},
                      {"numerical_rank", report.numerical_rank},
                      {"bound", report.bound},
                      {"bound_respected", report.bound_respected}};
}

ordered_json fit_report_json(const FitReport& report) {
  return ordered_json{{"mean_kl", report.mean_kl},
                      {"final_nll", report.final_nll},
                      {"epochs_run", report.epochs_run},
                      {"converged", report.converged},
                      {"note", report.note},
                      {"per_context_kl", report.per_context_kl}};
}

ordered_json comparison_table_json(const ComparisonTable& table,
                                   const ordered_json& language_meta) {
  ordered_json rows = ordered_json::array();
  for (const ComparisonRow& row : table.rows)
    rows.push_back(ordered_json{{"kind", row.kind},
                                {"seed", row.seed},
                                {"fit", fit_report_json(row.fit)},
                                {"rank", rank_report_json(row.rank)}});
  ordered_json aggregates = ordered_json::array();
  for (const KindAggregate& agg : table.aggregates)
    aggregates.push_back(ordered_json{{"kind", agg.kind},
                                      {"mean_kl_mean", agg.mean_kl_mean},
                                      {"mean_kl_stddev", agg.mean_kl_stddev}});
  return ordered_json{
      {"language", language_meta},
      {"hidden_dim", table.hidden_dim},
      {"config", ordered_json{{"learning_rate", table.config.learning_rate},
                              {"max_epochs", table.config.max_epochs},
                              {"tol", table.config.tol}}},
      {"rows", rows},
      {"aggregates", aggregates}};
}

std::string serialize_report(const ordered_json& report) {
  require_finite_json(report, "$");
  return report.dump(2) + "\n";
}

ordered_json parse_report(const std::string& text) {
  return ordered_json::parse(text);
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string comparison_table_csv(const ComparisonTable& table) {
  std::string csv =
      "kind,seed,converged,epochs_run,final_nll,mean_kl,numerical_rank,"
      "rank_bound,bound_respected\n";
  for (const ComparisonRow& row : table.rows) {
    csv += row.kind;
    csv += ',' + std::to_string(row.seed);
    csv += row.fit.converged ? ",true" : ",false";
    csv += ',' + std::to_string(row.fit.epochs_run);
    csv += ',' + format_real(row.fit.final_nll);
    csv += ',' + format_real(row.fit.mean_kl);
    csv += ',' + std::to_string(row.rank.numerical_rank);
    csv += ',' + std::to_string(row.rank.bound);
    csv += row.rank.bound_respected ? ",true\n" : ",false\n";
  }
  return csv;
}

std::string singular_values_csv(const std::vector<double>& sv) {
  std::string csv = "singular_value\n";
  for (double s : sv) csv += format_real(s) + "\n";
  return csv;
}

}  // namespace sigsoft
