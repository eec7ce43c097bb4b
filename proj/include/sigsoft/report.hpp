// Canonical report serialization. JSON keeps insertion order and rejects
// non-finite numbers by path, so identical runs serialize to identical bytes
// and broken values fail loudly instead of becoming null.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sigsoft/model.hpp"
#include "sigsoft/rank.hpp"

namespace sigsoft {

using ordered_json = nlohmann::ordered_json;

ordered_json rank_report_json(const RankReport& report);
ordered_json fit_report_json(const FitReport& report);

// `language_meta` is echoed verbatim under the "language" key; callers fill
// in where the language came from (generator parameters or corpus path).
ordered_json comparison_table_json(const ComparisonTable& table,
                                   const ordered_json& language_meta);

// Indented dump with trailing newline. Throws std::domain_error naming the
// JSON path of the first non-finite number.
std::string serialize_report(const ordered_json& report);

ordered_json parse_report(const std::string& text);

// Real number at 17 significant digits (round-trip exact for doubles).
std::string format_real(double x);

// Header row kind,seed,converged,epochs_run,final_nll,mean_kl,
// numerical_rank,rank_bound,bound_respected then one row per table row.
std::string comparison_table_csv(const ComparisonTable& table);

// Header "singular_value", one value per line, descending.
std::string singular_values_csv(const std::vector<double>& sv);

}  // namespace sigsoft
