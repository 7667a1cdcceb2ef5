// Report serialization: canonical JSON (sorted keys, round-trip doubles,
// no timestamps — rerunning a command reproduces the bytes), Markdown tables,
// and self-contained SVG bar charts for importance vectors.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "xaudit/audit.hpp"
#include "xaudit/dataset.hpp"
#include "xaudit/explain.hpp"
#include "xaudit/importance.hpp"
#include "xaudit/metrics.hpp"

namespace xaudit {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const MetricSet& s);
nlohmann::json to_json(const ImbalanceProfile& p);
nlohmann::json to_json(const ImportanceVector& v);
nlohmann::json to_json(const ShapMatrix& s);
nlohmann::json to_json(const TopKSet& t);
nlohmann::json to_json(const TransferReport& r);
nlohmann::json to_json(const ConsistencyReport& r);
nlohmann::json to_json(const DeltaSummary& s);
nlohmann::json to_json(const ToyAlignmentReport& r);

/// Sorted keys (nlohmann's default object order), two-space indent, trailing
/// newline. Identical values serialize to identical bytes.
std::string canonical_dump(const nlohmann::json& j);

// --- Markdown ---------------------------------------------------------------

/// Metrics as rows, one column per (name, MetricSet) entry.
std::string markdown_metric_table(
    const std::vector<std::pair<std::string, MetricSet>>& columns);
std::string markdown_importance_table(const ImportanceVector& v,
                                      std::size_t max_rows = 15);
std::string markdown_transfer(const TransferReport& r);
std::string markdown_sweep(const ConsistencyReport& r);
std::string markdown_toy(const ToyAlignmentReport& r);

// --- SVG -----------------------------------------------------------------

/// Horizontal bar chart of the largest |score| features, descending, capped
/// at max_bars. Sign is encoded by color; the chart is self-contained.
std::string svg_importance(const ImportanceVector& v, std::size_t max_bars = 15);

/// Writes bytes exactly; throws DataError when the path is unwritable.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace xaudit
