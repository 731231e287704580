#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "churneval/baselines.hpp"
#include "churneval/economics.hpp"
#include "churneval/eprofits.hpp"
#include "churneval/survival.hpp"
#include "churneval/types.hpp"

namespace churneval {

struct MetricColumn {
  std::string id;       // stable machine identifier, e.g. "eprof:0.2:0.3:TRR"
  std::string display;  // table header, e.g. "e-Prof (0.2, 0.3, TRR)"
};

// One model x one metric configuration. Empty value = unavailable (the
// model lacks the inputs the metric needs, e.g. scores).
struct MetricReport {
  std::string model_name;
  std::string metric_id;
  std::optional<double> value;
};

struct ModelRow {
  std::string model;
  std::vector<std::optional<double>> values;  // parallel to columns
};

// Model x metric grid; rows sorted by model name.
struct ComparisonTable {
  std::vector<MetricColumn> columns;
  std::vector<ModelRow> rows;

  int column_index(const std::string& id) const;  // -1 when absent
  std::vector<MetricReport> reports() const;      // flattened cells
};

enum class TableFormat { Csv, Json, Markdown };

TableFormat table_format_from_name(const std::string& name);

// The standard e-Profits table battery: top-20% and full-population
// segments, each under the global (ARR) and tenure-based (TRR) retention
// estimate.
std::vector<EProfitsConfig> default_eprofits_battery(double margin);

// Runs the full metric battery for every model against one dataset:
// F1 / accuracy / AUC (all in percent), EMP, top-decile lift, lift index,
// one e-Profits column per config (default battery when `configs` is
// empty), and one capped-EMP column per entry of `emp_caps`. Metrics that
// need scores are left unavailable for label-only models; other metric
// failures propagate annotated with the model name.
ComparisonTable evaluate_all(const Dataset& dataset,
                             const std::vector<PredictionSet>& predictions,
                             const CostParams& cost = {},
                             const EmpParams& emp_params = {},
                             const std::vector<EProfitsConfig>& configs = {},
                             const RetentionConfig& retention = {},
                             const std::vector<double>& emp_caps = {0.2, 1.0});

// Models ordered by the chosen column, descending; ties break
// alphabetically. The column must exist and be fully available.
std::vector<std::pair<std::string, double>> rank_models(
    const ComparisonTable& table, const std::string& metric_id);

// Fixed-point rendering with trailing zeros trimmed: 66.6667, 0.875, 228.8.
std::string format_value(double value);

std::string table_to_csv(const ComparisonTable& table);
std::string table_to_json(const ComparisonTable& table);
std::string table_to_markdown(const ComparisonTable& table);
std::string render_table(const ComparisonTable& table, TableFormat format);
void write_table(const ComparisonTable& table, TableFormat format,
                 const std::string& path);

// Rebuilds a table from the JSON emission. Display names are reconstructed
// from the metric ids, which is enough for ranking and re-emission.
ComparisonTable table_from_json(const std::string& json_text);

// Per-model min-max normalised metric vector (CSV, one row per model) for
// external radar charting. Columns with no spread normalise to 1.
std::string radar_csv(const ComparisonTable& table);

}  // namespace churneval
