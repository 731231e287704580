#include "churneval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "churneval/csv.hpp"
#include "churneval/errors.hpp"
#include "churneval/ingest.hpp"

namespace churneval {

namespace {

using ordered_json = nlohmann::ordered_json;

// Ratios keep one decimal so battery fingerprints read "1.0", not "1".
std::string format_ratio(double value) {
  std::string s = format_value(value);
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

std::string eprofits_id(const EProfitsConfig& config) {
  return "eprof:" + format_ratio(config.segment_fraction) + ":" +
         format_ratio(config.margin) + ":" +
         retention_mode_name(config.retention_mode);
}

std::string eprofits_display(const EProfitsConfig& config) {
  return "e-Prof (" + format_ratio(config.segment_fraction) + ", " +
         format_ratio(config.margin) + ", " +
         retention_mode_name(config.retention_mode) + ")";
}

std::string capped_emp_id(double cap) { return "emp:" + format_ratio(cap); }

std::string capped_emp_display(double cap, const EmpParams& params) {
  return "EMP (" + format_ratio(cap) + ", " + format_value(params.clv) + ", " +
         format_value(params.offer_cost) + ", " +
         format_value(params.contact_cost) + ")";
}

// Best-effort display name for a metric id read back from JSON.
std::string display_for_id(const std::string& id) {
  static const std::map<std::string, std::string> fixed = {
      {"f1", "F1 (%)"},         {"accuracy", "Acc. (%)"},
      {"auc", "AUC (%)"},       {"emp", "EMP"},
      {"tdl", "TDL"},           {"lift_index", "Lift Index"},
  };
  if (auto it = fixed.find(id); it != fixed.end()) return it->second;
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (start <= id.size()) {
    auto colon = id.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(id.substr(start));
      break;
    }
    parts.push_back(id.substr(start, colon - start));
    start = colon + 1;
  }
  if (parts.size() == 4 && parts[0] == "eprof") {
    return "e-Prof (" + parts[1] + ", " + parts[2] + ", " + parts[3] + ")";
  }
  if (parts.size() == 2 && parts[0] == "emp") {
    return "EMP (" + parts[1] + ")";
  }
  return id;
}

std::string valid_ids(const ComparisonTable& table) {
  std::string out;
  for (const MetricColumn& col : table.columns) {
    if (!out.empty()) out += ", ";
    out += col.id;
  }
  return out;
}

std::string markdown_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

// Per-column maximum over available cells; used for markdown bolding.
std::vector<std::optional<double>> column_bests(const ComparisonTable& table) {
  std::vector<std::optional<double>> best(table.columns.size());
  for (const ModelRow& row : table.rows) {
    for (std::size_t c = 0; c < row.values.size(); ++c) {
      if (!row.values[c]) continue;
      if (!best[c] || *row.values[c] > *best[c]) best[c] = row.values[c];
    }
  }
  return best;
}

}  // namespace

int ComparisonTable::column_index(const std::string& id) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

std::vector<MetricReport> ComparisonTable::reports() const {
  std::vector<MetricReport> out;
  out.reserve(rows.size() * columns.size());
  for (const ModelRow& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out.push_back({row.model, columns[c].id, row.values[c]});
    }
  }
  return out;
}

TableFormat table_format_from_name(const std::string& name) {
  if (name == "csv") return TableFormat::Csv;
  if (name == "json") return TableFormat::Json;
  if (name == "markdown" || name == "md") return TableFormat::Markdown;
  raise(ErrorCode::InvalidConfig,
        "unknown output format '" + name + "'; expected csv, json or markdown");
}

std::vector<EProfitsConfig> default_eprofits_battery(double margin) {
  std::vector<EProfitsConfig> battery;
  for (double fraction : {0.2, 1.0}) {
    for (RetentionMode mode : {RetentionMode::ARR, RetentionMode::TRR}) {
      EProfitsConfig config;
      config.segment_fraction = fraction;
      config.margin = margin;
      config.retention_mode = mode;
      battery.push_back(config);
    }
  }
  return battery;
}

std::string format_value(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  std::string s(buf);
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    auto last = s.find_last_not_of('0');
    if (s[last] == '.') --last;
    s.erase(last + 1);
  }
  if (s == "-0") s = "0";
  return s;
}

ComparisonTable evaluate_all(const Dataset& dataset,
                             const std::vector<PredictionSet>& predictions,
                             const CostParams& cost, const EmpParams& emp_params,
                             const std::vector<EProfitsConfig>& configs,
                             const RetentionConfig& retention,
                             const std::vector<double>& emp_caps) {
  if (predictions.empty()) {
    raise(ErrorCode::NoModels, "evaluate_all: no prediction sets supplied");
  }
  {
    std::set<std::string> names;
    for (const PredictionSet& p : predictions) {
      if (!names.insert(p.model_name).second) {
        raise(ErrorCode::InvalidConfig,
              "duplicate model name '" + p.model_name + "'");
      }
    }
  }

  const std::vector<EProfitsConfig> battery =
      configs.empty() ? default_eprofits_battery(cost.margin) : configs;

  ComparisonTable table;
  table.columns = {{"f1", "F1 (%)"},   {"accuracy", "Acc. (%)"},
                   {"auc", "AUC (%)"}, {"emp", "EMP"},
                   {"tdl", "TDL"},     {"lift_index", "Lift Index"}};
  for (const EProfitsConfig& config : battery) {
    table.columns.push_back({eprofits_id(config), eprofits_display(config)});
  }
  for (double cap : emp_caps) {
    table.columns.push_back({capped_emp_id(cap), capped_emp_display(cap, emp_params)});
  }

  const SurvivalCurve curve = fit_kaplan_meier(dataset);

  for (const PredictionSet& prediction : predictions) {
    try {
      const EvaluationView view = join_validate(dataset, prediction);
      const std::vector<int> truth = view.true_labels();
      const std::vector<int> predicted = view.predicted_labels();
      const bool scored = view.has_scores();
      const std::vector<double> scores =
          scored ? view.scores() : std::vector<double>{};

      ModelRow row;
      row.model = prediction.model_name;
      const ConfusionCounts counts = confusion(truth, predicted);
      row.values.push_back(100.0 * f1(counts));
      row.values.push_back(100.0 * accuracy(counts));
      row.values.push_back(scored ? std::optional<double>(100.0 * auc(scores, truth))
                                  : std::nullopt);
      EmpParams plain = emp_params;
      plain.fraction_cap = 1.0;
      row.values.push_back(scored ? std::optional<double>(emp(scores, truth, plain))
                                  : std::nullopt);
      row.values.push_back(scored ? std::optional<double>(top_decile_lift(scores, truth))
                                  : std::nullopt);
      row.values.push_back(scored ? std::optional<double>(lift_index(scores, truth))
                                  : std::nullopt);
      for (const EProfitsConfig& config : battery) {
        if (config.segment_fraction < 1.0 && !scored) {
          row.values.push_back(std::nullopt);
          continue;
        }
        row.values.push_back(
            total_eprofits(view, &curve, cost, config, retention).total);
      }
      for (double cap : emp_caps) {
        EmpParams capped = emp_params;
        capped.fraction_cap = cap;
        row.values.push_back(scored ? std::optional<double>(emp(scores, truth, capped))
                                    : std::nullopt);
      }
      table.rows.push_back(std::move(row));
    } catch (const Error& e) {
      raise(e.code(), "model '" + prediction.model_name + "': " + e.details());
    }
  }

  std::sort(table.rows.begin(), table.rows.end(),
            [](const ModelRow& a, const ModelRow& b) { return a.model < b.model; });
  return table;
}

std::vector<std::pair<std::string, double>> rank_models(
    const ComparisonTable& table, const std::string& metric_id) {
  const int col = table.column_index(metric_id);
  if (col < 0) {
    raise(ErrorCode::UnknownMetric, "'" + metric_id +
                                        "' is not a table column; valid ids: " +
                                        valid_ids(table));
  }
  std::vector<std::pair<std::string, double>> ranked;
  ranked.reserve(table.rows.size());
  for (const ModelRow& row : table.rows) {
    const std::optional<double>& value = row.values[static_cast<std::size_t>(col)];
    if (!value) {
      raise(ErrorCode::UnavailableMetric,
            "metric '" + metric_id + "' is unavailable for model '" + row.model + "'");
    }
    ranked.emplace_back(row.model, *value);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

std::string table_to_csv(const ComparisonTable& table) {
  std::ostringstream out;
  std::vector<std::string> fields{"model"};
  for (const MetricColumn& col : table.columns) fields.push_back(col.display);
  out << csv::join_row(fields);
  for (const ModelRow& row : table.rows) {
    fields.assign({row.model});
    for (const std::optional<double>& value : row.values) {
      fields.push_back(value ? format_value(*value) : "—");
    }
    out << csv::join_row(fields);
  }
  return out.str();
}

std::string table_to_json(const ComparisonTable& table) {
  ordered_json rows = ordered_json::array();
  for (const ModelRow& row : table.rows) {
    ordered_json metrics = ordered_json::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (row.values[c]) {
        metrics[table.columns[c].id] = *row.values[c];
      } else {
        metrics[table.columns[c].id] = nullptr;
      }
    }
    rows.push_back(ordered_json{{"model", row.model}, {"metrics", metrics}});
  }
  return rows.dump(2) + "\n";
}

std::string table_to_markdown(const ComparisonTable& table) {
  const std::vector<std::optional<double>> best = column_bests(table);
  std::ostringstream out;
  out << "| Model |";
  for (const MetricColumn& col : table.columns) {
    out << " " << markdown_escape(col.display) << " |";
  }
  out << "\n|---|";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << "---:|";
  out << "\n";
  for (const ModelRow& row : table.rows) {
    out << "| " << markdown_escape(row.model) << " |";
    for (std::size_t c = 0; c < row.values.size(); ++c) {
      if (!row.values[c]) {
        out << " — |";
        continue;
      }
      const std::string text = format_value(*row.values[c]);
      if (best[c] && *row.values[c] == *best[c]) {
        out << " **" << text << "** |";
      } else {
        out << " " << text << " |";
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string render_table(const ComparisonTable& table, TableFormat format) {
  if (table.rows.empty()) {
    raise(ErrorCode::EmptyInput, "render_table: table has no rows");
  }
  switch (format) {
    case TableFormat::Csv: return table_to_csv(table);
    case TableFormat::Json: return table_to_json(table);
    case TableFormat::Markdown: return table_to_markdown(table);
  }
  raise(ErrorCode::InvalidConfig, "render_table: unhandled format");
}

void write_table(const ComparisonTable& table, TableFormat format,
                 const std::string& path) {
  const std::string rendered = render_table(table, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  }
  out << rendered;
  if (!out.flush()) {
    raise(ErrorCode::IoError, "failed writing '" + path + "'");
  }
}

ComparisonTable table_from_json(const std::string& json_text) {
  ordered_json parsed;
  try {
    parsed = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, std::string("table json: ") + e.what());
  }
  if (!parsed.is_array() || parsed.empty()) {
    raise(ErrorCode::ParseError, "table json: expected a non-empty array of rows");
  }

  ComparisonTable table;
  for (const auto& entry : parsed) {
    if (!entry.is_object() || !entry.contains("model") ||
        !entry["model"].is_string() || !entry.contains("metrics") ||
        !entry["metrics"].is_object()) {
      raise(ErrorCode::ParseError,
            "table json: each row needs a model name and a metrics object");
    }
    ModelRow row;
    row.model = entry["model"].get<std::string>();
    if (table.columns.empty()) {
      for (const auto& [id, value] : entry["metrics"].items()) {
        table.columns.push_back({id, display_for_id(id)});
        (void)value;
      }
    }
    for (const MetricColumn& col : table.columns) {
      if (!entry["metrics"].contains(col.id)) {
        raise(ErrorCode::ParseError, "table json: model '" + row.model +
                                         "' is missing metric '" + col.id + "'");
      }
      const auto& cell = entry["metrics"][col.id];
      if (cell.is_null()) {
        row.values.push_back(std::nullopt);
      } else if (cell.is_number()) {
        row.values.push_back(cell.get<double>());
      } else {
        raise(ErrorCode::ParseError, "table json: metric '" + col.id +
                                         "' of model '" + row.model +
                                         "' is not a number or null");
      }
    }
    table.rows.push_back(std::move(row));
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ModelRow& a, const ModelRow& b) { return a.model < b.model; });
  return table;
}

std::string radar_csv(const ComparisonTable& table) {
  std::vector<std::optional<double>> lo(table.columns.size());
  std::vector<std::optional<double>> hi(table.columns.size());
  for (const ModelRow& row : table.rows) {
    for (std::size_t c = 0; c < row.values.size(); ++c) {
      if (!row.values[c]) continue;
      if (!lo[c] || *row.values[c] < *lo[c]) lo[c] = row.values[c];
      if (!hi[c] || *row.values[c] > *hi[c]) hi[c] = row.values[c];
    }
  }

  std::ostringstream out;
  std::vector<std::string> fields{"model"};
  for (const MetricColumn& col : table.columns) fields.push_back(col.id);
  out << csv::join_row(fields);
  for (const ModelRow& row : table.rows) {
    fields.assign({row.model});
    for (std::size_t c = 0; c < row.values.size(); ++c) {
      if (!row.values[c]) {
        fields.push_back("");
        continue;
      }
      const double range = *hi[c] - *lo[c];
      const double scaled =
          range > 0.0 ? (*row.values[c] - *lo[c]) / range : 1.0;
      fields.push_back(format_value(scaled));
    }
    out << csv::join_row(fields);
  }
  return out.str();
}

}  // namespace churneval
