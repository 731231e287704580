#include "churneval/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "churneval/errors.hpp"

namespace churneval {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool matches(const std::vector<std::string>& vocab, const std::string& value) {
  const std::string v = lower(value);
  return std::any_of(vocab.begin(), vocab.end(),
                     [&](const std::string& w) { return lower(w) == v; });
}

int require_column(const csv::Table& table, const std::string& name,
                   const std::string& context) {
  const int idx = table.column(name);
  if (idx < 0) {
    raise(ErrorCode::MissingColumn,
          context + ": column \"" + name + "\" not found");
  }
  return idx;
}

double parse_double(const std::string& text, const std::string& what,
                    std::size_t row) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    raise(ErrorCode::ParseError,
          "row " + std::to_string(row) + ": cannot parse " + what + " \"" +
              text + "\"");
  }
  return value;
}

long parse_long(const std::string& text, const std::string& what,
                std::size_t row) {
  long value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    raise(ErrorCode::ParseError,
          "row " + std::to_string(row) + ": cannot parse " + what + " \"" +
              text + "\"");
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Dataset dataset_from_table(const csv::Table& table, const std::string& name,
                           const CustomerSchema& schema) {
  const int id_col = require_column(table, schema.id, name);
  const int rev_col = require_column(table, schema.revenue, name);
  const int ten_col = require_column(table, schema.tenure, name);
  const int churn_col = require_column(table, schema.churn, name);
  const int ret_col = table.column(schema.retention);  // optional

  Dataset ds;
  ds.name = name;
  std::unordered_set<std::string> seen;
  seen.reserve(table.rows.size());

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = i + 2;  // 1-based, after header

    const std::string& churn_text = row[churn_col];
    if (matches(schema.churn_exclude, churn_text)) {
      ++ds.excluded_rows;
      continue;
    }

    CustomerRecord rec;
    rec.customer_id = row[id_col];
    if (rec.customer_id.empty()) {
      raise(ErrorCode::ParseError,
            "row " + std::to_string(line) + ": empty customer id");
    }
    if (!seen.insert(rec.customer_id).second) {
      raise(ErrorCode::DuplicateCustomerId,
            "customer id \"" + rec.customer_id + "\" appears more than once");
    }

    rec.monthly_revenue = parse_double(row[rev_col], "revenue", line);
    if (rec.monthly_revenue < 0.0) {
      raise(ErrorCode::ParseError,
            "row " + std::to_string(line) + ": negative revenue " +
                row[rev_col]);
    }

    const long tenure = parse_long(row[ten_col], "tenure", line);
    if (tenure < 0) {
      raise(ErrorCode::ParseError,
            "row " + std::to_string(line) + ": negative tenure " +
                row[ten_col]);
    }
    rec.tenure_months = static_cast<int>(tenure);

    if (matches(schema.churn_truthy, churn_text)) {
      rec.churned = true;
    } else if (matches(schema.churn_falsy, churn_text)) {
      rec.churned = false;
    } else {
      raise(ErrorCode::ParseError,
            "row " + std::to_string(line) + ": churn value \"" + churn_text +
                "\" matches neither the truthy nor the falsy set");
    }

    if (ret_col >= 0 && !row[ret_col].empty()) {
      const double r = parse_double(row[ret_col], "retention", line);
      if (r < 0.0 || r > 1.0) {
        raise(ErrorCode::ParseError,
              "row " + std::to_string(line) + ": retention " + row[ret_col] +
                  " outside [0, 1]");
      }
      rec.retention_override = r;
    }

    ds.records.push_back(std::move(rec));
  }

  if (ds.records.empty()) {
    raise(ErrorCode::EmptyDataset, name + " has no usable data rows");
  }
  return ds;
}

Dataset load_customers(const std::string& path, const CustomerSchema& schema) {
  return dataset_from_table(csv::read_file(path), path, schema);
}

csv::Table dataset_to_table(const Dataset& dataset,
                            const CustomerSchema& schema) {
  const bool any_retention =
      std::any_of(dataset.records.begin(), dataset.records.end(),
                  [](const CustomerRecord& r) {
                    return r.retention_override.has_value();
                  });

  csv::Table table;
  table.header = {schema.id, schema.revenue, schema.tenure, schema.churn};
  if (any_retention) table.header.push_back(schema.retention);

  for (const auto& rec : dataset.records) {
    std::vector<std::string> row = {
        rec.customer_id, format_double(rec.monthly_revenue),
        std::to_string(rec.tenure_months),
        rec.churned ? schema.churn_truthy.front() : schema.churn_falsy.front()};
    if (any_retention) {
      row.push_back(rec.retention_override
                        ? format_double(*rec.retention_override)
                        : std::string());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_customers(const std::string& path, const Dataset& dataset,
                     const CustomerSchema& schema) {
  csv::write_file(path, dataset_to_table(dataset, schema));
}

PredictionSet predictions_from_table(const csv::Table& table,
                                     const std::string& model_name,
                                     double threshold,
                                     const PredictionSchema& schema) {
  if (threshold < 0.0 || threshold > 1.0) {
    raise(ErrorCode::InvalidConfig,
          "threshold " + format_double(threshold) + " outside [0, 1]");
  }
  const int id_col = require_column(table, schema.id, model_name);
  const int score_col = table.column(schema.score);
  const int label_col = table.column(schema.label);
  if (score_col < 0 && label_col < 0) {
    raise(ErrorCode::MissingColumn,
          model_name + ": needs a \"" + schema.score + "\" or \"" +
              schema.label + "\" column");
  }

  PredictionSet ps;
  ps.model_name = model_name;
  ps.threshold = threshold;

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = i + 2;

    const std::string& id = row[id_col];
    if (id.empty()) {
      raise(ErrorCode::ParseError,
            "row " + std::to_string(line) + ": empty customer id");
    }
    if (ps.entries.count(id)) {
      raise(ErrorCode::DuplicateCustomerId,
            "customer id \"" + id + "\" appears more than once");
    }

    Prediction p;
    if (score_col >= 0 && !row[score_col].empty()) {
      const double s = parse_double(row[score_col], "score", line);
      if (s < 0.0 || s > 1.0) {
        raise(ErrorCode::ScoreOutOfRange,
              "row " + std::to_string(line) + ": score " + row[score_col] +
                  " outside [0, 1]");
      }
      p.score = s;
    }
    if (label_col >= 0 && !row[label_col].empty()) {
      const std::string& text = row[label_col];
      if (matches(schema.label_truthy, text)) {
        p.label = true;
      } else if (matches(schema.label_falsy, text)) {
        p.label = false;
      } else {
        raise(ErrorCode::ParseError,
              "row " + std::to_string(line) + ": label value \"" + text +
                  "\" matches neither the truthy nor the falsy set");
      }
    }
    if (!p.score && !p.label) {
      raise(ErrorCode::ParseError,
            "row " + std::to_string(line) + ": neither score nor label given");
    }
    ps.entries.emplace(id, p);
  }

  if (ps.entries.empty()) {
    raise(ErrorCode::EmptyDataset, model_name + " has no prediction rows");
  }
  return ps;
}

PredictionSet load_predictions(const std::string& path,
                               const std::string& model_name, double threshold,
                               const PredictionSchema& schema) {
  return predictions_from_table(csv::read_file(path), model_name, threshold,
                                schema);
}

EvaluationView join_validate(const Dataset& dataset,
                             const PredictionSet& predictions) {
  std::set<std::string> dataset_ids;
  for (const auto& rec : dataset.records) dataset_ids.insert(rec.customer_id);

  std::vector<std::string> missing;  // in dataset, not in predictions
  for (const auto& rec : dataset.records) {
    if (!predictions.entries.count(rec.customer_id)) {
      missing.push_back(rec.customer_id);
    }
  }
  std::vector<std::string> extra;  // in predictions, not in dataset
  for (const auto& [id, p] : predictions.entries) {
    if (!dataset_ids.count(id)) extra.push_back(id);
  }

  if (!missing.empty() || !extra.empty()) {
    auto preview = [](const std::vector<std::string>& ids) {
      std::string out;
      const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
      for (std::size_t i = 0; i < shown; ++i) {
        if (i) out += ",";
        out += ids[i];
      }
      if (ids.size() > shown) out += ",...";
      return out;
    };
    std::string msg = predictions.model_name + ": id sets differ";
    if (!missing.empty()) {
      msg += "; missing " + std::to_string(missing.size()) + " [" +
             preview(missing) + "]";
    }
    if (!extra.empty()) {
      msg += "; extra " + std::to_string(extra.size()) + " [" + preview(extra) +
             "]";
    }
    raise(ErrorCode::KeyMismatch, msg);
  }

  EvaluationView view;
  view.model_name = predictions.model_name;
  view.rows.reserve(dataset.records.size());
  for (const auto& rec : dataset.records) {
    const Prediction& p = predictions.entries.at(rec.customer_id);
    EvalRow row;
    row.customer = rec;
    row.score = p.score;
    row.predicted = predictions.resolve_label(p);
    view.rows.push_back(std::move(row));
  }
  return view;
}

}  // namespace churneval
