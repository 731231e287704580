#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace churneval {

// One customer's revenue, tenure and observed churn outcome.
struct CustomerRecord {
  std::string customer_id;
  double monthly_revenue = 0.0;  // currency per month, >= 0
  int tenure_months = 0;         // >= 0
  bool churned = false;          // true = churned (positive class)
  // Per-customer retention rate supplied directly in the input file. When
  // present it takes precedence over curve-derived ARR/TRR estimates.
  std::optional<double> retention_override;

  bool operator==(const CustomerRecord&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<CustomerRecord> records;
  std::size_t excluded_rows = 0;  // rows dropped by the churn exclusion set

  std::size_t size() const { return records.size(); }
};

struct Prediction {
  std::optional<double> score;  // in [0, 1]
  std::optional<bool> label;
};

// One model's predictions over a customer population. Hard labels are
// derived from scores at `threshold` where absent.
struct PredictionSet {
  std::string model_name;
  double threshold = 0.5;
  std::map<std::string, Prediction> entries;

  bool has_scores() const {
    for (const auto& [id, p] : entries) {
      if (!p.score.has_value()) return false;
    }
    return true;
  }

  bool resolve_label(const Prediction& p) const {
    if (p.label.has_value()) return *p.label;
    return *p.score >= threshold;
  }
};

// One customer paired with its prediction, in dataset order.
struct EvalRow {
  CustomerRecord customer;
  std::optional<double> score;
  bool predicted = false;
};

struct EvaluationView {
  std::string model_name;
  std::vector<EvalRow> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }

  bool has_scores() const {
    for (const auto& r : rows) {
      if (!r.score.has_value()) return false;
    }
    return true;
  }

  std::vector<int> true_labels() const {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.customer.churned ? 1 : 0);
    return out;
  }

  std::vector<int> predicted_labels() const {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.predicted ? 1 : 0);
    return out;
  }

  // Valid only when has_scores(); missing entries are not defaulted.
  std::vector<double> scores() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.score.value());
    return out;
  }
};

}  // namespace churneval
