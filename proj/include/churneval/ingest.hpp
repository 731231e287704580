#pragma once

#include <string>
#include <vector>

#include "churneval/csv.hpp"
#include "churneval/types.hpp"

namespace churneval {

// Column-name mapping plus label vocabularies for a customer CSV.
// `retention` is optional: the column is loaded only when present.
struct CustomerSchema {
  std::string id = "customer_id";
  std::string revenue = "monthly_revenue";
  std::string tenure = "tenure_months";
  std::string churn = "churned";
  std::string retention = "retention";

  std::vector<std::string> churn_truthy = {"Yes", "1", "true"};
  std::vector<std::string> churn_falsy = {"No", "0", "false"};
  // Rows whose churn value matches this set are dropped (e.g. Maven's
  // "Joined" third class); the drop count is kept on the Dataset.
  std::vector<std::string> churn_exclude = {};
};

struct PredictionSchema {
  std::string id = "customer_id";
  std::string score = "score";
  std::string label = "label";
  std::vector<std::string> label_truthy = {"Yes", "1", "true"};
  std::vector<std::string> label_falsy = {"No", "0", "false"};
};

Dataset dataset_from_table(const csv::Table& table, const std::string& name,
                           const CustomerSchema& schema = {});

Dataset load_customers(const std::string& path,
                       const CustomerSchema& schema = {});

// Inverse of load_customers for the same schema; used for round-trips and
// fixture generation.
csv::Table dataset_to_table(const Dataset& dataset,
                            const CustomerSchema& schema = {});
void write_customers(const std::string& path, const Dataset& dataset,
                     const CustomerSchema& schema = {});

PredictionSet predictions_from_table(const csv::Table& table,
                                     const std::string& model_name,
                                     double threshold = 0.5,
                                     const PredictionSchema& schema = {});

PredictionSet load_predictions(const std::string& path,
                               const std::string& model_name,
                               double threshold = 0.5,
                               const PredictionSchema& schema = {});

// Pairs every customer with its prediction, in dataset order. Fails with
// KeyMismatch unless the id sets are identical.
EvaluationView join_validate(const Dataset& dataset,
                             const PredictionSet& predictions);

}  // namespace churneval
