#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "churneval/economics.hpp"
#include "churneval/survival.hpp"
#include "churneval/types.hpp"

namespace churneval {

// One metric configuration: which slice of the population to score and how
// to estimate retention. fraction 1.0 = full population, 0.2 = top segment.
struct EProfitsConfig {
  double segment_fraction = 1.0;  // in (0, 1]
  double margin = 0.3;
  RetentionMode retention_mode = RetentionMode::ARR;
  bool keep_breakdown = false;
};

struct CustomerProfitRow {
  std::string customer_id;
  double retention = 0.0;
  double clv = 0.0;
  double offer_cost = 0.0;
  double contact_cost = 0.0;
  double profit = 0.0;
  Outcome outcome = Outcome::NoAction;
  bool in_segment = false;
};

struct EProfitsResult {
  double total = 0.0;
  std::size_t n_targeted = 0;  // predicted churners inside the segment
  std::size_t n_segment = 0;
  std::optional<std::vector<CustomerProfitRow>> per_customer;
};

// Indices of the ceil(fraction * N) customers ranked by predicted churn
// score descending, ties broken by CLV descending, then stable input order.
// fraction == 1.0 returns every index in input order without needing scores.
std::vector<std::size_t> select_segment(
    const EvaluationView& view, double fraction,
    const std::vector<double>& clv_per_customer);

// Sums per-customer intervention profits over the selected segment.
// Retention per customer resolves as: explicit override if the record
// carries one, otherwise the configured ARR/TRR estimate from `curve`.
// The curve may be null when every record carries an override.
EProfitsResult total_eprofits(const EvaluationView& view,
                              const SurvivalCurve* curve,
                              const CostParams& cost,
                              const EProfitsConfig& config,
                              const RetentionConfig& retention = {});

// {model, fraction, margin, mode, total, n_targeted, n_segment}
std::string result_to_json(const EvaluationView& view,
                           const EProfitsConfig& config,
                           const EProfitsResult& result);

std::string breakdown_to_csv(const EProfitsResult& result);

}  // namespace churneval
