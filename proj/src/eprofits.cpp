#include "churneval/eprofits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "churneval/csv.hpp"
#include "churneval/errors.hpp"
#include "json.hpp"

namespace churneval {

std::vector<std::size_t> select_segment(
    const EvaluationView& view, double fraction,
    const std::vector<double>& clv_per_customer) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    raise(ErrorCode::InvalidConfig, "segment fraction must be in (0, 1]");
  }

  std::vector<std::size_t> indices(view.size());
  std::iota(indices.begin(), indices.end(), 0);
  if (fraction == 1.0) return indices;

  if (!view.has_scores()) {
    raise(ErrorCode::ScoresRequired,
          view.model_name + ": top-segment selection needs a score for every "
                            "customer");
  }
  if (clv_per_customer.size() != view.size()) {
    raise(ErrorCode::LengthMismatch,
          "clv_per_customer has " + std::to_string(clv_per_customer.size()) +
              " entries, view has " + std::to_string(view.size()));
  }

  // Score descending, then CLV descending; stable keeps input order for
  // customers tied on both keys.
  std::stable_sort(indices.begin(), indices.end(),
                   [&](std::size_t a, std::size_t b) {
                     const double sa = *view.rows[a].score;
                     const double sb = *view.rows[b].score;
                     if (sa != sb) return sa > sb;
                     return clv_per_customer[a] > clv_per_customer[b];
                   });

  const auto segment_size = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(view.size())));
  indices.resize(std::min(segment_size, indices.size()));
  return indices;
}

EProfitsResult total_eprofits(const EvaluationView& view,
                              const SurvivalCurve* curve,
                              const CostParams& cost,
                              const EProfitsConfig& config,
                              const RetentionConfig& retention) {
  if (view.empty()) {
    raise(ErrorCode::EmptyInput, view.model_name + ": empty evaluation view");
  }

  const bool needs_curve =
      std::any_of(view.rows.begin(), view.rows.end(), [](const EvalRow& r) {
        return !r.customer.retention_override.has_value();
      });
  if (needs_curve && (curve == nullptr || !curve->fitted())) {
    raise(ErrorCode::UnfittedCurve,
          view.model_name +
              ": retention estimation needs a fitted survival curve");
  }

  // ARR is one global rate per run, computed once over the view's tenures.
  double arr = 0.0;
  if (needs_curve && config.retention_mode == RetentionMode::ARR) {
    std::vector<double> tenures;
    tenures.reserve(view.size());
    for (const auto& r : view.rows) {
      tenures.push_back(static_cast<double>(r.customer.tenure_months));
    }
    arr = average_retention_rate(*curve, tenures, retention);
  }

  const std::size_t n = view.size();
  std::vector<double> retention_rate(n);
  std::vector<double> clv_value(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = view.rows[i].customer;
    if (rec.retention_override) {
      retention_rate[i] = clamp_retention(*rec.retention_override,
                                          retention.cap);
    } else if (config.retention_mode == RetentionMode::ARR) {
      retention_rate[i] = arr;
    } else {
      retention_rate[i] = tenure_retention_rate(
          *curve, static_cast<double>(rec.tenure_months), retention);
    }
    clv_value[i] = clv(rec.monthly_revenue, config.margin, retention_rate[i],
                       cost.retention_cap);
  }

  const auto segment =
      select_segment(view, config.segment_fraction, clv_value);
  std::vector<char> in_segment(n, 0);
  for (std::size_t idx : segment) in_segment[idx] = 1;

  EProfitsResult result;
  result.n_segment = segment.size();
  if (config.keep_breakdown) result.per_customer.emplace();

  // Summation runs in input order so totals are reproducible regardless of
  // how the segment was ranked.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = view.rows[i];
    const double offer = offer_cost(clv_value[i], cost.cpo);
    const double contact =
        contact_cost(offer, cost.contact_floor, cost.contact_mult);
    const ProfitBreakdown pb = customer_profit(
        row.customer.churned, row.predicted, clv_value[i], offer, contact);

    if (in_segment[i]) {
      result.total += pb.profit;
      if (row.predicted) ++result.n_targeted;
    }
    if (result.per_customer) {
      CustomerProfitRow out;
      out.customer_id = row.customer.customer_id;
      out.retention = retention_rate[i];
      out.clv = clv_value[i];
      out.offer_cost = pb.offer_cost;
      out.contact_cost = pb.contact_cost;
      out.profit = pb.profit;
      out.outcome = pb.outcome;
      out.in_segment = in_segment[i] != 0;
      result.per_customer->push_back(std::move(out));
    }
  }
  return result;
}

std::string result_to_json(const EvaluationView& view,
                           const EProfitsConfig& config,
                           const EProfitsResult& result) {
  nlohmann::ordered_json j;
  j["model"] = view.model_name;
  j["fraction"] = config.segment_fraction;
  j["margin"] = config.margin;
  j["mode"] = retention_mode_name(config.retention_mode);
  j["total"] = result.total;
  j["n_targeted"] = result.n_targeted;
  j["n_segment"] = result.n_segment;
  return j.dump();
}

std::string breakdown_to_csv(const EProfitsResult& result) {
  std::string out =
      "customer_id,retention,clv,offer_cost,contact_cost,profit,outcome,"
      "in_segment\n";
  if (!result.per_customer) return out;
  char buf[160];
  for (const auto& row : *result.per_customer) {
    std::snprintf(buf, sizeof(buf), ",%.10g,%.10g,%.10g,%.10g,%.10g,%s,%d\n",
                  row.retention, row.clv, row.offer_cost, row.contact_cost,
                  row.profit, outcome_name(row.outcome),
                  row.in_segment ? 1 : 0);
    out += csv::escape_field(row.customer_id);
    out += buf;
  }
  return out;
}

}  // namespace churneval
