#include "churneval/survival.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "churneval/errors.hpp"

namespace churneval {

const char* retention_mode_name(RetentionMode mode) {
  return mode == RetentionMode::ARR ? "ARR" : "TRR";
}

RetentionMode retention_mode_from_name(const std::string& name) {
  std::string n = name;
  std::transform(n.begin(), n.end(), n.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (n == "ARR") return RetentionMode::ARR;
  if (n == "TRR") return RetentionMode::TRR;
  raise(ErrorCode::InvalidConfig,
        "unknown retention mode \"" + name + "\" (expected arr or trr)");
}

SurvivalCurve SurvivalCurve::fit(const std::vector<double>& durations,
                                 const std::vector<int>& events) {
  if (durations.size() != events.size()) {
    raise(ErrorCode::LengthMismatch,
          "durations has " + std::to_string(durations.size()) +
              " entries, events has " + std::to_string(events.size()));
  }
  if (durations.empty()) {
    raise(ErrorCode::EmptyInput, "no observations to fit");
  }
  for (double d : durations) {
    if (!(d >= 0.0)) {
      raise(ErrorCode::InvalidConfig, "durations must be non-negative");
    }
  }

  std::vector<std::size_t> order(durations.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (durations[a] != durations[b]) return durations[a] < durations[b];
    return events[a] > events[b];  // events before censorings
  });

  SurvivalCurve curve;
  curve.n_fitted_ = durations.size();

  double survival = 1.0;
  std::size_t at_risk = durations.size();
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = durations[order[i]];
    std::size_t deaths = 0;
    std::size_t removed = 0;
    while (i < order.size() && durations[order[i]] == t) {
      if (events[order[i]]) ++deaths;
      ++removed;
      ++i;
    }
    if (deaths > 0) {
      survival *= 1.0 - static_cast<double>(deaths) /
                            static_cast<double>(at_risk);
      curve.event_times_.push_back(t);
      curve.survival_probs_.push_back(survival);
    }
    at_risk -= removed;
  }
  return curve;
}

double SurvivalCurve::survival_at(double t) const {
  // Largest event time <= t; S = 1 before the first event.
  auto it = std::upper_bound(event_times_.begin(), event_times_.end(), t);
  if (it == event_times_.begin()) return 1.0;
  return survival_probs_[static_cast<std::size_t>(
      std::distance(event_times_.begin(), it) - 1)];
}

SurvivalCurve fit_kaplan_meier(const std::vector<double>& durations,
                               const std::vector<int>& events) {
  return SurvivalCurve::fit(durations, events);
}

SurvivalCurve fit_kaplan_meier(const Dataset& dataset) {
  std::vector<double> durations;
  std::vector<int> events;
  durations.reserve(dataset.records.size());
  events.reserve(dataset.records.size());
  for (const auto& rec : dataset.records) {
    durations.push_back(static_cast<double>(rec.tenure_months));
    events.push_back(rec.churned ? 1 : 0);
  }
  return SurvivalCurve::fit(durations, events);
}

double clamp_retention(double rate, double cap) {
  return std::clamp(rate, kRetentionEpsilon, cap);
}

namespace {

double arr_tenure_point(const std::vector<double>& tenures,
                        const RetentionConfig& config) {
  switch (config.arr_eval) {
    case ArrEvalPoint::FixedTime:
      return config.arr_fixed_time;
    case ArrEvalPoint::MedianTenure: {
      std::vector<double> sorted = tenures;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t n = sorted.size();
      if (n % 2 == 1) return sorted[n / 2];
      return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    }
    case ArrEvalPoint::MeanTenure:
    default:
      return std::accumulate(tenures.begin(), tenures.end(), 0.0) /
             static_cast<double>(tenures.size());
  }
}

}  // namespace

double average_retention_rate(const SurvivalCurve& curve,
                              const std::vector<double>& tenures,
                              const RetentionConfig& config) {
  if (!curve.fitted()) {
    raise(ErrorCode::UnfittedCurve, "average_retention_rate needs a fitted curve");
  }
  if (tenures.empty() && config.arr_eval != ArrEvalPoint::FixedTime) {
    raise(ErrorCode::EmptyInput, "no tenures to evaluate ARR over");
  }
  return clamp_retention(curve.survival_at(arr_tenure_point(tenures, config)),
                         config.cap);
}

double average_retention_rate(const SurvivalCurve& curve,
                              const Dataset& dataset,
                              const RetentionConfig& config) {
  std::vector<double> tenures;
  tenures.reserve(dataset.records.size());
  for (const auto& rec : dataset.records) {
    tenures.push_back(static_cast<double>(rec.tenure_months));
  }
  return average_retention_rate(curve, tenures, config);
}

double tenure_retention_rate(const SurvivalCurve& curve, double tenure,
                             const RetentionConfig& config) {
  if (!curve.fitted()) {
    raise(ErrorCode::UnfittedCurve, "tenure_retention_rate needs a fitted curve");
  }
  if (tenure < 0.0) {
    raise(ErrorCode::InvalidConfig, "tenure must be non-negative");
  }
  const double s_now = curve.survival_at(tenure);
  if (s_now <= 0.0) return kRetentionEpsilon;  // segment fully churned
  const double s_later =
      curve.survival_at(tenure + static_cast<double>(config.horizon_months));
  return clamp_retention(s_later / s_now, config.cap);
}

std::string curve_to_csv(const SurvivalCurve& curve) {
  std::string out = "time,survival\n";
  char buf[64];
  for (std::size_t i = 0; i < curve.event_times().size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", curve.event_times()[i],
                  curve.survival_probs()[i]);
    out += buf;
  }
  return out;
}

void write_curve_csv(const std::string& path, const SurvivalCurve& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    raise(ErrorCode::IoError, "cannot write " + path);
  }
  out << curve_to_csv(curve);
  if (!out) {
    raise(ErrorCode::IoError, "write failed for " + path);
  }
}

}  // namespace churneval
