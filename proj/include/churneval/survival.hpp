#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "churneval/types.hpp"

namespace churneval {

enum class RetentionMode { ARR, TRR };

enum class ArrEvalPoint { MeanTenure, MedianTenure, FixedTime };

const char* retention_mode_name(RetentionMode mode);
RetentionMode retention_mode_from_name(const std::string& name);

// Lower clamp for retention rates; keeps conditional survival ratios and
// CLV denominators away from zero.
inline constexpr double kRetentionEpsilon = 1e-6;

struct RetentionConfig {
  RetentionMode mode = RetentionMode::ARR;
  int horizon_months = 12;   // TRR conditional horizon
  double cap = 0.995;        // upper clamp on every retention rate
  ArrEvalPoint arr_eval = ArrEvalPoint::MeanTenure;
  double arr_fixed_time = 0.0;  // used when arr_eval == FixedTime
};

/// Kaplan-Meier product-limit estimate of S(t) over customer tenure.
/// Stored as a right-continuous step function: survival_probs[i] is S(t) for
/// event_times[i] <= t < event_times[i+1], and S(t) = 1 before the first
/// event time. Censored observations shrink the risk set without adding a
/// step. Ties between events and censorings at the same time are resolved
/// events-first.
class SurvivalCurve {
 public:
  SurvivalCurve() = default;

  static SurvivalCurve fit(const std::vector<double>& durations,
                           const std::vector<int>& events);

  double survival_at(double t) const;

  bool fitted() const { return n_fitted_ > 0; }
  std::size_t n_fitted() const { return n_fitted_; }
  const std::vector<double>& event_times() const { return event_times_; }
  const std::vector<double>& survival_probs() const { return survival_probs_; }

 private:
  std::vector<double> event_times_;
  std::vector<double> survival_probs_;
  std::size_t n_fitted_ = 0;
};

SurvivalCurve fit_kaplan_meier(const std::vector<double>& durations,
                               const std::vector<int>& events);
SurvivalCurve fit_kaplan_meier(const Dataset& dataset);

double clamp_retention(double rate, double cap);

// Global retention rate: S evaluated at the configured tenure point
// (mean by default), clamped to (epsilon, cap].
double average_retention_rate(const SurvivalCurve& curve,
                              const std::vector<double>& tenures,
                              const RetentionConfig& config = {});
double average_retention_rate(const SurvivalCurve& curve,
                              const Dataset& dataset,
                              const RetentionConfig& config = {});

// Per-customer retention rate: forward conditional survival
// S(tenure + horizon) / S(tenure), clamped to (epsilon, cap]. A fully
// churned segment (S(tenure) == 0) degenerates to epsilon.
double tenure_retention_rate(const SurvivalCurve& curve, double tenure,
                             const RetentionConfig& config = {});

// Two-column CSV (time, survival) for external plotting.
std::string curve_to_csv(const SurvivalCurve& curve);
void write_curve_csv(const std::string& path, const SurvivalCurve& curve);

}  // namespace churneval
