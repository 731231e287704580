#include "churneval/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "churneval/errors.hpp"

namespace churneval {

namespace {

struct ClassBalance {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

ClassBalance check_inputs(const std::vector<double>& scores,
                          const std::vector<int>& labels, const char* context,
                          bool require_both_classes) {
  if (scores.size() != labels.size()) {
    raise(ErrorCode::LengthMismatch,
          std::string(context) + ": " + std::to_string(scores.size()) +
              " scores vs " + std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) {
    raise(ErrorCode::EmptyInput, std::string(context) + ": no customers");
  }
  ClassBalance balance;
  for (int label : labels) {
    (label != 0 ? balance.n_pos : balance.n_neg) += 1;
  }
  if (require_both_classes && (balance.n_pos == 0 || balance.n_neg == 0)) {
    raise(ErrorCode::SingleClass,
          std::string(context) + ": needs churners and non-churners, got " +
              std::to_string(balance.n_pos) + " churners out of " +
              std::to_string(labels.size()));
  }
  return balance;
}

// Indices sorted by score descending; equal scores keep input order.
std::vector<std::size_t> order_by_score_desc(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

void validate_emp_params(const EmpParams& params) {
  if (!(params.clv > 0.0)) {
    raise(ErrorCode::InvalidConfig, "emp: clv must be positive");
  }
  if (params.offer_cost < 0.0 || params.contact_cost < 0.0) {
    raise(ErrorCode::InvalidConfig, "emp: costs must be non-negative");
  }
  if (params.offer_cost >= params.clv) {
    raise(ErrorCode::InvalidConfig,
          "emp: offer cost must be below clv, got " +
              std::to_string(params.offer_cost) + " vs " +
              std::to_string(params.clv));
  }
  if (!(params.beta_alpha > 0.0) || !(params.beta_beta > 0.0)) {
    raise(ErrorCode::InvalidConfig, "emp: beta shape parameters must be positive");
  }
  if (!(params.fraction_cap > 0.0) || params.fraction_cap > 1.0) {
    raise(ErrorCode::InvalidConfig,
          "emp: fraction cap must lie in (0, 1], got " +
              std::to_string(params.fraction_cap));
  }
}

}  // namespace

ConfusionCounts confusion(const std::vector<int>& truth,
                          const std::vector<int>& predicted) {
  if (truth.size() != predicted.size()) {
    raise(ErrorCode::LengthMismatch,
          "confusion: " + std::to_string(truth.size()) + " truth labels vs " +
              std::to_string(predicted.size()) + " predictions");
  }
  if (truth.empty()) {
    raise(ErrorCode::EmptyInput, "confusion: no customers");
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual = truth[i] != 0;
    const bool flagged = predicted[i] != 0;
    if (actual && flagged) {
      ++counts.tp;
    } else if (!actual && flagged) {
      ++counts.fp;
    } else if (actual) {
      ++counts.fn;
    } else {
      ++counts.tn;
    }
  }
  return counts;
}

double accuracy(const ConfusionCounts& counts) {
  const std::size_t total = counts.total();
  if (total == 0) return 0.0;
  return static_cast<double>(counts.tp + counts.tn) / static_cast<double>(total);
}

double f1(const ConfusionCounts& counts) {
  const double denom =
      static_cast<double>(2 * counts.tp + counts.fp + counts.fn);
  if (denom == 0.0) return 0.0;
  return 2.0 * static_cast<double>(counts.tp) / denom;
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  const ClassBalance balance = check_inputs(scores, labels, "auc", true);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Mid-rank rank sum over churners: tied scores share the average rank.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = static_cast<double>(i + 1 + j) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) rank_sum += mid_rank;
    }
    i = j;
  }

  const double n_pos = static_cast<double>(balance.n_pos);
  const double n_neg = static_cast<double>(balance.n_neg);
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

double top_decile_lift(const std::vector<double>& scores,
                       const std::vector<int>& labels) {
  const ClassBalance balance = check_inputs(scores, labels, "top_decile_lift", false);
  if (balance.n_pos == 0) {
    raise(ErrorCode::SingleClass, "top_decile_lift: no churners in dataset");
  }
  const std::size_t n = labels.size();
  const std::size_t top = (n + 9) / 10;  // ceil(0.1 n)
  const std::vector<std::size_t> order = order_by_score_desc(scores);
  std::size_t top_pos = 0;
  for (std::size_t k = 0; k < top; ++k) {
    if (labels[order[k]] != 0) ++top_pos;
  }
  const double top_rate = static_cast<double>(top_pos) / static_cast<double>(top);
  const double base_rate =
      static_cast<double>(balance.n_pos) / static_cast<double>(n);
  return top_rate / base_rate;
}

double lift_index(const std::vector<double>& scores,
                  const std::vector<int>& labels) {
  const ClassBalance balance = check_inputs(scores, labels, "lift_index", false);
  if (balance.n_pos == 0) {
    raise(ErrorCode::SingleClass, "lift_index: no churners in dataset");
  }
  const std::size_t n = labels.size();
  const std::vector<std::size_t> order = order_by_score_desc(scores);

  // Ten deciles; the leading n % 10 deciles take the extra customer.
  const std::size_t base = n / 10;
  const std::size_t remainder = n % 10;
  double weighted = 0.0;
  std::size_t cursor = 0;
  for (std::size_t decile = 1; decile <= 10 && cursor < n; ++decile) {
    const std::size_t size = base + (decile <= remainder ? 1 : 0);
    const double weight = static_cast<double>(11 - decile) / 10.0;
    for (std::size_t k = 0; k < size; ++k, ++cursor) {
      if (labels[order[cursor]] != 0) weighted += weight;
    }
  }
  return weighted / static_cast<double>(balance.n_pos);
}

namespace detail {

std::vector<RocPoint> roc_points(const std::vector<double>& scores,
                                 const std::vector<int>& labels) {
  const ClassBalance balance = check_inputs(scores, labels, "roc", true);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  std::vector<RocPoint> points;
  points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double cut = scores[order[i]];
    while (i < order.size() && scores[order[i]] == cut) {
      (labels[order[i]] != 0 ? tp : fp) += 1;
      ++i;
    }
    points.push_back({static_cast<double>(fp) / static_cast<double>(balance.n_neg),
                      static_cast<double>(tp) / static_cast<double>(balance.n_pos)});
  }
  return points;
}

std::vector<RocPoint> roc_convex_hull(std::vector<RocPoint> points) {
  std::vector<RocPoint> hull;
  for (const RocPoint& p : points) {
    // Keep the chain concave: drop the middle vertex whenever it sits on or
    // below the segment joining its neighbours.
    while (hull.size() >= 2) {
      const RocPoint& a = hull[hull.size() - 2];
      const RocPoint& b = hull[hull.size() - 1];
      const double cross =
          (b.fpr - a.fpr) * (p.tpr - a.tpr) - (b.tpr - a.tpr) * (p.fpr - a.fpr);
      if (cross >= -1e-12) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  return hull;
}

std::vector<RocPoint> truncate_hull(const std::vector<RocPoint>& hull,
                                    double cap, double pi0, double pi1) {
  std::vector<RocPoint> out;
  out.push_back(hull.front());
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const double eta = pi0 * hull[k].tpr + pi1 * hull[k].fpr;
    if (eta <= cap + 1e-12) {
      out.push_back(hull[k]);
      continue;
    }
    // The targeted fraction crosses the cap inside this segment.
    const RocPoint& prev = out.back();
    const double eta_prev = pi0 * prev.tpr + pi1 * prev.fpr;
    const double t = (cap - eta_prev) / (eta - eta_prev);
    out.push_back({prev.fpr + t * (hull[k].fpr - prev.fpr),
                   prev.tpr + t * (hull[k].tpr - prev.tpr)});
    break;
  }
  return out;
}

}  // namespace detail

double emp(const std::vector<double>& scores, const std::vector<int>& labels,
           const EmpParams& params) {
  validate_emp_params(params);
  const ClassBalance balance = check_inputs(scores, labels, "emp", true);

  const double n = static_cast<double>(labels.size());
  const double pi0 = static_cast<double>(balance.n_pos) / n;
  const double pi1 = static_cast<double>(balance.n_neg) / n;
  const double delta = params.offer_cost / params.clv;
  const double phi = params.contact_cost / params.clv;

  std::vector<detail::RocPoint> hull =
      detail::roc_convex_hull(detail::roc_points(scores, labels));
  if (params.fraction_cap < 1.0) {
    hull = detail::truncate_hull(hull, params.fraction_cap, pi0, pi1);
  }

  // Acceptance rate at which hull vertex k overtakes vertex k-1. Breakpoints
  // grow along the hull because its slopes shrink.
  std::vector<double> enters(hull.size(), 1.0);
  double last = 0.0;
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const double df0 = hull[k].tpr - hull[k - 1].tpr;
    const double df1 = hull[k].fpr - hull[k - 1].fpr;
    double gamma = 1.0;
    if (df0 > 0.0) {
      gamma = (phi + (delta + phi) * (pi1 * df1) / (pi0 * df0)) / (1.0 - delta);
      gamma = std::min(1.0, std::max(0.0, gamma));
    }
    gamma = std::max(gamma, last);
    last = gamma;
    enters[k] = gamma;
  }

  // Integrate the piecewise-linear optimum against the Beta density. Over
  // [a, b] where vertex k is optimal the profit is linear in gamma, and
  //   int gamma Beta(g;a,b) dg = alpha/(alpha+beta) * dI(alpha+1, beta).
  const double alpha = params.beta_alpha;
  const double beta = params.beta_beta;
  const double mean_factor = alpha / (alpha + beta);
  double total = 0.0;
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const double a = enters[k];
    const double b = (k + 1 < hull.size()) ? enters[k + 1] : 1.0;
    if (b <= a) continue;
    const double gamma_mass =
        mean_factor * (boost::math::ibeta(alpha + 1.0, beta, b) -
                       boost::math::ibeta(alpha + 1.0, beta, a));
    const double unit_mass = boost::math::ibeta(alpha, beta, b) -
                             boost::math::ibeta(alpha, beta, a);
    total += params.clv * (1.0 - delta) * pi0 * hull[k].tpr * gamma_mass -
             params.clv * (phi * pi0 * hull[k].tpr + (delta + phi) * pi1 * hull[k].fpr) *
                 unit_mass;
  }
  return total;
}

double maximum_profit(const std::vector<double>& scores,
                      const std::vector<int>& labels, const EmpParams& params,
                      double gamma) {
  validate_emp_params(params);
  if (gamma < 0.0 || gamma > 1.0) {
    raise(ErrorCode::InvalidConfig,
          "maximum_profit: acceptance rate must lie in [0, 1], got " +
              std::to_string(gamma));
  }
  const ClassBalance balance = check_inputs(scores, labels, "maximum_profit", true);

  const double n = static_cast<double>(labels.size());
  const double pi0 = static_cast<double>(balance.n_pos) / n;
  const double pi1 = static_cast<double>(balance.n_neg) / n;
  const double benefit = gamma * (params.clv - params.offer_cost) - params.contact_cost;
  const double cost = params.offer_cost + params.contact_cost;

  double best = 0.0;
  for (const detail::RocPoint& p : detail::roc_points(scores, labels)) {
    const double fraction = pi0 * p.tpr + pi1 * p.fpr;
    if (fraction > params.fraction_cap + 1e-12) continue;
    best = std::max(best, benefit * pi0 * p.tpr - cost * pi1 * p.fpr);
  }
  return best;
}

}  // namespace churneval
