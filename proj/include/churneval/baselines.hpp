#pragma once

#include <cstddef>
#include <vector>

namespace churneval {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

ConfusionCounts confusion(const std::vector<int>& truth,
                          const std::vector<int>& predicted);

double accuracy(const ConfusionCounts& counts);

// 2tp / (2tp + fp + fn); 0 by convention when the denominator vanishes.
double f1(const ConfusionCounts& counts);

// Mann-Whitney statistic: fraction of (positive, negative) pairs ranked
// correctly, ties counted half. Computed via mid-ranks.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

// Churn rate among the top ceil(0.1 N) scored customers over the overall
// churn rate. Ties in the top group resolve by stable input order.
double top_decile_lift(const std::vector<double>& scores,
                       const std::vector<int>& labels);

// Decile-weighted churner concentration: rank by score descending, split
// into 10 deciles (leading deciles absorb the remainder), and average the
// weights (11-k)/10 over churners. 1.0 = all churners in the first decile.
double lift_index(const std::vector<double>& scores,
                  const std::vector<int>& labels);

// Population-level parameters for expected-maximum-profit evaluation:
// one shared CLV, offer cost d, contact cost f, and a Beta-distributed
// offer acceptance rate gamma.
struct EmpParams {
  double clv = 200.0;
  double offer_cost = 10.0;    // d
  double contact_cost = 1.0;   // f
  double beta_alpha = 6.0;
  double beta_beta = 14.0;
  double fraction_cap = 1.0;   // cap on the targeted fraction of customers
};

// Expected maximum profit per customer: the profit of the best threshold,
// integrated over Beta(alpha, beta)-distributed acceptance rates. Computed
// in closed form along the ROC convex hull via regularised incomplete-beta
// differences; fraction_cap < 1 truncates the hull where the targeted
// fraction pi0*F0 + pi1*F1 reaches the cap.
double emp(const std::vector<double>& scores, const std::vector<int>& labels,
           const EmpParams& params = {});

// Profit per customer at the best threshold for one fixed acceptance rate.
// Never negative: leaving everyone untargeted is always feasible.
double maximum_profit(const std::vector<double>& scores,
                      const std::vector<int>& labels, const EmpParams& params,
                      double gamma);

namespace detail {

struct RocPoint {
  double fpr = 0.0;  // F1: fraction of non-churners targeted
  double tpr = 0.0;  // F0: fraction of churners targeted
};

// Empirical ROC staircase over distinct score thresholds, from (0,0)
// (target nobody) to (1,1) (target everybody).
std::vector<RocPoint> roc_points(const std::vector<double>& scores,
                                 const std::vector<int>& labels);

// Upper concave envelope; collinear vertices merged at tolerance 1e-12.
std::vector<RocPoint> roc_convex_hull(std::vector<RocPoint> points);

// Cuts the hull where pi0*tpr + pi1*fpr reaches `cap`, interpolating a
// final vertex on the crossing segment.
std::vector<RocPoint> truncate_hull(const std::vector<RocPoint>& hull,
                                    double cap, double pi0, double pi1);

}  // namespace detail

}  // namespace churneval
