#pragma once

#include <algorithm>
#include <string>

namespace churneval {

// Business constants for one evaluation run. Defaults follow the worked
// telecom setting: 30% margin, offers at 10% of CLV, contact at
// max(5, 30% of the offer).
struct CostParams {
  double margin = 0.3;         // profit margin M, in (0, 1]
  double cpo = 0.1;            // cost-per-offer ratio, in (0, 1)
  double contact_floor = 5.0;  // c0: minimum contact cost
  double contact_mult = 0.3;   // c1: contact cost as a fraction of the offer
  double retention_cap = 0.995;
};

enum class Outcome { TruePositive, FalsePositive, NoAction };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::TruePositive: return "TruePositive";
    case Outcome::FalsePositive: return "FalsePositive";
    case Outcome::NoAction: return "NoAction";
  }
  return "Unknown";
}

struct ProfitBreakdown {
  double clv = 0.0;
  double offer_cost = 0.0;
  double contact_cost = 0.0;
  double profit = 0.0;
  Outcome outcome = Outcome::NoAction;
};

// CLV = revenue * margin / (1 - min(retention, cap)). The cap keeps the
// denominator away from zero for near-immortal customers.
inline double clv(double revenue, double margin, double retention,
                  double cap = 0.995) {
  return revenue * margin / (1.0 - std::min(retention, cap));
}

inline double offer_cost(double clv_value, double cpo) {
  return cpo * clv_value;
}

inline double contact_cost(double offer, double floor_cost, double mult) {
  return std::max(floor_cost, mult * offer);
}

// Three-case intervention profit: a predicted churner is contacted and
// offered a deal; the deal pays off only if the customer would actually
// have churned. Customers predicted loyal are left alone at zero cost.
inline ProfitBreakdown customer_profit(bool true_label, bool predicted_label,
                                       double clv_value, double offer,
                                       double contact) {
  ProfitBreakdown out;
  if (!predicted_label) {
    out.outcome = Outcome::NoAction;
    return out;
  }
  out.clv = clv_value;
  out.offer_cost = offer;
  out.contact_cost = contact;
  if (true_label) {
    out.outcome = Outcome::TruePositive;
    out.profit = clv_value - offer - contact;
  } else {
    out.outcome = Outcome::FalsePositive;
    out.profit = -offer - contact;
  }
  return out;
}

}  // namespace churneval
