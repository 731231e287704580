#include <random>

#include "doctest.h"

#include "churneval/economics.hpp"

using namespace churneval;

namespace {

doctest::Approx near(double v) { return doctest::Approx(v).epsilon(1e-12); }

}  // namespace

TEST_CASE("CLV on the worked figures") {
  CHECK(clv(100.0, 0.3, 0.80) == near(150.0));
  CHECK(clv(80.0, 0.3, 0.90) == near(240.0));
  // Retention above the cap hits the capped denominator 1 - 0.995.
  CHECK(clv(100.0, 0.3, 0.999) == near(6000.0));
  CHECK(clv(100.0, 0.3, 1.0) == near(6000.0));
  CHECK(clv(0.0, 0.3, 0.5) == 0.0);
}

TEST_CASE("CLV grows with retention until the cap flattens it") {
  double prev = clv(100.0, 0.3, 0.05);
  for (double r = 0.1; r < 0.99; r += 0.05) {
    const double cur = clv(100.0, 0.3, r);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK(clv(100.0, 0.3, 0.995) == clv(100.0, 0.3, 0.9999));
}

TEST_CASE("offer cost is a CLV fraction, contact cost is floored") {
  CHECK(offer_cost(150.0, 0.1) == near(15.0));
  CHECK(offer_cost(240.0, 0.1) == near(24.0));
  CHECK(offer_cost(0.0, 0.1) == 0.0);

  CHECK(contact_cost(15.0, 5.0, 0.3) == near(5.0));
  CHECK(contact_cost(24.0, 5.0, 0.3) == near(7.2));
  CHECK(contact_cost(0.0, 5.0, 0.3) == near(5.0));
  // Floor boundary: 30% of the offer overtakes the floor past offer ~16.67.
  CHECK(contact_cost(16.0, 5.0, 0.3) == near(5.0));
  CHECK(contact_cost(17.0, 5.0, 0.3) == near(5.1));
}

TEST_CASE("three-case intervention profit") {
  const ProfitBreakdown tp = customer_profit(true, true, 150.0, 15.0, 5.0);
  CHECK(tp.outcome == Outcome::TruePositive);
  CHECK(tp.profit == near(130.0));
  CHECK(tp.clv == near(150.0));

  const ProfitBreakdown fp = customer_profit(false, true, 240.0, 24.0, 7.2);
  CHECK(fp.outcome == Outcome::FalsePositive);
  CHECK(fp.profit == near(-31.2));

  // Customers predicted loyal are untouched regardless of the truth.
  for (bool truth : {false, true}) {
    const ProfitBreakdown na = customer_profit(truth, false, 150.0, 15.0, 5.0);
    CHECK(na.outcome == Outcome::NoAction);
    CHECK(na.profit == 0.0);
    CHECK(na.clv == 0.0);
    CHECK(na.offer_cost == 0.0);
    CHECK(na.contact_cost == 0.0);
  }
}

TEST_CASE("saving a churner beats mis-targeting a keeper by exactly CLV") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> rev(0.5, 500.0);
  std::uniform_real_distribution<double> ret(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const double value = clv(rev(rng), 0.3, ret(rng));
    const double offer = offer_cost(value, 0.1);
    const double contact = contact_cost(offer, 5.0, 0.3);
    const double tp = customer_profit(true, true, value, offer, contact).profit;
    const double fp =
        customer_profit(false, true, value, offer, contact).profit;
    CHECK(tp - fp == near(value));
  }
}

TEST_CASE("outcome names are stable") {
  CHECK(outcome_name(Outcome::TruePositive) == std::string("TruePositive"));
  CHECK(outcome_name(Outcome::FalsePositive) == std::string("FalsePositive"));
  CHECK(outcome_name(Outcome::NoAction) == std::string("NoAction"));
}
