#include <optional>
#include <string>
#include <vector>

#include "doctest.h"

#include "churneval/errors.hpp"
#include "churneval/report.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace churneval;
using testsupport::thrown_code;

namespace {

doctest::Approx near(double v) { return doctest::Approx(v).epsilon(1e-12); }

Dataset toy_dataset() {
  Dataset ds;
  ds.name = "toy";
  ds.records = {
      {"A", 100, 120, true, 0.80}, {"B", 80, 50, false, 0.90},
      {"C", 120, 180, true, 0.75}, {"D", 90, 90, false, 0.85},
      {"E", 150, 200, true, 0.70},
  };
  return ds;
}

PredictionSet scored_model() {
  PredictionSet ps;
  ps.model_name = "scored";
  ps.entries = {
      {"A", {0.9, std::nullopt}}, {"B", {0.7, std::nullopt}},
      {"C", {0.4, std::nullopt}}, {"D", {0.3, std::nullopt}},
      {"E", {0.8, std::nullopt}},
  };
  return ps;
}

PredictionSet label_model() {
  PredictionSet ps;
  ps.model_name = "labels";
  ps.entries = {
      {"A", {std::nullopt, true}},  {"B", {std::nullopt, true}},
      {"C", {std::nullopt, false}}, {"D", {std::nullopt, false}},
      {"E", {std::nullopt, true}},
  };
  return ps;
}

// Two-model, three-column table with one unavailable cell and a tied
// column maximum; small enough to pin the rendered output exactly.
ComparisonTable tiny_table() {
  ComparisonTable table;
  table.columns = {{"f1", "F1 (%)"},
                   {"auc", "AUC (%)"},
                   {"eprof:1.0:0.3:ARR", "e-Prof (1.0, 0.3, ARR)"}};
  table.rows = {{"alpha", {50.0, std::nullopt, 228.8}},
                {"beta", {50.0, 75.0, -31.2}}};
  return table;
}

}  // namespace

TEST_CASE("the default battery spans twelve columns in fixed order") {
  const ComparisonTable table = evaluate_all(toy_dataset(), {scored_model()});
  const std::vector<std::string> ids = {
      "f1",  "accuracy", "auc", "emp", "tdl", "lift_index",
      "eprof:0.2:0.3:ARR", "eprof:0.2:0.3:TRR",
      "eprof:1.0:0.3:ARR", "eprof:1.0:0.3:TRR",
      "emp:0.2", "emp:1.0"};
  const std::vector<std::string> displays = {
      "F1 (%)", "Acc. (%)", "AUC (%)", "EMP", "TDL", "Lift Index",
      "e-Prof (0.2, 0.3, ARR)", "e-Prof (0.2, 0.3, TRR)",
      "e-Prof (1.0, 0.3, ARR)", "e-Prof (1.0, 0.3, TRR)",
      "EMP (0.2, 200, 10, 1)", "EMP (1.0, 200, 10, 1)"};
  REQUIRE(table.columns.size() == ids.size());
  for (std::size_t c = 0; c < ids.size(); ++c) {
    CHECK(table.columns[c].id == ids[c]);
    CHECK(table.columns[c].display == displays[c]);
  }
  CHECK(table.column_index("tdl") == 4);
  CHECK(table.column_index("nope") == -1);
}

TEST_CASE("evaluation fills the worked toy row") {
  const ComparisonTable table =
      evaluate_all(toy_dataset(), {scored_model(), label_model()});
  REQUIRE(table.rows.size() == 2);
  // Rows come back sorted by model name.
  CHECK(table.rows[0].model == "labels");
  CHECK(table.rows[1].model == "scored");

  const ModelRow& scored = table.rows[1];
  auto cell = [&](const char* id) {
    return scored.values[static_cast<std::size_t>(table.column_index(id))];
  };
  CHECK(*cell("f1") == near(100.0 * 2.0 / 3.0));
  CHECK(*cell("accuracy") == near(60.0));
  CHECK(*cell("auc") == near(100.0 * 5.0 / 6.0));
  CHECK(*cell("tdl") == near(5.0 / 3.0));
  CHECK(*cell("lift_index") == near(2.6 / 3.0));
  CHECK(*cell("eprof:0.2:0.3:ARR") == near(130.0));
  CHECK(*cell("eprof:0.2:0.3:TRR") == near(130.0));
  CHECK(*cell("eprof:1.0:0.3:ARR") == near(228.8));
  CHECK(*cell("eprof:1.0:0.3:TRR") == near(228.8));

  // The plain EMP column is the uncapped closed form; pin it against the
  // quadrature reference and against its own cap-1.0 column.
  const std::vector<double> scores = {0.9, 0.7, 0.4, 0.3, 0.8};
  const std::vector<int> truth = {1, 0, 1, 0, 1};
  const double quad =
      oracle::emp_quadrature(scores, truth, 200.0, 10.0, 1.0, 6.0, 14.0,
                             200000);
  CHECK(*cell("emp") == doctest::Approx(quad).epsilon(1e-6));
  CHECK(*cell("emp") == *cell("emp:1.0"));
  CHECK(*cell("emp:0.2") <= *cell("emp:1.0") + 1e-12);
}

TEST_CASE("label-only models report only threshold-free metrics") {
  const ComparisonTable table =
      evaluate_all(toy_dataset(), {scored_model(), label_model()});
  const ModelRow& labels = table.rows[0];
  REQUIRE(labels.model == "labels");
  auto cell = [&](const char* id) {
    return labels.values[static_cast<std::size_t>(table.column_index(id))];
  };
  CHECK(*cell("f1") == near(100.0 * 2.0 / 3.0));
  CHECK(*cell("accuracy") == near(60.0));
  CHECK(*cell("eprof:1.0:0.3:ARR") == near(228.8));
  CHECK(*cell("eprof:1.0:0.3:TRR") == near(228.8));

  for (const char* id : {"auc", "emp", "tdl", "lift_index",
                         "eprof:0.2:0.3:ARR", "eprof:0.2:0.3:TRR", "emp:0.2",
                         "emp:1.0"}) {
    CHECK_FALSE(cell(id).has_value());
  }
}

TEST_CASE("evaluation failures name the offending model") {
  Dataset churners_only = toy_dataset();
  for (auto& rec : churners_only.records) rec.churned = true;
  try {
    evaluate_all(churners_only, {scored_model()});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingleClass);
    CHECK(e.details().find("model 'scored'") != std::string::npos);
  }
}

TEST_CASE("evaluate_all input validation") {
  CHECK(thrown_code([] { evaluate_all(toy_dataset(), {}); }) ==
        ErrorCode::NoModels);
  CHECK(thrown_code([] {
          evaluate_all(toy_dataset(), {scored_model(), scored_model()});
        }) == ErrorCode::InvalidConfig);
}

TEST_CASE("models rank by the chosen column, ties alphabetical") {
  ComparisonTable table;
  table.columns = {{"f1", "F1 (%)"}};
  table.rows = {{"c_mid", {75.0}}, {"a_tied", {50.0}}, {"b_tied", {50.0}}};

  const auto ranked = rank_models(table, "f1");
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].first == "c_mid");
  CHECK(ranked[0].second == near(75.0));
  CHECK(ranked[1].first == "a_tied");
  CHECK(ranked[2].first == "b_tied");

  try {
    rank_models(table, "wibble");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownMetric);
    CHECK(e.details().find("valid ids: f1") != std::string::npos);
  }

  table.rows[1].values[0] = std::nullopt;
  try {
    rank_models(table, "f1");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnavailableMetric);
    CHECK(e.details().find("a_tied") != std::string::npos);
  }
}

TEST_CASE("a better classifier can be the worse campaign planner") {
  // Ten customers; one churner is worth fifty times the others. The
  // rank-faithful model finds every small churner but misses the whale,
  // the value-aware model catches the whale at the cost of raw AUC.
  Dataset ds;
  ds.name = "whale";
  ds.records = {{"whale", 500, 24, true, 0.8}};
  for (int i = 1; i <= 4; ++i) {
    ds.records.push_back(
        {"churn" + std::to_string(i), 10, 12 + i, true, 0.8});
  }
  for (int i = 1; i <= 5; ++i) {
    ds.records.push_back(
        {"keep" + std::to_string(i), 10, 30 + i, false, 0.8});
  }

  PredictionSet ranker;
  ranker.model_name = "ranker";
  ranker.entries = {
      {"whale", {0.05, std::nullopt}},  {"churn1", {0.9, std::nullopt}},
      {"churn2", {0.8, std::nullopt}},  {"churn3", {0.7, std::nullopt}},
      {"churn4", {0.6, std::nullopt}},  {"keep1", {0.45, std::nullopt}},
      {"keep2", {0.35, std::nullopt}},  {"keep3", {0.25, std::nullopt}},
      {"keep4", {0.15, std::nullopt}},  {"keep5", {0.1, std::nullopt}},
  };
  PredictionSet valuer;
  valuer.model_name = "valuer";
  valuer.entries = {
      {"whale", {0.95, std::nullopt}},  {"churn1", {0.9, std::nullopt}},
      {"churn2", {0.1, std::nullopt}},  {"churn3", {0.08, std::nullopt}},
      {"churn4", {0.06, std::nullopt}}, {"keep1", {0.45, std::nullopt}},
      {"keep2", {0.35, std::nullopt}},  {"keep3", {0.25, std::nullopt}},
      {"keep4", {0.15, std::nullopt}},  {"keep5", {0.12, std::nullopt}},
  };

  const ComparisonTable table = evaluate_all(ds, {ranker, valuer});

  const auto by_auc = rank_models(table, "auc");
  CHECK(by_auc[0].first == "ranker");
  CHECK(by_auc[0].second == near(80.0));
  CHECK(by_auc[1].second == near(40.0));

  const auto by_profit = rank_models(table, "eprof:0.2:0.3:TRR");
  CHECK(by_profit[0].first == "valuer");
  // Whale (CLV 750: 750 - 75 - 22.5) plus one small churner (15 - 1.5 - 5).
  CHECK(by_profit[0].second == near(652.5 + 8.5));
  // Two small churners saved.
  CHECK(by_profit[1].second == near(17.0));
}

TEST_CASE("format_value trims to at most four decimals") {
  CHECK(format_value(100.0 * 2.0 / 3.0) == "66.6667");
  CHECK(format_value(228.8) == "228.8");
  CHECK(format_value(-31.2) == "-31.2");
  CHECK(format_value(0.0) == "0");
  CHECK(format_value(-0.0) == "0");
  CHECK(format_value(-0.000001) == "0");
  CHECK(format_value(1.0) == "1");
  CHECK(format_value(0.875) == "0.875");
  CHECK(format_value(0.99999) == "1");
  CHECK(format_value(5.0 / 3.0) == "1.6667");
}

TEST_CASE("CSV rendering quotes displays and marks gaps") {
  CHECK(table_to_csv(tiny_table()) ==
        "model,F1 (%),AUC (%),\"e-Prof (1.0, 0.3, ARR)\"\n"
        "alpha,50,—,228.8\n"
        "beta,50,75,-31.2\n");
}

TEST_CASE("JSON rendering keeps ids and nulls") {
  CHECK(table_to_json(tiny_table()) ==
        "[\n"
        "  {\n"
        "    \"model\": \"alpha\",\n"
        "    \"metrics\": {\n"
        "      \"f1\": 50.0,\n"
        "      \"auc\": null,\n"
        "      \"eprof:1.0:0.3:ARR\": 228.8\n"
        "    }\n"
        "  },\n"
        "  {\n"
        "    \"model\": \"beta\",\n"
        "    \"metrics\": {\n"
        "      \"f1\": 50.0,\n"
        "      \"auc\": 75.0,\n"
        "      \"eprof:1.0:0.3:ARR\": -31.2\n"
        "    }\n"
        "  }\n"
        "]\n");
}

TEST_CASE("markdown rendering bolds every column best") {
  CHECK(table_to_markdown(tiny_table()) ==
        "| Model | F1 (%) | AUC (%) | e-Prof (1.0, 0.3, ARR) |\n"
        "|---|---:|---:|---:|\n"
        "| alpha | **50** | — | **228.8** |\n"
        "| beta | **50** | **75** | -31.2 |\n");
}

TEST_CASE("render_table dispatches on format name") {
  const ComparisonTable table = tiny_table();
  CHECK(render_table(table, table_format_from_name("csv")) ==
        table_to_csv(table));
  CHECK(render_table(table, table_format_from_name("json")) ==
        table_to_json(table));
  CHECK(render_table(table, table_format_from_name("md")) ==
        table_to_markdown(table));
  CHECK(thrown_code([] { table_format_from_name("latex"); }) ==
        ErrorCode::InvalidConfig);
  CHECK(thrown_code([&] {
          ComparisonTable empty;
          empty.columns = table.columns;
          render_table(empty, TableFormat::Csv);
        }) == ErrorCode::EmptyInput);
}

TEST_CASE("tables survive a JSON round-trip") {
  const ComparisonTable table =
      evaluate_all(toy_dataset(), {scored_model(), label_model()});
  const ComparisonTable back = table_from_json(table_to_json(table));

  REQUIRE(back.columns.size() == table.columns.size());
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    CHECK(back.columns[c].id == table.columns[c].id);
    // Displays rebuild from the id alone, so the capped-EMP headers drop
    // the cost parameters; everything else round-trips verbatim.
    if (table.columns[c].id.rfind("emp:", 0) == 0) {
      CHECK(back.columns[c].display ==
            "EMP (" + table.columns[c].id.substr(4) + ")");
    } else {
      CHECK(back.columns[c].display == table.columns[c].display);
    }
  }
  REQUIRE(back.rows.size() == table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    CHECK(back.rows[r].model == table.rows[r].model);
    REQUIRE(back.rows[r].values.size() == table.rows[r].values.size());
    for (std::size_t c = 0; c < table.rows[r].values.size(); ++c) {
      const auto& a = table.rows[r].values[c];
      const auto& b = back.rows[r].values[c];
      CHECK(a.has_value() == b.has_value());
      if (a && b) CHECK(*a == *b);
    }
  }

  // Ranking keeps working on the rebuilt table.
  const auto ranked = rank_models(back, "eprof:1.0:0.3:ARR");
  CHECK(ranked[0].second == near(228.8));
}

TEST_CASE("table_from_json rejects malformed input") {
  CHECK(thrown_code([] { table_from_json("not json"); }) ==
        ErrorCode::ParseError);
  CHECK(thrown_code([] { table_from_json("{}"); }) == ErrorCode::ParseError);
  CHECK(thrown_code([] { table_from_json("[]"); }) == ErrorCode::ParseError);
  CHECK(thrown_code([] { table_from_json("[{\"model\": \"m\"}]"); }) ==
        ErrorCode::ParseError);
  CHECK(thrown_code([] {
          table_from_json(
              "[{\"model\": \"m\", \"metrics\": {\"f1\": \"high\"}}]");
        }) == ErrorCode::ParseError);
  CHECK(thrown_code([] {
          table_from_json(
              "[{\"model\": \"a\", \"metrics\": {\"f1\": 1}},"
              " {\"model\": \"b\", \"metrics\": {\"auc\": 1}}]");
        }) == ErrorCode::ParseError);
}

TEST_CASE("radar output min-max normalises each column") {
  ComparisonTable table;
  table.columns = {{"f1", "F1 (%)"}, {"auc", "AUC (%)"}};
  table.rows = {{"a", {0.0, 10.0}},
                {"b", {50.0, std::nullopt}},
                {"c", {100.0, 30.0}}};
  CHECK(radar_csv(table) ==
        "model,f1,auc\n"
        "a,0,0\n"
        "b,0.5,\n"
        "c,1,1\n");

  // A single model has no spread: everything normalises to 1.
  ComparisonTable solo;
  solo.columns = table.columns;
  solo.rows = {{"only", {42.0, 7.0}}};
  CHECK(radar_csv(solo) == "model,f1,auc\nonly,1,1\n");
}

TEST_CASE("repeated evaluation renders byte-identical output") {
  const Dataset ds = toy_dataset();
  const std::vector<PredictionSet> models = {scored_model(), label_model()};
  const ComparisonTable first = evaluate_all(ds, models);
  const ComparisonTable second = evaluate_all(ds, models);
  CHECK(table_to_json(first) == table_to_json(second));
  CHECK(table_to_csv(first) == table_to_csv(second));
  CHECK(table_to_markdown(first) == table_to_markdown(second));
  CHECK(radar_csv(first) == radar_csv(second));
}
