// churneval: fit retention curves, score churn models by expected profit,
// and rank them. Subcommands: survival, evaluate, rank.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "churneval/baselines.hpp"
#include "churneval/economics.hpp"
#include "churneval/eprofits.hpp"
#include "churneval/errors.hpp"
#include "churneval/ingest.hpp"
#include "churneval/report.hpp"
#include "churneval/survival.hpp"
#include "churneval/types.hpp"

namespace {

using churneval::ErrorCode;
using churneval::raise;
using ordered_json = nlohmann::ordered_json;

struct PredSpec {
  std::string name;
  std::string path;
  double threshold = 0.5;
};

// Everything one run needs; fully loadable from a JSON config file, with
// command-line flags taking precedence field by field.
struct RunConfig {
  std::string dataset_path;
  std::string dataset_name;
  churneval::CustomerSchema schema;
  std::vector<PredSpec> predictions;
  churneval::CostParams cost;
  churneval::EmpParams emp;
  std::vector<double> emp_caps;  // empty -> {emp.fraction_cap, 1.0}
  std::vector<churneval::EProfitsConfig> eprofits;  // empty -> default battery
  churneval::RetentionConfig retention;
  std::string format = "markdown";
  std::string out_path;  // empty -> stdout
};

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    raise(ErrorCode::InvalidConfig, what + ": '" + text + "' is not a number");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string path_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// ---------------------------------------------------------------------------
// Config file

void check_keys(const ordered_json& obj,
                std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) {
      raise(ErrorCode::InvalidConfig,
            "config: unknown key '" + key + "' in " + where);
    }
    (void)value;
  }
}

double number_at(const ordered_json& obj, const char* key, double fallback,
                 const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    raise(ErrorCode::InvalidConfig,
          "config: " + where + "." + key + " must be a number");
  }
  return obj[key].get<double>();
}

std::string string_at(const ordered_json& obj, const char* key,
                      const std::string& fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) {
    raise(ErrorCode::InvalidConfig,
          "config: " + where + "." + key + " must be a string");
  }
  return obj[key].get<std::string>();
}

std::vector<std::string> string_list_at(const ordered_json& obj,
                                        const char* key,
                                        std::vector<std::string> fallback,
                                        const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_array()) {
    raise(ErrorCode::InvalidConfig,
          "config: " + where + "." + key + " must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& item : obj[key]) {
    if (!item.is_string()) {
      raise(ErrorCode::InvalidConfig,
            "config: " + where + "." + key + " must be an array of strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

void load_dataset_section(const ordered_json& section, RunConfig& cfg) {
  check_keys(section,
             {"path", "name", "schema", "churn_truthy", "churn_falsy",
              "churn_exclude"},
             "dataset");
  cfg.dataset_path = string_at(section, "path", cfg.dataset_path, "dataset");
  cfg.dataset_name = string_at(section, "name", cfg.dataset_name, "dataset");
  if (section.contains("schema")) {
    const ordered_json& schema = section["schema"];
    check_keys(schema, {"id", "revenue", "tenure", "churn", "retention"},
               "dataset.schema");
    cfg.schema.id = string_at(schema, "id", cfg.schema.id, "dataset.schema");
    cfg.schema.revenue =
        string_at(schema, "revenue", cfg.schema.revenue, "dataset.schema");
    cfg.schema.tenure =
        string_at(schema, "tenure", cfg.schema.tenure, "dataset.schema");
    cfg.schema.churn =
        string_at(schema, "churn", cfg.schema.churn, "dataset.schema");
    cfg.schema.retention =
        string_at(schema, "retention", cfg.schema.retention, "dataset.schema");
  }
  cfg.schema.churn_truthy = string_list_at(section, "churn_truthy",
                                           cfg.schema.churn_truthy, "dataset");
  cfg.schema.churn_falsy = string_list_at(section, "churn_falsy",
                                          cfg.schema.churn_falsy, "dataset");
  cfg.schema.churn_exclude = string_list_at(section, "churn_exclude",
                                            cfg.schema.churn_exclude, "dataset");
}

void load_arr_eval(const std::string& text, churneval::RetentionConfig& out) {
  if (text == "mean") {
    out.arr_eval = churneval::ArrEvalPoint::MeanTenure;
  } else if (text == "median") {
    out.arr_eval = churneval::ArrEvalPoint::MedianTenure;
  } else if (text.rfind("fixed:", 0) == 0) {
    out.arr_eval = churneval::ArrEvalPoint::FixedTime;
    out.arr_fixed_time = parse_number(text.substr(6), "arr_eval fixed time");
  } else {
    raise(ErrorCode::InvalidConfig,
          "arr_eval must be mean, median or fixed:<t>, got '" + text + "'");
  }
}

// Parses the config file into `cfg` and returns the raw document, which the
// flag layer consults to warn about overrides.
ordered_json load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open config file '" + path + "'");
  }
  ordered_json root;
  try {
    root = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::InvalidConfig,
          "config '" + path + "': " + std::string(e.what()));
  }
  if (!root.is_object()) {
    raise(ErrorCode::InvalidConfig, "config '" + path + "' must be an object");
  }
  check_keys(root,
             {"dataset", "predictions", "cost", "emp", "eprofits", "retention",
              "output"},
             "top level");

  if (root.contains("dataset")) load_dataset_section(root["dataset"], cfg);

  if (root.contains("predictions")) {
    if (!root["predictions"].is_array()) {
      raise(ErrorCode::InvalidConfig, "config: predictions must be an array");
    }
    for (const auto& entry : root["predictions"]) {
      check_keys(entry, {"name", "path", "threshold"}, "predictions[]");
      PredSpec spec;
      spec.path = string_at(entry, "path", "", "predictions[]");
      if (spec.path.empty()) {
        raise(ErrorCode::InvalidConfig, "config: predictions[].path is required");
      }
      spec.name = string_at(entry, "name", path_stem(spec.path), "predictions[]");
      spec.threshold = number_at(entry, "threshold", 0.5, "predictions[]");
      cfg.predictions.push_back(spec);
    }
  }

  if (root.contains("cost")) {
    const ordered_json& cost = root["cost"];
    check_keys(cost,
               {"margin", "cpo", "contact_floor", "contact_mult",
                "retention_cap"},
               "cost");
    cfg.cost.margin = number_at(cost, "margin", cfg.cost.margin, "cost");
    cfg.cost.cpo = number_at(cost, "cpo", cfg.cost.cpo, "cost");
    cfg.cost.contact_floor =
        number_at(cost, "contact_floor", cfg.cost.contact_floor, "cost");
    cfg.cost.contact_mult =
        number_at(cost, "contact_mult", cfg.cost.contact_mult, "cost");
    cfg.cost.retention_cap =
        number_at(cost, "retention_cap", cfg.cost.retention_cap, "cost");
  }

  if (root.contains("emp")) {
    const ordered_json& emp = root["emp"];
    check_keys(emp, {"clv", "d", "f", "alpha", "beta", "cap", "caps"}, "emp");
    cfg.emp.clv = number_at(emp, "clv", cfg.emp.clv, "emp");
    cfg.emp.offer_cost = number_at(emp, "d", cfg.emp.offer_cost, "emp");
    cfg.emp.contact_cost = number_at(emp, "f", cfg.emp.contact_cost, "emp");
    cfg.emp.beta_alpha = number_at(emp, "alpha", cfg.emp.beta_alpha, "emp");
    cfg.emp.beta_beta = number_at(emp, "beta", cfg.emp.beta_beta, "emp");
    cfg.emp.fraction_cap = number_at(emp, "cap", cfg.emp.fraction_cap, "emp");
    if (emp.contains("caps")) {
      if (!emp["caps"].is_array()) {
        raise(ErrorCode::InvalidConfig, "config: emp.caps must be an array");
      }
      cfg.emp_caps.clear();
      for (const auto& item : emp["caps"]) {
        if (!item.is_number()) {
          raise(ErrorCode::InvalidConfig, "config: emp.caps must hold numbers");
        }
        cfg.emp_caps.push_back(item.get<double>());
      }
    }
  }

  if (root.contains("eprofits")) {
    if (!root["eprofits"].is_array()) {
      raise(ErrorCode::InvalidConfig, "config: eprofits must be an array");
    }
    for (const auto& entry : root["eprofits"]) {
      check_keys(entry, {"fraction", "margin", "mode"}, "eprofits[]");
      churneval::EProfitsConfig config;
      config.segment_fraction =
          number_at(entry, "fraction", config.segment_fraction, "eprofits[]");
      config.margin = number_at(entry, "margin", cfg.cost.margin, "eprofits[]");
      config.retention_mode = churneval::retention_mode_from_name(
          string_at(entry, "mode", "arr", "eprofits[]"));
      cfg.eprofits.push_back(config);
    }
  }

  if (root.contains("retention")) {
    const ordered_json& retention = root["retention"];
    check_keys(retention, {"horizon", "cap", "arr_eval", "arr_fixed_time"},
               "retention");
    cfg.retention.horizon_months = static_cast<int>(
        number_at(retention, "horizon", cfg.retention.horizon_months, "retention"));
    cfg.retention.cap = number_at(retention, "cap", cfg.retention.cap, "retention");
    if (retention.contains("arr_eval")) {
      load_arr_eval(string_at(retention, "arr_eval", "mean", "retention"),
                    cfg.retention);
    }
    if (retention.contains("arr_fixed_time")) {
      cfg.retention.arr_fixed_time = number_at(
          retention, "arr_fixed_time", cfg.retention.arr_fixed_time, "retention");
    }
  }

  if (root.contains("output")) {
    const ordered_json& output = root["output"];
    check_keys(output, {"format", "path"}, "output");
    cfg.format = string_at(output, "format", cfg.format, "output");
    cfg.out_path = string_at(output, "path", cfg.out_path, "output");
  }
  return root;
}

// ---------------------------------------------------------------------------
// Flags

// One flat set of flag bindings shared by the subcommands; only the parsed
// subcommand's values are read back.
struct Flags {
  std::string config_path;
  std::string dataset;
  std::vector<std::string> schema;       // key=column
  std::vector<std::string> predictions;  // name=path
  double margin = 0.3;
  double cpo = 0.1;
  double contact_floor = 5.0;
  double contact_mult = 0.3;
  std::vector<double> fractions;
  std::string retention_mode;
  int horizon = 12;
  double cap = 0.995;
  std::string arr_eval;
  std::string emp_spec;  // clv,d,f,alpha,beta,cap
  std::string format = "markdown";
  std::string out;
  double threshold = 0.5;
  std::vector<std::string> truthy;
  std::vector<std::string> falsy;
  std::vector<std::string> exclude;
  std::string breakdown_dir;
  std::string radar_path;
  std::string table_path;
  std::string by_metric;
};

bool flag_given(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* opt = cmd->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

void warn_override(bool config_had, const char* flag) {
  if (config_had) {
    std::cerr << "warning: " << flag << " overrides the config file value\n";
  }
}

bool config_has(const ordered_json& root, const char* section, const char* key) {
  return root.contains(section) && root[section].contains(key);
}

void apply_schema_flags(const std::vector<std::string>& pairs,
                        churneval::CustomerSchema& schema) {
  for (const std::string& pair : pairs) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size()) {
      raise(ErrorCode::InvalidConfig,
            "--schema expects key=column, got '" + pair + "'");
    }
    const std::string key = pair.substr(0, eq);
    const std::string column = pair.substr(eq + 1);
    if (key == "id") {
      schema.id = column;
    } else if (key == "revenue") {
      schema.revenue = column;
    } else if (key == "tenure") {
      schema.tenure = column;
    } else if (key == "churn") {
      schema.churn = column;
    } else if (key == "retention") {
      schema.retention = column;
    } else {
      raise(ErrorCode::InvalidConfig,
            "--schema key must be id, revenue, tenure, churn or retention, got '" +
                key + "'");
    }
  }
}

churneval::EmpParams parse_emp_spec(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ',');
  if (parts.size() != 6) {
    raise(ErrorCode::InvalidConfig,
          "--emp expects clv,d,f,alpha,beta,cap (6 numbers), got '" + spec + "'");
  }
  churneval::EmpParams params;
  params.clv = parse_number(parts[0], "--emp clv");
  params.offer_cost = parse_number(parts[1], "--emp d");
  params.contact_cost = parse_number(parts[2], "--emp f");
  params.beta_alpha = parse_number(parts[3], "--emp alpha");
  params.beta_beta = parse_number(parts[4], "--emp beta");
  params.fraction_cap = parse_number(parts[5], "--emp cap");
  return params;
}

// Layers the subcommand's explicitly given flags over the config file,
// warning whenever a flag displaces a config-file value.
RunConfig build_run_config(const CLI::App* cmd, const Flags& flags) {
  RunConfig cfg;
  cfg.emp_caps = {};  // resolved after flags

  std::string config_path = flags.config_path;
  if (config_path.empty()) {
    if (const char* env = std::getenv("CHURN_EVAL_CONFIG")) config_path = env;
  }
  ordered_json raw = ordered_json::object();
  if (!config_path.empty()) raw = load_config_file(config_path, cfg);

  if (flag_given(cmd, "--dataset")) {
    warn_override(config_has(raw, "dataset", "path"), "--dataset");
    cfg.dataset_path = flags.dataset;
    cfg.dataset_name.clear();
  }
  if (flag_given(cmd, "--schema")) {
    warn_override(config_has(raw, "dataset", "schema"), "--schema");
    apply_schema_flags(flags.schema, cfg.schema);
  }
  if (flag_given(cmd, "--truthy")) {
    warn_override(config_has(raw, "dataset", "churn_truthy"), "--truthy");
    cfg.schema.churn_truthy = flags.truthy;
  }
  if (flag_given(cmd, "--falsy")) {
    warn_override(config_has(raw, "dataset", "churn_falsy"), "--falsy");
    cfg.schema.churn_falsy = flags.falsy;
  }
  if (flag_given(cmd, "--exclude")) {
    warn_override(config_has(raw, "dataset", "churn_exclude"), "--exclude");
    cfg.schema.churn_exclude = flags.exclude;
  }
  if (flag_given(cmd, "--predictions")) {
    warn_override(raw.contains("predictions"), "--predictions");
    cfg.predictions.clear();
    for (const std::string& pair : flags.predictions) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size()) {
        raise(ErrorCode::InvalidConfig,
              "--predictions expects name=path, got '" + pair + "'");
      }
      cfg.predictions.push_back({pair.substr(0, eq), pair.substr(eq + 1), 0.5});
    }
  }
  if (flag_given(cmd, "--threshold")) {
    const bool from_config =
        raw.contains("predictions") && !flag_given(cmd, "--predictions");
    bool displaced = false;
    for (PredSpec& spec : cfg.predictions) {
      if (spec.threshold != flags.threshold) displaced = true;
      spec.threshold = flags.threshold;
    }
    warn_override(from_config && displaced, "--threshold");
  }

  if (flag_given(cmd, "--margin")) {
    warn_override(config_has(raw, "cost", "margin"), "--margin");
    cfg.cost.margin = flags.margin;
  }
  if (flag_given(cmd, "--cpo")) {
    warn_override(config_has(raw, "cost", "cpo"), "--cpo");
    cfg.cost.cpo = flags.cpo;
  }
  if (flag_given(cmd, "--contact-floor")) {
    warn_override(config_has(raw, "cost", "contact_floor"), "--contact-floor");
    cfg.cost.contact_floor = flags.contact_floor;
  }
  if (flag_given(cmd, "--contact-mult")) {
    warn_override(config_has(raw, "cost", "contact_mult"), "--contact-mult");
    cfg.cost.contact_mult = flags.contact_mult;
  }
  if (flag_given(cmd, "--emp")) {
    warn_override(raw.contains("emp"), "--emp");
    const std::vector<double> caps = cfg.emp_caps;
    cfg.emp = parse_emp_spec(flags.emp_spec);
    cfg.emp_caps = caps;  // caps list only comes from the config file
  }
  if (flag_given(cmd, "--horizon")) {
    warn_override(config_has(raw, "retention", "horizon"), "--horizon");
    cfg.retention.horizon_months = flags.horizon;
  }
  if (flag_given(cmd, "--cap")) {
    warn_override(config_has(raw, "retention", "cap") ||
                      config_has(raw, "cost", "retention_cap"),
                  "--cap");
    cfg.retention.cap = flags.cap;
    cfg.cost.retention_cap = flags.cap;
  }
  if (flag_given(cmd, "--arr-eval")) {
    warn_override(config_has(raw, "retention", "arr_eval"), "--arr-eval");
    load_arr_eval(flags.arr_eval, cfg.retention);
  }

  // --fraction / --retention rebuild the e-Profits battery.
  const bool fractions_given = flag_given(cmd, "--fraction");
  const bool mode_given = flag_given(cmd, "--retention");
  if (fractions_given || mode_given) {
    warn_override(raw.contains("eprofits"), fractions_given ? "--fraction"
                                                            : "--retention");
    std::vector<double> fractions =
        fractions_given ? flags.fractions : std::vector<double>{0.2, 1.0};
    std::vector<churneval::RetentionMode> modes;
    if (mode_given) {
      modes = {churneval::retention_mode_from_name(flags.retention_mode)};
    } else {
      modes = {churneval::RetentionMode::ARR, churneval::RetentionMode::TRR};
    }
    cfg.eprofits.clear();
    for (double fraction : fractions) {
      for (churneval::RetentionMode mode : modes) {
        churneval::EProfitsConfig config;
        config.segment_fraction = fraction;
        config.margin = cfg.cost.margin;
        config.retention_mode = mode;
        cfg.eprofits.push_back(config);
      }
    }
  }

  if (flag_given(cmd, "--format")) {
    warn_override(config_has(raw, "output", "format"), "--format");
    cfg.format = flags.format;
  }
  if (flag_given(cmd, "--out")) {
    warn_override(config_has(raw, "output", "path"), "--out");
    cfg.out_path = flags.out;
  }

  if (cfg.emp_caps.empty()) {
    // No explicit caps list: pair the configured cap with the uncapped
    // column, falling back to the standard {0.2, 1.0} pair.
    const bool cap_explicit =
        flag_given(cmd, "--emp") || config_has(raw, "emp", "cap");
    const double cap = cap_explicit ? cfg.emp.fraction_cap : 0.2;
    cfg.emp_caps.push_back(cap);
    if (cap != 1.0) cfg.emp_caps.push_back(1.0);
  }
  if (cfg.dataset_name.empty() && !cfg.dataset_path.empty()) {
    cfg.dataset_name = path_stem(cfg.dataset_path);
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Subcommands

churneval::Dataset load_dataset(const RunConfig& cfg) {
  if (cfg.dataset_path.empty()) {
    raise(ErrorCode::InvalidConfig,
          "no dataset given; pass --dataset or set dataset.path in the config");
  }
  churneval::CustomerSchema schema = cfg.schema;
  churneval::Dataset dataset = churneval::load_customers(cfg.dataset_path, schema);
  dataset.name = cfg.dataset_name;
  if (dataset.excluded_rows > 0) {
    std::cerr << "note: dropped " << dataset.excluded_rows
              << " rows matching the churn exclusion set\n";
  }
  return dataset;
}

std::vector<churneval::PredictionSet> load_prediction_sets(const RunConfig& cfg) {
  std::vector<churneval::PredictionSet> sets;
  sets.reserve(cfg.predictions.size());
  for (const PredSpec& spec : cfg.predictions) {
    sets.push_back(
        churneval::load_predictions(spec.path, spec.name, spec.threshold));
  }
  return sets;
}

int cmd_survival(const CLI::App* cmd, const Flags& flags) {
  const RunConfig cfg = build_run_config(cmd, flags);
  const churneval::Dataset dataset = load_dataset(cfg);
  const churneval::SurvivalCurve curve = churneval::fit_kaplan_meier(dataset);
  if (curve.event_times().empty()) {
    std::cerr << "warning: dataset has no churn events; retention is capped at "
              << churneval::format_value(cfg.retention.cap) << "\n";
  }
  const double arr =
      churneval::average_retention_rate(curve, dataset, cfg.retention);

  std::string out_path = cfg.out_path;
  if (out_path.empty()) out_path = cfg.dataset_name + "_survival.csv";
  churneval::write_curve_csv(out_path, curve);
  std::cout << "ARR=" << churneval::format_value(arr) << "\n";
  return 0;
}

std::string safe_file_component(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? std::string("model") : out;
}

void write_breakdowns(const std::string& dir, const churneval::Dataset& dataset,
                      const std::vector<churneval::PredictionSet>& models,
                      const churneval::SurvivalCurve& curve,
                      const RunConfig& cfg,
                      const std::vector<churneval::EProfitsConfig>& battery) {
  std::filesystem::create_directories(dir);
  for (const churneval::PredictionSet& model : models) {
    const churneval::EvaluationView view =
        churneval::join_validate(dataset, model);
    for (const churneval::EProfitsConfig& config : battery) {
      if (config.segment_fraction < 1.0 && !view.has_scores()) continue;
      churneval::EProfitsConfig with_rows = config;
      with_rows.keep_breakdown = true;
      const churneval::EProfitsResult result = churneval::total_eprofits(
          view, &curve, cfg.cost, with_rows, cfg.retention);
      const std::string path =
          dir + "/" + safe_file_component(model.model_name) + "-eprof-" +
          churneval::format_value(config.segment_fraction) + "-" +
          churneval::retention_mode_name(config.retention_mode) + ".csv";
      std::ofstream out(path, std::ios::binary);
      if (!out) {
        raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
      }
      out << churneval::breakdown_to_csv(result);
    }
  }
}

int cmd_evaluate(const CLI::App* cmd, const Flags& flags) {
  const RunConfig cfg = build_run_config(cmd, flags);
  const churneval::Dataset dataset = load_dataset(cfg);
  const std::vector<churneval::PredictionSet> models = load_prediction_sets(cfg);
  const churneval::TableFormat format =
      churneval::table_format_from_name(cfg.format);

  const churneval::ComparisonTable table =
      churneval::evaluate_all(dataset, models, cfg.cost, cfg.emp, cfg.eprofits,
                              cfg.retention, cfg.emp_caps);

  if (cfg.out_path.empty()) {
    std::cout << churneval::render_table(table, format);
  } else {
    churneval::write_table(table, format, cfg.out_path);
  }

  if (!flags.radar_path.empty()) {
    std::ofstream out(flags.radar_path, std::ios::binary);
    if (!out) {
      raise(ErrorCode::IoError,
            "cannot open '" + flags.radar_path + "' for writing");
    }
    out << churneval::radar_csv(table);
  }
  if (!flags.breakdown_dir.empty()) {
    const std::vector<churneval::EProfitsConfig> battery =
        cfg.eprofits.empty()
            ? churneval::default_eprofits_battery(cfg.cost.margin)
            : cfg.eprofits;
    write_breakdowns(flags.breakdown_dir, dataset, models,
                     churneval::fit_kaplan_meier(dataset), cfg, battery);
  }
  return 0;
}

int cmd_rank(const CLI::App* cmd, const Flags& flags) {
  churneval::ComparisonTable table;
  std::string out_path;
  if (!flags.table_path.empty()) {
    std::ifstream in(flags.table_path, std::ios::binary);
    if (!in) {
      raise(ErrorCode::IoError,
            "cannot open table file '" + flags.table_path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    table = churneval::table_from_json(buffer.str());
    if (flag_given(cmd, "--out")) out_path = flags.out;
  } else {
    const RunConfig cfg = build_run_config(cmd, flags);
    const churneval::Dataset dataset = load_dataset(cfg);
    table = churneval::evaluate_all(dataset, load_prediction_sets(cfg), cfg.cost,
                                    cfg.emp, cfg.eprofits, cfg.retention,
                                    cfg.emp_caps);
    out_path = cfg.out_path;
  }
  std::ostringstream lines;
  for (const auto& [model, value] : churneval::rank_models(table, flags.by_metric)) {
    lines << model << "\t" << churneval::format_value(value) << "\n";
  }
  if (out_path.empty()) {
    std::cout << lines.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      raise(ErrorCode::IoError, "cannot open '" + out_path + "' for writing");
    }
    out << lines.str();
  }
  return 0;
}

void add_dataset_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "JSON run-config file (default: $CHURN_EVAL_CONFIG)");
  cmd->add_option("--dataset", flags.dataset, "customer CSV file");
  cmd->add_option("--schema", flags.schema,
                  "column mapping key=column (keys: id, revenue, tenure, "
                  "churn, retention)");
  cmd->add_option("--truthy", flags.truthy, "churn values treated as churned");
  cmd->add_option("--falsy", flags.falsy, "churn values treated as retained");
  cmd->add_option("--exclude", flags.exclude,
                  "churn values whose rows are dropped");
}

void add_retention_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--horizon", flags.horizon,
                  "months ahead for tenure-based retention");
  cmd->add_option("--cap", flags.cap, "upper clamp on retention rates");
  cmd->add_option("--arr-eval", flags.arr_eval,
                  "ARR evaluation point: mean, median or fixed:<t>");
}

void add_evaluate_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--predictions", flags.predictions,
                  "model predictions as name=path (repeatable)");
  cmd->add_option("--threshold", flags.threshold,
                  "score threshold for derived labels");
  cmd->add_option("--margin", flags.margin, "profit margin in (0, 1]");
  cmd->add_option("--cpo", flags.cpo, "offer cost as a fraction of CLV");
  cmd->add_option("--contact-floor", flags.contact_floor,
                  "minimum contact cost");
  cmd->add_option("--contact-mult", flags.contact_mult,
                  "contact cost as a fraction of the offer");
  cmd->add_option("--fraction", flags.fractions,
                  "e-Profits segment fraction (repeatable)");
  cmd->add_option("--retention", flags.retention_mode,
                  "e-Profits retention mode: arr or trr")
      ->check(CLI::IsMember({"arr", "trr", "ARR", "TRR"}));
  cmd->add_option("--emp", flags.emp_spec,
                  "EMP parameters clv,d,f,alpha,beta,cap");
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"csv", "json", "markdown"}));
  cmd->add_option("--out", flags.out, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Churn-model evaluation by expected retention-campaign profit"};
  app.require_subcommand(1);
  Flags flags;

  CLI::App* survival =
      app.add_subcommand("survival", "Fit a retention curve and report ARR");
  add_dataset_flags(survival, flags);
  add_retention_flags(survival, flags);
  survival->add_option("--out", flags.out,
                       "curve CSV path (default: <dataset>_survival.csv)");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score prediction sets against a dataset");
  add_dataset_flags(evaluate, flags);
  add_retention_flags(evaluate, flags);
  add_evaluate_flags(evaluate, flags);
  evaluate->add_option("--breakdown", flags.breakdown_dir,
                       "directory for per-customer profit CSVs");
  evaluate->add_option("--radar", flags.radar_path,
                       "file for min-max normalised metric vectors (CSV)");

  CLI::App* rank = app.add_subcommand("rank", "Order models by one metric");
  add_dataset_flags(rank, flags);
  add_retention_flags(rank, flags);
  add_evaluate_flags(rank, flags);
  rank->add_option("--table", flags.table_path,
                   "rank a previously emitted JSON table instead of evaluating");
  rank->add_option("--by", flags.by_metric, "metric id to rank by")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (survival->parsed()) return cmd_survival(survival, flags);
    if (evaluate->parsed()) return cmd_evaluate(evaluate, flags);
    return cmd_rank(rank, flags);
  } catch (const churneval::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return churneval::is_input_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
