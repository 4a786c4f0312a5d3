#pragma once

// ineq-bias command line front end: JSON run configuration in, JSON or CSV
// tables out. Kept in a header so the tests can drive it in-process.

#include <CLI11.hpp>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ineqbias/bias_engine.hpp"
#include "ineqbias/error.hpp"
#include "ineqbias/estimators.hpp"
#include "ineqbias/indices.hpp"
#include "ineqbias/mixture.hpp"
#include "ineqbias/montecarlo.hpp"

namespace ineqbias::cli {

using nlohmann::json;

enum class Format { json, csv };

inline constexpr std::size_t kDefaultReplicates = 20000;
inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr const char* kThreadsEnv = "INEQ_BIAS_THREADS";

struct McSettings {
  std::size_t replicates = kDefaultReplicates;
  std::uint64_t seed = kDefaultSeed;
};

struct RunConfig {
  MixtureParams params;
  std::vector<unsigned> n{10};
  std::vector<double> eps;
  EngineOptions engine{};
  McSettings mc{};
  Format format = Format::json;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitLimit = 3,
  kExitValidation = 4,
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::composition_limit_exceeded:
    case ErrorCode::quadrature_limit_exceeded: return kExitLimit;
    case ErrorCode::validation_failed: return kExitValidation;
    default: return kExitConfig;
  }
}

inline Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw Error(ErrorCode::config_error, "format must be json or csv", name);
}

namespace detail {

[[noreturn]] inline void bad_field(const std::string& field, const std::string& expected) {
  throw Error(ErrorCode::config_error, "config field '" + field + "' must be " + expected, field);
}

inline double number_field(const json& value, const std::string& field) {
  if (!value.is_number()) bad_field(field, "a number");
  return value.get<double>();
}

inline std::vector<double> number_list(const json& value, const std::string& field) {
  if (!value.is_array()) bad_field(field, "an array of numbers");
  std::vector<double> out;
  for (const auto& v : value) out.push_back(number_field(v, field));
  return out;
}

inline std::uint64_t count_field(const json& value, const std::string& field, std::uint64_t minimum) {
  if (!value.is_number_unsigned()) bad_field(field, "a nonnegative integer");
  const auto v = value.get<std::uint64_t>();
  if (v < minimum) bad_field(field, "at least " + std::to_string(minimum));
  return v;
}

inline void reject_unknown(const json& object, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) throw Error(ErrorCode::config_error, "unknown config field '" + where + key + "'", where + key);
  }
}

}  // namespace detail

/// Builds a RunConfig from parsed JSON. Model errors keep the codes raised by
/// canonicalize (invalid_mixing_proportions and so on); everything else is a
/// config_error.
inline RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::config_error, "config must be a JSON object");
  detail::reject_unknown(doc, {"pi", "alpha", "lambda", "n", "eps", "quadrature", "mc", "format", "composition_limit"},
                         "");
  for (const char* required : {"pi", "alpha", "lambda"}) {
    if (!doc.contains(required)) {
      throw Error(ErrorCode::config_error, std::string("config is missing '") + required + "'", required);
    }
  }
  RunConfig cfg{canonicalize(detail::number_list(doc["pi"], "pi"), detail::number_list(doc["alpha"], "alpha"),
                             detail::number_field(doc["lambda"], "lambda")),
                {10}, {}, {}, {}, Format::json};

  if (doc.contains("n")) {
    const json& n = doc["n"];
    cfg.n.clear();
    if (n.is_array()) {
      for (const auto& v : n) cfg.n.push_back(static_cast<unsigned>(detail::count_field(v, "n", 1)));
    } else {
      cfg.n.push_back(static_cast<unsigned>(detail::count_field(n, "n", 1)));
    }
    if (cfg.n.empty()) detail::bad_field("n", "a positive integer or a nonempty list of them");
  }
  if (doc.contains("eps")) {
    cfg.eps = detail::number_list(doc["eps"], "eps");
    for (double e : cfg.eps) {
      if (!(e >= 0.0) || !std::isfinite(e)) detail::bad_field("eps", "a list of finite nonnegative numbers");
    }
  }
  if (doc.contains("quadrature")) {
    const json& q = doc["quadrature"];
    if (!q.is_object()) detail::bad_field("quadrature", "an object");
    detail::reject_unknown(q, {"rel_tol", "abs_tol", "truncation", "max_subdivisions"}, "quadrature.");
    auto& qc = cfg.engine.quadrature;
    if (q.contains("rel_tol")) qc.rel_tol = detail::number_field(q["rel_tol"], "quadrature.rel_tol");
    if (q.contains("abs_tol")) qc.abs_tol = detail::number_field(q["abs_tol"], "quadrature.abs_tol");
    if (q.contains("truncation")) qc.truncation = detail::number_field(q["truncation"], "quadrature.truncation");
    if (q.contains("max_subdivisions")) {
      qc.max_subdivisions = detail::count_field(q["max_subdivisions"], "quadrature.max_subdivisions", 1);
    }
    try {
      qc.validate();
    } catch (const Error& err) {
      throw Error(ErrorCode::config_error, err.what(), "quadrature");
    }
  }
  if (doc.contains("mc")) {
    const json& mc = doc["mc"];
    if (!mc.is_object()) detail::bad_field("mc", "an object");
    detail::reject_unknown(mc, {"replicates", "seed"}, "mc.");
    if (mc.contains("replicates")) {
      cfg.mc.replicates = detail::count_field(mc["replicates"], "mc.replicates", kMinReplicates);
    }
    if (mc.contains("seed")) cfg.mc.seed = detail::count_field(mc["seed"], "mc.seed", 0);
  }
  if (doc.contains("format")) {
    if (!doc["format"].is_string()) detail::bad_field("format", "\"json\" or \"csv\"");
    cfg.format = parse_format(doc["format"].get<std::string>());
  }
  if (doc.contains("composition_limit")) {
    cfg.engine.composition_limit = detail::count_field(doc["composition_limit"], "composition_limit", 1);
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config_error, "cannot open config file", path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw Error(ErrorCode::config_error, std::string("config is not valid JSON: ") + err.what(), path);
  }
  return parse_config(doc);
}

// ---- reports ---------------------------------------------------------------

/// A cell is a number, a string, a boolean or empty.
struct Cell {
  enum class Kind { empty, number, integer, text, boolean } kind = Kind::empty;
  double number = 0.0;
  std::uint64_t integer = 0;
  std::string text;
  bool flag = false;

  static Cell num(double v) {
    Cell c;
    c.kind = Kind::number;
    c.number = v;
    return c;
  }
  static Cell num(std::optional<double> v) { return v ? num(*v) : Cell{}; }
  static Cell count(std::uint64_t v) {
    Cell c;
    c.kind = Kind::integer;
    c.integer = v;
    return c;
  }
  static Cell str(std::string_view v) {
    Cell c;
    c.kind = Kind::text;
    c.text = v;
    return c;
  }
  static Cell boolean(bool v) {
    Cell c;
    c.kind = Kind::boolean;
    c.flag = v;
    return c;
  }
};

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline json model_json(const MixtureParams& p) {
  return {{"pi", p.pi()}, {"alpha", p.alpha()}, {"lambda", p.lambda()}};
}

inline Table indices_table(const RunConfig& cfg) {
  const MixtureParams& p = cfg.params;
  Table t{"indices", {"index", "eps", "value"}, {}};
  const IndexReport r = index_report(p);
  t.rows.push_back({Cell::str("theil_t"), Cell{}, Cell::num(r.theil_t)});
  t.rows.push_back({Cell::str("theil_l"), Cell{}, Cell::num(r.theil_l)});
  t.rows.push_back({Cell::str("atkinson_1"), Cell{}, Cell::num(r.atkinson_1)});
  t.rows.push_back({Cell::str("atkinson_inf"), Cell{}, Cell::num(r.atkinson_inf)});
  t.rows.push_back({Cell::str("vmr"), Cell{}, Cell::num(r.vmr)});
  for (double e : cfg.eps) {
    const double value = e == 1.0 ? atkinson_1(p) : atkinson_eps(p, e);
    t.rows.push_back({Cell::str("atkinson"), Cell::num(e), Cell::num(value)});
  }
  return t;
}

inline Table bias_table(const RunConfig& cfg) {
  Table t{"bias", {"estimator", "n", "population", "expectation", "bias", "quadrature_error"}, {}};
  for (unsigned n : cfg.n) {
    const BiasReport report = bias_report(cfg.params, n, cfg.engine);
    for (const auto& row : report.rows) {
      t.rows.push_back({Cell::str(to_string(row.estimator)), Cell::count(n), Cell::num(row.population),
                        Cell::num(row.expectation), Cell::num(row.bias), Cell::num(row.quadrature_error)});
    }
  }
  return t;
}

/// Bias rows with the population index alongside, keyed by (estimator, n).
inline Table summary_table(const RunConfig& cfg) {
  Table t{"table",
          {"estimator", "n", "index", "expectation", "bias", "relative_bias", "compositions", "quadrature_error"},
          {}};
  for (unsigned n : cfg.n) {
    const BiasReport report = bias_report(cfg.params, n, cfg.engine);
    for (const auto& row : report.rows) {
      t.rows.push_back({Cell::str(to_string(row.estimator)), Cell::count(n), Cell::num(row.population),
                        Cell::num(row.expectation), Cell::num(row.bias), Cell::num(row.bias / row.population),
                        Cell::count(report.composition_count), Cell::num(row.quadrature_error)});
    }
  }
  return t;
}

inline Table validate_table(const RunConfig& cfg, std::size_t threads, bool& all_pass) {
  Table t{"validate",
          {"estimator", "n", "replicates", "seed", "mean", "standard_error", "exact", "z", "pass"},
          {}};
  all_pass = true;
  MCOptions opts;
  opts.threads = threads;
  opts.engine = cfg.engine;
  for (unsigned n : cfg.n) {
    for (Estimator e : kAllEstimators) {
      if (n < min_sample_size(e)) continue;
      const MCReport r = run_mc(cfg.params, n, e, cfg.mc.replicates, cfg.mc.seed, opts);
      all_pass = all_pass && r.pass;
      t.rows.push_back({Cell::str(to_string(e)), Cell::count(n), Cell::count(r.replicates), Cell::count(r.seed),
                        Cell::num(r.mean), Cell::num(r.standard_error), Cell::num(r.exact), Cell::num(r.z),
                        Cell::boolean(r.pass)});
    }
  }
  return t;
}

// ---- serialization ---------------------------------------------------------

inline json cell_json(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::empty: return nullptr;
    case Cell::Kind::number: return std::isfinite(c.number) ? json(c.number) : json(nullptr);
    case Cell::Kind::integer: return c.integer;
    case Cell::Kind::text: return c.text;
    case Cell::Kind::boolean: return c.flag;
  }
  return nullptr;
}

/// %.17g, which round-trips every double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string cell_csv(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::empty: return "";
    case Cell::Kind::number: return format_double(c.number);
    case Cell::Kind::integer: return std::to_string(c.integer);
    case Cell::Kind::text: return c.text;
    case Cell::Kind::boolean: return c.flag ? "true" : "false";
  }
  return "";
}

inline json table_json(const Table& t, const MixtureParams& params) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json record = json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) record[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(record));
  }
  return {{"command", t.command}, {"model", model_json(params)}, {"rows", std::move(rows)}};
}

inline void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_csv(row[i]);
    out << '\n';
  }
}

inline void write_table(std::ostream& out, const Table& t, const MixtureParams& params, Format format) {
  if (format == Format::csv) {
    write_csv(out, t);
  } else {
    out << table_json(t, params).dump(2) << '\n';
  }
}

inline std::string error_json(std::string_view code, const std::string& message, const std::string& context) {
  return json{{"code", std::string(code)}, {"message", message}, {"context", context}}.dump();
}

inline std::string error_json(ErrorCode code, const std::string& message, const std::string& context) {
  return error_json(to_string(code), message, context);
}

// ---- entry point -------------------------------------------------------------

/// Thread count: --threads, else INEQ_BIAS_THREADS, else 1.
inline std::size_t threads_from_env() {
  const char* env = std::getenv(kThreadsEnv);
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw Error(ErrorCode::config_error, std::string(kThreadsEnv) + " must be an integer", env);
  return static_cast<std::size_t>(v);
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact finite-sample bias of inequality and dispersion index estimators under gamma mixtures",
               "ineq-bias"};
  app.require_subcommand(1);
  std::string config_path;
  std::string format_name;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::optional<std::size_t> threads;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--format", format_name, "json or csv (overrides the config)");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--seed", seed, "Monte Carlo seed");
    sub->add_option("--replicates", replicates, "Monte Carlo replicates");
    sub->add_option("--threads", threads, "worker threads, 0 for all cores");
  };
  CLI::App* indices = app.add_subcommand("indices", "population index values");
  CLI::App* bias = app.add_subcommand("bias", "exact expectations and biases for each n");
  CLI::App* validate = app.add_subcommand("validate", "Monte Carlo check of the exact expectations");
  CLI::App* table = app.add_subcommand("table", "indices and biases merged per (estimator, n)");
  for (CLI::App* sub : {indices, bias, validate, table}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_json(ErrorCode::config_error, e.what(), "command line") << '\n';
    return kExitConfig;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (!format_name.empty()) cfg.format = parse_format(format_name);
    if (seed) cfg.mc.seed = *seed;
    if (replicates) {
      if (*replicates < kMinReplicates) {
        throw Error(ErrorCode::config_error, "--replicates must be at least " + std::to_string(kMinReplicates),
                    std::to_string(*replicates));
      }
      cfg.mc.replicates = *replicates;
    }
    const std::size_t thread_count = threads ? *threads : threads_from_env();
    cfg.engine.threads = thread_count;

    Table report;
    bool all_pass = true;
    if (indices->parsed()) {
      report = indices_table(cfg);
    } else if (bias->parsed()) {
      report = bias_table(cfg);
    } else if (validate->parsed()) {
      report = validate_table(cfg, thread_count, all_pass);
    } else {
      report = summary_table(cfg);
    }

    if (out_path.empty()) {
      write_table(out, report, cfg.params, cfg.format);
    } else {
      std::ofstream file(out_path);
      if (!file) throw Error(ErrorCode::config_error, "cannot open output file", out_path);
      write_table(file, report, cfg.params, cfg.format);
    }
    if (!all_pass) {
      err << error_json(ErrorCode::validation_failed, "at least one Monte Carlo check exceeded |z| <= 4",
                        "command = validate")
          << '\n';
      return kExitValidation;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << error_json(e.code(), e.what(), e.context()) << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << error_json("internal_error", e.what(), "") << '\n';
    return kExitInternal;
  }
}

}  // namespace ineqbias::cli
