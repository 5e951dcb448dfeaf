#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "zariski/error.hpp"
#include "zariski/family.hpp"
#include "zariski/group.hpp"
#include "zariski/hurwitz.hpp"
#include "zariski/invariants.hpp"
#include "zariski/numeric.hpp"
#include "zariski/spherical.hpp"

namespace zariski {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

// ---------------------------------------------------------------------------
// Exact values in JSON: integers as numbers while they fit in 64 bits, decimal strings
// beyond; rationals as "p/q" strings next to a "<name>_decimal" convenience field.

inline json big_to_json(const BigInt& value) {
  if (value >= std::numeric_limits<std::int64_t>::min() && value <= std::numeric_limits<std::int64_t>::max())
    return value.convert_to<std::int64_t>();
  return value.str();
}

inline BigInt big_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_string()) return parse_decimal_integer(j.get<std::string>());
  fail(ErrorCode::parse, "expected an integer, got " + j.dump());
}

inline void put_rational(json& j, const std::string& name, const Rational& value) {
  j[name] = rational_string(value);
  j[name + "_decimal"] = round_significant(to_long_double(value));
}

inline Rational rational_from_json(const json& j) { return parse_rational(j.get<std::string>()); }

inline json to_json(const SurfaceInvariants& inv) {
  return json{{"chi", big_to_json(inv.chi)}, {"e", big_to_json(inv.e)},   {"ksq", big_to_json(inv.ksq)},
              {"g1", big_to_json(inv.g1)},   {"g2", big_to_json(inv.g2)}, {"q", big_to_json(inv.q)},
              {"order", big_to_json(inv.order)}};
}

inline SurfaceInvariants surface_invariants_from_json(const json& j) {
  SurfaceInvariants inv;
  inv.chi = big_from_json(j.at("chi"));
  inv.e = big_from_json(j.at("e"));
  inv.ksq = big_from_json(j.at("ksq"));
  inv.g1 = big_from_json(j.at("g1"));
  inv.g2 = big_from_json(j.at("g2"));
  inv.q = big_from_json(j.at("q"));
  inv.order = big_from_json(j.at("order"));
  return inv;
}

inline json to_json(const BranchCurveInvariants& curve) {
  return json{{"m", big_to_json(curve.m)}, {"nu", big_to_json(curve.nu)}, {"d", big_to_json(curve.d)},
              {"n", big_to_json(curve.n)}, {"c", big_to_json(curve.c)},   {"g", big_to_json(curve.g)},
              {"euler_r", big_to_json(curve.euler_r)}};
}

inline BranchCurveInvariants branch_curve_from_json(const json& j) {
  BranchCurveInvariants curve;
  curve.m = big_from_json(j.at("m"));
  curve.nu = big_from_json(j.at("nu"));
  curve.d = big_from_json(j.at("d"));
  curve.n = big_from_json(j.at("n"));
  curve.c = big_from_json(j.at("c"));
  curve.g = big_from_json(j.at("g"));
  curve.euler_r = big_from_json(j.at("euler_r"));
  return curve;
}

inline json to_json(const BoundReport& b) {
  json j{{"d", big_to_json(b.d)},
         {"n_d", b.n_d ? big_to_json(*b.n_d) : json(nullptr)},
         {"c_d", b.c_d ? big_to_json(*b.c_d) : json(nullptr)},
         {"log2_lower_thm_main", b.log2_lower_thm_main},
         {"log2_lower_eq15", b.log2_lower_eq15},
         {"log2_upper_catanese", b.log2_upper_catanese}};
  put_rational(j, "epsilon", b.epsilon);
  return j;
}

inline BoundReport bounds_from_json(const json& j) {
  BoundReport b;
  b.d = big_from_json(j.at("d"));
  if (!j.at("n_d").is_null()) b.n_d = big_from_json(j.at("n_d"));
  if (!j.at("c_d").is_null()) b.c_d = big_from_json(j.at("c_d"));
  b.epsilon = rational_from_json(j.at("epsilon"));
  b.log2_lower_thm_main = j.at("log2_lower_thm_main").get<double>();
  b.log2_lower_eq15 = j.at("log2_lower_eq15").get<double>();
  b.log2_upper_catanese = j.at("log2_upper_catanese").get<double>();
  return b;
}

inline json to_json(const MultipletReport& r) {
  const auto& p = r.params;
  json j;
  j["schema"] = schema_version;
  j["command"] = "family";
  j["k"] = p.k;
  j["l"] = p.l;
  put_rational(j, "epsilon", p.epsilon);
  j["tau1"] = p.tau1.render();
  j["tau2"] = p.tau2.render();
  j["order"] = big_to_json(p.order);
  j["chi"] = big_to_json(p.chi);
  j["g1"] = big_to_json(p.g1);
  j["g2"] = big_to_json(p.g2);
  j["h"] = r.count.h ? json(*r.count.h) : json(nullptr);
  j["completeness"] = to_string(r.count.completeness);
  j["count_note"] = r.count.note;
  j["invariants"] = to_json(r.invariants);
  j["curve"] = to_json(r.curve);
  put_rational(j, "chisini_threshold", r.chisini_threshold);
  j["chisini_ok"] = r.chisini_ok;
  j["plurigenus"] = json{{"p_m", big_to_json(r.plurigenus.p_m)},
                         {"ambient_dimension", big_to_json(r.plurigenus.ambient_dimension)}};
  j["bounds"] = to_json(r.bounds);
  j["witness"] = to_string(r.witness);
  j["very_ampleness"] = r.very_ampleness_assumed ? "assumed" : "verified";
  return j;
}

inline MultipletReport multiplet_report_from_json(const json& j) {
  require(j.at("schema").get<int>() == schema_version, ErrorCode::parse, "unsupported report schema");
  MultipletReport r;
  auto& p = r.params;
  p.k = j.at("k").get<unsigned>();
  p.l = j.at("l").get<unsigned>();
  p.epsilon = rational_from_json(j.at("epsilon"));
  p.tau1 = Type::parse(j.at("tau1").get<std::string>());
  p.tau2 = Type::parse(j.at("tau2").get<std::string>());
  p.order = big_from_json(j.at("order"));
  p.chi = big_from_json(j.at("chi"));
  p.g1 = big_from_json(j.at("g1"));
  p.g2 = big_from_json(j.at("g2"));
  if (!j.at("h").is_null()) r.count.h = j.at("h").get<std::uint64_t>();
  const auto completeness = j.at("completeness").get<std::string>();
  for (auto c : {Completeness::exact, Completeness::budget_limited, Completeness::formula_only})
    if (to_string(c) == completeness) r.count.completeness = c;
  r.count.note = j.at("count_note").get<std::string>();
  r.invariants = surface_invariants_from_json(j.at("invariants"));
  r.curve = branch_curve_from_json(j.at("curve"));
  r.chisini_threshold = rational_from_json(j.at("chisini_threshold"));
  r.chisini_ok = j.at("chisini_ok").get<bool>();
  r.plurigenus.p_m = big_from_json(j.at("plurigenus").at("p_m"));
  r.plurigenus.ambient_dimension = big_from_json(j.at("plurigenus").at("ambient_dimension"));
  r.bounds = bounds_from_json(j.at("bounds"));
  const auto witness = j.at("witness").get<std::string>();
  for (auto w : {WitnessStatus::found, WitnessStatus::not_found, WitnessStatus::skipped})
    if (to_string(w) == witness) r.witness = w;
  r.very_ampleness_assumed = j.at("very_ampleness").get<std::string>() == "assumed";
  return r;
}

inline json convention_json(const FiniteGroup& group, const ComponentCount& count) {
  return json{{"pairs", count.swap_identified ? "swap-identified" : "ordered"},
              {"inner", count.inner_identified ? "identified" : "not-identified"},
              {"meaning", group.is_elementary_abelian() ? "components" : "components or conjugate-component pairs"}};
}

inline json components_json(const std::string& group_spec, const FiniteGroup& group, const Type& tau1,
                            const Type& tau2, const ComponentCount& count) {
  return json{{"schema", schema_version},
              {"command", "components"},
              {"group", group_spec},
              {"order", group.order()},
              {"tau1", tau1.render()},
              {"tau2", tau2.render()},
              {"h", count.h},
              {"completeness", to_string(count.completeness)},
              {"convention", convention_json(group, count)},
              {"method", count.method},
              {"note", count.note},
              {"pairs_examined", count.pairs_examined}};
}

inline json invariants_json(const BigInt& ksq, const BigInt& c2, const BigInt& m) {
  const auto curve = branch_curve_invariants(ksq, c2, m);
  json j{{"schema", schema_version}, {"command", "invariants"}, {"ksq", big_to_json(ksq)}, {"c2", big_to_json(c2)}};
  const json curve_json = to_json(curve);
  for (auto& [key, value] : curve_json.items()) j[key] = value;
  j["genus_degree_ok"] = (curve.d - 1) * (curve.d - 2) / 2 - curve.n - curve.c == curve.g;
  try {
    put_rational(j, "chisini_threshold", chisini_threshold(curve.d, curve.g, curve.c));
    j["chisini_ok"] = chisini_ok(curve.nu, curve.d, curve.g, curve.c);
  } catch (const Error& e) {
    j["chisini_threshold"] = nullptr;
    j["chisini_ok"] = nullptr;
    j["chisini_note"] = e.what();
  }
  return j;
}

// ---------------------------------------------------------------------------
// Output formats

namespace detail {

inline void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array()) {
    std::string joined;
    for (const auto& item : j) {
      if (!joined.empty()) joined += " ";
      joined += item.is_string() ? item.get<std::string>() : item.dump();
    }
    out.emplace_back(prefix, joined);
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Rows of a report: batch reports list their rows, enumeration lists its systems,
/// everything else is a single row.
inline std::vector<std::vector<std::pair<std::string, std::string>>> report_rows(const json& report) {
  std::vector<std::vector<std::pair<std::string, std::string>>> rows;
  if (report.contains("rows")) {
    for (const auto& row : report.at("rows")) {
      rows.emplace_back();
      flatten(row, "", rows.back());
    }
  } else if (report.contains("systems")) {
    std::size_t index = 0;
    for (const auto& system : report.at("systems")) {
      rows.emplace_back();
      rows.back().emplace_back("index", std::to_string(index++));
      flatten(system, "entries", rows.back());
    }
  } else {
    rows.emplace_back();
    flatten(report, "", rows.back());
  }
  return rows;
}

}  // namespace detail

enum class OutputFormat { json, csv, table };

inline OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  if (name == "table") return OutputFormat::table;
  fail(ErrorCode::parse, "unknown format '" + name + "' (expected json, csv or table)");
}

inline void write_report(std::ostream& out, const json& report, OutputFormat format) {
  if (format == OutputFormat::json) {
    out << report.dump(2) << "\n";
    return;
  }
  const auto rows = detail::report_rows(report);
  if (format == OutputFormat::csv) {
    if (rows.empty()) return;
    std::string header;
    for (const auto& [key, value] : rows.front()) header += (header.empty() ? "" : ",") + detail::csv_escape(key);
    out << header << "\n";
    for (const auto& row : rows) {
      std::string line;
      bool first = true;
      for (const auto& [key, value] : row) {
        line += (first ? "" : ",") + detail::csv_escape(value);
        first = false;
      }
      out << line << "\n";
    }
    return;
  }
  // table: one aligned key/value block per row
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r > 0) out << "\n";
    std::size_t width = 0;
    for (const auto& [key, value] : rows[r]) width = std::max(width, key.size());
    for (const auto& [key, value] : rows[r]) out << key << std::string(width - key.size() + 2, ' ') << value << "\n";
  }
}

// ---------------------------------------------------------------------------
// Command runner

struct RunConfig {
  std::string command;
  std::string group;
  std::string tau;
  std::string tau1;
  std::string tau2;
  std::string mode = "ordered";
  std::uint64_t limit = 1000;
  unsigned k = 0;
  unsigned l = 0;
  unsigned k_min = 2, k_max = 3;
  unsigned l_offset_min = 1, l_offset_max = 2;
  std::string ksq;
  std::string c2;
  std::string m = "2";
  std::optional<std::string> epsilon;
  std::optional<std::uint64_t> budget;
  std::string format = "json";
  bool count_ordered_pairs = false;
  bool identify_inner = false;
  unsigned workers = 1;
};

/// Node/pair budget: --budget, else ZF_BUDGET, else the library defaults.
inline CountOptions count_options(const RunConfig& config) {
  CountOptions options;
  options.count_ordered_pairs = config.count_ordered_pairs;
  options.identify_inner = config.identify_inner;
  options.workers = std::max(1u, config.workers);
  std::optional<std::uint64_t> budget = config.budget;
  if (!budget) {
    if (const char* env = std::getenv("ZF_BUDGET"); env != nullptr && *env != '\0') {
      const std::string text(env);
      require(std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }) && text.size() <= 19,
              ErrorCode::parse, "ZF_BUDGET must be a positive integer, got '" + text + "'");
      budget = std::stoull(text);
    }
  }
  if (budget) {
    require(*budget > 0, ErrorCode::parse, "budget must be positive");
    options.max_orbit_nodes = *budget;
    options.max_pairs = *budget;
  }
  return options;
}

inline BigInt parse_big(const std::string& text, const std::string& name) {
  require(!text.empty(), ErrorCode::parse, "--" + name + " is required");
  try {
    return parse_decimal_integer(text);
  } catch (const Error&) {
    fail(ErrorCode::parse, "--" + name + " must be an integer, got '" + text + "'");
  }
}

struct RunResult {
  json report;
  int exit_code = 0;
};

/// Executes one command. Exit code 0 on success, 1 when a budget cut the work short
/// (the report is still produced and flagged), 2 on input errors (thrown as Error).
inline RunResult execute(const RunConfig& config) {
  RunResult result;
  const auto options = count_options(config);

  if (config.command == "enumerate") {
    require(!config.group.empty() && !config.tau.empty(), ErrorCode::parse, "enumerate needs --group and --tau");
    auto group = std::make_shared<const FiniteGroup>(parse_group_spec(config.group));
    const Type tau = Type::parse(config.tau);
    require(config.mode == "ordered" || config.mode == "multiset", ErrorCode::parse,
            "--mode must be ordered or multiset");
    const auto mode = config.mode == "ordered" ? EnumerationMode::ordered : EnumerationMode::multiset;
    json systems = json::array();
    EnumerationBudget budget;
    budget.max_nodes = options.max_pairs;
    std::uint64_t count = 0;
    bool exhausted = false;
    try {
      count = for_each_spherical_system(
          *group, tau, mode,
          [&](std::span<const Element> entries) {
            if (systems.size() < config.limit) {
              json row = json::array();
              for (auto e : entries) row.push_back(group->element_name(e));
              systems.push_back(std::move(row));
            }
            return true;
          },
          budget);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::budget) throw;
      exhausted = true;
    }
    result.report = json{{"schema", schema_version}, {"command", "enumerate"}, {"group", config.group},
                         {"tau", tau.render()},      {"mode", config.mode},      {"count", count},
                         {"listed", systems.size()}, {"completeness", exhausted ? "budget-limited" : "exact"},
                         {"systems", systems}};
    result.exit_code = exhausted ? 1 : 0;
    return result;
  }

  if (config.command == "components") {
    require(!config.group.empty() && !config.tau1.empty() && !config.tau2.empty(), ErrorCode::parse,
            "components needs --group, --tau1 and --tau2");
    const auto group = parse_group_spec(config.group);
    const Type tau1 = Type::parse(config.tau1);
    const Type tau2 = Type::parse(config.tau2);
    try {
      const auto count = count_components(group, tau1, tau2, options);
      result.report = components_json(config.group, group, tau1, tau2, count);
      result.exit_code = count.completeness == Completeness::exact ? 0 : 1;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::budget && e.code() != ErrorCode::capacity) throw;
      ComponentCount empty;
      empty.completeness = Completeness::budget_limited;
      empty.note = e.what();
      empty.swap_identified = !config.count_ordered_pairs && tau1 == tau2;
      empty.inner_identified = config.identify_inner && !group.is_abelian();
      result.report = components_json(config.group, group, tau1, tau2, empty);
      result.report["h"] = nullptr;
      result.exit_code = 1;
    }
    return result;
  }

  if (config.command == "invariants") {
    result.report = invariants_json(parse_big(config.ksq, "ksq"), parse_big(config.c2, "c2"), parse_big(config.m, "m"));
    return result;
  }

  std::optional<Rational> epsilon;
  if (config.epsilon) epsilon = parse_rational(*config.epsilon);

  if (config.command == "family") {
    require(config.k > 0 && config.l > 0, ErrorCode::parse, "family needs --k and --l");
    const auto report = multiplet_report(config.k, config.l, epsilon, options);
    result.report = to_json(report);
    result.exit_code = report.count.completeness == Completeness::budget_limited ? 1 : 0;
    return result;
  }

  if (config.command == "report") {
    require(config.k_min >= 2 && config.k_min <= config.k_max, ErrorCode::parse, "need 2 <= k-min <= k-max");
    require(config.l_offset_min >= 1 && config.l_offset_min <= config.l_offset_max, ErrorCode::parse,
            "need 1 <= l-offset-min <= l-offset-max");
    std::vector<std::pair<unsigned, unsigned>> params;
    for (unsigned k = config.k_min; k <= config.k_max; ++k)
      for (unsigned off = config.l_offset_min; off <= config.l_offset_max; ++off) params.emplace_back(k, 2 * k + off);
    for (auto [k, l] : params) family_params(k, l, epsilon);  // validate up front
    std::vector<json> rows(params.size());
    std::vector<int> codes(params.size(), 0);
    CountOptions row_options = options;
    row_options.workers = 1;
    detail::run_sharded(options.workers, [&](unsigned w, unsigned stride) {
      for (std::size_t i = w; i < params.size(); i += stride) {
        const auto report = multiplet_report(params[i].first, params[i].second, epsilon, row_options);
        rows[i] = to_json(report);
        codes[i] = report.count.completeness == Completeness::budget_limited ? 1 : 0;
      }
    });
    result.report = json{{"schema", schema_version}, {"command", "report"}, {"rows", rows}};
    result.exit_code = *std::max_element(codes.begin(), codes.end());
    return result;
  }

  fail(ErrorCode::parse, "unknown command '" + config.command + "'");
}

/// Runs a command and writes the report to `out`, diagnostics to `err`; returns the exit code.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const auto format = parse_format(config.format);
    auto result = execute(config);
    write_report(out, result.report, format);
    if (result.exit_code == 1) err << "warning: budget exhausted; results are partial (see completeness)\n";
    return result.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::budget || e.code() == ErrorCode::capacity ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace zariski
