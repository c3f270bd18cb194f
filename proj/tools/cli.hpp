#pragma once

// Command-line front end: bound, sweep, table1, verify. `run` returns the
// process exit code and writes to the given streams so it can be tested
// in-process.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "indep_bounds/asymptotics.hpp"
#include "indep_bounds/finite_search.hpp"
#include "indep_bounds/verify.hpp"

namespace indep_bounds::cli {

using nlohmann::ordered_json;

inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

struct Preset {
  AsymptoticParams kp;
  std::vector<TheoremId> theorems;
  double t_min, t_max, t_step;
};

inline const std::map<std::string, Preset>& presets() {
  using enum TheoremId;
  static const std::map<std::string, Preset> p = {
      {"figure1", {{0.01, 0.5, 0.49, 0}, {T1, T2, T3, T4, T5, T6, T8}, 0.0, 0.5, 0.01}},
      {"figure2", {{0.25, 0.5, 0.25, 0}, {T1, T2, T3, T4, T5, T6, T8}, 0.0, 0.5, 0.01}},
      {"table1", {{0.005, 0.5, 0.495, 0}, {T4, T6, T7, T8}, 0.37, 0.385, 0.003}},
  };
  return p;
}

/// Published Table 1 values, rows T4, T6, T7, T8.
struct PublishedRow {
  TheoremId id;
  std::array<double, 6> lambda;
};
inline constexpr std::array<double, 6> kTable1Tp = {0.37, 0.373, 0.376, 0.379, 0.382, 0.385};
inline constexpr std::array<PublishedRow, 4> kTable1Published = {{
    {TheoremId::T4, {1.47408, 1.46544, 1.45676, 1.44806, 1.43927, 1.43043}},
    {TheoremId::T6, {1.47408, 1.46544, 1.45698, 1.44930, 1.44231, 1.43509}},
    {TheoremId::T7, {1.47408, 1.46831, 1.46267, 1.45644, 1.45157, 1.44618}},
    {TheoremId::T8, {1.45437, 1.45437, 1.45437, 1.45437, 1.45437, 1.45437}},
}};

// ---------------------------------------------------------------------------
// Formatting

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

/// Rounded to `digits` decimals so JSON output does not carry float noise.
inline double rounded(double v, int digits = 8) {
  const double s = std::pow(10.0, digits);
  return std::round(v * s) / s;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class T>
ordered_json table_json(const BasicPartitionTable<T>& t, bool fractional) {
  ordered_json rows = ordered_json::array();
  for (int a = -1; a <= 1; ++a) {
    ordered_json row = ordered_json::array();
    for (int b = -1; b <= 1; ++b) {
      if (fractional)
        row.push_back(rounded(static_cast<double>(t.cell(a, b))));
      else
        row.push_back(t.cell(a, b));
    }
    rows.push_back(row);
  }
  return rows;
}

inline ordered_json witness_json(const Witness& w) {
  ordered_json j = ordered_json::object();
  if (w.table) j["table"] = table_json(*w.table, false);
  if (w.t1) j["t1"] = *w.t1;
  if (w.s) j["s"] = *w.s;
  if (w.q) j["q"] = *w.q;
  if (w.flower) {
    const auto& f = *w.flower;
    j["flower"] = {{"q", f.q}, {"d", f.d}, {"d1", f.d1}, {"d2", f.d2},
                   {"n1", f.n1}, {"k2", f.k2}, {"r", f.r}};
  }
  if (w.h) j["h"] = w.h->str();
  return j;
}

inline ordered_json point_witness(const CurvePoint& p) {
  ordered_json j = ordered_json::object();
  if (p.table) j["table"] = table_json(*p.table, true);
  for (const auto& [k, v] : p.aux) j[k] = rounded(v);
  if (p.failure) j["failure"] = std::string(to_string(*p.failure));
  if (!p.reason.empty()) j["reason"] = p.reason;
  if (!p.notes.empty()) j["notes"] = p.notes;
  return j;
}

inline ordered_json point_json(const CurvePoint& p) {
  ordered_json j;
  j["t_prime"] = rounded(p.tp, 9);
  j["theorem_id"] = to_string(p.theorem);
  j["lambda"] = p.feasible ? ordered_json(rounded(p.lambda, 5)) : ordered_json(nullptr);
  j["feasible"] = p.feasible;
  j["witness"] = point_witness(p);
  return j;
}

inline std::string points_csv(const std::vector<CurvePoint>& pts) {
  std::string out = "t_prime,theorem_id,lambda,feasible,witness_json\r\n";
  for (const auto& p : pts) {
    std::ostringstream tp;
    tp << rounded(p.tp, 9);
    out += tp.str() + "," + to_string(p.theorem) + "," + (p.feasible ? fixed(p.lambda, 5) : "") + "," +
           (p.feasible ? "true" : "false") + "," + csv_field(point_witness(p).dump()) + "\r\n";
  }
  return out;
}

inline ordered_json kp_json(const AsymptoticParams& kp) {
  return {{"kp_m1", kp.kp_m1}, {"kp_0", kp.kp_0}, {"kp_1", kp.kp_1}};
}

inline ordered_json params_json(const FiniteParams& p) {
  return {{"n", p.n}, {"k_m1", p.k_m1}, {"k_0", p.k_0}, {"k_1", p.k_1}, {"t", p.t}};
}

// ---------------------------------------------------------------------------
// Options

struct Options {
  std::optional<int> n, km1, k0, k1, t;
  std::optional<double> kp_m1, kp0, kp1, t_min, t_max, t_step;
  std::string theorems;
  std::string preset;
  std::string format = "csv";
  std::string out;
  int jobs = 1;
  std::uint64_t seed = 1;
  int max_n = 6;
  std::uint64_t node_budget = VerifyOptions{}.node_budget;
};

inline std::vector<TheoremId> parse_theorems(const std::string& s, std::vector<TheoremId> fallback) {
  if (s.empty()) return fallback;
  std::vector<TheoremId> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto id = parse_theorem(item);
    if (!id) throw BoundsError(ErrorCode::InvalidProfile, "unknown theorem '" + item + "'");
    out.push_back(*id);
  }
  return out;
}

/// Grid t_min, t_min + step, ... <= t_max, each value rounded to 1e-9.
inline std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0)) throw BoundsError(ErrorCode::InvalidProfile, "--t-step must be positive");
  if (hi < lo) throw BoundsError(ErrorCode::InvalidProfile, "--t-max below --t-min");
  std::vector<double> g;
  for (long i = 0;; ++i) {
    const double v = std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9;
    if (v > hi + 1e-9) break;
    g.push_back(v);
  }
  return g;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open " + path);
    }
    os_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

// ---------------------------------------------------------------------------
// Commands

inline FiniteParams instance_of(const Options& o) {
  if (!o.n || !o.km1 || !o.k0 || !o.k1 || !o.t)
    throw BoundsError(ErrorCode::InvalidProfile, "bound needs --n --km1 --k0 --k1 --t");
  return validate_finite(FiniteParams{*o.n, *o.km1, *o.k0, *o.k1, *o.t});
}

inline int cmd_bound(const Options& o, std::ostream& out) {
  const FiniteParams p = instance_of(o);
  const auto ids = parse_theorems(o.theorems, {kAllTheorems.begin(), kAllTheorems.end()});
  SearchOptions so;
  so.seed = o.seed;
  std::vector<BoundResult> rows;
  for (auto id : ids) {
    auto r = best_finite_bound(id, p, so);
    if (r.conditions_met && r.kind == BoundKind::Lower && r.value && *r.value > vertex_count(p))
      throw std::logic_error(to_string(id) + " lower bound exceeds |V|");
    rows.push_back(std::move(r));
  }
  Output sink(o.out, out);
  if (o.format == "json") {
    ordered_json j;
    j["command"] = "bound";
    j["params"] = params_json(p);
    j["vertices"] = vertex_count(p).str();
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row;
      row["theorem_id"] = to_string(r.theorem);
      row["kind"] = std::string(to_string(r.kind));
      row["conditions_met"] = r.conditions_met;
      row["value"] = r.value ? ordered_json(r.value->str()) : ordered_json(nullptr);
      row["capped"] = r.capped ? ordered_json(r.capped->str()) : ordered_json(nullptr);
      if (r.failure) row["failure"] = std::string(to_string(*r.failure));
      if (!r.reason.empty()) row["reason"] = r.reason;
      row["notes"] = r.notes;
      row["witness"] = witness_json(r.witness);
      j["rows"].push_back(row);
    }
    *sink << j.dump(2) << "\n";
  } else {
    *sink << "theorem_id,kind,conditions_met,value,capped,reason,witness_json\r\n";
    for (const auto& r : rows) {
      *sink << to_string(r.theorem) << "," << to_string(r.kind) << ","
            << (r.conditions_met ? "true" : "false") << "," << (r.value ? r.value->str() : "") << ","
            << (r.capped ? r.capped->str() : "") << "," << csv_field(r.reason) << ","
            << csv_field(witness_json(r.witness).dump()) << "\r\n";
    }
  }
  return 0;
}

inline int cmd_sweep(const Options& o, std::ostream& out) {
  Preset cfg{{}, {kAllTheorems.begin(), kAllTheorems.end()}, 0.0, 0.0, 0.01};
  if (!o.preset.empty()) {
    const auto it = presets().find(o.preset);
    if (it == presets().end()) throw BoundsError(ErrorCode::InvalidProfile, "unknown preset " + o.preset);
    cfg = it->second;
  } else if (!o.kp_m1 || !o.kp0 || !o.kp1) {
    throw BoundsError(ErrorCode::InvalidProfile, "sweep needs --preset or --kp-m1 --kp0 --kp1");
  }
  if (o.kp_m1) cfg.kp.kp_m1 = *o.kp_m1;
  if (o.kp0) cfg.kp.kp_0 = *o.kp0;
  if (o.kp1) cfg.kp.kp_1 = *o.kp1;
  validate_asymptotic(cfg.kp);
  if (o.preset.empty()) cfg.t_max = cfg.kp.nonzero();
  if (o.t_min) cfg.t_min = *o.t_min;
  if (o.t_max) cfg.t_max = *o.t_max;
  if (o.t_step) cfg.t_step = *o.t_step;
  const auto grid = make_grid(cfg.t_min, cfg.t_max, cfg.t_step);
  if (!grid.empty() && (grid.front() < -1e-12 || grid.back() > cfg.kp.nonzero() + 1e-9))
    throw BoundsError(ErrorCode::InvalidProfile, "t' grid must lie in [0, k'_-1 + k'_1]");
  const auto ids = parse_theorems(o.theorems, cfg.theorems);
  SearchOptions so;
  so.seed = o.seed;
  so.jobs = o.jobs;
  const auto pts = sweep(cfg.kp, grid, ids, so);
  Output sink(o.out, out);
  if (o.format == "json") {
    ordered_json j;
    j["command"] = "sweep";
    j["kp"] = kp_json(cfg.kp);
    j["seed"] = o.seed;
    j["points"] = ordered_json::array();
    for (const auto& p : pts) j["points"].push_back(point_json(p));
    *sink << j.dump(2) << "\n";
  } else {
    *sink << points_csv(pts);
  }
  const bool any = std::any_of(pts.begin(), pts.end(), [](const CurvePoint& p) { return p.feasible; });
  return pts.empty() || any ? 0 : kExitFailure;
}

inline int cmd_table1(const Options& o, std::ostream& out) {
  const auto& cfg = presets().at("table1");
  std::vector<double> grid(kTable1Tp.begin(), kTable1Tp.end());
  std::vector<TheoremId> ids;
  for (const auto& row : kTable1Published) ids.push_back(row.id);
  SearchOptions so;
  so.seed = o.seed;
  so.jobs = o.jobs;
  const auto pts = sweep(cfg.kp, grid, ids, so);
  auto at = [&](std::size_t ti, std::size_t ri) -> const CurvePoint& { return pts[ti * ids.size() + ri]; };

  out << "k' = (0.005, 0.5, 0.495)\n";
  out << std::left << std::setw(8) << "theorem" << std::setw(8) << "t'" << std::setw(10) << "lambda"
      << std::setw(10) << "published" << "|delta|\n";
  for (std::size_t ri = 0; ri < ids.size(); ++ri)
    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
      const auto& p = at(ti, ri);
      const double published = kTable1Published[ri].lambda[ti];
      out << std::setw(8) << to_string(p.theorem) << std::setw(8) << fixed(p.tp, 3)
          << std::setw(10) << (p.feasible ? fixed(p.lambda, 5) : "-") << std::setw(10)
          << fixed(published, 5) << (p.feasible ? fixed(std::abs(p.lambda - published), 5) : "-") << "\n";
    }
  if (!o.out.empty()) {
    Output sink(o.out, out);
    if (o.format == "json") {
      ordered_json j;
      j["command"] = "table1";
      j["kp"] = kp_json(cfg.kp);
      j["seed"] = o.seed;
      j["points"] = ordered_json::array();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        auto pj = point_json(pts[i]);
        pj["published_lambda"] = kTable1Published[i % ids.size()].lambda[i / ids.size()];
        j["points"].push_back(pj);
      }
      *sink << j.dump(2) << "\n";
    } else {
      *sink << points_csv(pts);
    }
  }
  return 0;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  if (o.max_n < 0 || o.max_n > 10) throw BoundsError(ErrorCode::InvalidProfile, "--max-n must be in [0, 10]");
  VerifyOptions vo;
  vo.max_n = o.max_n;
  vo.jobs = o.jobs;
  vo.node_budget = o.node_budget;
  const auto rep = verify_all(vo);
  Output sink(o.out, out);
  if (o.format == "json") {
    ordered_json j;
    j["command"] = "verify";
    j["max_n"] = o.max_n;
    j["tuples"] = ordered_json::array();
    for (const auto& t : rep.tuples) {
      ordered_json tj;
      tj["params"] = params_json(t.params);
      tj["vertices"] = t.vertices.str();
      tj["alpha"] = t.alpha ? ordered_json(std::to_string(*t.alpha)) : ordered_json(nullptr);
      tj["bounds"] = ordered_json::array();
      for (const auto& b : t.bounds)
        tj["bounds"].push_back({{"theorem_id", to_string(b.theorem)},
                                {"kind", std::string(to_string(kind_of(b.theorem)))},
                                {"value", b.value.str()},
                                {"certificate", b.certificate}});
      tj["failures"] = t.failures();
      j["tuples"].push_back(tj);
    }
    j["profile_failures"] = rep.profile_failures;
    j["ok"] = rep.ok();
    *sink << j.dump(2) << "\n";
  } else {
    *sink << "n,k_m1,k_0,k_1,t,vertices,alpha,best_lower,best_upper,status,failures\r\n";
    for (const auto& t : rep.tuples) {
      std::optional<BigCount> lo, hi;
      for (const auto& b : t.bounds) {
        if (kind_of(b.theorem) == BoundKind::Lower) {
          if (!lo || b.value > *lo) lo = b.value;
        } else if (!hi || b.value < *hi) {
          hi = b.value;
        }
      }
      std::string fails;
      for (const auto& f : t.failures()) fails += (fails.empty() ? "" : "; ") + f;
      const auto& p = t.params;
      *sink << p.n << "," << p.k_m1 << "," << p.k_0 << "," << p.k_1 << "," << p.t << ","
            << t.vertices.str() << "," << (t.alpha ? std::to_string(*t.alpha) : "") << ","
            << (lo ? lo->str() : "") << "," << (hi ? hi->str() : "") << ","
            << (t.ok() ? "pass" : "FAIL") << "," << csv_field(fails) << "\r\n";
    }
    for (const auto& f : rep.profile_failures) *sink << ",,,,,,,,,FAIL," << csv_field(f) << "\r\n";
  }
  return rep.ok() ? 0 : kExitFailure;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds on independence numbers of {-1,0,1} distance graphs"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--theorems", o.theorems, "comma-separated ids, e.g. T1,T4");
    c->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--out", o.out, "output file (default stdout)");
    c->add_option("--jobs", o.jobs)->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed);
  };

  auto* bound = app.add_subcommand("bound", "exact finite bounds for one instance");
  bound->add_option("--n", o.n);
  bound->add_option("--km1", o.km1);
  bound->add_option("--k0", o.k0);
  bound->add_option("--k1", o.k1);
  bound->add_option("--t", o.t);
  common(bound);

  auto* sw = app.add_subcommand("sweep", "growth rates lambda over a t' grid");
  sw->add_option("--preset", o.preset)->check(CLI::IsMember({"figure1", "figure2", "table1"}));
  sw->add_option("--kp-m1", o.kp_m1);
  sw->add_option("--kp0", o.kp0);
  sw->add_option("--kp1", o.kp1);
  sw->add_option("--t-min", o.t_min);
  sw->add_option("--t-max", o.t_max);
  sw->add_option("--t-step", o.t_step);
  common(sw);

  auto* t1 = app.add_subcommand("table1", "Table 1 side by side with the published values");
  common(t1);

  auto* ver = app.add_subcommand("verify", "oracle invariants on every small instance");
  ver->add_option("--max-n", o.max_n);
  ver->add_option("--node-budget", o.node_budget, "search nodes per exact query");
  common(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*bound) return cmd_bound(o, out);
    if (*sw) return cmd_sweep(o, out);
    if (*t1) return cmd_table1(o, out);
    return cmd_verify(o, out);
  } catch (const BoundsError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace indep_bounds::cli
