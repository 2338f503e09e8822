#pragma once

// Benchmark harness: method registry, suites, reference costs, run and
// sweep drivers, and the CSV writers behind the command-line tool.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clsp/adaptive.hpp"
#include "clsp/errors.hpp"
#include "clsp/generator.hpp"
#include "clsp/io.hpp"
#include "clsp/lot_elimination.hpp"
#include "clsp/pbp.hpp"
#include "clsp/tabu.hpp"
#include "clsp/transship.hpp"

namespace clsp {

/// Relative deviation from a reference cost, in percent.
inline double gap_pct(double cost, double reference) {
  if (!(reference > 0)) throw StructuralError("gap needs a positive reference cost");
  return (cost - reference) / reference * 100.0;
}

// ---------------------------------------------------------------------------
// Flat "key = value" configuration

class KeyValues {
 public:
  static KeyValues parse(std::istream& in, std::string origin = "config") {
    KeyValues kv;
    kv.origin_ = std::move(origin);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string body = trim(line);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos)
        throw ConfigError(kv.origin_ + ":" + std::to_string(lineno) + ": expected key = value");
      std::string key = trim(body.substr(0, eq));
      if (key.empty()) throw ConfigError(kv.origin_ + ":" + std::to_string(lineno) + ": empty key");
      if (!kv.values_.emplace(key, trim(body.substr(eq + 1))).second)
        throw ConfigError(kv.origin_ + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return kv;
  }

  static KeyValues load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    auto kv = parse(in, path);
    kv.base_dir_ = std::filesystem::path(path).parent_path();
    return kv;
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::optional<std::string> get(const std::string& key) const {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::string get_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
  }

  std::optional<long long> get_int(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return to_int(key, *v);
  }

  std::optional<double> get_double(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return to_double(key, *v);
  }

  std::optional<bool> get_bool(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    throw ConfigError(origin_ + ": '" + key + "' expects true or false, got '" + *v + "'");
  }

  /// Comma-separated list; an absent key yields nullopt, a present but empty one an empty list.
  std::optional<std::vector<std::string>> get_list(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    std::vector<std::string> out;
    std::istringstream ss(*v);
    std::string part;
    while (std::getline(ss, part, ',')) {
      part = trim(part);
      if (!part.empty()) out.push_back(part);
    }
    return out;
  }

  std::optional<std::vector<double>> get_doubles(const std::string& key) const {
    auto parts = get_list(key);
    if (!parts) return std::nullopt;
    std::vector<double> out;
    for (const auto& p : *parts) out.push_back(to_double(key, p));
    return out;
  }

  std::optional<std::vector<int>> get_ints(const std::string& key) const {
    auto parts = get_list(key);
    if (!parts) return std::nullopt;
    std::vector<int> out;
    for (const auto& p : *parts) out.push_back(static_cast<int>(to_int(key, p)));
    return out;
  }

  /// Paths in a config file are relative to the file's directory.
  std::string resolve_path(const std::string& p) const {
    std::filesystem::path path(p);
    if (path.is_absolute() || base_dir_.empty()) return path.string();
    return (base_dir_ / path).string();
  }

  /// Every key must have been read by now; leftovers are typos.
  void reject_unused() const {
    for (const auto& [key, value] : values_)
      if (!used_.contains(key)) throw ConfigError(origin_ + ": unknown key '" + key + "'");
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  }

  long long to_int(const std::string& key, const std::string& v) const {
    long long x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || ptr != v.data() + v.size())
      throw ConfigError(origin_ + ": '" + key + "' expects an integer, got '" + v + "'");
    return x;
  }

  double to_double(const std::string& key, const std::string& v) const {
    double x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || ptr != v.data() + v.size())
      throw ConfigError(origin_ + ": '" + key + "' expects a number, got '" + v + "'");
    return x;
  }

  std::string origin_;
  std::filesystem::path base_dir_;
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

// ---------------------------------------------------------------------------
// Methods

enum class MethodKind { Preset, LotElim, Rpp, Rle, Arpp, ArppTabu, ArppLotElim, Tabu };

struct MethodInfo {
  std::string name;
  MethodKind kind = MethodKind::Preset;
  RuleConfig rules = presets::HeinB;
  Strategy strategy = Strategy::None;
  LeVariant le = LeVariant::Deterministic;

  bool uses_m() const { return kind != MethodKind::Preset && kind != MethodKind::LotElim && kind != MethodKind::Tabu; }
  bool uses_w() const { return kind == MethodKind::Rpp || kind == MethodKind::Rle; }
  bool randomized() const { return uses_m(); }
};

inline const std::vector<MethodInfo>& method_table() {
  static const std::vector<MethodInfo> table = [] {
    std::vector<MethodInfo> t;
    for (const auto& p : kPresets) t.push_back({std::string(p.name), MethodKind::Preset, p.rules});
    t.push_back({"LotElim", MethodKind::LotElim});
    t.push_back({"RPP1", MethodKind::Rpp, presets::HeinB, Strategy::PS1});
    t.push_back({"RPP2", MethodKind::Rpp, presets::HeinB, Strategy::PS2});
    t.push_back({"RPP3", MethodKind::Rpp, presets::HeinB, Strategy::PS3});
    t.push_back({"RLE1", MethodKind::Rle, presets::HeinB, Strategy::None, LeVariant::RLE1});
    t.push_back({"RLE2", MethodKind::Rle, presets::HeinB, Strategy::None, LeVariant::RLE2});
    t.push_back({"ARPP1", MethodKind::Arpp, presets::HeinB, Strategy::PS1});
    t.push_back({"ARPP2", MethodKind::Arpp, presets::HeinB, Strategy::PS2});
    t.push_back({"ARPP3", MethodKind::Arpp, presets::HeinB, Strategy::PS3});
    t.push_back({"ARPP3-TS", MethodKind::ArppTabu, presets::HeinB, Strategy::PS3});
    t.push_back({"ARPP3-LE", MethodKind::ArppLotElim, presets::HeinB, Strategy::PS3});
    t.push_back({"Tabu", MethodKind::Tabu});
    return t;
  }();
  return table;
}

inline std::optional<MethodInfo> find_method(std::string_view name) {
  for (const auto& m : method_table())
    if (m.name == name) return m;
  return std::nullopt;
}

inline MethodInfo require_method(std::string_view name) {
  auto m = find_method(name);
  if (!m) throw ConfigError("unknown method '" + std::string(name) + "'");
  return *m;
}

/// Unset fields take per-method defaults, some of which depend on the instance size.
struct MethodParams {
  std::optional<int> m;
  std::optional<double> w;
  std::uint64_t seed = 0;
  std::optional<int> iteration_cap;  // tabu F
  std::optional<bool> restricted;    // tabu neighbourhood
  std::vector<double> grid = default_w_grid();
};

/// Horizons at least this long count as "large" for size-dependent defaults.
inline constexpr std::size_t kLargeHorizon = 24;

inline int default_m(const MethodInfo& info, const Instance& inst) {
  switch (info.kind) {
    case MethodKind::ArppTabu:
    case MethodKind::ArppLotElim:
      return inst.periods() >= kLargeHorizon ? 50 : 10;
    default:
      return 20;
  }
}

inline constexpr double kDefaultW = 0.3;
inline constexpr int kHybridIterationCap = 2;

struct MethodRun {
  Plan plan;
  CostBreakdown cost;
  std::optional<int> m;
  std::optional<double> w;
  std::optional<std::uint64_t> seed;
  std::string extra;
};

/// Starting plan for lot elimination: the fixed-setup optimum over the
/// lot-for-lot pattern, or over all slots when that pattern cannot cover demand.
inline Plan lot_elimination_start(const Instance& inst) {
  if (!instance_feasible(inst)) throw InfeasibleInput("instance has no feasible plan");
  FixedSetupSolver solver(inst);
  auto r = solver.solve(SetupPattern::of(Plan::lot_for_lot(inst)));
  if (!r.optimal()) r = solver.solve(SetupPattern::all(inst));
  if (!r.optimal()) throw InfeasibleInput("instance has no feasible plan");
  return r.plan;
}

inline MethodRun run_method(const Instance& inst, const MethodInfo& info, const MethodParams& params,
                            std::optional<double> reference = std::nullopt) {
  MethodRun out;
  const bool auto_restricted = inst.periods() >= kLargeHorizon;
  auto tabu_config = [&](std::optional<int> default_cap) {
    TabuConfig cfg;
    cfg.iteration_cap = params.iteration_cap ? params.iteration_cap : default_cap;
    cfg.reference_cost = reference;
    cfg.restricted = params.restricted.value_or(auto_restricted);
    return cfg;
  };
  if (info.randomized()) {
    out.m = params.m.value_or(default_m(info, inst));
    out.seed = params.seed;
  }
  if (info.uses_w()) out.w = params.w.value_or(kDefaultW);

  switch (info.kind) {
    case MethodKind::Preset: {
      out.plan = run_pbp(inst, info.rules);
      out.extra = "setups=" + std::to_string(out.plan.setup_count());
      break;
    }
    case MethodKind::LotElim: {
      auto r = run_le(inst, lot_elimination_start(inst));
      out.plan = std::move(r.plan);
      out.extra = "lp=" + std::to_string(r.lp_solves);
      break;
    }
    case MethodKind::Rpp: {
      auto r = run_rpp(inst, {info.strategy, *out.w, *out.m, params.seed}, info.rules);
      out.plan = std::move(r.plan);
      out.extra = "best_rep=" + std::to_string(r.best_rep);
      break;
    }
    case MethodKind::Rle: {
      auto r = run_le(inst, lot_elimination_start(inst), {info.le, *out.w, *out.m, params.seed});
      out.plan = std::move(r.plan);
      out.extra = "best_rep=" + std::to_string(r.best_rep) + ";lp=" + std::to_string(r.lp_solves);
      break;
    }
    case MethodKind::Arpp:
    case MethodKind::ArppTabu:
    case MethodKind::ArppLotElim: {
      ArppConfig cfg{info.strategy, *out.m, params.seed, params.grid, reference};
      auto a = run_arpp(inst, cfg);
      char head[64];
      std::snprintf(head, sizeof head, "w*=%.2f;probes=%d", a.w_star, a.probe_count);
      out.extra = head;
      if (info.kind == MethodKind::Arpp) {
        out.plan = std::move(a.plan);
      } else if (info.kind == MethodKind::ArppTabu) {
        auto t = run_tabu(inst, a.plan, tabu_config(kHybridIterationCap));
        out.plan = std::move(t.plan);
        out.extra += ";iters=" + std::to_string(t.iterations) + ";lp=" + std::to_string(t.lp_solves);
      } else {
        auto le = run_le(inst, a.plan);
        out.plan = std::move(le.plan);
        out.extra += ";lp=" + std::to_string(le.lp_solves);
      }
      break;
    }
    case MethodKind::Tabu: {
      auto t = run_tabu(inst, run_pbp(inst, presets::HeinB), tabu_config(std::nullopt));
      out.plan = std::move(t.plan);
      out.extra = "iters=" + std::to_string(t.iterations) + ";lp=" + std::to_string(t.lp_solves);
      break;
    }
  }
  out.cost = evaluate_cost(inst, out.plan);
  return out;
}

// ---------------------------------------------------------------------------
// Suites and references

struct SuiteItem {
  std::string id;
  Instance instance;
};

struct SuiteSpec {
  std::size_t items = 12, periods = 12;
  std::uint64_t seed = 1;
  std::size_t limit = 0;
  std::string dir;  // when set, load every *.clsp file instead of generating
};

inline std::pair<std::size_t, std::size_t> parse_size(const std::string& s) {
  const auto x = s.find('x');
  std::size_t n = 0, t = 0;
  auto ok = [](const char* b, const char* e, std::size_t& v) {
    auto [ptr, ec] = std::from_chars(b, e, v);
    return ec == std::errc{} && ptr == e && v > 0;
  };
  if (x == std::string::npos || !ok(s.data(), s.data() + x, n) || !ok(s.data() + x + 1, s.data() + s.size(), t))
    throw ConfigError("size must look like 12x12, got '" + s + "'");
  return {n, t};
}

inline std::vector<SuiteItem> load_suite_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("suite directory " + dir + " does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".clsp") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("suite directory " + dir + " holds no .clsp files");
  std::vector<SuiteItem> out;
  for (const auto& f : files) out.push_back({f.stem().string(), load_instance(f.string())});
  return out;
}

inline std::vector<SuiteItem> load_suite(const SuiteSpec& spec) {
  if (!spec.dir.empty()) return load_suite_dir(spec.dir);
  std::vector<SuiteItem> out;
  for (auto& e : generate_suite(spec.items, spec.periods, spec.seed, spec.limit))
    out.push_back({std::move(e.id), std::move(e.instance)});
  return out;
}

enum class ReferenceMode { Oracle, File, BestFound, None };

inline ReferenceMode parse_reference_mode(const std::string& s) {
  if (s == "oracle") return ReferenceMode::Oracle;
  if (s == "file") return ReferenceMode::File;
  if (s == "best-found") return ReferenceMode::BestFound;
  if (s == "none") return ReferenceMode::None;
  throw ConfigError("reference must be oracle, file, best-found or none, got '" + s + "'");
}

/// Reference known before any method runs (oracle or file mode).
inline std::optional<double> external_reference(ReferenceMode mode, const ReferenceTable& table,
                                                const SuiteItem& item) {
  if (mode == ReferenceMode::File) {
    auto it = table.find(item.id);
    if (it == table.end()) return std::nullopt;
    return it->second;
  }
  if (mode == ReferenceMode::Oracle) {
    if (item.instance.items() * item.instance.periods() > kExactSlotBudget) return std::nullopt;
    auto opt = exact_optimum(item.instance);
    if (!opt.optimal()) return std::nullopt;
    return opt.cost.total;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Rows, aggregates and CSV

struct RunRow {
  std::string instance_id;
  std::string method;
  std::optional<int> m;
  std::optional<double> w;
  std::optional<std::uint64_t> seed;
  double cost = 0;
  Count exact_cost = 0;
  std::optional<double> reference;
  std::optional<double> gap;
  double time_s = 0;
  std::string extra;
};

struct Aggregate {
  std::string method;
  std::size_t instances = 0;
  std::size_t with_reference = 0;
  std::optional<double> avg_gap, worst_gap, best_gap;
  double avg_cost = 0;
  double avg_time_s = 0;
};

struct RunReport {
  std::vector<RunRow> rows;
  std::vector<Aggregate> aggregates;
  std::vector<std::string> notes;  // instances left without a reference, ...
  double wall_s = 0;
};

namespace detail {

/// Fixed six decimals with trailing zeros trimmed: exact for costs (multiples of 1/lcm(K)).
inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

inline std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v, int digits) { return v ? fmt_fixed(*v, digits) : ""; }

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Fills reference and gap from per-instance references; rows without one keep blanks.
inline void apply_references(std::vector<RunRow>& rows, const std::map<std::string, double>& refs) {
  for (auto& r : rows) {
    auto it = refs.find(r.instance_id);
    if (it == refs.end()) continue;
    r.reference = it->second;
    r.gap = gap_pct(r.cost, it->second);
  }
}

}  // namespace detail

inline constexpr const char* kRunCsvHeader = "instance_id,method,m,w,seed,cost,reference,gap_pct,time_s,extra";

inline void write_runs_csv(std::ostream& out, const std::vector<RunRow>& rows, bool with_time) {
  out << kRunCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.instance_id << ',' << r.method << ',' << (r.m ? std::to_string(*r.m) : "") << ','
        << (r.w ? detail::fmt_fixed(*r.w, 2) : "") << ',' << (r.seed ? std::to_string(*r.seed) : "") << ','
        << detail::fmt_num(r.cost) << ',' << (r.reference ? detail::fmt_num(*r.reference) : "") << ','
        << detail::fmt_opt(r.gap, 4) << ',' << (with_time ? detail::fmt_fixed(r.time_s, 6) : "") << ','
        << r.extra << '\n';
  }
}

/// One aggregate per method, in first-appearance order.
inline std::vector<Aggregate> aggregate_rows(const std::vector<RunRow>& rows) {
  std::vector<Aggregate> out;
  std::map<std::string, std::size_t> slot;
  std::vector<double> gap_sum;
  for (const auto& r : rows) {
    auto [it, fresh] = slot.emplace(r.method, out.size());
    if (fresh) {
      out.emplace_back().method = r.method;
      gap_sum.push_back(0);
    }
    Aggregate& a = out[it->second];
    ++a.instances;
    a.avg_cost += r.cost;
    a.avg_time_s += r.time_s;
    if (!r.gap) continue;
    ++a.with_reference;
    gap_sum[it->second] += *r.gap;
    a.worst_gap = a.worst_gap ? std::max(*a.worst_gap, *r.gap) : *r.gap;
    a.best_gap = a.best_gap ? std::min(*a.best_gap, *r.gap) : *r.gap;
  }
  for (std::size_t j = 0; j < out.size(); ++j) {
    Aggregate& a = out[j];
    a.avg_cost /= static_cast<double>(a.instances);
    a.avg_time_s /= static_cast<double>(a.instances);
    if (a.with_reference > 0) a.avg_gap = gap_sum[j] / static_cast<double>(a.with_reference);
  }
  return out;
}

inline void write_aggregate_csv(std::ostream& out, const std::vector<Aggregate>& aggs, bool with_time) {
  out << "method,instances,with_reference,avg_gap_pct,worst_gap_pct,best_gap_pct,avg_cost,avg_time_s\n";
  for (const auto& a : aggs) {
    out << a.method << ',' << a.instances << ',' << a.with_reference << ',' << detail::fmt_opt(a.avg_gap, 4) << ','
        << detail::fmt_opt(a.worst_gap, 4) << ',' << detail::fmt_opt(a.best_gap, 4) << ','
        << detail::fmt_fixed(a.avg_cost, 4) << ',' << (with_time ? detail::fmt_fixed(a.avg_time_s, 6) : "") << '\n';
  }
}

inline void write_timing_log(std::ostream& out, const std::vector<RunRow>& rows, double wall_s) {
  for (const auto& r : rows)
    out << r.instance_id << ' ' << r.method << ' ' << (r.m ? std::to_string(*r.m) : "-") << ' '
        << (r.w ? detail::fmt_fixed(*r.w, 2) : "-") << ' ' << detail::fmt_fixed(r.time_s, 6) << '\n';
  out << "# wall " << detail::fmt_fixed(wall_s, 6) << '\n';
}

// ---------------------------------------------------------------------------
// Bench

struct BenchMethod {
  MethodInfo info;
  MethodParams params;
};

struct BenchConfig {
  SuiteSpec suite;
  std::vector<BenchMethod> methods;
  ReferenceMode reference = ReferenceMode::BestFound;
  std::string reference_file;
  bool record_time = false;
};

namespace detail {

inline SuiteSpec read_suite(const KeyValues& kv) {
  SuiteSpec s;
  auto dir = kv.get("suite_dir");
  auto size = kv.get("suite");
  auto seed = kv.get_int("suite_seed");
  auto limit = kv.get_int("suite_limit");
  if (dir && size) throw ConfigError("give either suite or suite_dir, not both");
  if (!dir && !size) throw ConfigError("config must name a suite (suite = 12x12 or suite_dir = PATH)");
  if (dir) {
    s.dir = kv.resolve_path(*dir);
    return s;
  }
  std::tie(s.items, s.periods) = parse_size(*size);
  if (seed) s.seed = static_cast<std::uint64_t>(*seed);
  if (limit) {
    if (*limit < 0) throw ConfigError("suite_limit must be nonnegative");
    s.limit = static_cast<std::size_t>(*limit);
  }
  return s;
}

inline void read_reference(const KeyValues& kv, ReferenceMode& mode, std::string& file) {
  mode = parse_reference_mode(kv.get_or("reference", "best-found"));
  auto f = kv.get("reference_file");
  if (mode == ReferenceMode::File && !f) throw ConfigError("reference = file needs reference_file");
  if (f) file = kv.resolve_path(*f);
}

inline void check_level(double w, const std::string& what) {
  if (!(w >= 0 && w <= 1)) throw ConfigError(what + " must lie in [0, 1]");
}

}  // namespace detail

/// Keys: suite | suite_dir, suite_seed, suite_limit, methods, seed, reference,
/// reference_file, record_time, and per-method NAME.m, NAME.w, NAME.F,
/// NAME.restricted, NAME.grid.
inline BenchConfig read_bench_config(const KeyValues& kv) {
  BenchConfig cfg;
  cfg.suite = detail::read_suite(kv);
  detail::read_reference(kv, cfg.reference, cfg.reference_file);
  cfg.record_time = kv.get_bool("record_time").value_or(false);
  const auto seed = static_cast<std::uint64_t>(kv.get_int("seed").value_or(1));
  auto names = kv.get_list("methods");
  if (!names || names->empty()) throw ConfigError("method list is empty");
  std::set<std::string> seen;
  for (const auto& name : *names) {
    if (!seen.insert(name).second) throw ConfigError("method '" + name + "' listed twice");
    BenchMethod bm{require_method(name), {}};
    bm.params.seed = seed;
    if (auto m = kv.get_int(name + ".m")) {
      if (*m < 1) throw ConfigError(name + ".m must be at least 1");
      bm.params.m = static_cast<int>(*m);
    }
    if (auto w = kv.get_double(name + ".w")) {
      detail::check_level(*w, name + ".w");
      bm.params.w = *w;
    }
    if (auto f = kv.get_int(name + ".F")) {
      if (*f < 1) throw ConfigError(name + ".F must be at least 1");
      bm.params.iteration_cap = static_cast<int>(*f);
    }
    bm.params.restricted = kv.get_bool(name + ".restricted");
    if (auto g = kv.get_doubles(name + ".grid")) {
      if (g->size() < 3 || !std::is_sorted(g->begin(), g->end()))
        throw ConfigError(name + ".grid needs at least three ascending levels");
      for (double w : *g) detail::check_level(w, name + ".grid");
      bm.params.grid = *g;
    }
    cfg.methods.push_back(std::move(bm));
  }
  kv.reject_unused();
  return cfg;
}

inline RunReport run_bench(const BenchConfig& cfg, const std::vector<SuiteItem>& suite) {
  if (cfg.methods.empty()) throw ConfigError("method list is empty");
  const auto t0 = std::chrono::steady_clock::now();
  ReferenceTable table;
  if (cfg.reference == ReferenceMode::File) table = load_references(cfg.reference_file);

  RunReport report;
  std::map<std::string, double> refs;
  for (const auto& item : suite) {
    const auto ext = external_reference(cfg.reference, table, item);
    if (ext) refs[item.id] = *ext;
    if ((cfg.reference == ReferenceMode::File || cfg.reference == ReferenceMode::Oracle) && !ext)
      report.notes.push_back(item.id + ": no reference cost");

    std::optional<Count> best;
    double best_cost = 0;
    for (const auto& bm : cfg.methods) {
      const auto t1 = std::chrono::steady_clock::now();
      MethodRun run = run_method(item.instance, bm.info, bm.params, ext);
      RunRow row;
      row.time_s = detail::seconds_since(t1);
      row.instance_id = item.id;
      row.method = bm.info.name;
      row.m = run.m;
      row.w = run.w;
      row.seed = run.seed;
      row.cost = run.cost.total;
      row.exact_cost = run.cost.exact_total;
      row.extra = std::move(run.extra);
      if (!best || row.exact_cost < *best) {
        best = row.exact_cost;
        best_cost = row.cost;
      }
      report.rows.push_back(std::move(row));
    }
    if (cfg.reference == ReferenceMode::BestFound) {
      if (best_cost > 0) {
        refs[item.id] = best_cost;
      } else {
        report.notes.push_back(item.id + ": best-found cost is zero, gap undefined");
      }
    }
  }
  detail::apply_references(report.rows, refs);
  report.aggregates = aggregate_rows(report.rows);
  report.wall_s = detail::seconds_since(t0);
  return report;
}

// ---------------------------------------------------------------------------
// Sweep over (m, w) for one randomized method

struct SweepConfig {
  SuiteSpec suite;
  MethodInfo method;
  std::vector<int> m_list;
  std::vector<double> w_grid = default_w_grid();
  std::uint64_t seed = 1;
  ReferenceMode reference = ReferenceMode::BestFound;
  std::string reference_file;
  bool record_time = false;
};

struct SweepCell {
  int m = 0;
  double w = 0;
  std::size_t with_reference = 0;
  std::optional<double> avg_gap;
  double avg_cost = 0;
  double avg_time_s = 0;
};

struct SweepReport {
  std::vector<RunRow> rows;    // one per (instance, w, m)
  std::vector<SweepCell> cells;  // m-major, then w
  std::vector<std::string> notes;
  double wall_s = 0;
};

/// Keys: suite | suite_dir, suite_seed, suite_limit, method, m, w, seed,
/// reference, reference_file, record_time.
inline SweepConfig read_sweep_config(const KeyValues& kv) {
  SweepConfig cfg;
  cfg.suite = detail::read_suite(kv);
  detail::read_reference(kv, cfg.reference, cfg.reference_file);
  cfg.record_time = kv.get_bool("record_time").value_or(false);
  cfg.seed = static_cast<std::uint64_t>(kv.get_int("seed").value_or(1));
  auto names = kv.get_list("method");
  if (!names || names->empty()) throw ConfigError("method list is empty");
  if (names->size() != 1) throw ConfigError("a sweep takes exactly one method");
  cfg.method = require_method(names->front());
  if (cfg.method.kind != MethodKind::Rpp && cfg.method.kind != MethodKind::Rle)
    throw ConfigError("sweeps support RPP1, RPP2, RPP3, RLE1 and RLE2 only");
  auto ms = kv.get_ints("m");
  if (!ms || ms->empty()) throw ConfigError("sweep needs an m list");
  cfg.m_list = *ms;
  std::sort(cfg.m_list.begin(), cfg.m_list.end());
  cfg.m_list.erase(std::unique(cfg.m_list.begin(), cfg.m_list.end()), cfg.m_list.end());
  if (cfg.m_list.front() < 1) throw ConfigError("m values must be at least 1");
  if (auto ws = kv.get_doubles("w")) {
    if (ws->empty()) throw ConfigError("w grid is empty");
    for (double w : *ws) detail::check_level(w, "w");
    cfg.w_grid = *ws;
  }
  kv.reject_unused();
  return cfg;
}

/// Each (instance, w) is run once at the largest m; the result at a smaller m
/// is the running best after that many repetitions, identical to a separate run.
inline SweepReport run_sweep(const SweepConfig& cfg, const std::vector<SuiteItem>& suite) {
  if (cfg.m_list.empty()) throw ConfigError("sweep needs an m list");
  if (cfg.w_grid.empty()) throw ConfigError("w grid is empty");
  const auto t0 = std::chrono::steady_clock::now();
  const int m_max = cfg.m_list.back();
  ReferenceTable table;
  if (cfg.reference == ReferenceMode::File) table = load_references(cfg.reference_file);

  SweepReport report;
  std::map<std::string, double> refs;
  for (const auto& item : suite) {
    const Instance& inst = item.instance;
    const auto ext = external_reference(cfg.reference, table, item);
    if (ext) refs[item.id] = *ext;
    if ((cfg.reference == ReferenceMode::File || cfg.reference == ReferenceMode::Oracle) && !ext)
      report.notes.push_back(item.id + ": no reference cost");

    // shared across w: the unperturbed construction or lot-elimination start
    const auto tb = std::chrono::steady_clock::now();
    RppResult baseline;
    std::optional<Plan> le_start;
    if (cfg.method.kind == MethodKind::Rpp) {
      baseline.plan = run_pbp(inst, cfg.method.rules);
      baseline.cost = evaluate_cost(inst, baseline.plan);
    } else {
      le_start = lot_elimination_start(inst);
    }
    const double shared_s = detail::seconds_since(tb);

    std::optional<Count> best_exact;
    double best_cost = 0;
    for (double w : cfg.w_grid) {
      std::vector<Count> trace;
      std::vector<double> times;
      const auto t1 = std::chrono::steady_clock::now();
      CandidateHook hook = [&](int, Count c) {
        trace.push_back(c);
        times.push_back(shared_s + detail::seconds_since(t1));
      };
      if (cfg.method.kind == MethodKind::Rpp) {
        run_rpp(inst, {cfg.method.strategy, w, m_max, cfg.seed}, cfg.method.rules, &baseline, hook);
      } else {
        run_le(inst, *le_start, {cfg.method.le, w, m_max, cfg.seed}, hook);
      }
      const double scale = static_cast<double>(inst.cost_scale());
      for (int m : cfg.m_list) {
        RunRow row;
        row.instance_id = item.id;
        row.method = cfg.method.name;
        row.m = m;
        row.w = w;
        row.seed = cfg.seed;
        row.exact_cost = trace.at(static_cast<std::size_t>(m));
        row.cost = static_cast<double>(row.exact_cost) / scale;
        row.time_s = times.at(static_cast<std::size_t>(m));
        if (!best_exact || row.exact_cost < *best_exact) {
          best_exact = row.exact_cost;
          best_cost = row.cost;
        }
        report.rows.push_back(std::move(row));
      }
    }
    if (cfg.reference == ReferenceMode::BestFound && best_cost > 0) refs[item.id] = best_cost;
  }
  detail::apply_references(report.rows, refs);

  for (int m : cfg.m_list) {
    for (double w : cfg.w_grid) {
      SweepCell cell;
      cell.m = m;
      cell.w = w;
      double gap_sum = 0;
      std::size_t n = 0;
      for (const auto& r : report.rows) {
        if (*r.m != m || *r.w != w) continue;
        ++n;
        cell.avg_cost += r.cost;
        cell.avg_time_s += r.time_s;
        if (r.gap) {
          ++cell.with_reference;
          gap_sum += *r.gap;
        }
      }
      if (n > 0) {
        cell.avg_cost /= static_cast<double>(n);
        cell.avg_time_s /= static_cast<double>(n);
      }
      if (cell.with_reference > 0) cell.avg_gap = gap_sum / static_cast<double>(cell.with_reference);
      report.cells.push_back(cell);
    }
  }
  report.wall_s = detail::seconds_since(t0);
  return report;
}

/// Table layout: one row per m, one column per w. `time` selects the time grid.
inline void write_sweep_grid(std::ostream& out, const SweepConfig& cfg, const SweepReport& rep, bool time) {
  out << "m";
  for (double w : cfg.w_grid) out << ",w=" << detail::fmt_fixed(w, 2);
  out << '\n';
  std::size_t k = 0;
  for (int m : cfg.m_list) {
    out << m;
    for (std::size_t j = 0; j < cfg.w_grid.size(); ++j, ++k) {
      const auto& c = rep.cells[k];
      out << ',' << (time ? detail::fmt_fixed(c.avg_time_s, 6) : detail::fmt_opt(c.avg_gap, 4));
    }
    out << '\n';
  }
}

/// Gap as a function of w at one m, for plotting.
inline void write_sweep_series(std::ostream& out, const SweepReport& rep, int m) {
  out << "w,avg_gap_pct,avg_cost\n";
  for (const auto& c : rep.cells)
    if (c.m == m)
      out << detail::fmt_fixed(c.w, 2) << ',' << detail::fmt_opt(c.avg_gap, 4) << ','
          << detail::fmt_fixed(c.avg_cost, 4) << '\n';
}

// ---------------------------------------------------------------------------
// Output directories

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  return out;
}

}  // namespace detail

/// runs.csv, aggregate.csv, timing.log
inline void write_bench_outputs(const std::string& dir, const BenchConfig& cfg, const RunReport& rep) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto runs = detail::open_out(fs::path(dir) / "runs.csv");
  write_runs_csv(runs, rep.rows, cfg.record_time);
  auto agg = detail::open_out(fs::path(dir) / "aggregate.csv");
  write_aggregate_csv(agg, rep.aggregates, cfg.record_time);
  auto timing = detail::open_out(fs::path(dir) / "timing.log");
  write_timing_log(timing, rep.rows, rep.wall_s);
}

/// sweep_runs.csv, sweep_gap.csv, sweep_time.csv, series_m<M>.csv, timing.log
inline void write_sweep_outputs(const std::string& dir, const SweepConfig& cfg, const SweepReport& rep) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto runs = detail::open_out(fs::path(dir) / "sweep_runs.csv");
  write_runs_csv(runs, rep.rows, cfg.record_time);
  auto gap = detail::open_out(fs::path(dir) / "sweep_gap.csv");
  write_sweep_grid(gap, cfg, rep, false);
  auto time = detail::open_out(fs::path(dir) / "sweep_time.csv");
  write_sweep_grid(time, cfg, rep, true);
  for (int m : cfg.m_list) {
    auto series = detail::open_out(fs::path(dir) / ("series_m" + std::to_string(m) + ".csv"));
    write_sweep_series(series, rep, m);
  }
  auto timing = detail::open_out(fs::path(dir) / "timing.log");
  write_timing_log(timing, rep.rows, rep.wall_s);
}

}  // namespace clsp
