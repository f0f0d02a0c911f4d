// Copyright 2026 The chen-explicit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// `chen` command-line driver. run() is the whole program; main() forwards to it.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chen/bounds.hpp"
#include "chen/constants.hpp"
#include "chen/harness.hpp"
#include "chen/primes.hpp"
#include "chen/report.hpp"
#include "chen/sievefun.hpp"

namespace chen::cli {

enum class Subcommand { constants, sievefun, bounds, verify, scan, cache };
enum class OutputFormat { json, csv, text };

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  Subcommand subcommand = Subcommand::constants;
  double precision_target = 1e-12;
  std::uint64_t table_limit = 1'000'000;
  OutputFormat output_format = OutputFormat::json;
  std::string output_path;
  unsigned threads = 1;

  void validate() const {
    if (!(precision_target >= 1e-15 && precision_target <= 1e-6))
      throw config_error("--precision-target must lie in [1e-15, 1e-6]");
    if (threads < 1) throw config_error("--threads must be >= 1");
    if (table_limit < 2 || table_limit > kMaxTableLimit) throw config_error("--table-limit out of range");
  }
};

struct SievefunArgs {
  double s_min = 1.0, s_max = kSieveMaxS, step = 0.01;
};
struct BoundsArgs {
  std::string theorem = "final";
  double loglog_N = 36;
  double epsilon = kDefaultEpsilon;
};
struct VerifyArgs {
  std::uint64_t N = 0, scan = 0;
  double z_exp = 1.0 / 8.0, y_exp = 1.0 / 3.0;
  std::string emit;
};
struct ScanArgs {
  std::uint64_t N_max = 1'000'000;
  bool rows = false;
};
struct CacheArgs {
  bool clear = false;
};

// ---------------------------------------------------------------------------
// Prime table acquisition, optionally through the on-disk cache.

inline constexpr const char* kCacheEnv = "CHEN_CACHE_DIR";

inline std::filesystem::path cache_path(const std::filesystem::path& dir, std::uint64_t limit) {
  return dir / ("primes-" + std::to_string(limit) + ".bin");
}

struct TableSource {
  PrimeTable table;
  std::string status;  // memory | loaded | built | regenerated
  std::string path;
};

inline TableSource acquire_table(std::uint64_t limit, unsigned threads, std::ostream& err) {
  TableSource src;
  const char* dir = std::getenv(kCacheEnv);
  if (!dir || !*dir) {
    src.table = PrimeTable::build(limit, threads);
    src.status = "memory";
    return src;
  }
  std::filesystem::path p = cache_path(dir, limit);
  src.path = p.string();
  if (std::filesystem::exists(p)) {
    try {
      src.table = PrimeTable::load(src.path, limit);
      src.status = "loaded";
      return src;
    } catch (const std::exception& e) {
      err << "warning: cache file " << src.path << " unreadable (" << e.what() << "); regenerating\n";
      src.status = "regenerated";
    }
  } else {
    src.status = "built";
  }
  src.table = PrimeTable::build(limit, threads);
  try {
    std::filesystem::create_directories(dir);
    src.table.save(src.path);
  } catch (const std::exception& e) {
    err << "warning: could not write cache file " << src.path << ": " << e.what() << "\n";
  }
  return src;
}

// ---------------------------------------------------------------------------
// Report builders.

inline Json header(const char* sub) { return Json{{"schema", kReportSchema}, {"subcommand", sub}}; }

inline Json bound_report_json(const BoundReport& r) {
  Json j{{"theorem_id", to_string(r.theorem_id)}, {"loglog_N", r.loglog_N}};
  j["epsilon"] = r.epsilon ? Json(*r.epsilon) : Json(nullptr);
  Json terms = Json::array();
  for (const auto& t : r.terms)
    terms.push_back(Json{{"label", t.label}, {"sign", t.sign}, {"value", ball_json(t.value)}});
  j["terms"] = terms;
  j["total"] = ball_json(r.total);
  Json derived = Json::array();
  for (const auto& [k, v] : r.derived) derived.push_back(Json{{"name", k}, {"value", ball_json(v)}});
  j["derived"] = derived;
  j["annotations"] = r.annotations;
  return j;
}

inline void bound_report_text(const BoundReport& r, std::ostream& os) {
  os << to_string(r.theorem_id) << " loglogN=" << fmt17(r.loglog_N);
  if (r.epsilon) os << " epsilon=" << fmt17(*r.epsilon);
  os << "\n";
  for (const auto& t : r.terms)
    os << "  " << (t.sign > 0 ? "+ " : "- ") << t.label << " = " << fmt17(t.value.mid()) << " +/- " << fmt17(t.value.rad()) << "\n";
  os << "  total = " << fmt17(r.total.mid()) << " +/- " << fmt17(r.total.rad()) << "\n";
  for (const auto& [k, v] : r.derived) os << "  " << k << " = " << fmt17(v.mid()) << " +/- " << fmt17(v.rad()) << "\n";
  for (const auto& a : r.annotations) os << "  note: " << a << "\n";
}

inline void bound_report_csv_rows(const BoundReport& r, std::ostream& os) {
  for (const auto& t : r.terms)
    os << to_string(r.theorem_id) << ",\"" << t.label << "\"," << t.sign << "," << fmt17(t.value.mid()) << "," << fmt17(t.value.rad()) << "\n";
  os << to_string(r.theorem_id) << ",total,1," << fmt17(r.total.mid()) << "," << fmt17(r.total.rad()) << "\n";
}

// ---------------------------------------------------------------------------
// Subcommands. Each writes to `out` and returns an exit status.

inline int run_constants(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::uint64_t limit = std::max<std::uint64_t>(cfg.table_limit, 1'000'000);
  auto src = acquire_table(limit, cfg.threads, err);
  LedgerOptions lo;
  lo.precision_target = cfg.precision_target;
  auto L = ledger(src.table, lo);
  if (cfg.output_format == OutputFormat::json) {
    Json j = header("constants");
    j["precision_target"] = cfg.precision_target;
    Json entries = Json::array();
    for (const auto& [name, e] : L.entries) {
      Json je{{"name", name}, {"value", ball_json(e.value)}};
      je["paper_bound"] = e.paper_bound ? Json(*e.paper_bound) : Json(nullptr);
      je["provenance"] = e.provenance;
      je["pass"] = e.pass;
      entries.push_back(je);
    }
    j["entries"] = entries;
    j["pass"] = L.pass();
    out << dump_json(j);
  } else if (cfg.output_format == OutputFormat::csv) {
    out << "name,mid,rad,paper_bound,pass\n";
    for (const auto& [name, e] : L.entries)
      out << name << "," << fmt17(e.value.mid()) << "," << fmt17(e.value.rad()) << ","
          << (e.paper_bound ? fmt17(*e.paper_bound) : "") << "," << (e.pass ? "true" : "false") << "\n";
  } else {
    for (const auto& [name, e] : L.entries) {
      out << (e.pass ? "PASS " : "FAIL ") << name << " = " << fmt17(e.value.mid()) << " +/- " << fmt17(e.value.rad());
      if (e.paper_bound) out << " (bound " << fmt17(*e.paper_bound) << ")";
      out << "\n";
    }
    out << "ledger: " << (L.pass() ? "PASS" : "FAIL") << "\n";
  }
  return L.pass() ? kExitOk : kExitCheckFailed;
}

inline int run_sievefun(const RunConfig& cfg, const SievefunArgs& a, std::ostream& out) {
  auto grid = build_grid(a.s_max, a.step, a.s_min);
  Ball<> f4 = eval_f1(4.0), F4 = eval_F1(4.0);
  const bool keystone = f4.upper() < 0.0866 && F4.upper() < 0.0866;
  if (cfg.output_format == OutputFormat::csv) {
    grid.write_csv(out);
  } else if (cfg.output_format == OutputFormat::json) {
    Json j = header("sievefun");
    j["s_min"] = grid.s_min();
    j["s_max"] = grid.s_max();
    j["step"] = grid.step();
    j["f1_at_4"] = ball_json(f4);
    j["F1_at_4"] = ball_json(F4);
    j["keystone_pass"] = keystone;
    Json nodes = Json::array();
    for (const auto& n : grid.nodes())
      nodes.push_back(Json{{"s", n.s}, {"f1", ball_json(n.f1)}, {"F1", ball_json(n.F1)}});
    j["nodes"] = nodes;
    out << dump_json(j);
  } else {
    out << "grid s in [" << fmt17(grid.s_min()) << ", " << fmt17(grid.s_max()) << "] step " << fmt17(grid.step()) << ", "
        << grid.nodes().size() << " nodes\n";
    out << "f1(4) = " << fmt17(f4.mid()) << " +/- " << fmt17(f4.rad()) << "\n";
    out << "F1(4) = " << fmt17(F4.mid()) << " +/- " << fmt17(F4.rad()) << "\n";
    out << "f1(4), F1(4) < 0.0866: " << (keystone ? "PASS" : "FAIL") << "\n";
  }
  return keystone ? kExitOk : kExitCheckFailed;
}

inline int run_bounds(const RunConfig& cfg, const BoundsArgs& a, std::ostream& out) {
  std::vector<BoundReport> reports;
  std::optional<ThresholdReport> threshold;
  const std::string& t = a.theorem;
  if (t == "4" || t == "all") reports.push_back(theorem4_coeff(a.loglog_N));
  if (t == "5" || t == "all") reports.push_back(theorem5_coeff(a.loglog_N));
  if (t == "6" || t == "all") reports.push_back(theorem6_coeff(a.loglog_N, a.epsilon));
  if (t == "final" || t == "all") reports.push_back(final_coefficient(a.loglog_N, a.epsilon));
  if (t == "threshold" || t == "all") threshold = threshold_report(a.epsilon);
  bool pass = true;
  for (const auto& r : reports)
    if (r.theorem_id == TheoremId::FINAL && !(r.total.lower() > 0.007)) pass = false;

  if (cfg.output_format == OutputFormat::json) {
    Json j = header("bounds");
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(bound_report_json(r));
    j["reports"] = arr;
    if (threshold) {
      j["threshold"] = Json{{"epsilon", threshold->epsilon},
                            {"crossing_loglog_N", threshold->crossing_loglog_N},
                            {"hypothesis_floor", threshold->hypothesis_floor},
                            {"value_at_crossing", ball_json(threshold->at_crossing.total)},
                            {"note", threshold->note}};
    }
    j["target"] = 0.007;
    j["pass"] = pass;
    out << dump_json(j);
  } else if (cfg.output_format == OutputFormat::csv) {
    out << "theorem,term,sign,mid,rad\n";
    for (const auto& r : reports) bound_report_csv_rows(r, out);
    if (threshold) out << "threshold,crossing_loglog_N,1," << fmt17(threshold->crossing_loglog_N) << ",0\n";
  } else {
    for (const auto& r : reports) bound_report_text(r, out);
    if (threshold)
      out << "threshold: final coefficient > 0.007 from loglogN = " << fmt17(threshold->crossing_loglog_N)
          << " (hypothesis floor " << fmt17(threshold->hypothesis_floor) << ")\n";
  }
  return pass ? kExitOk : kExitCheckFailed;
}

inline int run_verify(const RunConfig& cfg, const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if ((a.N == 0) == (a.scan == 0)) throw config_error("verify needs exactly one of --N or --scan");
  OutputFormat fmt = cfg.output_format;
  if (a.emit == "csv") fmt = OutputFormat::csv;
  if (a.emit == "json") fmt = OutputFormat::json;
  std::vector<std::uint64_t> Ns;
  if (a.N) {
    if (a.N % 2 || a.N < 6) throw config_error("--N must be even and >= 6");
    Ns.push_back(a.N);
  } else {
    for (std::uint64_t N = 6; N <= a.scan; N += 2) Ns.push_back(N);
  }
  const std::uint64_t need = Ns.empty() ? 0 : Ns.back();
  auto src = acquire_table(std::max(cfg.table_limit, need), cfg.threads, err);
  std::vector<Lemma41Report> rows;
  rows.reserve(Ns.size());
  for (auto N : Ns) rows.push_back(check_lemma41(N, src.table, a.z_exp, a.y_exp));
  bool pass = true;
  for (const auto& r : rows)
    if (r.pi2 < 1) pass = false;

  auto ratio = [](const Lemma41Report& r) { return pi2_ratio(r.N, r.pi2, UN_value(r.N)); };
  if (fmt == OutputFormat::csv) {
    out << "N,pi2,S_A,Sum_S_Aq,S_B,lemma41_margin,UN,ratio\n";
    for (const auto& r : rows)
      out << r.N << "," << r.pi2 << "," << r.S_A << "," << r.Sum_S_Aq << "," << r.S_B << "," << fmt17(r.margin) << ","
          << fmt17(UN_value(r.N).mid()) << "," << fmt17(ratio(r)) << "\n";
  } else if (fmt == OutputFormat::json) {
    Json j = header("verify");
    j["z_exp"] = a.z_exp;
    j["y_exp"] = a.y_exp;
    Json arr = Json::array();
    for (const auto& r : rows)
      arr.push_back(Json{{"N", r.N},
                         {"pi2", r.pi2},
                         {"A_size", r.A_size},
                         {"S_A", r.S_A},
                         {"Sum_S_Aq", r.Sum_S_Aq},
                         {"S_B", r.S_B},
                         {"lemma41_rhs", r.rhs},
                         {"lemma41_margin", r.margin},
                         {"lemma41_holds", r.holds},
                         {"UN", ball_json(UN_value(r.N))},
                         {"ratio", ratio(r)}});
    j["rows"] = arr;
    j["pass"] = pass;
    out << dump_json(j);
  } else {
    for (const auto& r : rows)
      out << "N=" << r.N << " pi2=" << r.pi2 << " S_A=" << r.S_A << " Sum_S_Aq=" << r.Sum_S_Aq << " S_B=" << r.S_B
          << " lemma41_margin=" << fmt17(r.margin) << " ratio=" << fmt17(ratio(r)) << "\n";
  }
  return pass ? kExitOk : kExitCheckFailed;
}

inline int run_scan(const RunConfig& cfg, const ScanArgs& a, std::ostream& out, std::ostream& err) {
  auto src = acquire_table(std::max(cfg.table_limit, a.N_max), cfg.threads, err);
  const bool rows = a.rows || cfg.output_format == OutputFormat::csv;
  auto rep = goldbach_chen_scan(a.N_max, src.table, cfg.threads, rows);
  const bool pass = rep.count == 0 || rep.min_pi2 >= 1;
  if (cfg.output_format == OutputFormat::csv) {
    out << "N,pi2,UN,ratio\n";
    for (const auto& r : rep.rows) out << r.N << "," << r.pi2 << "," << fmt17(r.UN.mid()) << "," << fmt17(r.ratio) << "\n";
  } else if (cfg.output_format == OutputFormat::json) {
    Json j = header("scan");
    j["N_max"] = rep.N_max;
    j["count"] = rep.count;
    j["min_pi2"] = rep.min_pi2;
    j["argmin_pi2"] = rep.argmin_pi2;
    j["min_ratio"] = rep.min_ratio;
    j["argmin_ratio"] = rep.argmin_ratio;
    if (a.rows) {
      Json arr = Json::array();
      for (const auto& r : rep.rows) arr.push_back(Json{{"N", r.N}, {"pi2", r.pi2}, {"UN", r.UN.mid()}, {"ratio", r.ratio}});
      j["rows"] = arr;
    }
    j["pass"] = pass;
    out << dump_json(j);
  } else {
    out << "even N in [6, " << rep.N_max << "]: " << rep.count << "\n";
    out << "min pi2 = " << rep.min_pi2 << " at N = " << rep.argmin_pi2 << "\n";
    out << "min ratio = " << fmt17(rep.min_ratio) << " at N = " << rep.argmin_ratio << "\n";
  }
  return pass ? kExitOk : kExitCheckFailed;
}

inline int run_cache(const RunConfig& cfg, const CacheArgs& a, std::ostream& out, std::ostream& err) {
  const char* dir = std::getenv(kCacheEnv);
  if (!dir || !*dir) throw config_error(std::string(kCacheEnv) + " is not set");
  auto p = cache_path(dir, cfg.table_limit);
  if (a.clear) {
    bool removed = std::filesystem::remove(p);
    out << (removed ? "removed " : "absent ") << p.string() << "\n";
    return kExitOk;
  }
  auto src = acquire_table(cfg.table_limit, cfg.threads, err);
  if (cfg.output_format == OutputFormat::json) {
    Json j = header("cache");
    j["path"] = src.path;
    j["limit"] = src.table.limit();
    j["prime_count"] = src.table.count_upto(src.table.limit());
    j["status"] = src.status;
    out << dump_json(j);
  } else {
    out << src.status << " " << src.path << " limit=" << src.table.limit()
        << " primes=" << src.table.count_upto(src.table.limit()) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

/// Parses argv and runs one subcommand. Exit: 0 ok, 1 failed check, 2 usage.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit bounds and desk-scale checks for prime + P2 representations", "chen"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  std::string fmt = "json";
  app.add_option("--precision-target", cfg.precision_target, "quadrature tolerance in [1e-15, 1e-6]");
  app.add_option("--table-limit", cfg.table_limit, "prime table limit (raised when a command needs more)");
  app.add_option("--output-format", fmt, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--output", cfg.output_path, "write the report to this file");
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);

  auto* c_constants = app.add_subcommand("constants", "constants ledger with published bounds");
  SievefunArgs sf;
  auto* c_sievefun = app.add_subcommand("sievefun", "tabulate f1 and F1");
  c_sievefun->add_option("--s-min", sf.s_min);
  c_sievefun->add_option("--s-max", sf.s_max);
  c_sievefun->add_option("--step", sf.step);
  BoundsArgs bd;
  auto* c_bounds = app.add_subcommand("bounds", "coefficient chains of the sieve bounds");
  c_bounds->add_option("--theorem", bd.theorem)->check(CLI::IsMember({"4", "5", "6", "final", "threshold", "all"}));
  c_bounds->add_option("--loglogN", bd.loglog_N);
  c_bounds->add_option("--epsilon", bd.epsilon);
  VerifyArgs vf;
  auto* c_verify = app.add_subcommand("verify", "pi2 and sifted-set counts for one N or a range");
  auto* optN = c_verify->add_option("--N", vf.N);
  auto* optScan = c_verify->add_option("--scan", vf.scan);
  optN->excludes(optScan);
  c_verify->add_option("--z-exp", vf.z_exp);
  c_verify->add_option("--y-exp", vf.y_exp);
  c_verify->add_option("--emit", vf.emit)->check(CLI::IsMember({"csv", "json"}));
  ScanArgs sc;
  auto* c_scan = app.add_subcommand("scan", "pi2 over all even N up to a bound");
  c_scan->add_option("--N-max", sc.N_max);
  c_scan->add_flag("--rows", sc.rows, "include every row in JSON output");
  CacheArgs ca;
  auto* c_cache = app.add_subcommand("cache", "build or load the cached prime table");
  c_cache->add_flag("--clear", ca.clear);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  cfg.output_format = fmt == "csv" ? OutputFormat::csv : fmt == "text" ? OutputFormat::text : OutputFormat::json;

  std::ostringstream buf;
  int code = kExitOk;
  try {
    cfg.validate();
    if (*c_constants) code = run_constants(cfg, buf, err);
    else if (*c_sievefun) code = run_sievefun(cfg, sf, buf);
    else if (*c_bounds) code = run_bounds(cfg, bd, buf);
    else if (*c_verify) code = run_verify(cfg, vf, buf, err);
    else if (*c_scan) code = run_scan(cfg, sc, buf, err);
    else if (*c_cache) code = run_cache(cfg, ca, buf, err);
  } catch (const config_error& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const capacity_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!cfg.output_path.empty()) {
    std::ofstream f(cfg.output_path, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << cfg.output_path << "\n";
      return kExitUsage;
    }
    f << buf.str();
  } else {
    out << buf.str();
  }
  return code;
}

}  // namespace chen::cli
