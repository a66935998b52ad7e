// Copyright 2026 The incluster Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "incluster/core.hpp"
#include "incluster/diam.hpp"
#include "incluster/instances.hpp"
#include "incluster/oracle.hpp"
#include "incluster/rad.hpp"
#include "incluster/search_control.hpp"
#include "json.hpp"
#include "report.hpp"

namespace incluster::cli {

/// "a/b" or a decimal such as "0.25", kept exact.
inline ApproxParams parse_epsilon(const std::string& s) {
  ApproxParams p;
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      std::size_t used = 0;
      p.num = std::stoull(s.substr(0, slash), &used);
      if (used != slash) throw UsageError("");
      const std::string den = s.substr(slash + 1);
      p.den = std::stoull(den, &used);
      if (used != den.size()) throw UsageError("");
    } else {
      const auto dot = s.find('.');
      const std::string whole = s.substr(0, dot);
      const std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
      if (frac.size() > 18 || (whole.empty() && frac.empty())) {
        throw UsageError("");
      }
      for (char c : whole + frac) {
        if (c < '0' || c > '9') throw UsageError("");
      }
      std::uint64_t den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      const std::uint64_t w = whole.empty() ? 0 : std::stoull(whole);
      const std::uint64_t f = frac.empty() ? 0 : std::stoull(frac);
      p.num = sat_add(sat_mul(w, den), f);
      p.den = den;
    }
  } catch (const std::exception&) {
    throw UsageError("cannot read epsilon '" + s + "'");
  }
  if (p.den != 0) {
    const auto g = std::gcd(p.num, p.den);
    if (g > 1) {
      p.num /= g;
      p.den /= g;
    }
  }
  p.validate();
  return p;
}

inline std::string epsilon_string(const ApproxParams& p) {
  return std::to_string(p.num) + "/" + std::to_string(p.den);
}

inline IncompleteMatrix load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return parse_instance(in);
}

inline Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return parse_graph(in);
}

struct SolveOutcome {
  std::optional<ClusterCertificate> certificate;
  std::string algorithm;
  std::optional<CenterSearchStats> center_stats;
};

inline std::uint64_t binomial_sat(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n-k+i) / i stays integral at every step.
    const std::uint64_t num = n - k + i;
    if (r > UINT64_MAX / num) return UINT64_MAX;
    r = r * num / i;
  }
  return r;
}

/// Picks oracle when it fits the limits, otherwise the cheaper of the two
/// parameterized solvers by a rough branch estimate.
inline std::string choose_algorithm(const std::string& problem,
                                    const IncompleteMatrix& m, std::size_t k,
                                    std::size_t r,
                                    const OracleLimits& limits) {
  const bool fits =
      problem == "diam" ? limits.fits_diam(m) : limits.fits_rad(m);
  if (fits) return "oracle";
  const std::uint64_t n = m.size();
  const std::uint64_t lambda = compute_deletion_set(m).lambda;
  const std::uint64_t by_k = binomial_sat(n, k);
  std::uint64_t by_r = 0;
  if (problem == "diam") {
    by_r = sat_mul(sat_mul(n, n),
                   sat_mul(sat_pow(4, lambda), center_cap(r)));
  } else {
    std::size_t depth = 1;
    while ((std::size_t{1} << (depth - 1)) < r) ++depth;
    by_r = sat_mul(sat_mul(n, sat_pow(2, lambda)),
                   sat_pow(sat_mul(n, sat_pow(4, r)), depth));
  }
  return by_k < by_r ? "xp-k" : "fpt";
}

inline SolveOutcome run_solver(const std::string& problem,
                               const std::string& algo,
                               const IncompleteMatrix& m, std::size_t k,
                               std::size_t r, SearchControl* ctl,
                               const OracleLimits& limits) {
  SolveOutcome out;
  out.algorithm =
      algo == "auto" ? choose_algorithm(problem, m, k, r, limits) : algo;
  const auto& a = out.algorithm;
  if (problem == "diam") {
    if (a == "fpt") {
      out.certificate = solve_diam_fpt(m, k, r, ctl);
    } else if (a == "xp-k") {
      out.certificate = solve_diam_xp_k(m, k, r, ctl);
    } else if (a == "kernel") {
      out.certificate = solve_diam_kernel(m, k, r, ctl);
    } else if (a == "oracle") {
      out.certificate = oracle_diam(m, k, r, limits);
    } else {
      throw UsageError("unknown algorithm " + a);
    }
  } else if (problem == "rad") {
    CenterSearchStats stats;
    if (a == "fpt") {
      out.certificate = solve_rad_xp(m, k, r, ctl, &stats);
      out.center_stats = stats;
    } else if (a == "xp-k") {
      out.certificate = solve_rad_subsets(m, k, r, ctl, &stats);
      out.center_stats = stats;
    } else if (a == "kernel") {
      out.certificate = solve_rad_kernel(m, k, r, ctl, &stats);
      out.center_stats = stats;
    } else if (a == "oracle") {
      out.certificate = oracle_rad(m, k, r, limits);
    } else {
      throw UsageError("unknown algorithm " + a);
    }
  } else {
    throw UsageError("unknown problem " + problem);
  }
  if (out.certificate && !verify_certificate(m, *out.certificate, k, r)) {
    throw std::logic_error("solver returned an invalid certificate");
  }
  return out;
}

struct CommonOptions {
  std::string problem = "diam";
  std::string algo = "auto";
  std::size_t k = 0;
  std::size_t r = 0;
  unsigned workers = 1;
  std::optional<long long> timeout_ms;
  bool json = false;
  bool timing = false;
};

inline SearchControl make_control(const CommonOptions& o) {
  std::optional<std::chrono::milliseconds> t;
  if (o.timeout_ms) t = std::chrono::milliseconds(*o.timeout_ms);
  return SearchControl(t, o.workers);
}

inline RunReport base_report(const CommonOptions& o, const IncompleteMatrix& m) {
  RunReport rep;
  rep.problem = o.problem;
  rep.k = o.k;
  rep.r = o.r;
  rep.lambda = compute_deletion_set(m).lambda;
  rep.rows = m.size();
  rep.dim = m.dim();
  return rep;
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

inline int cmd_solve(const CommonOptions& o, const std::string& file,
                     std::ostream& out) {
  const auto m = load_instance(file);
  auto ctl = make_control(o);
  const auto limits = OracleLimits::from_env();
  const auto start = std::chrono::steady_clock::now();
  auto res = run_solver(o.problem, o.algo, m, o.k, o.r, &ctl, limits);
  RunReport rep = base_report(o, m);
  rep.algorithm = res.algorithm;
  rep.answer = res.certificate ? Answer::Yes : Answer::No;
  rep.certificate = std::move(res.certificate);
  rep.branches = ctl.branches();
  if (res.center_stats) {
    rep.center_depth = res.center_stats->max_depth;
    rep.center_arity = res.center_stats->max_arity;
  }
  if (o.timing) rep.wall_ms = elapsed_ms(start);
  write_report(rep, o.json, out);
  return rep.exit_code();
}

inline int cmd_oracle(const CommonOptions& o, const std::string& file,
                      std::ostream& out) {
  const auto m = load_instance(file);
  const auto limits = OracleLimits::from_env();
  const auto start = std::chrono::steady_clock::now();
  ClusterCertificate best;
  if (o.problem == "diam") {
    best = oracle_diam_max(m, o.r, limits);
  } else if (o.problem == "rad") {
    best = oracle_rad_max(m, o.r, limits);
  } else {
    throw UsageError("unknown problem " + o.problem);
  }
  RunReport rep = base_report(o, m);
  rep.algorithm = "oracle";
  rep.max_size = best.size();
  if (best.size() >= o.k) {
    rep.answer = Answer::Yes;
    rep.certificate = std::move(best);
  }
  if (o.timing) rep.wall_ms = elapsed_ms(start);
  write_report(rep, o.json, out);
  return rep.exit_code();
}

inline int cmd_approx(const CommonOptions& o, const std::string& file,
                      const std::string& eps_text, std::ostream& out) {
  const auto eps = parse_epsilon(eps_text);
  const auto m = load_instance(file);
  auto ctl = make_control(o);
  const auto start = std::chrono::steady_clock::now();
  auto cert = approx_rad(m, o.k, o.r, eps, &ctl);
  CommonOptions ro = o;
  ro.problem = "rad";
  RunReport rep = base_report(ro, m);
  rep.algorithm = "approx";
  rep.epsilon = epsilon_string(eps);
  if (cert) {
    if (!verify_certificate(m, *cert, eps.target(o.k), o.r)) {
      throw std::logic_error("approximation returned an invalid certificate");
    }
    rep.answer = Answer::YesApprox;
    rep.certificate = std::move(cert);
  }
  rep.branches = ctl.branches();
  if (o.timing) rep.wall_ms = elapsed_ms(start);
  write_report(rep, o.json, out);
  return rep.exit_code();
}

struct GenOptions {
  std::string kind = "random";
  std::uint64_t seed = 0;
  std::size_t rows = 8;
  std::size_t dim = 8;
  double missing_rate = 0.0;
  std::optional<std::size_t> max_missing;
  std::optional<std::size_t> plant_k;
  std::size_t plant_r = 0;
  std::string plant_kind = "diam";
  std::string graph;
  std::size_t k = 0;
  std::string out;
};

inline ClusterKind parse_kind(const std::string& s) {
  if (s == "diam") return ClusterKind::Diam;
  if (s == "rad") return ClusterKind::Rad;
  throw UsageError("unknown cluster kind " + s);
}

inline int cmd_gen(const GenOptions& g, std::ostream& out, std::ostream& err) {
  IncompleteMatrix m;
  std::optional<std::size_t> k;
  std::optional<std::size_t> r;
  if (g.kind == "random") {
    RandomSpec spec;
    spec.seed = g.seed;
    spec.rows = g.rows;
    spec.dim = g.dim;
    spec.missing_rate = g.missing_rate;
    spec.max_missing = g.max_missing;
    if (g.plant_k) {
      spec.planted = PlantedCluster{*g.plant_k, g.plant_r, parse_kind(g.plant_kind)};
    }
    m = random_instance(spec);
  } else if (g.kind == "clique" || g.kind == "indset") {
    if (g.graph.empty()) throw UsageError("--graph is required");
    const Graph graph = load_graph(g.graph);
    auto red = g.kind == "clique" ? reduce_clique(graph, g.k)
                                  : reduce_independent_set(graph, g.k);
    m = std::move(red.matrix);
    k = red.k;
    r = red.r;
  } else {
    throw UsageError("unknown generator " + g.kind);
  }
  std::ostream* stats = &out;
  if (g.out.empty()) {
    serialize_instance(m, out);
    stats = &err;
  } else {
    std::ofstream f(g.out);
    if (!f) throw UsageError("cannot write " + g.out);
    serialize_instance(m, f);
  }
  *stats << "rows: " << m.size() << '\n';
  *stats << "dim: " << m.dim() << '\n';
  *stats << "missing: " << m.total_missing() << '\n';
  *stats << "lambda: " << compute_deletion_set(m).lambda << '\n';
  if (k) *stats << "k: " << *k << '\n';
  if (r) *stats << "r: " << *r << '\n';
  return 0;
}

/// Runs a JSON suite
///   {"timeout_ms": 1000, "runs": [{"name": "...", "seed": 1, "rows": 6,
///    "dim": 6, "missing_rate": 0.1, "max_missing": 4, "plant_k": 3,
///    "plant_r": 1, "plant_kind": "diam", "problem": "diam", "k": 3,
///    "r": 1, "solvers": ["fpt", "xp-k", "oracle"]}]}
/// and writes one CSV line per (run, solver). Returns false if two
/// completed solvers disagree on some run.
inline bool run_bench(const nlohmann::json& suite, std::ostream& csv,
                      std::ostream& err) {
  csv << "run,problem,solver,rows,dim,lambda,k,r,answer,size,ms,branches\n";
  const long long timeout = suite.value("timeout_ms", 10000LL);
  bool agree = true;
  if (!suite.contains("runs")) return true;
  const auto limits = OracleLimits::from_env();
  for (const auto& run : suite.at("runs")) {
    RandomSpec spec;
    spec.seed = run.value("seed", std::uint64_t{0});
    spec.rows = run.value("rows", std::size_t{6});
    spec.dim = run.value("dim", std::size_t{6});
    spec.missing_rate = run.value("missing_rate", 0.0);
    if (run.contains("max_missing")) {
      spec.max_missing = run.at("max_missing").get<std::size_t>();
    }
    if (run.contains("plant_k")) {
      spec.planted = PlantedCluster{run.at("plant_k").get<std::size_t>(),
                                    run.value("plant_r", std::size_t{0}),
                                    parse_kind(run.value("plant_kind",
                                                         std::string("diam")))};
    }
    const auto m = random_instance(spec);
    const std::string name = run.value("name", std::string("run"));
    const std::string problem = run.value("problem", std::string("diam"));
    const std::size_t k = run.value("k", std::size_t{2});
    const std::size_t r = run.value("r", std::size_t{1});
    const std::size_t lambda = compute_deletion_set(m).lambda;
    std::optional<bool> seen;
    for (const auto& s : run.value("solvers", std::vector<std::string>{})) {
      SearchControl ctl(std::chrono::milliseconds(timeout), 1);
      const auto start = std::chrono::steady_clock::now();
      std::string answer;
      std::string size = "";
      try {
        auto res = run_solver(problem, s, m, k, r, &ctl, limits);
        answer = res.certificate ? "YES" : "NO";
        if (res.certificate) size = std::to_string(res.certificate->size());
        if (seen && *seen != res.certificate.has_value()) {
          err << "disagreement on run " << name << " at solver " << s << '\n';
          agree = false;
        }
        seen = res.certificate.has_value();
      } catch (const Timeout&) {
        answer = "T/O";
      } catch (const SizingError&) {
        answer = "SKIP";
      }
      csv << name << ',' << problem << ',' << s << ',' << m.size() << ','
          << m.dim() << ',' << lambda << ',' << k << ',' << r << ','
          << answer << ',' << size << ',' << elapsed_ms(start) << ','
          << ctl.branches() << '\n';
    }
  }
  return agree;
}

inline int cmd_bench(const std::string& suite_path, const std::string& out_path,
                     std::ostream& out, std::ostream& err) {
  std::ifstream in(suite_path);
  if (!in) throw UsageError("cannot open " + suite_path);
  nlohmann::json suite;
  try {
    suite = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad suite: ") + e.what());
  }
  bool ok = true;
  if (out_path.empty()) {
    ok = run_bench(suite, out, err);
  } else {
    std::ofstream f(out_path);
    if (!f) throw UsageError("cannot write " + out_path);
    ok = run_bench(suite, f, err);
  }
  return ok ? 0 : 2;
}

/// Entry point shared by the binary and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Clustering of incomplete binary data"};
  app.require_subcommand(1);

  CommonOptions o;
  std::string file;
  std::string eps = "1/2";
  auto add_common = [&](CLI::App* sub, bool with_algo) {
    sub->add_option("file", file, "instance file")->required();
    sub->add_option("--problem", o.problem, "diam or rad")
        ->check(CLI::IsMember({"diam", "rad"}));
    if (with_algo) {
      sub->add_option("--algo", o.algo, "fpt, xp-k, kernel, oracle or auto")
          ->check(CLI::IsMember({"fpt", "xp-k", "kernel", "oracle", "auto"}));
    }
    sub->add_option("--k", o.k, "cluster size")->required();
    sub->add_option("--r", o.r, "distance bound")->required();
    sub->add_option("--workers", o.workers, "worker threads");
    sub->add_option("--timeout-ms", o.timeout_ms, "search deadline");
    sub->add_flag("--json", o.json, "emit JSON");
    sub->add_flag("--timing", o.timing, "include wall time");
  };
  auto* solve = app.add_subcommand("solve", "decide an instance");
  add_common(solve, true);
  auto* oracle = app.add_subcommand("oracle", "brute-force maximum cluster");
  add_common(oracle, false);
  auto* approx = app.add_subcommand("approx", "approximate Rad clusters");
  add_common(approx, false);
  approx->add_option("--epsilon", eps, "fraction a/b or decimal in (0,1)");

  GenOptions g;
  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("kind", g.kind, "random, clique or indset")
      ->check(CLI::IsMember({"random", "clique", "indset"}));
  gen->add_option("--seed", g.seed);
  gen->add_option("--rows", g.rows);
  gen->add_option("--dim", g.dim);
  gen->add_option("--missing-rate", g.missing_rate);
  gen->add_option("--max-missing", g.max_missing);
  gen->add_option("--plant-k", g.plant_k);
  gen->add_option("--plant-r", g.plant_r);
  gen->add_option("--plant-kind", g.plant_kind)
      ->check(CLI::IsMember({"diam", "rad"}));
  gen->add_option("--graph", g.graph, "edge list for clique/indset");
  gen->add_option("--k", g.k);
  gen->add_option("--out", g.out);

  std::string suite;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("suite", suite, "JSON suite")->required();
  bench->add_option("--out", bench_out, "CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    if (solve->parsed()) return cmd_solve(o, file, out);
    if (oracle->parsed()) return cmd_oracle(o, file, out);
    if (approx->parsed()) return cmd_approx(o, file, eps, out);
    if (gen->parsed()) return cmd_gen(g, out, err);
    if (bench->parsed()) return cmd_bench(suite, bench_out, out, err);
  } catch (const Timeout&) {
    err << "error: timeout\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace incluster::cli
