#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "qmim/analysis.hpp"
#include "qmim/errors.hpp"
#include "qmim/genuine.hpp"
#include "qmim/mim.hpp"
#include "qmim/state_io.hpp"
#include "qmim/states.hpp"
#include "qmim/version.hpp"

namespace qmim {

struct SweepConfig {
  std::size_t n = 3;
  /// Per-party dimensions: one value for all parties, or exactly n values.
  std::vector<std::size_t> dims{2};
  /// Ranks to sample from uniformly; empty means every rank 1..D.
  std::vector<std::size_t> ranks;
  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  bool record_counterexamples = true;
  std::size_t max_stored = 100;
  /// Trial 0 is the singlet (embedded), trial 1 the W state.
  bool inject_known = true;
  unsigned threads = 1;
  Tolerances tolerances;

  SystemLayout layout() const {
    if (dims.size() == 1) return SystemLayout(std::vector<std::size_t>(n, dims[0]));
    if (dims.size() != n) throw ArgumentError("sweep dims must have 1 or n entries");
    return SystemLayout(dims);
  }

  void check() const {
    if (n < 2 || n > 10) throw ArgumentError("sweep party count must lie in [2, 10]");
    if (trials < 1) throw ArgumentError("sweep needs at least one trial");
    if (threads < 1) throw ArgumentError("sweep needs at least one thread");
    const SystemLayout l = layout();
    for (std::size_t r : ranks) {
      if (r < 1 || r > l.total_dimension()) {
        throw ArgumentError("rank " + std::to_string(r) + " outside [1, " + std::to_string(l.total_dimension()) + "]");
      }
    }
  }
};

/// splitmix64 finalizer; per-trial seeds are mix(master ^ mix(index)).
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t index) {
  return mix_seed(master ^ mix_seed(static_cast<std::uint64_t>(index)));
}

/// One trial's outcome, independent of execution order.
struct TrialOutcome {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t rank = 0;
  std::string source;  ///< "random", "injected:singlet", "injected:w"
  std::optional<bool> expected_psd;
  bool failed = false;
  std::string failure;
  bool eigen_psd = false;
  bool hypothesis_psd = false;
  double min_eigenvalue = 0.0;
  PsdVerdict eigen;
  PsdVerdict hypothesis;
  nlohmann::json mim;
  nlohmann::json state;  ///< filled only when it may be stored
};

struct SweepReport {
  SweepConfig config;
  std::string hypothesis;  ///< "theorem" for n <= 3, "conjecture" beyond
  std::size_t trials_requested = 0;
  std::size_t trials_run = 0;  ///< trials that completed without numerical failure
  std::size_t numerical_failures = 0;
  std::size_t eigen_psd_count = 0;
  std::size_t hypothesis_psd_count = 0;
  std::size_t agreement_count = 0;
  std::map<std::string, std::size_t> rule_counts;
  std::size_t disagreement_total = 0;
  std::vector<nlohmann::json> disagreements;  ///< reservoir sample, at most max_stored
  std::size_t non_psd_total = 0;
  std::vector<nlohmann::json> non_psd_examples;  ///< first max_stored, in trial order
  std::vector<nlohmann::json> injected;
  std::vector<nlohmann::json> failures;
  std::string interpretation;
  double runtime_seconds = 0.0;
};

namespace detail {

inline TrialOutcome run_trial(const SweepConfig& cfg, const SystemLayout& layout, std::size_t index) {
  TrialOutcome out;
  out.trial = index;
  out.seed = trial_seed(cfg.seed, index);
  const std::size_t total = layout.total_dimension();
  try {
    std::optional<DensityMatrix> rho;
    if (cfg.inject_known && index == 0) {
      rho = density_from_pure(singlet_state(layout));
      out.source = "injected:singlet";
      out.rank = 1;
      out.expected_psd = false;
    } else if (cfg.inject_known && index == 1) {
      rho = density_from_pure(w_state(layout));
      out.source = "injected:w";
      out.rank = 1;
      // W_n has diagonal h(1/n) and off-diagonal 2h(1/n) - h(2/n); PSD iff n >= 3.
      out.expected_psd = cfg.n >= 3;
    } else {
      std::mt19937_64 rank_rng(mix_seed(out.seed ^ 0x5bd1e995ULL));
      if (cfg.ranks.empty()) {
        out.rank = 1 + static_cast<std::size_t>(rank_rng() % total);
      } else {
        out.rank = cfg.ranks[static_cast<std::size_t>(rank_rng() % cfg.ranks.size())];
      }
      rho = out.rank == 1 ? random_pure(layout, out.seed) : random_mixed(layout, out.rank, out.seed);
      out.source = "random";
    }

    const MutualInfoMatrix m = build_mim(*rho, cfg.tolerances);
    out.eigen = psd_by_eigen(m, cfg.tolerances);
    out.hypothesis = structural_verdict(m, cfg.tolerances);
    out.eigen_psd = out.eigen.is_psd;
    out.hypothesis_psd = out.hypothesis.is_psd;
    out.min_eigenvalue = eigenvalues(m).front();
    out.mim = to_json(m);
    if (cfg.record_counterexamples && (!out.eigen_psd || out.eigen_psd != out.hypothesis_psd)) {
      out.state = to_json(*rho);
    }
  } catch (const Error& e) {
    out.failed = true;
    out.failure = e.what();
  }
  return out;
}

inline nlohmann::json trial_summary(const TrialOutcome& t) {
  nlohmann::json j = {{"trial", t.trial},
                      {"seed", t.seed},
                      {"rank", t.rank},
                      {"source", t.source},
                      {"min_eigenvalue", t.min_eigenvalue},
                      {"mim", t.mim}};
  if (!t.state.is_null()) j["state"] = t.state;
  return j;
}

}  // namespace detail

/// Samples states and compares each matrix's eigenvalue verdict
/// with the structural one (theorems for n <= 3, the general-n hypothesis for
/// n >= 4). Output depends only on the config, not on the thread count.
inline SweepReport run_sweep(const SweepConfig& cfg) {
  cfg.check();
  const auto start = std::chrono::steady_clock::now();
  const SystemLayout layout = cfg.layout();

  std::vector<TrialOutcome> outcomes(cfg.trials);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(cfg.threads, cfg.trials));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cfg.trials; ++i) outcomes[i] = detail::run_trial(cfg, layout, i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.trials; i = next++) outcomes[i] = detail::run_trial(cfg, layout, i);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Single collector, trial order.
  SweepReport rep;
  rep.config = cfg;
  rep.hypothesis = cfg.n <= 3 ? "theorem" : "conjecture";
  rep.trials_requested = cfg.trials;
  std::mt19937_64 reservoir_rng(mix_seed(cfg.seed ^ 0xd1b54a32d192ed03ULL));

  for (const TrialOutcome& t : outcomes) {
    if (t.failed) {
      ++rep.numerical_failures;
      if (rep.failures.size() < cfg.max_stored) {
        rep.failures.push_back({{"trial", t.trial}, {"seed", t.seed}, {"rank", t.rank}, {"error", t.failure}});
      }
      continue;
    }
    ++rep.trials_run;
    if (t.eigen_psd) ++rep.eigen_psd_count;
    if (t.hypothesis_psd) ++rep.hypothesis_psd_count;
    ++rep.rule_counts[to_string(t.hypothesis.rule)];

    if (t.expected_psd) {
      rep.injected.push_back({{"trial", t.trial},
                              {"source", t.source},
                              {"expected_psd", *t.expected_psd},
                              {"eigen_psd", t.eigen_psd},
                              {"hypothesis_psd", t.hypothesis_psd},
                              {"correct", t.eigen_psd == *t.expected_psd && t.hypothesis_psd == *t.expected_psd}});
    }

    if (!t.eigen_psd) {
      ++rep.non_psd_total;
      if (rep.non_psd_examples.size() < cfg.max_stored) rep.non_psd_examples.push_back(detail::trial_summary(t));
    }

    if (t.eigen_psd == t.hypothesis_psd) {
      ++rep.agreement_count;
      continue;
    }
    ++rep.disagreement_total;
    nlohmann::json d = detail::trial_summary(t);
    d["eigen_verdict"] = to_json(t.eigen);
    d["hypothesis_verdict"] = to_json(t.hypothesis);
    if (rep.disagreements.size() < cfg.max_stored) {
      rep.disagreements.push_back(std::move(d));
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, rep.disagreement_total - 1);
      const std::size_t slot = pick(reservoir_rng);
      if (slot < cfg.max_stored) rep.disagreements[slot] = std::move(d);
    }
  }

  if (rep.disagreement_total == 0) {
    rep.interpretation = "no disagreements between the eigenvalue oracle and the " + rep.hypothesis + " classifier";
  } else if (cfg.n <= 3) {
    rep.interpretation =
        "disagreements at n <= 3 contradict proven theorems: they indicate an implementation or tolerance defect";
  } else {
    rep.interpretation =
        "disagreements at n >= 4 are candidate counterexamples to the general-n hypothesis "
        "(or tolerance effects); they do not by themselves indicate an implementation defect";
  }

  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline nlohmann::json to_json(const SweepConfig& c) {
  return {{"n", c.n},
          {"dims", c.dims},
          {"ranks", c.ranks},
          {"trials", c.trials},
          {"seed", c.seed},
          {"record_counterexamples", c.record_counterexamples},
          {"max_stored", c.max_stored},
          {"inject_known", c.inject_known}};
}

/// Timing is excluded unless asked for, so equal seeds give equal bytes.
inline nlohmann::json to_json(const SweepReport& r, bool include_runtime = false) {
  nlohmann::json j = {{"version", kVersion},
                      {"tolerances", to_json(r.config.tolerances)},
                      {"config", to_json(r.config)},
                      {"hypothesis", r.hypothesis},
                      {"trials_requested", r.trials_requested},
                      {"trials_run", r.trials_run},
                      {"numerical_failures", r.numerical_failures},
                      {"eigen_psd_count", r.eigen_psd_count},
                      {"hypothesis_psd_count", r.hypothesis_psd_count},
                      {"agreement_count", r.agreement_count},
                      {"rule_counts", r.rule_counts},
                      {"disagreement_total", r.disagreement_total},
                      {"disagreements", r.disagreements},
                      {"non_psd_total", r.non_psd_total},
                      {"non_psd_examples", r.non_psd_examples},
                      {"injected", r.injected},
                      {"failures", r.failures},
                      {"interpretation", r.interpretation}};
  if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

// ---------------------------------------------------------------------------
// Replay

enum class ReplayMethod { automatic, eigen, theorem, conjecture };

inline ReplayMethod parse_replay_method(const std::string& s) {
  if (s == "auto") return ReplayMethod::automatic;
  if (s == "eigen") return ReplayMethod::eigen;
  if (s == "theorem") return ReplayMethod::theorem;
  if (s == "conjecture") return ReplayMethod::conjecture;
  throw ArgumentError("unknown method '" + s + "' (expected auto, eigen, theorem or conjecture)");
}

struct ReplayResult {
  MutualInfoMatrix mim;
  PsdVerdict verdict;
  CorrelationReport correlations;
};

inline ReplayResult replay(const DensityMatrix& rho, ReplayMethod method, const Tolerances& tol = {}) {
  require_valid(rho, tol);
  MutualInfoMatrix m = build_mim(rho, tol);
  PsdVerdict v;
  switch (method) {
    case ReplayMethod::automatic: v = structural_verdict(m, tol); break;
    case ReplayMethod::eigen: v = psd_by_eigen(m, tol); break;
    case ReplayMethod::theorem: v = psd_by_theorem(m, tol); break;
    case ReplayMethod::conjecture: v = psd_by_conjecture(m, tol); break;
  }
  CorrelationReport c = correlation_report(rho, m, tol);
  return {std::move(m), std::move(v), std::move(c)};
}

/// Replays a stored state. Accepts a bare state document or a sweep record
/// carrying the state under "state".
inline ReplayResult replay(const std::string& path, ReplayMethod method, const Tolerances& tol = {}) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open state file '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
  if (j.is_object() && j.contains("state") && !j.contains("dims")) j = j["state"];
  return replay(state_from_json(j, tol), method, tol);
}

inline nlohmann::json to_json(const ReplayResult& r) {
  return {{"version", kVersion}, {"mim", to_json(r.mim)}, {"verdict", to_json(r.verdict)}, {"correlations", to_json(r.correlations)}};
}

}  // namespace qmim
