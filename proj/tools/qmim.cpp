// qmim: command-line front end for the mutual information matrix library.
//
//   qmim analyze <state.json|-> [--json out.json]
//   qmim named <tag> <n>
//   qmim sweep [--n N] [--dim D...] [--rank R...] [--trials T] [--seed S] [--threads K] [--out file]
//   qmim classical <dist.json|-> [--json out.json]
//   qmim replay <state.json|-> [--method auto|eigen|theorem|conjecture] [--json out.json]
//
// Exit codes: 0 success, 1 other errors, 2 parse error, 3 invalid state.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qmim/qmim.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitInvalidState = 3;

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw qmim::Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void print_verdict_line(const char* label, const qmim::PsdVerdict& v) {
  std::cout << label << ": " << qmim::detail::fmt_verdict(v) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum mutual information matrices: PSD classification and multipartite correlation measures"};
  app.set_version_flag("--version", std::string(qmim::kVersion));
  app.require_subcommand(1, 1);

  std::string analyze_path, analyze_json;
  auto* analyze = app.add_subcommand("analyze", "Analyze a state file ('-' for stdin)");
  analyze->add_option("path", analyze_path, "State JSON file")->required();
  analyze->add_option("--json", analyze_json, "Write the full report as JSON ('-' for stdout)");

  std::string named_tag;
  std::size_t named_n = 0;
  auto* named = app.add_subcommand("named", "Print a named qubit state as state JSON");
  named->add_option("tag", named_tag, "singlet | ghz | w | pure-product | maximally-mixed")->required();
  named->add_option("n", named_n, "Number of qubits")->required();

  qmim::SweepConfig sweep_cfg;
  std::string sweep_out;
  bool sweep_no_inject = false;
  bool sweep_runtime = false;
  auto* sweep = app.add_subcommand("sweep", "Random sweep comparing eigenvalue and structural PSD verdicts");
  sweep->add_option("--n", sweep_cfg.n, "Number of parties")->capture_default_str();
  sweep->add_option("--dim", sweep_cfg.dims, "Per-party dimension (one value, or one per party)")->capture_default_str();
  sweep->add_option("--rank", sweep_cfg.ranks, "State ranks to sample from (default: all)");
  sweep->add_option("--trials", sweep_cfg.trials, "Number of trials")->capture_default_str();
  sweep->add_option("--seed", sweep_cfg.seed, "Master seed")->capture_default_str();
  sweep->add_option("--threads", sweep_cfg.threads, "Worker threads")->capture_default_str();
  sweep->add_option("--max-stored", sweep_cfg.max_stored, "Cap on stored examples")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Write the report to this file instead of stdout");
  sweep->add_flag("--no-inject", sweep_no_inject, "Do not inject the singlet and W states as trials 0 and 1");
  sweep->add_flag("--runtime", sweep_runtime, "Include wall-clock runtime in the JSON report");

  std::string classical_path, classical_json;
  auto* classical = app.add_subcommand("classical", "Classical mutual information matrix of a joint distribution");
  classical->add_option("path", classical_path, "Distribution JSON file")->required();
  classical->add_option("--json", classical_json, "Write the report as JSON ('-' for stdout)");

  std::string replay_path, replay_method = "auto", replay_json;
  auto* replay = app.add_subcommand("replay", "Recompute all quantities for one stored state");
  replay->add_option("path", replay_path, "State JSON file or stored sweep record")->required();
  replay->add_option("--method", replay_method, "auto | eigen | theorem | conjecture")->capture_default_str();
  replay->add_option("--json", replay_json, "Write the result as JSON ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    const qmim::Tolerances tol = qmim::Tolerances::from_environment();

    if (*analyze) {
      const qmim::DensityMatrix rho = qmim::load_state(analyze_path, tol);
      const qmim::StateAnalysis a = qmim::analyze(rho, tol);
      std::cout << qmim::format_text(a);
      write_json(analyze_json, qmim::to_json(a));
    } else if (*named) {
      std::cout << qmim::to_json(qmim::named_state(named_tag, named_n)).dump() << '\n';
    } else if (*sweep) {
      sweep_cfg.inject_known = !sweep_no_inject;
      sweep_cfg.tolerances = tol;
      const qmim::SweepReport rep = qmim::run_sweep(sweep_cfg);
      const nlohmann::json j = qmim::to_json(rep, sweep_runtime);
      write_json(sweep_out.empty() ? "-" : sweep_out, j);
      std::cerr << "sweep: " << rep.agreement_count << "/" << rep.trials_run << " agree, " << rep.numerical_failures
                << " numerical failures, " << rep.non_psd_total << " non-PSD, "
                << qmim::detail::fmt6(rep.runtime_seconds) << " s\n";
    } else if (*classical) {
      const qmim::JointDistribution d = qmim::load_distribution(classical_path);
      const qmim::MutualInfoMatrix m = qmim::classical_mim(d);
      const qmim::PsdVerdict eigen = qmim::psd_by_eigen(m, tol);
      std::cout << "mutual information matrix (bits):\n";
      for (std::size_t i = 0; i < m.size(); ++i) {
        std::cout << "  ";
        for (std::size_t j = 0; j < m.size(); ++j) std::cout << (j ? "  " : "") << qmim::detail::fmt6(m(i, j));
        std::cout << '\n';
      }
      std::cout << "eigenvalues: " << qmim::detail::fmt_list(qmim::eigenvalues(m)) << '\n';
      print_verdict_line("PSD (eigenvalues)", eigen);
      nlohmann::json j = {{"version", qmim::kVersion},
                          {"tolerances", qmim::to_json(tol)},
                          {"mim", qmim::to_json(m)},
                          {"psd_eigen", qmim::to_json(eigen)}};
      if (m.size() <= 3) {
        const qmim::PsdVerdict theorem = qmim::psd_by_theorem(m, tol);
        print_verdict_line("PSD (theorem)", theorem);
        j["psd_structural"] = qmim::to_json(theorem);
      }
      write_json(classical_json, j);
    } else if (*replay) {
      const qmim::ReplayResult r = qmim::replay(replay_path, qmim::parse_replay_method(replay_method), tol);
      std::cout << "mutual information matrix (bits):\n";
      for (std::size_t i = 0; i < r.mim.size(); ++i) {
        std::cout << "  ";
        for (std::size_t j = 0; j < r.mim.size(); ++j) std::cout << (j ? "  " : "") << qmim::detail::fmt6(r.mim(i, j));
        std::cout << '\n';
      }
      print_verdict_line("verdict", r.verdict);
      std::cout << "I'_G: " << qmim::detail::fmt6(r.correlations.i_prime_g.value)
                << (r.correlations.i_prime_g.extended_domain ? " (extended domain)" : "") << '\n'
                << "I_G: " << qmim::detail::fmt6(r.correlations.i_g) << '\n';
      if (r.correlations.i3) std::cout << "I_3: " << qmim::detail::fmt6(*r.correlations.i3) << '\n';
      write_json(replay_json, qmim::to_json(r));
    }
  } catch (const qmim::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const qmim::InvalidStateError& e) {
    std::cerr << "invalid state: " << e.what() << '\n';
    return kExitInvalidState;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
