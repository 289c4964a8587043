#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qmim/genuine.hpp"
#include "qmim/mim.hpp"
#include "qmim/state_io.hpp"
#include "qmim/states.hpp"
#include "qmim/tolerances.hpp"
#include "qmim/version.hpp"

namespace qmim {

/// Everything computed for one state. Holds the matrix with its sorted minors
/// and pivots, plus both PSD verdicts and the correlation measures.
struct StateAnalysis {
  std::vector<std::size_t> dims;
  MutualInfoMatrix mim;
  MutualInfoMatrix sorted;
  std::vector<double> minors;      ///< of `sorted`
  CongruenceResult congruence;     ///< of `sorted`
  std::vector<double> eigenvalues;
  PsdVerdict eigen;
  PsdVerdict structural;           ///< theorem classifier for n <= 3, conjecture beyond
  CorrelationReport correlations;
  Tolerances tolerances;
};

/// Selects the structural classifier for the arity: exact theorems up to
/// three parties, the general-n hypothesis beyond.
inline PsdVerdict structural_verdict(const MutualInfoMatrix& m, const Tolerances& tol = {}) {
  return m.size() <= 3 ? psd_by_theorem(m, tol) : psd_by_conjecture(m, tol);
}

/// Throws InvalidStateError when rho fails validate().
inline StateAnalysis analyze(const DensityMatrix& rho, const Tolerances& tol = {}) {
  require_valid(rho, tol);
  MutualInfoMatrix m = build_mim(rho, tol);
  MutualInfoMatrix sorted = sort_ascending(m);
  StateAnalysis a{rho.layout().dims(),
                  m,
                  sorted,
                  leading_principal_minors(sorted),
                  congruent_diagonalize(sorted, tol),
                  eigenvalues(m),
                  psd_by_eigen(m, tol),
                  structural_verdict(m, tol),
                  correlation_report(rho, m, tol),
                  tol};
  return a;
}

inline nlohmann::json to_json(const StateAnalysis& a) {
  return {{"version", kVersion},
          {"tolerances", to_json(a.tolerances)},
          {"dims", a.dims},
          {"mim", to_json(a.mim)},
          {"sorted_mim", to_json(a.sorted)},
          {"leading_minors", a.minors},
          {"congruence", to_json(a.congruence)},
          {"eigenvalues", a.eigenvalues},
          {"psd_eigen", to_json(a.eigen)},
          {"psd_structural", to_json(a.structural)},
          {"correlations", to_json(a.correlations)}};
}

namespace detail {

inline std::string fmt6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x == 0.0 ? 0.0 : x);  // no "-0"
  return buf;
}

inline std::string fmt_list(const std::vector<double>& xs) {
  std::string out = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt6(xs[i]);
  }
  return out + ")";
}

inline std::string fmt_verdict(const PsdVerdict& v) {
  std::string out = v.is_psd ? "PSD" : "not PSD";
  out += " [" + std::string(to_string(v.method)) + ", " + to_string(v.rule);
  if (auto c = v.case_label()) out += ", case " + std::string(1, *c);
  out += "]";
  if (const auto* e = std::get_if<EigenWitness>(&v.witness)) out += " eigenvalue " + fmt6(e->eigenvalue);
  if (const auto* m = std::get_if<MinorWitness>(&v.witness)) out += " minor " + fmt6(m->value);
  if (const auto* c = std::get_if<ConditionWitness>(&v.witness)) {
    out += " failed " + c->condition + ": " + fmt6(c->lhs) + " vs " + fmt6(c->rhs);
  }
  if (const auto* l = std::get_if<ZeroRowWitness>(&v.witness)) {
    out += " zero-entropy subsystem " + std::to_string(l->subsystem + 1) + " has row entry " + fmt6(l->max_row_entry);
  }
  if (const auto* p = std::get_if<PivotWitness>(&v.witness)) out += " pivot " + fmt6(p->pivot);
  if (const auto* b = std::get_if<BlockWitness>(&v.witness)) out += " indefinite block det " + fmt6(b->determinant);
  return out;
}

}  // namespace detail

/// Human-readable report, numbers to 6 significant digits.
inline std::string format_text(const StateAnalysis& a) {
  std::ostringstream os;
  const std::size_t n = a.mim.size();
  os << "parties: " << n << "  dims:";
  for (std::size_t d : a.dims) os << ' ' << d;
  os << "\nmutual information matrix (bits):\n";
  for (std::size_t i = 0; i < n; ++i) {
    os << "  ";
    for (std::size_t j = 0; j < n; ++j) os << (j ? "  " : "") << detail::fmt6(a.mim(i, j));
    os << '\n';
  }
  std::vector<double> order;
  for (std::size_t k : a.sorted.permutation()) order.push_back(static_cast<double>(k + 1));
  os << "ascending order: " << detail::fmt_list(order) << '\n';
  os << "leading minors: " << detail::fmt_list(a.minors) << '\n';
  os << "congruence pivots: " << detail::fmt_list(a.congruence.pivots);
  if (!a.congruence.completed()) os << " (stopped: indefinite block)";
  os << '\n';
  os << "eigenvalues: " << detail::fmt_list(a.eigenvalues) << '\n';
  os << "PSD (eigenvalues): " << detail::fmt_verdict(a.eigen) << '\n';
  os << "PSD (" << (n <= 3 ? "theorem" : "conjecture") << "): " << detail::fmt_verdict(a.structural) << '\n';
  os << "I'_G (pivots): " << detail::fmt6(a.correlations.i_prime_g.value)
     << (a.correlations.i_prime_g.extended_domain ? " (extended domain)" : "") << '\n';
  os << "I'_G (eigenvalues): " << detail::fmt6(a.correlations.i_prime_g_spectral.value)
     << (a.correlations.i_prime_g_spectral.extended_domain ? " (extended domain)" : "") << '\n';
  os << "I_G: " << detail::fmt6(a.correlations.i_g) << "  bound 2log2(n): " << detail::fmt6(a.correlations.upper_bound)
     << '\n';
  if (a.correlations.i3) os << "I_3: " << detail::fmt6(*a.correlations.i3) << '\n';
  return os.str();
}

}  // namespace qmim
