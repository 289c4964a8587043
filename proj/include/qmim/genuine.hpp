#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "json.hpp"

#include "qmim/errors.hpp"
#include "qmim/infotheory.hpp"
#include "qmim/mim.hpp"
#include "qmim/states.hpp"

namespace qmim {

/// Pivot- or eigenvalue-entropy of a mutual information matrix.
struct PrimeMeasure {
  Bits value = 0.0;
  /// Some lambda was negative (or elimination stopped early). Negative terms
  /// then contribute -lambda log2 |lambda|, outside the measure's real domain.
  bool extended_domain = false;
  std::vector<double> lambdas;
};

namespace detail {

inline PrimeMeasure lambda_entropy(std::vector<double> lambdas, double zero_tol, bool incomplete) {
  PrimeMeasure out;
  out.extended_domain = incomplete;
  for (double x : lambdas) {
    if (x > 0.0) {
      out.value -= x * std::log2(x);
    } else if (x < 0.0) {
      out.value -= x * std::log2(-x);
      if (x < -zero_tol) out.extended_domain = true;
    }
  }
  out.lambdas = std::move(lambdas);
  return out;
}

}  // namespace detail

/// I'_G = -sum lambda log2 lambda over the congruence pivots of the
/// ascending-sorted matrix (0 log 0 = 0).
inline PrimeMeasure i_prime_g(const MutualInfoMatrix& m, const Tolerances& tol = {}) {
  const CongruenceResult cr = congruent_diagonalize(sort_ascending(m), tol);
  return detail::lambda_entropy(cr.pivots, tol.pivot, !cr.completed());
}

/// Same functional evaluated on the true eigenvalues of M, for comparison.
inline PrimeMeasure i_prime_g_spectral(const MutualInfoMatrix& m, const Tolerances& tol = {}) {
  return detail::lambda_entropy(eigenvalues(m), tol.pivot, false);
}

/// Normalized weights I(A_i A_j) / sum over all n^2 ordered pairs, row-major.
/// All zeros when the matrix is zero.
inline std::vector<double> i_g_weights(const MutualInfoMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> w;
  w.reserve(n * n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = std::max(0.0, m(i, j));
      w.push_back(x);
      total += x;
    }
  }
  if (total > 0.0) {
    for (double& x : w) x /= total;
  }
  return w;
}

/// I_G: Shannon entropy of the normalized matrix entries. 0 for the zero matrix.
inline Bits i_g(const MutualInfoMatrix& m) {
  const std::vector<double> w = i_g_weights(m);
  return detail::entropy_terms(w);
}

/// 2 log2 n, the largest value I_G can take on n parties.
inline Bits i_g_bound(std::size_t n) {
  if (n < 1) throw ArgumentError("party count must be >= 1");
  return 2.0 * std::log2(static_cast<double>(n));
}

/// I3 = I(A1:A2) + I(A1:A3) - I(A1:A2A3). Unsigned.
inline Bits tripartite_information(const DensityMatrix& rho, const Tolerances& tol = {}) {
  if (rho.parties() != 3) {
    throw ArgumentError("tripartite information needs 3 subsystems, got " + std::to_string(rho.parties()));
  }
  const auto& d = rho.layout().dims();
  const DensityMatrix merged = rho.regrouped(SystemLayout({d[0], d[1] * d[2]}));
  return quantum_mutual_information(partial_trace(rho, {0, 1}), tol) +
         quantum_mutual_information(partial_trace(rho, {0, 2}), tol) - quantum_mutual_information(merged, tol);
}

struct CorrelationReport {
  PrimeMeasure i_prime_g;
  PrimeMeasure i_prime_g_spectral;
  Bits i_g = 0.0;
  std::optional<Bits> i3;
  Bits upper_bound = 0.0;
  std::vector<double> weights;
};

inline CorrelationReport correlation_report(const MutualInfoMatrix& m, const Tolerances& tol = {}) {
  CorrelationReport r;
  r.i_prime_g = i_prime_g(m, tol);
  r.i_prime_g_spectral = i_prime_g_spectral(m, tol);
  r.weights = i_g_weights(m);
  r.i_g = detail::entropy_terms(r.weights);
  r.upper_bound = i_g_bound(m.size());
  return r;
}

inline CorrelationReport correlation_report(const DensityMatrix& rho, const MutualInfoMatrix& m,
                                            const Tolerances& tol = {}) {
  CorrelationReport r = correlation_report(m, tol);
  if (rho.parties() == 3) r.i3 = tripartite_information(rho, tol);
  return r;
}

inline nlohmann::json to_json(const PrimeMeasure& p) {
  return {{"value", p.value}, {"extended_domain", p.extended_domain}, {"lambdas", p.lambdas}};
}

inline nlohmann::json to_json(const CorrelationReport& r) {
  return {{"i_prime_g", r.i_prime_g.value},
          {"i_prime_g_extended_domain", r.i_prime_g.extended_domain},
          {"pivots_used", r.i_prime_g.lambdas},
          {"i_prime_g_spectral", to_json(r.i_prime_g_spectral)},
          {"i_g", r.i_g},
          {"i3", r.i3 ? nlohmann::json(*r.i3) : nlohmann::json(nullptr)},
          {"upper_bound", r.upper_bound},
          {"weights", r.weights}};
}

}  // namespace qmim
