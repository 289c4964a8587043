#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qmim/errors.hpp"
#include "qmim/states.hpp"
#include "qmim/tolerances.hpp"

namespace qmim {

/// Information quantities are measured in bits (log base 2) everywhere.
using Bits = double;

namespace detail {

/// -sum x log2 x over the entries, with 0 log 0 = 0. No normalization check.
inline double entropy_terms(std::span<const double> values) {
  double h = 0.0;
  for (double x : values) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

}  // namespace detail

inline Bits shannon_entropy(std::span<const double> p, const Tolerances& tol = {}) {
  double sum = 0.0;
  for (double x : p) {
    if (x < -tol.positivity) throw ArgumentError("probability entry " + std::to_string(x) + " is negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol.trace) {
    throw ArgumentError("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  return std::max(0.0, detail::entropy_terms(p));
}

inline Bits shannon_entropy(std::initializer_list<double> p, const Tolerances& tol = {}) {
  return shannon_entropy(std::span<const double>(p.begin(), p.size()), tol);
}

/// Eigenvalues of the Hermitian part of rho, ascending.
inline Eigen::VectorXd spectrum(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

/// S(rho) = -tr rho log2 rho via the Hermitian eigensolve. Eigenvalues in
/// [-positivity, 0) count as zero; the spectrum is not renormalized.
inline Bits von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol = {}) {
  Eigen::VectorXd eig = spectrum(rho);
  if (eig.size() > 0 && eig.minCoeff() < -tol.positivity) {
    throw InvalidStateError("density matrix has eigenvalue " + std::to_string(eig.minCoeff()) +
                            " below -" + std::to_string(tol.positivity));
  }
  eig = eig.cwiseMax(0.0);
  return std::max(0.0, detail::entropy_terms(std::span<const double>(eig.data(), static_cast<std::size_t>(eig.size()))));
}

struct MutualInformation {
  Bits value = 0.0;   ///< reported value, >= 0
  double raw = 0.0;   ///< S(A) + S(B) - S(AB) before clipping
  bool clipped = false;  ///< raw was in [-eps_mi, 0) and was set to 0
};

namespace detail {

inline void require_bipartite(const DensityMatrix& rho, const char* what) {
  if (rho.parties() != 2) {
    throw ArgumentError(std::string(what) + " needs a 2-subsystem layout, got " + std::to_string(rho.parties()));
  }
}

}  // namespace detail

/// I(A:B) = S(A) + S(B) - S(AB) with the negative-clip bookkeeping.
inline MutualInformation mutual_information_detail(const DensityMatrix& rho_ab, const Tolerances& tol = {}) {
  detail::require_bipartite(rho_ab, "quantum mutual information");
  const Bits s_a = von_neumann_entropy(partial_trace(rho_ab, {0}), tol);
  const Bits s_b = von_neumann_entropy(partial_trace(rho_ab, {1}), tol);
  const Bits s_ab = von_neumann_entropy(rho_ab, tol);
  MutualInformation mi;
  mi.raw = s_a + s_b - s_ab;
  if (mi.raw < -tol.mutual_information) {
    throw NumericalFailure("mutual information " + std::to_string(mi.raw) + " is negative beyond tolerance");
  }
  mi.clipped = mi.raw < 0.0;
  mi.value = mi.clipped ? 0.0 : mi.raw;
  return mi;
}

inline Bits quantum_mutual_information(const DensityMatrix& rho_ab, const Tolerances& tol = {}) {
  return mutual_information_detail(rho_ab, tol).value;
}

/// S(A|B) = S(AB) - S(B). May be negative for entangled states.
inline Bits conditional_entropy(const DensityMatrix& rho_ab, const Tolerances& tol = {}) {
  detail::require_bipartite(rho_ab, "conditional entropy");
  return von_neumann_entropy(rho_ab, tol) - von_neumann_entropy(partial_trace(rho_ab, {1}), tol);
}

}  // namespace qmim
