#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qmim/errors.hpp"
#include "qmim/tolerances.hpp"

namespace qmim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Default memory budget: 10 qubits, i.e. a 1024 x 1024 complex matrix.
inline constexpr std::size_t kMaxTotalDimension = 1024;

/// Ordered tensor-factor structure of a multipartite Hilbert space.
///
/// Basis kets |i_1 ... i_n> are laid out row-major: the flat index is
/// sum_k i_k * prod_{m>k} d_m, so the last subsystem varies fastest.
class SystemLayout {
 public:
  SystemLayout() = default;

  explicit SystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels = {})
      : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (dims_.empty()) throw ArgumentError("layout needs at least one subsystem");
    for (std::size_t d : dims_) {
      if (d < 2) throw ArgumentError("subsystem dimension must be >= 2, got " + std::to_string(d));
    }
    if (!labels_.empty() && labels_.size() != dims_.size()) {
      throw ArgumentError("label count does not match subsystem count");
    }
    total_ = 1;
    for (std::size_t d : dims_) {
      if (total_ > kMaxTotalDimension / d) {
        throw ArgumentError("total dimension exceeds the supported maximum of " +
                            std::to_string(kMaxTotalDimension));
      }
      total_ *= d;
    }
  }

  static SystemLayout qubits(std::size_t n) { return SystemLayout(std::vector<std::size_t>(n, 2)); }

  std::size_t parties() const noexcept { return dims_.size(); }
  std::size_t total_dimension() const noexcept { return total_; }
  std::size_t dim(std::size_t i) const { return dims_.at(i); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }

  /// Label of subsystem i; defaults to A1..An.
  std::string label(std::size_t i) const {
    if (i >= dims_.size()) throw ArgumentError("subsystem index out of range");
    return labels_.empty() ? "A" + std::to_string(i + 1) : labels_[i];
  }

  /// Flat-index stride of subsystem i.
  std::size_t stride(std::size_t i) const {
    std::size_t s = 1;
    for (std::size_t m = i + 1; m < dims_.size(); ++m) s *= dims_[m];
    return s;
  }

  friend bool operator==(const SystemLayout& a, const SystemLayout& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::string> labels_;
  std::size_t total_ = 0;
};

/// A state vector on a layout. Normalization is checked where it matters
/// (density_from_pure), not at construction.
class PureState {
 public:
  PureState(SystemLayout layout, ComplexVector amplitudes)
      : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dimension()) {
      throw ArgumentError("amplitude count " + std::to_string(amplitudes_.size()) +
                          " does not match layout dimension " +
                          std::to_string(layout_.total_dimension()));
    }
  }

  const SystemLayout& layout() const noexcept { return layout_; }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }

 private:
  SystemLayout layout_;
  ComplexVector amplitudes_;
};

/// Complex square matrix tied to a subsystem layout. Physical validity is a
/// separate question answered by validate().
class DensityMatrix {
 public:
  DensityMatrix(SystemLayout layout, ComplexMatrix entries)
      : layout_(std::move(layout)), entries_(std::move(entries)) {
    const auto side = static_cast<Eigen::Index>(layout_.total_dimension());
    if (entries_.rows() != entries_.cols()) throw ArgumentError("density matrix must be square");
    if (entries_.rows() != side) {
      throw ArgumentError("matrix side " + std::to_string(entries_.rows()) +
                          " does not match layout dimension " + std::to_string(side));
    }
  }

  const SystemLayout& layout() const noexcept { return layout_; }
  const ComplexMatrix& matrix() const noexcept { return entries_; }
  std::size_t parties() const noexcept { return layout_.parties(); }
  std::size_t dimension() const noexcept { return layout_.total_dimension(); }

  /// Same operator, coarser tensor structure (e.g. A2A3 merged into one factor).
  /// The product of the new dims must equal the current dimension.
  DensityMatrix regrouped(SystemLayout layout) const { return DensityMatrix(std::move(layout), entries_); }

 private:
  SystemLayout layout_;
  ComplexMatrix entries_;
};

inline DensityMatrix density_from_pure(const PureState& psi, const Tolerances& tol = {}) {
  const double norm2 = psi.amplitudes().squaredNorm();
  if (std::abs(norm2 - 1.0) > tol.trace) {
    throw InvalidStateError("pure state is not normalized: |psi|^2 = " + std::to_string(norm2));
  }
  return DensityMatrix(psi.layout(), psi.amplitudes() * psi.amplitudes().adjoint());
}

/// Reduced state on `keep` (0-based subsystem indices, any order, no
/// duplicates). The result lists kept subsystems in their original order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const SystemLayout& layout = rho.layout();
  const std::size_t n = layout.parties();
  if (keep.empty()) throw ArgumentError("partial trace needs a non-empty keep set");

  std::vector<bool> kept(n, false);
  for (std::size_t k : keep) {
    if (k >= n) {
      throw ArgumentError("subsystem index " + std::to_string(k) + " out of range for " +
                          std::to_string(n) + " parties");
    }
    if (kept[k]) throw ArgumentError("duplicate subsystem index " + std::to_string(k));
    kept[k] = true;
  }

  // Flat offsets of every kept (resp. traced) multi-index, enumerated in
  // row-major order over the kept (resp. traced) subsystems.
  std::vector<std::size_t> kept_offsets{0};
  std::vector<std::size_t> traced_offsets{0};
  std::vector<std::size_t> kept_dims;
  std::vector<std::string> kept_labels;
  for (std::size_t i = 0; i < n; ++i) {
    auto& offsets = kept[i] ? kept_offsets : traced_offsets;
    const std::size_t stride = layout.stride(i);
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * layout.dim(i));
    for (std::size_t base : offsets) {
      for (std::size_t v = 0; v < layout.dim(i); ++v) next.push_back(base + v * stride);
    }
    offsets = std::move(next);
    if (kept[i]) {
      kept_dims.push_back(layout.dim(i));
      kept_labels.push_back(layout.label(i));
    }
  }

  const auto side = static_cast<Eigen::Index>(kept_offsets.size());
  ComplexMatrix reduced = ComplexMatrix::Zero(side, side);
  const ComplexMatrix& full = rho.matrix();
  for (Eigen::Index a = 0; a < side; ++a) {
    for (Eigen::Index b = 0; b < side; ++b) {
      Complex acc{0.0, 0.0};
      for (std::size_t t : traced_offsets) {
        acc += full(static_cast<Eigen::Index>(kept_offsets[a] + t),
                    static_cast<Eigen::Index>(kept_offsets[b] + t));
      }
      reduced(a, b) = acc;
    }
  }
  return DensityMatrix(SystemLayout(std::move(kept_dims), std::move(kept_labels)), std::move(reduced));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

// ---------------------------------------------------------------------------
// Validation

enum class Violation { hermiticity, trace, positivity };

inline const char* to_string(Violation v) {
  switch (v) {
    case Violation::hermiticity: return "hermiticity";
    case Violation::trace: return "trace";
    case Violation::positivity: return "positivity";
  }
  return "unknown";
}

struct ValidationIssue {
  Violation kind;
  double magnitude;  ///< size of the deviation that exceeded the tolerance
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const noexcept { return issues.empty(); }

  std::string describe() const {
    std::string out;
    for (const auto& i : issues) {
      if (!out.empty()) out += "; ";
      out += std::string(to_string(i.kind)) + " violation of " + std::to_string(i.magnitude);
    }
    return out;
  }
};

/// Checks the three density-matrix invariants. Reports, never throws.
inline ValidationReport validate(const DensityMatrix& rho, const Tolerances& tol = {}) {
  ValidationReport report;
  const ComplexMatrix& m = rho.matrix();

  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity) report.issues.push_back({Violation::hermiticity, herm});

  const double trace_dev = std::abs(m.trace() - Complex{1.0, 0.0});
  if (trace_dev > tol.trace) report.issues.push_back({Violation::trace, trace_dev});

  const ComplexMatrix hermitian_part = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol.positivity) report.issues.push_back({Violation::positivity, -min_eig});

  return report;
}

inline void require_valid(const DensityMatrix& rho, const Tolerances& tol = {}) {
  auto report = validate(rho, tol);
  if (!report.ok()) throw InvalidStateError("invalid density matrix: " + report.describe());
}

// ---------------------------------------------------------------------------
// Generators

namespace detail {

/// Basis index of the ket whose per-subsystem digits are `digits`.
inline std::size_t basis_index(const SystemLayout& layout, std::span<const std::size_t> digits) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) idx = idx * layout.dim(k) + digits[k];
  return idx;
}

inline void check_party_count(std::string_view tag, std::size_t n, std::size_t min_n) {
  if (n < min_n || n > 10) {
    throw ArgumentError(std::string(tag) + " needs between " + std::to_string(min_n) +
                        " and 10 subsystems, got " + std::to_string(n));
  }
}

}  // namespace detail

/// (|0...0> + |1...1>)/sqrt(2) on any layout (levels 0 and 1 of each factor).
inline PureState ghz_state(const SystemLayout& layout) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(layout.total_dimension()));
  std::vector<std::size_t> ones(layout.parties(), 1);
  v(0) = 1.0 / std::sqrt(2.0);
  v(static_cast<Eigen::Index>(detail::basis_index(layout, ones))) = 1.0 / std::sqrt(2.0);
  return PureState(layout, std::move(v));
}

/// Equal superposition of the n single-excitation kets.
inline PureState w_state(const SystemLayout& layout) {
  const std::size_t n = layout.parties();
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(layout.total_dimension()));
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    digits.assign(n, 0);
    digits[i] = 1;
    v(static_cast<Eigen::Index>(detail::basis_index(layout, digits))) = 1.0 / std::sqrt(static_cast<double>(n));
  }
  return PureState(layout, std::move(v));
}

/// (|01> - |10>)/sqrt(2) on the first two subsystems, |0> on the rest.
inline PureState singlet_state(const SystemLayout& layout) {
  if (layout.parties() < 2) throw ArgumentError("singlet needs at least two subsystems");
  const std::size_t n = layout.parties();
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(layout.total_dimension()));
  std::vector<std::size_t> digits(n, 0);
  digits[1] = 1;
  v(static_cast<Eigen::Index>(detail::basis_index(layout, digits))) = 1.0 / std::sqrt(2.0);
  digits[0] = 1;
  digits[1] = 0;
  v(static_cast<Eigen::Index>(detail::basis_index(layout, digits))) = -1.0 / std::sqrt(2.0);
  return PureState(layout, std::move(v));
}

/// Named reference states on qubits.
///
/// Tags: `singlet` (n = 2), `ghz` (n >= 2), `w` (n >= 2), `pure-product`
/// (|0...0>, n >= 1), `maximally-mixed` (I / 2^n, n >= 1). n is capped at 10.
inline DensityMatrix named_state(std::string_view tag, std::size_t n) {
  if (tag == "singlet") {
    if (n != 2) throw ArgumentError("singlet is a two-qubit state, got n = " + std::to_string(n));
    return density_from_pure(singlet_state(SystemLayout::qubits(2)));
  }
  if (tag == "ghz") {
    detail::check_party_count(tag, n, 2);
    return density_from_pure(ghz_state(SystemLayout::qubits(n)));
  }
  if (tag == "w") {
    detail::check_party_count(tag, n, 2);
    return density_from_pure(w_state(SystemLayout::qubits(n)));
  }
  if (tag == "pure-product") {
    detail::check_party_count(tag, n, 1);
    auto layout = SystemLayout::qubits(n);
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(layout.total_dimension()));
    v(0) = 1.0;
    return density_from_pure(PureState(layout, std::move(v)));
  }
  if (tag == "maximally-mixed") {
    detail::check_party_count(tag, n, 1);
    auto layout = SystemLayout::qubits(n);
    const auto d = static_cast<Eigen::Index>(layout.total_dimension());
    return DensityMatrix(layout, ComplexMatrix::Identity(d, d) / static_cast<double>(d));
  }
  throw ArgumentError("unknown state tag '" + std::string(tag) +
                      "' (expected singlet, ghz, w, pure-product or maximally-mixed)");
}

namespace detail {

inline ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex{re, im};
    }
  }
  return g;
}

}  // namespace detail

/// Haar-random pure state (normalized complex Gaussian vector), as a density matrix.
inline DensityMatrix random_pure(const SystemLayout& layout, std::uint64_t seed) {
  ComplexVector v = detail::complex_gaussian(static_cast<Eigen::Index>(layout.total_dimension()), 1, seed).col(0);
  v /= v.norm();
  return DensityMatrix(layout, v * v.adjoint());
}

/// Ginibre-ensemble mixed state of the given rank: G G^dagger / tr(G G^dagger)
/// with G a dimension x rank complex Gaussian matrix.
inline DensityMatrix random_mixed(const SystemLayout& layout, std::size_t rank, std::uint64_t seed) {
  const std::size_t d = layout.total_dimension();
  if (rank < 1 || rank > d) {
    throw ArgumentError("rank must lie in [1, " + std::to_string(d) + "], got " + std::to_string(rank));
  }
  ComplexMatrix g = detail::complex_gaussian(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(rank), seed);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  // Exact Hermiticity; the product is Hermitian only up to rounding.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(layout, std::move(rho));
}

/// Kronecker product of two states; the layouts are concatenated.
inline DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<std::size_t> dims = a.layout().dims();
  dims.insert(dims.end(), b.layout().dims().begin(), b.layout().dims().end());
  const ComplexMatrix& x = a.matrix();
  const ComplexMatrix& y = b.matrix();
  ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return DensityMatrix(SystemLayout(std::move(dims)), std::move(out));
}

}  // namespace qmim
