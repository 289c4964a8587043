#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "qmim/errors.hpp"
#include "qmim/infotheory.hpp"
#include "qmim/states.hpp"
#include "qmim/tolerances.hpp"

namespace qmim {

/// Quantum (or classical) mutual information matrix: entropies S(A_i) on the
/// diagonal, pairwise mutual informations I(A_i A_j) off it, in bits.
///
/// `permutation()[k]` is the original subsystem index of row k; it is the
/// identity unless the matrix was reordered by sort_ascending().
class MutualInfoMatrix {
 public:
  explicit MutualInfoMatrix(Eigen::MatrixXd entries, std::vector<std::size_t> permutation = {})
      : entries_(std::move(entries)), permutation_(std::move(permutation)) {
    if (entries_.rows() != entries_.cols()) throw ArgumentError("mutual information matrix must be square");
    if (entries_.rows() == 0) throw ArgumentError("mutual information matrix must be non-empty");
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < entries_.cols(); ++j) {
        if (entries_(i, j) != entries_(j, i)) throw ArgumentError("mutual information matrix must be symmetric");
      }
    }
    if (permutation_.empty()) {
      permutation_.resize(size());
      std::iota(permutation_.begin(), permutation_.end(), std::size_t{0});
    }
    if (permutation_.size() != size()) throw ArgumentError("permutation length does not match matrix size");
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const std::vector<std::size_t>& permutation() const noexcept { return permutation_; }

  /// Largest diagonal entry (at least 0); the natural scale of the entries.
  double scale() const { return std::max(0.0, entries_.diagonal().maxCoeff()); }

 private:
  Eigen::MatrixXd entries_;
  std::vector<std::size_t> permutation_;
};

inline MutualInfoMatrix build_mim(const DensityMatrix& rho, const Tolerances& tol = {}) {
  const std::size_t n = rho.parties();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    m(ii, ii) = von_neumann_entropy(partial_trace(rho, {i}), tol);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      m(ii, jj) = quantum_mutual_information(partial_trace(rho, {i, j}), tol);
      m(jj, ii) = m(ii, jj);
    }
  }
  return MutualInfoMatrix(std::move(m));
}

/// Principal submatrix on `rows` (indices into m), carrying the permutation along.
inline MutualInfoMatrix principal_submatrix(const MutualInfoMatrix& m, const std::vector<std::size_t>& rows) {
  const auto k = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd sub(k, k);
  std::vector<std::size_t> perm(rows.size());
  for (Eigen::Index a = 0; a < k; ++a) {
    perm[static_cast<std::size_t>(a)] = m.permutation()[rows[static_cast<std::size_t>(a)]];
    for (Eigen::Index b = 0; b < k; ++b) {
      sub(a, b) = m(rows[static_cast<std::size_t>(a)], rows[static_cast<std::size_t>(b)]);
    }
  }
  return MutualInfoMatrix(std::move(sub), std::move(perm));
}

/// Simultaneous row/column permutation putting the diagonal in
/// non-decreasing order. Ties keep their original relative order.
inline MutualInfoMatrix sort_ascending(const MutualInfoMatrix& m) {
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return m(a, a) < m(b, b); });
  return principal_submatrix(m, order);
}

/// P_1..P_n, P_k = det of the top-left k x k block (partial-pivot LU).
inline std::vector<double> leading_principal_minors(const MutualInfoMatrix& m) {
  std::vector<double> minors;
  minors.reserve(m.size());
  for (Eigen::Index k = 1; k <= static_cast<Eigen::Index>(m.size()); ++k) {
    minors.push_back(m.entries().topLeftCorner(k, k).partialPivLu().determinant());
  }
  return minors;
}

// ---------------------------------------------------------------------------
// Congruence diagonalization

/// Zero pivot with a non-negligible entry in its row: the 2x2 principal
/// submatrix on (row, col) has determinant ~ -b^2 < 0.
struct IndefiniteWitness {
  std::size_t row = 0;
  std::size_t col = 0;
  Eigen::Matrix2d block = Eigen::Matrix2d::Zero();
  double determinant() const { return block.determinant(); }
};

struct CongruenceResult {
  std::vector<double> pivots;               ///< diagonal of C M C^T, in elimination order
  Eigen::MatrixXd transform;                ///< C, unit lower triangular
  std::vector<std::size_t> zero_pivot_indices;
  std::optional<IndefiniteWitness> indefinite_witness;

  bool completed() const noexcept { return !indefinite_witness.has_value(); }
};

/// Symmetric Gaussian elimination M -> C M C^T = diag(pivots), in the given
/// row order and without pivoting.
///
/// At step k, a pivot above tol.pivot eliminates row and column k. A
/// negligible pivot whose remaining row is also negligible is recorded as a
/// zero pivot (the zero-entropy pattern) and skipped. A negligible pivot with a
/// significant entry stops the elimination with an IndefiniteWitness.
inline CongruenceResult congruent_diagonalize(const MutualInfoMatrix& m, const Tolerances& tol = {}) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a = m.entries();
  CongruenceResult result;
  result.transform = Eigen::MatrixXd::Identity(n, n);

  for (Eigen::Index k = 0; k < n; ++k) {
    const double pivot = a(k, k);
    if (std::abs(pivot) > tol.pivot) {
      for (Eigen::Index i = k + 1; i < n; ++i) {
        const double factor = a(i, k) / pivot;
        if (factor == 0.0) continue;
        a.row(i) -= factor * a.row(k);
        a.col(i) -= factor * a.col(k);
        result.transform.row(i) -= factor * result.transform.row(k);
      }
      result.pivots.push_back(pivot);
      continue;
    }

    Eigen::Index worst = -1;
    double worst_abs = tol.pivot;
    for (Eigen::Index j = k + 1; j < n; ++j) {
      if (std::abs(a(k, j)) > worst_abs) {
        worst_abs = std::abs(a(k, j));
        worst = j;
      }
    }
    if (worst < 0) {
      result.pivots.push_back(pivot);
      result.zero_pivot_indices.push_back(static_cast<std::size_t>(k));
      continue;
    }

    IndefiniteWitness w;
    w.row = static_cast<std::size_t>(k);
    w.col = static_cast<std::size_t>(worst);
    w.block << a(k, k), a(k, worst), a(worst, k), a(worst, worst);
    result.indefinite_witness = w;
    break;
  }
  return result;
}

struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

inline Inertia inertia_of(const std::vector<double>& values, double zero_tol) {
  Inertia in;
  for (double v : values) {
    if (v > zero_tol) {
      ++in.positive;
    } else if (v < -zero_tol) {
      ++in.negative;
    } else {
      ++in.zero;
    }
  }
  return in;
}

inline std::vector<double> eigenvalues(const MutualInfoMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.entries(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

// ---------------------------------------------------------------------------
// PSD classification

enum class Method { eigen, theorem, conjecture, congruence };

/// Which rule decided a verdict.
enum class Rule {
  eigenvalues,          ///< smallest eigenvalue test
  negative_diagonal,    ///< some S(A_i) < 0, a 1x1 principal minor fails
  zero_row_violation,   ///< zero entropy with a non-zero row, which cannot happen for a valid state
  all_reduced,          ///< every subsystem had zero entropy
  single_entropy,       ///< one subsystem left, PSD iff S >= 0
  pair_zero_entropy,    ///< n = 2 with a zero-entropy subsystem
  pair_determinant,     ///< n = 2, P_1 > 0: PSD iff P_2 >= 0
  triple_zero_entropy,  ///< n = 3 with a zero-entropy subsystem, the 2x2 rule on the rest
  triple_singular,      ///< n = 3, P_2 = 0: entropy product and equality conditions
  triple_determinant,   ///< n = 3, P_2 > 0: PSD iff P_3 >= 0
  minor_violation,      ///< a leading principal minor below -eps already rules PSD out
  conjecture_minors,    ///< n >= 2, P_1..P_{n-1} > 0: PSD iff P_n >= 0
  congruence_pivots,    ///< fallback: signs of the congruence pivots
};

inline const char* to_string(Method m) {
  switch (m) {
    case Method::eigen: return "eigen";
    case Method::theorem: return "theorem";
    case Method::conjecture: return "conjecture";
    case Method::congruence: return "congruence";
  }
  return "unknown";
}

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::eigenvalues: return "eigenvalues";
    case Rule::negative_diagonal: return "negative_diagonal";
    case Rule::zero_row_violation: return "zero_row_violation";
    case Rule::all_reduced: return "all_reduced";
    case Rule::single_entropy: return "single_entropy";
    case Rule::pair_zero_entropy: return "pair_zero_entropy";
    case Rule::pair_determinant: return "pair_determinant";
    case Rule::triple_zero_entropy: return "triple_zero_entropy";
    case Rule::triple_singular: return "triple_singular";
    case Rule::triple_determinant: return "triple_determinant";
    case Rule::minor_violation: return "minor_violation";
    case Rule::conjecture_minors: return "conjecture_minors";
    case Rule::congruence_pivots: return "congruence_pivots";
  }
  return "unknown";
}

struct EigenWitness {
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;
};

/// A principal minor on `rows` (original subsystem indices) with its value.
struct MinorWitness {
  std::vector<std::size_t> rows;
  double value = 0.0;
};

/// A failed scalar condition lhs >= rhs (or lhs == rhs, see `equality`).
struct ConditionWitness {
  std::string condition;
  double lhs = 0.0;
  double rhs = 0.0;
  bool equality = false;
};

/// Subsystem with S(A_i) ~ 0 whose row still carries mutual information.
struct ZeroRowWitness {
  std::size_t subsystem = 0;
  double entropy = 0.0;
  double max_row_entry = 0.0;
};

struct PivotWitness {
  std::size_t subsystem = 0;
  double pivot = 0.0;
};

/// Indefinite 2x2 block found by elimination, indices mapped to original subsystems.
struct BlockWitness {
  std::size_t first = 0;
  std::size_t second = 0;
  double determinant = 0.0;
};

using Witness =
    std::variant<std::monostate, EigenWitness, MinorWitness, ConditionWitness, ZeroRowWitness, PivotWitness, BlockWitness>;

struct PsdVerdict {
  bool is_psd = false;
  Method method = Method::eigen;
  Rule rule = Rule::eigenvalues;
  Witness witness;
  std::vector<std::size_t> removed;  ///< subsystems dropped by the zero-entropy reduction
  std::vector<std::size_t> order;    ///< original indices of the classified (sorted, reduced) rows
  std::vector<double> minors;        ///< leading minors of the classified matrix, when computed

  bool has_witness() const noexcept { return !std::holds_alternative<std::monostate>(witness); }

  /// 'a', 'b' or 'c' for the three-party theorem cases.
  std::optional<char> case_label() const {
    switch (rule) {
      case Rule::triple_zero_entropy: return 'a';
      case Rule::triple_singular: return 'b';
      case Rule::triple_determinant: return 'c';
      default: return std::nullopt;
    }
  }
};

inline PsdVerdict psd_by_eigen(const MutualInfoMatrix& m, const Tolerances& tol = {}) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.entries());
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double threshold = tol.mim_eigen * std::max(1.0, std::abs(ev(ev.size() - 1)));
  PsdVerdict v;
  v.method = Method::eigen;
  v.rule = Rule::eigenvalues;
  v.order = m.permutation();
  v.is_psd = ev(0) >= -threshold;
  if (!v.is_psd) v.witness = EigenWitness{ev(0), solver.eigenvectors().col(0)};
  return v;
}

namespace detail {

struct Reduced {
  std::optional<MutualInfoMatrix> matrix;  ///< empty when every subsystem was removed
  std::vector<std::size_t> removed;
  std::vector<std::size_t> order;
};

/// Sorts ascending, then drops zero-entropy subsystems after
/// checking that their rows vanish. Fills `early` when the checks already
/// decide the verdict.
inline Reduced reduce(const MutualInfoMatrix& m, const Tolerances& tol, std::optional<PsdVerdict>& early,
                      Method method) {
  const MutualInfoMatrix sorted = sort_ascending(m);
  const std::size_t n = sorted.size();
  Reduced red;

  for (std::size_t i = 0; i < n; ++i) {
    if (sorted(i, i) < -tol.pivot) {
      PsdVerdict v;
      v.method = method;
      v.rule = Rule::negative_diagonal;
      v.is_psd = false;
      v.witness = MinorWitness{{sorted.permutation()[i]}, sorted(i, i)};
      v.order = sorted.permutation();
      early = v;
      return red;
    }
  }

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (sorted(i, i) > tol.pivot) {
      keep.push_back(i);
      continue;
    }
    double row_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row_max = std::max(row_max, std::abs(sorted(i, j)));
    }
    if (row_max > tol.zero_row) {
      PsdVerdict v;
      v.method = method;
      v.rule = Rule::zero_row_violation;
      v.is_psd = false;
      v.witness = ZeroRowWitness{sorted.permutation()[i], sorted(i, i), row_max};
      v.order = sorted.permutation();
      early = v;
      return red;
    }
    red.removed.push_back(sorted.permutation()[i]);
  }

  if (!keep.empty()) {
    red.matrix = principal_submatrix(sorted, keep);
    red.order = red.matrix->permutation();
  }
  return red;
}

inline PsdVerdict base_verdict(Method method, const Reduced& red) {
  PsdVerdict v;
  v.method = method;
  v.removed = red.removed;
  v.order = red.order;
  return v;
}

}  // namespace detail

/// Exact classification for n <= 3 following the two- and three-party
/// theorems: sort by entropy, drop zero-entropy subsystems, then
///   n = 2: PSD iff P_2 >= 0;
///   n = 3: P_2 = 0 -> PSD iff S1 S3 >= I13^2 and S1 I23 = I12 I13;
///          P_2 > 0 -> PSD iff P_3 >= 0.
/// Minor tolerances scale as tol.minor(scale, k).
inline PsdVerdict psd_by_theorem(const MutualInfoMatrix& m, const Tolerances& tol = {}) {
  const std::size_t n = m.size();
  if (n > 3) {
    throw UnsupportedArityError("theorem classifier covers n <= 3, got n = " + std::to_string(n) +
                                "; use psd_by_conjecture");
  }

  std::optional<PsdVerdict> early;
  const detail::Reduced red = detail::reduce(m, tol, early, Method::theorem);
  if (early) return *early;

  PsdVerdict v = detail::base_verdict(Method::theorem, red);
  const bool reduced = !red.removed.empty();
  const std::size_t r = red.matrix ? red.matrix->size() : 0;

  if (r == 0) {
    v.is_psd = true;
    v.rule = n == 1 ? Rule::single_entropy : (n == 2 ? Rule::pair_zero_entropy : Rule::triple_zero_entropy);
    if (n > 1 && red.removed.size() == n) v.rule = Rule::all_reduced;
    return v;
  }
  if (r == 1) {
    v.is_psd = true;
    v.rule = n == 1 ? Rule::single_entropy : (n == 2 ? Rule::pair_zero_entropy : Rule::triple_zero_entropy);
    return v;
  }

  const MutualInfoMatrix& a = *red.matrix;
  const double scale = a.scale();
  const double s1 = a(0, 0), s2 = a(1, 1), i12 = a(0, 1);
  const double p2 = s1 * s2 - i12 * i12;
  const double eps2 = tol.minor(scale, 2);
  v.minors = {s1, p2};

  if (r == 2) {
    v.rule = reduced ? Rule::triple_zero_entropy : Rule::pair_determinant;
    v.is_psd = p2 >= -eps2;
    if (!v.is_psd) v.witness = MinorWitness{{a.permutation()[0], a.permutation()[1]}, p2};
    return v;
  }

  // r == 3, no reduction happened.
  const double s3 = a(2, 2), i13 = a(0, 2), i23 = a(1, 2);
  const double p3 = s1 * s2 * s3 + 2.0 * i12 * i13 * i23 - s1 * i23 * i23 - s2 * i13 * i13 - s3 * i12 * i12;
  v.minors.push_back(p3);

  if (p2 < -eps2) {
    v.rule = Rule::minor_violation;
    v.is_psd = false;
    v.witness = MinorWitness{{a.permutation()[0], a.permutation()[1]}, p2};
    return v;
  }

  if (p2 <= eps2) {
    v.rule = Rule::triple_singular;
    const double gamma_num = s1 * s3 - i13 * i13;
    const double beta_num = s1 * i23 - i12 * i13;
    if (gamma_num < -eps2) {
      v.is_psd = false;
      v.witness = ConditionWitness{"S(A1)*S(A3) >= I(A1A3)^2", s1 * s3, i13 * i13, false};
    } else if (std::abs(beta_num) > eps2) {
      v.is_psd = false;
      v.witness = ConditionWitness{"S(A1)*I(A2A3) == I(A1A2)*I(A1A3)", s1 * i23, i12 * i13, true};
    } else {
      v.is_psd = true;
    }
    return v;
  }

  v.rule = Rule::triple_determinant;
  v.is_psd = p3 >= -tol.minor(scale, 3);
  if (!v.is_psd) v.witness = MinorWitness{a.permutation(), p3};
  return v;
}

/// Hypothesis for general n: after sorting and the zero-entropy reduction,
/// if P_1..P_{n-1} are all positive then PSD iff P_n >= 0. Otherwise the
/// verdict falls back to the congruence pivots.
inline PsdVerdict psd_by_conjecture(const MutualInfoMatrix& m, const Tolerances& tol = {}) {
  if (m.size() < 2) throw ArgumentError("conjecture classifier needs n >= 2");

  std::optional<PsdVerdict> early;
  const detail::Reduced red = detail::reduce(m, tol, early, Method::conjecture);
  if (early) return *early;

  PsdVerdict v = detail::base_verdict(Method::conjecture, red);
  const std::size_t r = red.matrix ? red.matrix->size() : 0;
  if (r <= 1) {
    v.is_psd = true;
    v.rule = r == 0 ? Rule::all_reduced : Rule::single_entropy;
    return v;
  }

  const MutualInfoMatrix& a = *red.matrix;
  const double scale = a.scale();
  v.minors = leading_principal_minors(a);

  bool leading_positive = true;
  for (std::size_t k = 0; k + 1 < r; ++k) {
    if (!(v.minors[k] > tol.minor(scale, static_cast<int>(k + 1)))) {
      leading_positive = false;
      break;
    }
  }

  if (leading_positive) {
    v.rule = Rule::conjecture_minors;
    v.is_psd = v.minors[r - 1] >= -tol.minor(scale, static_cast<int>(r));
    if (!v.is_psd) v.witness = MinorWitness{a.permutation(), v.minors[r - 1]};
    return v;
  }

  v.method = Method::congruence;
  v.rule = Rule::congruence_pivots;
  const CongruenceResult cr = congruent_diagonalize(a, tol);
  if (!cr.completed()) {
    const auto& w = *cr.indefinite_witness;
    v.is_psd = false;
    v.witness = BlockWitness{a.permutation()[w.row], a.permutation()[w.col], w.determinant()};
    return v;
  }
  v.is_psd = true;
  const double eps1 = tol.minor(scale, 1);
  for (std::size_t k = 0; k < cr.pivots.size(); ++k) {
    if (cr.pivots[k] < -eps1) {
      v.is_psd = false;
      v.witness = PivotWitness{a.permutation()[k], cr.pivots[k]};
      break;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline nlohmann::json to_json(const MutualInfoMatrix& m) {
  return {{"n", m.size()}, {"entries", detail::matrix_to_json(m.entries())}, {"permutation", m.permutation()}};
}

inline nlohmann::json to_json(const CongruenceResult& c) {
  nlohmann::json j = {{"pivots", c.pivots},
                      {"transform", detail::matrix_to_json(c.transform)},
                      {"zero_pivot_indices", c.zero_pivot_indices},
                      {"completed", c.completed()}};
  if (c.indefinite_witness) {
    const auto& w = *c.indefinite_witness;
    j["indefinite_witness"] = {{"row", w.row}, {"col", w.col}, {"determinant", w.determinant()}};
  } else {
    j["indefinite_witness"] = nullptr;
  }
  return j;
}

inline nlohmann::json to_json(const Witness& w) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(const EigenWitness& e) const {
      return {{"type", "eigenvalue"},
              {"eigenvalue", e.eigenvalue},
              {"eigenvector", std::vector<double>(e.eigenvector.data(), e.eigenvector.data() + e.eigenvector.size())}};
    }
    nlohmann::json operator()(const MinorWitness& m) const {
      return {{"type", "minor"}, {"rows", m.rows}, {"value", m.value}};
    }
    nlohmann::json operator()(const ConditionWitness& c) const {
      return {{"type", "condition"}, {"condition", c.condition}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"equality", c.equality}};
    }
    nlohmann::json operator()(const ZeroRowWitness& l) const {
      return {{"type", "lemma"}, {"subsystem", l.subsystem}, {"entropy", l.entropy}, {"max_row_entry", l.max_row_entry}};
    }
    nlohmann::json operator()(const PivotWitness& p) const {
      return {{"type", "pivot"}, {"subsystem", p.subsystem}, {"pivot", p.pivot}};
    }
    nlohmann::json operator()(const BlockWitness& b) const {
      return {{"type", "indefinite_block"}, {"first", b.first}, {"second", b.second}, {"determinant", b.determinant}};
    }
  };
  return std::visit(Visitor{}, w);
}

inline nlohmann::json to_json(const PsdVerdict& v) {
  nlohmann::json j = {{"is_psd", v.is_psd},
                      {"method", to_string(v.method)},
                      {"rule", to_string(v.rule)},
                      {"witness", to_json(v.witness)},
                      {"removed", v.removed},
                      {"order", v.order},
                      {"minors", v.minors}};
  if (auto c = v.case_label()) {
    j["case"] = std::string(1, *c);
  } else {
    j["case"] = nullptr;
  }
  return j;
}

}  // namespace qmim
