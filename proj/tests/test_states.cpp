#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qmim/states.hpp"

namespace {

using qmim::ComplexMatrix;
using qmim::DensityMatrix;
using qmim::SystemLayout;

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

DensityMatrix diag_qubit(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return DensityMatrix(SystemLayout({2}), m);
}

TEST(SystemLayout, RejectsBadDimensions) {
  EXPECT_THROW(SystemLayout(std::vector<std::size_t>{}), qmim::ArgumentError);
  EXPECT_THROW(SystemLayout({2, 1}), qmim::ArgumentError);
  EXPECT_THROW(SystemLayout(std::vector<std::size_t>(11, 2)), qmim::ArgumentError);
  EXPECT_NO_THROW(SystemLayout(std::vector<std::size_t>(10, 2)));
}

TEST(SystemLayout, RowMajorStrides) {
  SystemLayout l({2, 3, 4});
  EXPECT_EQ(l.total_dimension(), 24u);
  EXPECT_EQ(l.stride(0), 12u);
  EXPECT_EQ(l.stride(1), 4u);
  EXPECT_EQ(l.stride(2), 1u);
  EXPECT_EQ(l.label(1), "A2");
}

TEST(DensityFromPure, BasisProjector) {
  qmim::ComplexVector v(2);
  v << 1.0, 0.0;
  auto rho = qmim::density_from_pure(qmim::PureState(SystemLayout({2}), v));
  EXPECT_EQ(rho.matrix()(0, 0), qmim::Complex(1.0, 0.0));
  EXPECT_EQ(rho.matrix()(1, 1), qmim::Complex(0.0, 0.0));
  EXPECT_EQ(rho.matrix()(0, 1), qmim::Complex(0.0, 0.0));
}

TEST(DensityFromPure, SingletHasHalfEntriesInMiddleBlock) {
  auto rho = qmim::density_from_pure(qmim::singlet_state(SystemLayout::qubits(2)));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(1, 1) = 0.5;
  expected(2, 2) = 0.5;
  expected(1, 2) = -0.5;
  expected(2, 1) = -0.5;
  EXPECT_LT(max_abs_diff(rho.matrix(), expected), 1e-15);
}

TEST(DensityFromPure, GhzCorners) {
  auto rho = qmim::named_state("ghz", 3);
  ComplexMatrix expected = ComplexMatrix::Zero(8, 8);
  expected(0, 0) = expected(0, 7) = expected(7, 0) = expected(7, 7) = 0.5;
  EXPECT_LT(max_abs_diff(rho.matrix(), expected), 1e-15);
}

TEST(DensityFromPure, RejectsUnnormalized) {
  qmim::ComplexVector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(qmim::density_from_pure(qmim::PureState(SystemLayout({2}), v)), qmim::InvalidStateError);
}

TEST(PartialTrace, SingletMarginalIsMaximallyMixed) {
  auto rho = qmim::named_state("singlet", 2);
  auto a = qmim::partial_trace(rho, {0});
  auto b = qmim::partial_trace(rho, {1});
  ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  EXPECT_LT(max_abs_diff(a.matrix(), half), 1e-15);
  EXPECT_LT(max_abs_diff(b.matrix(), half), 1e-15);
}

TEST(PartialTrace, ProductStateFactorizes) {
  auto rho = qmim::random_mixed(SystemLayout({2}), 2, 11);
  auto sigma = qmim::random_mixed(SystemLayout({3}), 3, 12);
  auto joint = qmim::tensor_product(rho, sigma);
  EXPECT_LT(max_abs_diff(qmim::partial_trace(joint, {0}).matrix(), rho.matrix()), 1e-14);
  EXPECT_LT(max_abs_diff(qmim::partial_trace(joint, {1}).matrix(), sigma.matrix()), 1e-14);
}

TEST(PartialTrace, W4SingleQubitMarginal) {
  auto rho = qmim::named_state("w", 4);
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 0.75;
  expected(1, 1) = 0.25;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LT(max_abs_diff(qmim::partial_trace(rho, {i}).matrix(), expected), 1e-15) << "qubit " << i;
  }
}

TEST(PartialTrace, KeepsOriginalOrderAndLabels) {
  auto rho = qmim::random_mixed(SystemLayout({2, 3, 2}), 4, 3);
  auto r = qmim::partial_trace(rho, {2, 1});
  EXPECT_EQ(r.layout().dims(), (std::vector<std::size_t>{3, 2}));
  EXPECT_EQ(r.layout().label(0), "A2");
  EXPECT_EQ(r.layout().label(1), "A3");
}

TEST(PartialTrace, ArgumentErrors) {
  auto rho = qmim::named_state("ghz", 3);
  EXPECT_THROW(qmim::partial_trace(rho, std::span<const std::size_t>{}), qmim::ArgumentError);
  EXPECT_THROW(qmim::partial_trace(rho, {3}), qmim::ArgumentError);
  EXPECT_THROW(qmim::partial_trace(rho, {1, 1}), qmim::ArgumentError);
}

TEST(PartialTrace, AllIndicesIsIdentity) {
  auto rho = qmim::random_mixed(SystemLayout({2, 3, 2}), 5, 99);
  auto same = qmim::partial_trace(rho, {0, 1, 2});
  EXPECT_EQ(max_abs_diff(same.matrix(), rho.matrix()), 0.0);
}

// Partial traces of random states preserve trace and Hermiticity for every
// keep set. Tracing in two steps matches tracing at once.
TEST(PartialTrace, PropertiesOverRandomStates) {
  const std::vector<std::vector<std::size_t>> layouts = {{2, 2}, {2, 3}, {3, 2, 2}, {2, 2, 2, 2}};
  std::uint64_t seed = 1;
  for (const auto& dims : layouts) {
    SystemLayout layout(dims);
    const std::size_t n = dims.size();
    for (int rep = 0; rep < 5; ++rep) {
      auto rho = qmim::random_mixed(layout, 1 + (seed % layout.total_dimension()), seed);
      ++seed;
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask & (1u << i)) keep.push_back(i);
        }
        auto red = qmim::partial_trace(rho, keep);
        EXPECT_NEAR(red.matrix().trace().real(), 1.0, 1e-10);
        EXPECT_TRUE(qmim::validate(red).ok()) << qmim::validate(red).describe();

        // Compose: trace to `keep`, then to each single member, equals the direct route.
        for (std::size_t pos = 0; pos < keep.size(); ++pos) {
          auto two_step = qmim::partial_trace(red, {pos});
          auto direct = qmim::partial_trace(rho, {keep[pos]});
          EXPECT_LE(max_abs_diff(two_step.matrix(), direct.matrix()), 1e-12);
        }
      }
    }
  }
}

TEST(Validate, MaximallyMixedQubitIsValid) { EXPECT_TRUE(qmim::validate(diag_qubit(0.5, 0.5)).ok()); }

TEST(Validate, TraceViolation) {
  auto rep = qmim::validate(diag_qubit(0.6, 0.6));
  ASSERT_EQ(rep.issues.size(), 1u);
  EXPECT_EQ(rep.issues[0].kind, qmim::Violation::trace);
  EXPECT_NEAR(rep.issues[0].magnitude, 0.2, 1e-12);
}

TEST(Validate, PositivityViolation) {
  auto rep = qmim::validate(diag_qubit(1.1, -0.1));
  ASSERT_EQ(rep.issues.size(), 1u);
  EXPECT_EQ(rep.issues[0].kind, qmim::Violation::positivity);
  EXPECT_NEAR(rep.issues[0].magnitude, 0.1, 1e-12);
}

TEST(Validate, HermiticityViolation) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2) / 2.0;
  m(0, 1) = 0.1;
  auto rep = qmim::validate(DensityMatrix(SystemLayout({2}), m));
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.issues[0].kind, qmim::Violation::hermiticity);
  EXPECT_NEAR(rep.issues[0].magnitude, 0.1, 1e-12);
}

TEST(NamedState, KnownStates) {
  auto product = qmim::named_state("pure-product", 3);
  EXPECT_EQ(product.matrix()(0, 0), qmim::Complex(1.0, 0.0));
  EXPECT_EQ(product.matrix().cwiseAbs().sum(), 1.0);

  auto w4 = qmim::named_state("w", 4);
  // |W> = (|1000> + |0100> + |0010> + |0001>)/2: indices 8, 4, 2, 1.
  const int idx[] = {1, 2, 4, 8};
  for (int a : idx) {
    for (int b : idx) EXPECT_NEAR(w4.matrix()(a, b).real(), 0.25, 1e-15);
  }
  EXPECT_NEAR(w4.matrix().cwiseAbs().sum(), 4.0, 1e-14);

  auto mixed = qmim::named_state("maximally-mixed", 2);
  EXPECT_LT(max_abs_diff(mixed.matrix(), ComplexMatrix::Identity(4, 4) / 4.0), 1e-15);
}

TEST(NamedState, AllNamedStatesValidate) {
  for (const char* tag : {"ghz", "w", "pure-product", "maximally-mixed"}) {
    for (std::size_t n = 2; n <= 6; ++n) {
      auto rho = qmim::named_state(tag, n);
      EXPECT_TRUE(qmim::validate(rho).ok()) << tag << " n=" << n;
    }
  }
  EXPECT_TRUE(qmim::validate(qmim::named_state("singlet", 2)).ok());
}

TEST(NamedState, Errors) {
  EXPECT_THROW(qmim::named_state("bogus", 2), qmim::ArgumentError);
  EXPECT_THROW(qmim::named_state("ghz", 11), qmim::ArgumentError);
  EXPECT_THROW(qmim::named_state("ghz", 1), qmim::ArgumentError);
  EXPECT_THROW(qmim::named_state("singlet", 3), qmim::ArgumentError);
}

TEST(RandomStates, DeterministicGivenSeed) {
  SystemLayout layout({2, 3});
  auto a = qmim::random_mixed(layout, 3, 2024);
  auto b = qmim::random_mixed(layout, 3, 2024);
  EXPECT_EQ(a.matrix(), b.matrix());
  auto c = qmim::random_pure(layout, 7);
  auto d = qmim::random_pure(layout, 7);
  EXPECT_EQ(c.matrix(), d.matrix());
  EXPECT_NE(qmim::random_pure(layout, 8).matrix(), c.matrix());
}

TEST(RandomStates, PurePurityIsOne) {
  auto rho = qmim::random_pure(SystemLayout::qubits(2), 5);
  const double purity = (rho.matrix() * rho.matrix()).trace().real();
  EXPECT_NEAR(purity, 1.0, 1e-12);
}

TEST(RandomStates, MixedRankFourSweepValidates) {
  SystemLayout layout = SystemLayout::qubits(2);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto rho = qmim::random_mixed(layout, 4, seed);
    ASSERT_TRUE(qmim::validate(rho).ok()) << "seed " << seed;
  }
}

TEST(RandomStates, RankIsRespected) {
  SystemLayout layout({3, 3});
  for (std::size_t rank = 1; rank <= 9; ++rank) {
    auto rho = qmim::random_mixed(layout, rank, 100 + rank);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
    std::size_t nonzero = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) nonzero += es.eigenvalues()(i) > 1e-12;
    EXPECT_EQ(nonzero, rank);
  }
  EXPECT_THROW(qmim::random_mixed(layout, 0, 1), qmim::ArgumentError);
  EXPECT_THROW(qmim::random_mixed(layout, 10, 1), qmim::ArgumentError);
}

}  // namespace
