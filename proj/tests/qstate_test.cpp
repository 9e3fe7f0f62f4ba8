#include "qcka/qstate.hpp"

#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "qcka/catalog.hpp"
#include "qcka/random.hpp"
#include "test_oracles.hpp"

using namespace qcka;

namespace {

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

// The disturbance-D density matrix in the frame it is displayed in, basis {00, 01, 10, 11}.
CMatrix example1_displayed(double D) {
  CMatrix m = CMatrix::Zero(4, 4);
  const double c = 1.0 - 2.0 * D;
  m(0, 0) = m(3, 3) = D / 2.0;
  m(1, 1) = m(2, 2) = (1.0 - D) / 2.0;
  m(0, 3) = m(3, 0) = -D * c / 2.0;
  m(1, 2) = m(2, 1) = -(1.0 - D) * c / 2.0;
  return m;
}

DensityMatrix random_density(std::size_t dA, std::size_t dB, std::size_t rank, Rng& rng) {
  std::vector<cplx> amp;
  const CVector v = random_unit_vector(dA * dB * rank, rng);
  for (Eigen::Index i = 0; i < v.size(); ++i) amp.push_back(v(i));
  return partial_trace_env(PureState(dA, dB, rank, amp));
}

CVector basis_vector(std::size_t d, std::size_t k) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return v;
}

}  // namespace

TEST(qstate, pure_state_validation) {
  ASSERT_THROW(PureState(2, 2, 1, std::vector<cplx>(4, 0.5 + 1e-9)), ValidationError);
  ASSERT_THROW(PureState(2, 2, 1, std::vector<cplx>(3, 0.5)), ValidationError);
  ASSERT_THROW(PureState(0, 2, 1, {}), ValidationError);
  ASSERT_THROW(PureState::from_unnormalized(1, 1, 1, {0.0}), ValidationError);
  const PureState s = PureState::from_unnormalized(1, 2, 1, {3.0, cplx(0.0, 4.0)});
  EXPECT_NEAR(s(0, 1, 0).imag(), 0.8, 1e-15);
}

TEST(qstate, density_matrix_validation) {
  CMatrix m = CMatrix::Identity(4, 4) / 4.0;
  EXPECT_NO_THROW(DensityMatrix(2, 2, m));
  ASSERT_THROW(DensityMatrix(2, 3, m), ValidationError);
  CMatrix t = m;
  t(0, 0) += 0.01;
  ASSERT_THROW(DensityMatrix(2, 2, t), ValidationError);
  CMatrix h = m;
  h(0, 1) = 0.1;
  ASSERT_THROW(DensityMatrix(2, 2, h), ValidationError);
  CMatrix neg = CMatrix::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  ASSERT_THROW(DensityMatrix(2, 2, neg), ValidationError);
}

TEST(qstate, partial_trace_examples) {
  std::vector<cplx> amp(8, 0.0);
  amp[0] = 1.0;
  const auto rho = partial_trace_env(PureState(2, 2, 2, amp));
  EXPECT_EQ(rho.matrix()(0, 0), cplx(1.0));
  EXPECT_LT(max_abs(rho.matrix() - projector(basis_vector(4, 0))), 1e-15);

  // Disturbance scenario at D = 0.1, compared in the displayed frame.
  const auto s = example1(0.1);
  const CMatrix u = kron(pauli_z(), pauli_x());
  const CMatrix framed = u * partial_trace_env(*s.state).matrix() * u.adjoint();
  EXPECT_LT(max_abs(framed - example1_displayed(0.1)), 1e-14);

  // Bad-basis pair: 3/5 P(|00>+|01>+|10>)/sqrt3 + 2/5 P(|00>+|11>)/sqrt2.
  CVector v1(4), v2(4);
  v1 << 1.0, 1.0, 1.0, 0.0;
  v2 << 1.0, 0.0, 0.0, 1.0;
  const CMatrix expected = 0.6 * projector(v1 / std::sqrt(3.0)) + 0.4 * projector(v2 / std::sqrt(2.0));
  EXPECT_LT(max_abs(partial_trace_env(*example6().state).matrix() - expected), 1e-15);
}

TEST(qstate, is_pure) {
  Rng rng(1);
  const CVector v = random_unit_vector(4, rng);
  EXPECT_TRUE(is_pure(DensityMatrix(2, 2, projector(v))));
  EXPECT_FALSE(is_pure(DensityMatrix(2, 2, CMatrix::Identity(4, 4) / 4.0)));
  const CVector ab = random_unit_vector(6, rng), e = random_unit_vector(3, rng);
  std::vector<cplx> amp;
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index k = 0; k < 3; ++k) amp.push_back(ab(i) * e(k));
  EXPECT_TRUE(is_pure(partial_trace_env(PureState(2, 3, 3, amp))));
}

TEST(qstate, partial_transpose_examples) {
  CMatrix diag = CMatrix::Zero(4, 4);
  diag.diagonal() << 0.1, 0.2, 0.3, 0.4;
  EXPECT_EQ(partial_transpose(diag, 2, 2), diag);

  const CMatrix shown_t = partial_transpose(example1_displayed(0.1), 2, 2);
  EXPECT_NEAR(shown_t(0, 3).real(), -0.36, 1e-15);
  EXPECT_NEAR(shown_t(1, 2).real(), -0.5 * 0.1 * 0.8, 1e-15);
  const auto ev = hermitian_eigenvalues(shown_t);
  EXPECT_NEAR(ev[0], -0.31, 1e-12);
  EXPECT_NEAR(ev[1], 0.41, 1e-12);
  EXPECT_NEAR(ev[2], 0.41, 1e-12);
  EXPECT_NEAR(ev[3], 0.49, 1e-12);

  const auto rho6 = partial_trace_env(*example6().state);
  EXPECT_LE(max_abs(partial_transpose(rho6) - rho6.matrix()), 1e-12);

  ASSERT_THROW(partial_transpose(CMatrix::Identity(4, 4), 3, 2), ValidationError);
}

TEST(qstate, partial_transpose_properties) {
  Rng rng(42);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t dA = 1 + rep % 3, dB = 1 + (rep / 3) % 3;
    const auto rho = random_density(dA, dB, 1 + rep % 4, rng);
    const CMatrix t = partial_transpose(rho);
    EXPECT_EQ(partial_transpose(t, dA, dB), rho.matrix());
    EXPECT_LE(hermiticity_defect(t), 1e-12);
    EXPECT_NEAR(t.trace().real(), 1.0, 1e-12);
    const auto mine = hermitian_eigenvalues(t);
    const auto oracle = qcka_test::eigen_oracle(t);
    for (std::size_t k = 0; k < mine.size(); ++k) EXPECT_NEAR(mine[k], oracle[k], 1e-10);
    double sum = 0.0;
    for (double v : mine) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-10);
  }
}

TEST(qstate, hermitian_eigenvalue_examples) {
  const auto id = hermitian_eigenvalues(CMatrix::Identity(4, 4));
  for (double v : id) EXPECT_NEAR(v, 1.0, 1e-15);
  CMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  const auto e = hermitian_eigenvalues(s);
  EXPECT_NEAR(e[0], -1.0, 1e-15);
  EXPECT_NEAR(e[1], 1.0, 1e-15);
}

TEST(qstate, ppt_examples) {
  EXPECT_NEAR(ppt_min_eigenvalue(partial_trace_env(*example1(kExample1Threshold).state)), 0.0, 1e-10);
  EXPECT_LT(ppt_min_eigenvalue(partial_trace_env(*example1(0.0).state)), -0.49);
  EXPECT_GE(ppt_min_eigenvalue(partial_trace_env(*example2_horodecki(0.5).state)), -1e-10);
  EXPECT_LT(ppt_min_eigenvalue(partial_trace_env(*example3_alpha(4.5).state)), -1e-4);
  EXPECT_GE(ppt_min_eigenvalue(partial_trace_env(*example3_alpha(3.5).state)), -1e-10);
  EXPECT_NEAR(ppt_min_eigenvalue(partial_trace_env(*example4_werner(1.0).state)), -0.5, 1e-12);
}

TEST(qstate, measure_state_examples) {
  const auto s6 = example6();
  const auto p6 = measure_standard(*s6.state);
  EXPECT_EQ(p6.cells().size(), 5u);
  for (auto c : {Cell{0, 0, 0}, Cell{0, 1, 0}, Cell{1, 0, 0}, Cell{0, 0, 1}, Cell{1, 1, 1}}) EXPECT_NEAR(p6(c[0], c[1], c[2]), 0.2, 1e-15);

  const auto p3 = measure_standard(*example3_alpha(3.0).state);
  EXPECT_NEAR(p3(0, 0, 0), 2.0 / 21.0, 1e-15);
  EXPECT_NEAR(p3(0, 1, 1), 3.0 / 21.0, 1e-15);

  const auto& rot = s6.frames.at("rotated");
  EXPECT_LE(conditional_mutual_information(measure_state(*s6.state, rot.alice, rot.bob, rot.eve)), 1e-12);

  ASSERT_THROW(measure_state(*s6.state, LocalBasis::standard(3), LocalBasis::standard(2), EveMeasurementSet::standard(2)), ValidationError);
}

TEST(qstate, measure_state_accepts_povms) {
  // Trine POVM on a qubit environment: three vectors sqrt(2/3)(cos t, sin t).
  std::vector<CVector> trine;
  for (int k = 0; k < 3; ++k) {
    CVector v(2);
    const double t = 2.0 * std::numbers::pi * k / 3.0;
    v << std::sqrt(2.0 / 3.0) * std::cos(t), std::sqrt(2.0 / 3.0) * std::sin(t);
    trine.push_back(v);
  }
  const EveMeasurementSet eve(trine);
  EXPECT_LE(eve.completeness_defect(), 1e-12);
  Rng rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    const CVector v = random_unit_vector(2 * 2 * 2, rng);
    std::vector<cplx> amp(v.data(), v.data() + v.size());
    const PureState psi(2, 2, 2, amp);
    const auto p = measure_state(psi, LocalBasis(random_unitary(2, rng)), LocalBasis(random_unitary(2, rng)), eve);
    EXPECT_EQ(p.nz(), 3u);
    EXPECT_NEAR(p.total(), 1.0, 1e-12);
  }
  std::vector<CVector> incomplete(trine.begin(), trine.begin() + 2);
  ASSERT_THROW(EveMeasurementSet{incomplete}, ValidationError);
}

TEST(qstate, product_environment_leaks_nothing) {
  Rng rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    const CVector ab = random_unit_vector(6, rng), e = random_unit_vector(3, rng);
    std::vector<cplx> amp;
    for (Eigen::Index i = 0; i < 6; ++i)
      for (Eigen::Index k = 0; k < 3; ++k) amp.push_back(ab(i) * e(k));
    const PureState psi(3, 2, 3, amp);
    const auto p = measure_state(psi, LocalBasis(random_unitary(3, rng)), LocalBasis(random_unitary(2, rng)),
                                 EveMeasurementSet::from_basis(LocalBasis(random_unitary(3, rng))));
    EXPECT_LE(mutual_information_xz(p), 1e-12);
    EXPECT_LE(mutual_information_yz(p), 1e-12);
  }
}

TEST(qstate, canonical_purification_round_trip) {
  std::map<Cell, double> one{{{1, 0, 2}, 1.0}};
  const JointDistribution det(2, 2, 3, one);
  const PureState psi = canonical_purification(det);
  EXPECT_EQ(psi(1, 0, 2), cplx(1.0));
  EXPECT_TRUE(is_pure(partial_trace_env(psi)));

  for (const auto& p : {*example7().distribution, *example5_erasure(0.1, 0.5, 0.5).distribution, *example2_horodecki(0.3).distribution}) {
    const auto back = measure_standard(canonical_purification(p));
    for (const auto& [c, m] : p.cells()) EXPECT_NEAR(back(c[0], c[1], c[2]), m, 1e-14);
    EXPECT_EQ(back.cells().size(), p.cells().size());
  }
  EXPECT_LT(ppt_min_eigenvalue(partial_trace_env(canonical_purification(*example7().distribution))), -1e-8);
  EXPECT_LT(ppt_min_eigenvalue(partial_trace_env(canonical_purification(erasure_scenario(0.1, 0.5, 0.5)))), 0.0);
}

TEST(qstate, separable_decomposition_validation) {
  const CVector a = basis_vector(2, 0), b = basis_vector(2, 1);
  ASSERT_THROW(SeparableDecomposition({}), ValidationError);
  ASSERT_THROW(SeparableDecomposition({{0.5, a, b}}), ValidationError);
  ASSERT_THROW(SeparableDecomposition({{1.0, 2.0 * a, b}}), ValidationError);
  ASSERT_THROW(SeparableDecomposition({{0.5, a, b}, {0.5, basis_vector(3, 0), b}}), ValidationError);
  ASSERT_THROW(SeparableDecomposition({{1.5, a, b}, {-0.5, a, b}}), ValidationError);
}

TEST(qstate, theorem1_single_term) {
  Rng rng(6);
  const SeparableDecomposition dec({{1.0, random_unit_vector(2, rng), random_unit_vector(3, rng)}});
  const auto t = theorem1_construction(dec);
  EXPECT_EQ(t.state.dE(), 1u);
  for (int rep = 0; rep < 5; ++rep) {
    const auto p = measure_state(t.state, LocalBasis(random_unitary(2, rng)), LocalBasis(random_unitary(3, rng)), t.eve);
    EXPECT_LE(mutual_information_xy(p), 1e-12);
  }
}

TEST(qstate, theorem1_on_bad_basis_pair) {
  const SeparableDecomposition dec({{kExample6Lambda, example6_m(+1), example6_m(+1)}, {1.0 - kExample6Lambda, example6_m(-1), example6_m(-1)}});
  const auto t = theorem1_construction(dec);
  const auto rho6 = partial_trace_env(*example6().state);
  EXPECT_LE(max_abs(partial_trace_env(t.state).matrix() - rho6.matrix()), 1e-12);
  EXPECT_LE(max_abs(dec.density() - rho6.matrix()), 1e-12);
}

TEST(qstate, theorem1_random_decompositions) {
  Rng rng(2024);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t dA = 2 + rep % 2, dB = 2 + (rep / 2) % 2, terms = 1 + rep % 6;
    std::vector<ProductTerm> t;
    double total = 0.0;
    for (std::size_t k = 0; k < terms; ++k) {
      t.push_back({u(rng), random_unit_vector(dA, rng), random_unit_vector(dB, rng)});
      total += t.back().weight;
    }
    for (auto& term : t) term.weight /= total;
    const SeparableDecomposition dec(t);
    const auto c = theorem1_construction(dec);
    EXPECT_EQ(c.state.dE(), terms);
    EXPECT_LE(max_abs(partial_trace_env(c.state).matrix() - dec.density()), 1e-12);
    for (int b = 0; b < 5; ++b) {
      const auto p = measure_state(c.state, LocalBasis(random_unitary(dA, rng)), LocalBasis(random_unitary(dB, rng)), c.eve);
      EXPECT_LE(conditional_mutual_information(p), 1e-10);
    }
  }
}

TEST(qstate, ppt_spectrum_is_local_unitary_invariant) {
  Rng rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t dA = 2 + rep % 2, dB = 2 + (rep / 2) % 2;
    const auto rho = random_density(dA, dB, 1 + rep % 3, rng);
    const CMatrix moved = local_conjugate(rho.matrix(), random_unitary(dA, rng), random_unitary(dB, rng));
    const auto before = hermitian_eigenvalues(partial_transpose(rho));
    const auto after = hermitian_eigenvalues(partial_transpose(moved, dA, dB));
    for (std::size_t k = 0; k < before.size(); ++k) EXPECT_NEAR(before[k], after[k], 1e-9);
  }
}
