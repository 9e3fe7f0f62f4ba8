#include "qcka/mu.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "qcka/catalog.hpp"
#include "test_oracles.hpp"

using namespace qcka;

namespace {

DensityMatrix pure_density(std::initializer_list<cplx> amp) {
  CVector v(static_cast<Eigen::Index>(amp.size()));
  Eigen::Index i = 0;
  for (cplx a : amp) v(i++) = a;
  v.normalize();
  return DensityMatrix(2, 2, projector(v));
}

}  // namespace

TEST(mu, entanglement_entropy_examples) {
  CVector bell(4);
  bell << 1.0, 0.0, 0.0, 1.0;
  bell /= std::sqrt(2.0);
  EXPECT_NEAR(pure_state_entanglement_entropy(bell, 2, 2), 1.0, 1e-12);
  CVector product(6);
  product << 0.6, 0.0, 0.0, 0.8, 0.0, 0.0;
  EXPECT_NEAR(pure_state_entanglement_entropy(product, 2, 3), 0.0, 1e-12);
  CVector tilted(4);
  tilted << std::sqrt(0.9), 0.0, 0.0, std::sqrt(0.1);
  EXPECT_NEAR(pure_state_entanglement_entropy(tilted, 2, 2), 0.468996, 1e-6);
  ASSERT_THROW(pure_state_entanglement_entropy(2.0 * tilted, 2, 2), ValidationError);
  ASSERT_THROW(pure_state_entanglement_entropy(tilted, 2, 3), ValidationError);
}

TEST(mu, entanglement_entropy_matches_oracle) {
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t dA = 2 + rep % 2, dB = 2 + rep % 3;
    const CVector v = random_unit_vector(dA * dB, rng);
    CMatrix m(static_cast<Eigen::Index>(dA), static_cast<Eigen::Index>(dB));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = v(i * m.cols() + j);
    const Eigen::JacobiSVD<CMatrix> svd(m);
    std::vector<double> p;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) p.push_back(std::pow(svd.singularValues()(k), 2));
    EXPECT_NEAR(pure_state_entanglement_entropy(v, dA, dB), qcka_test::entropy_of(p), 1e-10);
  }
}

TEST(mu, werner_closed_form) {
  EXPECT_NEAR(werner_mu_closed_form(0.5), 0.061278, 1e-6);
  EXPECT_EQ(werner_mu_closed_form(0.2), 0.0);
  EXPECT_EQ(werner_mu_closed_form(1.0 / 3.0), 0.0);
  EXPECT_NEAR(werner_mu_closed_form(1.0), 1.0, 1e-15);
  ASSERT_THROW(werner_mu_closed_form(1.1), ValidationError);
  double prev = 0.0;
  for (double l = 0.35; l <= 1.0; l += 0.05) {
    const double v = werner_mu_closed_form(l);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(mu, pure_states_take_the_exact_path) {
  const auto bell = mu_estimate(pure_density({1.0, 0.0, 0.0, 1.0}));
  EXPECT_EQ(bell.quality, MuQuality::exact);
  EXPECT_NEAR(bell.value, 1.0, 1e-12);
  EXPECT_EQ(bell.evaluations, 0);
  EXPECT_NEAR(mu_estimate(pure_density({std::sqrt(0.9), 0.0, 0.0, std::sqrt(0.1)})).value, 0.468996, 1e-6);
  EXPECT_NEAR(mu_estimate(pure_density({1.0, 1.0, 1.0, 1.0})).value, 0.0, 1e-12);
  EXPECT_NEAR(mu_estimate(partial_trace_env(*example4_werner(1.0).state)).value, 1.0, 1e-12);
}

TEST(mu, heuristic_on_a_pure_state) {
  MuOptions o;
  o.force_heuristic = true;
  const auto bell = mu_estimate(pure_density({1.0, 0.0, 0.0, 1.0}), o);
  EXPECT_EQ(bell.quality, MuQuality::heuristic);
  EXPECT_NEAR(bell.value, 1.0, 5e-3);
  EXPECT_GT(bell.evaluations, 0);
}

TEST(mu, maximally_mixed_state_is_zero) {
  const auto e = mu_estimate(DensityMatrix(2, 2, CMatrix::Identity(4, 4) / 4.0));
  EXPECT_LE(e.value, 1e-6);
  EXPECT_EQ(e.outer_values.size(), 1u);
}

TEST(mu, classically_correlated_state_is_zero) {
  // (|00><00| + |11><11|)/2: Eve's eigenbasis already reveals both bits.
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = 0.5;
  EXPECT_LE(mu_estimate(DensityMatrix(2, 2, m)).value, 1e-6);
}

TEST(mu, estimate_is_deterministic) {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 0.7;
  m(3, 3) = 0.3;
  m(0, 3) = m(3, 0) = 0.1;
  MuOptions o;
  o.restarts = 1;
  o.outer_max_iters = 40;
  const auto a = mu_estimate(DensityMatrix(2, 2, m), o);
  const auto b = mu_estimate(DensityMatrix(2, 2, m), o);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.evaluations, b.evaluations);
  EXPECT_GE(a.value, 0.0);
}

TEST(mu, env_dim_validation) {
  const DensityMatrix mixed(2, 2, CMatrix::Identity(4, 4) / 4.0);
  MuOptions o;
  o.env_dim = 3;
  ASSERT_THROW(mu_estimate(mixed, o), ValidationError);
  const auto pur = detail::purify(mixed, 6, 1e-10);
  EXPECT_EQ(pur.state.dE(), 6u);
  EXPECT_EQ(pur.rank, 4u);
  EXPECT_LE(max_abs(partial_trace_env(pur.state).matrix() - mixed.matrix()), 1e-12);
}

TEST(mu, purification_reproduces_rho) {
  Rng rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    const CVector v = random_unit_vector(4 * 3, rng);
    const auto rho = partial_trace_env(PureState(2, 2, 3, std::vector<cplx>(v.data(), v.data() + v.size())));
    const auto pur = detail::purify(rho, 0, 1e-10);
    EXPECT_EQ(pur.rank, 3u);
    EXPECT_LE(max_abs(partial_trace_env(pur.state).matrix() - rho.matrix()), 1e-12);
  }
}

TEST(mu, reference_bases_are_unitary) {
  for (std::size_t d = 1; d <= 4; ++d)
    for (const auto& b : detail::reference_bases(d))
      EXPECT_LE(max_abs(b.adjoint() * b - CMatrix::Identity(b.rows(), b.cols())), 1e-12);
}

TEST(mu, separable_rank_two_state_is_near_zero) {
  // (|00><00| + |++><++|)/2: Eve must find the product decomposition, which is not the eigenbasis.
  CVector zero(4), plus(4);
  zero << 1.0, 0.0, 0.0, 0.0;
  plus << 0.5, 0.5, 0.5, 0.5;
  const DensityMatrix rho(2, 2, 0.5 * (projector(zero) + projector(plus)));
  const auto e = mu_estimate(rho);
  EXPECT_LE(e.value, 1e-3);
  EXPECT_EQ(e.eve_basis.dim(), 2u);
}
