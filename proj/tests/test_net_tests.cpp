#include <gtest/gtest.h>

#include <random>

#include "netcov/covariance.hpp"
#include "netcov/error.hpp"
#include "netcov/net_tests.hpp"
#include "netcov/quantum.hpp"
#include "netcov/witnesses.hpp"
#include "oracles.hpp"

using namespace netcov;

namespace {

BlockMatrix joint_cov(const DistributionTable& d) {
  return covariance_from_distribution(d, FeatureMapSet::canonical(d));
}

BlockMatrix cond_cov(const DistributionTable& d) {
  return observable_covariance(d, FeatureMapSet::canonical(d));
}

DistributionTable ghz_table() {
  std::vector<double> p(8, 0.0);
  p[0] = p[7] = 0.5;
  return DistributionTable::joint({2, 2, 2}, p);
}

// Sum of random PSD pieces on each parent support plus a block-diagonal
// PSD part: compatible by construction.
BlockMatrix random_compatible(const NetworkTopology& t, const BlockLayout& layout, std::mt19937_64& rng) {
  BlockMatrix c{layout, Matrix::Zero(layout.total_dim(), layout.total_dim()), {}};
  for (int n = 0; n < t.num_parents(); ++n) {
    const auto s = parent_support(t, layout, n);
    const Matrix piece = oracle::random_psd(static_cast<int>(s.size()), rng, 2);
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = 0; b < s.size(); ++b) c.data(s[a], s[b]) += piece(a, b);
    }
  }
  for (int b = 0; b < layout.num_blocks(); ++b) {
    const auto idx = layout.block_indices(b);
    const Matrix piece = oracle::random_psd(static_cast<int>(idx.size()), rng);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < idx.size(); ++j) c.data(idx[i], idx[j]) += piece(i, j);
    }
  }
  return c;
}

void expect_sound(const TestVerdict& v, const BlockMatrix& c, const NetworkTopology& t) {
  if (v.kind == VerdictKind::Compatible) {
    ASSERT_TRUE(v.certificate.has_value());
    EXPECT_TRUE(verify_certificate(*v.certificate, c, t).ok);
  } else if (v.kind == VerdictKind::Incompatible) {
    ASSERT_GT(v.witness.size(), 0);
    EXPECT_LE(witness_violation(v.witness, t, c.layout), 1e-8);
    EXPECT_NEAR(evaluate(v.witness, c.data), v.value, 1e-8);
  }
}

}  // namespace

TEST(Primal, BlockDiagonalIsCompatible) {
  std::mt19937_64 rng(1);
  const auto layout = BlockLayout::single_setting({2, 2, 2});
  BlockMatrix c{layout, Matrix::Zero(6, 6), {}};
  for (int b = 0; b < 3; ++b) c.data.block(2 * b, 2 * b, 2, 2) = oracle::random_psd(2, rng);
  const auto v = primal_feasibility(c, triangle(), layout);
  EXPECT_EQ(v.kind, VerdictKind::Compatible);
  expect_sound(v, c, triangle());
}

TEST(Primal, GhzIsIncompatible) {
  const auto c = joint_cov(ghz_table());
  const auto v = primal_feasibility(c, triangle(), c.layout);
  ASSERT_EQ(v.kind, VerdictKind::Incompatible);
  EXPECT_NEAR(v.value, 0.5, 1e-6);
  expect_sound(v, c, triangle());
  // Matches the closed-form triangle witness.
  EXPECT_LT((v.witness - w_ghz().matrix).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Primal, RejectsMaskedInput) {
  const auto c = cond_cov(quantum::pr_box_mixture(0.5));
  EXPECT_THROW(primal_feasibility(c, star(2), c.layout), Error);
}

TEST(Primal, UncoveredCorrelationIsUnbounded) {
  NetworkTopology t;
  t.parents = {"a"};
  t.children = {"A", "B", "C"};
  t.children_of = {{0, 1}};
  const auto c = joint_cov(ghz_table());
  const auto v = primal_feasibility(c, t, c.layout);
  EXPECT_EQ(v.kind, VerdictKind::Incompatible);
  EXPECT_EQ(v.reason, "unbounded");
  expect_sound(v, c, t);
}

TEST(Primal, OrphanWithoutCorrelationIsCompatible) {
  NetworkTopology t;
  t.parents = {"a"};
  t.children = {"A", "B", "C"};
  t.children_of = {{0, 1}};
  std::vector<double> p(8);
  // C independent and uniform, A = B.
  for (int x = 0; x < 8; ++x) p[x] = ((x >> 2) & 1) == ((x >> 1) & 1) ? 0.25 : 0.0;
  const auto c = joint_cov(DistributionTable::joint({2, 2, 2}, p));
  const auto v = primal_feasibility(c, t, c.layout);
  EXPECT_EQ(v.kind, VerdictKind::Compatible);
  expect_sound(v, c, t);
}

// Completeness: decomposable-by-construction inputs pass, with certificates
// that re-verify by arithmetic.
TEST(Primal, CompletenessProperty) {
  std::mt19937_64 rng(21);
  const std::vector<NetworkTopology> tops = {triangle(), ring(4), all_bipartite(4), star(3),
                                             all_k_partite(4, 3)};
  for (int trial = 0; trial < 25; ++trial) {
    const auto& t = tops[trial % tops.size()];
    const auto layout = BlockLayout::single_setting(std::vector<int>(t.num_children(), 2 + trial % 2));
    const auto c = random_compatible(t, layout, rng);
    const auto v = primal_feasibility(c, t, layout);
    EXPECT_EQ(v.kind, VerdictKind::Compatible) << "trial " << trial << " " << v.reason;
    expect_sound(v, c, t);
  }
}

TEST(Dual, GhzValue) {
  const auto c = joint_cov(ghz_table());
  const auto d = dual_witness(c, triangle(), c.layout);
  ASSERT_TRUE(d.ok);
  EXPECT_NEAR(d.value, 0.5, 1e-6);
  EXPECT_TRUE(validate_witness(d.w, triangle(), c.layout, 1e-8));
}

TEST(Dual, FourPartyBeyondQ0) {
  const auto c = joint_cov(pq_distribution(4, 0.0, 0.9));
  const auto d = dual_witness(c, all_bipartite(4), c.layout);
  ASSERT_TRUE(d.ok);
  EXPECT_GT(d.value, sdp::kTau);
}

TEST(Dual, CompatibleValueBelowTau) {
  std::mt19937_64 rng(4);
  const auto layout = BlockLayout::single_setting({2, 2, 2});
  const auto c = random_compatible(triangle(), layout, rng);
  const auto d = dual_witness(c, triangle(), layout);
  ASSERT_TRUE(d.ok);
  EXPECT_LE(d.value, sdp::kTau);
}

// Primal route (min shift) and the independent pure-feasibility route agree
// on a mix of constructed and pq-family inputs, and every artefact checks.
TEST(Duality, ConsistencyProperty) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    NetworkTopology t;
    BlockMatrix c;
    if (trial % 3 == 0) {
      t = triangle();
      c = random_compatible(t, BlockLayout::single_setting({2, 2, 2}), rng);
    } else {
      const int n = trial % 3 == 1 ? 3 : 4;
      t = n == 3 ? triangle() : all_bipartite(4);
      const double p = 0.5 * u(rng);
      const double q = (1 - p) * u(rng);
      c = joint_cov(pq_distribution(n, p, q));
    }
    const auto primal = primal_feasibility(c, t, c.layout);
    const auto other = find_decomposition(c, t, c.layout);
    const auto dual = dual_witness(c, t, c.layout);
    ASSERT_NE(primal.kind, VerdictKind::Inconclusive) << primal.reason;
    EXPECT_EQ(dual.value > sdp::kTau, primal.kind == VerdictKind::Incompatible);
    // Points within the margin of the boundary may legitimately differ.
    if (std::abs(primal.value) > 1e-4) EXPECT_EQ(other.kind, primal.kind) << "trial " << trial;
    expect_sound(primal, c, t);
    if (other.kind == VerdictKind::Compatible) {
      EXPECT_TRUE(verify_certificate(*other.certificate, c, t).ok);
    }
  }
}

TEST(Certificate, TamperingIsDetected) {
  const auto c = joint_cov(pq_distribution(3, 0.3, 0.1));
  const auto v = primal_feasibility(c, triangle(), c.layout);
  ASSERT_EQ(v.kind, VerdictKind::Compatible);
  auto bad = *v.certificate;
  bad.C[0](0, 5) = bad.C[0](5, 0) = 0.01;  // index 5 is outside parent 0's support
  const auto check = verify_certificate(bad, c, triangle());
  EXPECT_FALSE(check.ok);
  EXPECT_GT(check.support_violation, 0.0);
  auto neg = *v.certificate;
  neg.R -= ComplexMatrix::Identity(6, 6);
  EXPECT_FALSE(verify_certificate(neg, c, triangle()).ok);
}

TEST(Reflection, PreservesVerdicts) {
  for (double q : {0.1, 0.5, 0.8}) {
    const auto c = joint_cov(pq_distribution(3, 0.1, q));
    BlockMatrix r{c.layout, reflect_blocks(c.data, c.layout), {}};
    const auto a = primal_feasibility(c, triangle(), c.layout);
    const auto b = primal_feasibility(r, triangle(), r.layout);
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_NEAR(a.value, b.value, 1e-7);
  }
}

TEST(Inputs, SingleSettingMatchesPrimal) {
  const auto c = joint_cov(pq_distribution(3, 0.2, 0.6));
  const auto a = primal_feasibility(c, triangle(), c.layout);
  const auto b = inputs_feasibility(c, triangle(), c.layout);
  EXPECT_EQ(a.kind, b.kind);
  EXPECT_NEAR(a.value, b.value, 1e-9);
}

TEST(Inputs, PrBoxMixture) {
  const auto strong = cond_cov(quantum::pr_box_mixture(0.75));
  const auto weak = cond_cov(quantum::pr_box_mixture(0.65));
  const auto vs = inputs_feasibility(strong, star(2), strong.layout);
  const auto vw = inputs_feasibility(weak, star(2), weak.layout);
  EXPECT_EQ(vs.kind, VerdictKind::Incompatible);
  EXPECT_EQ(vw.kind, VerdictKind::Compatible);
  ASSERT_TRUE(vw.certificate.has_value());
  EXPECT_TRUE(verify_certificate(*vw.certificate, weak, star(2)).ok);
  EXPECT_LE(witness_violation(vs.witness, star(2), strong.layout), 1e-8);
}

TEST(Inputs, NonzeroMaskedEntriesRejected) {
  auto c = cond_cov(quantum::pr_box_mixture(0.5));
  c.data(0, 2) = c.data(2, 0) = 0.1;
  EXPECT_THROW(inputs_feasibility(c, star(2), c.layout), Error);
}

TEST(Selection, SingleTupleMatchesPrimal) {
  const auto d = pq_distribution(3, 0.4, 0.4);
  const auto verdicts = selection_test(d, triangle(), FeatureMapSet::canonical(d));
  ASSERT_EQ(verdicts.size(), 1u);
  const auto c = joint_cov(d);
  EXPECT_EQ(verdicts[0].kind, primal_feasibility(c, triangle(), c.layout).kind);
}

TEST(Selection, OneHotMixingEqualsSelection) {
  const auto d = quantum::pr_box_mixture(1.0);
  const auto maps = FeatureMapSet::canonical(d);
  const auto sel = selection_test(d, star(2), maps);
  ASSERT_EQ(sel.size(), 4u);
  const auto r = random_selection_test(d, star(2), maps, {{0.0, 1.0}, {1.0, 0.0}});
  EXPECT_EQ(r.kind, sel[d.encode_settings({1, 0})].kind);
  EXPECT_NEAR(r.value, sel[d.encode_settings({1, 0})].value, 1e-9);
}

// Fixed-setting tests on the PR box see a single source only; the inputs
// test is the one that detects it.
TEST(Selection, PrBoxRecorded) {
  const auto d = quantum::pr_box_mixture(1.0);
  const auto maps = FeatureMapSet::canonical(d);
  for (const auto& v : selection_test(d, star(2), maps)) EXPECT_EQ(v.kind, VerdictKind::Compatible);
  EXPECT_EQ(random_selection_test(d, star(2), maps, {{0.5, 0.5}, {0.5, 0.5}}).kind,
            VerdictKind::Compatible);
  EXPECT_EQ(inputs_feasibility(cond_cov(d), star(2), cond_cov(d).layout).kind, VerdictKind::Incompatible);
}

TEST(Bisection, StepFunction) {
  const auto r = bisect_threshold(
      [](double x) { return x > 0.3 ? VerdictKind::Incompatible : VerdictKind::Compatible; }, 0.0, 1.0);
  ASSERT_TRUE(r.ok);
  EXPECT_NEAR(r.threshold, 0.3, 1e-3);
}

TEST(Bisection, NeverIncompatibleReturnsHi) {
  const auto r = bisect_threshold([](double) { return VerdictKind::Compatible; }, 0.0, 0.8);
  ASSERT_TRUE(r.ok);
  EXPECT_EQ(r.threshold, 0.8);
}

TEST(Bisection, RetriesInconclusive) {
  int calls = 0;
  const auto r = bisect_threshold(
      [&](double x) {
        ++calls;
        if (calls == 3) return VerdictKind::Inconclusive;
        return x > 0.5 ? VerdictKind::Incompatible : VerdictKind::Compatible;
      },
      0.0, 1.0);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.retries, 1);
  EXPECT_NEAR(r.threshold, 0.5, 1e-3);
  const auto stuck = bisect_threshold([](double) { return VerdictKind::Inconclusive; }, 0.0, 1.0);
  EXPECT_FALSE(stuck.ok);
  EXPECT_EQ(stuck.evaluations, 4);
}

TEST(TestDistribution, RoutesByTableKind) {
  const auto joint = test_distribution(ghz_table(), triangle(), FeatureMapSet::canonical(ghz_table()));
  EXPECT_EQ(joint.kind, VerdictKind::Incompatible);
  const auto pr = quantum::pr_box_mixture(1.0);
  EXPECT_EQ(test_distribution(pr, star(2), FeatureMapSet::canonical(pr)).kind, VerdictKind::Incompatible);
}
