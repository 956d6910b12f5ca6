#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "subact/distribution.hpp"
#include "test_util.hpp"

using namespace subact;

TEST(FromFusionFrame, UnitWeightsUniform) {
  const FusionFrame ff({coordinate_subspace(2, 0, 1), coordinate_subspace(2, 1, 1)});
  const SubspaceDistribution dist = from_fusion_frame(ff);
  const DiscreteLaw& law = dist.as_discrete();
  EXPECT_DOUBLE_EQ(law.probs[0], 0.5);
  EXPECT_DOUBLE_EQ(law.probs[1], 0.5);
}

TEST(FromFusionFrame, SquaredWeights) {
  const FusionFrame ff({coordinate_subspace(2, 0, 1), coordinate_subspace(2, 1, 1)}, {1.0, 2.0});
  const SubspaceDistribution dist = from_fusion_frame(ff);
  const DiscreteLaw& law = dist.as_discrete();
  EXPECT_NEAR(law.probs[0], 0.2, 1e-15);
  EXPECT_NEAR(law.probs[1], 0.8, 1e-15);
}

TEST(FromFusionFrame, TightFrameGivesScalarExpectation) {
  const SubspaceDistribution roots = roots_of_unity(5);
  const SubspaceDistribution d = from_fusion_frame(FusionFrame(roots.as_discrete().atoms));
  EXPECT_LT(max_abs(expected_projection(d) - 0.5 * Matrix::identity(2)), 1e-12);
}

TEST(FromFusionFrame, MixedDimensionsRejected) {
  const FusionFrame ff({coordinate_subspace(3, 0, 1), coordinate_subspace(3, 1, 2)});
  try {
    from_fusion_frame(ff);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MixedDimensions);
  }
  const SubspaceDistribution mixed =
      SubspaceDistribution::uniform_discrete(ff.subspaces(), {0.5, 0.5});
  EXPECT_FALSE(mixed.subspace_dim().has_value());
}

TEST(Builders, Ronb2) {
  const SubspaceDistribution dist = ronb(2);
  const DiscreteLaw& law = dist.as_discrete();
  ASSERT_EQ(law.atoms.size(), 2u);
  EXPECT_TRUE(same_span(law.atoms[0], coordinate_subspace(2, 0, 1)));
  EXPECT_TRUE(same_span(law.atoms[1], coordinate_subspace(2, 1, 1)));
  EXPECT_DOUBLE_EQ(law.probs[0], 0.5);
}

TEST(Builders, BlockOnb) {
  const SubspaceDistribution dist = block_onb(100, 4);
  const DiscreteLaw& law = dist.as_discrete();
  ASSERT_EQ(law.atoms.size(), 25u);
  for (double p : law.probs) EXPECT_DOUBLE_EQ(p, 1.0 / 25.0);
  EXPECT_TRUE(same_span(law.atoms[3], coordinate_subspace(100, 12, 4)));
  EXPECT_THROW(block_onb(10, 4), Error);
}

TEST(Builders, RootsOfUnityFourKeepsDuplicates) {
  const SubspaceDistribution dist = roots_of_unity(4);
  const DiscreteLaw& law = dist.as_discrete();
  ASSERT_EQ(law.atoms.size(), 4u);
  EXPECT_TRUE(same_span(law.atoms[0], coordinate_subspace(2, 1, 1)));
  EXPECT_TRUE(same_span(law.atoms[1], coordinate_subspace(2, 0, 1)));
  EXPECT_TRUE(same_span(law.atoms[2], coordinate_subspace(2, 1, 1)));
  EXPECT_TRUE(same_span(law.atoms[3], coordinate_subspace(2, 0, 1)));
  EXPECT_THROW(roots_of_unity(2), Error);
  EXPECT_THROW(ronb(0), Error);
}

TEST(Builders, IcosahedralIsTight) {
  const SubspaceDistribution d = icosahedral_lines();
  EXPECT_LT(max_abs(expected_projection(d) - (1.0 / 3.0) * Matrix::identity(3)), 1e-14);
}

TEST(Sample, SingleAtom) {
  const Subspace w = coordinate_subspace(3, 1, 1);
  const SubspaceDistribution d = SubspaceDistribution::uniform({w});
  SeededRng rng(1, 0);
  for (int t = 0; t < 100; ++t) EXPECT_TRUE(same_span(sample(d, rng), w));
}

TEST(Sample, RonbFrequencies) {
  const SubspaceDistribution d = ronb(4);
  SeededRng rng(2, 0);
  std::vector<int> counts(4, 0);
  const int n = 100'000;
  for (int t = 0; t < n; ++t) ++counts[sample_index(d.as_discrete(), rng)];
  const double se = std::sqrt(0.25 * 0.75 / n);
  for (int c : counts) EXPECT_NEAR(c / static_cast<double>(n), 0.25, 4 * se);
}

TEST(Sample, WeightedFrequencies) {
  const SubspaceDistribution d = SubspaceDistribution::discrete(
      {coordinate_subspace(2, 0, 1), coordinate_subspace(2, 1, 1)}, {0.1, 0.9});
  SeededRng rng(3, 0);
  int first = 0;
  const int n = 100'000;
  for (int t = 0; t < n; ++t) first += sample_index(d.as_discrete(), rng) == 0;
  EXPECT_NEAR(first / static_cast<double>(n), 0.1, 4 * std::sqrt(0.09 / n));
}

TEST(Sample, InvariantDelegates) {
  SeededRng a(4, 0), b(4, 0);
  const SubspaceDistribution d = SubspaceDistribution::invariant(1, 2);
  std::vector<double> angles;
  for (int t = 0; t < 100'000; ++t) {
    const Subspace w = sample(d, a);
    EXPECT_EQ(w.basis().entries()[0], sample_invariant(b, 1, 2).basis().entries()[0]);
    double ang = std::atan2(w.basis()(1, 0), w.basis()(0, 0));
    if (ang < 0.0) ang += std::numbers::pi;
    angles.push_back(ang);
  }
  EXPECT_LT(testutil::ks_statistic(angles, [](double x) { return x / std::numbers::pi; }), 0.01);
}

TEST(ExpectedProjection, InvariantMonteCarlo) {
  const std::size_t k = 2, d = 4;
  const Matrix e = expected_projection(SubspaceDistribution::invariant(k, d));
  EXPECT_LT(max_abs(e - 0.5 * Matrix::identity(4)), 1e-15);
  SeededRng rng(5, 0);
  const int n = 100'000;
  std::vector<std::vector<double>> samples(d * d);
  for (int t = 0; t < n; ++t) {
    const Matrix p = sample_invariant(rng, k, d).projector();
    for (std::size_t i = 0; i < d * d; ++i) samples[i].push_back(p.entries()[i]);
  }
  for (std::size_t i = 0; i < d * d; ++i) {
    const testutil::MeanSe m = testutil::mean_se(samples[i]);
    EXPECT_NEAR(m.mean, e.entries()[i], 4 * m.se) << i;
  }
}

TEST(ExpectedProjection, RonbAndTraceAndSpectrum) {
  EXPECT_LT(max_abs(expected_projection(ronb(6)) - (1.0 / 6.0) * Matrix::identity(6)), 1e-15);
  SeededRng rng(6, 0);
  for (int t = 0; t < 20; ++t) {
    std::vector<Subspace> atoms;
    for (int n = 0; n < 5; ++n) atoms.push_back(sample_invariant(rng, 2, 5));
    const Matrix e = expected_projection(SubspaceDistribution::uniform(atoms));
    EXPECT_NEAR(trace(e), 2.0, 1e-10);
    const EigenDecomposition eig = sym_eig(e);
    EXPECT_GE(eig.values.front(), -1e-12);
    EXPECT_LE(eig.values.back(), 1.0 + 1e-12);
  }
}

TEST(PotentialS, SingleAtomContainingX) {
  const SubspaceDistribution d = SubspaceDistribution::uniform({coordinate_subspace(3, 0, 2)});
  EXPECT_EQ(potential_s(d, unit_vector(3, 1), 0.5), 0.0);
}

TEST(PotentialS, RonbAtOnes) {
  for (std::size_t dim : {2u, 5u, 17u}) {
    const Vector x = normalized(Vector(dim, 1.0));
    for (double s : {0.25, 0.5, 1.0, 2.0, 4.0})
      EXPECT_NEAR(potential_s(ronb(dim), x, s), std::pow(1.0 - 1.0 / dim, s), 1e-14);
    EXPECT_NEAR(potential_s(ronb(dim), unit_vector(dim, 0), 1.0), (dim - 1.0) / dim, 1e-15);
  }
}

TEST(PotentialS, Errors) {
  EXPECT_THROW(potential_s(ronb(2), Vector{1.0, 1.0}, 1.0), Error);
  try {
    potential_s(SubspaceDistribution::invariant(1, 2), unit_vector(2, 0), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedVariant);
  }
  try {
    potential_log(ronb(2), Vector{2.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUnitVector);
  }
}

TEST(PotentialLog, Values) {
  const SubspaceDistribution single = SubspaceDistribution::uniform({coordinate_subspace(3, 0, 1)});
  EXPECT_EQ(potential_log(single, unit_vector(3, 2)), 0.0);
  EXPECT_EQ(potential_log(single, unit_vector(3, 0)), -std::numeric_limits<double>::infinity());
  EXPECT_NEAR(potential_log(ronb(2), normalized(Vector{1.0, 1.0})), std::log(0.5), 1e-15);
}

TEST(PotentialProperties, LinearityMonotonicityJensen) {
  SeededRng rng(7, 0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 2 + t % 5;
    std::vector<Subspace> atoms;
    std::vector<double> p;
    double total = 0.0;
    for (int n = 0; n < 4; ++n) {
      atoms.push_back(sample_invariant(rng, 1 + t % (d - 1), d));
      p.push_back(0.1 + rng.uniform());
      total += p.back();
    }
    for (double& q : p) q /= total;
    p.back() = 1.0 - (p[0] + p[1] + p[2]);
    const SubspaceDistribution law = SubspaceDistribution::discrete(atoms, p);
    const Vector x = random_unit_vector(rng, d);
    const double p1 = potential_s(law, x, 1.0);
    EXPECT_NEAR(p1, 1.0 - quadratic_form(expected_projection(law), x), 1e-12);
    EXPECT_LE(potential_s(law, x, 2.0), potential_s(law, x, 1.0) + 1e-15);
    EXPECT_LE(potential_s(law, x, 1.0), potential_s(law, x, 0.5) + 1e-15);
    const double pl = potential_log(law, x);
    if (std::isfinite(pl)) {
      EXPECT_LE(std::exp(pl), p1 + 1e-15);
    }
  }
}

TEST(DistributionIo, DiscreteRoundTrip) {
  const SubspaceDistribution d = roots_of_unity(5);
  std::stringstream ss;
  write_distribution(ss, d);
  const SubspaceDistribution r = read_distribution(ss);
  const DiscreteLaw& a = d.as_discrete();
  const DiscreteLaw& b = r.as_discrete();
  ASSERT_EQ(a.atoms.size(), b.atoms.size());
  for (std::size_t n = 0; n < a.atoms.size(); ++n) {
    EXPECT_EQ(a.probs[n], b.probs[n]);
    EXPECT_EQ(a.atoms[n].basis().entries()[0], b.atoms[n].basis().entries()[0]);
  }
}

TEST(DistributionIo, InvariantRoundTrip) {
  std::stringstream ss;
  write_distribution(ss, SubspaceDistribution::invariant(2, 7));
  EXPECT_EQ(ss.str(), "invariant 7 2\n");
  const SubspaceDistribution r = read_distribution(ss);
  EXPECT_EQ(r.as_invariant().k, 2u);
  EXPECT_EQ(r.as_invariant().d, 7u);
}

TEST(DistributionIo, BadHeader) {
  std::istringstream in("gaussian 3 1\n");
  try {
    read_distribution(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(Construction, Validation) {
  EXPECT_THROW(SubspaceDistribution::invariant(0, 3), Error);
  EXPECT_THROW(SubspaceDistribution::invariant(4, 3), Error);
  EXPECT_THROW(SubspaceDistribution::discrete({coordinate_subspace(2, 0, 1)}, {0.9}), Error);
  EXPECT_THROW(SubspaceDistribution::discrete({coordinate_subspace(2, 0, 1)}, {-1.0}), Error);
  EXPECT_THROW(ronb(2).as_invariant(), Error);
}
