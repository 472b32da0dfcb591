#include <gtest/gtest.h>

#include <numbers>
#include <set>

#include "affrep/affrep.hpp"
#include "oracles.hpp"

using namespace affrep;

namespace {

constexpr double pi = std::numbers::pi;

struct Row {
  double a0, a1, c0;
  const char* code;
};

// one or more triples per row of the classification table, boundary rows included
const Row golden[] = {
    {1, 1, -1, "P.1"},     {0, 1, 0, "P.2"},      {-1, 1, -0.5, "P.3"},  {1, 1, -0.5, "P.4"},   {1, 1, -0.25, "P.5"},
    {1, 1, 0, "P.6"},      {1, 1, 1, "P.7"},      {0, 1, 1, "P.7"},      {-1, 1, 1, "P.8"},     {-1, 1, 0, "P.9"},
    {-1, 1, -0.25, "P.10"}, {0, 0, -1, "Z.1"},    {0, 0, 0, "Z.2"},      {0, 0, 1, "Z.2"},      {1, 0, -1, "Z.3"},
    {1, 0, 0, "Z.4"},      {1, 0, 1, "Z.5"},      {-1, 0, -1, "Z.6"},    {-1, 0, 0, "Z.7"},     {-1, 0, 1, "Z.8"},
    {-1, -1, 1, "N.1"},    {-1, -1, 0.5, "N.1"},  {-1, -1, 0.25, "N.2"}, {-1, -1, 0, "N.3"},    {-1, -1, -0.5, "N.4"},
    {0, -1, 1, "N.5"},     {0, -1, 0, "N.6"},     {0, -1, -1, "N.7"},    {1, -1, 1, "N.8"},     {1, -1, 0.5, "N.9"},
    {1, -1, -0.5, "N.10"}, {1, -1, 0, "N.11"},    {1, -1, 0.25, "N.12"},
};

ExistenceProfile profile_of(const SurfaceSpec& s, double hbar = 0.1) {
  return existence_profile(algebra_from_surface(s, OrderingSpec::symmetric(s.alpha1, hbar)), classify_surface(s));
}

const SurfaceSpec one_sheeted_surface = SurfaceSpec::from_c(-1.0, -1.0, 1.02);
const OrderingSpec one_sheeted_ordering{0.3, -0.25, -0.5, -0.25};

}  // namespace

TEST(Classify, GoldenTable) {
  std::set<std::string> rows;
  for (const Row& r : golden) {
    EXPECT_EQ(classify_surface(SurfaceSpec{r.a0, r.a1, r.c0}).code, r.code) << r.a0 << ' ' << r.a1 << ' ' << r.c0;
    rows.insert(r.code);
  }
  EXPECT_EQ(rows.size(), 30u);
}

TEST(Classify, ScaleInvariance) {
  // the class depends on the zero set only
  oracle::Rng rng(31);
  for (const Row& r : golden) {
    const double k = rng.uniform(0.1, 10.0);
    EXPECT_EQ(classify_surface(SurfaceSpec{k * r.a0, k * r.a1, k * r.c0}).code, r.code);
  }
}

TEST(Classify, Totality) {
  oracle::Rng rng(32);
  const std::set<std::string> valid = [] {
    std::set<std::string> v;
    for (const Row& r : golden) v.insert(r.code);
    return v;
  }();
  auto check = [&](double a0, double a1, double c0) {
    const auto c = classify_surface(SurfaceSpec{a0, a1, c0});
    ASSERT_TRUE(valid.count(c.code)) << a0 << ' ' << a1 << ' ' << c0;
  };
  for (int k = 0; k < 100000; ++k) check(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
  // boundary strata: zeros, c = 0 and μ² = c
  const double vals[] = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  for (double a0 : vals)
    for (double a1 : vals)
      for (double c0 : vals) check(a0, a1, c0);
  for (int k = 0; k < 1000; ++k) {
    const double a0 = rng.uniform(-3, 3), a1 = rng.uniform(0.1, 3) * (rng.coin() ? 1 : -1);
    const double mu = -a0 / a1;
    check(a0, a1, -mu * mu * a1 / 2.0);  // c = 0
    check(a0, a1, 0.0);                  // c = μ²
  }
}

TEST(Classify, NonFiniteInputIsRejected) {
  EXPECT_THROW(classify_surface(SurfaceSpec{std::nan(""), 1.0, 0.0}), Error);
}

TEST(Classify, DegenerateReps) {
  auto reps = [](double a0, double a1, double c0) {
    const SurfaceSpec s{a0, a1, c0};
    return degenerate_reps(classify_surface(s), s);
  };
  EXPECT_TRUE(reps(1, 1, -0.5).empty());  // P.4
  EXPECT_EQ(reps(0, 1, 0), std::vector<double>{0.0});
  ASSERT_EQ(reps(-1, 1, -0.5).size(), 1u);
  EXPECT_NEAR(reps(-2, 1, -2).front(), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(reps(1, 0, 0), std::vector<double>{0.0});  // Z.4
  EXPECT_THROW(reps(-1, 1, 1), Error);
  EXPECT_THROW(reps(-1, -1, -0.5), Error);
}

TEST(Classify, RationalDenominator) {
  EXPECT_EQ(rational_denominator(1.0 / 11.0, 12), 11);
  EXPECT_EQ(rational_denominator(3.0 / 7.0, 12), 7);
  EXPECT_EQ(rational_denominator(0.5, 12), 2);
  EXPECT_FALSE(rational_denominator(1.0 / 13.0, 12));
  EXPECT_FALSE(rational_denominator(1.0 / std::numbers::sqrt2, 12));
  EXPECT_FALSE(rational_denominator(1.0 / 11.0 + 1e-6, 12));
}

TEST(Profile, TorusEleven) {
  const double th = pi / 11.0;
  const AlgebraParams p = AlgebraParams::from_chat(2.0 * std::cos(2.0 * th), 0.5, 1.0);
  const auto so = surface_from_algebra(p, std::tan(th), 0.5);
  const auto cls = classify_surface(so.surface);
  EXPECT_EQ(cls.code, "P.10");
  const auto prof = existence_profile(p, cls);
  EXPECT_EQ(prof.regime, "torus");
  EXPECT_EQ(prof.rational_q, 11);
  EXPECT_EQ(prof.loop_dims, std::vector<int>{11});
  EXPECT_TRUE(prof.string_dims.empty());
  ASSERT_TRUE(prof.loop_seed);
  EXPECT_LE(verify_relations(build_loop(p, *prof.loop_seed, 11)).max_interior(), 1e-10 * 11);
  EXPECT_FALSE(prof.empty);
}

TEST(Profile, OneSheetedExample) {
  const AlgebraParams p = algebra_from_surface(one_sheeted_surface, one_sheeted_ordering);
  const auto cls = classify_surface(one_sheeted_surface);
  EXPECT_EQ(cls.code, "N.4");
  const auto prof = existence_profile(p, cls);
  EXPECT_EQ(prof.regime, "one-sheeted");
  EXPECT_TRUE(prof.one_sided);
  EXPECT_TRUE(prof.two_sided);
  EXPECT_EQ(prof.transmitter_seeds.size(), 2u);
  EXPECT_EQ(prof.receiver_seeds.size(), 2u);
  EXPECT_TRUE(prof.string_dims.empty());
  EXPECT_TRUE(prof.loop_dims.empty());
}

TEST(Profile, PlanePairZeroIsScalarFamily) {
  const auto prof = profile_of(SurfaceSpec{0.0, 0.0, 0.0});
  EXPECT_TRUE(prof.scalar_family);
  EXPECT_TRUE(prof.scalar_only);
}

TEST(Profile, DetNotOneIsUnsupported) {
  try {
    existence_profile(AlgebraParams{1.0, 0.5, 0.2, 0.1}, classify_surface(SurfaceSpec{1, 1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unsupported_regime);
  }
}

TEST(Profile, EmptyAndDegenerateRows) {
  for (const Row& r : golden) {
    const SurfaceSpec s{r.a0, r.a1, r.c0};
    const auto cls = classify_surface(s);
    if (cls.topology != Topology::empty && cls.topology != Topology::point && cls.topology != Topology::circle) continue;
    for (double hbar : {0.1, 0.3}) {
      const auto prof = profile_of(s, hbar);
      if (cls.topology == Topology::empty) {
        EXPECT_TRUE(prof.empty) << r.code;
      } else {
        EXPECT_TRUE(prof.scalar_only) << r.code;
        EXPECT_FALSE(prof.empty) << r.code;
      }
    }
  }
}

TEST(Profile, TwoSheetedHasTwoOneSidedSeedsAndNoTwoSided) {
  for (const Row& r : golden) {
    const SurfaceSpec s{r.a0, r.a1, r.c0};
    if (classify_surface(s).topology != Topology::two_sheets) continue;
    for (double hbar : {0.1, 0.3}) {
      const auto prof = profile_of(s, hbar);
      EXPECT_EQ(prof.transmitter_seeds.size() + prof.receiver_seeds.size(), 2u) << r.code;
      EXPECT_FALSE(prof.two_sided) << r.code;
    }
  }
}

TEST(Profile, OneSheetedHasTwoSided) {
  for (const Row& r : golden) {
    const SurfaceSpec s{r.a0, r.a1, r.c0};
    if (classify_surface(s).topology != Topology::one_sheet) continue;
    for (double hbar : {0.1, 0.3}) {
      const auto prof = profile_of(s, hbar);
      EXPECT_TRUE(prof.two_sided) << r.code;
      for (const Point& y : prof.two_sided_seeds) {
        const auto rep = build_two_sided(algebra_from_surface(s, OrderingSpec::symmetric(s.alpha1, hbar)), y, 50);
        EXPECT_EQ(rep.dim, 101);
      }
    }
  }
}

TEST(Profile, OneSidedThreshold) {
  const AlgebraParams base = algebra_from_surface(one_sheeted_surface, one_sheeted_ordering);
  const double mu = *base.mu();
  const double cstar = mu * mu * (1.0 + std::abs(base.delta()) / 4.0);
  EXPECT_NEAR(cstar, 1.04712041884817, 1e-12);
  const auto cls = classify_surface(one_sheeted_surface);
  for (double f : {0.99, 1.01}) {
    const auto s = SurfaceSpec::from_c(-1.0, -1.0, f * cstar);
    const auto p = algebra_from_surface(s, one_sheeted_ordering);
    const auto prof = existence_profile(p, cls);
    EXPECT_EQ(prof.one_sided, f < 1.0) << f;
    EXPECT_EQ(axes_crossings(ConstraintCurve(p)).real_crossings, f < 1.0);
    EXPECT_TRUE(prof.two_sided);
  }
}

TEST(Profile, ConsistentWithBuilders) {
  for (const Row& r : golden) {
    const SurfaceSpec s{r.a0, r.a1, r.c0};
    const AlgebraParams p = algebra_from_surface(s, OrderingSpec::symmetric(s.alpha1, 0.2));
    const auto prof = existence_profile(p, classify_surface(s));
    for (int n : prof.string_dims) EXPECT_NO_THROW(build_string(p, n)) << r.code;
    if (prof.loop_seed) {
      for (int n : prof.loop_dims) EXPECT_NO_THROW(build_loop(p, *prof.loop_seed, n)) << r.code;
    }
    for (const Point& t : prof.transmitter_seeds) EXPECT_NO_THROW(build_one_sided(p, t.x(), 20)) << r.code;
    for (double m : prof.scalar_moduli) {
      EXPECT_LE(verify_relations(build_scalar(p, m)).max_interior(), 1e-12) << r.code;
    }
  }
}

TEST(Profile, CompactTransitions) {
  // ħ = 0.1, α₀ = −1, α₁ = 1: μ/√ĉ runs through 1 and 1/cosθ
  const char* expect[] = {"sphere", "critical-torus", "torus"};
  const double c0s[] = {0.1, -0.0015, -0.05};
  for (int i = 0; i < 3; ++i) {
    const auto prof = profile_of(SurfaceSpec{-1.0, 1.0, c0s[i]});
    EXPECT_EQ(prof.regime, expect[i]) << c0s[i];
  }
}

TEST(Profile, OneDimensionalHypotheses) {
  // Δ ≤ 0 and a ≥ 0: nothing but one-dimensional representations
  for (double a : {0.0, 0.3}) {
    const AlgebraParams p{2.5, 1.0, a, 0.2};
    const auto prof = existence_profile(p, classify_surface(surface_from_algebra(p, 0.2, 0.0).surface));
    EXPECT_TRUE(prof.one_dimensional_only);
    EXPECT_TRUE(prof.loop_dims.empty());
    EXPECT_TRUE(prof.string_dims.empty());
  }
}

TEST(Profile, FundamentalDomainCandidates) {
  // two-sheeted parabola: every point on an arc from an axis point to its image
  const AlgebraParams p = algebra_from_surface(SurfaceSpec{-1, 0, 1}, OrderingSpec::symmetric(0.0, 0.1));
  const ConstraintCurve c(p);
  for (const Point& y : detail::two_sided_candidates(p, c, 32)) {
    EXPECT_LE(std::abs(evaluate_p(c, y.x(), y.y())), 1e-8 * (1.0 + y.squaredNorm()));
  }
}
