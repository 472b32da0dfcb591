#include <gtest/gtest.h>

#include <numbers>

#include "affrep/affrep.hpp"
#include "oracles.hpp"

using namespace affrep;

namespace {
constexpr double pi = std::numbers::pi;

const SurfaceSpec one_sheeted_surface = SurfaceSpec::from_c(-1.0, -1.0, 1.02);
const OrderingSpec one_sheeted_ordering{0.3, -0.25, -0.5, -0.25};
}  // namespace

TEST(Bridge, OneSheetedExample) {
  const AlgebraParams p = algebra_from_surface(one_sheeted_surface, one_sheeted_ordering);
  EXPECT_NEAR(p.a, 0.18848167539267, 1e-12);
  EXPECT_NEAR(p.trA, 2.18848167539267, 1e-12);
  EXPECT_EQ(p.detA, 1.0);
  EXPECT_NEAR(p.delta_alg(), -0.18848167539267, 1e-12);
  EXPECT_NEAR(*p.mu(), -1.0, 1e-12);
  EXPECT_NEAR(*p.chat1, -0.00376963350785341, 1e-14);
  EXPECT_NEAR(*p.chat(), 1.02, 1e-12);

  const auto cc = casimir_constants(one_sheeted_surface, one_sheeted_ordering, one_sheeted_surface.c0);
  EXPECT_NEAR(cc.chat1, *p.chat1, 1e-15);
  ASSERT_TRUE(cc.chat);
  EXPECT_NEAR(*cc.chat, 1.02, 1e-12);
}

TEST(Bridge, TorusInversion) {
  const double th = pi / 11.0;
  const AlgebraParams p = AlgebraParams::from_chat(2.0 * std::cos(2.0 * th), 0.5, 1.0);
  const auto so = surface_from_algebra(p, std::tan(th), 0.5);
  EXPECT_NEAR(so.surface.alpha0, -3.14967639228327, 1e-11);
  EXPECT_NEAR(so.surface.alpha1, 2.0, 1e-11);
  EXPECT_NEAR(so.surface.c0, -1.48011534402664, 1e-11);
  EXPECT_NEAR(*so.surface.mu(), 1.57483819614164, 1e-11);
  EXPECT_NEAR(*so.surface.mu(), *p.mu(), 1e-12);
  EXPECT_NEAR(*so.surface.c(), 1.0, 1e-12);
  EXPECT_NEAR(so.ordering.sum(), so.surface.alpha1, 1e-12);

  const AlgebraParams back = algebra_from_surface(so.surface, so.ordering);
  EXPECT_NEAR(back.trA, p.trA, 1e-12);
  EXPECT_NEAR(back.a, p.a, 1e-12);
  EXPECT_NEAR(*back.chat1, *p.chat1, 1e-12);
}

TEST(Bridge, SymmetricOrderingGivesDetOneAndHbarFreeC) {
  oracle::Rng rng(21);
  for (int k = 0; k < 100; ++k) {
    const SurfaceSpec s{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    if (std::abs(s.alpha1) < 1e-2) continue;
    for (double hbar : {0.05, 0.3, 0.9}) {
      const auto o = OrderingSpec::symmetric(s.alpha1, hbar);
      if (!(o.t_squared(s.alpha1) > 0.0) || std::abs(o.denominator()) < 1e-3) continue;
      const AlgebraParams p = algebra_from_surface(s, o);
      EXPECT_EQ(p.detA, 1.0);
      EXPECT_LE(oracle::rel_err(*p.chat(), *s.c()), 1e-10);
      EXPECT_LE(oracle::rel_err(*p.mu(), *s.mu()), 1e-10);
    }
  }
}

TEST(Bridge, RoundTrip) {
  oracle::Rng rng(22);
  int done = 0;
  while (done < 100) {
    const SurfaceSpec s{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    OrderingSpec o{rng.uniform(0.05, 1.0), rng.uniform(-1, 1), 0.0, rng.uniform(-1, 1)};
    o.gamma1t = s.alpha1 - o.beta1t - o.delta1t;
    if (std::abs(o.denominator()) < 1e-2 || !(o.t_squared(s.alpha1) > 0.0)) continue;
    const AlgebraParams p = algebra_from_surface(s, o);
    const auto back = surface_from_algebra(p, o.hbar, o.delta1t);
    EXPECT_LE(oracle::rel_err(back.surface.alpha0, s.alpha0), 1e-10);
    EXPECT_LE(oracle::rel_err(back.surface.alpha1, s.alpha1), 1e-10);
    EXPECT_LE(oracle::rel_err(back.surface.c0, s.c0), 1e-10);
    EXPECT_LE(oracle::rel_err(back.ordering.beta1t, o.beta1t), 1e-9);
    EXPECT_LE(oracle::rel_err(back.ordering.gamma1t, o.gamma1t), 1e-9);
    ++done;
  }
}

TEST(Bridge, TwoRoutesToChatAgree) {
  oracle::Rng rng(23);
  for (int k = 0; k < 50; ++k) {
    const SurfaceSpec s{rng.uniform(-3, 3), rng.uniform(0.1, 3) * (rng.coin() ? 1 : -1), rng.uniform(-3, 3)};
    const auto o = OrderingSpec::symmetric(s.alpha1, rng.uniform(0.05, 0.5));
    if (std::abs(o.denominator()) < 1e-2) continue;
    const auto cc = casimir_constants(s, o, s.c0);
    const AlgebraParams p = algebra_from_surface(s, o);
    ASSERT_TRUE(cc.chat);
    EXPECT_LE(oracle::rel_err(*cc.chat, *p.mu() * *p.mu() + cc.chat1 / p.delta()), 1e-10);
  }
  const auto zero = casimir_constants(SurfaceSpec{-2.0, 1.0, 0.0}, OrderingSpec::symmetric(1.0, 0.2), 0.0);
  EXPECT_EQ(zero.chat1, 0.0);
  EXPECT_NEAR(*zero.chat, 4.0, 1e-15);
  const auto flat = casimir_constants(SurfaceSpec{1.0, 0.0, 0.5}, OrderingSpec{0.2, 0, 0, 0}, 0.5);
  EXPECT_FALSE(flat.chat);
  EXPECT_NEAR(flat.chat1, 4.0 * 0.04 * 0.5, 1e-15);
}

TEST(Bridge, Errors) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::parse_error;  // sentinel: nothing thrown
  };
  const SurfaceSpec s{1.0, 1.0, 0.0};
  EXPECT_EQ(code([&] { algebra_from_surface(s, OrderingSpec{1.0, 1.0, 0.5, -0.5}); }), ErrorCode::degenerate_ordering);
  EXPECT_EQ(code([&] { algebra_from_surface(s, OrderingSpec{0.3, 0.5, 0.5, 0.5}); }), ErrorCode::inconsistent);
  EXPECT_EQ(code([&] { algebra_from_surface(SurfaceSpec{1.0, 100.0, 0.0}, OrderingSpec{1.0, 0.0, 100.0, 0.0}); }),
            ErrorCode::domain_error);
  EXPECT_EQ(code([&] { SurfaceSpec::from_c(1.0, 0.0, 1.0); }), ErrorCode::alpha1_zero);
}

TEST(Psi, BranchOneIdentity) {
  const auto c = psi_coefficients(AffineMap2(1.0, 0.0, 0.0, 1.0, 1.0, 0.0), 1.0);
  EXPECT_EQ(c.branch, 1);
  EXPECT_EQ(c.k, 0.0);
  EXPECT_EQ(c.kt, 0.0);
  EXPECT_DOUBLE_EQ(c.m, 1.0);
  EXPECT_DOUBLE_EQ(c.n, -1.0);
  EXPECT_DOUBLE_EQ(c.mt, 0.0);
  EXPECT_DOUBLE_EQ(c.nt, 0.0);
}

TEST(Psi, BranchOneIntertwines) {
  oracle::Rng rng(24);
  for (int k = 0; k < 100; ++k) {
    const AffineMap2 L(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                       rng.uniform(-2, 2));
    const double a = rng.uniform(0.1, 2.0) * (rng.coin() ? 1 : -1);
    const auto c = psi_coefficients(L, a);
    EXPECT_EQ(c.branch, 1);
    EXPECT_LE(psi_residual(c), 1e-10);
    EXPECT_LE(psi_intertwining_residual(c), 1e-10);
    // free k, k̃ keep the identities
    const auto c2 = psi_coefficients(L, a, PsiFree{std::nullopt, std::nullopt, 0.4, -1.1});
    EXPECT_LE(psi_residual(c2), 1e-10);
    EXPECT_LE(psi_intertwining_residual(c2), 1e-10);
  }
}

TEST(Psi, BranchTwo) {
  const AffineMap2 L(2.0, 1.0, 0.5, 0.0, 1.0, -1.0);  // 1 + det − tr = −1.5
  const auto c = psi_coefficients(L, 0.0);
  EXPECT_EQ(c.branch, 2);
  EXPECT_EQ(c.m, 1.0);
  EXPECT_EQ(c.mt, 0.0);
  EXPECT_LE(psi_residual(c), 1e-12);
  EXPECT_LE(psi_intertwining_residual(c), 1e-12);
  const auto c2 = psi_coefficients(L, 0.0, PsiFree{0.3, 2.0, std::nullopt, std::nullopt});
  EXPECT_LE(psi_residual(c2), 1e-12);
  EXPECT_LE(psi_intertwining_residual(c2), 1e-12);
}

TEST(Psi, BranchThreeConditions) {
  struct Case {
    AffineMap2 L;
    bool ok;
  };
  const Case cases[] = {
      {{1, 0, 0, 1, 0, 0}, true},      // A = I, u = v = 0
      {{1, 0, 0, 1, 1, 0}, false},     // A = I needs u = v = 0
      {{2, 0, 0, 1, 1, 0}, true},      // (α−1)v = γu: 0 = 0
      {{2, 0, 0, 1, 0, 1}, false},     // 1·1 ≠ 0
      {{1, 1, 0, 1, 1, 0}, true},      // shear: (δ−1)u = βv
      {{1, 1, 0, 1, 0, 1}, false},
      {{1, 0, 1, 1, 0, 2}, true},      // α = 1, γ ≠ 0: needs u = 0
      {{1, 0, 1, 1, 1, 0}, false},
      {{0, 0, 0, 1, 3, 0}, true},      // det 0: −v = 0
      {{0, 0, 0, 1, 3, 1}, false},
  };
  for (const auto& tc : cases) {
    ASSERT_NEAR(1.0 + tc.L.det() - tc.L.trace(), 0.0, 1e-15);
    if (tc.ok) {
      const auto c = psi_coefficients(tc.L, 0.0);
      EXPECT_EQ(c.branch, 3);
      EXPECT_LE(psi_residual(c), 1e-12);
      EXPECT_LE(psi_intertwining_residual(c), 1e-12);
    } else {
      try {
        psi_coefficients(tc.L, 0.0);
        ADD_FAILURE() << "expected Inconsistent for u=" << tc.L.t(0) << " v=" << tc.L.t(1);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::inconsistent);
      }
    }
  }
  const auto id = psi_coefficients(AffineMap2::identity(), 0.0);
  EXPECT_EQ(id.k, 0.0);
  EXPECT_EQ(id.kt, 0.0);
}
