#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "affrep/affine_dynamics.hpp"

namespace affrep {

/// C(x,y,z) = (α₀/2)(x²+y²) + (α₁/4)(x²+y²)² + ... − c₀
struct SurfaceSpec {
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double c0 = 0.0;

  std::optional<double> mu() const {
    if (alpha1 == 0.0) return std::nullopt;
    return -alpha0 / alpha1;
  }
  std::optional<double> c() const {
    if (alpha1 == 0.0) return std::nullopt;
    return alpha0 * alpha0 / (alpha1 * alpha1) + 2.0 * c0 / alpha1;
  }
  /// Inverse of c(): the c₀ giving a prescribed c.
  static SurfaceSpec from_c(double alpha0, double alpha1, double c) {
    if (alpha1 == 0.0) throw Error(ErrorCode::alpha1_zero, "c is undefined for alpha1 = 0");
    return {alpha0, alpha1, (c - alpha0 * alpha0 / (alpha1 * alpha1)) * alpha1 / 2.0};
  }
};

struct OrderingSpec {
  double hbar = 1.0;
  double beta1t = 0.0;
  double gamma1t = 0.0;
  double delta1t = 0.0;

  /// β̃₁ = δ̃₁ = α₁/4, γ̃₁ = α₁/2; forces det A = 1.
  static OrderingSpec symmetric(double alpha1, double hbar) { return {hbar, alpha1 / 4.0, alpha1 / 2.0, alpha1 / 4.0}; }

  /// 1 + 2ħ²δ̃₁
  double denominator() const { return 1.0 + 2.0 * hbar * hbar * delta1t; }
  double sum() const { return beta1t + gamma1t + delta1t; }

  /// t² = (1 + 2ħ²δ̃₁ − ½ħ²α₁)/(4ħ²)
  double t_squared(double alpha1) const { return (denominator() - 0.5 * hbar * hbar * alpha1) / (4.0 * hbar * hbar); }
};

namespace detail {
inline double checked_denominator(const OrderingSpec& o) {
  if (!(o.hbar > 0.0)) throw Error(ErrorCode::domain_error, "hbar must be positive");
  const double d = o.denominator();
  if (std::abs(d) < 1e-12) throw Error(ErrorCode::degenerate_ordering, "1 + 2 hbar^2 delta1t vanishes");
  return d;
}
}  // namespace detail

/// Algebra parameters of the quantized surface; ĉ₀ is identified with c₀, so ĉ₁ = 4ħ²c₀/(1+2ħ²δ̃₁).
inline AlgebraParams algebra_from_surface(const SurfaceSpec& s, const OrderingSpec& o) {
  const double d = detail::checked_denominator(o);
  const double scale = std::abs(o.beta1t) + std::abs(o.gamma1t) + std::abs(o.delta1t) + std::abs(s.alpha1);
  if (std::abs(o.sum() - s.alpha1) > 1e-10 * std::max(1.0, scale)) {
    throw Error(ErrorCode::inconsistent, "ordering parameters must sum to alpha1");
  }
  if (!(o.t_squared(s.alpha1) > 0.0)) throw Error(ErrorCode::domain_error, "ordering gives t^2 <= 0");
  const double h2 = o.hbar * o.hbar;
  AlgebraParams p;
  p.a = -2.0 * s.alpha0 * h2 / d;
  p.detA = (1.0 + 2.0 * h2 * o.beta1t) / d;
  p.trA = (2.0 - 2.0 * h2 * o.gamma1t) / d;
  p.chat1 = 4.0 * h2 * s.c0 / d;
  if (o.beta1t == o.delta1t) p.detA = 1.0;
  return p;
}

struct SurfaceAndOrdering {
  SurfaceSpec surface;
  OrderingSpec ordering;
};

/// Inverts algebra_from_surface for given ħ and δ̃₁. c₀ is recovered from ĉ₁ when present.
inline SurfaceAndOrdering surface_from_algebra(const AlgebraParams& p, double hbar, double delta1t) {
  OrderingSpec o{hbar, 0.0, 0.0, delta1t};
  const double d = detail::checked_denominator(o);
  const double h2 = hbar * hbar;
  SurfaceSpec s;
  s.alpha0 = -p.a * d / (2.0 * h2);
  s.alpha1 = p.delta_alg() * d / (2.0 * h2);
  s.c0 = p.chat1 ? *p.chat1 * d / (4.0 * h2) : 0.0;
  o.beta1t = (p.detA * d - 1.0) / (2.0 * h2);
  o.gamma1t = (2.0 - p.trA * d) / (2.0 * h2);
  return {s, o};
}

struct CasimirConstants {
  double chat1 = 0.0;
  std::optional<double> chat;  // empty when α₁ = 0
};

/// ĉ₁ = 4ħ²ĉ₀/(1+2ħ²δ̃₁), ĉ = μ² + 2ĉ₀/α₁.
inline CasimirConstants casimir_constants(const SurfaceSpec& s, const OrderingSpec& o, double chat0) {
  const double d = detail::checked_denominator(o);
  CasimirConstants out;
  out.chat1 = 4.0 * o.hbar * o.hbar * chat0 / d;
  if (s.alpha1 != 0.0) {
    const double mu = -s.alpha0 / s.alpha1;
    out.chat = mu * mu + 2.0 * chat0 / s.alpha1;
  }
  return out;
}

/// ψ(E) = k + m·WV + n·VW, ψ(Ẽ) = k̃ + m̃·WV + ñ·VW.
struct PsiCoefficients {
  double k = 0.0, kt = 0.0;
  double m = 0.0, n = 0.0;
  double mt = 0.0, nt = 0.0;
  int branch = 0;  // 1: a ≠ 0, 2: Δ_alg ≠ 0, 3: Δ_alg = a = 0
  AffineMap2 L;
  double a = 0.0;
};

/// Caller choices for the free parameters of the solution family.
struct PsiFree {
  std::optional<double> m, mt;  // used in branches 2 and 3
  std::optional<double> k, kt;  // used in branch 1 and as the free coordinate in branch 3
};

/// Residual of (A − I)(k, k̃) = (m a − u, m̃ a − v) together with n, ñ forcing.
inline double psi_residual(const PsiCoefficients& c) {
  const Mat2& A = c.L.A;
  const double u = c.L.t(0), v = c.L.t(1);
  const double r1 = (A(0, 0) - 1.0) * c.k + A(0, 1) * c.kt - (c.m * c.a - u);
  const double r2 = A(1, 0) * c.k + (A(1, 1) - 1.0) * c.kt - (c.mt * c.a - v);
  const double r3 = c.n - (A(0, 1) * c.mt - A(1, 1) * c.m);
  const double r4 = c.nt - (A(1, 0) * c.m - A(0, 0) * c.mt);
  return std::max({std::abs(r1), std::abs(r2), std::abs(r3), std::abs(r4)});
}

/// A·M − M·((tr A, −det A), (1, 0)) for M = ((m, n), (m̃, ñ)).
inline double psi_intertwining_residual(const PsiCoefficients& c) {
  Mat2 M;
  M << c.m, c.n, c.mt, c.nt;
  Mat2 B;
  B << c.L.trace(), -c.L.det(), 1.0, 0.0;
  return (c.L.A * M - M * B).cwiseAbs().maxCoeff();
}

inline PsiCoefficients psi_coefficients(const AffineMap2& L, double a, const PsiFree& free = {}) {
  const double al = L.A(0, 0), be = L.A(0, 1), ga = L.A(1, 0), de = L.A(1, 1);
  const double u = L.t(0), v = L.t(1);
  const double delta_alg = 1.0 + L.det() - L.trace();
  const double scale = 1.0 + L.A.cwiseAbs().maxCoeff();

  PsiCoefficients c;
  c.L = L;
  c.a = a;
  auto force = [&] {
    c.n = be * c.mt - de * c.m;
    c.nt = ga * c.m - al * c.mt;
  };

  if (a != 0.0) {
    c.branch = 1;
    c.k = free.k.value_or(0.0);
    c.kt = free.kt.value_or(0.0);
    c.m = ((al - 1.0) * c.k + be * c.kt + u) / a;
    c.mt = (ga * c.k + (de - 1.0) * c.kt + v) / a;
    force();
    return c;
  }

  c.m = free.m.value_or(1.0);
  c.mt = free.mt.value_or(0.0);
  force();
  if (!near_zero(delta_alg, scale * scale)) {
    c.branch = 2;
    Mat2 B;
    B << al - 1.0, be, ga, de - 1.0;
    const Point k = B.inverse() * Point(-u, -v);
    c.k = k(0);
    c.kt = k(1);
    return c;
  }

  c.branch = 3;
  const double tol = 1e-12 * (scale + std::abs(u) + std::abs(v));
  auto nz = [&](double x) { return std::abs(x) > 1e-12 * scale; };
  if (!nz(al - 1.0) && !nz(be) && !nz(ga) && !nz(de - 1.0)) {
    if (std::abs(u) > tol || std::abs(v) > tol) {
      throw Error(ErrorCode::inconsistent, "A = I requires u = v = 0");
    }
    c.k = free.k.value_or(0.0);
    c.kt = free.kt.value_or(0.0);
    return c;
  }
  if (nz(al - 1.0) || nz(ga)) {
    if (std::abs((al - 1.0) * v - ga * u) > tol) {
      throw Error(ErrorCode::inconsistent, "condition (alpha-1) v = gamma u fails");
    }
    c.kt = free.kt.value_or(0.0);
    c.k = nz(al - 1.0) ? (u + be * c.kt) / (1.0 - al) : -(v + (de - 1.0) * c.kt) / ga;
  } else {
    if (std::abs((de - 1.0) * u - be * v) > tol) {
      throw Error(ErrorCode::inconsistent, "condition (delta-1) u = beta v fails");
    }
    c.k = free.k.value_or(0.0);
    c.kt = nz(de - 1.0) ? (v + ga * c.k) / (1.0 - de) : -(u + (al - 1.0) * c.k) / be;
  }
  if (psi_residual(c) > 1e-9 * (scale + std::abs(u) + std::abs(v) + std::abs(c.k) + std::abs(c.kt))) {
    throw Error(ErrorCode::inconsistent, "k-system has no solution");
  }
  return c;
}

}  // namespace affrep
