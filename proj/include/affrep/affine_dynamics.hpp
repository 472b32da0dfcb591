#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "affrep/core.hpp"

namespace affrep {

/// Planar affine map x -> A x + t.
struct AffineMap2 {
  Mat2 A = Mat2::Identity();
  Point t = Point::Zero();

  AffineMap2() = default;
  AffineMap2(const Mat2& linear, const Point& translation) : A(linear), t(translation) {}
  AffineMap2(double a11, double a12, double a21, double a22, double t1, double t2) {
    A << a11, a12, a21, a22;
    t << t1, t2;
  }

  static AffineMap2 identity() { return {}; }

  Point operator()(const Point& x) const { return A * x + t; }

  double trace() const { return A.trace(); }
  double det() const { return A.determinant(); }
  bool finite() const { return A.allFinite() && t.allFinite(); }
  bool invertible() const { return std::abs(det()) > 1e-14 * std::max(1.0, A.cwiseAbs().maxCoeff()); }

  AffineMap2 inverse() const {
    if (!invertible()) throw Error(ErrorCode::not_invertible, "affine map has singular linear part");
    const Mat2 inv = A.inverse();
    return {inv, -inv * t};
  }
};

/// f ∘ g
inline AffineMap2 compose(const AffineMap2& f, const AffineMap2& g) { return {f.A * g.A, f.A * g.t + f.t}; }

/// n-fold composition by repeated squaring.
inline AffineMap2 power_by_composition(const AffineMap2& map, unsigned n) {
  AffineMap2 result;
  AffineMap2 base = map;
  while (n > 0) {
    if (n & 1u) result = compose(base, result);
    base = compose(base, base);
    n >>= 1u;
  }
  return result;
}

/// (tr A, det A, a) of an algebra C_{L,a}, plus the optional Casimir level ĉ₁ (φ(Ĉ) = 4ĉ₁·I).
struct AlgebraParams {
  double trA = 0.0;
  double detA = 0.0;
  double a = 0.0;
  std::optional<double> chat1;

  /// 1 + det A − tr A; vanishes exactly when 1 is an eigenvalue of A.
  double delta_alg() const { return 1.0 + detA - trA; }

  bool det_is_one(double tol = 1e-12) const { return std::abs(detA - 1.0) <= tol; }

  // The quantities below assume det A = 1.
  double delta() const { return 2.0 - trA; }

  std::optional<double> mu() const {
    if (delta() == 0.0) return std::nullopt;
    return a / delta();
  }

  std::optional<double> chat() const {
    auto m = mu();
    if (!m || !chat1) return std::nullopt;
    return *m * *m + *chat1 / delta();
  }

  /// det A = 1 algebra whose Casimir level is given through ĉ instead of ĉ₁.
  static AlgebraParams from_chat(double trA, double a, double chat) {
    AlgebraParams p{trA, 1.0, a, std::nullopt};
    const double d = p.delta();
    if (d == 0.0) throw Error(ErrorCode::domain_error, "ĉ is undefined when tr A = 2");
    const double m = a / d;
    p.chat1 = d * (chat - m * m);
    return p;
  }
};

/// L̂(x, y) = (tr A·x − det A·y + a, x)
inline AffineMap2 lhat_from_params(const AlgebraParams& p) { return {p.trA, -p.detA, 1.0, 0.0, p.a, 0.0}; }

inline Point iterate(const AffineMap2& map, Point x, unsigned n, double bound = Tolerances{}.magnitude_bound) {
  for (unsigned k = 1; k <= n; ++k) {
    x = map(x);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > bound) {
      throw Error(ErrorCode::overflow, "iterate exceeded magnitude bound at step " + std::to_string(k), k);
    }
  }
  return x;
}

inline bool is_parabolic(const AlgebraParams& p) {
  return std::abs(p.detA - 1.0) <= 1e-12 && std::abs(p.trA - 2.0) <= 1e-12;
}

/// L̂ⁿ in closed form. Generic branch uses the eigenvalues λ± of ((tr A, −det A), (1, 0));
/// the parabolic branch (det A = 1, tr A = 2) uses the explicit polynomial form.
inline AffineMap2 power_closed_form(const AlgebraParams& p, unsigned n) {
  const double nd = static_cast<double>(n);
  if (is_parabolic(p)) {
    return {1.0 + nd, -nd, nd, 1.0 - nd, p.a * nd / 2.0 * (nd + 1.0), p.a * nd / 2.0 * (nd - 1.0)};
  }
  const double disc = p.trA * p.trA - 4.0 * p.detA;
  const double scale = p.trA * p.trA + 4.0 * std::abs(p.detA);
  if (near_zero(disc, scale) || near_zero(p.trA - 1.0 - p.detA, 1.0 + std::abs(p.detA))) {
    throw Error(ErrorCode::unsupported_branch, "repeated eigenvalue or eigenvalue 1; use iterate()");
  }
  const Complex root = std::sqrt(Complex(disc, 0.0));
  const Complex lp = (p.trA + root) / 2.0;
  const Complex lm = (p.trA - root) / 2.0;
  const Complex gap = lp - lm;
  const int k = static_cast<int>(n);
  auto pw = [](Complex z, int e) { return std::pow(z, e); };
  auto diff = [&](int e) { return (pw(lp, e) - pw(lm, e)) / gap; };
  const double q = p.detA;

  Mat2 A;
  A << diff(k + 1).real(), (-q * diff(k)).real(), diff(k).real(), (-q * diff(k - 1)).real();
  const Complex fp = (1.0 - pw(lp, k)) / (1.0 - lp);
  const Complex fm = (1.0 - pw(lm, k)) / (1.0 - lm);
  Point t;
  t << (p.a * (lp * fp - lm * fm) / gap).real(), (p.a * (fp - fm) / gap).real();
  return {A, t};
}

enum class FixedSetKind { point, line, plane, none };

struct FixedLine {
  Point point;
  Point direction;  // unit length
};

struct EigenFixed {
  std::array<Complex, 2> eigenvalues;
  FixedSetKind kind = FixedSetKind::none;
  std::optional<Point> fixed_point;
  std::optional<FixedLine> fixed_line;
};

inline EigenFixed eigen_and_fixed(const AffineMap2& map) {
  EigenFixed out;
  const double tr = map.trace();
  const double det = map.det();
  const Complex root = std::sqrt(Complex(tr * tr - 4.0 * det, 0.0));
  out.eigenvalues = {(tr + root) / 2.0, (tr - root) / 2.0};

  const Mat2 B = Mat2::Identity() - map.A;
  const double bscale = std::max(1.0, B.cwiseAbs().maxCoeff());
  if (std::abs(B.determinant()) > 1e-12 * bscale * bscale) {
    out.kind = FixedSetKind::point;
    out.fixed_point = B.inverse() * map.t;
    return out;
  }
  const double tscale = 1.0 + map.t.norm();
  if (B.cwiseAbs().maxCoeff() <= 1e-12) {
    out.kind = map.t.norm() <= 1e-12 ? FixedSetKind::plane : FixedSetKind::none;
    return out;
  }
  // Rank one: null direction is orthogonal to the dominant row.
  Eigen::Index row = B.row(0).norm() >= B.row(1).norm() ? 0 : 1;
  Point dir(-B(row, 1), B(row, 0));
  dir.normalize();
  const Point x = B.completeOrthogonalDecomposition().solve(map.t);
  if ((B * x - map.t).norm() <= 1e-10 * tscale) {
    out.kind = FixedSetKind::line;
    out.fixed_line = FixedLine{x, dir};
  }
  return out;
}

enum class OrbitKind { loop, string, forward_ray, two_sided_window };

inline const char* to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::loop: return "loop";
    case OrbitKind::string: return "string";
    case OrbitKind::forward_ray: return "forward-ray";
    case OrbitKind::two_sided_window: return "two-sided-window";
  }
  return "?";
}

/// Consecutive points satisfy points[i+1] = L̂(points[i]).
struct OrbitSegment {
  std::vector<Point> points;
  OrbitKind kind = OrbitKind::loop;
};

struct PeriodicOrbit {
  unsigned period = 0;
  OrbitSegment orbit;
};

/// Smallest k ≤ nmax with |L̂ᵏ(x0) − x0| < tol.
inline std::optional<PeriodicOrbit> find_periodic_orbit(const AlgebraParams& params, const Point& x0, unsigned nmax,
                                                        double tol = Tolerances{}.orbit,
                                                        double bound = Tolerances{}.magnitude_bound) {
  if (nmax < 1 || !(tol > 0.0)) throw Error(ErrorCode::domain_error, "find_periodic_orbit needs nmax >= 1 and tol > 0");
  const AffineMap2 lhat = lhat_from_params(params);
  std::vector<Point> pts{x0};
  Point x = x0;
  for (unsigned k = 1; k <= nmax; ++k) {
    x = lhat(x);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > bound) return std::nullopt;
    if ((x - x0).norm() < tol) return PeriodicOrbit{k, OrbitSegment{pts, OrbitKind::loop}};
    pts.push_back(x);
  }
  return std::nullopt;
}

/// Solves first-coordinate(L̂ⁿ⁻¹(x, 0)) = 0 for x and returns the n-point string
/// (x,0) -> ... -> (0, d̃) when x > 0, d̃ > 0 and every interior point is strictly positive.
inline std::optional<OrbitSegment> find_kstring(const AlgebraParams& params, unsigned n,
                                                double tol = Tolerances{}.relation) {
  if (n < 1) throw Error(ErrorCode::domain_error, "string length must be at least 1");
  if (params.detA == 0.0) throw Error(ErrorCode::domain_error, "find_kstring requires det A != 0");
  const AffineMap2 lhat = lhat_from_params(params);
  const AffineMap2 power = power_by_composition(lhat, n - 1);
  const double coef = power.A(0, 0);
  if (std::abs(coef) <= 1e-14 * std::max(1.0, power.A.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::singular_system, "coefficient of x vanishes for n = " + std::to_string(n));
  }
  const double x = -power.t(0) / coef;
  if (!(x > 0.0)) return std::nullopt;

  OrbitSegment seg{{Point(x, 0.0)}, OrbitKind::string};
  Point cur = seg.points.front();
  for (unsigned k = 1; k < n; ++k) {
    cur = lhat(cur);
    seg.points.push_back(cur);
  }
  Point& last = seg.points.back();
  const double scale = 1.0 + std::abs(x) + std::abs(last.y());
  if (std::abs(last.x()) > tol * scale) return std::nullopt;
  last.x() = 0.0;
  if (!(last.y() > 0.0)) return std::nullopt;
  for (std::size_t i = 1; i + 1 < seg.points.size(); ++i) {
    if (!strictly_positive(seg.points[i])) return std::nullopt;
  }
  return seg;
}

/// θ with tr A = 2cosh 2θ (tr A > 2) or tr A = 2cos 2θ (|tr A| < 2, θ ∈ (0, π/2)).
inline double theta_of(const AlgebraParams& p) {
  if (p.trA > 2.0) return std::acosh(p.trA / 2.0) / 2.0;
  if (std::abs(p.trA) < 2.0) return std::acos(p.trA / 2.0) / 2.0;
  throw Error(ErrorCode::domain_error, "no angle parametrization for |tr A| = 2 or tr A < -2");
}

/// Start x of an n-string when det A = 1, tr A = 2cosh 2θ: x = 2μ sinhθ sinh((n−1)θ)/cosh(nθ).
inline double hyperbolic_string_start(const AlgebraParams& p, unsigned n) {
  if (!p.det_is_one() || !(p.trA > 2.0)) throw Error(ErrorCode::domain_error, "hyperbolic string formula needs det A = 1, tr A > 2");
  const double th = theta_of(p);
  const double nd = static_cast<double>(n);
  return 2.0 * *p.mu() * std::sinh(th) * std::sinh((nd - 1.0) * th) / std::cosh(nd * th);
}

namespace detail {
inline void require_det_one_chat_positive(const AlgebraParams& p, const char* who) {
  if (!p.det_is_one()) throw Error(ErrorCode::domain_error, std::string(who) + " requires det A = 1");
  auto c = p.chat();
  if (!c || !(*c > 0.0)) throw Error(ErrorCode::domain_error, std::string(who) + " requires ĉ > 0");
}
}  // namespace detail

/// Branch i ∈ {1,2} of the constraint curve for det A = 1, ĉ > 0, tr A = 2cosh 2θ:
/// x⃗ᵢ(β) = (μ ± √ĉ coshβ/coshθ, μ ± √ĉ cosh(β−2θ)/coshθ), with L̂(x⃗ᵢ(β)) = x⃗ᵢ(β+2θ).
inline Point hyperbolic_parametrization(const AlgebraParams& p, double beta, int branch) {
  detail::require_det_one_chat_positive(p, "hyperbolic_parametrization");
  if (!(p.trA > 2.0)) throw Error(ErrorCode::domain_error, "hyperbolic_parametrization requires tr A > 2");
  if (branch != 1 && branch != 2) throw Error(ErrorCode::domain_error, "branch must be 1 or 2");
  const double th = theta_of(p);
  const double mu = *p.mu();
  const double root = std::sqrt(*p.chat());
  const double sign = branch == 1 ? 1.0 : -1.0;
  return {mu + sign * root * std::cosh(beta) / std::cosh(th), mu + sign * root * std::cosh(beta - 2.0 * th) / std::cosh(th)};
}

/// Elliptic counterpart (|tr A| < 2, tr A = 2cos 2θ): L̂ acts as β -> β + 2θ on the ellipse.
inline Point elliptic_parametrization(const AlgebraParams& p, double beta) {
  detail::require_det_one_chat_positive(p, "elliptic_parametrization");
  if (!(std::abs(p.trA) < 2.0)) throw Error(ErrorCode::domain_error, "elliptic_parametrization requires |tr A| < 2");
  const double th = theta_of(p);
  const double mu = *p.mu();
  const double root = std::sqrt(*p.chat());
  return {mu + root * std::cos(beta) / std::cos(th), mu + root * std::cos(beta - 2.0 * th) / std::cos(th)};
}

}  // namespace affrep
