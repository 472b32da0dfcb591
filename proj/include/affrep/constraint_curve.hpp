#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "affrep/affine_dynamics.hpp"

namespace affrep {

/// Γ = p⁻¹(0) with p(r,s) = −4a(r+s) + (2−tr A)(r+s)² + (2+tr A)(r−s)² − 4ĉ₁, defined for det A = 1.
class ConstraintCurve {
 public:
  explicit ConstraintCurve(const AlgebraParams& params) : params_(params) {
    if (!params.det_is_one()) throw Error(ErrorCode::domain_error, "constraint curve requires det A = 1");
    if (!params.chat1) throw Error(ErrorCode::domain_error, "constraint curve requires the Casimir level ĉ₁");
  }

  const AlgebraParams& params() const { return params_; }
  double trA() const { return params_.trA; }
  double a() const { return params_.a; }
  double chat1() const { return *params_.chat1; }
  double delta() const { return params_.delta(); }
  std::optional<double> mu() const { return params_.mu(); }
  std::optional<double> chat() const { return params_.chat(); }

 private:
  AlgebraParams params_;
};

inline double evaluate_p(const ConstraintCurve& c, double r, double s) {
  const double sum = r + s;
  const double dif = r - s;
  return -4.0 * c.a() * sum + (2.0 - c.trA()) * sum * sum + (2.0 + c.trA()) * dif * dif - 4.0 * c.chat1();
}

/// Δ[(r+s−2μ)² + ((2+tr A)/Δ)(r−s)² − 4ĉ]; only defined for Δ = 2 − tr A ≠ 0.
inline double evaluate_p_centered(const ConstraintCurve& c, double r, double s) {
  const double d = c.delta();
  if (d == 0.0) throw Error(ErrorCode::domain_error, "centered form needs tr A != 2");
  const double mu = *c.mu();
  const double u = r + s - 2.0 * mu;
  const double v = r - s;
  return d * (u * u + (2.0 + c.trA()) / d * v * v - 4.0 * *c.chat());
}

struct AxesCrossings {
  double r_plus = 0.0;
  double r_minus = 0.0;
  bool real_crossings = false;
};

/// p(r,0) = 4(r² − a r − ĉ₁) for every tr A, so r± = ½[a ± √(a²+4ĉ₁)]; the s-axis is the mirror image.
inline AxesCrossings axes_crossings(const ConstraintCurve& c) {
  const double disc = c.a() * c.a() + 4.0 * c.chat1();
  if (disc < 0.0) return {};
  const double root = std::sqrt(disc);
  return {0.5 * (c.a() + root), 0.5 * (c.a() - root), true};
}

/// Γ ∩ {r = s}: Δr² − 2ar − ĉ₁ = 0, i.e. the points (μ ± √ĉ)(1,1) when Δ ≠ 0.
inline std::vector<Point> diagonal_points(const ConstraintCurve& c) {
  const double d = c.delta();
  std::vector<Point> out;
  if (near_zero(d, 1.0)) {
    if (c.a() != 0.0) {
      const double r = -c.chat1() / (2.0 * c.a());
      out.emplace_back(r, r);
    }
    return out;
  }
  const double disc = c.a() * c.a() + d * c.chat1();
  if (disc < 0.0) return out;
  const double root = std::sqrt(disc);
  out.emplace_back((c.a() + root) / d, (c.a() + root) / d);
  if (root > 0.0) out.emplace_back((c.a() - root) / d, (c.a() - root) / d);
  std::sort(out.begin(), out.end(), [](const Point& x, const Point& y) { return x.x() > y.x(); });
  return out;
}

enum class CurveShape { ellipse, hyperbola, parabola, parallel_lines, crossing_lines, line, point, empty };

inline const char* to_string(CurveShape s) {
  switch (s) {
    case CurveShape::ellipse: return "ellipse";
    case CurveShape::hyperbola: return "hyperbola";
    case CurveShape::parabola: return "parabola";
    case CurveShape::parallel_lines: return "parallel-lines";
    case CurveShape::crossing_lines: return "crossing-lines";
    case CurveShape::line: return "line";
    case CurveShape::point: return "point";
    case CurveShape::empty: return "empty";
  }
  return "?";
}

enum class QuadrantRelation { inside_positive, crosses_axes, outside, mixed };

inline const char* to_string(QuadrantRelation q) {
  switch (q) {
    case QuadrantRelation::inside_positive: return "inside-positive";
    case QuadrantRelation::crosses_axes: return "crosses-axes";
    case QuadrantRelation::outside: return "outside";
    case QuadrantRelation::mixed: return "mixed";
  }
  return "?";
}

enum class ComponentForm { ellipse, hyperbola_u, hyperbola_v, parabola, line_fixed_u, line_fixed_v, slanted_line, point };

/// One connected piece of Γ written in U = r+s, V = r−s. `at(t)` walks the component monotonically.
struct CurveComponent {
  ComponentForm form = ComponentForm::point;
  double u0 = 0.0, v0 = 0.0;  // centre / offset
  double cu = 0.0, cv = 0.0;  // semi-axes or slopes
  double sign = 1.0;          // which branch of a hyperbola or crossing pair

  bool closed() const { return form == ComponentForm::ellipse || form == ComponentForm::point; }

  Point at(double t) const {
    double u = u0, v = v0;
    switch (form) {
      case ComponentForm::ellipse: u += cu * std::cos(t); v += cv * std::sin(t); break;
      case ComponentForm::hyperbola_u: u += sign * cu * std::cosh(t); v += cv * std::sinh(t); break;
      case ComponentForm::hyperbola_v: u += cu * std::sinh(t); v += sign * cv * std::cosh(t); break;
      case ComponentForm::parabola: v = t; u += cu * t * t; break;
      case ComponentForm::line_fixed_u: v = t; break;
      case ComponentForm::line_fixed_v: u = t; break;
      case ComponentForm::slanted_line: v = t; u += sign * cu * t; break;
      case ComponentForm::point: break;
    }
    return {(u + v) / 2.0, (u - v) / 2.0};
  }

  /// Inverse of at() for a point of this component.
  double param_of(const Point& x) const {
    const double u = x.x() + x.y(), v = x.x() - x.y();
    switch (form) {
      case ComponentForm::ellipse: return std::atan2((v - v0) / cv, (u - u0) / cu);
      case ComponentForm::hyperbola_u: return std::asinh((v - v0) / cv);
      case ComponentForm::hyperbola_v: return std::asinh((u - u0) / cu);
      case ComponentForm::line_fixed_v: return u;
      case ComponentForm::point: return 0.0;
      default: return v;
    }
  }

  /// 0 when `x` (assumed on Γ) belongs to this component; larger values mean further away.
  double membership(const Point& x) const {
    const double u = x.x() + x.y(), v = x.x() - x.y();
    switch (form) {
      case ComponentForm::hyperbola_u: return sign * (u - u0) > 0.0 ? 0.0 : 1.0 + std::abs(u - u0);
      case ComponentForm::hyperbola_v: return sign * (v - v0) > 0.0 ? 0.0 : 1.0 + std::abs(v - v0);
      case ComponentForm::line_fixed_u: return std::abs(u - u0);
      case ComponentForm::line_fixed_v: return std::abs(v - v0);
      case ComponentForm::slanted_line: return std::abs((u - u0) - sign * cu * v);
      default: return 0.0;
    }
  }
};

struct CurveStructure {
  CurveShape shape = CurveShape::empty;
  std::vector<CurveComponent> components;
};

/// Decomposes Γ: with U' = r+s−2μ the curve reads Δ·U'² + (2+tr A)·V² = 4Δĉ when Δ ≠ 0,
/// and −4a(r+s) + 4V² = 4ĉ₁ when tr A = 2.
inline CurveStructure curve_structure(const ConstraintCurve& c) {
  CurveStructure out;
  const double d = c.delta();
  const double k = 2.0 + c.trA();
  auto add = [&](ComponentForm f, double u0, double v0, double cu, double cv, double sign) {
    out.components.push_back(CurveComponent{f, u0, v0, cu, cv, sign});
  };

  if (near_zero(d, 1.0)) {
    if (c.a() != 0.0) {
      out.shape = CurveShape::parabola;
      add(ComponentForm::parabola, -c.chat1() / c.a(), 0.0, 1.0 / c.a(), 0.0, 1.0);
    } else if (near_zero(c.chat1(), 1.0)) {
      out.shape = CurveShape::line;
      add(ComponentForm::line_fixed_v, 0.0, 0.0, 0.0, 0.0, 1.0);
    } else if (c.chat1() > 0.0) {
      out.shape = CurveShape::parallel_lines;
      const double w = std::sqrt(c.chat1());
      add(ComponentForm::line_fixed_v, 0.0, w, 0.0, 0.0, 1.0);
      add(ComponentForm::line_fixed_v, 0.0, -w, 0.0, 0.0, -1.0);
    }
    return out;
  }

  const double u0 = 2.0 * c.a() / d;
  const double rhs_scale = 4.0 * (std::abs(c.chat1()) + c.a() * c.a() / std::abs(d));
  double rhs = 4.0 * c.chat1() + 4.0 * c.a() * c.a() / d;
  if (near_zero(rhs, rhs_scale)) rhs = 0.0;

  if (near_zero(k, 1.0)) {
    if (rhs == 0.0) {
      out.shape = CurveShape::line;
      add(ComponentForm::line_fixed_u, u0, 0.0, 0.0, 0.0, 1.0);
    } else if (rhs / d > 0.0) {
      out.shape = CurveShape::parallel_lines;
      const double w = std::sqrt(rhs / d);
      add(ComponentForm::line_fixed_u, u0 + w, 0.0, 0.0, 0.0, 1.0);
      add(ComponentForm::line_fixed_u, u0 - w, 0.0, 0.0, 0.0, -1.0);
    }
    return out;
  }

  if (d > 0.0 && k > 0.0) {
    if (rhs > 0.0) {
      out.shape = CurveShape::ellipse;
      add(ComponentForm::ellipse, u0, 0.0, std::sqrt(rhs / d), std::sqrt(rhs / k), 1.0);
    } else if (rhs == 0.0) {
      out.shape = CurveShape::point;
      add(ComponentForm::point, u0, 0.0, 0.0, 0.0, 1.0);
    }
    return out;
  }
  if (d < 0.0 && k < 0.0) {
    // Negative definite form: mirror of the ellipse case.
    if (rhs < 0.0) {
      out.shape = CurveShape::ellipse;
      add(ComponentForm::ellipse, u0, 0.0, std::sqrt(rhs / d), std::sqrt(rhs / k), 1.0);
    } else if (rhs == 0.0) {
      out.shape = CurveShape::point;
      add(ComponentForm::point, u0, 0.0, 0.0, 0.0, 1.0);
    }
    return out;
  }

  if (rhs == 0.0) {
    out.shape = CurveShape::crossing_lines;
    const double slope = std::sqrt(-k / d);
    add(ComponentForm::slanted_line, u0, 0.0, slope, 0.0, 1.0);
    add(ComponentForm::slanted_line, u0, 0.0, slope, 0.0, -1.0);
    return out;
  }
  out.shape = CurveShape::hyperbola;
  if (rhs / d > 0.0) {
    const double cu = std::sqrt(rhs / d), cv = std::sqrt(-rhs / k);
    add(ComponentForm::hyperbola_u, u0, 0.0, cu, cv, 1.0);
    add(ComponentForm::hyperbola_u, u0, 0.0, cu, cv, -1.0);
  } else {
    const double cu = std::sqrt(-rhs / d), cv = std::sqrt(rhs / k);
    add(ComponentForm::hyperbola_v, u0, 0.0, cu, cv, 1.0);
    add(ComponentForm::hyperbola_v, u0, 0.0, cu, cv, -1.0);
  }
  return out;
}

enum class ComponentRelation { inside, crossing, outside };

struct CurveClassification {
  CurveShape shape = CurveShape::empty;
  QuadrantRelation quadrant = QuadrantRelation::outside;
  std::vector<ComponentRelation> components;
};

/// Points where Γ meets the closed non-negative half-axes (tangency included).
inline std::vector<Point> nonnegative_axis_points(const ConstraintCurve& c, double tol = 1e-12) {
  std::vector<Point> pts;
  const auto x = axes_crossings(c);
  if (!x.real_crossings) return pts;
  for (double r : {x.r_plus, x.r_minus}) {
    if (r < -tol) continue;
    const double rr = std::max(r, 0.0);
    pts.emplace_back(rr, 0.0);
    if (rr > 0.0) pts.emplace_back(0.0, rr);
    if (x.r_plus == x.r_minus) break;
  }
  return pts;
}

inline std::size_t component_of(const CurveStructure& cs, const Point& x) {
  std::size_t best = 0;
  double score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cs.components.size(); ++i) {
    const double m = cs.components[i].membership(x);
    if (m < score) {
      score = m;
      best = i;
    }
  }
  return best;
}

/// Components that meet the non-negative axes are "crossing"; any other component lies
/// entirely inside ℝ²₍>0₎ or entirely outside ℝ²₍≥0₎, so one representative point decides it.
inline CurveClassification classify_curve(const ConstraintCurve& c) {
  const CurveStructure cs = curve_structure(c);
  CurveClassification out;
  out.shape = cs.shape;
  out.components.assign(cs.components.size(), ComponentRelation::outside);
  if (cs.components.empty()) return out;

  std::vector<bool> crossing(cs.components.size(), false);
  for (const Point& p : nonnegative_axis_points(c)) crossing[component_of(cs, p)] = true;
  std::size_t inside = 0, crosses = 0;
  for (std::size_t i = 0; i < cs.components.size(); ++i) {
    if (crossing[i]) {
      out.components[i] = ComponentRelation::crossing;
      ++crosses;
    } else if (strictly_positive(cs.components[i].at(0.0))) {
      out.components[i] = ComponentRelation::inside;
      ++inside;
    }
  }
  if (inside && crosses) out.quadrant = QuadrantRelation::mixed;
  else if (inside) out.quadrant = QuadrantRelation::inside_positive;
  else if (crosses) out.quadrant = QuadrantRelation::crosses_axes;
  else out.quadrant = QuadrantRelation::outside;
  return out;
}

struct CurveSample {
  int component = 0;
  double r = 0.0;
  double s = 0.0;
};

namespace detail {
inline double open_extent(const CurveComponent& comp, double extent) {
  switch (comp.form) {
    case ComponentForm::hyperbola_u:
    case ComponentForm::hyperbola_v: return extent;
    default: return extent * (1.0 + std::abs(comp.u0) + std::abs(comp.v0) + std::abs(comp.cu));
  }
}
}  // namespace detail

/// `count` points per component, ordered along it. Closed components start and end at the
/// same point; open ones cover parameter range [−extent, extent] (scaled for lines/parabolas).
inline std::vector<CurveSample> sample_curve(const ConstraintCurve& c, int count, double extent = 3.0) {
  if (count < 2) throw Error(ErrorCode::domain_error, "sample_curve needs count >= 2");
  const CurveStructure cs = curve_structure(c);
  if (cs.components.empty()) throw Error(ErrorCode::empty_curve, "constraint curve is empty");
  std::vector<CurveSample> out;
  out.reserve(cs.components.size() * static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < cs.components.size(); ++i) {
    const CurveComponent& comp = cs.components[i];
    const double lo = comp.closed() ? 0.0 : -detail::open_extent(comp, extent);
    const double hi = comp.closed() ? 2.0 * std::numbers::pi : detail::open_extent(comp, extent);
    for (int j = 0; j < count; ++j) {
      const double t = j == count - 1 ? hi : lo + (hi - lo) * j / (count - 1);
      const Point p = comp.at(comp.form == ComponentForm::ellipse && j == count - 1 ? lo : t);
      out.push_back({static_cast<int>(i), p.x(), p.y()});
    }
  }
  return out;
}

/// Point of Γ closest to `target` (grid search per component, then golden-section refinement).
inline Point nearest_point(const ConstraintCurve& c, const Point& target, double extent = 6.0) {
  const CurveStructure cs = curve_structure(c);
  if (cs.components.empty()) throw Error(ErrorCode::empty_curve, "constraint curve is empty");
  Point best = cs.components.front().at(0.0);
  double best_d = (best - target).squaredNorm();
  constexpr int grid = 4000;
  for (const auto& comp : cs.components) {
    const double lo = comp.closed() ? 0.0 : -detail::open_extent(comp, extent);
    const double hi = comp.closed() ? 2.0 * std::numbers::pi : detail::open_extent(comp, extent);
    const double step = (hi - lo) / grid;
    auto dist = [&](double t) { return (comp.at(t) - target).squaredNorm(); };
    double tb = lo, db = dist(lo);
    for (int j = 1; j <= grid; ++j) {
      const double t = lo + step * j;
      const double dt = dist(t);
      if (dt < db) { db = dt; tb = t; }
    }
    double x0 = tb - step, x1 = tb + step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && x1 - x0 > 1e-15 * (1.0 + std::abs(tb)); ++it) {
      const double m1 = x1 - g * (x1 - x0), m2 = x0 + g * (x1 - x0);
      if (dist(m1) < dist(m2)) x1 = m2; else x0 = m1;
    }
    const double t = 0.5 * (x0 + x1);
    if (dist(t) < best_d) {
      best_d = dist(t);
      best = comp.at(t);
    }
  }
  return best;
}

}  // namespace affrep
