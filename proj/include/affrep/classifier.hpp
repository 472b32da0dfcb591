#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "affrep/affine_dynamics.hpp"
#include "affrep/constraint_curve.hpp"
#include "affrep/param_bridge.hpp"

namespace affrep {

enum class Topology { empty, point, circle, plane_pair, compact, two_sheets, one_sheet, singular, mixed };

inline const char* to_string(Topology t) {
  switch (t) {
    case Topology::empty: return "empty";
    case Topology::point: return "point";
    case Topology::circle: return "circle";
    case Topology::plane_pair: return "plane-pair";
    case Topology::compact: return "compact";
    case Topology::two_sheets: return "two-sheeted";
    case Topology::one_sheet: return "one-sheeted";
    case Topology::singular: return "singular";
    case Topology::mixed: return "mixed";
  }
  return "?";
}

struct SurfaceClass {
  std::string code;
  std::string geometry;
  std::string gamma_quadrant;  // last table column; empty for α₁ < 0 rows
  Topology topology = Topology::empty;
  std::optional<double> c, mu;
};

namespace detail {

enum class Cmp { less, equal, greater };

inline Cmp compare(double x, double y, double scale) {
  if (std::abs(x - y) <= 1e-12 * std::max(1.0, scale)) return Cmp::equal;
  return x < y ? Cmp::less : Cmp::greater;
}

inline SurfaceClass make_class(const char* code, const char* geometry, const char* gamma, Topology t) {
  return {code, geometry, gamma, t, std::nullopt, std::nullopt};
}

}  // namespace detail

/// Sign and ratio tests of the three tables (α₁ > 0, α₁ = 0, α₁ < 0). Equality of c with 0
/// and of μ/√c with ±1 is decided with relative tolerance 1e-12 (μ² is compared against c).
inline SurfaceClass classify_surface(const SurfaceSpec& s) {
  using detail::Cmp;
  using detail::make_class;
  const double a0 = s.alpha0, a1 = s.alpha1;
  const char* ellipse = "{Ellipse} ∩ R+0";
  if (!std::isfinite(a0) || !std::isfinite(a1) || !std::isfinite(s.c0)) throw Error(ErrorCode::domain_error, "surface parameters must be finite");

  if (a1 == 0.0) {
    SurfaceClass out;
    if (a0 == 0.0) {
      out = s.c0 < 0.0 ? make_class("Z.1", "∅", "∅", Topology::empty)
                       : make_class("Z.2", "{(x,y,√c0)} ∪ {(x,y,−√c0)}", "Non-compact.", Topology::plane_pair);
    } else if (a0 > 0.0) {
      if (s.c0 < 0.0) out = make_class("Z.3", "∅", "∅", Topology::empty);
      else if (s.c0 == 0.0) out = make_class("Z.4", "{(0,0,0)}", "{(0,0)}", Topology::point);
      else out = make_class("Z.5", "Sphere", "Compact.", Topology::compact);
    } else {
      if (s.c0 < 0.0) out = make_class("Z.6", "One sheeted hyperboloid", "Non-compact.", Topology::one_sheet);
      else if (s.c0 == 0.0) out = make_class("Z.7", "Singular hyperboloid", "Non-compact.", Topology::singular);
      else out = make_class("Z.8", "Two sheeted hyperboloid", "Non-compact.", Topology::two_sheets);
    }
    return out;
  }

  const double mu = -a0 / a1;
  const double mu2 = mu * mu;
  const double c = mu2 + 2.0 * s.c0 / a1;
  const double cscale = mu2 + std::abs(2.0 * s.c0 / a1);
  const Cmp csign = detail::compare(c, 0.0, cscale);
  const Cmp mu_vs_c = detail::compare(mu2, c, cscale);  // μ² vs c: |μ/√c| vs 1 when c > 0
  SurfaceClass out;

  if (a1 > 0.0) {
    if (csign == Cmp::less) {
      out = make_class("P.1", "∅", "∅", Topology::empty);
    } else if (csign == Cmp::equal) {
      if (a0 == 0.0) out = make_class("P.2", "{(0,0,0)}", "{(0,0)}", Topology::point);
      else if (a0 < 0.0) out = make_class("P.3", "{(x,y,0): x²+y² = |α0|/α1}", "{(|α0|/α1)(1,1)}", Topology::circle);
      else out = make_class("P.4", "∅", "∅", Topology::empty);
    } else if (a0 > 0.0) {  // μ < 0
      if (mu_vs_c == Cmp::greater) out = make_class("P.5", "∅", "∅", Topology::empty);
      else if (mu_vs_c == Cmp::equal) out = make_class("P.6", "{(0,0,0)}", "{(0,0)}", Topology::point);
      else out = make_class("P.7", "Sphere", ellipse, Topology::compact);
    } else if (a0 == 0.0) {
      out = make_class("P.7", "Sphere", ellipse, Topology::compact);
    } else {  // μ > 0
      if (mu_vs_c == Cmp::less) out = make_class("P.8", "Sphere", ellipse, Topology::compact);
      else if (mu_vs_c == Cmp::equal) out = make_class("P.9", "Surface with singularity", ellipse, Topology::compact);
      else out = make_class("P.10", "Torus", ellipse, Topology::compact);
    }
  } else {
    if (a0 < 0.0) {  // μ < 0
      if (csign != Cmp::greater) out = make_class("N.1", "Two sheeted cone", "", Topology::two_sheets);
      else if (mu_vs_c == Cmp::greater) out = make_class("N.2", "Two sheeted cone", "", Topology::two_sheets);
      else if (mu_vs_c == Cmp::equal) out = make_class("N.3", "One sheeted singular cone", "", Topology::singular);
      else out = make_class("N.4", "One sheeted cone", "", Topology::one_sheet);
    } else if (a0 == 0.0) {
      if (csign == Cmp::less) out = make_class("N.5", "Two sheeted cone", "", Topology::two_sheets);
      else if (csign == Cmp::equal) out = make_class("N.6", "One sheeted singular cone", "", Topology::singular);
      else out = make_class("N.7", "One sheeted cone", "", Topology::one_sheet);
    } else {  // μ > 0
      if (csign == Cmp::less) out = make_class("N.8", "Two sheeted cone", "", Topology::two_sheets);
      else if (csign == Cmp::equal) out = make_class("N.9", "One sheeted cone ∪ sphere (singular)", "", Topology::singular);
      else if (mu_vs_c == Cmp::less) out = make_class("N.10", "One sheeted cone", "", Topology::one_sheet);
      else if (mu_vs_c == Cmp::equal) out = make_class("N.11", "One sheeted cone ∪ {(0,0,0)}", "", Topology::mixed);
      else out = make_class("N.12", "One sheeted cone ∪ sphere", "", Topology::mixed);
    }
  }
  out.c = c;
  out.mu = mu;
  return out;
}

/// Moduli |W| of the one-dimensional representations of a degenerate class (phase is free).
/// Empty for ∅ rows, {0} for a point, {√(|α0|/|α1|)} for the circle.
inline std::vector<double> degenerate_reps(const SurfaceClass& cls, const SurfaceSpec& s) {
  switch (cls.topology) {
    case Topology::empty: return {};
    case Topology::point: return {0.0};
    case Topology::circle: return {std::sqrt(std::abs(s.alpha0) / std::abs(s.alpha1))};
    default: throw Error(ErrorCode::unsupported_case, cls.code + " is not a degenerate class");
  }
}

/// θ/π = p/q with q ≤ nmax, found among the continued-fraction convergents.
inline std::optional<int> rational_denominator(double ratio, int nmax, double tol = 1e-9) {
  double x = ratio;
  long long p0 = 1, q0 = 0, p1 = static_cast<long long>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  for (int it = 0; it < 64; ++it) {
    if (q1 > nmax) break;
    if (std::abs(static_cast<double>(q1) * ratio - static_cast<double>(p1)) <= tol) return static_cast<int>(q1);
    if (frac < 1e-15) break;
    const double inv = 1.0 / frac;
    const double aterm = std::floor(inv);
    frac = inv - aterm;
    const long long ai = static_cast<long long>(aterm);
    const long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
  }
  return std::nullopt;
}

struct ExistenceProfile {
  std::string regime;  // empty, degenerate, sphere, critical-torus, torus, two-sheeted, one-sheeted, singular, mixed, ...
  bool empty = false;
  bool scalar_only = false;
  bool finite_loops = false;
  bool finite_strings = false;
  bool one_sided = false;
  bool two_sided = false;
  bool two_sided_if_irrational = false;  // torus with θ/π rational below the cap
  bool exists_in_limit = false;          // touching point only reached in the limit
  bool scalar_family = false;            // every (r,r) is a fixed point
  bool one_dimensional_only = false;     // hypotheses of the one-dimensionality result hold
  std::optional<int> rational_q;
  std::vector<int> loop_dims;
  std::vector<int> string_dims;
  std::vector<double> scalar_moduli;
  std::optional<Point> loop_seed;
  std::vector<Point> transmitter_seeds, receiver_seeds, two_sided_seeds;
  std::vector<std::string> witnesses;
};

struct ExistenceOptions {
  int nmax = 12;
  int depth = 50;  // iterations a one-/two-sided seed must survive
  Tolerances tol{};
};

namespace detail {

inline bool survives(const AffineMap2& f, Point x, int depth, double bound) {
  for (int k = 0; k < depth; ++k) {
    x = f(x);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > bound || !strictly_positive(x)) return false;
  }
  return true;
}

/// Closed intervals of length < period folded onto [0, period): is there an uncovered gap?
inline bool fold_leaves_gap(std::vector<std::pair<double, double>> iv, double period, double* gap_mid) {
  std::vector<std::pair<double, double>> f;
  for (auto [lo, hi] : iv) {
    if (hi - lo >= period) return false;
    double s = std::fmod(lo, period);
    if (s < 0) s += period;
    const double e = s + (hi - lo);
    if (e > period) {
      f.emplace_back(s, period);
      f.emplace_back(0.0, e - period);
    } else {
      f.emplace_back(s, e);
    }
  }
  std::sort(f.begin(), f.end());
  const double eps = 1e-12 * period;
  double reach = f.front().second;
  double start = f.front().first;
  double best = 0.0, best_mid = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (f[i].first - reach > best) {
      best = f[i].first - reach;
      best_mid = (f[i].first + reach) / 2.0;
    }
    reach = std::max(reach, f[i].second);
  }
  const double wrap = period - reach + start;
  if (wrap > best) {
    best = wrap;
    best_mid = std::fmod(reach + wrap / 2.0, period);
  }
  if (gap_mid) *gap_mid = best_mid;
  return best > eps;
}

inline void compact_elliptic(const AlgebraParams& p, const ConstraintCurve& curve, const ExistenceOptions& opt,
                             ExistenceProfile& out) {
  const double th = theta_of(p);
  const double mu = *p.mu();
  const double root = std::sqrt(*p.chat());
  const double ratio = mu / root;
  out.regime = ratio <= 1.0 ? "sphere" : (ratio <= 1.0 / std::cos(th) ? "critical-torus" : "torus");
  out.witnesses.push_back("mu/sqrt(chat) = " + std::to_string(ratio) + ", 1/cos(theta) = " + std::to_string(1.0 / std::cos(th)));

  out.rational_q = rational_denominator(th / std::numbers::pi, opt.nmax);
  const double kappa = mu * std::cos(th) / root;
  const bool inside = classify_curve(curve).quadrant == QuadrantRelation::inside_positive;
  if (out.rational_q) {
    const int q = *out.rational_q;
    const double period = 2.0 * std::numbers::pi / q;
    bool ok = false;
    double mid = 0.0;
    if (kappa > 1.0) {
      ok = true;
    } else if (kappa > -1.0) {
      const double phi = std::acos(kappa);
      const double pi = std::numbers::pi;
      ok = fold_leaves_gap({{pi - phi, pi + phi}, {pi + 2.0 * th - phi, pi + 2.0 * th + phi}}, period, &mid);
    }
    if (ok) {
      for (int n = q; n <= opt.nmax; n += q) out.loop_dims.push_back(n);
      out.loop_seed = elliptic_parametrization(p, mid);
      out.witnesses.push_back("e^{2in theta} = 1 for n = multiples of " + std::to_string(q));
    }
  } else if (inside) {
    out.two_sided = true;
    out.witnesses.push_back("theta/pi irrational below nmax and the curve lies in the open quadrant");
  }
  if (inside && out.rational_q) out.two_sided_if_irrational = true;
}

inline void search_strings(const AlgebraParams& p, const ExistenceOptions& opt, ExistenceProfile& out) {
  for (int n = 2; n <= opt.nmax; ++n) {
    try {
      const auto seg = find_kstring(p, static_cast<unsigned>(n), opt.tol.relation);
      if (seg && string_level_matches(p, *seg)) out.string_dims.push_back(n);
    } catch (const Error&) {
    }
  }
}

/// Start points that every two-sided orbit must meet: the diagonal tips, then, on each component
/// that reaches the axes, the arc from an axis point P to L̂(P) (L̂ moves monotonically along a
/// component, so an orbit that avoids the axes has a point in that arc); components clear of the
/// axes are sampled whole.
inline std::vector<Point> two_sided_candidates(const AlgebraParams& p, const ConstraintCurve& curve, int per_arc = 257) {
  std::vector<Point> out = diagonal_points(curve);
  const CurveStructure cs = curve_structure(curve);
  if (cs.components.empty()) return out;
  const AffineMap2 f = lhat_from_params(p);
  std::vector<bool> crossing(cs.components.size(), false);
  for (const Point& P : nonnegative_axis_points(curve)) {
    const std::size_t c = component_of(cs, P);
    crossing[c] = true;
    const CurveComponent& comp = cs.components[c];
    const Point Q = f(P);
    if (component_of(cs, Q) != c) continue;
    double t0 = comp.param_of(P), t1 = comp.param_of(Q);
    if (comp.form == ComponentForm::ellipse) {
      // shortest way round
      while (t1 - t0 > std::numbers::pi) t1 -= 2.0 * std::numbers::pi;
      while (t0 - t1 > std::numbers::pi) t1 += 2.0 * std::numbers::pi;
    }
    for (int k = 1; k < per_arc; ++k) out.push_back(comp.at(t0 + (t1 - t0) * k / per_arc));
  }
  for (const auto& smp : sample_curve(curve, per_arc, 4.0)) {
    if (!crossing[static_cast<std::size_t>(smp.component)]) out.emplace_back(smp.r, smp.s);
  }
  return out;
}

inline void search_infinite(const AlgebraParams& p, const ConstraintCurve& curve, const ExistenceOptions& opt,
                            ExistenceProfile& out) {
  const AffineMap2 f = lhat_from_params(p);
  const bool inv = f.invertible();
  const AffineMap2 b = inv ? f.inverse() : f;
  const double bound = opt.tol.magnitude_bound;
  const auto x = axes_crossings(curve);
  if (x.real_crossings) {
    for (double r : {x.r_plus, x.r_minus}) {
      if (!(r > 0.0)) continue;
      if (survives(f, Point(r, 0.0), opt.depth, bound)) out.transmitter_seeds.emplace_back(r, 0.0);
      if (inv && survives(b, Point(0.0, r), opt.depth, bound)) out.receiver_seeds.emplace_back(0.0, r);
      if (x.r_plus == x.r_minus) break;
    }
  }
  out.one_sided = !out.transmitter_seeds.empty() || !out.receiver_seeds.empty();
  if (!inv) return;

  // Two-sided: one surviving non-fixed point per component, tips first.
  const CurveStructure cs = curve_structure(curve);
  std::vector<bool> done(cs.components.size(), false);
  for (const Point& y : two_sided_candidates(p, curve)) {
    if (!strictly_positive(y)) continue;
    const std::size_t c = component_of(cs, y);
    if (done[c]) continue;
    if ((f(y) - y).norm() <= opt.tol.orbit * (1.0 + y.norm())) continue;
    if (survives(f, y, opt.depth, bound) && survives(b, y, opt.depth, bound)) {
      done[c] = true;
      out.two_sided_seeds.push_back(y);
    }
  }
  out.two_sided = !out.two_sided_seeds.empty();
}

}  // namespace detail

/// Which representations exist for a det A = 1 algebra, computed from Γ and L̂.
inline ExistenceProfile existence_profile(const AlgebraParams& params, const SurfaceClass& cls,
                                          const ExistenceOptions& opt = {}) {
  if (!params.det_is_one()) throw Error(ErrorCode::unsupported_regime, "existence analysis needs det A = 1");
  if (!params.chat1) throw Error(ErrorCode::domain_error, "existence analysis needs the Casimir level");
  ExistenceProfile out;
  const ConstraintCurve curve(params);
  const double d = params.delta();
  const double a = params.a;
  const double chat1 = *params.chat1;

  // One-dimensional representations: W = 0 needs ĉ₁ = 0; |W|² = μ > 0 needs ĉ = 0.
  if (near_zero(chat1, 1.0 + a * a)) out.scalar_moduli.push_back(0.0);
  if (near_zero(d, 1.0)) {
    if (a == 0.0 && near_zero(chat1, 1.0)) {
      out.scalar_family = true;
      out.witnesses.push_back("every (r,r) is a fixed point");
    }
  } else {
    const double mu = a / d;
    if (mu > 0.0 && near_zero(*params.chat(), mu * mu)) out.scalar_moduli.push_back(std::sqrt(mu));
  }

  // One-dimensionality hypotheses.
  if (d <= 0.0) {
    const auto ch = params.chat();
    const bool dneg = d < 0.0;
    if (a >= 0.0 || (dneg && ch && *ch <= 0.0) || (dneg && ch && *ch > 0.0 && *params.mu() / std::sqrt(*ch) <= 1.0)) {
      out.one_dimensional_only = true;
    }
  }

  detail::search_strings(params, opt, out);
  const bool level_is_point = !near_zero(d, 1.0) && near_zero(*params.chat(), (a / d) * (a / d));
  if (std::abs(params.trA) < 2.0 && params.chat() && *params.chat() > 0.0 && !level_is_point) {
    detail::compact_elliptic(params, curve, opt, out);
  } else {
    detail::search_infinite(params, curve, opt, out);
    if (params.trA <= -2.0) out.witnesses.push_back("tr A <= -2: periodic points not analysed");
  }

  switch (cls.topology) {
    case Topology::empty: out.regime = "empty"; break;
    case Topology::point:
    case Topology::circle: out.regime = "degenerate"; break;
    case Topology::plane_pair:
      out.regime = "plane-pair";
      if (cls.code == "Z.2" && chat1 > 0.0) out.witnesses.push_back("c0 > 0: analysed from the constraint curve only");
      break;
    case Topology::two_sheets: out.regime = "two-sheeted"; break;
    case Topology::one_sheet: out.regime = "one-sheeted"; break;
    case Topology::singular: out.regime = "singular"; break;
    case Topology::mixed: out.regime = "mixed"; break;
    case Topology::compact:
      if (out.regime.empty()) out.regime = "compact";
      break;
  }
  if (cls.code == "N.9") {
    out.exists_in_limit = true;
    out.witnesses.push_back("touching point is reached only in the limit");
  }
  if (a > 0.0 && out.regime == "one-sheeted" && params.mu() && params.chat()) {
    const double mu = *params.mu();
    out.witnesses.push_back("one-sided threshold c <= mu^2(1+|Delta|/4): " + std::to_string(*params.chat()) +
                            " vs " + std::to_string(mu * mu * (1.0 + std::abs(d) / 4.0)));
  }

  out.finite_loops = !out.loop_dims.empty();
  out.finite_strings = !out.string_dims.empty();
  const bool any_big = out.finite_loops || out.finite_strings || out.one_sided || out.two_sided;
  out.scalar_only = !any_big && (!out.scalar_moduli.empty() || out.scalar_family);
  out.empty = !any_big && !out.scalar_only && !out.two_sided_if_irrational;
  return out;
}

}  // namespace affrep
