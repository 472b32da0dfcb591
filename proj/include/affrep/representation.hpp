#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "affrep/affine_dynamics.hpp"
#include "affrep/constraint_curve.hpp"

namespace affrep {

enum class RepKind { loop, string, one_sided, two_sided, scalar };

inline const char* to_string(RepKind k) {
  switch (k) {
    case RepKind::loop: return "loop";
    case RepKind::string: return "string";
    case RepKind::one_sided: return "one-sided-truncated";
    case RepKind::two_sided: return "two-sided-truncated";
    case RepKind::scalar: return "scalar";
  }
  return "?";
}

/// Finite matrix W of a *-representation of C_{L,a} (V = W†). Truncated windows carry
/// the number of masked basis indices at each end.
struct Representation {
  RepKind kind = RepKind::scalar;
  int dim = 0;
  CMatrix W;
  double beta = 0.0;
  OrbitSegment orbit;
  AlgebraParams params;
  int boundary_front = 0;
  int boundary_back = 0;
  std::vector<int> clamped;  // orbit indices whose coordinate was clamped from [−tol, 0) to 0

  CMatrix V() const { return W.adjoint(); }
  CMatrix D() const { return W * W.adjoint(); }
  CMatrix Dt() const { return W.adjoint() * W; }

  std::vector<bool> mask() const {
    std::vector<bool> m(static_cast<std::size_t>(dim), false);
    for (int i = 0; i < boundary_front && i < dim; ++i) m[static_cast<std::size_t>(i)] = true;
    for (int i = 0; i < boundary_back && i < dim; ++i) m[static_cast<std::size_t>(dim - 1 - i)] = true;
    return m;
  }
};

/// ĉ₁ from a point on the curve: p(r,s) = 0 solved for ĉ₁.
inline double chat1_at(const AlgebraParams& p, const Point& x) {
  const double sum = x.x() + x.y(), dif = x.x() - x.y();
  return (-4.0 * p.a * sum + (2.0 - p.trA) * sum * sum + (2.0 + p.trA) * dif * dif) / 4.0;
}

namespace detail {

inline double checked_sqrt(double d, int index, std::vector<int>& clamped, double tol) {
  if (d >= 0.0) return std::sqrt(d);
  if (d >= -tol) {
    clamped.push_back(index);
    return 0.0;
  }
  throw Error(ErrorCode::orbit_leaves_quadrant, "negative orbit coordinate at index " + std::to_string(index), index);
}

inline void fill_superdiagonal(Representation& rep, std::size_t count, double tol) {
  rep.W = CMatrix::Zero(rep.dim, rep.dim);
  for (std::size_t i = 0; i < count; ++i) {
    const int k = static_cast<int>(i);
    rep.W(k, k + 1) = checked_sqrt(rep.orbit.points[i].x(), k, rep.clamped, tol);
  }
}

inline void set_chat1(Representation& rep, const Point& on_curve) {
  if (rep.params.det_is_one() && !rep.params.chat1) rep.params.chat1 = chat1_at(rep.params, on_curve);
}

inline void check_bound(const Point& x, long k, double bound) {
  if (!x.allFinite() || x.cwiseAbs().maxCoeff() > bound) {
    throw Error(ErrorCode::overflow, "orbit exceeded magnitude bound at step " + std::to_string(k), k);
  }
}

}  // namespace detail

/// Loop over the period-n orbit of x1: superdiagonal √d₁..√dₙ₋₁, corner e^{iβ}√dₙ.
inline Representation build_loop(const AlgebraParams& params, const Point& x1, int n, double beta = 0.0,
                                 const Tolerances& tol = {}) {
  if (n < 1) throw Error(ErrorCode::domain_error, "loop dimension must be at least 1");
  const AffineMap2 lhat = lhat_from_params(params);
  Representation rep;
  rep.kind = RepKind::loop;
  rep.dim = n;
  rep.beta = beta;
  rep.params = params;
  rep.orbit.kind = OrbitKind::loop;
  Point x = x1;
  for (int k = 0; k < n; ++k) {
    if (!strictly_positive(x)) {
      throw Error(ErrorCode::orbit_leaves_quadrant, "orbit point " + std::to_string(k) + " is not strictly positive", k);
    }
    rep.orbit.points.push_back(x);
    x = lhat(x);
    detail::check_bound(x, k + 1, tol.magnitude_bound);
  }
  if ((x - x1).norm() >= tol.orbit) {
    throw Error(ErrorCode::not_periodic, "L^" + std::to_string(n) + "(x1) differs from x1 by " + std::to_string((x - x1).norm()));
  }
  rep.W = CMatrix::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) rep.W(k, k + 1) = std::sqrt(rep.orbit.points[static_cast<std::size_t>(k)].x());
  rep.W(n - 1, 0) = std::polar(std::sqrt(rep.orbit.points.back().x()), beta);
  detail::set_chat1(rep, x1);
  return rep;
}

/// A string starting at (x,0) sits on the level ĉ₁ = x² − a x; true when that is the level of `p`
/// (or `p` leaves the level open).
inline bool string_level_matches(const AlgebraParams& p, const OrbitSegment& seg, double rel = 1e-9) {
  if (!p.chat1 || !p.det_is_one()) return true;
  const double x = seg.points.front().x();
  const double level = x * x - p.a * x;
  return std::abs(level - *p.chat1) <= rel * (1.0 + std::abs(*p.chat1) + x * x);
}

/// String over the n-string (x,0) -> ... -> (0,d̃).
inline Representation build_string(const AlgebraParams& params, int n, const Tolerances& tol = {}) {
  if (n < 2) throw Error(ErrorCode::domain_error, "string dimension must be at least 2");
  auto seg = find_kstring(params, static_cast<unsigned>(n), tol.relation);
  if (!seg) throw Error(ErrorCode::no_string, "no " + std::to_string(n) + "-string with positive interior");
  if (!string_level_matches(params, *seg)) {
    throw Error(ErrorCode::no_string, "the " + std::to_string(n) + "-string lies on another Casimir level");
  }
  Representation rep;
  rep.kind = RepKind::string;
  rep.dim = n;
  rep.params = params;
  rep.orbit = *seg;
  detail::fill_superdiagonal(rep, static_cast<std::size_t>(n - 1), tol.orbit);
  detail::set_chat1(rep, seg->points.front());
  return rep;
}

/// (N+1)-dimensional window of the one-sided representation seeded at (d0, 0).
inline Representation build_one_sided(const AlgebraParams& params, double d0, int N, const Tolerances& tol = {}) {
  if (!(d0 > 0.0)) throw Error(ErrorCode::domain_error, "one-sided seed must be positive");
  if (N < 0) throw Error(ErrorCode::domain_error, "window depth must be nonnegative");
  const AffineMap2 lhat = lhat_from_params(params);
  Representation rep;
  rep.kind = RepKind::one_sided;
  rep.dim = N + 1;
  rep.params = params;
  rep.boundary_back = 1;
  rep.orbit.kind = OrbitKind::forward_ray;
  Point x(d0, 0.0);
  rep.orbit.points.push_back(x);
  for (int k = 1; k <= N; ++k) {
    x = lhat(x);
    detail::check_bound(x, k, tol.magnitude_bound);
    if (!strictly_positive(x)) {
      throw Error(ErrorCode::orbit_leaves_quadrant, "forward iterate " + std::to_string(k) + " leaves the positive quadrant", k);
    }
    rep.orbit.points.push_back(x);
  }
  detail::fill_superdiagonal(rep, static_cast<std::size_t>(N), tol.orbit);
  detail::set_chat1(rep, rep.orbit.points.front());
  return rep;
}

/// (2N+1)-dimensional window centred on x0; escape index is signed (negative = backward).
inline Representation build_two_sided(const AlgebraParams& params, const Point& x0, int N, const Tolerances& tol = {}) {
  if (N < 0) throw Error(ErrorCode::domain_error, "window depth must be nonnegative");
  const AffineMap2 lhat = lhat_from_params(params);
  const AffineMap2 back = lhat.inverse();
  if (!strictly_positive(x0)) throw Error(ErrorCode::orbit_leaves_quadrant, "centre is not strictly positive", 0);
  std::vector<Point> fwd, bwd;
  Point x = x0;
  for (int k = 1; k <= N; ++k) {
    x = lhat(x);
    detail::check_bound(x, k, tol.magnitude_bound);
    if (!strictly_positive(x)) {
      throw Error(ErrorCode::orbit_leaves_quadrant, "forward iterate " + std::to_string(k) + " leaves the positive quadrant", k);
    }
    fwd.push_back(x);
  }
  x = x0;
  for (int k = 1; k <= N; ++k) {
    x = back(x);
    detail::check_bound(x, -k, tol.magnitude_bound);
    if (!strictly_positive(x)) {
      throw Error(ErrorCode::orbit_leaves_quadrant, "backward iterate " + std::to_string(k) + " leaves the positive quadrant", -k);
    }
    bwd.push_back(x);
  }
  Representation rep;
  rep.kind = RepKind::two_sided;
  rep.dim = 2 * N + 1;
  rep.params = params;
  rep.boundary_front = N > 0 ? 1 : 0;
  rep.boundary_back = N > 0 ? 1 : 0;
  rep.orbit.kind = OrbitKind::two_sided_window;
  rep.orbit.points.assign(bwd.rbegin(), bwd.rend());
  rep.orbit.points.push_back(x0);
  rep.orbit.points.insert(rep.orbit.points.end(), fwd.begin(), fwd.end());
  detail::fill_superdiagonal(rep, static_cast<std::size_t>(2 * N), tol.orbit);
  detail::set_chat1(rep, x0);
  if (N == 0) {
    // A lone vertex has no edges; both of its neighbours are cut off.
    rep.boundary_front = 1;
  }
  return rep;
}

/// 1×1 representation W = (w).
inline Representation build_scalar(const AlgebraParams& params, Complex w) {
  Representation rep;
  rep.kind = RepKind::scalar;
  rep.dim = 1;
  rep.params = params;
  rep.W = CMatrix::Constant(1, 1, w);
  const double d = std::norm(w);
  rep.orbit = OrbitSegment{{Point(d, d)}, OrbitKind::loop};
  rep.beta = std::arg(w);
  return rep;
}

struct MaskedResidual {
  double interior = 0.0;
  double boundary = 0.0;
};

/// Max |entry| split by whether the entry touches a masked basis index.
inline MaskedResidual masked_max(const CMatrix& M, const std::vector<bool>& mask) {
  MaskedResidual r;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      const double v = std::abs(M(i, j));
      const bool edge = (!mask.empty()) && (mask[static_cast<std::size_t>(i)] || mask[static_cast<std::size_t>(j)]);
      double& slot = edge ? r.boundary : r.interior;
      slot = std::max(slot, v);
    }
  }
  return r;
}

struct RelationReport {
  double residual_cdef1 = 0.0;
  double residual_cdef2 = 0.0;
  double residual_commute_DDt = 0.0;
  double residual_DW_WDt = 0.0;
  double boundary_cdef1 = 0.0;
  double boundary_cdef2 = 0.0;
  double boundary_commute_DDt = 0.0;
  double boundary_DW_WDt = 0.0;
  std::optional<double> casimir_value;     // ĉ₁ read off the interior diagonal of Ĉ
  std::optional<double> casimir_residual;  // spread of that diagonal
  int dim = 0;

  double max_interior() const {
    return std::max({residual_cdef1, residual_cdef2, residual_commute_DDt, residual_DW_WDt});
  }
  double max_boundary() const {
    return std::max({boundary_cdef1, boundary_cdef2, boundary_commute_DDt, boundary_DW_WDt});
  }
  /// Interior residuals within tol·max(1, dim); boundary defects are exempt.
  bool within(double tol) const { return max_interior() <= tol * std::max(1, dim); }
};

/// Ĉ = −4a(D+D̃) + (2−tr A)(D+D̃)² + (2+tr A)(D−D̃)²
inline CMatrix casimir_matrix(const Representation& rep) {
  const CMatrix D = rep.D(), Dt = rep.Dt();
  const CMatrix S = D + Dt, M = D - Dt;
  const double a = rep.params.a, tr = rep.params.trA;
  return -4.0 * a * S + (2.0 - tr) * S * S + (2.0 + tr) * M * M;
}

struct CasimirReport {
  std::vector<double> matrix_diagonal;
  std::optional<double> chat1;
  bool proportional = false;
  double spread = 0.0;
  double commutator_residual = 0.0;  // max |[Ĉ, W]| over interior entries
};

/// r(D+D̃) + s(D+D̃)² + t(D−D̃)²
inline CMatrix casimir_family_matrix(const Representation& rep, double r, double s, double t) {
  const CMatrix D = rep.D(), Dt = rep.Dt();
  const CMatrix S = D + Dt, M = D - Dt;
  return r * S + s * S * S + t * M * M;
}

inline double casimir_family_residual(const Representation& rep, double r, double s, double t) {
  const CMatrix C = casimir_family_matrix(rep, r, s, t);
  return masked_max(C * rep.W - rep.W * C, rep.mask()).interior;
}

inline CasimirReport casimir(const Representation& rep) {
  const AlgebraParams& p = rep.params;
  CMatrix C;
  if (p.det_is_one()) {
    C = casimir_matrix(rep);
  } else if (std::abs(p.detA + 1.0) <= 1e-12 && std::abs(p.trA) <= 1e-12 && p.a == 0.0) {
    C = casimir_family_matrix(rep, 1.0, 1.0, 1.0);
  } else {
    throw Error(ErrorCode::unsupported_case, "no Casimir element unless det A = 1, or det A = -1 with tr A = a = 0");
  }
  CasimirReport out;
  const auto mask = rep.mask();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  int count = 0;
  for (int i = 0; i < rep.dim; ++i) {
    const double v = C(i, i).real();
    out.matrix_diagonal.push_back(v);
    if (mask[static_cast<std::size_t>(i)]) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
    ++count;
  }
  if (count > 0) {
    const double mean = sum / count;
    out.spread = hi - lo;
    const CMatrix off = C - CMatrix(C.diagonal().asDiagonal());
    const double off_max = masked_max(off, mask).interior;
    out.proportional = out.spread <= 1e-8 * (1.0 + std::abs(mean)) && off_max <= 1e-8 * (1.0 + std::abs(mean));
    if (out.proportional && p.det_is_one()) out.chat1 = mean / 4.0;
  }
  out.commutator_residual = masked_max(C * rep.W - rep.W * C, mask).interior;
  return out;
}

inline RelationReport verify_relations(const Representation& rep) {
  RelationReport r;
  r.dim = rep.dim;
  const AlgebraParams& p = rep.params;
  const CMatrix& W = rep.W;
  const CMatrix V = rep.V();
  const CMatrix D = W * V, Dt = V * W;
  const auto mask = rep.mask();

  const CMatrix c1 = W * W * V - p.a * W + p.detA * V * W * W - p.trA * W * V * W;
  const CMatrix c2 = W * V * V - p.a * V + p.detA * V * V * W - p.trA * V * W * V;
  const CMatrix cm = D * Dt - Dt * D;
  const CMatrix dw = D * W - W * Dt;
  auto put = [&](const CMatrix& M, double& in, double& bd) {
    const auto m = masked_max(M, mask);
    in = m.interior;
    bd = m.boundary;
  };
  put(c1, r.residual_cdef1, r.boundary_cdef1);
  put(c2, r.residual_cdef2, r.boundary_cdef2);
  put(cm, r.residual_commute_DDt, r.boundary_commute_DDt);
  put(dw, r.residual_DW_WDt, r.boundary_DW_WDt);

  const bool has_casimir = p.det_is_one() ||
                           (std::abs(p.detA + 1.0) <= 1e-12 && std::abs(p.trA) <= 1e-12 && p.a == 0.0);
  if (has_casimir && rep.dim > 0) {
    const CasimirReport c = casimir(rep);
    r.casimir_residual = c.spread;
    if (c.chat1) r.casimir_value = c.chat1;
  }
  return r;
}

struct XYZ {
  CMatrix X, Y, Z;
  double hermitian_residual = 0.0;
  double casimir_xyz_residual = 0.0;
  double sum_residual = 0.0;   // |D + D̃ − 2(X²+Y²)|
  double diff_residual = 0.0;  // |D − D̃ − 2ħZ|
};

inline XYZ xyz_realization(const Representation& rep, double hbar) {
  if (hbar == 0.0) throw Error(ErrorCode::domain_error, "hbar must be nonzero");
  const Complex I(0.0, 1.0);
  const CMatrix& W = rep.W;
  const CMatrix V = rep.V();
  XYZ out;
  out.X = (W + V) / 2.0;
  out.Y = (W - V) / (2.0 * I);
  out.Z = (out.X * out.Y - out.Y * out.X) / (I * hbar);
  auto herm = [](const CMatrix& M) { return M.size() ? (M - M.adjoint()).cwiseAbs().maxCoeff() : 0.0; };
  out.hermitian_residual = std::max({herm(out.X), herm(out.Y), herm(out.Z)});

  const CMatrix R2 = out.X * out.X + out.Y * out.Y;
  const CMatrix D = W * V, Dt = V * W;
  const double a = rep.params.a, tr = rep.params.trA;
  auto maxabs = [](const CMatrix& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; };
  out.sum_residual = maxabs(D + Dt - 2.0 * R2);
  out.diff_residual = maxabs(D - Dt - 2.0 * hbar * out.Z);
  const CMatrix Cxyz = -8.0 * a * R2 + 4.0 * (2.0 - tr) * R2 * R2 + 4.0 * hbar * hbar * (2.0 + tr) * out.Z * out.Z;
  out.casimir_xyz_residual = maxabs(Cxyz - casimir_matrix(rep));
  return out;
}

namespace detail {
inline CMatrix matrix_power(const CMatrix& M, int k) {
  CMatrix R = CMatrix::Identity(M.rows(), M.cols());
  for (int i = 0; i < k; ++i) R = R * M;
  return R;
}
}  // namespace detail

/// max over D^i D̃^j (i+j ≤ degree) and 1 ≤ k ≤ n of |Wᵏ p(D,D̃) − p(L̂ᵏ(D,D̃)) Wᵏ| on interior entries,
/// divided by the largest interior entry of either side when that exceeds 1.
inline double reorder_check(const Representation& rep, int degree = 3, int n = 4) {
  const CMatrix& W = rep.W;
  const CMatrix D = rep.D(), Dt = rep.Dt();
  const CMatrix Id = CMatrix::Identity(rep.dim, rep.dim);
  const AffineMap2 lhat = lhat_from_params(rep.params);
  const auto mask = rep.mask();
  double worst = 0.0;
  for (int k = 1; k <= n; ++k) {
    const AffineMap2 Lk = power_by_composition(lhat, static_cast<unsigned>(k));
    const CMatrix Dk = Lk.A(0, 0) * D + Lk.A(0, 1) * Dt + Lk.t(0) * Id;
    const CMatrix Dtk = Lk.A(1, 0) * D + Lk.A(1, 1) * Dt + Lk.t(1) * Id;
    const CMatrix Wk = detail::matrix_power(W, k);
    for (int i = 0; i <= degree; ++i) {
      for (int j = 0; i + j <= degree; ++j) {
        const CMatrix lhs = Wk * detail::matrix_power(D, i) * detail::matrix_power(Dt, j);
        const CMatrix rhs = detail::matrix_power(Dk, i) * detail::matrix_power(Dtk, j) * Wk;
        const double size = std::max({1.0, masked_max(lhs, mask).interior, masked_max(rhs, mask).interior});
        worst = std::max(worst, masked_max(lhs - rhs, mask).interior / size);
      }
    }
  }
  return worst;
}

}  // namespace affrep
