#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "affrep/affine_dynamics.hpp"
#include "affrep/param_bridge.hpp"
#include "affrep/representation.hpp"

namespace affrep {

struct DirectedGraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;

  DirectedGraph() = default;
  DirectedGraph(int n, std::vector<std::pair<int, int>> e) : vertex_count(n), edges(std::move(e)) {
    if (n < 1) throw Error(ErrorCode::domain_error, "graph needs at least one vertex");
    for (const auto& [i, j] : edges) {
      if (i < 0 || j < 0 || i >= n || j >= n) {
        throw Error(ErrorCode::domain_error, "edge endpoint out of range");
      }
    }
  }
};

struct Admissibility {
  std::vector<Point> assignment;  // minimum-norm solution, moved off the diagonal when possible
  bool nondegenerate = false;     // the returned assignment has two distinct vectors
  bool locally_injective = true;        // L injective on the assigned vectors
  double residual = 0.0;
};

/// Solves v_j = L(v_i) over all edges (i, j) as one linear system in the 2n unknowns;
/// the graph is L-admissible iff the least-squares residual is within tol.
inline std::optional<Admissibility> check_admissible(const DirectedGraph& g, const AffineMap2& L,
                                                     double tol = Tolerances{}.orbit) {
  const int n = g.vertex_count;
  const auto m = static_cast<Eigen::Index>(g.edges.size());
  Admissibility out;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * n);
  Eigen::MatrixXd null_basis;
  if (m > 0) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * m, 2 * n);
    Eigen::VectorXd b(2 * m);
    for (Eigen::Index e = 0; e < m; ++e) {
      const auto [i, j] = g.edges[static_cast<std::size_t>(e)];
      M.block(2 * e, 2 * j, 2, 2) += Mat2::Identity();
      M.block(2 * e, 2 * i, 2, 2) -= L.A;
      b.segment(2 * e, 2) = L.t;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
    cod.setThreshold(1e-12);
    z = cod.solve(b);
    out.residual = (M * z - b).cwiseAbs().maxCoeff();
    if (out.residual > tol * (1.0 + L.t.norm())) return std::nullopt;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv(k) > cut;
    null_basis = svd.matrixV().rightCols(2 * n - rank);
  } else {
    null_basis = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  }

  // Vertices without edges are unconstrained; they stay at zero and do not count towards
  // nondegeneracy.
  std::vector<bool> linked(static_cast<std::size_t>(n), false);
  for (const auto& [i, j] : g.edges) linked[static_cast<std::size_t>(i)] = linked[static_cast<std::size_t>(j)] = true;
  auto varies = [&](const Eigen::VectorXd& w, double eps) {
    int first = -1;
    for (int i = 0; i < n; ++i) {
      if (!linked[static_cast<std::size_t>(i)]) continue;
      if (first < 0) first = i;
      else if ((w.segment(2 * i, 2) - w.segment(2 * first, 2)).norm() > eps) return true;
    }
    return false;
  };
  for (int i = 0; i < n; ++i) {
    if (!linked[static_cast<std::size_t>(i)]) z.segment(2 * i, 2).setZero();
  }
  // Prefer an assignment with distinct vectors when the solution space has one.
  if (!varies(z, tol)) {
    for (Eigen::Index c = 0; c < null_basis.cols(); ++c) {
      Eigen::VectorXd w = null_basis.col(c);
      for (int i = 0; i < n; ++i) {
        if (!linked[static_cast<std::size_t>(i)]) w.segment(2 * i, 2).setZero();
      }
      if (varies(w, 1e-8)) {
        z += w / w.cwiseAbs().maxCoeff();
        break;
      }
    }
  }
  for (int i = 0; i < n; ++i) out.assignment.emplace_back(z(2 * i), z(2 * i + 1));
  out.nondegenerate = varies(z, tol);
  if (!L.invertible()) {
    for (int i = 0; i < n && out.locally_injective; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Point& x = out.assignment[static_cast<std::size_t>(i)];
        const Point& y = out.assignment[static_cast<std::size_t>(j)];
        if ((x - y).norm() > tol && (L(x) - L(y)).norm() <= tol) {
          out.locally_injective = false;
          break;
        }
      }
    }
  }
  return out;
}

/// Representation of A_L in the cyclic block form: S has blocks S₁..S_{k−1} on the block
/// superdiagonal and an optional corner S_k; E, Ẽ are diagonal.
struct ALRepresentation {
  std::vector<int> block_sizes;
  std::vector<double> E_diag, Et_diag;
  CMatrix S;
  AffineMap2 L;
  int boundary_front = 0;
  int boundary_back = 0;

  int dim() const { return static_cast<int>(E_diag.size()); }
  CMatrix E() const { return Eigen::VectorXcd(Eigen::VectorXd::Map(E_diag.data(), dim()).cast<Complex>()).asDiagonal(); }
  CMatrix Et() const { return Eigen::VectorXcd(Eigen::VectorXd::Map(Et_diag.data(), dim()).cast<Complex>()).asDiagonal(); }
  CMatrix T() const { return S.adjoint(); }

  std::vector<bool> mask() const {
    std::vector<bool> m(static_cast<std::size_t>(dim()), false);
    for (int i = 0; i < boundary_front && i < dim(); ++i) m[static_cast<std::size_t>(i)] = true;
    for (int i = 0; i < boundary_back && i < dim(); ++i) m[static_cast<std::size_t>(dim() - 1 - i)] = true;
    return m;
  }
};

inline ALRepresentation build_block_rep(const AffineMap2& L, const Point& v1, const std::vector<int>& block_sizes,
                                        const std::vector<CMatrix>& blocks, const std::optional<CMatrix>& corner = {},
                                        const Tolerances& tol = {}) {
  const std::size_t k = block_sizes.size();
  if (k == 0) throw Error(ErrorCode::shape_mismatch, "at least one block is required");
  for (int s : block_sizes) {
    if (s < 1) throw Error(ErrorCode::shape_mismatch, "block sizes must be positive");
  }
  if (blocks.size() != k - 1) {
    throw Error(ErrorCode::shape_mismatch, "expected " + std::to_string(k - 1) + " superdiagonal blocks");
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (blocks[i].rows() != block_sizes[i] || blocks[i].cols() != block_sizes[i + 1]) {
      throw Error(ErrorCode::shape_mismatch, "block " + std::to_string(i + 1) + " has the wrong shape");
    }
  }
  if (corner && (corner->rows() != block_sizes.back() || corner->cols() != block_sizes.front())) {
    throw Error(ErrorCode::shape_mismatch, "corner block has the wrong shape");
  }

  ALRepresentation rep;
  rep.block_sizes = block_sizes;
  rep.L = L;
  std::vector<int> offset{0};
  Point v = v1;
  for (std::size_t i = 0; i < k; ++i) {
    for (int r = 0; r < block_sizes[i]; ++r) {
      rep.E_diag.push_back(v.x());
      rep.Et_diag.push_back(v.y());
    }
    offset.push_back(offset.back() + block_sizes[i]);
    v = L(v);
  }
  if (corner && (v - v1).norm() >= tol.orbit) {
    throw Error(ErrorCode::corner_without_periodicity,
                "base point is not periodic of order " + std::to_string(k) + "; the corner block must vanish");
  }
  const int n = offset.back();
  rep.S = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    rep.S.block(offset[i], offset[i + 1], block_sizes[i], block_sizes[i + 1]) = blocks[i];
  }
  if (corner) rep.S.block(offset[k - 1], 0, block_sizes.back(), block_sizes.front()) = *corner;
  return rep;
}

struct ALResidual {
  double al1 = 0.0, al2 = 0.0, al3 = 0.0, al4 = 0.0, al5 = 0.0;
  int dim = 0;
  double max() const { return std::max({al1, al2, al3, al4, al5}); }
  bool within(double tol) const { return max() <= tol * std::max(1, dim); }
};

inline ALResidual verify_al_relations(const ALRepresentation& rep) {
  const double al = rep.L.A(0, 0), be = rep.L.A(0, 1), ga = rep.L.A(1, 0), de = rep.L.A(1, 1);
  const double u = rep.L.t(0), v = rep.L.t(1);
  const CMatrix E = rep.E(), Et = rep.Et(), S = rep.S, T = rep.T();
  const auto mask = rep.mask();
  ALResidual r;
  r.dim = rep.dim();
  r.al1 = masked_max(al * E * S + be * Et * S + u * S - S * E, mask).interior;
  r.al2 = masked_max(ga * E * S + de * Et * S + v * S - S * Et, mask).interior;
  r.al3 = masked_max(al * T * E + be * T * Et + u * T - E * T, mask).interior;
  r.al4 = masked_max(ga * T * E + de * T * Et + v * T - Et * T, mask).interior;
  r.al5 = masked_max(E * Et - Et * E, mask).interior;
  return r;
}

/// S = W, E = k + m·WV + n·VW, Ẽ = k̃ + m̃·WV + ñ·VW.
inline ALRepresentation induce_from_cla(const Representation& repC, const PsiCoefficients& psi) {
  const AlgebraParams& p = repC.params;
  const double scale = 1.0 + psi.L.A.cwiseAbs().maxCoeff();
  if (std::abs(p.trA - psi.L.trace()) > 1e-10 * scale || std::abs(p.detA - psi.L.det()) > 1e-10 * scale * scale ||
      std::abs(p.a - psi.a) > 1e-12 * (1.0 + std::abs(p.a))) {
    throw Error(ErrorCode::inconsistent, "representation parameters do not match (L, a) of the coefficients");
  }
  ALRepresentation rep;
  rep.L = psi.L;
  rep.S = repC.W;
  rep.boundary_front = repC.boundary_front;
  rep.boundary_back = repC.boundary_back;
  const CMatrix D = repC.D(), Dt = repC.Dt();
  for (int i = 0; i < repC.dim; ++i) {
    const double d = D(i, i).real(), dt = Dt(i, i).real();
    rep.E_diag.push_back(psi.k + psi.m * d + psi.n * dt);
    rep.Et_diag.push_back(psi.kt + psi.mt * d + psi.nt * dt);
    rep.block_sizes.push_back(1);
  }
  return rep;
}

/// max over E^i Ẽ^j (i+j ≤ degree) and 1 ≤ k ≤ n of |Sᵏ p(E,Ẽ) − p(Lᵏ(E,Ẽ)) Sᵏ|, relative as in reorder_check.
inline double al_reorder_check(const ALRepresentation& rep, int degree = 2, int n = 3) {
  const CMatrix E = rep.E(), Et = rep.Et();
  const CMatrix Id = CMatrix::Identity(rep.dim(), rep.dim());
  const auto mask = rep.mask();
  double worst = 0.0;
  for (int k = 1; k <= n; ++k) {
    const AffineMap2 Lk = power_by_composition(rep.L, static_cast<unsigned>(k));
    const CMatrix Ek = Lk.A(0, 0) * E + Lk.A(0, 1) * Et + Lk.t(0) * Id;
    const CMatrix Etk = Lk.A(1, 0) * E + Lk.A(1, 1) * Et + Lk.t(1) * Id;
    const CMatrix Sk = detail::matrix_power(rep.S, k);
    for (int i = 0; i <= degree; ++i) {
      for (int j = 0; i + j <= degree; ++j) {
        const CMatrix lhs = Sk * detail::matrix_power(E, i) * detail::matrix_power(Et, j);
        const CMatrix rhs = detail::matrix_power(Ek, i) * detail::matrix_power(Etk, j) * Sk;
        const double size = std::max({1.0, masked_max(lhs, mask).interior, masked_max(rhs, mask).interior});
        worst = std::max(worst, masked_max(lhs - rhs, mask).interior / size);
      }
    }
  }
  return worst;
}

}  // namespace affrep
