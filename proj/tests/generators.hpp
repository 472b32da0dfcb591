#pragma once

// Seeded generators of valid algebras and representations.

#include <numeric>
#include <numbers>
#include <vector>

#include "affrep/affrep.hpp"
#include "oracles.hpp"

namespace gen {

using namespace affrep;

/// Elliptic torus algebra with θ = πp/q, so every orbit on Γ is a q-loop in the open quadrant.
struct TorusDraw {
  AlgebraParams params;
  int q = 0;
  double theta = 0.0;
};

inline TorusDraw torus(oracle::Rng& rng) {
  const int q = rng.integer(3, 12);
  int p = 1;
  for (int tries = 0; tries < 20; ++tries) {
    const int cand = rng.integer(1, (q - 1) / 2);
    if (std::gcd(cand, q) == 1) {
      p = cand;
      break;
    }
  }
  const double theta = std::numbers::pi * p / q;
  const double mu = rng.uniform(0.3, 2.0);
  const double ratio = rng.uniform(1.05 / std::cos(theta), 3.0 / std::cos(theta));
  const double chat = (mu / ratio) * (mu / ratio);
  const auto e = oracle::elliptic(theta, mu, chat);
  return {AlgebraParams{e.trA, 1.0, e.a, e.chat1}, q, theta};
}

inline Representation loop(oracle::Rng& rng) {
  const TorusDraw t = torus(rng);
  const Point x1 = elliptic_parametrization(t.params, rng.uniform(0.0, 2.0 * std::numbers::pi));
  return build_loop(t.params, x1, t.q, rng.uniform(-std::numbers::pi, std::numbers::pi));
}

/// Strings from the hyperbolic, parabolic and elliptic regimes; Casimir level left open.
inline Representation string(oracle::Rng& rng) {
  for (;;) {
    const int regime = rng.integer(0, 2);
    AlgebraParams p;
    int n = rng.integer(2, 8);
    if (regime == 0) {
      const double th = rng.uniform(0.1, 1.0), mu = rng.uniform(0.2, 3.0);
      p.trA = 2.0 * std::cosh(2.0 * th);
      p.a = mu * (2.0 - p.trA);
    } else if (regime == 1) {
      p.trA = 2.0;
      p.a = rng.uniform(-3.0, -0.2);
    } else {
      const double th = rng.uniform(0.05, 0.5), mu = rng.uniform(0.2, 3.0);
      p.trA = 2.0 * std::cos(2.0 * th);
      p.a = mu * (2.0 - p.trA);
      n = rng.integer(2, 12);
    }
    p.detA = 1.0;
    try {
      return build_string(p, n);
    } catch (const Error&) {
    }
  }
}

/// Random invertible A with the given trace and determinant: P·companion·P⁻¹.
inline Mat2 conjugated(oracle::Rng& rng, double tr, double det) {
  Mat2 C;
  C << tr, -det, 1.0, 0.0;
  Mat2 P;
  do {
    P << rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2);
  } while (std::abs(P.determinant()) < 0.2);
  return P * C * P.inverse();
}

}  // namespace gen
