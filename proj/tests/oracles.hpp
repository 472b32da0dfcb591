#pragma once

// Reference computations that avoid the library code paths they check, plus the seeded
// generators shared by the property tests and the acceptance binary.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline std::uint64_t seed() {
  if (const char* s = std::getenv("AFFREP_SEED")) {
    try {
      return std::stoull(s);
    } catch (...) {
    }
  }
  return 20261019ULL;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t salt = 0) : gen(seed() ^ (salt * 0x9E3779B97F4A7C15ULL)) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  bool coin() { return integer(0, 1) == 1; }
};

/// (x, y) -> (tr·x − det·y + a, x), applied n times with plain doubles.
inline std::pair<double, double> lhat_iterate(double tr, double det, double a, double x, double y, unsigned n) {
  for (unsigned k = 0; k < n; ++k) {
    const double nx = tr * x - det * y + a;
    y = x;
    x = nx;
  }
  return {x, y};
}

/// Start x of an n-string: the first coordinate of L̂ⁿ⁻¹(x, 0) is affine in x, so two
/// evaluations give the root.
inline double string_start(double tr, double det, double a, unsigned n) {
  const double f0 = lhat_iterate(tr, det, a, 0.0, 0.0, n - 1).first;
  const double f1 = lhat_iterate(tr, det, a, 1.0, 0.0, n - 1).first;
  return -f0 / (f1 - f0);
}

/// p(r, s) written out term by term.
inline double curve_p(double tr, double a, double chat1, double r, double s) {
  const double u = r + s, v = r - s;
  return -4.0 * a * u + (2.0 - tr) * u * u + (2.0 + tr) * v * v - 4.0 * chat1;
}

/// Moduli √d along a forward orbit of L̂ from (x, y), n points.
inline std::vector<double> orbit_moduli(double tr, double a, double x, double y, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    out.push_back(std::sqrt(x));
    const double nx = tr * x - y + a;
    y = x;
    x = nx;
  }
  return out;
}

/// Backward step of L̂ with det A = 1: (x, y) -> (y, tr·y − x + a).
inline std::pair<double, double> lhat_back(double tr, double a, double x, double y) { return {y, tr * y - x + a}; }

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

/// Elliptic algebra data for θ = π p/q, μ and ĉ: (trA, a, ĉ₁).
struct Elliptic {
  double theta, mu, chat, trA, a, chat1;
};

inline Elliptic elliptic(double theta, double mu, double chat) {
  const double tr = 2.0 * std::cos(2.0 * theta);
  const double d = 2.0 - tr;
  return {theta, mu, chat, tr, mu * d, d * (chat - mu * mu)};
}

}  // namespace oracle
