#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "affrep/al_rep.hpp"
#include "affrep/classifier.hpp"
#include "affrep/constraint_curve.hpp"
#include "affrep/param_bridge.hpp"
#include "affrep/representation.hpp"

namespace affrep {

using json = nlohmann::ordered_json;

/// Round to 12 significant digits so that dumps are short and stable.
inline double sig12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline std::string fmt12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

inline json opt_num(const std::optional<double>& x) { return x ? json(sig12(*x)) : json(nullptr); }

inline json to_json(const AlgebraParams& p) {
  json j;
  j["trA"] = sig12(p.trA);
  j["detA"] = sig12(p.detA);
  j["a"] = sig12(p.a);
  j["chat1"] = opt_num(p.chat1);
  return j;
}

inline json to_json(const SurfaceSpec& s) {
  return json{{"alpha0", sig12(s.alpha0)}, {"alpha1", sig12(s.alpha1)}, {"c0", sig12(s.c0)}};
}

inline json to_json(const OrderingSpec& o) {
  return json{{"hbar", sig12(o.hbar)}, {"beta1t", sig12(o.beta1t)}, {"gamma1t", sig12(o.gamma1t)}, {"delta1t", sig12(o.delta1t)}};
}

inline json to_json(const RelationReport& r) {
  json j;
  j["residual_cdef1"] = sig12(r.residual_cdef1);
  j["residual_cdef2"] = sig12(r.residual_cdef2);
  j["residual_commute_DDt"] = sig12(r.residual_commute_DDt);
  j["residual_DW_WDt"] = sig12(r.residual_DW_WDt);
  j["boundary"] = json{{"cdef1", sig12(r.boundary_cdef1)},
                       {"cdef2", sig12(r.boundary_cdef2)},
                       {"commute_DDt", sig12(r.boundary_commute_DDt)},
                       {"DW_WDt", sig12(r.boundary_DW_WDt)}};
  j["casimir_value"] = opt_num(r.casimir_value);
  j["casimir_residual"] = opt_num(r.casimir_residual);
  return j;
}

inline json matrix_json(const CMatrix& M, bool imag) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(sig12(imag ? M(i, j).imag() : M(i, j).real()));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const Representation& rep, bool with_report = true) {
  json j;
  j["kind"] = to_string(rep.kind);
  j["dim"] = rep.dim;
  j["beta"] = sig12(rep.beta);
  j["params"] = to_json(rep.params);
  j["boundary"] = json{{"front", rep.boundary_front}, {"back", rep.boundary_back}};
  json orbit = json::array();
  for (const Point& x : rep.orbit.points) orbit.push_back(json::array({sig12(x.x()), sig12(x.y())}));
  j["orbit"] = orbit;
  j["W"] = json{{"re", matrix_json(rep.W, false)}, {"im", matrix_json(rep.W, true)}};
  if (with_report) j["report"] = to_json(verify_relations(rep));
  return j;
}

inline RepKind rep_kind_from(const std::string& s) {
  if (s == "loop") return RepKind::loop;
  if (s == "string") return RepKind::string;
  if (s == "one-sided-truncated") return RepKind::one_sided;
  if (s == "two-sided-truncated") return RepKind::two_sided;
  if (s == "scalar") return RepKind::scalar;
  throw Error(ErrorCode::parse_error, "unknown representation kind '" + s + "'");
}

/// Reads the JSON written by to_json(Representation). Any structural problem is a parse error.
inline Representation representation_from_json(const json& j) {
  try {
    Representation rep;
    rep.kind = rep_kind_from(j.at("kind").get<std::string>());
    rep.beta = j.value("beta", 0.0);
    const json& p = j.at("params");
    rep.params.trA = p.at("trA").get<double>();
    rep.params.detA = p.at("detA").get<double>();
    rep.params.a = p.at("a").get<double>();
    if (p.contains("chat1") && !p.at("chat1").is_null()) rep.params.chat1 = p.at("chat1").get<double>();
    if (j.contains("boundary")) {
      rep.boundary_front = j.at("boundary").value("front", 0);
      rep.boundary_back = j.at("boundary").value("back", 0);
    }
    const json& re = j.at("W").at("re");
    const json& im = j.at("W").at("im");
    const auto n = static_cast<Eigen::Index>(re.size());
    if (static_cast<Eigen::Index>(im.size()) != n) throw Error(ErrorCode::parse_error, "W.re and W.im differ in shape");
    rep.W = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const json& rr = re.at(static_cast<std::size_t>(i));
      const json& ir = im.at(static_cast<std::size_t>(i));
      if (static_cast<Eigen::Index>(rr.size()) != n || static_cast<Eigen::Index>(ir.size()) != n) {
        throw Error(ErrorCode::parse_error, "W must be square");
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        rep.W(i, k) = Complex(rr.at(static_cast<std::size_t>(k)).get<double>(), ir.at(static_cast<std::size_t>(k)).get<double>());
      }
    }
    rep.dim = static_cast<int>(n);
    if (j.contains("dim") && j.at("dim").get<int>() != rep.dim) throw Error(ErrorCode::parse_error, "dim does not match W");
    if (j.contains("orbit")) {
      for (const json& pt : j.at("orbit")) rep.orbit.points.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
    }
    return rep;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

inline json to_json(const SurfaceClass& c) {
  json j;
  j["code"] = c.code;
  j["geometry"] = c.geometry;
  j["gamma_quadrant"] = c.gamma_quadrant.empty() ? json(nullptr) : json(c.gamma_quadrant);
  j["topology"] = to_string(c.topology);
  j["c"] = opt_num(c.c);
  j["mu"] = opt_num(c.mu);
  return j;
}

inline json points_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (const Point& x : pts) a.push_back(json::array({sig12(x.x()), sig12(x.y())}));
  return a;
}

inline json to_json(const ExistenceProfile& p) {
  json j;
  j["regime"] = p.regime;
  j["empty"] = p.empty;
  j["scalar_only"] = p.scalar_only;
  j["finite_loops"] = p.finite_loops;
  j["finite_strings"] = p.finite_strings;
  j["one_sided"] = p.one_sided;
  j["two_sided"] = p.two_sided;
  j["two_sided_if_irrational"] = p.two_sided_if_irrational;
  j["exists_in_limit"] = p.exists_in_limit;
  j["scalar_family"] = p.scalar_family;
  j["one_dimensional_only"] = p.one_dimensional_only;
  j["rational_q"] = p.rational_q ? json(*p.rational_q) : json(nullptr);
  j["loop_dims"] = p.loop_dims;
  j["string_dims"] = p.string_dims;
  json sm = json::array();
  for (double m : p.scalar_moduli) sm.push_back(sig12(m));
  j["scalar_moduli"] = sm;
  j["loop_seed"] = p.loop_seed ? json::array({sig12(p.loop_seed->x()), sig12(p.loop_seed->y())}) : json(nullptr);
  j["transmitter_seeds"] = points_json(p.transmitter_seeds);
  j["receiver_seeds"] = points_json(p.receiver_seeds);
  j["two_sided_seeds"] = points_json(p.two_sided_seeds);
  return j;
}

inline json to_json(const ALResidual& r) {
  return json{{"al1", sig12(r.al1)}, {"al2", sig12(r.al2)}, {"al3", sig12(r.al3)}, {"al4", sig12(r.al4)}, {"al5", sig12(r.al5)}};
}

inline std::string curve_csv(const std::vector<CurveSample>& samples) {
  std::ostringstream os;
  os << "component,r,s\n";
  for (const auto& s : samples) os << s.component << ',' << fmt12(s.r) << ',' << fmt12(s.s) << '\n';
  return os.str();
}

inline std::string orbit_csv(const OrbitSegment& seg) {
  std::ostringstream os;
  os << "index,d,dtilde\n";
  for (std::size_t i = 0; i < seg.points.size(); ++i) {
    os << i << ',' << fmt12(seg.points[i].x()) << ',' << fmt12(seg.points[i].y()) << '\n';
  }
  return os.str();
}

/// Graph JSON: {"n": 3, "edges": [[0,1],[1,2]]}
inline DirectedGraph graph_from_json(const json& j) {
  try {
    std::vector<std::pair<int, int>> edges;
    for (const json& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return DirectedGraph(j.at("n").get<int>(), std::move(edges));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

/// Either a surface block (alpha0, alpha1, c0 or c, ordering keys) or an algebra block
/// (trA or theta, detA, a, chat1 or chat), plus free-form options.
struct Scenario {
  std::optional<SurfaceSpec> surface;
  OrderingSpec ordering;
  std::optional<AlgebraParams> algebra;
  json options = json::object();

  AlgebraParams algebra_params() const {
    if (algebra) return *algebra;
    return algebra_from_surface(*surface, ordering);
  }

  /// Surface data; for an algebra block it is recovered with the block's hbar/delta1t
  /// (default hbar = 1, delta1t = 0; the class does not depend on them when 1+2ħ²δ̃₁ > 0).
  SurfaceSpec surface_spec() const {
    if (surface) return *surface;
    return surface_from_algebra(*algebra, ordering.hbar, ordering.delta1t).surface;
  }
};

namespace detail {
inline double num(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw Error(ErrorCode::parse_error, std::string("'") + key + "' must be a number");
  return v.get<double>();
}
inline std::optional<double> opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return num(j, key);
}
}  // namespace detail

inline Scenario scenario_from_json(const json& j) {
  using detail::num;
  using detail::opt;
  try {
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "scenario must be a JSON object");
    const bool has_s = j.contains("surface"), has_a = j.contains("algebra");
    if (has_s == has_a) throw Error(ErrorCode::parse_error, "scenario needs exactly one of 'surface' or 'algebra'");
    Scenario sc;
    if (j.contains("options")) sc.options = j.at("options");
    if (has_s) {
      const json& b = j.at("surface");
      const double a0 = num(b, "alpha0"), a1 = num(b, "alpha1");
      const auto c0 = opt(b, "c0");
      const auto c = opt(b, "c");
      if (c0.has_value() == c.has_value()) throw Error(ErrorCode::parse_error, "surface needs exactly one of 'c0' or 'c'");
      sc.surface = c0 ? SurfaceSpec{a0, a1, *c0} : SurfaceSpec::from_c(a0, a1, *c);
      const double hbar = opt(b, "hbar").value_or(0.1);
      sc.ordering = OrderingSpec::symmetric(a1, hbar);
      if (auto v = opt(b, "beta1t")) sc.ordering.beta1t = *v;
      if (auto v = opt(b, "gamma1t")) sc.ordering.gamma1t = *v;
      if (auto v = opt(b, "delta1t")) sc.ordering.delta1t = *v;
    } else {
      const json& b = j.at("algebra");
      AlgebraParams p;
      const auto tr = opt(b, "trA");
      const auto th = opt(b, "theta");
      const auto thpi = opt(b, "theta_over_pi");
      if (static_cast<int>(tr.has_value()) + th.has_value() + thpi.has_value() != 1) {
        throw Error(ErrorCode::parse_error, "algebra needs exactly one of 'trA', 'theta', 'theta_over_pi'");
      }
      p.trA = tr ? *tr : 2.0 * std::cos(2.0 * (th ? *th : *thpi * std::numbers::pi));
      p.detA = opt(b, "detA").value_or(1.0);
      p.a = num(b, "a");
      const auto c1 = opt(b, "chat1");
      const auto ch = opt(b, "chat");
      if (c1 && ch) throw Error(ErrorCode::parse_error, "give 'chat1' or 'chat', not both");
      if (c1) p.chat1 = c1;
      if (ch) {
        if (!p.det_is_one() || p.delta() == 0.0) throw Error(ErrorCode::parse_error, "'chat' needs det A = 1 and tr A != 2");
        p.chat1 = AlgebraParams::from_chat(p.trA, p.a, *ch).chat1;
      }
      sc.algebra = p;
      sc.ordering.hbar = opt(b, "hbar").value_or(1.0);
      sc.ordering.delta1t = opt(b, "delta1t").value_or(0.0);
    }
    return sc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

}  // namespace affrep
