// affrep: classify surfaces, build and verify representations, export curve data.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "affrep/affrep.hpp"

namespace {

using affrep::Error;
using affrep::ErrorCode;
using affrep::json;

enum Exit { exit_ok = 0, exit_tolerance = 1, exit_parse = 2, exit_unsupported = 3, exit_construction = 4 };

struct Globals {
  double tol_orbit = affrep::Tolerances{}.orbit;
  double tol_relation = affrep::Tolerances{}.relation;
  int nmax = 12;
  int depth = 50;

  affrep::Tolerances tolerances() const {
    affrep::Tolerances t;
    t.orbit = tol_orbit;
    t.relation = tol_relation;
    return t;
  }
  affrep::ExistenceOptions existence() const {
    affrep::ExistenceOptions o;
    o.nmax = nmax;
    o.depth = depth;
    o.tol = tolerances();
    return o;
  }
};

// Errors raised while reading a scenario are input problems (exit 2) unless they name an
// unsupported regime; errors raised while constructing are exit 4.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

struct Prepared {
  affrep::Scenario scenario;
  affrep::AlgebraParams params;
  affrep::SurfaceSpec surface;
};

Prepared prepare(const std::string& path) {
  try {
    Prepared p;
    p.scenario = affrep::scenario_from_json(affrep::parse_json_text(read_file(path)));
    p.params = p.scenario.algebra_params();
    p.surface = p.scenario.surface_spec();
    return p;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::unsupported_regime) throw;
    throw InputError(e.what());
  }
}

std::optional<affrep::Point> parse_point(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw InputError("point must be written as r,s");
  try {
    return affrep::Point(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
  } catch (const std::exception&) {
    throw InputError("point must be written as r,s");
  }
}

json classification_report(const Prepared& p, const Globals& g) {
  const affrep::SurfaceClass cls = affrep::classify_surface(p.surface);
  json j = affrep::to_json(cls);
  j["surface"] = affrep::to_json(p.surface);
  if (!p.scenario.algebra) j["ordering"] = affrep::to_json(p.scenario.ordering);
  j["algebra"] = affrep::to_json(p.params);
  if (!p.params.det_is_one()) throw Error(ErrorCode::unsupported_regime, "det A != 1: no constraint curve or Casimir level");
  const affrep::ConstraintCurve curve(p.params);
  const auto cc = affrep::classify_curve(curve);
  const auto ax = affrep::axes_crossings(curve);
  json cj;
  cj["shape"] = affrep::to_string(cc.shape);
  cj["quadrant"] = affrep::to_string(cc.quadrant);
  cj["r_plus"] = ax.real_crossings ? json(affrep::sig12(ax.r_plus)) : json(nullptr);
  cj["r_minus"] = ax.real_crossings ? json(affrep::sig12(ax.r_minus)) : json(nullptr);
  cj["chat"] = affrep::opt_num(p.params.chat());
  j["curve"] = cj;
  const affrep::ExistenceProfile prof = affrep::existence_profile(p.params, cls, g.existence());
  j["profile"] = affrep::to_json(prof);
  j["witnesses"] = prof.witnesses;
  return j;
}

int cmd_classify(const std::string& path, const Globals& g) {
  const Prepared p = prepare(path);
  std::cout << classification_report(p, g).dump(2) << '\n';
  return exit_ok;
}

int cmd_existence(const std::string& path, const Globals& g) {
  const Prepared p = prepare(path);
  const json full = classification_report(p, g);
  json j;
  j["code"] = full["code"];
  j["algebra"] = full["algebra"];
  j["profile"] = full["profile"];
  j["witnesses"] = full["witnesses"];
  std::cout << j.dump(2) << '\n';
  return exit_ok;
}

struct BuildArgs {
  std::string kind;
  int n = -1;
  double beta = 0.0;
  std::string x;
  std::string near;
  double d0 = -1.0;
  double modulus = -1.0;
  bool induce = false;
  std::string emit_curve;
};

/// Construction failures carry the condition that was violated.
std::string explain_failure(const std::string& kind, const affrep::AlgebraParams& p, const Error& e) {
  const bool det1 = p.det_is_one();
  if (kind == "loop" && det1 && p.trA >= 2.0) {
    return "no loop: no periodic points other than fix-points when det A = 1 and tr A >= 2 (" + std::string(e.what()) + ")";
  }
  if (kind == "string" && det1 && p.trA >= 2.0 && p.a >= 0.0) {
    return "no string: there are no x,y>0 with L^n(x,0) = (0,y) when Delta <= 0 and a >= 0 (" + std::string(e.what()) + ")";
  }
  if (e.code() == ErrorCode::orbit_leaves_quadrant) {
    return "orbit leaves the positive quadrant" + (e.index() ? " at step " + std::to_string(*e.index()) : std::string()) +
           " (" + e.what() + ")";
  }
  return e.what();
}

int cmd_build(const std::string& path, BuildArgs args, const Globals& g) {
  const Prepared p = prepare(path);
  const json& opts = p.scenario.options;
  if (args.kind.empty()) args.kind = opts.value("kind", std::string("loop"));
  if (args.n < 0) args.n = opts.value("n", -1);
  if (args.x.empty()) args.x = opts.value("x", std::string());
  if (args.near.empty()) args.near = opts.value("near", std::string());
  if (args.beta == 0.0) args.beta = opts.value("beta", 0.0);
  if (args.d0 < 0.0) args.d0 = opts.value("d0", -1.0);
  if (args.modulus < 0.0) args.modulus = opts.value("modulus", -1.0);
  const auto tol = g.tolerances();
  const affrep::AlgebraParams& params = p.params;
  const auto seed = parse_point(args.x);
  const auto near = parse_point(args.near);

  affrep::Representation rep;
  try {
    if (args.kind == "loop") {
      affrep::Point x1;
      int n = args.n;
      if (seed) {
        x1 = *seed;
      } else if (near) {
        x1 = affrep::nearest_point(affrep::ConstraintCurve(params), *near);
      } else {
        if (!params.det_is_one()) throw Error(ErrorCode::unsupported_regime, "loop search needs det A = 1 or an explicit --x");
        const auto prof = affrep::existence_profile(params, affrep::classify_surface(p.surface), g.existence());
        if (!prof.loop_seed) throw Error(ErrorCode::not_periodic, "no loop below nmax = " + std::to_string(g.nmax));
        x1 = *prof.loop_seed;
        if (n < 0) n = prof.loop_dims.front();
      }
      if (n < 0) {
        const auto orb = affrep::find_periodic_orbit(params, x1, static_cast<unsigned>(g.nmax), tol.orbit);
        if (!orb) throw Error(ErrorCode::not_periodic, "no period <= nmax from the seed");
        n = static_cast<int>(orb->period);
      }
      rep = affrep::build_loop(params, x1, n, args.beta, tol);
    } else if (args.kind == "string") {
      if (args.n < 2) throw InputError("string needs --n >= 2");
      rep = affrep::build_string(params, args.n, tol);
    } else if (args.kind == "one-sided") {
      const int N = args.n < 0 ? 4 : args.n;
      double d0 = args.d0;
      if (d0 <= 0.0) {
        const auto ax = affrep::axes_crossings(affrep::ConstraintCurve(params));
        if (!ax.real_crossings || !(ax.r_plus > 0.0)) {
          throw Error(ErrorCode::orbit_leaves_quadrant, "the constraint curve has no positive axis crossing");
        }
        d0 = ax.r_plus;
      }
      rep = affrep::build_one_sided(params, d0, N, tol);
    } else if (args.kind == "two-sided") {
      const int N = args.n < 0 ? 3 : args.n;
      affrep::Point x0;
      if (seed) {
        x0 = *seed;
      } else {
        std::optional<affrep::Point> tip;
        for (const auto& y : affrep::diagonal_points(affrep::ConstraintCurve(params))) {
          if (affrep::strictly_positive(y) && (!tip || y.x() < tip->x())) tip = y;
        }
        if (!tip) throw Error(ErrorCode::orbit_leaves_quadrant, "the constraint curve has no tip in the positive quadrant");
        x0 = *tip;
      }
      rep = affrep::build_two_sided(params, x0, N, tol);
    } else if (args.kind == "scalar") {
      double m = args.modulus;
      if (m < 0.0) {
        const auto prof = affrep::existence_profile(params, affrep::classify_surface(p.surface), g.existence());
        if (prof.scalar_moduli.empty()) throw Error(ErrorCode::no_string, "no one-dimensional representation at this level");
        m = prof.scalar_moduli.back();
      }
      rep = affrep::build_scalar(params, std::polar(m, args.beta));
    } else {
      throw InputError("unknown kind '" + args.kind + "'");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::unsupported_regime) throw;
    std::cerr << "error: " << explain_failure(args.kind, params, e) << '\n';
    return exit_construction;
  }

  json out = affrep::to_json(rep);
  if (args.induce) {
    const affrep::AffineMap2 L(params.trA, -params.detA, 1.0, 0.0, params.a, 0.0);
    try {
      const auto psi = affrep::psi_coefficients(L, params.a);
      const auto al = affrep::induce_from_cla(rep, psi);
      json aj;
      aj["psi"] = json{{"k", affrep::sig12(psi.k)}, {"kt", affrep::sig12(psi.kt)}, {"m", affrep::sig12(psi.m)},
                       {"n", affrep::sig12(psi.n)}, {"mt", affrep::sig12(psi.mt)}, {"nt", affrep::sig12(psi.nt)},
                       {"branch", psi.branch}};
      aj["E"] = al.E_diag;
      aj["Et"] = al.Et_diag;
      for (auto& v : aj["E"]) v = affrep::sig12(v.get<double>());
      for (auto& v : aj["Et"]) v = affrep::sig12(v.get<double>());
      aj["residual"] = affrep::to_json(affrep::verify_al_relations(al));
      out["induced"] = aj;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return exit_construction;
    }
  }
  if (!args.emit_curve.empty()) {
    write_file(args.emit_curve + "_orbit.csv", affrep::orbit_csv(rep.orbit));
    if (rep.params.det_is_one() && rep.params.chat1) {
      try {
        write_file(args.emit_curve + "_curve.csv",
                   affrep::curve_csv(affrep::sample_curve(affrep::ConstraintCurve(rep.params), 400)));
      } catch (const Error& e) {
        std::cerr << "warning: " << e.what() << '\n';
      }
    }
  }
  std::cout << out.dump(2) << '\n';
  return exit_ok;
}

int cmd_verify(const std::string& path, const Globals& g) {
  affrep::Representation rep;
  try {
    rep = affrep::representation_from_json(affrep::parse_json_text(read_file(path)));
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  const affrep::RelationReport r = affrep::verify_relations(rep);
  json j = affrep::to_json(r);
  j["dim"] = rep.dim;
  j["tolerance"] = g.tol_relation;
  const bool pass = r.within(g.tol_relation);
  j["pass"] = pass;
  std::cout << j.dump(2) << '\n';
  return pass ? exit_ok : exit_tolerance;
}

int cmd_curve(const std::string& path, int count, double extent) {
  const Prepared p = prepare(path);
  if (!p.params.det_is_one()) throw Error(ErrorCode::unsupported_regime, "constraint curve needs det A = 1");
  if (!p.params.chat1) throw InputError("constraint curve needs chat1");
  try {
    std::cout << affrep::curve_csv(affrep::sample_curve(affrep::ConstraintCurve(p.params), count, extent));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_construction;
  }
  return exit_ok;
}

std::vector<double> grid_axis(const json& spec, const char* name) {
  if (spec.is_array()) {
    std::vector<double> v;
    for (const auto& x : spec) {
      if (!x.is_number()) throw InputError(std::string("grid axis '") + name + "' must hold numbers");
      v.push_back(x.get<double>());
    }
    return v;
  }
  if (spec.is_number()) return {spec.get<double>()};
  if (spec.is_object()) {
    const double from = spec.at("from").get<double>(), to = spec.at("to").get<double>();
    const int count = spec.at("count").get<int>();
    if (count < 1) throw InputError("grid count must be positive");
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
    return v;
  }
  throw InputError(std::string("bad grid axis '") + name + "'");
}

int cmd_sweep(const std::string& path, int jobs, const Globals& g) {
  std::vector<double> a0s, a1s, c0s;
  double hbar = 0.1;
  try {
    const json grid = affrep::parse_json_text(read_file(path));
    a0s = grid_axis(grid.at("alpha0"), "alpha0");
    a1s = grid_axis(grid.at("alpha1"), "alpha1");
    c0s = grid_axis(grid.at("c0"), "c0");
    hbar = grid.value("hbar", 0.1);
  } catch (const json::exception& e) {
    throw InputError(e.what());
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  const std::size_t total = a0s.size() * a1s.size() * c0s.size();
  std::vector<std::string> lines(total);
  auto work = [&](std::size_t i) {
    const double a0 = a0s[i / (a1s.size() * c0s.size())];
    const double a1 = a1s[(i / c0s.size()) % a1s.size()];
    const double c0 = c0s[i % c0s.size()];
    json rec;
    rec["index"] = i;
    rec["alpha0"] = affrep::sig12(a0);
    rec["alpha1"] = affrep::sig12(a1);
    rec["c0"] = affrep::sig12(c0);
    try {
      const affrep::SurfaceSpec s{a0, a1, c0};
      const auto cls = affrep::classify_surface(s);
      rec["code"] = cls.code;
      rec["geometry"] = cls.geometry;
      const auto params = affrep::algebra_from_surface(s, affrep::OrderingSpec::symmetric(a1, hbar));
      rec["algebra"] = affrep::to_json(params);
      rec["profile"] = affrep::to_json(affrep::existence_profile(params, cls, g.existence()));
    } catch (const Error& e) {
      rec["error"] = e.what();
    }
    lines[i] = rec.dump();
  };
  const int k = std::max(1, jobs);
  if (k == 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (int shard = 0; shard < k; ++shard) {
      pool.emplace_back([&, shard] {
        for (std::size_t i = static_cast<std::size_t>(shard); i < total; i += static_cast<std::size_t>(k)) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& l : lines) std::cout << l << '\n';
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"affrep: representations of C_{L,a} and A_L and their surfaces"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol-orbit", g.tol_orbit, "orbit / period tolerance")->capture_default_str();
  app.add_option("--tol-relation", g.tol_relation, "relation residual tolerance (scaled by dimension)")->capture_default_str();
  app.add_option("--nmax", g.nmax, "largest dimension searched")->capture_default_str();
  app.add_option("--depth", g.depth, "iterations a one-/two-sided seed must survive")->capture_default_str();

  std::string file;
  auto* classify = app.add_subcommand("classify", "classify the surface and report which representations exist");
  classify->add_option("scenario", file, "scenario JSON")->required();
  auto* existence = app.add_subcommand("existence", "existence profile only");
  existence->add_option("scenario", file, "scenario JSON")->required();

  BuildArgs b;
  auto* build = app.add_subcommand("build", "construct a representation");
  build->add_option("scenario", file, "scenario JSON")->required();
  build->add_option("--kind", b.kind, "loop | string | one-sided | two-sided | scalar");
  build->add_option("--n", b.n, "dimension (loop, string) or window depth (one-/two-sided)");
  build->add_option("--beta", b.beta, "loop phase");
  build->add_option("--x", b.x, "explicit seed point r,s");
  build->add_option("--near", b.near, "seed at the point of the curve nearest to r,s");
  build->add_option("--d0", b.d0, "one-sided seed on the r-axis (default r+)");
  build->add_option("--modulus", b.modulus, "|W| for a scalar representation");
  build->add_flag("--induce", b.induce, "also induce the A_L representation through psi");
  build->add_option("--emit-curve", b.emit_curve, "write PREFIX_curve.csv and PREFIX_orbit.csv");

  auto* verify = app.add_subcommand("verify", "check the defining relations of a representation JSON");
  verify->add_option("representation", file, "representation JSON")->required();

  int count = 200;
  double extent = 3.0;
  auto* curve = app.add_subcommand("curve", "sample the constraint curve as CSV");
  curve->add_option("scenario", file, "scenario JSON")->required();
  curve->add_option("--count", count, "points per component")->capture_default_str();
  curve->add_option("--extent", extent, "parameter range of open components")->capture_default_str();

  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "classify every point of an (alpha0, alpha1, c0) grid, one JSON line each");
  sweep->add_option("grid", file, "grid JSON")->required();
  sweep->add_option("--jobs", jobs, "worker threads; output order is unaffected")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_parse;
  }

  try {
    if (*classify) return cmd_classify(file, g);
    if (*existence) return cmd_existence(file, g);
    if (*build) return cmd_build(file, b, g);
    if (*verify) return cmd_verify(file, g);
    if (*curve) return cmd_curve(file, count, extent);
    if (*sweep) return cmd_sweep(file, jobs, g);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_parse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::unsupported_regime ? exit_unsupported
           : e.code() == ErrorCode::parse_error     ? exit_parse
                                                    : exit_construction;
  }
  return exit_ok;
}
