#include "dgopt/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace dgopt {

namespace {
constexpr double pi = std::numbers::pi;
}

OcpProblem ManufacturedCase::problem() const {
  OcpProblem p;
  p.params = params;
  p.alpha = alpha;
  p.bounds = bounds;
  p.source = source;
  p.desired = desired;
  p.initial = initial;
  p.horizon = horizon;
  return p;
}

ManufacturedCase make_case(std::string name, const FieldClosedForm& state, const FieldClosedForm& adjoint,
                           SipgParams params, double alpha, ControlBounds bounds, double horizon) {
  ManufacturedCase c;
  c.name = std::move(name);
  c.params = params;
  c.alpha = alpha;
  c.bounds = bounds;
  c.horizon = horizon;
  c.exact_state = state.value;
  c.exact_adjoint = adjoint.value;
  c.exact_control = [p = adjoint.value, alpha, bounds](Vec2 x, double t) { return bounds.clamp(p(x, t) / alpha); };
  c.source = [state, control = c.exact_control, params](Vec2 x, double t) {
    return state.dt(x, t) - params.epsilon * state.laplacian(x, t) + params.beta.x * state.dx(x, t) +
           params.beta.y * state.dy(x, t) + params.reaction * state.value(x, t) - control(x, t);
  };
  c.desired = [state, adjoint, params](Vec2 x, double t) {
    return state.value(x, t) - adjoint.dt(x, t) - params.epsilon * adjoint.laplacian(x, t) -
           params.beta.x * adjoint.dx(x, t) - params.beta.y * adjoint.dy(x, t) +
           params.reaction * adjoint.value(x, t);
  };
  c.initial = [value = state.value](Vec2 x) { return value(x, 0.0); };
  return c;
}

namespace {

double sep(Vec2 x) { return std::sin(2.0 * pi * x.x) * std::sin(2.0 * pi * x.y); }
double sep_dx(Vec2 x) { return 2.0 * pi * std::cos(2.0 * pi * x.x) * std::sin(2.0 * pi * x.y); }
double sep_dy(Vec2 x) { return 2.0 * pi * std::sin(2.0 * pi * x.x) * std::cos(2.0 * pi * x.y); }

} // namespace

ManufacturedCase make_example1(double alpha) {
  SipgParams params;
  params.epsilon = 1e-5;
  params.beta = {1.0, 0.0};
  params.reaction = 1.0;

  FieldClosedForm y;
  y.value = [](Vec2 x, double t) { return std::exp(-t) * sep(x); };
  y.dt = [](Vec2 x, double t) { return -std::exp(-t) * sep(x); };
  y.dx = [](Vec2 x, double t) { return std::exp(-t) * sep_dx(x); };
  y.dy = [](Vec2 x, double t) { return std::exp(-t) * sep_dy(x); };
  y.laplacian = [](Vec2 x, double t) { return -8.0 * pi * pi * std::exp(-t) * sep(x); };

  FieldClosedForm p;
  p.value = [](Vec2 x, double t) { return std::exp(-t) * (1.0 - t) * sep(x); };
  p.dt = [](Vec2 x, double t) { return std::exp(-t) * (t - 2.0) * sep(x); };
  p.dx = [](Vec2 x, double t) { return std::exp(-t) * (1.0 - t) * sep_dx(x); };
  p.dy = [](Vec2 x, double t) { return std::exp(-t) * (1.0 - t) * sep_dy(x); };
  p.laplacian = [](Vec2 x, double t) { return -8.0 * pi * pi * std::exp(-t) * (1.0 - t) * sep(x); };

  return make_case("example1", y, p, params, alpha, ControlBounds::from(0.0), 1.0);
}

namespace {

// Shared pieces of the layered benchmark solution. The traveling-wave
// variable w is affine in space and time, so the chain rule only needs the
// constant slopes wx (equal for both coordinates) and wt.
struct LayeredFields {
  double eps;
  double wx, wt;
  std::function<double(Vec2, double)> w;

  double E(double wv) const { return std::exp((std::cos(wv) - 1.0) / std::sqrt(eps)); }
  double dE(double wv) const { return -(std::sin(wv) / std::sqrt(eps)) * E(wv); }
  double ddE(double wv) const {
    const double s = std::sin(wv), c = std::cos(wv), r = std::sqrt(eps);
    return (s * s / eps - c / r) * E(wv);
  }
  double G(double wv) const {
    const double s = std::sin(wv), c = std::cos(wv), r = std::sqrt(eps);
    return s / (2.0 * r) + 8.0 * eps * pi * pi + 0.5 * r * c - 0.5 * s * s;
  }
  double dG(double wv) const {
    const double s = std::sin(wv), c = std::cos(wv), r = std::sqrt(eps);
    return c / (2.0 * r) - 0.5 * r * s - s * c;
  }
  double ddG(double wv) const {
    const double s = std::sin(wv), c = std::cos(wv), r = std::sqrt(eps);
    return -s / (2.0 * r) - 0.5 * r * c - std::cos(2.0 * wv);
  }

  double phi(double wv, double t) const { return std::sin(pi * t) * G(wv) - pi * std::cos(pi * t); }
  double phi_t(double wv, double t) const {
    return pi * std::cos(pi * t) * G(wv) + std::sin(pi * t) * dG(wv) * wt + pi * pi * std::sin(pi * t);
  }
  double phi_x(double wv, double t) const { return std::sin(pi * t) * dG(wv) * wx; }
  double phi_lap(double wv, double t) const { return std::sin(pi * t) * ddG(wv) * 2.0 * wx * wx; }
};

} // namespace

ManufacturedCase make_example2(Example2Tx tx, double alpha, double epsilon) {
  SipgParams params;
  params.epsilon = epsilon;
  params.beta = {0.5, 0.5};
  params.reaction = 1.0;

  LayeredFields lf;
  lf.eps = epsilon;
  switch (tx) {
    case Example2Tx::characteristic:
      lf.wx = 1.0;
      lf.wt = -1.0;
      lf.w = [](Vec2 x, double t) { return x.x + x.y - t; };
      break;
    case Example2Tx::zero:
      lf.wx = 0.0;
      lf.wt = 0.0;
      lf.w = [](Vec2, double) { return 0.0; };
      break;
  }

  FieldClosedForm p;
  p.value = [lf](Vec2 x, double t) { return std::sin(pi * t) * sep(x) * lf.E(lf.w(x, t)); };
  p.dt = [lf](Vec2 x, double t) {
    const double wv = lf.w(x, t);
    return pi * std::cos(pi * t) * sep(x) * lf.E(wv) + std::sin(pi * t) * sep(x) * lf.dE(wv) * lf.wt;
  };
  p.dx = [lf](Vec2 x, double t) {
    const double wv = lf.w(x, t);
    return std::sin(pi * t) * (sep_dx(x) * lf.E(wv) + sep(x) * lf.dE(wv) * lf.wx);
  };
  p.dy = [lf](Vec2 x, double t) {
    const double wv = lf.w(x, t);
    return std::sin(pi * t) * (sep_dy(x) * lf.E(wv) + sep(x) * lf.dE(wv) * lf.wx);
  };
  p.laplacian = [lf](Vec2 x, double t) {
    const double wv = lf.w(x, t);
    const double cross = 2.0 * (sep_dx(x) + sep_dy(x)) * lf.dE(wv) * lf.wx;
    return std::sin(pi * t) *
           (-8.0 * pi * pi * sep(x) * lf.E(wv) + cross + sep(x) * lf.ddE(wv) * 2.0 * lf.wx * lf.wx);
  };

  FieldClosedForm y;
  y.value = [lf](Vec2 x, double t) {
    const double wv = lf.w(x, t);
    return sep(x) * lf.E(wv) * lf.phi(wv, t);
  };
  y.dt = [lf](Vec2 x, double t) {
    const double wv = lf.w(x, t);
    return sep(x) * (lf.dE(wv) * lf.wt * lf.phi(wv, t) + lf.E(wv) * lf.phi_t(wv, t));
  };
  y.dx = [lf](Vec2 x, double t) {
    const double wv = lf.w(x, t);
    return sep_dx(x) * lf.E(wv) * lf.phi(wv, t) +
           sep(x) * (lf.dE(wv) * lf.wx * lf.phi(wv, t) + lf.E(wv) * lf.phi_x(wv, t));
  };
  y.dy = [lf](Vec2 x, double t) {
    const double wv = lf.w(x, t);
    return sep_dy(x) * lf.E(wv) * lf.phi(wv, t) +
           sep(x) * (lf.dE(wv) * lf.wx * lf.phi(wv, t) + lf.E(wv) * lf.phi_x(wv, t));
  };
  y.laplacian = [lf](Vec2 x, double t) {
    const double wv = lf.w(x, t);
    const double Ev = lf.E(wv), dEv = lf.dE(wv);
    const double phiv = lf.phi(wv, t), phix = lf.phi_x(wv, t);
    double lap = -8.0 * pi * pi * sep(x) * Ev * phiv;
    lap += 2.0 * (sep_dx(x) + sep_dy(x)) * (dEv * lf.wx * phiv + Ev * phix);
    // lap(E phi) on the second factor: both gradient components coincide.
    lap += sep(x) * (lf.ddE(wv) * 2.0 * lf.wx * lf.wx * phiv + 4.0 * dEv * lf.wx * phix + Ev * lf.phi_lap(wv, t));
    return lap;
  };

  return make_case("example2", y, p, params, alpha, ControlBounds::box(0.0, 0.5), 1.0);
}

ErrorTriple compute_errors(const DgSpace& space, const TimeGrid& grid, const OcpSolution& solution,
                           const ManufacturedCase& exact) {
  if (solution.state.num_nodes() != grid.num_nodes())
    throw std::invalid_argument("compute_errors: solution does not match the time grid");

  ErrorTriple e;
  double control_sq = 0.0;
  const double k = grid.dt();
  for (int m = 0; m <= grid.steps; ++m) {
    const double t = grid.node(m);
    e.state = std::max(e.state, space.l2_error(solution.state.node(m), exact.exact_state, t));
    e.adjoint = std::max(e.adjoint, space.l2_error(solution.adjoint.node(m), exact.exact_adjoint, t));
    const double eu = space.l2_error(solution.control.node(m), exact.exact_control, t);
    const double weight = (m == 0 || m == grid.steps) ? 0.5 : 1.0;
    control_sq += weight * k * eu * eu;
  }
  e.control = std::sqrt(control_sq);
  return e;
}

double convergence_rate(double e_coarse, double e_fine, double step_ratio) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0))
    throw std::invalid_argument("convergence_rate: errors must be positive");
  if (!(step_ratio > 1.0)) throw std::invalid_argument("convergence_rate: step ratio must exceed 1");
  return std::log(e_coarse / e_fine) / std::log(step_ratio);
}

SchemeConfig scheme_from_name(const std::string& name, DoConvention convention) {
  SchemeConfig config;
  config.convention = convention;
  if (name == "be") {
    config.kind = TimeSchemeKind::theta;
    config.theta = 1.0;
    config.variant = AdjointVariant::optimize_then_discretize;
  } else if (name == "cn-od") {
    config.kind = TimeSchemeKind::theta;
    config.theta = 0.5;
    config.variant = AdjointVariant::optimize_then_discretize;
  } else if (name == "cn-do") {
    config.kind = TimeSchemeKind::theta;
    config.theta = 0.5;
    config.variant = AdjointVariant::discretize_then_optimize;
  } else if (name == "dg0") {
    config.kind = TimeSchemeKind::dg0;
  } else if (name == "dg1") {
    config.kind = TimeSchemeKind::dg1;
  } else {
    throw std::invalid_argument("unknown scheme '" + name + "' (expected be, cn-od, cn-do, dg0 or dg1)");
  }
  return config;
}

namespace {

ManufacturedCase case_for(const StudyConfig& config) {
  if (config.example != 1 && config.example != 2)
    throw std::invalid_argument("run_study: example must be 1 or 2");
  const double alpha = config.alpha.value_or(1.0);
  ManufacturedCase c = (config.example == 1) ? make_example1(alpha) : make_example2(config.tx, alpha);
  c.params.sigma = config.sigma;
  return c;
}

void write_snapshots(const StudyConfig& config, const DgSpace& space, const TimeGrid& grid,
                     const OcpSolution& sol) {
  for (double t : config.snapshot_times) {
    int nearest = 0;
    for (int m = 1; m <= grid.steps; ++m)
      if (std::abs(grid.node(m) - t) < std::abs(grid.node(nearest) - t)) nearest = m;
    const struct {
      const char* tag;
      const Trajectory* traj;
    } fields[] = {{"y", &sol.state}, {"p", &sol.adjoint}, {"u", &sol.control}};
    for (const auto& f : fields) {
      char name[64];
      std::snprintf(name, sizeof(name), "%s_t%g.csv", f.tag, t);
      std::ofstream out(config.out_dir / name);
      export_field(space, f.traj->node(nearest), out);
    }
  }
}

} // namespace

StudyResult run_study(const StudyConfig& config) {
  const ManufacturedCase exact = case_for(config);
  const SchemeConfig scheme = scheme_from_name(config.scheme, config.do_convention);

  StudyResult result;
  result.example = config.example;
  result.scheme = config.scheme;

  if (!config.out_dir.empty()) std::filesystem::create_directories(config.out_dir);

  const StudyLevel* previous = nullptr;
  for (int level : config.levels) {
    StudyLevel row;
    row.level = level;
    row.k = exact.horizon / level;
    const auto start = std::chrono::steady_clock::now();
    try {
      if (level < 1) throw std::invalid_argument("level must be at least 1");
      const Mesh mesh = build_uniform_mesh(level);
      const DgSpace space(mesh);
      const TimeGrid grid{exact.horizon, level};
      PdasOptions options{config.tol, config.max_iter};
      const OcpSolution sol = pdas_solve(exact.problem(), space, grid, scheme, options);
      row.errors = compute_errors(space, grid, sol, exact);
      row.pdas_iterations = sol.iterations;
      row.ok = true;

      if (!config.out_dir.empty()) {
        char name[64];
        std::snprintf(name, sizeof(name), "pdas_%s_L%d.csv", config.scheme.c_str(), level);
        std::ofstream log(config.out_dir / name);
        write_pdas_log(sol, log);
        if (level == config.levels.back()) write_snapshots(config, space, grid, sol);
      }
    } catch (const std::exception& err) {
      row.ok = false;
      row.message = err.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (row.ok && previous != nullptr && previous->ok) {
      const double ratio = previous->k / row.k;
      row.rate_state = convergence_rate(previous->errors.state, row.errors.state, ratio);
      row.rate_adjoint = convergence_rate(previous->errors.adjoint, row.errors.adjoint, ratio);
      row.rate_control = convergence_rate(previous->errors.control, row.errors.control, ratio);
    }
    result.levels.push_back(std::move(row));
    previous = &result.levels.back();
  }

  result.all_ok = true;
  for (const StudyLevel& row : result.levels) result.all_ok = result.all_ok && row.ok;

  if (!config.out_dir.empty()) {
    std::ofstream csv(config.out_dir / "table.csv");
    write_table_csv(result, csv);
    std::ofstream md(config.out_dir / "table.md");
    write_table_markdown(result, md);
  }
  return result;
}

namespace {

std::string fmt_err(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

std::string fmt_rate(const std::optional<double>& r) {
  if (!r) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *r);
  return buf;
}

std::string fmt_k(double k) {
  char buf[32];
  const double inv = 1.0 / k;
  if (std::abs(inv - std::round(inv)) < 1e-9)
    std::snprintf(buf, sizeof(buf), "1/%d", static_cast<int>(std::round(inv)));
  else
    std::snprintf(buf, sizeof(buf), "%.6g", k);
  return buf;
}

} // namespace

void write_table_csv(const StudyResult& result, std::ostream& out) {
  out << "k,e_y,rate_y,e_p,rate_p,e_u,rate_u\n";
  for (const StudyLevel& row : result.levels) {
    char kbuf[32];
    std::snprintf(kbuf, sizeof(kbuf), "%.10g", row.k);
    if (!row.ok) {
      out << kbuf << ",failed,,failed,,failed,\n";
      continue;
    }
    out << kbuf << ',' << fmt_err(row.errors.state) << ',' << fmt_rate(row.rate_state) << ','
        << fmt_err(row.errors.adjoint) << ',' << fmt_rate(row.rate_adjoint) << ',' << fmt_err(row.errors.control)
        << ',' << fmt_rate(row.rate_control) << '\n';
  }
}

void write_table_markdown(const StudyResult& result, std::ostream& out) {
  out << "| k | e_y | Rate | e_p | Rate | e_u | Rate |\n";
  out << "|---|-----|------|-----|------|-----|------|\n";
  for (const StudyLevel& row : result.levels) {
    if (!row.ok) {
      out << "| " << fmt_k(row.k) << " | failed: " << row.message << " | | | | | |\n";
      continue;
    }
    auto dash = [](const std::string& s) { return s.empty() ? std::string("-") : s; };
    out << "| " << fmt_k(row.k) << " | " << fmt_err(row.errors.state) << " | " << dash(fmt_rate(row.rate_state))
        << " | " << fmt_err(row.errors.adjoint) << " | " << dash(fmt_rate(row.rate_adjoint)) << " | "
        << fmt_err(row.errors.control) << " | " << dash(fmt_rate(row.rate_control)) << " |\n";
  }
}

} // namespace dgopt
