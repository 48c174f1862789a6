#include "dgopt/optimizer.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dgopt {

void OcpProblem::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("OcpProblem: alpha must be positive");
  if (!(bounds.lower < bounds.upper)) throw std::invalid_argument("OcpProblem: lower bound must be below upper bound");
  if (!(params.epsilon > 0.0)) throw std::invalid_argument("OcpProblem: diffusion coefficient must be positive");
  if (params.c0() < 0.0) throw std::invalid_argument("OcpProblem: well-posedness constant r - div(beta)/2 is negative");
  if (!(horizon > 0.0)) throw std::invalid_argument("OcpProblem: horizon must be positive");
}

Trajectory project_control(const Trajectory& p, double alpha, ControlBounds bounds) {
  if (!(alpha > 0.0)) throw std::invalid_argument("project_control: alpha must be positive");
  TimeGrid grid{1.0, p.num_nodes() - 1};
  Trajectory u = Trajectory::zeros(Trajectory::Kind::nodal, grid, p.ndof());
  for (int m = 0; m < p.num_nodes(); ++m)
    u.node(m) = (p.node(m) / alpha).unaryExpr([bounds](double w) { return bounds.clamp(w); });
  return u;
}

ReducedOcp::ReducedOcp(const OcpProblem& problem, const DgSpace& space, const TimeGrid& grid,
                       const SchemeConfig& scheme)
    : problem_(&problem), space_(&space), grid_(grid), scheme_(scheme) {
  problem.validate();
  if (std::abs(grid.horizon - problem.horizon) > 1e-12 * std::max(1.0, problem.horizon))
    throw std::invalid_argument("ReducedOcp: time grid horizon does not match the problem");

  cls_ = classify_edges(space.mesh(), problem.params.beta);
  ops_ = assemble_operators(space, problem.params, cls_);
  switch (scheme.kind) {
    case TimeSchemeKind::theta: theta_.emplace(ops_, grid_, scheme.theta); break;
    case TimeSchemeKind::dg0: dg0_.emplace(ops_, grid_); break;
    case TimeSchemeKind::dg1: dg1_.emplace(ops_, grid_); break;
  }
  f_loads_ = assemble_loads(space, problem.source, grid_);
  yd_loads_ = assemble_loads(space, problem.desired, grid_);
  yd_proj_.reserve(static_cast<size_t>(grid_.num_nodes()));
  for (int m = 0; m <= grid_.steps; ++m) yd_proj_.push_back(space.project(problem.desired, grid_.node(m)));
  y0_ = space.project(problem.initial);
}

Trajectory ReducedOcp::zero_control() const {
  return Trajectory::zeros(Trajectory::Kind::nodal, grid_, space_->ndof());
}

Trajectory ReducedOcp::solve_state(const Trajectory& control) const {
  switch (scheme_.kind) {
    case TimeSchemeKind::theta: return theta_->state_sweep(f_loads_, control, y0_);
    case TimeSchemeKind::dg0: return dg0_->state_sweep(f_loads_, control, y0_);
    case TimeSchemeKind::dg1: return dg1_->state_sweep(f_loads_, control, y0_);
  }
  throw std::logic_error("unreachable");
}

Trajectory ReducedOcp::solve_adjoint(const Trajectory& state) const {
  switch (scheme_.kind) {
    case TimeSchemeKind::theta:
      if (scheme_.variant == AdjointVariant::optimize_then_discretize)
        return theta_->adjoint_sweep_od(yd_loads_, state);
      return theta_->adjoint_sweep_do(yd_loads_, state,
                                      scheme_.convention == DoConvention::endpoint_weighted
                                          ? DoInitialRow::lagrangian_row
                                          : DoInitialRow::implicit_row);
    case TimeSchemeKind::dg0: return dg0_->adjoint_sweep(yd_loads_, state);
    case TimeSchemeKind::dg1: return dg1_->adjoint_sweep(yd_loads_, state);
  }
  throw std::logic_error("unreachable");
}

Trajectory ReducedOcp::control_candidates(const Trajectory& adjoint) const {
  const double alpha = problem_->alpha;
  const int last = grid_.steps;

  const bool weighted_theta_do = scheme_.kind == TimeSchemeKind::theta &&
                                 scheme_.variant == AdjointVariant::discretize_then_optimize &&
                                 scheme_.convention == DoConvention::endpoint_weighted;
  if (!weighted_theta_do) {
    Trajectory w = Trajectory::zeros(Trajectory::Kind::nodal, grid_, adjoint.ndof());
    for (int m = 0; m <= last; ++m) w.node(m) = adjoint.node(m) / alpha;
    return w;
  }

  // Endpoint-weighted variational inequality rows of the discrete Lagrangian.
  const double th = scheme_.theta, om = 1.0 - scheme_.theta;
  Trajectory w = Trajectory::zeros(Trajectory::Kind::nodal, grid_, adjoint.ndof());
  w.node(0) = (2.0 * om / alpha) * adjoint.node(1);
  for (int m = 1; m < last; ++m) w.node(m) = (th * adjoint.node(m) + om * adjoint.node(m + 1)) / alpha;
  w.node(last) = (2.0 * th / alpha) * adjoint.node(last);
  return w;
}

double ReducedOcp::cost(const Trajectory& control, const Trajectory& state) const {
  const double k = grid_.dt();
  const double alpha = problem_->alpha;
  const int last = grid_.steps;
  const SparseMat& M = ops_.mass;

  auto msq = [&M](const Vector& v) { return v.dot(M * v); };
  auto mdot = [&M](const Vector& a, const Vector& b) { return a.dot(M * b); };

  switch (scheme_.kind) {
    case TimeSchemeKind::theta: {
      // Rectangle rule for the tracking term, trapezoidal rule for the
      // control term.
      double tracking = 0.0;
      for (int m = 0; m < last; ++m) tracking += msq(state.node(m) - yd_proj_[static_cast<size_t>(m)]);
      double ctrl = 0.5 * msq(control.node(0)) + 0.5 * msq(control.node(last));
      for (int m = 1; m < last; ++m) ctrl += msq(control.node(m));
      return 0.5 * k * tracking + 0.5 * alpha * k * ctrl;
    }
    case TimeSchemeKind::dg0: {
      double total = 0.0;
      for (int m = 1; m <= last; ++m)
        total += 0.5 * k * msq(state.node(m) - yd_proj_[static_cast<size_t>(m)]) +
                 0.5 * alpha * k * msq(control.node(m));
      return total;
    }
    case TimeSchemeKind::dg1: {
      if (state.kind() != Trajectory::Kind::dg1)
        throw std::invalid_argument("discrete_cost: the linear-in-time scheme needs the interval representation");
      double total = 0.0;
      for (int m = 1; m <= last; ++m) {
        const auto& pair = state.interval(m);
        const Vector e0 = pair.first - yd_proj_[static_cast<size_t>(m - 1)];
        const Vector e1 = pair.second - (yd_proj_[static_cast<size_t>(m)] - yd_proj_[static_cast<size_t>(m - 1)]);
        total += 0.5 * k * (msq(e0) + mdot(e0, e1) + msq(e1) / 3.0);
        const Vector& ua = control.node(m - 1);
        const Vector& ub = control.node(m);
        total += alpha * k / 6.0 * (msq(ua) + mdot(ua, ub) + msq(ub));
      }
      return total;
    }
  }
  throw std::logic_error("unreachable");
}

double ReducedOcp::cost(const Trajectory& control) const { return cost(control, solve_state(control)); }

std::vector<Vector> ReducedOcp::dg0_cost_multipliers(const Trajectory& state) const {
  // Backward recursion adjoint to the forward sweep, with the right-endpoint
  // tracking term as data. q[m] is the multiplier of the step ending at node
  // m; q[last + 1] closes the recursion.
  const double k = grid_.dt();
  const int last = grid_.steps;
  std::vector<Vector> q(static_cast<size_t>(last) + 2, Vector::Zero(state.ndof()));
  for (int m = last; m >= 1; --m) {
    Vector rhs = ops_.mass * q[static_cast<size_t>(m + 1)];
    rhs -= k * (ops_.mass * state.node(m) - yd_loads_[static_cast<size_t>(m)]);
    q[static_cast<size_t>(m)] = dg0_->adjoint_solver().solve(rhs);
  }
  return q;
}

std::vector<Vector> ReducedOcp::gradient(const Trajectory& control) const {
  const double k = grid_.dt();
  const double alpha = problem_->alpha;
  const int last = grid_.steps;
  const SparseMat& M = ops_.mass;
  const Trajectory state = solve_state(control);
  std::vector<Vector> g(static_cast<size_t>(grid_.num_nodes()));

  switch (scheme_.kind) {
    case TimeSchemeKind::theta: {
      // Exact gradient of the rectangle/trapezoid cost; the backward sweep is
      // the stationarity system of the discrete Lagrangian.
      const Trajectory p = theta_->adjoint_sweep_do(yd_loads_, state, DoInitialRow::lagrangian_row);
      const double th = scheme_.theta, om = 1.0 - scheme_.theta;
      g[0] = k * (M * (0.5 * alpha * control.node(0) - om * p.node(1)));
      for (int m = 1; m < last; ++m)
        g[static_cast<size_t>(m)] =
            k * (M * (alpha * control.node(m) - (th * p.node(m) + om * p.node(m + 1))));
      g[static_cast<size_t>(last)] = k * (M * (0.5 * alpha * control.node(last) - th * p.node(last)));
      return g;
    }
    case TimeSchemeKind::dg0: {
      const auto q = dg0_cost_multipliers(state);
      for (int j = 0; j <= last; ++j) {
        Vector gj = Vector::Zero(control.ndof());
        if (j >= 1) gj += k * (M * (alpha * control.node(j))) - 0.5 * k * (M * q[static_cast<size_t>(j)]);
        if (j < last) gj -= 0.5 * k * (M * q[static_cast<size_t>(j + 1)]);
        g[static_cast<size_t>(j)] = std::move(gj);
      }
      return g;
    }
    case TimeSchemeKind::dg1: {
      if (!dg1_gradient_solver_) {
        // Transpose of the monolithic forward step matrix.
        BlockSystem2x2 blocks;
        blocks.b11 = ops_.mass + k * ops_.adjoint;
        blocks.b12 = 0.5 * k * ops_.adjoint;
        blocks.b21 = ops_.mass + 0.5 * k * ops_.adjoint;
        blocks.b22 = SparseMat(0.5 * ops_.mass) + SparseMat((k / 3.0) * ops_.adjoint);
        dg1_gradient_solver_.emplace(factorize_block(blocks));
      }
      // Interval multipliers (q0, q1); q0_next closes the recursion at the
      // final interval.
      std::vector<Vector> q0(static_cast<size_t>(last) + 2, Vector::Zero(control.ndof()));
      std::vector<Vector> q1(static_cast<size_t>(last) + 2, Vector::Zero(control.ndof()));
      for (int m = last; m >= 1; --m) {
        const auto& pair = state.interval(m);
        const Vector me0 = M * pair.first - yd_loads_[static_cast<size_t>(m - 1)];
        const Vector me1 =
            M * pair.second - (yd_loads_[static_cast<size_t>(m)] - yd_loads_[static_cast<size_t>(m - 1)]);
        const Vector carry = M * q0[static_cast<size_t>(m + 1)];
        const Vector rhs1 = carry - k * (me0 + 0.5 * me1);
        const Vector rhs2 = carry - 0.5 * k * (me0 + (2.0 / 3.0) * me1);
        auto [a, b] = solve_block(*dg1_gradient_solver_, rhs1, rhs2);
        q0[static_cast<size_t>(m)] = std::move(a);
        q1[static_cast<size_t>(m)] = std::move(b);
      }
      for (int j = 0; j <= last; ++j) {
        Vector gj = Vector::Zero(control.ndof());
        if (j >= 1) {
          gj += alpha * k / 6.0 * (M * (control.node(j - 1) + 2.0 * control.node(j)));
          gj -= 0.5 * k * (M * (q0[static_cast<size_t>(j)] + q1[static_cast<size_t>(j)]));
        }
        if (j < last) {
          gj += alpha * k / 6.0 * (M * (2.0 * control.node(j) + control.node(j + 1)));
          gj -= 0.5 * k * (M * q0[static_cast<size_t>(j + 1)]);
        }
        g[static_cast<size_t>(j)] = std::move(gj);
      }
      return g;
    }
  }
  throw std::logic_error("unreachable");
}

double discrete_cost(const OcpProblem& problem, const DgSpace& space, const TimeGrid& grid,
                     const SchemeConfig& scheme, const Trajectory& control, const Trajectory& state) {
  return ReducedOcp(problem, space, grid, scheme).cost(control, state);
}

std::vector<Vector> reduced_gradient(const OcpProblem& problem, const DgSpace& space, const TimeGrid& grid,
                                     const SchemeConfig& scheme, const Trajectory& control) {
  return ReducedOcp(problem, space, grid, scheme).gradient(control);
}

OcpSolution pdas_solve(const OcpProblem& problem, const DgSpace& space, const TimeGrid& grid,
                       const SchemeConfig& scheme, const PdasOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("pdas_solve: tolerance must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("pdas_solve: at least one iteration is required");

  const ReducedOcp reduced(problem, space, grid, scheme);
  const ControlBounds bounds = problem.bounds;
  const int nodes = grid.num_nodes();
  const Eigen::Index ndof = space.ndof();

  // -1: lower bound active, 0: inactive, +1: upper bound active.
  std::vector<Eigen::ArrayXi> labels(static_cast<size_t>(nodes), Eigen::ArrayXi::Zero(ndof));

  OcpSolution sol;
  sol.control = reduced.zero_control();

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    sol.state = reduced.solve_state(sol.control);
    sol.adjoint = reduced.solve_adjoint(sol.state);
    const Trajectory w = reduced.control_candidates(sol.adjoint);

    bool stable = true;
    long lower_count = 0, upper_count = 0;
    double update = 0.0;
    for (int m = 0; m < nodes; ++m) {
      const Vector& wm = w.node(m);
      Eigen::ArrayXi fresh(ndof);
      Vector um(ndof);
      for (Eigen::Index i = 0; i < ndof; ++i) {
        if (wm[i] < bounds.lower) {
          fresh[i] = -1;
          um[i] = bounds.lower;
          ++lower_count;
        } else if (wm[i] > bounds.upper) {
          fresh[i] = 1;
          um[i] = bounds.upper;
          ++upper_count;
        } else {
          fresh[i] = 0;
          um[i] = wm[i];
        }
      }
      stable = stable && (fresh == labels[static_cast<size_t>(m)]).all();
      labels[static_cast<size_t>(m)] = std::move(fresh);
      update = std::max(update, (um - sol.control.node(m)).lpNorm<Eigen::Infinity>());
      sol.control.node(m) = std::move(um);
    }

    if (!std::isfinite(update))
      throw std::runtime_error("pdas_solve: non-finite control update at iteration " + std::to_string(iter));

    sol.iterations = iter;
    sol.active_sets_stable = stable;
    sol.log.push_back({iter, lower_count, upper_count, update});

    if (stable && update <= options.tol) break;
    if (iter == options.max_iter)
      throw std::runtime_error("pdas_solve: no convergence within " + std::to_string(options.max_iter) +
                               " iterations, last update " + std::to_string(update));
  }

  // Refresh the trajectories for the converged control and report the
  // fixed-point residual against them.
  sol.state = reduced.solve_state(sol.control);
  sol.adjoint = reduced.solve_adjoint(sol.state);
  const Trajectory w = reduced.control_candidates(sol.adjoint);
  double residual = 0.0;
  for (int m = 0; m < nodes; ++m) {
    const Vector clamped = w.node(m).unaryExpr([bounds](double v) { return bounds.clamp(v); });
    residual = std::max(residual, (sol.control.node(m) - clamped).lpNorm<Eigen::Infinity>());
  }
  sol.kkt_residual = residual;
  return sol;
}

void write_pdas_log(const OcpSolution& solution, std::ostream& out) {
  out << "iter,active_lower,active_upper,update_norm\n";
  for (const PdasIterationLog& row : solution.log)
    out << row.iter << ',' << row.lower_active << ',' << row.upper_active << ',' << row.update_norm << '\n';
}

} // namespace dgopt
