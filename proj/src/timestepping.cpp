#include "dgopt/timestepping.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dgopt {

namespace {

void check_nodal_input(const Trajectory& traj, const TimeGrid& grid, const char* what) {
  if (traj.num_nodes() != grid.num_nodes())
    throw std::invalid_argument(std::string(what) + ": trajectory does not match the time grid");
}

void check_loads(const std::vector<Vector>& loads, const TimeGrid& grid, const char* what) {
  if (static_cast<int>(loads.size()) != grid.num_nodes())
    throw std::invalid_argument(std::string(what) + ": one load vector per time node is required");
}

} // namespace

Trajectory Trajectory::zeros(Kind kind, const TimeGrid& grid, Eigen::Index ndof) {
  Trajectory traj;
  traj.kind_ = kind;
  traj.nodes_.assign(static_cast<size_t>(grid.num_nodes()), Vector::Zero(ndof));
  if (kind == Kind::dg1)
    traj.intervals_.assign(static_cast<size_t>(grid.steps), {Vector::Zero(ndof), Vector::Zero(ndof)});
  return traj;
}

ThetaStepper::ThetaStepper(const SipgOperators& ops, const TimeGrid& grid, double theta)
    : ops_(&ops),
      grid_(grid),
      theta_(theta),
      state_solver_(SparseMat(ops.mass + (grid.dt() * theta) * ops.state)),
      adjoint_solver_(SparseMat(ops.mass + (grid.dt() * theta) * ops.adjoint)),
      mass_solver_(ops.mass) {
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("ThetaStepper: theta must lie in [0,1]");
}

Trajectory ThetaStepper::state_sweep(const std::vector<Vector>& f_loads, const Trajectory& control,
                                     const Vector& y0) const {
  check_nodal_input(control, grid_, "theta state sweep");
  check_loads(f_loads, grid_, "theta state sweep");
  const double k = grid_.dt();
  const double th = theta_, om = 1.0 - theta_;

  Trajectory y = Trajectory::zeros(Trajectory::Kind::nodal, grid_, y0.size());
  y.node(0) = y0;
  for (int m = 0; m < grid_.steps; ++m) {
    Vector rhs = ops_->mass * y.node(m) - (k * om) * (ops_->state * y.node(m));
    rhs += k * (om * f_loads[static_cast<size_t>(m)] + th * f_loads[static_cast<size_t>(m + 1)]);
    rhs += k * (ops_->mass * (om * control.node(m) + th * control.node(m + 1)));
    y.node(m + 1) = state_solver_.solve(rhs);
  }
  return y;
}

Trajectory ThetaStepper::adjoint_sweep_od(const std::vector<Vector>& yd_loads, const Trajectory& state) const {
  check_nodal_input(state, grid_, "theta adjoint sweep");
  check_loads(yd_loads, grid_, "theta adjoint sweep");
  const double k = grid_.dt();
  const double th = theta_, om = 1.0 - theta_;

  Trajectory p = Trajectory::zeros(Trajectory::Kind::nodal, grid_, state.ndof());
  for (int m = grid_.steps - 1; m >= 0; --m) {
    Vector rhs = ops_->mass * p.node(m + 1) - (k * om) * (ops_->adjoint * p.node(m + 1));
    rhs -= k * (th * (ops_->mass * state.node(m) - yd_loads[static_cast<size_t>(m)]) +
                om * (ops_->mass * state.node(m + 1) - yd_loads[static_cast<size_t>(m + 1)]));
    p.node(m) = adjoint_solver_.solve(rhs);
  }
  return p;
}

Trajectory ThetaStepper::adjoint_sweep_do(const std::vector<Vector>& yd_loads, const Trajectory& state,
                                          DoInitialRow row) const {
  check_nodal_input(state, grid_, "theta adjoint sweep");
  check_loads(yd_loads, grid_, "theta adjoint sweep");
  const double k = grid_.dt();
  const double om = 1.0 - theta_;

  // Terminal row is homogeneous, so the terminal value vanishes.
  Trajectory p = Trajectory::zeros(Trajectory::Kind::nodal, grid_, state.ndof());

  auto step_rhs = [&](int m) {
    Vector rhs = ops_->mass * p.node(m + 1) - (k * om) * (ops_->adjoint * p.node(m + 1));
    rhs -= k * (ops_->mass * state.node(m) - yd_loads[static_cast<size_t>(m)]);
    return rhs;
  };

  for (int m = grid_.steps - 1; m >= 1; --m) p.node(m) = adjoint_solver_.solve(step_rhs(m));

  const Vector rhs0 = step_rhs(0);
  p.node(0) = (row == DoInitialRow::lagrangian_row) ? mass_solver_.solve(rhs0) : adjoint_solver_.solve(rhs0);
  return p;
}

Dg0Stepper::Dg0Stepper(const SipgOperators& ops, const TimeGrid& grid)
    : ops_(&ops),
      grid_(grid),
      state_solver_(SparseMat(ops.mass + grid.dt() * ops.state)),
      adjoint_solver_(SparseMat(ops.mass + grid.dt() * ops.adjoint)) {}

Trajectory Dg0Stepper::state_sweep(const std::vector<Vector>& f_loads, const Trajectory& control,
                                   const Vector& y0) const {
  check_nodal_input(control, grid_, "dg0 state sweep");
  check_loads(f_loads, grid_, "dg0 state sweep");
  const double k = grid_.dt();

  Trajectory y = Trajectory::zeros(Trajectory::Kind::nodal, grid_, y0.size());
  y.node(0) = y0;
  for (int m = 1; m <= grid_.steps; ++m) {
    Vector rhs = ops_->mass * y.node(m - 1);
    rhs += 0.5 * k * (f_loads[static_cast<size_t>(m)] + f_loads[static_cast<size_t>(m - 1)]);
    rhs += 0.5 * k * (ops_->mass * (control.node(m) + control.node(m - 1)));
    y.node(m) = state_solver_.solve(rhs);
  }
  return y;
}

Trajectory Dg0Stepper::adjoint_sweep(const std::vector<Vector>& yd_loads, const Trajectory& state) const {
  check_nodal_input(state, grid_, "dg0 adjoint sweep");
  check_loads(yd_loads, grid_, "dg0 adjoint sweep");
  const double k = grid_.dt();

  Trajectory p = Trajectory::zeros(Trajectory::Kind::nodal, grid_, state.ndof());
  for (int m = grid_.steps; m >= 1; --m) {
    Vector rhs = ops_->mass * p.node(m);
    rhs -= 0.5 * k * (ops_->mass * (state.node(m) + state.node(m - 1)));
    rhs += 0.5 * k * (yd_loads[static_cast<size_t>(m)] + yd_loads[static_cast<size_t>(m - 1)]);
    p.node(m - 1) = adjoint_solver_.solve(rhs);
  }
  return p;
}

namespace {

BlockSystem2x2 dg1_blocks(const SparseMat& mass, const SparseMat& op, double k) {
  BlockSystem2x2 blocks;
  blocks.b11 = mass + k * op;
  blocks.b12 = mass + 0.5 * k * op;
  blocks.b21 = 0.5 * k * op;
  blocks.b22 = SparseMat(0.5 * mass) + SparseMat((k / 3.0) * op);
  return blocks;
}

} // namespace

BlockSystem2x2 Dg1Stepper::state_blocks(const SipgOperators& ops, const TimeGrid& grid) {
  return dg1_blocks(ops.mass, ops.state, grid.dt());
}

Dg1Stepper::Dg1Stepper(const SipgOperators& ops, const TimeGrid& grid)
    : ops_(&ops),
      grid_(grid),
      state_solver_(factorize_block(dg1_blocks(ops.mass, ops.state, grid.dt()))),
      adjoint_solver_(factorize_block(dg1_blocks(ops.mass, ops.adjoint, grid.dt()))) {}

Trajectory Dg1Stepper::state_sweep(const std::vector<Vector>& f_loads, const Trajectory& control,
                                   const Vector& y0) const {
  check_nodal_input(control, grid_, "dg1 state sweep");
  check_loads(f_loads, grid_, "dg1 state sweep");
  const double k = grid_.dt();

  Trajectory y = Trajectory::zeros(Trajectory::Kind::dg1, grid_, y0.size());
  y.node(0) = y0;
  for (int m = 1; m <= grid_.steps; ++m) {
    Vector rhs1 = ops_->mass * y.node(m - 1);
    rhs1 += 0.5 * k * (f_loads[static_cast<size_t>(m)] + f_loads[static_cast<size_t>(m - 1)]);
    rhs1 += 0.5 * k * (ops_->mass * (control.node(m) + control.node(m - 1)));
    const Vector rhs2 = 0.5 * k * (f_loads[static_cast<size_t>(m)] + ops_->mass * control.node(m));

    auto [c0, c1] = solve_block(state_solver_, rhs1, rhs2);
    y.node(m) = c0 + c1;
    y.interval(m) = {std::move(c0), std::move(c1)};
  }
  return y;
}

Trajectory Dg1Stepper::adjoint_sweep(const std::vector<Vector>& yd_loads, const Trajectory& state) const {
  check_nodal_input(state, grid_, "dg1 adjoint sweep");
  check_loads(yd_loads, grid_, "dg1 adjoint sweep");
  const double k = grid_.dt();

  Trajectory p = Trajectory::zeros(Trajectory::Kind::dg1, grid_, state.ndof());
  for (int m = grid_.steps; m >= 1; --m) {
    Vector rhs1 = ops_->mass * p.node(m);
    rhs1 -= 0.5 * k * (ops_->mass * (state.node(m) + state.node(m - 1)));
    rhs1 += 0.5 * k * (yd_loads[static_cast<size_t>(m)] + yd_loads[static_cast<size_t>(m - 1)]);
    const Vector rhs2 = -0.5 * k * (ops_->mass * state.node(m - 1) - yd_loads[static_cast<size_t>(m - 1)]);

    auto [d0, d1] = solve_block(adjoint_solver_, rhs1, rhs2);
    p.node(m - 1) = d0 + d1;
    p.interval(m) = {std::move(d0), std::move(d1)};
  }
  return p;
}

Trajectory theta_state_sweep(const SipgOperators& ops, const TimeGrid& grid, double theta,
                             const std::vector<Vector>& f_loads, const Trajectory& control, const Vector& y0) {
  return ThetaStepper(ops, grid, theta).state_sweep(f_loads, control, y0);
}

Trajectory theta_adjoint_sweep_od(const SipgOperators& ops, const TimeGrid& grid, double theta,
                                  const std::vector<Vector>& yd_loads, const Trajectory& state) {
  return ThetaStepper(ops, grid, theta).adjoint_sweep_od(yd_loads, state);
}

Trajectory theta_adjoint_sweep_do(const SipgOperators& ops, const TimeGrid& grid, double theta,
                                  const std::vector<Vector>& yd_loads, const Trajectory& state, DoInitialRow row) {
  return ThetaStepper(ops, grid, theta).adjoint_sweep_do(yd_loads, state, row);
}

Trajectory dg0_state_sweep(const SipgOperators& ops, const TimeGrid& grid, const std::vector<Vector>& f_loads,
                           const Trajectory& control, const Vector& y0) {
  return Dg0Stepper(ops, grid).state_sweep(f_loads, control, y0);
}

Trajectory dg0_adjoint_sweep(const SipgOperators& ops, const TimeGrid& grid, const std::vector<Vector>& yd_loads,
                             const Trajectory& state) {
  return Dg0Stepper(ops, grid).adjoint_sweep(yd_loads, state);
}

Trajectory dg1_state_sweep(const SipgOperators& ops, const TimeGrid& grid, const std::vector<Vector>& f_loads,
                           const Trajectory& control, const Vector& y0) {
  return Dg1Stepper(ops, grid).state_sweep(f_loads, control, y0);
}

Trajectory dg1_adjoint_sweep(const SipgOperators& ops, const TimeGrid& grid, const std::vector<Vector>& yd_loads,
                             const Trajectory& state) {
  return Dg1Stepper(ops, grid).adjoint_sweep(yd_loads, state);
}

std::vector<Vector> assemble_loads(const DgSpace& space, const ScalarField& g, const TimeGrid& grid) {
  std::vector<Vector> loads;
  loads.reserve(static_cast<size_t>(grid.num_nodes()));
  for (int m = 0; m <= grid.steps; ++m) loads.push_back(assemble_load(space, g, grid.node(m)));
  return loads;
}

double max_nodal_l2_distance(const SparseMat& mass, const Trajectory& a, const Trajectory& b) {
  if (a.num_nodes() != b.num_nodes())
    throw std::invalid_argument("max_nodal_l2_distance: trajectories have different lengths");
  double worst = 0.0;
  for (int m = 0; m < a.num_nodes(); ++m) {
    const Vector diff = a.node(m) - b.node(m);
    worst = std::max(worst, std::sqrt(diff.dot(mass * diff)));
  }
  return worst;
}

void export_trajectory(const Trajectory& traj, const TimeGrid& grid, std::ostream& out, int stride) {
  if (stride < 1) stride = 1;
  out << "m,t,dof,value\n";
  for (int m = 0; m < traj.num_nodes(); m += stride) {
    const Vector& v = traj.node(m);
    for (Eigen::Index i = 0; i < v.size(); ++i) out << m << ',' << grid.node(m) << ',' << i << ',' << v[i] << '\n';
  }
}

} // namespace dgopt
