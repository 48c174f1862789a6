#ifndef DGOPT_TIMESTEPPING_HPP
#define DGOPT_TIMESTEPPING_HPP

#include <iosfwd>
#include <vector>

#include "dgopt/assembly.hpp"
#include "dgopt/linalg.hpp"

namespace dgopt {

/// Uniform subdivision of [0, horizon] into `steps` intervals.
struct TimeGrid {
  double horizon = 1.0;
  int steps = 1;

  double dt() const { return horizon / steps; }
  double node(int m) const { return m == steps ? horizon : m * dt(); }
  int num_nodes() const { return steps + 1; }
};

/// Time-indexed coefficient vectors. Every scheme carries nodal values
/// y_0..y_N; the piecewise-linear-in-time scheme additionally stores one
/// coefficient pair per interval, with the nodal value equal to their sum.
class Trajectory {
public:
  enum class Kind { nodal, dg1 };

  struct IntervalPair {
    Vector first;  // value at the interval end the sweep starts from
    Vector second; // linear correction; nodal value = first + second
  };

  Trajectory() = default;
  static Trajectory zeros(Kind kind, const TimeGrid& grid, Eigen::Index ndof);

  Kind kind() const { return kind_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_intervals() const { return static_cast<int>(intervals_.size()); }
  Eigen::Index ndof() const { return nodes_.empty() ? 0 : nodes_.front().size(); }

  Vector& node(int m) { return nodes_[static_cast<size_t>(m)]; }
  const Vector& node(int m) const { return nodes_[static_cast<size_t>(m)]; }

  /// Interval m covers (t_{m-1}, t_m]; valid indices are 1..steps.
  IntervalPair& interval(int m) { return intervals_[static_cast<size_t>(m - 1)]; }
  const IntervalPair& interval(int m) const { return intervals_[static_cast<size_t>(m - 1)]; }

private:
  Kind kind_ = Kind::nodal;
  std::vector<Vector> nodes_;
  std::vector<IntervalPair> intervals_;
};

/// Treatment of the first adjoint row of the backward sweep derived from the
/// discrete Lagrangian:
///  - lagrangian_row: the row couples p_0 to p_1 through the mass matrix only,
///    exactly as the stationarity condition at the initial node reads.
///  - implicit_row: the initial node is stepped like every interior node,
///    which makes the backward-Euler variant coincide with the
///    optimize-then-discretize sweep at every node.
enum class DoInitialRow { lagrangian_row, implicit_row };

/// One-step theta scheme; factorizations are computed once at construction
/// and reused for all time steps.
class ThetaStepper {
public:
  ThetaStepper(const SipgOperators& ops, const TimeGrid& grid, double theta);

  /// Forward sweep: (M + k theta A_s) y_{m+1} =
  ///   (M - k(1-theta) A_s) y_m + k((1-theta)F_m + theta F_{m+1})
  ///   + k M((1-theta)u_m + theta u_{m+1}),  y_0 given.
  Trajectory state_sweep(const std::vector<Vector>& f_loads, const Trajectory& control, const Vector& y0) const;

  /// Backward sweep of the discretized adjoint equation, with the right-hand
  /// side evaluated at the two successive nodes. p_N = 0.
  Trajectory adjoint_sweep_od(const std::vector<Vector>& yd_loads, const Trajectory& state) const;

  /// Backward sweep obtained by differentiating the discrete Lagrangian:
  /// homogeneous terminal row, interior rows with a single-node right-hand
  /// side, and the initial row chosen by `row`.
  Trajectory adjoint_sweep_do(const std::vector<Vector>& yd_loads, const Trajectory& state,
                              DoInitialRow row = DoInitialRow::lagrangian_row) const;

  double theta() const { return theta_; }
  const TimeGrid& grid() const { return grid_; }

private:
  const SipgOperators* ops_;
  TimeGrid grid_;
  double theta_;
  Factorization state_solver_;   // M + k theta A_s
  Factorization adjoint_solver_; // M + k theta A_a
  Factorization mass_solver_;    // M
};

/// Piecewise-constant-in-time scheme: backward Euler steps with trapezoidal
/// data averages on the right-hand side.
class Dg0Stepper {
public:
  Dg0Stepper(const SipgOperators& ops, const TimeGrid& grid);

  /// (M + k A_s) y_m = M y_{m-1} + (k/2)(F_m + F_{m-1}) + (k/2)M(u_m + u_{m-1}).
  Trajectory state_sweep(const std::vector<Vector>& f_loads, const Trajectory& control, const Vector& y0) const;

  /// (M + k A_a) p_{m-1} = M p_m - (k/2)M(y_m + y_{m-1}) + (k/2)(D_m + D_{m-1}),
  /// p_N = 0.
  Trajectory adjoint_sweep(const std::vector<Vector>& yd_loads, const Trajectory& state) const;

  const Factorization& state_solver() const { return state_solver_; }
  const Factorization& adjoint_solver() const { return adjoint_solver_; }
  const TimeGrid& grid() const { return grid_; }

private:
  const SipgOperators* ops_;
  TimeGrid grid_;
  Factorization state_solver_;   // M + k A_s
  Factorization adjoint_solver_; // M + k A_a
};

/// Piecewise-linear-in-time scheme. The coupled 2x2 block systems for the
/// state and the adjoint are each factorized once and reused on every
/// interval.
class Dg1Stepper {
public:
  Dg1Stepper(const SipgOperators& ops, const TimeGrid& grid);

  Trajectory state_sweep(const std::vector<Vector>& f_loads, const Trajectory& control, const Vector& y0) const;
  Trajectory adjoint_sweep(const std::vector<Vector>& yd_loads, const Trajectory& state) const;

  /// Step matrix of the forward sweep, for oracle tests.
  static BlockSystem2x2 state_blocks(const SipgOperators& ops, const TimeGrid& grid);

  const TimeGrid& grid() const { return grid_; }

private:
  const SipgOperators* ops_;
  TimeGrid grid_;
  Factorization state_solver_;
  Factorization adjoint_solver_;
};

// One-shot wrappers around the steppers.
Trajectory theta_state_sweep(const SipgOperators& ops, const TimeGrid& grid, double theta,
                             const std::vector<Vector>& f_loads, const Trajectory& control, const Vector& y0);
Trajectory theta_adjoint_sweep_od(const SipgOperators& ops, const TimeGrid& grid, double theta,
                                  const std::vector<Vector>& yd_loads, const Trajectory& state);
Trajectory theta_adjoint_sweep_do(const SipgOperators& ops, const TimeGrid& grid, double theta,
                                  const std::vector<Vector>& yd_loads, const Trajectory& state,
                                  DoInitialRow row = DoInitialRow::lagrangian_row);
Trajectory dg0_state_sweep(const SipgOperators& ops, const TimeGrid& grid, const std::vector<Vector>& f_loads,
                           const Trajectory& control, const Vector& y0);
Trajectory dg0_adjoint_sweep(const SipgOperators& ops, const TimeGrid& grid, const std::vector<Vector>& yd_loads,
                             const Trajectory& state);
Trajectory dg1_state_sweep(const SipgOperators& ops, const TimeGrid& grid, const std::vector<Vector>& f_loads,
                           const Trajectory& control, const Vector& y0);
Trajectory dg1_adjoint_sweep(const SipgOperators& ops, const TimeGrid& grid, const std::vector<Vector>& yd_loads,
                             const Trajectory& state);

/// Nodal load vectors of g at every time node.
std::vector<Vector> assemble_loads(const DgSpace& space, const ScalarField& g, const TimeGrid& grid);

/// max over nodes of the spatial L2 distance between two trajectories.
double max_nodal_l2_distance(const SparseMat& mass, const Trajectory& a, const Trajectory& b);

/// CSV export "m,t,dof,value"; `stride` decimates the time nodes.
void export_trajectory(const Trajectory& traj, const TimeGrid& grid, std::ostream& out, int stride = 1);

} // namespace dgopt

#endif
