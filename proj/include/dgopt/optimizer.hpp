#ifndef DGOPT_OPTIMIZER_HPP
#define DGOPT_OPTIMIZER_HPP

#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "dgopt/timestepping.hpp"

namespace dgopt {

/// Constant box bounds; either side may be infinite.
struct ControlBounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  static ControlBounds none() { return {}; }
  static ControlBounds from(double lo) { return {lo, std::numeric_limits<double>::infinity()}; }
  static ControlBounds box(double lo, double hi) { return {lo, hi}; }

  double clamp(double w) const { return std::min(upper, std::max(lower, w)); }
};

/// Distributed control problem: minimize the tracking functional plus the
/// alpha-weighted control cost subject to the evolution equation and the
/// box constraints.
struct OcpProblem {
  SipgParams params;
  double alpha = 1.0;
  ControlBounds bounds;
  ScalarField source;                  // f(x, t)
  ScalarField desired;                 // y_d(x, t)
  std::function<double(Vec2)> initial; // y_0(x)
  double horizon = 1.0;

  /// Throws std::invalid_argument if the data violates the solver contract
  /// (alpha > 0, ordered bounds, epsilon > 0, nonnegative well-posedness
  /// constant, positive horizon).
  void validate() const;
};

enum class TimeSchemeKind { theta, dg0, dg1 };

/// How the adjoint equation and the control update are obtained:
/// discretize the continuous optimality system, or differentiate the
/// discretized cost.
enum class AdjointVariant { optimize_then_discretize, discretize_then_optimize };

/// Realization of the discretize-then-optimize endpoints for the theta scheme.
///  - endpoint_weighted: the control update carries the halved trapezoidal
///    weights at the first and last node and the adjoint initial row couples
///    through the mass matrix alone, exactly as the discrete Lagrangian reads.
///  - nodal: every node uses the plain clamp of p/alpha and the adjoint
///    initial row is stepped implicitly like the interior rows; with
///    backward Euler this path coincides with optimize_then_discretize at
///    every node.
enum class DoConvention { endpoint_weighted, nodal };

struct SchemeConfig {
  TimeSchemeKind kind = TimeSchemeKind::dg0;
  double theta = 1.0; // only read for the theta scheme
  AdjointVariant variant = AdjointVariant::optimize_then_discretize;
  DoConvention convention = DoConvention::endpoint_weighted;
};

struct PdasOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

struct PdasIterationLog {
  int iter = 0;
  long lower_active = 0;
  long upper_active = 0;
  double update_norm = 0.0;
};

struct OcpSolution {
  Trajectory state;
  Trajectory control;
  Trajectory adjoint;
  int iterations = 0;
  double kkt_residual = 0.0;
  bool active_sets_stable = false;
  std::vector<PdasIterationLog> log;
};

/// Entrywise clamp of p/alpha into the bounds, node by node.
Trajectory project_control(const Trajectory& p, double alpha, ControlBounds bounds);

/// Shared setup for repeated solves of one discretized problem: operators,
/// factorized steppers and data loads are built once.
class ReducedOcp {
public:
  ReducedOcp(const OcpProblem& problem, const DgSpace& space, const TimeGrid& grid, const SchemeConfig& scheme);

  Trajectory zero_control() const;
  Trajectory solve_state(const Trajectory& control) const;
  Trajectory solve_adjoint(const Trajectory& state) const;

  /// Control candidate trajectory w with u = clamp(w) at the optimum;
  /// depends on the adjoint variant and the endpoint convention.
  Trajectory control_candidates(const Trajectory& adjoint) const;

  /// Value of the fully discrete cost for a control and its state.
  /// The quadrature in time matches the scheme: rectangle/trapezoid for the
  /// theta scheme, right endpoint for piecewise constants, exact quadrature
  /// of the linear-in-time representation otherwise.
  double cost(const Trajectory& control, const Trajectory& state) const;
  double cost(const Trajectory& control) const;

  /// Exact gradient of the discrete cost with respect to the nodal control
  /// values, one covector per time node. The pairing with a control
  /// perturbation is the plain sum of dot products.
  std::vector<Vector> gradient(const Trajectory& control) const;

  const SipgOperators& operators() const { return ops_; }
  const TimeGrid& grid() const { return grid_; }
  const SchemeConfig& scheme() const { return scheme_; }
  const OcpProblem& problem() const { return *problem_; }
  const Vector& initial_coefficients() const { return y0_; }

private:
  const OcpProblem* problem_;
  const DgSpace* space_;
  TimeGrid grid_;
  SchemeConfig scheme_;
  EdgeClassification cls_;
  SipgOperators ops_;
  std::optional<ThetaStepper> theta_;
  std::optional<Dg0Stepper> dg0_;
  std::optional<Dg1Stepper> dg1_;
  std::vector<Vector> f_loads_;
  std::vector<Vector> yd_loads_;
  std::vector<Vector> yd_proj_;
  Vector y0_;
  mutable std::optional<Factorization> dg1_gradient_solver_;

  std::vector<Vector> dg0_cost_multipliers(const Trajectory& state) const;
};

double discrete_cost(const OcpProblem& problem, const DgSpace& space, const TimeGrid& grid,
                     const SchemeConfig& scheme, const Trajectory& control, const Trajectory& state);

std::vector<Vector> reduced_gradient(const OcpProblem& problem, const DgSpace& space, const TimeGrid& grid,
                                     const SchemeConfig& scheme, const Trajectory& control);

/// Primal-dual active set iteration over exact forward/backward sweeps.
/// Stops when the active sets repeat and the max-norm control update falls
/// below the tolerance. Throws std::runtime_error when the iteration budget
/// is exhausted or a sweep produces non-finite values.
OcpSolution pdas_solve(const OcpProblem& problem, const DgSpace& space, const TimeGrid& grid,
                       const SchemeConfig& scheme, const PdasOptions& options = {});

/// CSV log "iter,active_lower,active_upper,update_norm".
void write_pdas_log(const OcpSolution& solution, std::ostream& out);

} // namespace dgopt

#endif
