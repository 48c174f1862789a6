#ifndef DGOPT_BENCH_HPP
#define DGOPT_BENCH_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dgopt/optimizer.hpp"

namespace dgopt {

/// Closed-form scalar field together with the derivatives needed to push it
/// through the strong form of the equations.
struct FieldClosedForm {
  ScalarField value;
  ScalarField dt;
  ScalarField dx;
  ScalarField dy;
  ScalarField laplacian;
};

/// Exact optimality triple plus the data derived from it. The derived source
/// and desired state satisfy the strong optimality system by construction:
///   f   = dy/dt - eps lap(y) + beta.grad(y) + r y - u,
///   y_d = y - dp/dt - eps lap(p) - beta.grad(p) + r p,
/// with u = clamp(p/alpha).
struct ManufacturedCase {
  std::string name;
  SipgParams params;
  double alpha = 1.0;
  ControlBounds bounds;
  double horizon = 1.0;
  ScalarField exact_state;
  ScalarField exact_adjoint;
  ScalarField exact_control;
  ScalarField source;
  ScalarField desired;
  std::function<double(Vec2)> initial;

  OcpProblem problem() const;
};

/// Build a case from closed forms of the state and adjoint.
ManufacturedCase make_case(std::string name, const FieldClosedForm& state, const FieldClosedForm& adjoint,
                           SipgParams params, double alpha, ControlBounds bounds, double horizon);

/// Smooth separable solution on the unit square with a one-sided control
/// bound; convection along the first axis.
ManufacturedCase make_example1(double alpha = 1.0);

/// Choice of the traveling-wave variable in the second benchmark case.
enum class Example2Tx {
  characteristic, // x1 + x2 - t, aligned with the diagonal velocity
  zero,           // degenerate choice, removes the layer
};

/// Convection-dominated solution with a sharp moving interior layer scaled by
/// 1/sqrt(eps), and a two-sided control bound.
ManufacturedCase make_example2(Example2Tx tx = Example2Tx::characteristic, double alpha = 1.0,
                               double epsilon = 1e-5);

struct ErrorTriple {
  double state = 0.0;   // max over time nodes of the spatial L2 error
  double adjoint = 0.0; // same norm
  double control = 0.0; // trapezoidal-in-time L2(L2) error
};

ErrorTriple compute_errors(const DgSpace& space, const TimeGrid& grid, const OcpSolution& solution,
                           const ManufacturedCase& exact);

/// log(e_coarse/e_fine) / log(step_ratio). Throws for nonpositive errors or
/// ratio <= 1.
double convergence_rate(double e_coarse, double e_fine, double step_ratio);

struct StudyConfig {
  int example = 1;                          // 1 or 2
  std::string scheme = "dg0";               // be | cn-od | cn-do | dg0 | dg1
  std::vector<int> levels = {5, 10, 20, 40}; // time step k = 1/level, mesh matched
  double sigma = 6.0;
  std::optional<double> alpha;
  double tol = 1e-10;
  int max_iter = 50;
  Example2Tx tx = Example2Tx::characteristic;
  DoConvention do_convention = DoConvention::endpoint_weighted;
  std::filesystem::path out_dir;        // empty: no files written
  std::vector<double> snapshot_times;   // field exports y_t*.csv, p_t*.csv, u_t*.csv
};

struct StudyLevel {
  int level = 0;
  double k = 0.0;
  bool ok = false;
  std::string message;
  ErrorTriple errors;
  std::optional<double> rate_state, rate_adjoint, rate_control;
  int pdas_iterations = 0;
  double seconds = 0.0;
};

struct StudyResult {
  int example = 1;
  std::string scheme;
  std::vector<StudyLevel> levels;
  bool all_ok = false;
};

SchemeConfig scheme_from_name(const std::string& name, DoConvention convention = DoConvention::endpoint_weighted);

/// Runs the manufactured-solution study level by level; a failing level is
/// recorded and the remaining levels still run. Writes table.csv, table.md
/// and the per-level iteration logs when an output directory is set.
StudyResult run_study(const StudyConfig& config);

void write_table_csv(const StudyResult& result, std::ostream& out);
void write_table_markdown(const StudyResult& result, std::ostream& out);

} // namespace dgopt

#endif
