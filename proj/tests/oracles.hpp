#ifndef DGOPT_TESTS_ORACLES_HPP
#define DGOPT_TESTS_ORACLES_HPP

// Independent reference implementations used only by tests: a dense Gaussian
// elimination solver and brute-force quadrature assembly of the bilinear
// forms, written against the displayed definitions rather than the library's
// assembly loops.

#include <Eigen/Dense>

#include "dgopt/assembly.hpp"

namespace dgopt::oracle {

/// Dense Gaussian elimination with partial pivoting.
Eigen::VectorXd dense_solve(Eigen::MatrixXd A, Eigen::VectorXd b);

/// Dense state operator: volume diffusion/convection/reaction, interior and
/// boundary consistency, symmetry and penalty terms, and the upwind inflow
/// terms, each integrated with its own quadrature.
Eigen::MatrixXd dense_state_matrix(const DgSpace& space, const SipgParams& params);

/// Dense adjoint operator with reversed convection and outflow edge terms.
Eigen::MatrixXd dense_adjoint_matrix(const DgSpace& space, const SipgParams& params);

/// Only the interior-edge jump penalty terms of the state form.
Eigen::MatrixXd dense_interior_penalty_matrix(const DgSpace& space, const SipgParams& params);

} // namespace dgopt::oracle

#endif
