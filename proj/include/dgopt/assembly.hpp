#ifndef DGOPT_ASSEMBLY_HPP
#define DGOPT_ASSEMBLY_HPP

#include "dgopt/dg_space.hpp"
#include "dgopt/linalg.hpp"

namespace dgopt {

/// Coefficients of the diffusion-convection-reaction operator together with
/// the interior penalty parameter. The velocity is constant and divergence
/// free, so the well-posedness constant reduces to the reaction coefficient.
struct SipgParams {
  double epsilon = 1.0;
  Vec2 beta{0.0, 0.0};
  double reaction = 0.0;
  double sigma = 6.0;

  double c0() const { return reaction; }
};

/// Mass matrix and the discrete state/adjoint operators.
/// The adjoint operator is the entrywise transpose of the state operator.
struct SipgOperators {
  SparseMat mass;
  SparseMat state;
  SparseMat adjoint;
};

/// Block-diagonal mass matrix (3x3 per element), symmetric positive definite.
SparseMat assemble_mass(const DgSpace& space);

/// Interior penalty operator for the state equation: volume diffusion,
/// consistency and symmetry edge terms, jump penalty sigma*eps/h_E, volume
/// convection and reaction, and upwind edge terms on the inflow portion of
/// each element boundary. Throws std::invalid_argument for sigma <= 0.
SparseMat assemble_state_operator(const DgSpace& space, const SipgParams& params, const EdgeClassification& cls);

/// Discrete adjoint operator, with reversed convection and edge terms on the
/// outflow portions. Coincides with the transpose of the state operator under
/// identical quadrature, and is assembled as such.
SparseMat assemble_adjoint_operator(const DgSpace& space, const SipgParams& params, const EdgeClassification& cls);

/// Load vector with entries integral of g(., t) * basis function.
Vector assemble_load(const DgSpace& space, const ScalarField& g, double t);

SipgOperators assemble_operators(const DgSpace& space, const SipgParams& params, const EdgeClassification& cls);

} // namespace dgopt

#endif
