#include "dgopt/assembly.hpp"

#include <stdexcept>
#include <vector>

namespace dgopt {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_local(Triplets& out, const DgSpace& space, int test_element, int trial_element,
               const Eigen::Matrix3d& local) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.emplace_back(space.dof(test_element, i), space.dof(trial_element, j), local(i, j));
}

struct EdgeTrace {
  // Values of the three nodal basis functions of one element at the edge
  // quadrature points, plus that element's constant basis gradients.
  std::vector<std::array<double, 3>> values; // [point][local dof]
  std::array<Vec2, 3> gradients{};
};

EdgeTrace trace_on_edge(const DgSpace& space, int element, Vec2 a, Vec2 b) {
  EdgeTrace trace;
  trace.gradients = space.basis_gradients(element);
  const auto& rule = space.edge_rule().points;
  trace.values.resize(rule.size());
  for (size_t q = 0; q < rule.size(); ++q) {
    const Vec2 x = (1.0 - rule[q].s) * a + rule[q].s * b;
    const auto l = space.barycentric(element, x);
    trace.values[q] = {l[0], l[1], l[2]};
  }
  return trace;
}

} // namespace

SparseMat assemble_mass(const DgSpace& space) {
  const Mesh& mesh = space.mesh();
  Triplets triplets;
  triplets.reserve(static_cast<size_t>(9) * mesh.num_triangles());

  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const double area = mesh.element_area(k);
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (const TrianglePoint& q : space.volume_rule().points) {
      const double w = q.weight * area;
      const double phi[3] = {q.l0, q.l1, q.l2};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) local(i, j) += w * (phi[j] * phi[i]);
    }
    add_local(triplets, space, k, k, local);
  }

  SparseMat mass(space.ndof(), space.ndof());
  mass.setFromTriplets(triplets.begin(), triplets.end());
  return mass;
}

SparseMat assemble_state_operator(const DgSpace& space, const SipgParams& params, const EdgeClassification& cls) {
  if (params.sigma <= 0.0) throw std::invalid_argument("assemble_state_operator: penalty parameter must be positive");

  const Mesh& mesh = space.mesh();
  const double eps = params.epsilon;
  const Vec2 beta = params.beta;
  const double r = params.reaction;
  Triplets triplets;
  triplets.reserve(static_cast<size_t>(45) * mesh.num_triangles());

  // Volume terms: eps grad(y).grad(v) + (beta.grad(y)) v + r y v.
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const double area = mesh.element_area(k);
    const auto grad = space.basis_gradients(k);
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (const TrianglePoint& q : space.volume_rule().points) {
      const double w = q.weight * area;
      const double phi[3] = {q.l0, q.l1, q.l2};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          local(i, j) += w * (eps * dot(grad[j], grad[i]) + dot(beta, grad[j]) * phi[i] + r * (phi[j] * phi[i]));
    }
    add_local(triplets, space, k, k, local);
  }

  // Diffusion edge terms: consistency, symmetry and the jump penalty.
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    const Vec2 a = mesh.vertex(edge.verts[0]), b = mesh.vertex(edge.verts[1]);
    const Vec2 n = edge.normal; // unit normal of the owner side
    const double len = edge.length;
    const double penalty_factor = params.sigma * eps / len;
    const auto& rule = space.edge_rule().points;

    const EdgeTrace owner = trace_on_edge(space, edge.owner, a, b);

    if (edge.is_boundary()) {
      // Boundary convention: the average of the gradient is the one-sided
      // gradient and the jump of y is y n.
      Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
      for (size_t q = 0; q < rule.size(); ++q) {
        const double w = rule[q].weight * len;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            local(i, j) += w * (-eps * dot(owner.gradients[j], n) * owner.values[q][i] -
                                eps * dot(owner.gradients[i], n) * owner.values[q][j] +
                                penalty_factor * owner.values[q][j] * owner.values[q][i]);
      }
      add_local(triplets, space, edge.owner, edge.owner, local);
    } else {
      const EdgeTrace nbr = trace_on_edge(space, edge.neighbor, a, b);
      const EdgeTrace* traces[2] = {&owner, &nbr};
      const int elements[2] = {edge.owner, edge.neighbor};
      const double jump_sign[2] = {1.0, -1.0}; // the neighbor normal is -n

      for (int ts = 0; ts < 2; ++ts) {   // test side
        for (int rs = 0; rs < 2; ++rs) { // trial side
          Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
          for (size_t q = 0; q < rule.size(); ++q) {
            const double w = rule[q].weight * len;
            for (int i = 0; i < 3; ++i) {
              for (int j = 0; j < 3; ++j) {
                const double consistency =
                    -0.5 * eps * dot(traces[rs]->gradients[j], n) * jump_sign[ts] * traces[ts]->values[q][i];
                const double symmetry =
                    -0.5 * eps * dot(traces[ts]->gradients[i], n) * jump_sign[rs] * traces[rs]->values[q][j];
                const double penalty = penalty_factor * jump_sign[rs] * traces[rs]->values[q][j] * jump_sign[ts] *
                                       traces[ts]->values[q][i];
                local(i, j) += w * (consistency + symmetry + penalty);
              }
            }
          }
          add_local(triplets, space, elements[ts], elements[rs], local);
        }
      }
    }
  }

  // Upwind terms on the inflow portion of each element boundary.
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    for (int slot = 0; slot < 3; ++slot) {
      if (!cls.element_inflow(k, slot)) continue;
      const Edge& edge = mesh.edge(mesh.element_edges(k)[static_cast<size_t>(slot)]);
      const Vec2 a = mesh.vertex(edge.verts[0]), b = mesh.vertex(edge.verts[1]);
      const double bn = dot(beta, mesh.element_edge_normal(k, slot));
      const double len = edge.length;
      const auto& rule = space.edge_rule().points;
      const EdgeTrace self = trace_on_edge(space, k, a, b);

      if (edge.is_boundary()) {
        // Inflow boundary: -int (beta.n) y v, test and trial both from k.
        Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
        for (size_t q = 0; q < rule.size(); ++q) {
          const double w = rule[q].weight * len;
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) local(i, j) += w * (-bn * self.values[q][j] * self.values[q][i]);
        }
        add_local(triplets, space, k, k, local);
      } else {
        // Interior inflow face: +int (beta.n) (y_upwind - y) v, where the
        // upwind trace comes from the element across the edge.
        const int other = (edge.owner == k) ? edge.neighbor : edge.owner;
        const EdgeTrace up = trace_on_edge(space, other, a, b);
        Eigen::Matrix3d local_other = Eigen::Matrix3d::Zero();
        Eigen::Matrix3d local_self = Eigen::Matrix3d::Zero();
        for (size_t q = 0; q < rule.size(); ++q) {
          const double w = rule[q].weight * len;
          for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
              local_other(i, j) += w * (bn * up.values[q][j] * self.values[q][i]);
              local_self(i, j) += w * (-bn * self.values[q][j] * self.values[q][i]);
            }
          }
        }
        add_local(triplets, space, k, other, local_other);
        add_local(triplets, space, k, k, local_self);
      }
    }
  }

  SparseMat state(space.ndof(), space.ndof());
  state.setFromTriplets(triplets.begin(), triplets.end());
  return state;
}

SparseMat assemble_adjoint_operator(const DgSpace& space, const SipgParams& params, const EdgeClassification& cls) {
  // The downwind adjoint form is the exact transpose of the upwind state
  // form under identical quadrature; assembling it as the transpose keeps
  // the two operators in bitwise duality.
  SparseMat adjoint = assemble_state_operator(space, params, cls).transpose();
  return adjoint;
}

Vector assemble_load(const DgSpace& space, const ScalarField& g, double t) {
  const Mesh& mesh = space.mesh();
  Vector load = Vector::Zero(space.ndof());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const auto& tri = mesh.triangle(k);
    const Vec2 a = mesh.vertex(tri[0]), b = mesh.vertex(tri[1]), c = mesh.vertex(tri[2]);
    const double area = mesh.element_area(k);
    for (const TrianglePoint& q : space.volume_rule().points) {
      const Vec2 x = q.l0 * a + q.l1 * b + q.l2 * c;
      const double w = q.weight * area;
      const double gval = g(x, t);
      load[space.dof(k, 0)] += w * (q.l0 * gval);
      load[space.dof(k, 1)] += w * (q.l1 * gval);
      load[space.dof(k, 2)] += w * (q.l2 * gval);
    }
  }
  return load;
}

SipgOperators assemble_operators(const DgSpace& space, const SipgParams& params, const EdgeClassification& cls) {
  SipgOperators ops;
  ops.mass = assemble_mass(space);
  ops.state = assemble_state_operator(space, params, cls);
  ops.adjoint = ops.state.transpose();
  return ops;
}

} // namespace dgopt
