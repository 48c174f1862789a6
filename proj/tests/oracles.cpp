#include "oracles.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace dgopt::oracle {

namespace {

// Quadrature choices deliberately different from the library's rules: edge
// midpoints (degree 2) on triangles and 2-point Gauss (degree 3) on segments.
// Both are exact for every integrand appearing in the forms on linears.
struct VolumePoint {
  double l0, l1, l2, w;
};
constexpr std::array<VolumePoint, 3> kVolumeRule = {{{0.5, 0.5, 0.0, 1.0 / 3.0},
                                                     {0.0, 0.5, 0.5, 1.0 / 3.0},
                                                     {0.5, 0.0, 0.5, 1.0 / 3.0}}};

struct LinearBasis {
  // phi_i(x) = c0[i] + c1[i] x + c2[i] y
  std::array<double, 3> c0, c1, c2;

  double value(int i, Vec2 x) const { return c0[static_cast<size_t>(i)] + c1[static_cast<size_t>(i)] * x.x + c2[static_cast<size_t>(i)] * x.y; }
  Vec2 gradient(int i) const { return {c1[static_cast<size_t>(i)], c2[static_cast<size_t>(i)]}; }
};

LinearBasis basis_on(const Mesh& mesh, int k) {
  const auto& tri = mesh.triangle(k);
  Eigen::Matrix3d vander;
  for (int r = 0; r < 3; ++r) {
    const Vec2 v = mesh.vertex(tri[static_cast<size_t>(r)]);
    vander(r, 0) = 1.0;
    vander(r, 1) = v.x;
    vander(r, 2) = v.y;
  }
  const Eigen::Matrix3d coeffs = vander.inverse();
  LinearBasis basis;
  for (int i = 0; i < 3; ++i) {
    basis.c0[static_cast<size_t>(i)] = coeffs(0, i);
    basis.c1[static_cast<size_t>(i)] = coeffs(1, i);
    basis.c2[static_cast<size_t>(i)] = coeffs(2, i);
  }
  return basis;
}

Vec2 outward_normal(const Mesh& mesh, int k, const Edge& edge) {
  const Vec2 a = mesh.vertex(edge.verts[0]), b = mesh.vertex(edge.verts[1]);
  Vec2 n{(b - a).y, -(b - a).x};
  const double len = norm(n);
  n = (1.0 / len) * n;
  const auto& tri = mesh.triangle(k);
  const Vec2 centroid = (1.0 / 3.0) * (mesh.vertex(tri[0]) + mesh.vertex(tri[1]) + mesh.vertex(tri[2]));
  const Vec2 mid = 0.5 * (a + b);
  if (dot(n, mid - centroid) < 0.0) n = {-n.x, -n.y};
  return n;
}

struct EdgeQuad {
  std::array<Vec2, 2> points;
  std::array<double, 2> weights; // include the edge length
};

EdgeQuad edge_quadrature(const Mesh& mesh, const Edge& edge) {
  const Vec2 a = mesh.vertex(edge.verts[0]), b = mesh.vertex(edge.verts[1]);
  const double g = 0.5 / std::sqrt(3.0);
  EdgeQuad q;
  q.points = {a + (0.5 - g) * (b - a), a + (0.5 + g) * (b - a)};
  q.weights = {0.5 * edge.length, 0.5 * edge.length};
  return q;
}

void add_volume_terms(Eigen::MatrixXd& A, const DgSpace& space, const SipgParams& params, bool adjoint) {
  const Mesh& mesh = space.mesh();
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const LinearBasis basis = basis_on(mesh, k);
    const auto& tri = mesh.triangle(k);
    const Vec2 va = mesh.vertex(tri[0]), vb = mesh.vertex(tri[1]), vc = mesh.vertex(tri[2]);
    const double area = mesh.element_area(k);
    for (const VolumePoint& q : kVolumeRule) {
      const Vec2 x = q.l0 * va + q.l1 * vb + q.l2 * vc;
      const double w = q.w * area;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double conv = dot(params.beta, basis.gradient(j)) * basis.value(i, x);
          A(space.dof(k, i), space.dof(k, j)) +=
              w * (params.epsilon * dot(basis.gradient(j), basis.gradient(i)) + (adjoint ? -conv : conv) +
                   params.reaction * basis.value(j, x) * basis.value(i, x));
        }
      }
    }
  }
}

void add_diffusion_edge_terms(Eigen::MatrixXd& A, const DgSpace& space, const SipgParams& params,
                              bool interior_penalty_only) {
  const Mesh& mesh = space.mesh();
  const double eps = params.epsilon;
  for (const Edge& edge : mesh.edges()) {
    const EdgeQuad quad = edge_quadrature(mesh, edge);
    if (edge.is_boundary()) {
      if (interior_penalty_only) continue;
      const int k = edge.owner;
      const LinearBasis basis = basis_on(mesh, k);
      const Vec2 n = outward_normal(mesh, k, edge);
      for (int q = 0; q < 2; ++q) {
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            const double avg_grad_trial = eps * dot(basis.gradient(j), n);
            const double avg_grad_test = eps * dot(basis.gradient(i), n);
            const double jump_trial = basis.value(j, quad.points[static_cast<size_t>(q)]);
            const double jump_test = basis.value(i, quad.points[static_cast<size_t>(q)]);
            A(space.dof(k, i), space.dof(k, j)) +=
                quad.weights[static_cast<size_t>(q)] *
                (-avg_grad_trial * jump_test - avg_grad_test * jump_trial +
                 params.sigma * eps / edge.length * jump_trial * jump_test);
          }
        }
      }
      continue;
    }

    // Interior edge: traces from both sides; jump signs follow each side's
    // outward normal relative to the owner normal.
    const int kA = edge.owner, kB = edge.neighbor;
    const LinearBasis basisA = basis_on(mesh, kA), basisB = basis_on(mesh, kB);
    const Vec2 n = outward_normal(mesh, kA, edge);
    const struct Side {
      int element;
      const LinearBasis* basis;
      double sign;
    } sides[2] = {{kA, &basisA, 1.0}, {kB, &basisB, -1.0}};

    for (int q = 0; q < 2; ++q) {
      const Vec2 x = quad.points[static_cast<size_t>(q)];
      const double w = quad.weights[static_cast<size_t>(q)];
      for (const Side& test : sides) {
        for (const Side& trial : sides) {
          for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
              const double jump_trial = trial.sign * trial.basis->value(j, x);
              const double jump_test = test.sign * test.basis->value(i, x);
              double entry = params.sigma * eps / edge.length * jump_trial * jump_test;
              if (!interior_penalty_only) {
                entry += -0.5 * eps * dot(trial.basis->gradient(j), n) * jump_test;
                entry += -0.5 * eps * dot(test.basis->gradient(i), n) * jump_trial;
              }
              A(space.dof(test.element, i), space.dof(trial.element, j)) += w * entry;
            }
          }
        }
      }
    }
  }
}

// Upwind terms of the state form: over the inflow part of each element
// boundary, (beta.n)(y_up - y) v inside and -(beta.n) y v on the inflow
// boundary.
void add_state_upwind_terms(Eigen::MatrixXd& A, const DgSpace& space, const SipgParams& params) {
  const Mesh& mesh = space.mesh();
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const LinearBasis basis = basis_on(mesh, k);
    for (int slot = 0; slot < 3; ++slot) {
      const Edge& edge = mesh.edge(mesh.element_edges(k)[static_cast<size_t>(slot)]);
      const Vec2 n = outward_normal(mesh, k, edge);
      const double bn = dot(params.beta, n);
      if (!(bn < 0.0)) continue; // not in the inflow part
      const EdgeQuad quad = edge_quadrature(mesh, edge);
      if (edge.is_boundary()) {
        for (int q = 0; q < 2; ++q)
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              A(space.dof(k, i), space.dof(k, j)) -=
                  quad.weights[static_cast<size_t>(q)] * bn * basis.value(j, quad.points[static_cast<size_t>(q)]) *
                  basis.value(i, quad.points[static_cast<size_t>(q)]);
      } else {
        const int other = (edge.owner == k) ? edge.neighbor : edge.owner;
        const LinearBasis up = basis_on(mesh, other);
        for (int q = 0; q < 2; ++q) {
          const Vec2 x = quad.points[static_cast<size_t>(q)];
          const double w = quad.weights[static_cast<size_t>(q)];
          for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
              A(space.dof(k, i), space.dof(other, j)) += w * bn * up.value(j, x) * basis.value(i, x);
              A(space.dof(k, i), space.dof(k, j)) -= w * bn * basis.value(j, x) * basis.value(i, x);
            }
          }
        }
      }
    }
  }
}

// Downwind terms of the adjoint form: over the outflow part of each element
// boundary, -(beta.n)(p_down - p) psi inside and +(beta.n) p psi on the
// outflow boundary.
void add_adjoint_downwind_terms(Eigen::MatrixXd& A, const DgSpace& space, const SipgParams& params) {
  const Mesh& mesh = space.mesh();
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const LinearBasis basis = basis_on(mesh, k);
    for (int slot = 0; slot < 3; ++slot) {
      const Edge& edge = mesh.edge(mesh.element_edges(k)[static_cast<size_t>(slot)]);
      const Vec2 n = outward_normal(mesh, k, edge);
      const double bn = dot(params.beta, n);
      if (bn < 0.0) continue; // outflow part only (ties included, factor 0)
      const EdgeQuad quad = edge_quadrature(mesh, edge);
      if (edge.is_boundary()) {
        for (int q = 0; q < 2; ++q)
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              A(space.dof(k, i), space.dof(k, j)) +=
                  quad.weights[static_cast<size_t>(q)] * bn * basis.value(j, quad.points[static_cast<size_t>(q)]) *
                  basis.value(i, quad.points[static_cast<size_t>(q)]);
      } else {
        const int other = (edge.owner == k) ? edge.neighbor : edge.owner;
        const LinearBasis down = basis_on(mesh, other);
        for (int q = 0; q < 2; ++q) {
          const Vec2 x = quad.points[static_cast<size_t>(q)];
          const double w = quad.weights[static_cast<size_t>(q)];
          for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
              A(space.dof(k, i), space.dof(other, j)) -= w * bn * down.value(j, x) * basis.value(i, x);
              A(space.dof(k, i), space.dof(k, j)) += w * bn * basis.value(j, x) * basis.value(i, x);
            }
          }
        }
      }
    }
  }
}

} // namespace

Eigen::VectorXd dense_solve(Eigen::MatrixXd A, Eigen::VectorXd b) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n) throw std::invalid_argument("dense_solve: dimension mismatch");

  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r)
      if (std::abs(A(r, col)) > std::abs(A(pivot, col))) pivot = r;
    if (A(pivot, col) == 0.0) throw std::runtime_error("dense_solve: singular matrix");
    if (pivot != col) {
      A.row(pivot).swap(A.row(col));
      std::swap(b[pivot], b[col]);
    }
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double factor = A(r, col) / A(col, col);
      A.row(r).tail(n - col) -= factor * A.row(col).tail(n - col);
      b[r] -= factor * b[col];
    }
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    double sum = b[r];
    for (Eigen::Index c = r + 1; c < n; ++c) sum -= A(r, c) * x[c];
    x[r] = sum / A(r, r);
  }
  return x;
}

Eigen::MatrixXd dense_state_matrix(const DgSpace& space, const SipgParams& params) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(space.ndof(), space.ndof());
  add_volume_terms(A, space, params, /*adjoint=*/false);
  add_diffusion_edge_terms(A, space, params, /*interior_penalty_only=*/false);
  add_state_upwind_terms(A, space, params);
  return A;
}

Eigen::MatrixXd dense_adjoint_matrix(const DgSpace& space, const SipgParams& params) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(space.ndof(), space.ndof());
  add_volume_terms(A, space, params, /*adjoint=*/true);
  add_diffusion_edge_terms(A, space, params, /*interior_penalty_only=*/false);
  add_adjoint_downwind_terms(A, space, params);
  return A;
}

Eigen::MatrixXd dense_interior_penalty_matrix(const DgSpace& space, const SipgParams& params) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(space.ndof(), space.ndof());
  add_diffusion_edge_terms(A, space, params, /*interior_penalty_only=*/true);
  return A;
}

} // namespace dgopt::oracle
