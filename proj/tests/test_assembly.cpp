#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "dgopt/assembly.hpp"
#include "oracles.hpp"

using namespace dgopt;

namespace {

Eigen::MatrixXd dense(const SparseMat& A) { return Eigen::MatrixXd(A); }

SipgParams random_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  SipgParams params;
  params.epsilon = std::pow(10.0, -5.0 * u01(rng));
  params.beta = {2.0 * u01(rng) - 1.0, 2.0 * u01(rng) - 1.0};
  params.reaction = 2.0 * u01(rng);
  params.sigma = 1.0 + 9.0 * u01(rng);
  return params;
}

} // namespace

TEST_CASE("mass matrix: total area, local block, positive spectrum") {
  const Mesh mesh = build_uniform_mesh(2);
  const DgSpace space(mesh);
  const SparseMat mass = assemble_mass(space);

  const Vector ones = Vector::Ones(space.ndof());
  CHECK(ones.dot(mass * ones) == doctest::Approx(1.0).epsilon(1e-14));

  // Exact local mass of a triangle with area A is A/12 [[2,1,1],[1,2,1],[1,1,2]].
  const double area = mesh.element_area(0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(dense(mass)(space.dof(0, i), space.dof(0, j)) ==
            doctest::Approx(area / 12.0 * (i == j ? 2.0 : 1.0)).epsilon(1e-13));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense(mass));
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("pure diffusion operator is symmetric") {
  const Mesh mesh = build_uniform_mesh(3);
  const DgSpace space(mesh);
  SipgParams params;
  params.epsilon = 1.0;
  params.beta = {0.0, 0.0};
  params.reaction = 0.0;
  const SparseMat A = assemble_state_operator(space, params, classify_edges(mesh, params.beta));
  CHECK((dense(A) - dense(A).transpose()).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("reaction-only assembly reduces to the mass matrix") {
  const Mesh mesh = build_uniform_mesh(2);
  const DgSpace space(mesh);
  SipgParams params;
  params.epsilon = 0.0; // accepted in assembly; solver paths reject it
  params.beta = {0.0, 0.0};
  params.reaction = 1.0;
  const SparseMat A = assemble_state_operator(space, params, classify_edges(mesh, params.beta));
  const SparseMat M = assemble_mass(space);
  CHECK((dense(A) - dense(M)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("nonpositive penalty rejected") {
  const Mesh mesh = build_uniform_mesh(1);
  const DgSpace space(mesh);
  SipgParams params;
  params.sigma = 0.0;
  CHECK_THROWS_AS(assemble_state_operator(space, params, classify_edges(mesh, params.beta)),
                  std::invalid_argument);
}

TEST_CASE("state operator matches the dense quadrature oracle on two triangles") {
  const Mesh mesh = build_uniform_mesh(1);
  const DgSpace space(mesh);
  SipgParams params;
  params.epsilon = 1.0;
  params.beta = {1.0, 0.0};
  params.reaction = 0.0;
  params.sigma = 6.0;
  const SparseMat A = assemble_state_operator(space, params, classify_edges(mesh, params.beta));
  CHECK((dense(A) - oracle::dense_state_matrix(space, params)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("adjoint operator equals the state transpose bitwise") {
  std::mt19937 rng(21);
  for (int n : {1, 2, 4}) {
    const Mesh mesh = build_uniform_mesh(n);
    const DgSpace space(mesh);
    for (int trial = 0; trial < 5; ++trial) {
      const SipgParams params = random_params(rng);
      const EdgeClassification cls = classify_edges(mesh, params.beta);
      const SparseMat As = assemble_state_operator(space, params, cls);
      const SparseMat Aa = assemble_adjoint_operator(space, params, cls);
      CHECK((dense(Aa) - dense(As).transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("adjoint equals state for the symmetric problem") {
  const Mesh mesh = build_uniform_mesh(2);
  const DgSpace space(mesh);
  SipgParams params;
  params.epsilon = 0.7;
  params.beta = {0.0, 0.0};
  params.reaction = 0.5;
  const EdgeClassification cls = classify_edges(mesh, params.beta);
  const SparseMat As = assemble_state_operator(space, params, cls);
  const SparseMat Aa = assemble_adjoint_operator(space, params, cls);
  CHECK((dense(Aa) - dense(As)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("adjoint operator matches the dense oracle of the downwind form") {
  const Mesh mesh = build_uniform_mesh(1);
  const DgSpace space(mesh);
  SipgParams params;
  params.epsilon = 1.0;
  params.beta = {0.5, 0.5};
  params.reaction = 1.0;
  params.sigma = 6.0;
  const SparseMat Aa = assemble_adjoint_operator(space, params, classify_edges(mesh, params.beta));
  CHECK((dense(Aa) - oracle::dense_adjoint_matrix(space, params)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("oracle duality: dense state and adjoint forms are transposes") {
  // The two displayed forms are integrated independently in the oracle, so
  // their agreement is a genuine property of the forms, not of the assembly.
  const Mesh mesh = build_uniform_mesh(2);
  const DgSpace space(mesh);
  std::mt19937 rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const SipgParams params = random_params(rng);
    const Eigen::MatrixXd As = oracle::dense_state_matrix(space, params);
    const Eigen::MatrixXd Aa = oracle::dense_adjoint_matrix(space, params);
    CHECK((Aa - As.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("load vectors: zero, constants, linears") {
  const Mesh mesh = build_uniform_mesh(2);
  const DgSpace space(mesh);
  const SparseMat mass = assemble_mass(space);

  CHECK(assemble_load(space, [](Vec2, double) { return 0.0; }, 0.0).lpNorm<Eigen::Infinity>() == 0.0);

  const Vector load1 = assemble_load(space, [](Vec2, double) { return 1.0; }, 0.0);
  CHECK((load1 - mass * Vector::Ones(space.ndof())).lpNorm<Eigen::Infinity>() <= 1e-14);

  const Vector loadx = assemble_load(space, [](Vec2 x, double) { return x.x; }, 0.0);
  const Vector interp = space.project([](Vec2 x) { return x.x; });
  CHECK((loadx - mass * interp).lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("sparsity couples only edge neighbors") {
  const Mesh mesh = build_uniform_mesh(3);
  const DgSpace space(mesh);
  SipgParams params;
  params.epsilon = 1.0;
  params.beta = {1.0, 0.25};
  params.reaction = 1.0;
  const SparseMat A = assemble_state_operator(space, params, classify_edges(mesh, params.beta));

  // Allowed couplings: an element with itself and with its edge neighbors.
  std::vector<std::set<int>> allowed(static_cast<size_t>(mesh.num_triangles()));
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    allowed[static_cast<size_t>(k)].insert(k);
    for (int e : mesh.element_edges(k)) {
      const Edge& edge = mesh.edge(e);
      if (!edge.is_boundary()) allowed[static_cast<size_t>(k)].insert(edge.owner == k ? edge.neighbor : edge.owner);
    }
  }
  const Eigen::MatrixXd D = dense(A);
  for (int i = 0; i < space.ndof(); ++i)
    for (int j = 0; j < space.ndof(); ++j)
      if (D(i, j) != 0.0) CHECK(allowed[static_cast<size_t>(i / 3)].count(j / 3) == 1);
}

TEST_CASE("coercivity proxy at the benchmark parameters") {
  const Mesh mesh = build_uniform_mesh(4);
  const DgSpace space(mesh);
  SipgParams params;
  params.epsilon = 1e-5;
  params.beta = {1.0, 0.0};
  params.reaction = 1.0;
  params.sigma = 6.0;
  const SparseMat A = assemble_state_operator(space, params, classify_edges(mesh, params.beta));

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vector v(space.ndof());
    for (int i = 0; i < space.ndof(); ++i) v[i] = value(rng);
    CHECK(v.dot(A * v) > 0.0); // strict, since the reaction constant is positive
  }
}

TEST_CASE("penalty scaling moves only edge-coupled blocks") {
  const Mesh mesh = build_uniform_mesh(2);
  const DgSpace space(mesh);
  SipgParams params;
  params.epsilon = 0.37;
  params.beta = {0.4, -0.8};
  params.reaction = 1.0;
  params.sigma = 6.0;
  const EdgeClassification cls = classify_edges(mesh, params.beta);

  SipgParams doubled = params;
  doubled.sigma = 12.0;
  const Eigen::MatrixXd diff =
      dense(assemble_state_operator(space, doubled, cls)) - dense(assemble_state_operator(space, params, cls));

  // The difference must equal the penalty term at the base sigma (interior
  // and boundary), assembled independently.
  SipgParams penalty_only = params;
  Eigen::MatrixXd expected = oracle::dense_state_matrix(space, doubled) - oracle::dense_state_matrix(space, params);
  CHECK((diff - expected).cwiseAbs().maxCoeff() <= 1e-12);

  // And it only touches pairs coupled through an edge (or an element with
  // itself via its boundary/interior edges).
  for (int i = 0; i < space.ndof(); ++i) {
    for (int j = 0; j < space.ndof(); ++j) {
      if (std::abs(diff(i, j)) > 1e-14) {
        const int ki = i / 3, kj = j / 3;
        bool coupled = ki == kj;
        for (int e : mesh.element_edges(ki)) {
          const Edge& edge = mesh.edge(e);
          coupled = coupled || (!edge.is_boundary() && (edge.owner == kj || edge.neighbor == kj));
        }
        CHECK(coupled);
      }
    }
  }
}

TEST_CASE("interior jumps of a globally continuous linear vanish") {
  const Mesh mesh = build_uniform_mesh(3);
  const DgSpace space(mesh);
  SipgParams params;
  params.epsilon = 1.0;
  params.beta = {0.0, 0.0};
  params.reaction = 0.0;
  params.sigma = 6.0;

  const Vector x1 = space.project([](Vec2 x) { return x.x; });
  const Eigen::MatrixXd penalty = oracle::dense_interior_penalty_matrix(space, params);
  CHECK(std::abs(x1.dot(penalty * x1)) <= 1e-13);
}
