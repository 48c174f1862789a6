#include "dgopt/linalg.hpp"

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgopt {

Factorization::Factorization(const SparseMat& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("factorize: matrix must be square");
  n_ = A.rows();
  auto lu = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
  Eigen::SparseMatrix<double> col_major(A);
  lu->analyzePattern(col_major);
  lu->factorize(col_major);
  if (lu->info() != Eigen::Success)
    throw std::runtime_error("factorize: singular matrix (" + lu->lastErrorMessage() + ")");
  lu_ = std::move(lu);
}

Vector Factorization::solve(const Vector& b) const {
  if (b.size() != n_) throw std::invalid_argument("solve: right-hand side dimension mismatch");
  return lu_->solve(b);
}

Factorization factorize(const SparseMat& A) { return Factorization(A); }

Vector solve(const Factorization& f, const Vector& b) { return f.solve(b); }

Factorization factorize_block(const BlockSystem2x2& blocks) {
  const Eigen::Index n = blocks.b11.rows();
  for (const SparseMat* block : {&blocks.b11, &blocks.b12, &blocks.b21, &blocks.b22})
    if (block->rows() != n || block->cols() != n)
      throw std::invalid_argument("factorize_block: blocks must share one square dimension");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(blocks.b11.nonZeros() + blocks.b12.nonZeros() + blocks.b21.nonZeros() +
                                       blocks.b22.nonZeros()));
  auto append = [&triplets](const SparseMat& block, Eigen::Index row0, Eigen::Index col0) {
    for (Eigen::Index r = 0; r < block.outerSize(); ++r)
      for (SparseMat::InnerIterator it(block, r); it; ++it)
        triplets.emplace_back(static_cast<int>(row0 + it.row()), static_cast<int>(col0 + it.col()), it.value());
  };
  append(blocks.b11, 0, 0);
  append(blocks.b12, 0, n);
  append(blocks.b21, n, 0);
  append(blocks.b22, n, n);

  SparseMat monolithic(2 * n, 2 * n);
  monolithic.setFromTriplets(triplets.begin(), triplets.end());
  return Factorization(monolithic);
}

std::pair<Vector, Vector> solve_block(const Factorization& f, const Vector& b1, const Vector& b2) {
  const Eigen::Index n = f.dim() / 2;
  if (b1.size() != n || b2.size() != n)
    throw std::invalid_argument("solve_block: right-hand side dimension mismatch");
  Vector stacked(2 * n);
  stacked.head(n) = b1;
  stacked.tail(n) = b2;
  const Vector x = f.solve(stacked);
  return {x.head(n), x.tail(n)};
}

void dump_matrix(const SparseMat& A, std::ostream& out) {
  for (Eigen::Index r = 0; r < A.outerSize(); ++r)
    for (SparseMat::InnerIterator it(A, r); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

} // namespace dgopt
