#ifndef DGOPT_LINALG_HPP
#define DGOPT_LINALG_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <memory>

namespace dgopt {

/// Compressed sparse row storage (row offsets, column indices, values).
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

using Vector = Eigen::VectorXd;

/// Reusable sparse LU factorization with fill-reducing column ordering.
/// Immutable after construction; concurrent solves are allowed.
class Factorization {
public:
  /// Throws std::runtime_error if the matrix is singular, naming the stage
  /// reported by the factorization.
  explicit Factorization(const SparseMat& A);

  /// Forward elimination and back substitution against the stored factors.
  /// Throws std::invalid_argument on dimension mismatch.
  Vector solve(const Vector& b) const;

  Eigen::Index dim() const { return n_; }

private:
  std::shared_ptr<const Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>> lu_;
  Eigen::Index n_ = 0;
};

Factorization factorize(const SparseMat& A);
Vector solve(const Factorization& f, const Vector& b);

/// Four sparse blocks of equal square dimension forming a coupled step matrix.
struct BlockSystem2x2 {
  SparseMat b11, b12, b21, b22;

  Eigen::Index block_dim() const { return b11.rows(); }
};

/// Assembles the monolithic 2n x 2n matrix and factorizes it once; the result
/// is reused for every step of a constant-step time integration.
Factorization factorize_block(const BlockSystem2x2& blocks);

/// Solve the block system for stacked right-hand sides (b1, b2).
std::pair<Vector, Vector> solve_block(const Factorization& f, const Vector& b1, const Vector& b2);

/// Coordinate-format text dump, one "i j value" line per stored entry.
void dump_matrix(const SparseMat& A, std::ostream& out);

} // namespace dgopt

#endif
