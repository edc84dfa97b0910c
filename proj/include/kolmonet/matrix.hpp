#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kolmonet {

using Vector = std::vector<double>;

/// Exact parameter counts. Arithmetic on counts goes through the checked helpers.
using ParamCount = std::uint64_t;

ParamCount checked_add(ParamCount a, ParamCount b);
ParamCount checked_mul(ParamCount a, ParamCount b);

/**
 * Real matrix stored as a diagonal tiling of dense row-major blocks.
 *
 * Block k occupies rows [r_k, r_k + rows_k) and columns [c_k, c_k + cols_k),
 * where r_k and c_k are the running sums of the previous block shapes; every
 * entry outside the blocks is an exact zero. A plain dense matrix is a single
 * block. Parallelized networks keep their weights block-diagonal this way, so
 * memory grows linearly in the number of parallel copies. The logical shape is
 * unaffected: rows(), cols() and entry() behave as for the dense matrix, and
 * parameter counting uses rows() * cols().
 */
class Matrix {
 public:
  struct Block {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major, rows * cols

    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  };

  Matrix() = default;
  /// Dense zero matrix.
  Matrix(std::size_t rows, std::size_t cols);
  /// Dense matrix from row-major entries.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix diagonal(std::span<const double> diag);
  /// Block-diagonal matrix diag(parts[0], parts[1], ...). Nested block structure is flattened.
  static Matrix block_diagonal(std::span<const Matrix> parts);
  /// Vertical stack of `copies` identity matrices of size n, shape (copies*n) x n.
  static Matrix stacked_identity(std::size_t n, std::size_t copies);
  /// Horizontal concatenation (w[0] I_n ... w[k-1] I_n), shape n x (k*n).
  static Matrix weighted_identity_row(std::size_t n, std::span<const double> weights);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  /// rows * cols; every entry counts, zeros included.
  ParamCount entry_count() const;
  bool is_dense() const noexcept { return blocks_.size() <= 1; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }

  double entry(std::size_t r, std::size_t c) const;
  std::vector<double> to_row_major() const;

  /// y = A x
  Vector apply(std::span<const double> x) const;
  /// y += A x
  void apply_add(std::span<const double> x, std::span<double> y) const;

  Matrix scaled(double factor) const;
  Matrix transposed() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  /// Entrywise comparison of the logical matrices; storage layout is ignored.
  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  Matrix(std::size_t rows, std::size_t cols, std::vector<Block> blocks);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Block> blocks_;
};

/// Concatenation of vectors, in order.
Vector concat(std::span<const Vector> parts);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);
double frobenius_norm(const Matrix& a);

}  // namespace kolmonet
