#include "kolmonet/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kolmonet/error.hpp"

namespace kolmonet {

ParamCount checked_add(ParamCount a, ParamCount b) {
  if (a > std::numeric_limits<ParamCount>::max() - b) {
    throw std::overflow_error("parameter count overflows 64 bits");
  }
  return a + b;
}

ParamCount checked_mul(ParamCount a, ParamCount b) {
  if (a != 0 && b > std::numeric_limits<ParamCount>::max() / a) {
    throw std::overflow_error("parameter count overflows 64 bits");
  }
  return a * b;
}

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  blocks_.push_back(Block{rows, cols, std::vector<double>(rows * cols, 0.0)});
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols) {
  if (row_major.size() != rows * cols) {
    throw DimensionMismatch("matrix data has " + std::to_string(row_major.size()) +
                            " entries, expected " + std::to_string(rows) + "x" +
                            std::to_string(cols));
  }
  blocks_.push_back(Block{rows, cols, std::move(row_major)});
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Block> blocks)
    : rows_(rows), cols_(cols), blocks_(std::move(blocks)) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.blocks_[0].data[i * n + i] = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  const std::size_t n = diag.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.blocks_[0].data[i * n + i] = diag[i];
  return m;
}

Matrix Matrix::block_diagonal(std::span<const Matrix> parts) {
  if (parts.size() == 1) return parts[0];
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Block> blocks;
  for (const auto& p : parts) {
    rows += p.rows_;
    cols += p.cols_;
    blocks.insert(blocks.end(), p.blocks_.begin(), p.blocks_.end());
  }
  return Matrix(rows, cols, std::move(blocks));
}

Matrix Matrix::stacked_identity(std::size_t n, std::size_t copies) {
  Matrix m(n * copies, n);
  auto& data = m.blocks_[0].data;
  for (std::size_t k = 0; k < copies; ++k) {
    for (std::size_t i = 0; i < n; ++i) data[(k * n + i) * n + i] = 1.0;
  }
  return m;
}

Matrix Matrix::weighted_identity_row(std::size_t n, std::span<const double> weights) {
  const std::size_t width = n * weights.size();
  Matrix m(n, width);
  auto& data = m.blocks_[0].data;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) data[i * width + k * n + i] = weights[k];
  }
  return m;
}

ParamCount Matrix::entry_count() const { return checked_mul(rows_, cols_); }

double Matrix::entry(std::size_t r, std::size_t c) const {
  std::size_t r0 = 0;
  std::size_t c0 = 0;
  for (const auto& b : blocks_) {
    if (r < r0 + b.rows) {
      if (c >= c0 && c < c0 + b.cols) return b.at(r - r0, c - c0);
      return 0.0;
    }
    r0 += b.rows;
    c0 += b.cols;
  }
  return 0.0;
}

std::vector<double> Matrix::to_row_major() const {
  std::vector<double> out(rows_ * cols_, 0.0);
  std::size_t r0 = 0;
  std::size_t c0 = 0;
  for (const auto& b : blocks_) {
    for (std::size_t i = 0; i < b.rows; ++i) {
      for (std::size_t j = 0; j < b.cols; ++j) out[(r0 + i) * cols_ + c0 + j] = b.at(i, j);
    }
    r0 += b.rows;
    c0 += b.cols;
  }
  return out;
}

Vector Matrix::apply(std::span<const double> x) const {
  Vector y(rows_, 0.0);
  apply_add(x, y);
  return y;
}

void Matrix::apply_add(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) {
    throw DimensionMismatch("matrix " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                            " applied to vector of length " + std::to_string(x.size()));
  }
  std::size_t r0 = 0;
  std::size_t c0 = 0;
  for (const auto& b : blocks_) {
    const double* row = b.data.data();
    for (std::size_t i = 0; i < b.rows; ++i, row += b.cols) {
      double acc = 0.0;
      for (std::size_t j = 0; j < b.cols; ++j) acc += row[j] * x[c0 + j];
      y[r0 + i] += acc;
    }
    r0 += b.rows;
    c0 += b.cols;
  }
}

Matrix Matrix::scaled(double factor) const {
  Matrix out = *this;
  for (auto& b : out.blocks_) {
    for (auto& v : b.data) v *= factor;
  }
  return out;
}

Matrix Matrix::transposed() const {
  std::vector<Block> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    Block t{b.cols, b.rows, std::vector<double>(b.data.size())};
    for (std::size_t i = 0; i < b.rows; ++i) {
      for (std::size_t j = 0; j < b.cols; ++j) t.data[j * b.rows + i] = b.at(i, j);
    }
    blocks.push_back(std::move(t));
  }
  return Matrix(cols_, rows_, std::move(blocks));
}

namespace {

Matrix::Block dense_product(const Matrix::Block& a, const Matrix::Block& b) {
  Matrix::Block c{a.rows, b.cols, std::vector<double>(a.rows * b.cols, 0.0)};
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.data.data() + k * b.cols;
      double* crow = c.data.data() + i * b.cols;
      for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

}  // namespace

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) {
    throw DimensionMismatch("matrix product of " + std::to_string(a.rows_) + "x" +
                            std::to_string(a.cols_) + " and " + std::to_string(b.rows_) + "x" +
                            std::to_string(b.cols_));
  }
  // Aligned tilings multiply blockwise and stay block-diagonal.
  bool aligned = a.blocks_.size() == b.blocks_.size();
  for (std::size_t k = 0; aligned && k < a.blocks_.size(); ++k) {
    aligned = a.blocks_[k].cols == b.blocks_[k].rows;
  }
  if (aligned) {
    std::vector<Matrix::Block> blocks;
    blocks.reserve(a.blocks_.size());
    for (std::size_t k = 0; k < a.blocks_.size(); ++k) {
      blocks.push_back(dense_product(a.blocks_[k], b.blocks_[k]));
    }
    return Matrix(a.rows_, b.cols_, std::move(blocks));
  }

  // General case: accumulate every overlapping block pair into a dense result.
  Matrix c(a.rows_, b.cols_);
  auto& out = c.blocks_[0].data;
  std::size_t ar0 = 0;
  std::size_t ac0 = 0;
  for (const auto& ab : a.blocks_) {
    std::size_t br0 = 0;
    std::size_t bc0 = 0;
    for (const auto& bb : b.blocks_) {
      const std::size_t lo = std::max(ac0, br0);
      const std::size_t hi = std::min(ac0 + ab.cols, br0 + bb.rows);
      for (std::size_t i = 0; lo < hi && i < ab.rows; ++i) {
        double* crow = out.data() + (ar0 + i) * b.cols_ + bc0;
        for (std::size_t k = lo; k < hi; ++k) {
          const double aik = ab.at(i, k - ac0);
          if (aik == 0.0) continue;
          const double* brow = bb.data.data() + (k - br0) * bb.cols;
          for (std::size_t j = 0; j < bb.cols; ++j) crow[j] += aik * brow[j];
        }
      }
      br0 += bb.rows;
      bc0 += bb.cols;
    }
    ar0 += ab.rows;
    ac0 += ab.cols;
  }
  return c;
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  if (a.blocks_.size() == b.blocks_.size()) {
    bool same_tiling = true;
    for (std::size_t k = 0; same_tiling && k < a.blocks_.size(); ++k) {
      same_tiling = a.blocks_[k].rows == b.blocks_[k].rows && a.blocks_[k].cols == b.blocks_[k].cols;
    }
    if (same_tiling) {
      for (std::size_t k = 0; k < a.blocks_.size(); ++k) {
        if (a.blocks_[k].data != b.blocks_[k].data) return false;
      }
      return true;
    }
  }
  return a.to_row_major() == b.to_row_major();
}

Vector concat(std::span<const Vector> parts) {
  Vector out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product of vectors with different lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (const auto& b : a.blocks()) {
    for (double v : b.data) s += v * v;
  }
  return std::sqrt(s);
}

}  // namespace kolmonet
