#include "kolmonet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kolmonet/error.hpp"

namespace kolmonet {

namespace {

struct Dense {
  std::size_t n;
  std::vector<double> v;
  double& operator()(std::size_t i, std::size_t j) { return v[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * n + j]; }
};

double off_diagonal_norm(const Dense& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    for (std::size_t j = 0; j < a.n; ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Matrix& m, double tol, int max_sweeps) {
  if (m.rows() != m.cols()) throw DimensionMismatch("eigendecomposition needs a square matrix");
  const std::size_t n = m.rows();
  Dense a{n, m.to_row_major()};
  Dense v{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  const double scale = std::max(frobenius_norm(m), 1e-300);
  for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(a) > tol * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  std::vector<double> vec(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) vec[r * n + c] = v(r, order[c]);
  }
  out.vectors = Matrix(n, n, std::move(vec));
  return out;
}

Matrix sqrt_spd(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionMismatch("square root needs a non-empty square matrix");
  }
  const std::size_t n = a.rows();
  const auto dense = a.to_row_major();
  double max_abs = 0.0;
  double asym = 0.0;
  bool diagonal = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      max_abs = std::max(max_abs, std::abs(dense[i * n + j]));
      asym = std::max(asym, std::abs(dense[i * n + j] - dense[j * n + i]));
      if (i != j && dense[i * n + j] != 0.0) diagonal = false;
    }
  }
  if (asym > 1e-12 * max_abs) throw NotSymmetric("diffusion matrix is not symmetric");

  if (diagonal) {
    Vector root(n);
    const double top = *std::max_element(dense.begin(), dense.end());
    for (std::size_t i = 0; i < n; ++i) {
      const double v = dense[i * n + i];
      if (!(v > 1e-12 * top)) throw NotSpd("diffusion matrix is not positive definite");
      root[i] = std::sqrt(2.0 * v);
    }
    return Matrix::diagonal(root);
  }

  const auto eig = jacobi_eigen(a.scaled(2.0));
  const double top = eig.values.back();
  if (!(eig.values.front() > 1e-12 * top)) throw NotSpd("diffusion matrix is not positive definite");
  std::vector<double> s(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = eig.vectors.entry(i, k) * root;
      for (std::size_t j = 0; j < n; ++j) s[i * n + j] += vik * eig.vectors.entry(j, k);
    }
  }
  // Symmetrize away rounding in the reconstruction.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (s[i * n + j] + s[j * n + i]);
      s[i * n + j] = s[j * n + i] = avg;
    }
  }
  return Matrix(n, n, std::move(s));
}

}  // namespace kolmonet
