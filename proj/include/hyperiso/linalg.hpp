#pragma once

#include <optional>
#include <vector>

#include "hyperiso/field.hpp"

namespace hyperiso {

struct SingularSystem : MathError {
  using MathError::MathError;
};

using Vector = std::vector<Fq>;
using Matrix = std::vector<std::vector<Fq>>;

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<int> row_reduce(Matrix& A);
int rank(Matrix A);
/// Basis of {x : A x = 0}; `cols` and `F` fix the shape when A has no rows.
std::vector<Vector> null_space(const Matrix& A, int cols, const FieldCtx* F);
/// Unique solution of a square nonsingular system; nullopt when singular.
std::optional<Vector> solve(const Matrix& A, const Vector& b);
/// Some solution of a consistent (possibly rectangular) system, free variables set to zero.
std::optional<Vector> solve_any(const Matrix& A, const Vector& b, int cols, const FieldCtx* F);
Fq det(Matrix A);
std::optional<Matrix> inverse(const Matrix& A);
Matrix mat_mul(const Matrix& A, const Matrix& B);
Vector mat_vec(const Matrix& A, const Vector& x);
Matrix identity_matrix(const FieldCtx* F, int n);
Matrix transpose(const Matrix& A);

/// Determinant by cofactor expansion over any commutative ring; intended for small sizes.
template <class R>
R det_laplace(const std::vector<std::vector<R>>& A) {
  const size_t n = A.size();
  if (n == 1) return A[0][0];
  if (n == 2) return A[0][0] * A[1][1] - A[0][1] * A[1][0];
  if (n == 3) {
    return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
           A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
  }
  R acc = zero_like(A[0][0]);
  for (size_t j = 0; j < n; ++j) {
    std::vector<std::vector<R>> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<R> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(A[i][k]);
      minor.push_back(std::move(row));
    }
    R term = A[0][j] * det_laplace(minor);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace hyperiso
