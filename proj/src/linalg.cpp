#include "hyperiso/linalg.hpp"

namespace hyperiso {

std::vector<int> row_reduce(Matrix& A) {
  std::vector<int> pivots;
  if (A.empty()) return pivots;
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(A[0].size());
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int piv = row;
    while (piv < m && A[piv][col].is_zero()) ++piv;
    if (piv == m) continue;
    std::swap(A[piv], A[row]);
    const Fq inv = A[row][col].inv();
    for (int j = col; j < n; ++j) A[row][j] *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == row || A[r][col].is_zero()) continue;
      const Fq f = A[r][col];
      for (int j = col; j < n; ++j) A[r][j] -= f * A[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(Matrix A) { return static_cast<int>(row_reduce(A).size()); }

std::vector<Vector> null_space(const Matrix& A, int cols, const FieldCtx* F) {
  Matrix R = A;
  std::vector<int> piv = row_reduce(R);
  std::vector<bool> is_pivot(cols, false);
  for (int c : piv) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vector v(cols, Fq(F, 0));
    v[free] = Fq(F, 1);
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -R[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector> solve_any(const Matrix& A, const Vector& b, int cols, const FieldCtx* F) {
  Matrix aug = A;
  for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  std::vector<int> piv = row_reduce(aug);
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  Vector x(cols, Fq(F, 0));
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][cols];
  return x;
}

std::optional<Vector> solve(const Matrix& A, const Vector& b) {
  const int n = static_cast<int>(A.size());
  if (n == 0) return Vector{};
  Matrix aug = A;
  for (int i = 0; i < n; ++i) aug[i].push_back(b[i]);
  std::vector<int> piv = row_reduce(aug);
  if (static_cast<int>(piv.size()) < n || piv.back() >= n) return std::nullopt;
  Vector x(n);
  for (int r = 0; r < n; ++r) x[r] = aug[r][n];
  return x;
}

Fq det(Matrix A) {
  const int n = static_cast<int>(A.size());
  Fq d = A[0][0].one();
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (piv < n && A[piv][col].is_zero()) ++piv;
    if (piv == n) return d.zero();
    if (piv != col) {
      std::swap(A[piv], A[col]);
      d = -d;
    }
    d *= A[col][col];
    const Fq inv = A[col][col].inv();
    for (int r = col + 1; r < n; ++r) {
      if (A[r][col].is_zero()) continue;
      const Fq f = A[r][col] * inv;
      for (int j = col; j < n; ++j) A[r][j] -= f * A[col][j];
    }
  }
  return d;
}

std::optional<Matrix> inverse(const Matrix& A) {
  const int n = static_cast<int>(A.size());
  const FieldCtx* F = A[0][0].field();
  Matrix aug = A;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) aug[i].push_back(Fq(F, i == j ? 1 : 0));
  std::vector<int> piv = row_reduce(aug);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] >= n) return std::nullopt;
  Matrix inv(n);
  for (int i = 0; i < n; ++i) inv[i].assign(aug[i].begin() + n, aug[i].end());
  return inv;
}

Matrix mat_mul(const Matrix& A, const Matrix& B) {
  const size_t m = A.size(), k = B.size(), n = B[0].size();
  Matrix C(m, Vector(n, B[0][0].zero()));
  for (size_t i = 0; i < m; ++i)
    for (size_t t = 0; t < k; ++t) {
      if (A[i][t].is_zero()) continue;
      for (size_t j = 0; j < n; ++j) C[i][j] += A[i][t] * B[t][j];
    }
  return C;
}

Vector mat_vec(const Matrix& A, const Vector& x) {
  Vector y(A.size(), x[0].zero());
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
  return y;
}

Matrix identity_matrix(const FieldCtx* F, int n) {
  Matrix I(n, Vector(n, Fq(F, 0)));
  for (int i = 0; i < n; ++i) I[i][i] = Fq(F, 1);
  return I;
}

Matrix transpose(const Matrix& A) {
  if (A.empty()) return A;
  Matrix T(A[0].size(), Vector(A.size()));
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < A[0].size(); ++j) T[j][i] = A[i][j];
  return T;
}

}  // namespace hyperiso
