#include "wgqed/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wgqed/hamiltonian.hpp"

namespace wgqed {

void DenseLu::resize(std::size_t n) {
  n_ = n;
  lu_.resize(n * n);
  perm_.resize(n);
}

bool DenseLu::factor(std::span<const Complex> a, std::size_t n) {
  resize(n);
  std::copy(a.begin(), a.end(), lu_.begin());
  return factor_in_place();
}

bool DenseLu::factor_in_place() {
  const std::size_t n = n_;
  Complex* a = lu_.data();
  max_pivot_ = 0.0;
  min_pivot_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    Complex* col_k = a + k * n;
    std::size_t piv = k;
    double best = std::norm(col_k[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::norm(col_k[i]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) {
      min_pivot_ = 0.0;
      return false;
    }
    if (piv != k) {
      std::swap(perm_[k], perm_[piv]);
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k + j * n], a[piv + j * n]);
    }
    const double mag = std::sqrt(best);
    max_pivot_ = std::max(max_pivot_, mag);
    min_pivot_ = std::min(min_pivot_, mag);

    const Complex inv = 1.0 / col_k[k];
    for (std::size_t i = k + 1; i < n; ++i) col_k[i] *= inv;
    for (std::size_t j = k + 1; j < n; ++j) {
      Complex* col_j = a + j * n;
      const Complex u = col_j[k];
      if (u == Complex{}) continue;
      for (std::size_t i = k + 1; i < n; ++i) col_j[i] -= col_k[i] * u;
    }
  }
  return true;
}

double DenseLu::pivot_ratio() const noexcept {
  if (n_ == 0) return 1.0;
  if (min_pivot_ == 0.0) return std::numeric_limits<double>::infinity();
  return max_pivot_ / min_pivot_;
}

void DenseLu::solve(std::span<Complex> b) const {
  const std::size_t n = n_;
  const Complex* a = lu_.data();
  // Row exchanges were applied in sequence, so perm_ maps new row -> old row.
  thread_local std::vector<Complex> tmp;
  tmp.resize(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = b[perm_[i]];
  // L y = P b, unit diagonal, column oriented
  for (std::size_t k = 0; k < n; ++k) {
    const Complex y = tmp[k];
    if (y == Complex{}) continue;
    const Complex* col = a + k * n;
    for (std::size_t i = k + 1; i < n; ++i) tmp[i] -= col[i] * y;
  }
  // U x = y
  for (std::size_t k = n; k-- > 0;) {
    const Complex* col = a + k * n;
    tmp[k] /= col[k];
    const Complex x = tmp[k];
    for (std::size_t i = 0; i < k; ++i) tmp[i] -= col[i] * x;
  }
  std::copy(tmp.begin(), tmp.end(), b.begin());
}

void DenseLu::solve_transposed(std::span<Complex> b) const {
  // A = P^T L U, so A^T x = U^T L^T P x = b.
  const std::size_t n = n_;
  const Complex* a = lu_.data();
  thread_local std::vector<Complex> tmp;
  tmp.assign(b.begin(), b.end());
  // U^T z = b (lower triangular, row k of U^T is column k of U)
  for (std::size_t k = 0; k < n; ++k) {
    const Complex* col = a + k * n;
    Complex acc = tmp[k];
    for (std::size_t i = 0; i < k; ++i) acc -= col[i] * tmp[i];
    tmp[k] = acc / col[k];
  }
  // L^T w = z (unit upper)
  for (std::size_t k = n; k-- > 0;) {
    const Complex* col = a + k * n;
    Complex acc = tmp[k];
    for (std::size_t i = k + 1; i < n; ++i) acc -= col[i] * tmp[i];
    tmp[k] = acc;
  }
  for (std::size_t i = 0; i < n; ++i) b[perm_[i]] = tmp[i];
}

void triangular_solve(const SectorTwoMatrix& h, bool lower, std::span<std::complex<double>> b) {
  const std::size_t n = h.dim();
  auto solve_row = [&](std::size_t r) {
    std::complex<double> acc = b[r];
    std::complex<double> diag{};
    for (const auto& e : h.row(r)) {
      if (e.col == r)
        diag = e.value;
      else
        acc -= e.value * b[e.col];
    }
    b[r] = acc / diag;
  };
  if (lower) {
    for (std::size_t r = 0; r < n; ++r) solve_row(r);
  } else {
    for (std::size_t r = n; r-- > 0;) solve_row(r);
  }
}

}  // namespace wgqed
