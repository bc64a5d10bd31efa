#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wgqed {

class SectorTwoMatrix;

// In-place LU with partial pivoting on a column-major n x n complex buffer.
// Sized for the small dense systems of the sampling loop; the buffers are
// reused across factorizations.
class DenseLu {
 public:
  using Complex = std::complex<double>;

  // Takes ownership of the contents of `a` (column-major, a[i + j*n]).
  // Returns false when a pivot vanishes exactly.
  bool factor(std::span<const Complex> a, std::size_t n);
  // Factor the matrix already written into `storage()` after `resize(n)`.
  bool factor_in_place();

  void resize(std::size_t n);
  std::span<Complex> storage() noexcept { return lu_; }
  std::size_t size() const noexcept { return n_; }

  // max|u_ii| / min|u_ii|; a cheap lower bound on the 2-norm condition number.
  double pivot_ratio() const noexcept;

  // Solve A x = b in place.
  void solve(std::span<Complex> b) const;
  // Solve A^T x = b in place.
  void solve_transposed(std::span<Complex> b) const;

 private:
  std::size_t n_ = 0;
  std::vector<Complex> lu_;
  std::vector<std::size_t> perm_;
  double max_pivot_ = 0.0;
  double min_pivot_ = 0.0;
};

// Solve a triangular sector-2 system held as sorted sparse rows.
// `lower` selects forward substitution; otherwise back substitution.
void triangular_solve(const SectorTwoMatrix& h, bool lower, std::span<std::complex<double>> b);

}  // namespace wgqed
