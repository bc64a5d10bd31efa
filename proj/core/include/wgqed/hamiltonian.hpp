#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "wgqed/model.hpp"

namespace wgqed {

using Complex = std::complex<double>;
using SectorOneMatrix = Eigen::MatrixXcd;

// Matrix element <p|H|q> of the single-excitation sector for p != q
// (1-based sites). Forward (p > q) hops carry gamma_t, backward hops gamma_r.
Complex hop_coefficient(const ChainConfig& cfg, int p, int q);

// Off-diagonal part of the single-excitation sector; depends on the chain only.
Eigen::MatrixXcd hopping_matrix(const ChainConfig& cfg);

SectorOneMatrix build_sector1(const ChainConfig& cfg, std::span<const double> detunings);
inline SectorOneMatrix build_sector1(const ChainConfig& cfg, const DisorderSample& s) {
  return build_sector1(cfg, s.view());
}

enum class Triangularity { none, lower, upper };

// Two-excitation sector in the pair basis. Rows are always kept as sorted
// (column, value) lists; a dense copy is also held while dim <= dense limit pairs.
class SectorTwoMatrix {
 public:
  struct Entry {
    std::size_t col;
    Complex value;
  };

  static constexpr int default_dense_limit = 64;  // in qubits

  SectorTwoMatrix() = default;
  SectorTwoMatrix(std::size_t dim, std::vector<std::size_t> row_start, std::vector<Entry> entries,
                  bool keep_dense, Triangularity tri);

  std::size_t dim() const noexcept { return dim_; }
  bool is_dense() const noexcept { return dense_.size() > 0 || dim_ == 0; }
  Triangularity triangularity() const noexcept { return tri_; }

  Complex coeff(std::size_t row, std::size_t col) const;
  std::span<const Entry> row(std::size_t r) const noexcept {
    return {entries_.data() + row_start_[r], row_start_[r + 1] - row_start_[r]};
  }
  std::size_t nonzeros() const noexcept { return entries_.size(); }

  // Dense view; only valid when is_dense().
  const Eigen::MatrixXcd& dense() const;
  Eigen::MatrixXcd to_dense() const;
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> to_sparse() const;
  Eigen::VectorXcd multiply(const Eigen::VectorXcd& x) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_start_{0};
  std::vector<Entry> entries_;
  Eigen::MatrixXcd dense_;
  Triangularity tri_ = Triangularity::none;
};

// Throws Unsupported for N < 2.
SectorTwoMatrix build_sector2(const ChainConfig& cfg, std::span<const double> detunings,
                              int dense_limit = SectorTwoMatrix::default_dense_limit);
inline SectorTwoMatrix build_sector2(const ChainConfig& cfg, const DisorderSample& s,
                                     int dense_limit = SectorTwoMatrix::default_dense_limit) {
  return build_sector2(cfg, s.view(), dense_limit);
}

Triangularity sector_triangularity(const ChainConfig& cfg) noexcept;

struct DriveVectors {
  double sqrt_gamma_t = 0.0;
  Eigen::VectorXcd site_phase;  // e^{i m phi}, m = 1..N
  Eigen::VectorXcd v_plus;      // sqrt(gamma_t) e^{i m phi}

  // Pair component (m,n) = sqrt(gamma_t) (e^{i m phi} psi_n + e^{i n phi} psi_m).
  Eigen::VectorXcd lift(const Eigen::VectorXcd& psi1) const;
};

struct ProjectionVectors {
  Eigen::VectorXcd phi1_plus;   // sqrt(gamma_t) e^{+i m phi}
  Eigen::VectorXcd phi1_minus;  // sqrt(gamma_t) e^{-i m phi}
  Eigen::VectorXcd phi2_plus;   // 2 gamma_t e^{+i (m+n) phi}
  Eigen::VectorXcd phi2_minus;  // 2 gamma_t e^{-i (m+n) phi}
};

DriveVectors build_drive(const ChainConfig& cfg);
ProjectionVectors build_projections(const ChainConfig& cfg);

// Full 2^N effective Hamiltonian assembled from site operators. Basis state
// b has qubit m excited iff bit (m-1) of b is set. Test oracle only.
struct FullSpaceHamiltonian {
  Eigen::MatrixXcd h;
  std::vector<std::size_t> sector1_basis;  // basis index of qubit m excited, m = 1..N
  std::vector<std::size_t> sector2_basis;  // basis index of pair k, canonical pair order

  Eigen::MatrixXcd sector1() const;
  Eigen::MatrixXcd sector2() const;
};

// Throws TooLarge for N > 12.
FullSpaceHamiltonian brute_force_heff(const ChainConfig& cfg, std::span<const double> detunings);

}  // namespace wgqed
