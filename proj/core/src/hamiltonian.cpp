#include "wgqed/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex phase_at_distance(double phase, int k) { return std::polar(1.0, k * phase); }

}  // namespace

Complex hop_coefficient(const ChainConfig& cfg, int p, int q) {
  const int dist = p > q ? p - q : q - p;
  const double rate = p > q ? cfg.gamma_t : cfg.gamma_r;
  return -kI * rate * phase_at_distance(cfg.phase, dist);
}

Eigen::MatrixXcd hopping_matrix(const ChainConfig& cfg) {
  const int n = cfg.n_qubits;
  // Distance phases computed once per distance, never accumulated.
  std::vector<Complex> by_dist(static_cast<std::size_t>(n));
  for (int k = 1; k < n; ++k) by_dist[k] = phase_at_distance(cfg.phase, k);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      const double rate = p > q ? cfg.gamma_t : cfg.gamma_r;
      h(p, q) = -kI * rate * by_dist[static_cast<std::size_t>(std::abs(p - q))];
    }
  return h;
}

SectorOneMatrix build_sector1(const ChainConfig& cfg, std::span<const double> detunings) {
  validate_config(cfg);
  check_sample(cfg, detunings);
  SectorOneMatrix h = hopping_matrix(cfg);
  const double half_width = 0.5 * cfg.total_decay();
  for (int m = 0; m < cfg.n_qubits; ++m) h(m, m) = Complex(detunings[m], -half_width);
  return h;
}

Triangularity sector_triangularity(const ChainConfig& cfg) noexcept {
  if (cfg.gamma_r == 0.0) return Triangularity::lower;
  if (cfg.gamma_t == 0.0) return Triangularity::upper;
  return Triangularity::none;
}

SectorTwoMatrix::SectorTwoMatrix(std::size_t dim, std::vector<std::size_t> row_start,
                                 std::vector<Entry> entries, bool keep_dense, Triangularity tri)
    : dim_(dim), row_start_(std::move(row_start)), entries_(std::move(entries)), tri_(tri) {
  if (keep_dense) dense_ = to_dense();
}

Complex SectorTwoMatrix::coeff(std::size_t r, std::size_t c) const {
  if (r >= dim_ || c >= dim_) throw Error(ErrorCode::index_out_of_range, "sector-2 element out of range");
  if (dense_.size() > 0) return dense_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  auto entries = row(r);
  auto it = std::lower_bound(entries.begin(), entries.end(), c,
                             [](const Entry& e, std::size_t col) { return e.col < col; });
  return (it != entries.end() && it->col == c) ? it->value : Complex{};
}

const Eigen::MatrixXcd& SectorTwoMatrix::dense() const {
  if (dense_.size() == 0 && dim_ > 0)
    throw Error(ErrorCode::unsupported, "sector-2 matrix is held in sparse form");
  return dense_;
}

Eigen::MatrixXcd SectorTwoMatrix::to_dense() const {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (std::size_t r = 0; r < dim_; ++r)
    for (const auto& e : row(r)) d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e.col)) = e.value;
  return d;
}

Eigen::SparseMatrix<Complex, Eigen::RowMajor> SectorTwoMatrix::to_sparse() const {
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(entries_.size());
  for (std::size_t r = 0; r < dim_; ++r)
    for (const auto& e : row(r))
      trips.emplace_back(static_cast<int>(r), static_cast<int>(e.col), e.value);
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> s(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

Eigen::VectorXcd SectorTwoMatrix::multiply(const Eigen::VectorXcd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_)
    throw Error(ErrorCode::dimension_mismatch, "sector-2 multiply: vector length mismatch");
  Eigen::VectorXcd y(x.size());
  for (std::size_t r = 0; r < dim_; ++r) {
    Complex acc{};
    for (const auto& e : row(r)) acc += e.value * x[static_cast<Eigen::Index>(e.col)];
    y[static_cast<Eigen::Index>(r)] = acc;
  }
  return y;
}

SectorTwoMatrix build_sector2(const ChainConfig& cfg, std::span<const double> detunings, int dense_limit) {
  validate_config(cfg);
  check_sample(cfg, detunings);
  const int n = cfg.n_qubits;
  if (n < 2) throw Error(ErrorCode::unsupported, "two-excitation sector needs N >= 2");

  const Eigen::MatrixXcd hop = hopping_matrix(cfg);
  const std::size_t dim = pair_count(n);
  const Complex width(0.0, -cfg.total_decay());

  std::vector<std::size_t> row_start;
  std::vector<SectorTwoMatrix::Entry> entries;
  row_start.reserve(dim + 1);
  entries.reserve(dim * static_cast<std::size_t>(2 * (n - 2) + 1));
  row_start.push_back(0);

  std::vector<SectorTwoMatrix::Entry> scratch;
  for (int m = 2; m <= n; ++m) {
    for (int k = 1; k < m; ++k) {
      scratch.clear();
      scratch.push_back({pair_flat(m, k), detunings[m - 1] + detunings[k - 1] + width});
      // The excitation now on `to` arrived from `from`; `stay` is the spectator.
      auto add_hops = [&](int to, int stay) {
        for (int from = 1; from <= n; ++from) {
          if (from == m || from == k) continue;
          const std::size_t col = from > stay ? pair_flat(from, stay) : pair_flat(stay, from);
          scratch.push_back({col, hop(to - 1, from - 1)});
        }
      };
      add_hops(m, k);
      add_hops(k, m);
      std::sort(scratch.begin(), scratch.end(), [](const auto& a, const auto& b) { return a.col < b.col; });
      entries.insert(entries.end(), scratch.begin(), scratch.end());
      row_start.push_back(entries.size());
    }
  }
  return SectorTwoMatrix(dim, std::move(row_start), std::move(entries), n <= dense_limit,
                         sector_triangularity(cfg));
}

Eigen::VectorXcd DriveVectors::lift(const Eigen::VectorXcd& psi1) const {
  const int n = static_cast<int>(psi1.size());
  Eigen::VectorXcd out(static_cast<Eigen::Index>(pair_count(n)));
  for (int m = 2; m <= n; ++m)
    for (int k = 1; k < m; ++k)
      out[static_cast<Eigen::Index>(pair_flat(m, k))] =
          sqrt_gamma_t * (site_phase[m - 1] * psi1[k - 1] + site_phase[k - 1] * psi1[m - 1]);
  return out;
}

DriveVectors build_drive(const ChainConfig& cfg) {
  validate_config(cfg);
  DriveVectors d;
  d.sqrt_gamma_t = std::sqrt(cfg.gamma_t);
  d.site_phase.resize(cfg.n_qubits);
  for (int m = 1; m <= cfg.n_qubits; ++m) d.site_phase[m - 1] = phase_at_distance(cfg.phase, m);
  d.v_plus = d.sqrt_gamma_t * d.site_phase;
  return d;
}

ProjectionVectors build_projections(const ChainConfig& cfg) {
  validate_config(cfg);
  const int n = cfg.n_qubits;
  const double s = std::sqrt(cfg.gamma_t);
  ProjectionVectors p;
  p.phi1_plus.resize(n);
  p.phi1_minus.resize(n);
  for (int m = 1; m <= n; ++m) {
    p.phi1_plus[m - 1] = s * phase_at_distance(cfg.phase, m);
    p.phi1_minus[m - 1] = s * phase_at_distance(cfg.phase, -m);
  }
  const auto dim = static_cast<Eigen::Index>(pair_count(n));
  p.phi2_plus.resize(dim);
  p.phi2_minus.resize(dim);
  for (int m = 2; m <= n; ++m)
    for (int k = 1; k < m; ++k) {
      const auto idx = static_cast<Eigen::Index>(pair_flat(m, k));
      p.phi2_plus[idx] = 2.0 * cfg.gamma_t * phase_at_distance(cfg.phase, m + k);
      p.phi2_minus[idx] = 2.0 * cfg.gamma_t * phase_at_distance(cfg.phase, -(m + k));
    }
  return p;
}

Eigen::MatrixXcd FullSpaceHamiltonian::sector1() const {
  const auto n = static_cast<Eigen::Index>(sector1_basis.size());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = h(static_cast<Eigen::Index>(sector1_basis[i]), static_cast<Eigen::Index>(sector1_basis[j]));
  return out;
}

Eigen::MatrixXcd FullSpaceHamiltonian::sector2() const {
  const auto n = static_cast<Eigen::Index>(sector2_basis.size());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = h(static_cast<Eigen::Index>(sector2_basis[i]), static_cast<Eigen::Index>(sector2_basis[j]));
  return out;
}

FullSpaceHamiltonian brute_force_heff(const ChainConfig& cfg, std::span<const double> detunings) {
  validate_config(cfg);
  check_sample(cfg, detunings);
  const int n = cfg.n_qubits;
  if (n > 12) throw Error(ErrorCode::too_large, "brute-force Hamiltonian limited to N <= 12");
  const std::size_t dim = std::size_t{1} << n;
  const double gamma = cfg.total_decay();

  FullSpaceHamiltonian out;
  out.h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

  // H = sum_m (Delta_m - i Gamma/2) s+_m s-_m
  //   - i sum_{m>n} gamma_t e^{i(m-n)phi} s+_m s-_n - i sum_{m<n} gamma_r e^{i(n-m)phi} s+_m s-_n
  for (std::size_t b = 0; b < dim; ++b) {
    for (int m = 1; m <= n; ++m) {
      const std::size_t bit_m = std::size_t{1} << (m - 1);
      if (b & bit_m) out.h(b, b) += Complex(detunings[m - 1], -0.5 * gamma);
      for (int k = 1; k <= n; ++k) {
        if (k == m) continue;
        const std::size_t bit_k = std::size_t{1} << (k - 1);
        // s+_m s-_k acting on |b>: needs k excited, m empty.
        if (!(b & bit_k) || (b & bit_m)) continue;
        const std::size_t target = (b & ~bit_k) | bit_m;
        const double rate = m > k ? cfg.gamma_t : cfg.gamma_r;
        const Complex amp = Complex(0.0, -rate) * std::exp(Complex(0.0, std::abs(m - k) * cfg.phase));
        out.h(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(b)) += amp;
      }
    }
  }

  for (int m = 1; m <= n; ++m) out.sector1_basis.push_back(std::size_t{1} << (m - 1));
  out.sector2_basis.resize(pair_count(n));
  for (std::size_t b = 0; b < dim; ++b) {
    if (std::popcount(b) != 2) continue;
    const int lo = std::countr_zero(b) + 1;
    const int hi = static_cast<int>(std::bit_width(b));
    out.sector2_basis[pair_flat(hi, lo)] = b;
  }
  return out;
}

}  // namespace wgqed
