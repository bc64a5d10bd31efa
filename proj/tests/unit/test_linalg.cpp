#include <doctest.h>

#include <random>

#include "wgqed/hamiltonian.hpp"
#include "wgqed/linalg.hpp"

using namespace wgqed;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = cd(g(rng), g(rng));
  return a;
}

}  // namespace

TEST_CASE("dense LU solves and transposed solves") {
  std::mt19937_64 rng(3);
  for (int n : {1, 2, 3, 7, 20, 45}) {
    const Eigen::MatrixXcd a = random_matrix(rng, n);
    DenseLu lu;
    REQUIRE(lu.factor(std::span<const cd>(a.data(), static_cast<std::size_t>(n * n)), static_cast<std::size_t>(n)));
    Eigen::VectorXcd b = Eigen::VectorXcd::Random(n);
    Eigen::VectorXcd x = b;
    lu.solve(std::span<cd>(x.data(), static_cast<std::size_t>(n)));
    CHECK((a * x - b).norm() <= 1e-11 * a.norm() * x.norm());
    Eigen::VectorXcd y = b;
    lu.solve_transposed(std::span<cd>(y.data(), static_cast<std::size_t>(n)));
    CHECK((a.transpose() * y - b).norm() <= 1e-11 * a.norm() * y.norm());
    CHECK(lu.pivot_ratio() >= 1.0);
  }
}

TEST_CASE("dense LU needs pivoting") {
  Eigen::MatrixXcd a(2, 2);
  a << 0.0, 1.0, 1.0, 0.0;
  DenseLu lu;
  REQUIRE(lu.factor(std::span<const cd>(a.data(), 4), 2));
  Eigen::VectorXcd x(2);
  x << 3.0, 5.0;
  lu.solve(std::span<cd>(x.data(), 2));
  CHECK(std::abs(x[0] - 5.0) < 1e-15);
  CHECK(std::abs(x[1] - 3.0) < 1e-15);
}

TEST_CASE("dense LU reports exact singularity and large pivot ratios") {
  Eigen::MatrixXcd a(2, 2);
  a << 1.0, 2.0, 2.0, 4.0;
  DenseLu lu;
  CHECK_FALSE(lu.factor(std::span<const cd>(a.data(), 4), 2));
  a << 1.0, 0.0, 0.0, 1e-16;
  REQUIRE(lu.factor(std::span<const cd>(a.data(), 4), 2));
  CHECK(lu.pivot_ratio() > 1e15);
}

TEST_CASE("dense LU buffers are reused") {
  std::mt19937_64 rng(5);
  DenseLu lu;
  for (int n : {6, 3, 6}) {
    const Eigen::MatrixXcd a = random_matrix(rng, n);
    lu.resize(static_cast<std::size_t>(n));
    std::copy(a.data(), a.data() + n * n, lu.storage().begin());
    REQUIRE(lu.factor_in_place());
    Eigen::VectorXcd x = Eigen::VectorXcd::Ones(n);
    lu.solve(std::span<cd>(x.data(), static_cast<std::size_t>(n)));
    CHECK((a * x - Eigen::VectorXcd::Ones(n)).norm() < 1e-10);
  }
}

TEST_CASE("triangular solve on chiral sector 2") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int n : {2, 5, 12}) {
    std::vector<double> d(static_cast<std::size_t>(n));
    for (auto& v : d) v = g(rng);
    for (bool lower : {true, false}) {
      const ChainConfig cfg{n, 0.7, lower ? 0.9 : 0.0, lower ? 0.0 : 0.9, 0.2};
      const auto h = build_sector2(cfg, d, 0);
      const auto dim = static_cast<Eigen::Index>(h.dim());
      Eigen::VectorXcd b = Eigen::VectorXcd::Random(dim);
      Eigen::VectorXcd x = b;
      triangular_solve(h, lower, std::span<cd>(x.data(), h.dim()));
      CHECK((h.multiply(x) - b).norm() < 1e-11 * b.norm());
    }
  }
}
