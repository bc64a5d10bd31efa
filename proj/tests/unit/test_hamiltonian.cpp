#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/hamiltonian.hpp"

using namespace wgqed;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

double max_rel_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

struct RandomInstance {
  ChainConfig cfg;
  std::vector<double> d;
};

RandomInstance random_instance(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  RandomInstance r;
  r.cfg = ChainConfig{n, 2.0 * kPi * u(rng), u(rng), u(rng), 0.5 * u(rng)};
  for (int i = 0; i < n; ++i) r.d.push_back(g(rng));
  return r;
}

}  // namespace

TEST_CASE("sector 1 for a single resonant qubit") {
  const auto h = build_sector1(ChainConfig::symmetric(1, 0.0), std::vector<double>{0.0});
  REQUIRE(h.rows() == 1);
  CHECK(std::abs(h(0, 0) - cd(0.0, -0.5)) < 1e-15);
}

TEST_CASE("sector 1 for two resonant qubits at phi = 0") {
  const auto h = build_sector1(ChainConfig::symmetric(2, 0.0), std::vector<double>{0.0, 0.0});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(h(i, j) - cd(0.0, -0.5)) < 1e-15);
}

TEST_CASE("sector 1 element rule") {
  const ChainConfig cfg{4, 0.37, 0.8, 0.3, 0.25};
  const std::vector<double> d{0.1, -0.2, 0.3, 0.4};
  const auto h = build_sector1(cfg, d);
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n) {
      cd expect;
      if (m == n)
        expect = cd(d[m - 1], -0.5 * 1.35);
      else
        expect = cd(0.0, -(m > n ? 0.8 : 0.3)) * std::exp(cd(0.0, std::abs(m - n) * 0.37));
      CHECK(std::abs(h(m - 1, n - 1) - expect) < 1e-15);
    }
}

TEST_CASE("sector 1 rejects a sample of the wrong length") {
  CHECK_THROWS_AS(build_sector1(ChainConfig::symmetric(3, 0.1), std::vector<double>{0.0, 0.0}), Error);
}

TEST_CASE("sector 2 for N=2 is the summed detuning") {
  const auto h = build_sector2(ChainConfig{2, 0.4, 0.5, 0.5, 0.2}, std::vector<double>{0.3, -0.7});
  REQUIRE(h.dim() == 1);
  CHECK(std::abs(h.coeff(0, 0) - cd(-0.4, -1.2)) < 1e-15);
}

TEST_CASE("sector 2 hop between pairs (2,1) and (3,1)") {
  const auto h = build_sector2(ChainConfig::symmetric(3, 0.0), std::vector<double>{0.0, 0.0, 0.0});
  CHECK(std::abs(h.coeff(0, 1) - cd(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(h.coeff(1, 0) - cd(0.0, -0.5)) < 1e-15);
}

TEST_CASE("sector 2 needs two qubits") {
  try {
    (void)build_sector2(ChainConfig::symmetric(1, 0.0), std::vector<double>{0.0});
    FAIL("expected Unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported);
  }
}

TEST_CASE("brute-force Hamiltonian for one qubit") {
  const auto full = brute_force_heff(ChainConfig{1, 0.0, 0.5, 0.5, 0.3}, std::vector<double>{0.7});
  REQUIRE(full.h.rows() == 2);
  CHECK(std::abs(full.h(1, 1) - cd(0.7, -0.65)) < 1e-15);
  CHECK(std::abs(full.h(0, 0)) == 0.0);
}

TEST_CASE("brute-force guard") {
  try {
    (void)brute_force_heff(ChainConfig::symmetric(13, 0.1), std::vector<double>(13, 0.0));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::too_large);
  }
}

TEST_CASE("sector matrices equal brute-force projections for N <= 8") {
  std::mt19937_64 rng(20240611);
  for (int n = 2; n <= 8; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto inst = random_instance(rng, n);
      const auto full = brute_force_heff(inst.cfg, inst.d);
      CHECK(max_rel_diff(build_sector1(inst.cfg, inst.d), full.sector1()) <= 1e-12);
      if (n <= 6 || trial < 10) {
        const auto h2 = build_sector2(inst.cfg, inst.d);
        CHECK(max_rel_diff(h2.to_dense(), full.sector2()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("sparse sector 2 equals the dense form") {
  const ChainConfig cfg{7, 0.9, 0.6, 0.4, 0.1};
  const std::vector<double> d{0.1, -0.3, 0.2, 0.5, -0.8, 0.0, 1.1};
  const auto dense = build_sector2(cfg, d);
  const auto sparse = build_sector2(cfg, d, 0);
  CHECK(dense.is_dense());
  CHECK_FALSE(sparse.is_dense());
  CHECK(max_rel_diff(sparse.to_dense(), dense.dense()) == 0.0);
  CHECK(max_rel_diff(Eigen::MatrixXcd(sparse.to_sparse()), dense.dense()) == 0.0);
  for (std::size_t r = 0; r < sparse.dim(); ++r) CHECK(sparse.row(r).size() <= static_cast<std::size_t>(2 * (7 - 2) + 1));
  Eigen::VectorXcd x = Eigen::VectorXcd::Random(static_cast<Eigen::Index>(dense.dim()));
  CHECK((sparse.multiply(x) - dense.dense() * x).norm() < 1e-13);
}

TEST_CASE("complex symmetry for equal directional rates") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 6; ++n) {
    auto inst = random_instance(rng, n);
    inst.cfg.gamma_r = inst.cfg.gamma_t;
    const auto h1 = build_sector1(inst.cfg, inst.d);
    const auto h2 = build_sector2(inst.cfg, inst.d).to_dense();
    CHECK((h1 - h1.transpose()).norm() == 0.0);
    CHECK((h2 - h2.transpose()).norm() == 0.0);
    CHECK((h1 - h1.adjoint()).norm() > 0.1);
  }
}

TEST_CASE("triangular structure for unidirectional coupling") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 6; ++n) {
    auto inst = random_instance(rng, n);
    inst.cfg.gamma_r = 0.0;
    auto h1 = build_sector1(inst.cfg, inst.d);
    auto h2 = build_sector2(inst.cfg, inst.d);
    CHECK(h2.triangularity() == Triangularity::lower);
    CHECK(h1.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm() == 0.0);
    CHECK(h2.to_dense().triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm() == 0.0);

    inst.cfg.gamma_r = inst.cfg.gamma_t;
    inst.cfg.gamma_t = 0.0;
    h1 = build_sector1(inst.cfg, inst.d);
    h2 = build_sector2(inst.cfg, inst.d);
    CHECK(h2.triangularity() == Triangularity::upper);
    CHECK(h1.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm() == 0.0);
    CHECK(h2.to_dense().triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm() == 0.0);
  }
}

TEST_CASE("drive vectors") {
  auto d = build_drive(ChainConfig::symmetric(2, 0.0));
  CHECK(std::abs(d.v_plus[0] - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(d.v_plus[1] - std::sqrt(0.5)) < 1e-15);
  d = build_drive(ChainConfig::symmetric(2, kPi / 2));
  CHECK(std::abs(d.v_plus[0] - cd(0.0, std::sqrt(0.5))) < 1e-15);
  CHECK(std::abs(d.v_plus[1] - cd(-std::sqrt(0.5), 0.0)) < 1e-15);
  const auto far = build_drive(ChainConfig{50, 1.234, 0.3, 0.2, 0.0});
  for (Eigen::Index m = 0; m < 50; ++m) CHECK(std::abs(std::abs(far.v_plus[m]) - std::sqrt(0.3)) < 1e-14);
}

TEST_CASE("drive lift matches the full-space raising operator") {
  const ChainConfig cfg{4, 0.77, 0.6, 0.2, 0.0};
  const auto drive = build_drive(cfg);
  Eigen::VectorXcd psi1 = Eigen::VectorXcd::Random(4);
  const auto lifted = drive.lift(psi1);
  const auto hp = oracle::full_drive(cfg);
  Eigen::VectorXcd full1 = Eigen::VectorXcd::Zero(16);
  for (int m = 0; m < 4; ++m) full1[1 << m] = psi1[m];
  const Eigen::VectorXcd full2 = hp * full1;
  const auto bf = brute_force_heff(cfg, std::vector<double>(4, 0.0));
  for (std::size_t k = 0; k < bf.sector2_basis.size(); ++k)
    CHECK(std::abs(lifted[static_cast<Eigen::Index>(k)] - full2[static_cast<Eigen::Index>(bf.sector2_basis[k])]) < 1e-14);
}

TEST_CASE("projection vectors") {
  const auto p = build_projections(ChainConfig::symmetric(3, 0.0));
  for (Eigen::Index k = 0; k < 3; ++k) CHECK(std::abs(p.phi2_plus[k] - 1.0) < 1e-15);
  const auto q = build_projections(ChainConfig{3, 0.4, 0.5, 0.5, 0.0});
  CHECK(std::abs(q.phi1_minus[1] - std::sqrt(0.5) * std::exp(cd(0.0, -0.8))) < 1e-15);
  CHECK(std::abs(q.phi2_plus[2] - std::exp(cd(0.0, 0.4 * 5))) < 1e-15);
}
