#pragma once

// Reference implementations used only by tests. They share no code with the
// library's sector builders or solvers beyond brute_force_heff.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/correlations.hpp"
#include "wgqed/hamiltonian.hpp"
#include "wgqed/model.hpp"

namespace oracle {

using cd = std::complex<double>;

// Full-space raising operator sum_m sqrt(gamma_t) e^{i m phi} sigma+_m.
inline Eigen::MatrixXcd full_drive(const wgqed::ChainConfig& cfg) {
  const int n = cfg.n_qubits;
  const auto dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b)
    for (int m = 1; m <= n; ++m) {
      const Eigen::Index bit = Eigen::Index{1} << (m - 1);
      if (b & bit) continue;
      h(b | bit, b) += std::sqrt(cfg.gamma_t) * std::exp(cd(0.0, m * cfg.phase));
    }
  return h;
}

struct FullState {
  Eigen::VectorXcd psi1;  // indexed by qubit
  Eigen::VectorXcd psi2;  // indexed by canonical pair
};

// psi1 = -H^-1 H+ |G>, psi2 = -H^-1 H+ psi1 with H the full effective
// Hamiltonian restricted to the excited (non-ground) states.
inline FullState full_space_state(const wgqed::ChainConfig& cfg, const std::vector<double>& d) {
  const auto full = wgqed::brute_force_heff(cfg, d);
  const Eigen::Index dim = full.h.rows();
  const Eigen::MatrixXcd hp = full_drive(cfg);
  const Eigen::MatrixXcd excited = full.h.bottomRightCorner(dim - 1, dim - 1);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(excited);

  Eigen::VectorXcd ground = Eigen::VectorXcd::Zero(dim);
  ground[0] = 1.0;
  Eigen::VectorXcd v1 = Eigen::VectorXcd::Zero(dim);
  v1.tail(dim - 1) = -lu.solve(Eigen::VectorXcd((hp * ground).tail(dim - 1)));
  Eigen::VectorXcd v2 = Eigen::VectorXcd::Zero(dim);
  v2.tail(dim - 1) = -lu.solve(Eigen::VectorXcd((hp * v1).tail(dim - 1)));

  FullState s;
  s.psi1.resize(cfg.n_qubits);
  for (int m = 0; m < cfg.n_qubits; ++m) s.psi1[m] = v1[Eigen::Index{1} << m];
  s.psi2.resize(static_cast<Eigen::Index>(full.sector2_basis.size()));
  for (std::size_t k = 0; k < full.sector2_basis.size(); ++k)
    s.psi2[static_cast<Eigen::Index>(k)] = v2[static_cast<Eigen::Index>(full.sector2_basis[k])];
  return s;
}

// g straight from the interference formula with explicit double loops.
inline double g_from_state(const wgqed::ChainConfig& cfg, const FullState& s, wgqed::Output out) {
  const int n = cfg.n_qubits;
  const double sign = out == wgqed::Output::transmission ? -1.0 : 1.0;
  cd a1{}, a2{};
  for (int m = 1; m <= n; ++m) a1 += std::sqrt(cfg.gamma_t) * std::exp(cd(0.0, sign * m * cfg.phase)) * s.psi1[m - 1];
  for (int m = 1; m <= n; ++m)
    for (int k = 1; k < m; ++k)
      a2 += 2.0 * cfg.gamma_t * std::exp(cd(0.0, sign * (m + k) * cfg.phase)) *
            s.psi2[static_cast<Eigen::Index>(wgqed::pair_flat(m, k))];
  const cd i(0.0, 1.0);
  if (out == wgqed::Output::transmission) return std::norm(1.0 - 2.0 * i * a1 - a2) / std::pow(std::norm(1.0 - i * a1), 2);
  return std::norm(a2) / std::pow(std::norm(a1), 2);
}

inline double full_space_g(const wgqed::ChainConfig& cfg, const std::vector<double>& d, wgqed::Output out) {
  return g_from_state(cfg, full_space_state(cfg, d), out);
}

// Non-interacting correlation with explicit pair loops, no sum identities.
inline double noninteracting_g(const wgqed::ChainConfig& cfg, const std::vector<double>& d, wgqed::Output out) {
  const auto s = wgqed::noninteracting_state(cfg, d);
  return g_from_state(cfg, {s.psi1, s.psi2}, out);
}

// Adaptive Simpson integration.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double l, double r, double fl, double fm, double fr, double whole, int d) {
        const double m = 0.5 * (l + r);
        const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - l) / 6.0 * (fl + 4.0 * flm + fm);
        const double right = (r - m) / 6.0 * (fm + 4.0 * frm + fr);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
        return rec(l, m, fl, flm, fm, left, d - 1) + rec(m, r, fm, frm, fr, right, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
