#pragma once

#include <array>
#include <string_view>

#include "wgqed/model.hpp"

// Analytic results for one and two qubits with gamma_t = gamma_r = 1/2.
// Written independently of the matrix pipeline so each can check the other.
namespace wgqed::closed_forms {

enum class Formula {
  gT_n1,
  gT_n2,
  gR_n2,
  gT_n1_lossy,
  pdf_gT_n1,
  pdf_mode_n1,
  pdf_asym_gR_n2,
  pa_prob_n1_lossy,
  pdf_gT_n1_lossy,
};

inline constexpr std::array<Formula, 9> catalog{
    Formula::gT_n1,     Formula::gT_n2,       Formula::gR_n2,          Formula::gT_n1_lossy,      Formula::pdf_gT_n1,
    Formula::pdf_mode_n1, Formula::pdf_asym_gR_n2, Formula::pa_prob_n1_lossy, Formula::pdf_gT_n1_lossy,
};

std::string_view name(Formula f) noexcept;

// Single qubit transmission: (1 + 4 d^2)^2 / (16 d^4); divergent at d = 0.
CorrelationValue gT_n1(double detuning);

// Two-qubit transmission. The cosine in the second factor carries 2 phi;
// with the single-angle cosine the expression disagrees with the exact solve.
CorrelationValue gT_n2(double d1, double d2, double phase);

// Two-qubit reflection.
CorrelationValue gR_n2(double d1, double d2, double phase);

// Single qubit transmission with non-waveguide loss rate gamma_nw.
CorrelationValue gT_n1_lossy(double detuning, double gamma_nw);

// Density of g_T for one qubit under Gaussian disorder of width w. Obtained
// from Delta^2 = 1 / (4 (sqrt(s) - 1)); the exponent is -1 / (8 w^2 (sqrt(s) - 1)).
double pdf_gT_n1(double s, double w);
// P(g_T <= s) for one qubit; erfc(Delta(s) / (sqrt(2) w)).
double cdf_gT_n1(double s, double w);
// Most probable g_T for one qubit.
double pdf_mode_n1(double w);
// Leading large-s behaviour s^(-5/4) / (4 sqrt(2 pi) w).
double pdf_gT_n1_tail(double s, double w);

// Small-s tail of the two-qubit reflection density.
double pdf_asym_gR_n2(double s, double w);

// Probability that a lossy single qubit antibunches the transmitted light.
double pa_prob_n1_lossy(double w, double gamma_nw);

// Density of g_T < 1 for a lossy single qubit; zero for s >= 1.
double pdf_gT_n1_lossy(double s, double w, double gamma_nw);

}  // namespace wgqed::closed_forms
