#include "wgqed/closed_forms.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace wgqed::closed_forms {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

CorrelationValue ratio(double num, double den) {
  if (den == 0.0 || !std::isfinite(num / den)) return CorrelationValue::divergent();
  return CorrelationValue::finite(num / den);
}

}  // namespace

std::string_view name(Formula f) noexcept {
  switch (f) {
    case Formula::gT_n1: return "gT_n1";
    case Formula::gT_n2: return "gT_n2";
    case Formula::gR_n2: return "gR_n2";
    case Formula::gT_n1_lossy: return "gT_n1_lossy";
    case Formula::pdf_gT_n1: return "pdf_gT_n1";
    case Formula::pdf_mode_n1: return "pdf_mode_n1";
    case Formula::pdf_asym_gR_n2: return "pdf_asym_gR_n2";
    case Formula::pa_prob_n1_lossy: return "pa_prob_n1_lossy";
    case Formula::pdf_gT_n1_lossy: return "pdf_gT_n1_lossy";
  }
  return "unknown";
}

CorrelationValue gT_n1(double d) {
  const double d2 = d * d;
  const double num = (1.0 + 4.0 * d2) * (1.0 + 4.0 * d2);
  return ratio(num, 16.0 * d2 * d2);
}

CorrelationValue gT_n2(double d1, double d2, double phase) {
  const double s2 = std::sin(2.0 * phase);
  const double c2 = std::cos(2.0 * phase);
  const double sum = d1 + d2;
  const double prod2 = d1 * d1 * d2 * d2;
  const double base = 1.0 + 2.0 * d1 * d1 + 2.0 * d2 * d2 - 2.0 * sum * s2;
  const double f_plus = base + 4.0 * d1 * d2 * c2;
  const double f_minus = base - 4.0 * d1 * d2 * c2;
  const double q = 8.0 * prod2 + f_plus - c2;
  const double p = 8.0 * prod2 * (1.0 + sum * sum) + 4.0 * d1 * d2 * sum * s2;
  const double num = q * (sum * sum * (f_minus - c2) + p);
  const double den = 64.0 * prod2 * prod2 * (1.0 + sum * sum);
  return ratio(num, den);
}

CorrelationValue gR_n2(double d1, double d2, double phase) {
  using cd = std::complex<double>;
  const cd i{0.0, 1.0};
  const cd e = std::polar(1.0, 2.0 * phase);
  const cd num = (-i + i * e + 2.0 * d1 + 2.0 * d2) * (e + (2.0 * d1 - i) * (2.0 * d2 - i));
  const cd inner = 2.0 * d2 - i + e * (2.0 * d1 + i);
  const cd den = (d1 + d2 - i) * inner * inner;
  if (std::abs(den) == 0.0) return CorrelationValue::divergent();
  return CorrelationValue::finite(std::norm(num / den));
}

CorrelationValue gT_n1_lossy(double d, double gamma_nw) {
  const double y = 4.0 * d * d;
  const double a = (gamma_nw - 1.0) * (gamma_nw - 1.0);
  const double b = (gamma_nw + 1.0) * (gamma_nw + 1.0);
  const double c = gamma_nw * gamma_nw;
  return ratio((y + a) * (y + b), (y + c) * (y + c));
}

double pdf_gT_n1(double s, double w) {
  if (!(s > 1.0)) return 0.0;
  const double r = std::sqrt(s);
  const double x = r - 1.0;
  return std::exp(-1.0 / (8.0 * w * w * x)) / (4.0 * kSqrt2Pi * w * std::pow(x, 1.5) * r);
}

double cdf_gT_n1(double s, double w) {
  if (!(s > 1.0)) return 0.0;
  if (std::isinf(s)) return 1.0;
  // g <= s  <=>  |Delta| >= 1 / (2 sqrt(sqrt(s) - 1))
  const double d = 0.5 / std::sqrt(std::sqrt(s) - 1.0);
  return std::erfc(d / (std::numbers::sqrt2 * w));
}

double pdf_mode_n1(double w) {
  // Stationary point of log P in x = sqrt(s) - 1: 20 w^2 x^2 - (1 - 12 w^2) x - 1 = 0.
  const double w2 = w * w;
  const double lin = 1.0 - 12.0 * w2;
  const double root = std::sqrt(1.0 + 56.0 * w2 + 144.0 * w2 * w2);
  const double x = lin >= 0.0 ? (lin + root) / (40.0 * w2) : 2.0 / (root - lin);
  return (1.0 + x) * (1.0 + x);
}

double pdf_gT_n1_tail(double s, double w) { return std::pow(s, -1.25) / (4.0 * kSqrt2Pi * w); }

double pdf_asym_gR_n2(double s, double w) {
  if (!(s > 0.0)) return 0.0;
  return std::exp(-1.0 / (2.0 * w * w * s)) / (kSqrt2Pi * w * s);
}

double pa_prob_n1_lossy(double w, double gamma_nw) {
  if (!(gamma_nw > std::numbers::sqrt2 / 2.0)) return 0.0;
  return std::erf(std::sqrt(gamma_nw * gamma_nw / 4.0 - 0.125) / (std::numbers::sqrt2 * w));
}

double pdf_gT_n1_lossy(double s, double w, double gamma_nw) {
  if (!(s >= 0.0) || s >= 1.0) return 0.0;
  // With y = 4 Delta^2: g(y) = (y + a)(y + b) / (y + c)^2. Solve g(y) = s,
  // then P(s) = sum over roots of 2 p(Delta) / |dg/dDelta|, dg/dDelta = 4 sqrt(y) g'(y).
  const double a = (gamma_nw - 1.0) * (gamma_nw - 1.0);
  const double b = (gamma_nw + 1.0) * (gamma_nw + 1.0);
  const double c = gamma_nw * gamma_nw;
  const double qa = 1.0 - s;
  const double qb = a + b - 2.0 * s * c;
  const double qc = a * b - s * c * c;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double t = -0.5 * (qb + std::copysign(sq, qb));
  double roots[2] = {t / qa, t != 0.0 ? qc / t : -1.0};
  if (disc == 0.0) roots[1] = -1.0;

  double total = 0.0;
  for (double y : roots) {
    if (!(y > 0.0) || !std::isfinite(y)) continue;
    const double yc = y + c;
    const double dg = ((2.0 * y + a + b) * yc - 2.0 * (y + a) * (y + b)) / (yc * yc * yc);
    if (dg == 0.0) continue;
    const double density = std::exp(-y / (8.0 * w * w)) / (kSqrt2Pi * w);
    total += 2.0 * density / (4.0 * std::sqrt(y) * std::abs(dg));
  }
  return total;
}

}  // namespace wgqed::closed_forms
