#include "pnormcut/gadget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pnormcut {

ExactMatrix gadget_matrix(int n) {
  if (n < 2) throw std::invalid_argument("gadget_matrix: n must be at least 2");
  ExactMatrix a(2 * static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i + 1 < n; ++i) {
    a(2 * i, i) = 1;
    a(2 * i, i + 1) = -1;
    a(2 * i + 1, i) = 1;
    a(2 * i + 1, i + 1) = 1;
  }
  a(2 * n - 2, 0) = -1;
  a(2 * n - 2, n - 1) = 1;
  a(2 * n - 1, 0) = 1;
  a(2 * n - 1, n - 1) = 1;
  return a;
}

double gadget_value(std::span<const double> x, const PExponent& p) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("gadget_value: need at least 2 entries");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x[i];
    const double b = x[(i + 1) % n];
    total += pow_abs(a - b, p) + pow_abs(a + b, p);
  }
  return total;
}

HPScalar gadget_value(std::span<const HPScalar> x, const PExponent& p, unsigned bits) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("gadget_value: need at least 2 entries");
  HPScalar total(bits);
  for (std::size_t i = 0; i < n; ++i) {
    const HPScalar& a = x[i];
    const HPScalar& b = x[(i + 1) % n];
    total += pow_abs(a - b, p, bits);
    total += pow_abs(a + b, p, bits);
  }
  return total;
}

HPScalar gadget_value(std::span<const double> x, const PExponent& p, unsigned bits) {
  std::vector<HPScalar> hp;
  hp.reserve(x.size());
  for (double v : x) hp.emplace_back(v, bits);
  return gadget_value(std::span<const HPScalar>(hp), p, bits);
}

PairTerms<double> pair_inequality_terms(double x, double y, const PExponent& p) {
  if (p < PExponent(2)) throw std::invalid_argument("pair_inequality_terms: p must be at least 2");
  const double ax = std::fabs(x);
  const double ay = std::fabs(y);
  const double pv = p.value();
  const double diff = ax - ay;
  PairTerms<double> t;
  t.lhs = pow_abs(x + y, p) + pow_abs(x - y, p);
  t.bound = std::pow(2.0, pv - 1.0) * (pow_abs(x, p) + pow_abs(y, p));
  t.error_term = diff * diff / 4.0 *
                 (pv * (pv - 1.0) * std::pow(ax + ay, pv - 2.0) - 2.0 * std::pow(std::fabs(diff), pv - 2.0));
  return t;
}

PairTerms<HPScalar> pair_inequality_terms(const HPScalar& x, const HPScalar& y, const PExponent& p, unsigned bits) {
  if (p < PExponent(2)) throw std::invalid_argument("pair_inequality_terms: p must be at least 2");
  const Rational pm1 = p.rational() - 1;
  const Rational pm2 = p.rational() - 2;
  const HPScalar ax = abs(x).with_precision(bits);
  const HPScalar ay = abs(y).with_precision(bits);
  const HPScalar diff = ax - ay;
  const HPScalar pv(p.rational(), bits);
  HPScalar lhs = pow_abs(x + y, p, bits) + pow_abs(x - y, p, bits);
  HPScalar bound = pow_abs(HPScalar(2L, bits), pm1, bits) * (pow_abs(x, p, bits) + pow_abs(y, p, bits));
  HPScalar bracket = pv * HPScalar(pm1, bits) * pow_abs(ax + ay, pm2, bits) -
                     HPScalar(2L, bits) * pow_abs(diff, pm2, bits);
  HPScalar error = diff * diff / HPScalar(4L, bits) * bracket;
  return {std::move(lhs), std::move(bound), std::move(error)};
}

HPScalar deficiency_bound(int n, const PExponent& p, double c, unsigned bits) {
  if (p < PExponent(2)) throw std::invalid_argument("deficiency_bound: p must be at least 2");
  if (!(c > 0.0 && c <= 0.5)) throw std::invalid_argument("deficiency_bound: c must lie in (0, 1/2]");
  const HPScalar two_p = pow_abs(HPScalar(2L, bits), p, bits);
  const HPScalar nn(static_cast<long>(n), bits);
  const HPScalar cc(c, bits);
  const HPScalar deduction = HPScalar(3L, bits) * HPScalar(p.rational() - 2, bits) * cc * cc / (two_p * nn * nn);
  return nn * two_p - deduction;
}

double sign_distance(std::span<const double> y) {
  double worst = 0.0;
  for (double v : y) worst = std::max(worst, std::fabs(std::fabs(v) - 1.0));
  return worst;
}

std::vector<double> rescale_to_sphere(std::span<const double> x, const PExponent& p) {
  double sum = 0.0;
  for (double v : x) sum += pow_abs(v, p);
  if (sum == 0.0) throw std::invalid_argument("rescale_to_sphere: zero vector");
  const double scale = std::pow(static_cast<double>(x.size()) / sum, 1.0 / p.value());
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> sample_sphere(int n, const PExponent& p, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> y(n);
  do {
    for (double& v : y) v = normal(rng);
  } while (std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; }));
  return rescale_to_sphere(y, p);
}

}  // namespace pnormcut
