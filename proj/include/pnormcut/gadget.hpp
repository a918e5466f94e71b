#ifndef PNORMCUT_GADGET_HPP
#define PNORMCUT_GADGET_HPP

#include <random>
#include <span>
#include <vector>

#include "pnormcut/matrix.hpp"
#include "pnormcut/numerics.hpp"

namespace pnormcut {

/// The 2n x n circulant gadget. Rows 2i and 2i+1 (0-based, i < n-1) select
/// x_i - x_{i+1} and x_i + x_{i+1}; the final pair selects -x_1 + x_n and
/// x_1 + x_n. Over the sphere ||x||_p^p = n its p-norm objective peaks at
/// exactly the sign vectors, with value n 2^p. Requires n >= 2.
ExactMatrix gadget_matrix(int n);

/// sum_i |x_i - x_{i+1}|^p + |x_i + x_{i+1}|^p with x_{n+1} = x_1, i.e.
/// ||A x||_p^p without forming A.
double gadget_value(std::span<const double> x, const PExponent& p);
HPScalar gadget_value(std::span<const double> x, const PExponent& p, unsigned bits);
HPScalar gadget_value(std::span<const HPScalar> x, const PExponent& p, unsigned bits);

template <class T>
struct PairTerms {
  T lhs;         ///< |x+y|^p + |x-y|^p
  T bound;       ///< 2^{p-1} (|x|^p + |y|^p)
  T error_term;  ///< nonnegative slack: lhs <= bound - error_term
};

/// The two-term power inequality and its refinement. Throws for p < 2.
PairTerms<double> pair_inequality_terms(double x, double y, const PExponent& p);
PairTerms<HPScalar> pair_inequality_terms(const HPScalar& x, const HPScalar& y, const PExponent& p, unsigned bits);

/// n 2^p - 3 (p-2) c^2 / (2^p n^2): upper bound on ||A y||_p^p for points
/// of the sphere at infinity-distance at least c from every sign vector.
/// Requires p >= 2 and c in (0, 1/2].
HPScalar deficiency_bound(int n, const PExponent& p, double c, unsigned bits = kDoubleBits);

/// min over sign vectors s of ||y - s||_inf, which is max_i ||y_i| - 1|.
double sign_distance(std::span<const double> y);

/// Rescales x (nonzero) so that ||x||_p^p = n.
std::vector<double> rescale_to_sphere(std::span<const double> x, const PExponent& p);

/// Standard normal draw pushed radially onto {||y||_p^p = n}.
std::vector<double> sample_sphere(int n, const PExponent& p, std::mt19937_64& rng);

}  // namespace pnormcut

#endif  // PNORMCUT_GADGET_HPP
