#ifndef PNORMCUT_REDUCTION_HPP
#define PNORMCUT_REDUCTION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pnormcut/graph.hpp"
#include "pnormcut/matrix.hpp"
#include "pnormcut/norms.hpp"
#include "pnormcut/numerics.hpp"

namespace pnormcut {

/// Largest row count a block stack may be expanded to.
inline constexpr std::size_t kDefaultRowLimit = std::size_t{1} << 20;

enum class Construction { kZTilde, kZ, kZStar, kZDoubleStar, kPadded };

std::string_view to_string(Construction c);
/// Accepts "ztilde", "z", "zstar", "zdoublestar", "padded".
Construction parse_construction(std::string_view name);

/// `matrix` stacked `repeat` times, every entry multiplied by `weight`.
struct Block {
  ExactMatrix matrix;
  BigInt repeat = 1;
  Rational weight = 1;
};

/// A row stack that is never expanded unless asked to. Because repeated rows
/// only multiply the p-th power sum, the stack has the same p-norm as the
/// collapsed matrix with each block scaled by repeat^{1/p} * weight.
struct BlockSpec {
  std::vector<Block> blocks;

  BigInt rows() const;
  std::size_t cols() const;
  /// Throws std::length_error when rows() exceeds `row_limit`.
  ExactMatrix materialize(std::size_t row_limit = kDefaultRowLimit) const;
  /// Double matrix with one copy of each block scaled by repeat^{1/p} * weight.
  Matrix collapse(const PExponent& p) const;
  /// sum over blocks of repeat * |weight|^p * ||B x||_p^p.
  HPScalar pow_sum(std::span<const HPScalar> x, const PExponent& p, unsigned bits) const;
};

struct ReductionInstance {
  Graph graph;
  PExponent p;
  /// Gadget weight: alpha for z, ceil(alpha) for zstar, repeat^{1/p} for
  /// zdoublestar, 1 for ztilde (whose graph block is scaled down instead),
  /// 0 for padded.
  HPScalar alpha;
  /// Precision the decode needs (53 when the instance has no decode).
  unsigned bits = kDoubleBits;
  Construction construction = Construction::kZ;
  std::variant<ExactMatrix, BlockSpec> matrix;

  bool is_virtual() const { return std::holds_alternative<BlockSpec>(matrix); }
  /// Throws std::logic_error for a virtual instance.
  const ExactMatrix& dense() const;
  ExactMatrix materialize(std::size_t row_limit = kDefaultRowLimit) const;
  BigInt rows() const;
  std::size_t cols() const;
  /// ||Zx||_p^p in `bits`-precision, whether or not Z is virtual.
  HPScalar pow_sum(std::span<const HPScalar> x, unsigned bits) const;
  /// Double matrix with the same p-norm as Z.
  Matrix real_matrix() const;
};

/// 64 p n^8 / (p - 2). Throws for p <= 2.
Rational default_alpha(int n, const PExponent& p);

/// Smallest integer k with k >= r^p, found exactly: for p = a/b that is the
/// least k with k^b * den(r)^a >= num(r)^a. Requires r > 0.
BigInt ceil_rational_power(const Rational& r, const PExponent& p);

/// [A ; ((p-2) / (64 p n^8)) M(G)]. Requires p > 2 and n >= 3.
ReductionInstance build_ztilde(const Graph& g, const PExponent& p);
/// [alpha A ; M(G)] with alpha defaulting to default_alpha. Requires p > 2
/// and alpha >= 1.
ReductionInstance build_z(const Graph& g, const PExponent& p, std::optional<Rational> alpha = std::nullopt);
/// [ceil(alpha) A ; M(G)], an integer matrix.
ReductionInstance build_zstar(const Graph& g, const PExponent& p, std::optional<Rational> alpha = std::nullopt);
/// A repeated k times over M(G), entries in {-1, 0, 1}. k defaults to
/// ceil(default_alpha^p); the instance is expanded only when it fits in
/// `row_limit` rows.
ReductionInstance build_zdoublestar(const Graph& g, const PExponent& p, std::optional<BigInt> k = std::nullopt,
                                    std::size_t row_limit = kDefaultRowLimit);
/// pad_square(M(G)).
ReductionInstance build_padded(const Graph& g);

/// (132^p (p/(p-2))^p n^{8p+3} p)^{-1} (132 (p/(p-2)) n^8)^{-1}. Requires p > 2.
HPScalar required_epsilon_pnorm(int n, const PExponent& p, unsigned bits = 256);
/// 1 / ((33 + delta) p 2^{p-1}). Requires delta > 0.
HPScalar required_epsilon_inftyp(const PExponent& p, const Rational& delta, unsigned bits = 256);

struct DecodeResult {
  HPScalar maxcut_estimate;
  long maxcut_rounded = 0;
  /// Bound on |maxcut_estimate - true value| from the declared input error
  /// plus arithmetic error.
  HPScalar additive_error_bound;
  /// additive_error_bound < 1/2, so the rounded value is the true one.
  bool rounding_valid = false;
  std::optional<CutResult> witness_cut;
};

/// maxcut = (n / 2^p) f^p - n alpha^p evaluated in `bits`. `f_error` is an
/// optional absolute error on f. Throws std::domain_error when bits is
/// below decode_precision_bits(n, p, alpha) or f <= 0.
DecodeResult decode_maxcut(const HPScalar& f, int n, const PExponent& p, const HPScalar& alpha, unsigned bits,
                           std::optional<HPScalar> f_error = std::nullopt);

/// maxcut = (f / 2)^p for f the infinity,p norm of M(G). With a declared
/// relative error eps on f the bound 2^{p-1} p eps (f/2)^p / (1 - 2^{p-1} p eps)
/// is attached (only meaningful while 2^{p-1} p eps < 1).
DecodeResult decode_maxcut_from_inftyp(const HPScalar& f, const PExponent& p,
                                       std::optional<double> relative_error = std::nullopt,
                                       unsigned bits = 128);

/// Componentwise sign, with 0 mapped to +1.
SignVector round_to_signs(std::span<const double> x);
SignVector round_to_signs(std::span<const HPScalar> x);

struct PipelineTimings {
  double build_ms = 0.0;
  double sign_search_ms = 0.0;
  double ascent_ms = 0.0;
  double refine_ms = 0.0;
  double decode_ms = 0.0;
};

struct MaxcutSolution {
  int n = 0;
  PExponent p{3};
  HPScalar alpha;
  unsigned bits = kDoubleBits;
  HPScalar f;              ///< best p-norm value found (max of the routes below)
  HPScalar f_sign_search;  ///< best sign vector
  HPScalar f_ascent;       ///< double-precision multistart ascent
  HPScalar f_refined;      ///< high-precision polish of the ascent optimizer
  NormMethod method = NormMethod::kSignSearch;  ///< route that produced f
  std::vector<double> witness;  ///< maximizer behind f
  DecodeResult decode;
  /// ||Z x*||_p^p - ||Z x_r||_p^p on the sphere ||x||_p^p = n, with x* the
  /// refined optimizer and x_r its rounding.
  HPScalar rounding_gap;
  SignVector refined_rounding;
  AscentStats ascent;
  PipelineTimings timings;
};

/// Graph -> Z -> ||Z||_p -> max-cut. Requires p > 2 (use the conjugate
/// exponent for p in (1, 2)). Throws std::logic_error if the rounded witness
/// cuts more edges than the decoded value, which would mean the decode is
/// wrong.
MaxcutSolution solve_maxcut_via_pnorm(const Graph& g, const PExponent& p, std::optional<Rational> alpha,
                                      const AscentConfig& cfg = {}, int limit = kDefaultEnumerationLimit);

}  // namespace pnormcut

#endif  // PNORMCUT_REDUCTION_HPP
