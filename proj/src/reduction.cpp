#include "pnormcut/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "pnormcut/gadget.hpp"

namespace pnormcut {

std::string_view to_string(Construction c) {
  switch (c) {
    case Construction::kZTilde: return "ztilde";
    case Construction::kZ: return "z";
    case Construction::kZStar: return "zstar";
    case Construction::kZDoubleStar: return "zdoublestar";
    case Construction::kPadded: return "padded";
  }
  return "unknown";
}

Construction parse_construction(std::string_view name) {
  for (auto c : {Construction::kZTilde, Construction::kZ, Construction::kZStar, Construction::kZDoubleStar,
                 Construction::kPadded}) {
    if (name == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown construction '" + std::string(name) +
                              "' (expected ztilde, z, zstar, zdoublestar or padded)");
}

// ---------------------------------------------------------------------------
// BlockSpec

BigInt BlockSpec::rows() const {
  BigInt total = 0;
  for (const auto& b : blocks) total += b.repeat * static_cast<long>(b.matrix.rows());
  return total;
}

std::size_t BlockSpec::cols() const { return blocks.empty() ? 0 : blocks.front().matrix.cols(); }

ExactMatrix BlockSpec::materialize(std::size_t row_limit) const {
  const BigInt total = rows();
  if (total > row_limit) {
    throw std::length_error("BlockSpec: " + total.str() + " rows exceeds the row limit " + std::to_string(row_limit));
  }
  ExactMatrix out(static_cast<std::size_t>(total), cols());
  std::size_t r = 0;
  for (const auto& b : blocks) {
    const auto copies = static_cast<std::size_t>(b.repeat);
    for (std::size_t k = 0; k < copies; ++k)
      for (std::size_t i = 0; i < b.matrix.rows(); ++i, ++r)
        for (std::size_t j = 0; j < b.matrix.cols(); ++j) out(r, j) = b.matrix(i, j) * b.weight;
  }
  return out;
}

Matrix BlockSpec::collapse(const PExponent& p) const {
  Matrix out;
  for (const auto& b : blocks) {
    const unsigned bits = 128;
    const double scale =
        (root_abs(HPScalar(b.repeat, bits), p, bits) * HPScalar(b.weight, bits)).to_double();
    Matrix block = to_real(b.matrix).map([scale](double v) { return v * scale; });
    out = out.empty() ? std::move(block) : vstack(out, block);
  }
  return out;
}

HPScalar BlockSpec::pow_sum(std::span<const HPScalar> x, const PExponent& p, unsigned bits) const {
  HPScalar total(bits);
  for (const auto& b : blocks) {
    HPScalar term = pnormcut::pow_sum(b.matrix, x, p, bits);
    term *= HPScalar(b.repeat, bits);
    term *= pow_abs(HPScalar(b.weight, bits), p, bits);
    total += term;
  }
  return total;
}

// ---------------------------------------------------------------------------
// ReductionInstance

const ExactMatrix& ReductionInstance::dense() const {
  if (is_virtual()) throw std::logic_error("ReductionInstance: matrix is virtual");
  return std::get<ExactMatrix>(matrix);
}

ExactMatrix ReductionInstance::materialize(std::size_t row_limit) const {
  if (!is_virtual()) return dense();
  return std::get<BlockSpec>(matrix).materialize(row_limit);
}

BigInt ReductionInstance::rows() const {
  if (!is_virtual()) return static_cast<long>(dense().rows());
  return std::get<BlockSpec>(matrix).rows();
}

std::size_t ReductionInstance::cols() const {
  if (!is_virtual()) return dense().cols();
  return std::get<BlockSpec>(matrix).cols();
}

HPScalar ReductionInstance::pow_sum(std::span<const HPScalar> x, unsigned bits) const {
  if (!is_virtual()) return pnormcut::pow_sum(dense(), x, p, bits);
  return std::get<BlockSpec>(matrix).pow_sum(x, p, bits);
}

Matrix ReductionInstance::real_matrix() const {
  if (!is_virtual()) return to_real(dense());
  return std::get<BlockSpec>(matrix).collapse(p);
}

// ---------------------------------------------------------------------------
// Builders

namespace {

void require_p_above_two(const PExponent& p) {
  if (!(PExponent(2) < p)) throw std::invalid_argument("p must exceed 2 for this construction");
}

Rational pow_int(const Rational& r, long e) {
  Rational out = 1;
  for (long i = 0; i < e; ++i) out *= r;
  return out;
}

}  // namespace

Rational default_alpha(int n, const PExponent& p) {
  require_p_above_two(p);
  const Rational pr = p.rational();
  return 64 * pr * pow_int(Rational(n), 8) / (pr - 2);
}

BigInt ceil_rational_power(const Rational& r, const PExponent& p) {
  if (r <= 0) throw std::invalid_argument("ceil_rational_power: base must be positive");
  const auto a = static_cast<unsigned>(p.numerator());
  const auto b = static_cast<unsigned>(p.denominator());
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  const BigInt lhs_den = boost::multiprecision::pow(den, a);
  const BigInt target = boost::multiprecision::pow(num, a);
  auto covers = [&](const BigInt& k) { return boost::multiprecision::pow(k, b) * lhs_den >= target; };

  const double magnitude = p.value() * std::fabs(std::log2(static_cast<double>(r)));
  const unsigned bits = static_cast<unsigned>(std::ceil(magnitude)) + 96;
  BigInt k = pow_abs(HPScalar(r, bits), p, bits).round_to_integer();
  if (k < 0) k = 0;
  while (!covers(k)) ++k;
  while (k > 0 && covers(k - 1)) --k;
  return k;
}

ReductionInstance build_ztilde(const Graph& g, const PExponent& p) {
  require_p_above_two(p);
  const int n = g.vertex_count();
  if (n < 3) throw std::invalid_argument("build_ztilde: needs at least 3 vertices");
  const Rational alpha = default_alpha(n, p);
  ExactMatrix z = vstack(gadget_matrix(n), scaled(incidence_matrix(g), Rational(1 / alpha)));
  return {g, p, HPScalar(1L, kDoubleBits), decode_precision_bits(n, p, HPScalar(alpha, 256)), Construction::kZTilde,
          std::move(z)};
}

ReductionInstance build_z(const Graph& g, const PExponent& p, std::optional<Rational> alpha) {
  require_p_above_two(p);
  const int n = g.vertex_count();
  const Rational a = alpha ? *alpha : default_alpha(n, p);
  if (a < 1) throw std::invalid_argument("build_z: alpha must be at least 1");
  const HPScalar ah(a, 256);
  ExactMatrix z = vstack(scaled(gadget_matrix(n), a), incidence_matrix(g));
  return {g, p, ah, decode_precision_bits(n, p, ah), Construction::kZ, std::move(z)};
}

ReductionInstance build_zstar(const Graph& g, const PExponent& p, std::optional<Rational> alpha) {
  require_p_above_two(p);
  const int n = g.vertex_count();
  const Rational a = alpha ? *alpha : default_alpha(n, p);
  if (a < 1) throw std::invalid_argument("build_zstar: alpha must be at least 1");
  const Rational weight(ceil(a));
  const HPScalar ah(weight, 256);
  ExactMatrix z = vstack(scaled(gadget_matrix(n), weight), incidence_matrix(g));
  return {g, p, ah, decode_precision_bits(n, p, ah), Construction::kZStar, std::move(z)};
}

ReductionInstance build_zdoublestar(const Graph& g, const PExponent& p, std::optional<BigInt> k,
                                    std::size_t row_limit) {
  require_p_above_two(p);
  const int n = g.vertex_count();
  const BigInt copies = k ? *k : ceil_rational_power(default_alpha(n, p), p);
  if (copies < 1) throw std::invalid_argument("build_zdoublestar: k must be at least 1");
  BlockSpec spec{{Block{gadget_matrix(n), copies, 1}, Block{incidence_matrix(g), 1, 1}}};
  const unsigned alpha_bits = static_cast<unsigned>(msb(copies)) + 128;
  const HPScalar ah = root_abs(HPScalar(copies, alpha_bits), p, alpha_bits);
  ReductionInstance inst{g, p, ah, decode_precision_bits(n, p, ah), Construction::kZDoubleStar, std::move(spec)};
  if (inst.rows() <= row_limit) inst.matrix = std::get<BlockSpec>(inst.matrix).materialize(row_limit);
  return inst;
}

ReductionInstance build_padded(const Graph& g) {
  return {g, PExponent(1), HPScalar(kDoubleBits), kDoubleBits, Construction::kPadded, pad_square(incidence_matrix(g))};
}

// ---------------------------------------------------------------------------
// Accuracy schedules

HPScalar required_epsilon_pnorm(int n, const PExponent& p, unsigned bits) {
  require_p_above_two(p);
  if (n < 3) throw std::invalid_argument("required_epsilon_pnorm: n must be at least 3");
  const Rational pr = p.rational();
  const HPScalar ratio(pr / (pr - 2), bits);
  const HPScalar nn(static_cast<long>(n), bits);
  const HPScalar c132(132L, bits);
  const HPScalar first = pow_abs(c132, p, bits) * pow_abs(ratio, p, bits) * pow_abs(nn, 8 * pr + 3, bits) *
                         HPScalar(pr, bits);
  const HPScalar second = c132 * ratio * pow_abs(nn, Rational(8), bits);
  return HPScalar(1L, bits) / (first * second);
}

HPScalar required_epsilon_inftyp(const PExponent& p, const Rational& delta, unsigned bits) {
  if (delta <= 0) throw std::invalid_argument("required_epsilon_inftyp: delta must be positive");
  const Rational pr = p.rational();
  const HPScalar denom = HPScalar(Rational(33 + delta) * pr, bits) * pow_abs(HPScalar(2L, bits), pr - 1, bits);
  return HPScalar(1L, bits) / denom;
}

// ---------------------------------------------------------------------------
// Decoding

namespace {

long to_long(const BigInt& v) { return v.convert_to<long>(); }

HPScalar ulp_multiple(const HPScalar& magnitude, unsigned bits, int slack_bits) {
  return abs(magnitude) * pow_abs(HPScalar(2L, 64), Rational(-static_cast<long>(bits) + slack_bits), 64);
}

}  // namespace

DecodeResult decode_maxcut(const HPScalar& f, int n, const PExponent& p, const HPScalar& alpha, unsigned bits,
                           std::optional<HPScalar> f_error) {
  if (!(f.sign() > 0)) throw std::domain_error("decode_maxcut: f must be positive");
  const unsigned floor_bits = decode_precision_bits(n, p, alpha);
  if (bits < floor_bits) {
    throw std::domain_error("decode_maxcut: " + std::to_string(bits) + " bits is below the precision floor of " +
                            std::to_string(floor_bits) + " for this instance");
  }
  const HPScalar nn(static_cast<long>(n), bits);
  const HPScalar scale = nn / pow_abs(HPScalar(2L, bits), p, bits);
  const HPScalar encoded = scale * pow_abs(f.with_precision(bits), p, bits);
  const HPScalar offset = nn * pow_abs(alpha.with_precision(bits), p, bits);

  DecodeResult out;
  out.maxcut_estimate = encoded - offset;
  out.maxcut_rounded = to_long(out.maxcut_estimate.round_to_integer());
  out.additive_error_bound = ulp_multiple(encoded, bits, 6) + ulp_multiple(offset, bits, 6);
  if (f_error) {
    const HPScalar fb = f.with_precision(bits);
    const HPScalar df = abs(*f_error).with_precision(bits);
    out.additive_error_bound += scale * (pow_abs(fb + df, p, bits) - pow_abs(fb, p, bits));
  }
  out.rounding_valid = out.additive_error_bound < HPScalar(0.5, bits);
  return out;
}

DecodeResult decode_maxcut_from_inftyp(const HPScalar& f, const PExponent& p, std::optional<double> relative_error,
                                       unsigned bits) {
  if (f.sign() < 0) throw std::domain_error("decode_maxcut_from_inftyp: f must be nonnegative");
  DecodeResult out;
  out.maxcut_estimate = pow_abs(f.with_precision(bits) / HPScalar(2L, bits), p, bits);
  out.maxcut_rounded = to_long(out.maxcut_estimate.round_to_integer());
  out.additive_error_bound = ulp_multiple(out.maxcut_estimate, bits, 6);
  if (relative_error) {
    const HPScalar c = pow_abs(HPScalar(2L, bits), p.rational() - 1, bits) * HPScalar(p.rational(), bits) *
                       HPScalar(std::fabs(*relative_error), bits);
    const HPScalar one(1L, bits);
    if (c < one) out.additive_error_bound += c * out.maxcut_estimate / (one - c);
    else out.additive_error_bound = HPScalar::infinity(bits);
  }
  out.rounding_valid = out.additive_error_bound < HPScalar(0.5, bits);
  return out;
}

SignVector round_to_signs(std::span<const double> x) {
  std::vector<int> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] < 0.0 ? -1 : 1;
  return SignVector(std::move(s));
}

SignVector round_to_signs(std::span<const HPScalar> x) {
  std::vector<int> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i].sign() < 0 ? -1 : 1;
  return SignVector(std::move(s));
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::vector<HPScalar> sign_hp(const SignVector& s, unsigned bits) {
  std::vector<HPScalar> out;
  out.reserve(s.size());
  for (int v : s.entries()) out.emplace_back(static_cast<long>(v), bits);
  return out;
}

}  // namespace

MaxcutSolution solve_maxcut_via_pnorm(const Graph& g, const PExponent& p, std::optional<Rational> alpha,
                                      const AscentConfig& cfg, int limit) {
  MaxcutSolution sol;
  sol.n = g.vertex_count();
  sol.p = p;

  auto t = Clock::now();
  const ReductionInstance inst = build_z(g, p, alpha);
  const ExactMatrix& z = inst.dense();
  const unsigned bits = inst.bits;
  sol.alpha = inst.alpha;
  sol.bits = bits;
  sol.timings.build_ms = elapsed_ms(t);

  t = Clock::now();
  const NormEstimate sign = p_norm_sign_search(z, p, bits, limit);
  sol.f_sign_search = sign.value;
  sol.timings.sign_search_ms = elapsed_ms(t);

  t = Clock::now();
  const NormEstimate ascent = p_norm_ascent(z, p, cfg);
  sol.f_ascent = ascent.value;
  sol.ascent = ascent.ascent;
  sol.timings.ascent_ms = elapsed_ms(t);

  // Doubles cannot resolve the graph block once alpha is large, so the
  // polish starts from the rounded ascent optimizer and from the best sign
  // vector, in full precision.
  t = Clock::now();
  std::vector<SignVector> starts{round_to_signs(ascent.witness)};
  const SignVector sign_start = round_to_signs(sign.witness);
  if (sign_start != starts.front() && sign_start != starts.front().negated()) starts.push_back(sign_start);
  std::optional<HPAscentResult> best_refine;
  SignVector best_start;
  for (const auto& s : starts) {
    HPAscentResult r = p_norm_ascent_refine(z, p, s.to_doubles(), bits);
    if (!best_refine || r.value > best_refine->value) {
      best_refine = std::move(r);
      best_start = s;
    }
  }
  sol.f_refined = best_refine->value;
  sol.timings.refine_ms = elapsed_ms(t);

  t = Clock::now();
  // Rounding gap on the sphere ||x||_p^p = n. A polish that never left its
  // start is sitting on the sign vector itself.
  if (best_refine->improved) {
    const HPScalar radius = root_abs(HPScalar(static_cast<long>(sol.n), bits), p, bits);
    std::vector<HPScalar> on_sphere = best_refine->witness;
    for (auto& v : on_sphere) v *= radius;
    sol.refined_rounding = round_to_signs(std::span<const HPScalar>(best_refine->witness));
    sol.rounding_gap = inst.pow_sum(on_sphere, bits) - inst.pow_sum(sign_hp(sol.refined_rounding, bits), bits);
  } else {
    sol.refined_rounding = best_start;
    sol.rounding_gap = HPScalar(bits);
  }

  if (sol.f_refined > sol.f_sign_search) {
    sol.f = sol.f_refined;
    sol.method = NormMethod::kAscent;
    for (const auto& v : best_refine->witness) sol.witness.push_back(v.to_double());
  } else {
    sol.f = sol.f_sign_search;
    sol.method = NormMethod::kSignSearch;
    sol.witness = sign.witness;
  }

  sol.decode = decode_maxcut(sol.f, sol.n, p, sol.alpha, bits);
  const SignVector rounded = round_to_signs(sol.witness);
  sol.decode.witness_cut = CutResult{cut_value(g, rounded), rounded};
  sol.timings.decode_ms = elapsed_ms(t);
  if (sol.decode.witness_cut->value > sol.decode.maxcut_rounded) {
    throw std::logic_error("solve_maxcut_via_pnorm: witness cuts " + std::to_string(sol.decode.witness_cut->value) +
                           " edges but the decoded max-cut is " + std::to_string(sol.decode.maxcut_rounded));
  }
  return sol;
}

}  // namespace pnormcut
