#include <doctest.h>

#include <cmath>
#include <random>

#include "pnormcut/gadget.hpp"
#include "pnormcut/reduction.hpp"

using namespace pnormcut;

namespace {

Rational rpow(const Rational& r, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= r;
  return out;
}

double rel(const HPScalar& a, const HPScalar& b) { return abs((a - b) / b).to_double(); }

AscentConfig tight(int restarts = 16) {
  AscentConfig cfg;
  cfg.restarts = restarts;
  cfg.tol = 1e-15;
  return cfg;
}

}  // namespace

TEST_CASE("construction names") {
  for (auto c : {Construction::kZTilde, Construction::kZ, Construction::kZStar, Construction::kZDoubleStar,
                 Construction::kPadded})
    CHECK(parse_construction(to_string(c)) == c);
  CHECK_THROWS(parse_construction("zz"));
}

TEST_CASE("default_alpha") {
  CHECK(default_alpha(3, PExponent(3)) == 1259712);
  CHECK(default_alpha(4, PExponent(5, 2)) == 20971520);
  CHECK(default_alpha(4, PExponent(4)) == 8388608);
  CHECK_THROWS(default_alpha(3, PExponent(2)));
}

TEST_CASE("build_ztilde") {
  const auto k3 = build_ztilde(complete_graph(3), PExponent(3));
  const ExactMatrix& z = k3.dense();
  CHECK(z.rows() == 9);
  CHECK(z.cols() == 3);
  CHECK(z(6, 0) == Rational(1, 1259712));
  CHECK(z(6, 1) == Rational(-1, 1259712));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(z(i, j) == gadget_matrix(3)(i, j));
  const auto k4 = build_ztilde(complete_graph(4), PExponent(4));
  CHECK(k4.dense()(8, 0) == Rational(1, 8388608));
  CHECK(k4.construction == Construction::kZTilde);
  CHECK_THROWS(build_ztilde(path_graph(2), PExponent(3)));
  CHECK_THROWS(build_ztilde(complete_graph(3), PExponent(2)));
}

TEST_CASE("build_z") {
  const auto z = build_z(complete_graph(3), PExponent(3), Rational(10));
  CHECK(z.dense().rows() == 9);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const Rational v = z.dense()(i, j);
      CHECK((v == 0 || v == 10 || v == -10));
    }
  CHECK(z.bits == 82);
  CHECK(z.alpha == HPScalar(10L, 64));

  const auto d = build_z(complete_graph(3), PExponent(3));
  CHECK(d.dense()(0, 0) == 1259712);
  const auto k4 = build_z(complete_graph(4), PExponent(5, 2));
  CHECK(k4.dense()(1, 1) == 20971520);
  CHECK(k4.rows() == 2 * 4 + 6);
  CHECK_THROWS_WITH(build_z(complete_graph(3), PExponent(2)), "p must exceed 2 for this construction");
  CHECK_THROWS(build_z(complete_graph(3), PExponent(3), Rational(1, 2)));
}

TEST_CASE("build_zstar rounds the weight up") {
  const auto z = build_zstar(complete_graph(3), PExponent(3), Rational(21, 2));
  CHECK(z.dense()(0, 0) == 11);
  CHECK(z.alpha == HPScalar(11L, 64));
  // 64 * (7/3) * 3^8 / (1/3) = 2939328 exactly.
  CHECK(build_zstar(complete_graph(3), PExponent(7, 3)).dense()(0, 0) == 2939328);
}

TEST_CASE("ceil_rational_power is exact") {
  CHECK(ceil_rational_power(Rational(2), PExponent(3, 2)) == 3);
  CHECK(ceil_rational_power(Rational(4), PExponent(3, 2)) == 8);
  CHECK(ceil_rational_power(Rational(9, 4), PExponent(5, 2)) == 8);
  CHECK(ceil_rational_power(Rational(1259712), PExponent(3)) == BigInt(1259712) * 1259712 * 1259712);
  std::mt19937_64 rng(89);
  std::uniform_int_distribution<int> small(1, 60);
  for (int trial = 0; trial < 300; ++trial) {
    const Rational r(small(rng), small(rng));
    const int b = small(rng) % 5 + 1;
    const PExponent p(b + small(rng) % 9, b);
    const BigInt k = ceil_rational_power(r, p);
    const auto a = static_cast<unsigned>(p.numerator());
    const auto d = static_cast<unsigned>(p.denominator());
    // k^d >= r^a > (k-1)^d
    CHECK(Rational(boost::multiprecision::pow(k, d)) >= rpow(r, a));
    if (k > 0) CHECK(Rational(boost::multiprecision::pow(BigInt(k - 1), d)) < rpow(r, a));
  }
  CHECK_THROWS(ceil_rational_power(Rational(0), PExponent(2)));
}

TEST_CASE("build_zdoublestar") {
  const Graph k3 = complete_graph(3);
  const auto z8 = build_zdoublestar(k3, PExponent(3), BigInt(8));
  CHECK_FALSE(z8.is_virtual());
  const ExactMatrix& m = z8.dense();
  CHECK(m.rows() == 51);
  for (const auto& v : m.data()) CHECK((v == 0 || v == 1 || v == -1));
  CHECK(z8.alpha.to_double() == doctest::Approx(2.0).epsilon(1e-15));

  const ExactMatrix two_a = vstack(scaled(gadget_matrix(3), Rational(2)), incidence_matrix(k3));
  const double stacked = p_norm_ascent(m, PExponent(3), tight()).value.to_double();
  const double weighted = p_norm_ascent(two_a, PExponent(3), tight()).value.to_double();
  CHECK(std::fabs(stacked - weighted) <= 1e-12 * weighted);

  const auto z1 = build_zdoublestar(k3, PExponent(3), BigInt(1));
  CHECK(z1.dense() == vstack(gadget_matrix(3), incidence_matrix(k3)));

  const auto big = build_zdoublestar(k3, PExponent(3));
  CHECK(big.is_virtual());
  const BigInt k = BigInt(1259712) * 1259712 * 1259712;
  CHECK(big.rows() == 6 * k + 3);
  CHECK(big.alpha.to_double() == doctest::Approx(1259712.0).epsilon(1e-15));
  CHECK_THROWS_AS(big.materialize(), std::length_error);
  CHECK_THROWS_AS(big.dense(), std::logic_error);
  // Virtual evaluation: at a sign vector ||Z** x||_3^3 = k * 24 + 8 * cut.
  const auto xh = to_hp(std::vector<double>{1, -1, -1}, 256);
  CHECK(big.pow_sum(xh, 256) == HPScalar(BigInt(24 * k + 16), 256));
}

TEST_CASE("block replication matches the weighted stack") {
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    Matrix below(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) below(i, j) = u(rng);
    for (long k : {1L, 8L, 27L}) {
      const BlockSpec spec{{Block{gadget_matrix(4), k, 1}, Block{to_exact(below), 1, 1}}};
      const double full = p_norm_ascent(spec.materialize(), PExponent(3), tight()).value.to_double();
      const double collapsed = p_norm_ascent(spec.collapse(PExponent(3)), PExponent(3), tight()).value.to_double();
      CHECK(std::fabs(full - collapsed) <= 1e-12 * full);
    }
  }
}

TEST_CASE("padded construction keeps the infinity,p norm") {
  const Graph k4 = complete_graph(4);
  const auto padded = build_padded(k4);
  CHECK(padded.dense().rows() == 6);
  CHECK(padded.dense().cols() == 6);
  const double before = infinity_p_norm_exact(incidence_matrix(k4), PExponent(3)).value.to_double();
  const double after = infinity_p_norm_exact(padded.dense(), PExponent(3)).value.to_double();
  CHECK(std::fabs(before - after) <= 1e-12 * before);
}

TEST_CASE("required_epsilon_pnorm") {
  // n=3, p=3: (132^3 3^3 3^27 3)^{-1} (132 * 3 * 3^8)^{-1}
  const Rational e33 = 1 / (rpow(132, 3) * 27 * rpow(3, 27) * 3) / (132 * 3 * rpow(3, 8));
  CHECK(rel(required_epsilon_pnorm(3, PExponent(3)), HPScalar(e33, 256)) <= 1e-70);
  // n=3, p=4: p/(p-2) = 2, n^{8p+3} = 3^35.
  const Rational e34 = 1 / (rpow(132, 4) * 16 * rpow(3, 35) * 4) / (132 * 2 * rpow(3, 8));
  CHECK(rel(required_epsilon_pnorm(3, PExponent(4)), HPScalar(e34, 256)) <= 1e-70);
  CHECK(required_epsilon_pnorm(4, PExponent(3)) < required_epsilon_pnorm(3, PExponent(3)));
  CHECK(required_epsilon_pnorm(3, PExponent(5, 2)).is_finite());
  CHECK_THROWS(required_epsilon_pnorm(3, PExponent(2)));
}

TEST_CASE("required_epsilon_inftyp") {
  CHECK(rel(required_epsilon_inftyp(PExponent(1), 1), HPScalar(Rational(1, 34), 256)) <= 1e-70);
  CHECK(rel(required_epsilon_inftyp(PExponent(2), 1), HPScalar(Rational(1, 136), 256)) <= 1e-70);
  CHECK(rel(required_epsilon_inftyp(PExponent(3), Rational(1, 2)), HPScalar(Rational(1, 402), 256)) <= 1e-70);
  CHECK_THROWS(required_epsilon_inftyp(PExponent(3), 0));
}

TEST_CASE("decode_maxcut examples") {
  const unsigned bits = 128;
  const HPScalar f_k3 = root_abs(HPScalar(Rational(24016, 3), bits), PExponent(3), bits);
  const DecodeResult k3 = decode_maxcut(f_k3, 3, PExponent(3), HPScalar(10L, bits), bits);
  CHECK(abs(k3.maxcut_estimate - HPScalar(2L, bits)).to_double() < 1e-25);
  CHECK(k3.maxcut_rounded == 2);
  CHECK(k3.rounding_valid);

  // C4 bipartition: n rows of (2 alpha)^3 from the gadget plus 2^3 per cut edge.
  const HPScalar f_c4 = root_abs(HPScalar(Rational(8000 * 4 + 8 * 4, 4), bits), PExponent(3), bits);
  CHECK(decode_maxcut(f_c4, 4, PExponent(3), HPScalar(10L, bits), bits).maxcut_rounded == 4);
}

TEST_CASE("decode_maxcut refuses to cancel below its precision floor") {
  const HPScalar f20(20.0, 64);
  CHECK_THROWS_AS(decode_maxcut(f20, 3, PExponent(3), HPScalar(10L, 64), 81), std::domain_error);
  CHECK_NOTHROW(decode_maxcut(f20, 3, PExponent(3), HPScalar(10L, 64), 82));
  CHECK_THROWS_AS(decode_maxcut(HPScalar(0L, 64), 3, PExponent(3), HPScalar(10L, 64), 82), std::domain_error);

  // Doubles lose the cut entirely at the default alpha.
  const Rational alpha = default_alpha(3, PExponent(3));
  const unsigned bits = decode_precision_bits(3, PExponent(3), HPScalar(alpha, 128));
  const Rational encoded = (3 * rpow(alpha, 3) * 8 + 16) / 3;  // ||Zx||^3 / ||x||^3 at the max cut
  const HPScalar f = root_abs(HPScalar(encoded, bits), PExponent(3), bits);
  CHECK(decode_maxcut(f, 3, PExponent(3), HPScalar(alpha, bits), bits).maxcut_rounded == 2);
  const double fd = f.to_double();
  const double naive = 3.0 / 8.0 * fd * fd * fd - 3.0 * std::pow(alpha.convert_to<double>(), 3);
  CHECK(std::fabs(naive - 2.0) > 0.5);
}

TEST_CASE("declared input error widens the decode bound") {
  const unsigned bits = 128;
  const HPScalar f = root_abs(HPScalar(Rational(24016, 3), bits), PExponent(3), bits);
  const auto tight_err = decode_maxcut(f, 3, PExponent(3), HPScalar(10L, bits), bits, HPScalar(1e-12, bits));
  CHECK(tight_err.rounding_valid);
  const auto loose = decode_maxcut(f, 3, PExponent(3), HPScalar(10L, bits), bits, HPScalar(1e-2, bits));
  CHECK_FALSE(loose.rounding_valid);
  CHECK(loose.additive_error_bound > tight_err.additive_error_bound);
}

TEST_CASE("decode_maxcut_from_inftyp") {
  const HPScalar f = HPScalar(2L, 128) * root_abs(HPScalar(2L, 128), PExponent(3), 128);
  const auto k3 = decode_maxcut_from_inftyp(f, PExponent(3));
  CHECK(k3.maxcut_rounded == 2);
  CHECK(k3.rounding_valid);
  CHECK(decode_maxcut_from_inftyp(HPScalar(0L, 64), PExponent(3)).maxcut_rounded == 0);
  CHECK(decode_maxcut_from_inftyp(HPScalar(2L, 64), PExponent(5, 2)).maxcut_rounded == 1);

  const auto with_eps = decode_maxcut_from_inftyp(f, PExponent(3), 1e-3);
  // 2^{p-1} p eps = 0.012; bound 0.012 * 2 / 0.988.
  CHECK(with_eps.additive_error_bound.to_double() == doctest::Approx(0.024 / 0.988).epsilon(1e-12));
  CHECK_FALSE(decode_maxcut_from_inftyp(f, PExponent(3), 0.5).additive_error_bound.is_finite());
  CHECK_THROWS(decode_maxcut_from_inftyp(HPScalar(-1L, 64), PExponent(3)));
}

TEST_CASE("round_to_signs") {
  CHECK(round_to_signs(std::vector<double>{0.99, -1.02, 0.8}) == SignVector({1, -1, 1}));
  CHECK(round_to_signs(std::vector<double>{0.0, -0.5}) == SignVector({1, -1}));
  CHECK(round_to_signs(to_hp(std::vector<double>{-0.0, 3}, 64)) == SignVector({1, 1}));
}

TEST_CASE("solve_maxcut_via_pnorm on named graphs") {
  AscentConfig cfg;
  cfg.restarts = 8;

  const auto k3 = solve_maxcut_via_pnorm(complete_graph(3), PExponent(3), Rational(10), cfg);
  CHECK(k3.decode.maxcut_rounded == 2);
  CHECK(k3.decode.witness_cut->value == 2);
  CHECK(k3.bits == 82);
  CHECK(k3.f >= k3.f_sign_search);

  const auto c5 = solve_maxcut_via_pnorm(cycle_graph(5), PExponent(3), Rational(10), cfg);
  CHECK(c5.decode.maxcut_rounded == 4);
  CHECK(c5.decode.witness_cut->value == 4);

  const auto k4 = solve_maxcut_via_pnorm(complete_graph(4), PExponent(5, 2), Rational(10000), cfg);
  CHECK(k4.decode.maxcut_rounded == 4);
  CHECK(k4.decode.witness_cut->value == 4);

  const auto d = solve_maxcut_via_pnorm(complete_graph(3), PExponent(3), std::nullopt, cfg);
  CHECK(d.decode.maxcut_rounded == 2);
  CHECK(d.decode.rounding_valid);
  CHECK(d.rounding_gap.sign() >= 0);
  CHECK(d.rounding_gap <= HPScalar(Rational(1, 9), d.bits));
  // ||Z||_p <= 2 * 66 p n^8 / (p-2) at the default weight.
  CHECK(d.f <= HPScalar(2 * 66 * 3 * rpow(3, 8), d.bits));

  CHECK_THROWS(solve_maxcut_via_pnorm(complete_graph(3), PExponent(2), Rational(10), cfg));
}

TEST_CASE("pipeline agrees with the oracle on random graphs") {
  std::mt19937_64 rng(101);
  AscentConfig cfg;
  cfg.restarts = 4;
  for (int trial = 0; trial < 6; ++trial) {
    const Graph g = random_connected_graph(3 + trial % 4, 0.5, rng);
    const long oracle = maxcut_bruteforce(g).value;
    const PExponent p = trial % 2 ? PExponent(3) : PExponent(5, 2);
    const auto s = solve_maxcut_via_pnorm(g, p, Rational(10 * g.vertex_count() * g.vertex_count()), cfg);
    CHECK(s.decode.maxcut_rounded == oracle);
    CHECK(s.decode.witness_cut->value == oracle);
    CHECK(s.rounding_gap.sign() >= 0);
  }
}
