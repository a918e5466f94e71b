#include "pnormcut/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pnormcut/gadget.hpp"
#include "pnormcut/norms.hpp"
#include "pnormcut/reduction.hpp"

namespace pnormcut {

bool SuiteReport::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& r) { return r.passed; });
}

namespace {

// Keeps the worst measured value of one property and where it occurred.
class Tracker {
 public:
  Tracker(std::string name, double limit) { result_.name = std::move(name), result_.limit = limit; }

  void observe(double value, const std::function<std::string()>& where = {}) {
    ++result_.cases;
    if (result_.cases == 1 || value > result_.worst || std::isnan(value)) {
      result_.worst = value;
      if (where) result_.detail = where();
    }
  }

  PropertyResult finish() {
    result_.passed = result_.cases > 0 && result_.worst <= result_.limit;
    return result_;
  }

 private:
  PropertyResult result_;
};

std::mt19937_64 suite_rng(std::uint64_t seed, std::uint32_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), salt};
  return std::mt19937_64(seq);
}

std::string describe(const Graph& g) {
  std::ostringstream os;
  os << "n=" << g.vertex_count() << " m=" << g.edge_count() << " edges:";
  for (const Edge& e : g.edges()) os << ' ' << e.u << '-' << e.v;
  return os.str();
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

Matrix uniform_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

const PExponent kIncidenceExponents[] = {PExponent(1), PExponent(3, 2), PExponent(2), PExponent(5, 2), PExponent(3)};
const PExponent kGadgetExponents[] = {PExponent(5, 2), PExponent(3), PExponent(4)};

std::vector<Graph> incidence_graphs(const VerifyOptions& opts) {
  auto rng = suite_rng(opts.seed, 1);
  std::vector<Graph> graphs;
  const int span = std::max(1, opts.max_n - 1);
  for (int k = 0; k < 50; ++k) graphs.push_back(random_connected_graph(2 + k % span, 0.4, rng));
  return graphs;
}

// Gaussian points and jittered sign vectors, both pushed onto ||y||_p^p = n;
// the jittered half lands close to the sign vectors where the deficiency
// bound is tight.
std::vector<double> sphere_point(int n, const PExponent& p, int index, std::mt19937_64& rng) {
  if (index % 2 == 0) return sample_sphere(n, p, rng);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> log_sigma(std::log(1e-4), std::log(0.5));
  std::bernoulli_distribution coin;
  const double sigma = std::exp(log_sigma(rng));
  std::vector<double> y(n);
  for (double& v : y) v = (coin(rng) ? 1.0 : -1.0) + sigma * normal(rng);
  return rescale_to_sphere(y, p);
}

// ---------------------------------------------------------------------------

SuiteReport suite_lemma4(const VerifyOptions& opts) {
  auto rng = suite_rng(opts.seed, 2);
  std::uniform_real_distribution<double> xy(-10.0, 10.0);
  std::uniform_int_distribution<int> pnum(2000, 10000);
  Tracker nonneg("error term is nonnegative", 1e-12);
  Tracker refined("lhs <= bound - error term", 1e-12);
  for (int s = 0; s < 100000; ++s) {
    const PExponent p(pnum(rng), 1000);
    const double x = xy(rng);
    const double y = xy(rng);
    const auto t = pair_inequality_terms(x, y, p);
    auto where = [&] {
      std::ostringstream os;
      os.precision(17);
      os << "x=" << x << " y=" << y << " p=" << p;
      return os.str();
    };
    nonneg.observe(-t.error_term, where);
    refined.observe((t.lhs - (t.bound - t.error_term)) / t.bound, where);
  }
  return {"lemma4", {nonneg.finish(), refined.finish()}};
}

SuiteReport suite_lemma5(const VerifyOptions& opts) {
  auto rng = suite_rng(opts.seed, 3);
  Tracker signs("sign vectors reach n 2^p", 1e-9);
  Tracker cap("sphere points stay below n 2^p", 1e-9);
  for (const auto& p : kGadgetExponents) {
    for (int n = 2; n <= 8; ++n) {
      const double peak = n * std::pow(2.0, p.value());
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<double> x(n);
        for (int j = 0; j < n; ++j) x[j] = (mask >> j) & 1u ? -1.0 : 1.0;
        signs.observe(std::fabs(gadget_value(x, p) - peak));
      }
      for (int s = 0; s < 10000; ++s) {
        const auto y = sphere_point(n, p, s, rng);
        cap.observe(gadget_value(y, p) - peak, [&] { return "n=" + std::to_string(n) + " p=" + p.to_string(); });
      }
    }
  }
  return {"lemma5", {signs.finish(), cap.finish()}};
}

SuiteReport suite_lemma6(const VerifyOptions& opts) {
  auto rng = suite_rng(opts.seed, 4);
  Tracker deficiency("sphere points respect the deficiency bound", 1e-9);
  long capped = 0;
  for (const auto& p : kGadgetExponents) {
    for (int n = 2; n <= 8; ++n) {
      for (int s = 0; s < 10000; ++s) {
        const auto y = sphere_point(n, p, s, rng);
        double c = sign_distance(y);
        if (c == 0.0) continue;
        // Farther than 1/2 from every sign vector is in particular 1/2-far.
        if (c > 0.5) {
          c = 0.5;
          ++capped;
        }
        deficiency.observe(gadget_value(y, p) - deficiency_bound(n, p, c).to_double(),
                           [&] { return "n=" + std::to_string(n) + " p=" + p.to_string() + " c=" + std::to_string(c); });
      }
    }
  }
  PropertyResult r = deficiency.finish();
  r.detail += (r.detail.empty() ? "" : "; ") + std::to_string(capped) + " samples evaluated at c=1/2";
  return {"lemma6", {r}};
}

SuiteReport suite_prop1(const VerifyOptions& opts) {
  Tracker identity("infinity,p norm equals 2 maxcut^{1/p}", 1e-9);
  for (const Graph& g : incidence_graphs(opts)) {
    const long maxcut = maxcut_bruteforce(g).value;
    const ExactMatrix m = incidence_matrix(g);
    for (const auto& p : kIncidenceExponents) {
      const HPScalar expected =
          HPScalar(2L, 128) * root_abs(HPScalar(maxcut, 128), p, 128);
      const HPScalar got = infinity_p_norm_exact(m, p).value;
      identity.observe(abs((got - expected) / expected).to_double(),
                       [&] { return describe(g) + " p=" + p.to_string(); });
    }
  }
  return {"prop1", {identity.finish()}};
}

SuiteReport suite_prop2(const VerifyOptions& opts) {
  Tracker transfer("perturbed norms decode within 2^{p-1} p eps maxcut", 1e-9);
  Tracker declared("declared decode bound covers the error", 1e-9);
  const unsigned bits = 128;
  for (const Graph& g : incidence_graphs(opts)) {
    const long maxcut = maxcut_bruteforce(g).value;
    const ExactMatrix m = incidence_matrix(g);
    for (const auto& p : kIncidenceExponents) {
      const HPScalar f = infinity_p_norm_exact(m, p, bits).value;
      for (double eps : {1e-4, 1e-3}) {
        for (double dir : {-1.0, 1.0}) {
          const HPScalar perturbed = f * HPScalar(1.0 + dir * eps, bits);
          const DecodeResult d = decode_maxcut_from_inftyp(perturbed, p, eps, bits);
          const double err = abs(d.maxcut_estimate - HPScalar(maxcut, bits)).to_double();
          const double allowed = std::pow(2.0, p.value() - 1) * p.value() * eps * static_cast<double>(maxcut);
          auto where = [&] { return describe(g) + " p=" + p.to_string() + " eps=" + std::to_string(dir * eps); };
          transfer.observe(err - allowed, where);
          declared.observe(err - d.additive_error_bound.to_double(), where);
        }
      }
    }
  }
  return {"prop2", {transfer.finish(), declared.finish()}};
}

SuiteReport suite_prop6(const VerifyOptions& opts) {
  auto rng = suite_rng(opts.seed, 6);
  const PExponent p(3);
  std::vector<PropertyResult> results;
  for (int n : {3, 4, 5}) {
    double limit = 1.0 / (std::pow(4.0, p.value()) * std::pow(n, 6));
    if (n == 5) limit = std::min(limit, 1e-6);
    Tracker local("n=" + std::to_string(n) + ": optimizer within 1/(4^p n^6) of a sign vector", limit);
    for (int trial = 0; trial < 10; ++trial) {
      const Graph g = random_connected_graph(n, 0.5, rng);
      const ReductionInstance inst = build_ztilde(g, p);
      AscentConfig cfg;
      cfg.restarts = opts.restarts;
      cfg.tol = 1e-15;
      cfg.seed = opts.seed + static_cast<std::uint64_t>(trial);
      const NormEstimate coarse = p_norm_ascent(inst.dense(), p, cfg);
      // The deficiency is quadratic in the distance, so the stall test of a
      // double run leaves the iterate ~1e-7 short; polish in 128 bits.
      const unsigned bits = 128;
      const HPAscentResult fine = p_norm_ascent_refine(inst.dense(), p, coarse.witness, bits, 5000);
      const HPScalar radius = root_abs(HPScalar(static_cast<long>(n), bits), p, bits);
      HPScalar dist(bits);
      for (const auto& v : fine.witness) dist = max(dist, abs(abs(v * radius) - HPScalar(1L, bits)));
      local.observe(dist.to_double(), [&] {
        return describe(g) + (fine.converged ? "" : " (polish hit its iteration cap)");
      });
    }
    results.push_back(local.finish());
  }
  return {"prop6", std::move(results)};
}

SuiteReport suite_prop7(const VerifyOptions& opts) {
  Tracker lower("rounding gap is nonnegative", 0.0);
  Tracker upper("rounding gap minus 1/n^2", 0.0);
  int positive = 0;
  for (const auto& d : decode_instances(30, opts.seed)) {
    positive += d.gap > 0.0;
    auto where = [&] {
      return "n=" + std::to_string(d.n) + " p=" + d.p.to_string() + (d.default_alpha ? " default alpha" : " alpha=10n^2");
    };
    lower.observe(-d.gap, where);
    upper.observe(d.gap - 1.0 / (d.n * d.n), where);
  }
  PropertyResult r = upper.finish();
  r.detail += "; " + std::to_string(positive) + " instances with a strictly positive gap";
  return {"prop7", {lower.finish(), r}};
}

SuiteReport suite_prop8(const VerifyOptions& opts) {
  Tracker exact("decoded max-cut differs from the oracle", 0.0);
  Tracker witness("rounded witness misses the max-cut", 0.0);
  Tracker valid("decode bound not below 1/2", 0.0);
  Tracker bound("norm over 2 * 66 p n^8 / (p-2)", 1.0);
  for (const auto& d : decode_instances(30, opts.seed)) {
    auto where = [&] {
      return "n=" + std::to_string(d.n) + " p=" + d.p.to_string() + (d.default_alpha ? " default alpha" : " alpha=10n^2");
    };
    exact.observe(d.decoded != d.oracle, where);
    witness.observe(d.witness_cut != d.oracle, where);
    valid.observe(!d.rounding_valid, where);
    if (d.default_alpha) bound.observe(d.norm_ratio, where);
  }
  return {"prop8", {exact.finish(), witness.finish(), valid.finish(), bound.finish()}};
}

SuiteReport suite_duality(const VerifyOptions& opts) {
  auto rng = suite_rng(opts.seed, 9);
  Tracker agree("||M||_p and ||M^T||_p' agree (relative)", 1e-6);
  int escalations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = uniform_matrix(5, 5, rng);
    for (const PExponent p : {PExponent(5, 2), PExponent(3)}) {
      AscentConfig cfg;
      cfg.restarts = opts.restarts;
      cfg.seed = opts.seed + static_cast<std::uint64_t>(trial);
      auto [a, b] = dual_norm_pair(m, p, cfg);
      double diff = rel_diff(a.value.to_double(), b.value.to_double());
      if (diff > 1e-6) {
        ++escalations;
        cfg.restarts *= 10;
        std::tie(a, b) = dual_norm_pair(m, p, cfg);
        diff = rel_diff(a.value.to_double(), b.value.to_double());
      }
      agree.observe(diff, [&] { return "matrix " + std::to_string(trial) + " p=" + p.to_string(); });
    }
  }
  PropertyResult r = agree.finish();
  r.detail += (r.detail.empty() ? "" : "; ") + std::to_string(escalations) + " escalated to 10x restarts";
  return {"duality", {r}};
}

SuiteReport suite_replication(const VerifyOptions& opts) {
  auto rng = suite_rng(opts.seed, 10);
  const PExponent p(3);
  Tracker same("k-fold stack equals k^{1/p}-weighted block (relative)", 1e-12);
  AscentConfig cfg;
  cfg.tol = 1e-15;
  cfg.seed = opts.seed;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 3;
    const ExactMatrix below = to_exact(uniform_matrix(2 + trial % 4, n, rng));
    for (long k : {1L, 8L, 27L}) {
      const BlockSpec spec{{Block{gadget_matrix(n), k, 1}, Block{below, 1, 1}}};
      const double stacked = p_norm_ascent(spec.materialize(), p, cfg).value.to_double();
      const double weighted = p_norm_ascent(spec.collapse(p), p, cfg).value.to_double();
      same.observe(rel_diff(stacked, weighted),
                   [&] { return "matrix " + std::to_string(trial) + " k=" + std::to_string(k); });
    }
  }
  return {"replication", {same.finish()}};
}

SuiteReport suite_padding(const VerifyOptions& opts) {
  auto rng = suite_rng(opts.seed, 11);
  std::uniform_int_distribution<int> dim(1, 6);
  Tracker enumeration("infinity,p enumeration (relative)", 1e-12);
  Tracker ascent("p-norm ascent (relative)", 1e-12);
  Tracker endpoints("1- and infinity-norms (relative)", 1e-12);
  AscentConfig cfg;
  cfg.tol = 1e-15;
  cfg.seed = opts.seed;
  for (int trial = 0; trial < 20; ++trial) {
    int r = dim(rng);
    int c = dim(rng);
    while (c == r) c = dim(rng);
    const ExactMatrix m = to_exact(uniform_matrix(r, c, rng));
    const ExactMatrix padded = pad_square(m);
    auto where = [&] { return std::to_string(r) + "x" + std::to_string(c) + " matrix " + std::to_string(trial); };
    for (const PExponent p : {PExponent(1), PExponent(5, 2), PExponent(3)}) {
      enumeration.observe(rel_diff(infinity_p_norm_exact(m, p).value.to_double(),
                                   infinity_p_norm_exact(padded, p).value.to_double()),
                          where);
    }
    for (const PExponent p : {PExponent(3, 2), PExponent(2), PExponent(3)}) {
      ascent.observe(rel_diff(p_norm_ascent(m, p, cfg).value.to_double(),
                              p_norm_ascent(padded, p, cfg).value.to_double()),
                     where);
    }
    endpoints.observe(rel_diff(norm_1(m).convert_to<double>(), norm_1(padded).convert_to<double>()), where);
    endpoints.observe(rel_diff(norm_inf(m).convert_to<double>(), norm_inf(padded).convert_to<double>()), where);
  }
  return {"padding", {enumeration.finish(), ascent.finish(), endpoints.finish()}};
}

using SuiteFn = SuiteReport (*)(const VerifyOptions&);

struct NamedSuite {
  std::string_view name;
  SuiteFn run;
};

const NamedSuite kSuites[] = {
    {"lemma4", suite_lemma4},   {"lemma5", suite_lemma5},   {"lemma6", suite_lemma6},
    {"prop1", suite_prop1},     {"prop2", suite_prop2},     {"prop6", suite_prop6},
    {"prop7", suite_prop7},     {"prop8", suite_prop8},     {"duality", suite_duality},
    {"replication", suite_replication}, {"padding", suite_padding},
};

}  // namespace

const std::vector<std::string_view>& suite_names() {
  static const std::vector<std::string_view> names = [] {
    std::vector<std::string_view> out;
    for (const auto& s : kSuites) out.push_back(s.name);
    return out;
  }();
  return names;
}

std::vector<SuiteReport> run_suites(std::string_view name, const VerifyOptions& opts) {
  std::vector<SuiteReport> out;
  for (const auto& s : kSuites) {
    if (name != "all" && name != s.name) continue;
    const auto start = std::chrono::steady_clock::now();
    SuiteReport r = s.run(opts);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  if (out.empty()) throw std::invalid_argument("unknown verification suite '" + std::string(name) + "'");
  return out;
}

std::vector<DecodeInstance> decode_instances(int graphs, std::uint64_t seed) {
  auto rng = suite_rng(seed, 8);
  std::vector<DecodeInstance> out;
  AscentConfig cfg;
  cfg.restarts = 16;
  cfg.seed = seed;
  for (int k = 0; k < graphs; ++k) {
    const int n = 3 + k % 5;
    const Graph g = random_connected_graph(n, 0.5, rng);
    const long oracle = maxcut_bruteforce(g).value;
    for (const PExponent p : {PExponent(5, 2), PExponent(3)}) {
      for (bool use_default : {false, true}) {
        const std::optional<Rational> alpha =
            use_default ? std::nullopt : std::optional<Rational>(Rational(10 * n * n));
        const MaxcutSolution s = solve_maxcut_via_pnorm(g, p, alpha, cfg);
        DecodeInstance d;
        d.n = n;
        d.p = p;
        d.default_alpha = use_default;
        d.oracle = oracle;
        d.decoded = s.decode.maxcut_rounded;
        d.witness_cut = s.decode.witness_cut ? s.decode.witness_cut->value : -1;
        d.rounding_valid = s.decode.rounding_valid;
        d.gap = s.rounding_gap.to_double();
        const Rational cap = 2 * 66 * p.rational() * Rational(BigInt(n) * n * n * n * n * n * n * n) /
                             (p.rational() - 2);
        d.norm_ratio = (s.f / HPScalar(cap, s.bits)).to_double();
        out.push_back(d);
      }
    }
  }
  return out;
}

}  // namespace pnormcut
