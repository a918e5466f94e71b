#include "pnormcut/norms.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "pnormcut/gadget.hpp"

namespace pnormcut {

std::string_view to_string(NormMethod method) {
  switch (method) {
    case NormMethod::kEnumeration: return "enumeration";
    case NormMethod::kAscent: return "ascent";
    case NormMethod::kSignSearch: return "sign-search";
  }
  return "unknown";
}

void AscentConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("AscentConfig: restarts must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("AscentConfig: tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("AscentConfig: max_iters must be at least 1");
}

namespace {

double pow_real(double a, double e) {
  if (e == 1.0) return a;
  if (e == 2.0) return a * a;
  return std::pow(a, e);
}

// ||v||_p computed with a max-abs prescale so large entries cannot overflow.
double p_norm(std::span<const double> v, const PExponent& p) {
  double peak = 0.0;
  for (double t : v) peak = std::max(peak, std::fabs(t));
  if (peak == 0.0) return 0.0;
  double sum = 0.0;
  for (double t : v) sum += pow_abs(t / peak, p);
  return peak * std::pow(sum, 1.0 / p.value());
}

// sign(v_i) |v_i / max|v||^e; direction-only, so the prescale is harmless.
std::vector<double> dual_map(std::span<const double> v, double e) {
  double peak = 0.0;
  for (double t : v) peak = std::max(peak, std::fabs(t));
  std::vector<double> out(v.size(), 0.0);
  if (peak == 0.0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::fabs(v[i]) / peak;
    out[i] = std::copysign(pow_real(a, e), v[i]);
    if (a == 0.0) out[i] = 0.0;
  }
  return out;
}

bool normalize(std::vector<double>& x, const PExponent& p) {
  const double norm = p_norm(x, p);
  if (norm == 0.0 || !std::isfinite(norm)) return false;
  for (double& v : x) v /= norm;
  return true;
}

void canonicalize_sign(std::vector<double>& x) {
  for (double v : x) {
    if (v == 0.0) continue;
    if (v < 0.0)
      for (double& w : x) w = -w;
    return;
  }
}

struct SignBest {
  HPScalar pow_sum;
  std::vector<int> x;
};

bool within(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b)); }

// Maximizes ||Mx||_p^p over x in {-1,1}^n with x_1 = +1.
SignBest enumerate_signs(const ExactMatrix& m, const PExponent& p, unsigned bits, int limit) {
  const std::size_t n = m.cols();
  const std::size_t rows = m.rows();
  if (n == 0) throw std::invalid_argument("sign enumeration: matrix has no columns");
  if (n > static_cast<std::size_t>(limit)) {
    throw std::length_error("sign enumeration: " + std::to_string(n) + " columns exceeds the enumeration limit " +
                            std::to_string(limit));
  }
  const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
  std::vector<int> x(n, 1);
  std::vector<int> best_x = x;
  const unsigned eval_bits = std::max(bits, kDoubleBits);

  if (bits <= kDoubleBits) {
    const Matrix md = to_real(m);
    // Near-equal values are rounding-level ties and go to the lexicographic order.
    const double tie = 8.0 * static_cast<double>(rows + 1) * std::numeric_limits<double>::epsilon();
    std::vector<double> y(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += md(i, j);
    auto value_of = [&] {
      double s = 0.0;
      for (double t : y) s += pow_abs(t, p);
      return s;
    };
    double best = value_of();
    for (std::uint64_t step = 1; step < patterns; ++step) {
      const std::size_t v = static_cast<std::size_t>(std::countr_zero(step)) + 1;
      const double delta = -2.0 * x[v];
      for (std::size_t i = 0; i < rows; ++i) y[i] += delta * md(i, v);
      x[v] = -x[v];
      const double val = value_of();
      if (within(val, best, tie)) {
        if (x < best_x) {
          best = std::max(best, val);
          best_x = x;
        }
      } else if (val > best) {
        best = val;
        best_x = x;
      }
    }
  } else {
    std::vector<HPScalar> mh;
    mh.reserve(rows * n);
    for (const auto& q : m.data()) mh.emplace_back(q, bits);
    const HPScalar tie = pow_abs(HPScalar(2L, 64), Rational(-static_cast<long>(bits) + 16), 64);
    auto value_of = [&] {
      HPScalar s(bits);
      for (std::size_t i = 0; i < rows; ++i) {
        HPScalar yi(bits);
        for (std::size_t j = 0; j < n; ++j) {
          if (mh[i * n + j].is_zero()) continue;
          if (x[j] > 0) yi += mh[i * n + j];
          else yi -= mh[i * n + j];
        }
        s += pow_abs(yi, p, bits);
      }
      return s;
    };
    HPScalar best = value_of();
    for (std::uint64_t step = 1; step < patterns; ++step) {
      const std::size_t v = static_cast<std::size_t>(std::countr_zero(step)) + 1;
      x[v] = -x[v];
      HPScalar val = value_of();
      const HPScalar slack = abs(best) * tie;
      if (abs(val - best) <= slack) {
        if (x < best_x) {
          best = max(best, val);
          best_x = x;
        }
      } else if (val > best) {
        best = std::move(val);
        best_x = x;
      }
    }
  }

  std::vector<HPScalar> xh;
  for (int s : best_x) xh.emplace_back(static_cast<long>(s), eval_bits);
  return {pow_sum(m, xh, p, eval_bits), std::move(best_x)};
}

std::vector<double> to_doubles(const std::vector<int>& x) { return {x.begin(), x.end()}; }

}  // namespace

// ---------------------------------------------------------------------------

std::vector<HPScalar> to_hp(std::span<const double> x, unsigned bits) {
  std::vector<HPScalar> out;
  out.reserve(x.size());
  for (double v : x) out.emplace_back(v, bits);
  return out;
}

HPScalar pow_sum(std::span<const HPScalar> x, const PExponent& p, unsigned bits) {
  HPScalar s(bits);
  for (const auto& v : x) s += pow_abs(v, p, bits);
  return s;
}

namespace {

std::vector<HPScalar> multiply_hp(const std::vector<HPScalar>& mh, std::size_t rows, std::size_t cols,
                                  std::span<const HPScalar> x, unsigned bits) {
  std::vector<HPScalar> y(rows, HPScalar(bits));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (!mh[i * cols + j].is_zero() && !x[j].is_zero()) y[i] += mh[i * cols + j] * x[j];
  return y;
}

std::vector<HPScalar> multiply_transpose_hp(const std::vector<HPScalar>& mh, std::size_t rows, std::size_t cols,
                                            std::span<const HPScalar> y, unsigned bits) {
  std::vector<HPScalar> x(cols, HPScalar(bits));
  for (std::size_t i = 0; i < rows; ++i) {
    if (y[i].is_zero()) continue;
    for (std::size_t j = 0; j < cols; ++j)
      if (!mh[i * cols + j].is_zero()) x[j] += mh[i * cols + j] * y[i];
  }
  return x;
}

std::vector<HPScalar> exact_to_hp(const ExactMatrix& m, unsigned bits) {
  std::vector<HPScalar> mh;
  mh.reserve(m.rows() * m.cols());
  for (const auto& q : m.data()) mh.emplace_back(q, bits);
  return mh;
}

}  // namespace

HPScalar pow_sum(const ExactMatrix& m, std::span<const HPScalar> x, const PExponent& p, unsigned bits) {
  if (x.size() != m.cols()) throw std::invalid_argument("pow_sum: dimension mismatch");
  const auto y = multiply_hp(exact_to_hp(m, bits), m.rows(), m.cols(), x, bits);
  return pow_sum(std::span<const HPScalar>(y), p, bits);
}

NormEstimate infinity_p_norm_exact(const ExactMatrix& m, const PExponent& p, unsigned bits, int limit) {
  SignBest best = enumerate_signs(m, p, bits, limit);
  const unsigned eval_bits = std::max(bits, kDoubleBits);
  NormEstimate est;
  est.value = root_abs(best.pow_sum, p, eval_bits);
  est.witness = to_doubles(best.x);
  est.method = NormMethod::kEnumeration;
  est.certified = true;
  return est;
}

NormEstimate p_norm_sign_search(const ExactMatrix& m, const PExponent& p, unsigned bits, int limit) {
  SignBest best = enumerate_signs(m, p, bits, limit);
  const unsigned eval_bits = std::max(bits, kDoubleBits);
  NormEstimate est;
  est.value = root_abs(best.pow_sum / HPScalar(static_cast<long>(m.cols()), eval_bits), p, eval_bits);
  est.witness = to_doubles(best.x);
  est.method = NormMethod::kSignSearch;
  est.certified = false;
  return est;
}

AscentRun ascent_run(const Matrix& m, const PExponent& p, std::span<const double> x0, int max_iters, double tol,
                     bool record_trajectory) {
  if (x0.size() != m.cols()) throw std::invalid_argument("ascent_run: start vector has the wrong length");
  const double primal_exp = p.value() - 1.0;
  const double dual_exp = 1.0 / primal_exp;

  AscentRun run;
  std::vector<double> x(x0.begin(), x0.end());
  if (!normalize(x, p)) throw std::invalid_argument("ascent_run: zero start vector");
  std::vector<double> y = multiply(m, x);
  double obj = p_norm(y, p);
  run.value = obj;
  run.witness = x;
  if (record_trajectory) run.trajectory.push_back(obj);

  int stalls = 0;
  for (int it = 0; it < max_iters; ++it) {
    const std::vector<double> z = dual_map(y, primal_exp);
    std::vector<double> w = multiply_transpose(m, z);
    std::vector<double> next = dual_map(w, dual_exp);
    if (!normalize(next, p)) {
      run.converged = true;
      break;
    }
    std::vector<double> y_next = multiply(m, next);
    const double val = p_norm(y_next, p);
    run.iterations = it + 1;
    if (record_trajectory) run.trajectory.push_back(val);

    const double rel = obj > 0.0 ? (val - obj) / obj : (val > 0.0 ? 1.0 : 0.0);
    if (rel < 0.0) run.max_relative_decrease = std::max(run.max_relative_decrease, -rel);
    x = std::move(next);
    y = std::move(y_next);
    obj = val;
    if (val > run.value) {
      run.value = val;
      run.witness = x;
    }
    if (rel < tol) {
      if (++stalls >= 3) {
        run.converged = true;
        break;
      }
    } else {
      stalls = 0;
    }
  }
  return run;
}

NormEstimate p_norm_ascent(const Matrix& m, const PExponent& p, const AscentConfig& cfg) {
  cfg.validate();
  if (p == PExponent(1)) throw std::domain_error("p_norm_ascent: p must exceed 1 (use norm_1 for p = 1)");
  const std::size_t n = m.cols();
  if (n == 0) throw std::invalid_argument("p_norm_ascent: matrix has no columns");

  NormEstimate est;
  est.method = NormMethod::kAscent;
  est.certified = false;
  if (std::all_of(m.data().begin(), m.data().end(), [](double v) { return v == 0.0; })) {
    est.value = HPScalar(kDoubleBits);
    est.witness.assign(n, 0.0);
    est.witness[0] = 1.0;
    return est;
  }

  // Start set: random unit vectors, then sign vectors with x_1 = +1, then e_j.
  const int random_starts = cfg.restarts;
  const int sign_starts = cfg.structured_starts && n <= 12 ? 1 << (n - 1) : 0;
  const int coord_starts = cfg.structured_starts ? static_cast<int>(n) : 0;
  const int total = random_starts + sign_starts + coord_starts;

  auto start_vector = [&](int k) {
    std::vector<double> x0(n, 0.0);
    if (k < random_starts) {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(k)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> normal;
      do {
        for (double& v : x0) v = normal(rng);
      } while (std::all_of(x0.begin(), x0.end(), [](double v) { return v == 0.0; }));
    } else if (k < random_starts + sign_starts) {
      const unsigned bits = static_cast<unsigned>(k - random_starts);
      x0[0] = 1.0;
      for (std::size_t j = 1; j < n; ++j) x0[j] = (bits >> (j - 1)) & 1u ? -1.0 : 1.0;
    } else {
      x0[static_cast<std::size_t>(k - random_starts - sign_starts)] = 1.0;
    }
    return x0;
  };

  std::vector<AscentRun> runs(total);
  auto work = [&](int k) {
    const std::vector<double> x0 = start_vector(k);
    runs[k] = ascent_run(m, p, x0, cfg.max_iters, cfg.tol);
  };
  const int threads = std::min(total, cfg.threads > 0 ? cfg.threads
                                                      : std::max(1, static_cast<int>(std::thread::hardware_concurrency())));
  if (threads <= 1) {
    for (int k = 0; k < total; ++k) work(k);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int k = next++; k < total; k = next++) work(k);
      });
    }
  }

  // Deterministic reduction: highest value, then the smaller witness.
  int best = -1;
  for (int k = 0; k < total; ++k) {
    canonicalize_sign(runs[k].witness);
    if (best < 0 || runs[k].value > runs[best].value ||
        (runs[k].value == runs[best].value && runs[k].witness < runs[best].witness)) {
      best = k;
    }
  }
  AscentStats stats;
  stats.runs = total;
  stats.best_run = best;
  stats.best_run_iterations = runs[best].iterations;
  stats.best_run_converged = runs[best].converged;
  for (const auto& r : runs) {
    stats.unconverged_runs += !r.converged;
    stats.max_relative_decrease = std::max(stats.max_relative_decrease, r.max_relative_decrease);
  }
  est.value = HPScalar(runs[best].value, kDoubleBits);
  est.witness = std::move(runs[best].witness);
  est.ascent = stats;
  return est;
}

NormEstimate p_norm_ascent(const ExactMatrix& m, const PExponent& p, const AscentConfig& cfg) {
  return p_norm_ascent(to_real(m), p, cfg);
}

HPAscentResult p_norm_ascent_refine(const ExactMatrix& m, const PExponent& p, std::span<const double> x0,
                                    unsigned bits, int max_iters) {
  if (p == PExponent(1)) throw std::domain_error("p_norm_ascent_refine: p must exceed 1");
  if (x0.size() != m.cols()) throw std::invalid_argument("p_norm_ascent_refine: start vector has the wrong length");
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const Rational primal_exp = p.rational() - 1;
  const Rational dual_exp = 1 / primal_exp;
  const auto mh = exact_to_hp(m, bits);

  auto normalized = [&](std::vector<HPScalar> v) {
    const HPScalar norm = root_abs(pow_sum(std::span<const HPScalar>(v), p, bits), p, bits);
    if (norm.is_zero()) throw std::invalid_argument("p_norm_ascent_refine: zero vector");
    for (auto& t : v) t /= norm;
    return v;
  };
  auto signed_power = [&](const std::vector<HPScalar>& v, const Rational& e) {
    std::vector<HPScalar> out;
    out.reserve(v.size());
    for (const auto& t : v) {
      HPScalar r = pow_abs(t, e, bits);
      if (t.sign() < 0) r = -r;
      if (t.is_zero()) r = HPScalar(bits);
      out.push_back(std::move(r));
    }
    return out;
  };

  HPAscentResult result;
  std::vector<HPScalar> x = normalized(to_hp(x0, bits));
  std::vector<HPScalar> y = multiply_hp(mh, rows, cols, x, bits);
  HPScalar obj = pow_sum(std::span<const HPScalar>(y), p, bits);
  HPScalar best = obj;
  result.witness = x;

  const HPScalar tol = pow_abs(HPScalar(2L, 64), Rational(-static_cast<long>(bits) + 12), 64);
  int stalls = 0;
  for (int it = 0; it < max_iters; ++it) {
    const auto z = signed_power(y, primal_exp);
    const auto w = multiply_transpose_hp(mh, rows, cols, z, bits);
    if (std::all_of(w.begin(), w.end(), [](const HPScalar& t) { return t.is_zero(); })) {
      result.converged = true;
      break;
    }
    x = normalized(signed_power(w, dual_exp));
    y = multiply_hp(mh, rows, cols, x, bits);
    HPScalar val = pow_sum(std::span<const HPScalar>(y), p, bits);
    result.iterations = it + 1;
    const bool stalled = obj.is_zero() ? val.is_zero() : (val - obj) / obj < tol;
    obj = val;
    if (val > best) {
      best = std::move(val);
      result.witness = x;
      result.improved = true;
    }
    if (stalled) {
      if (++stalls >= 3) {
        result.converged = true;
        break;
      }
    } else {
      stalls = 0;
    }
  }
  result.value = root_abs(best, p, bits);
  return result;
}

HPScalar rayleigh(const ExactMatrix& m, std::span<const double> x, const PExponent& p, const PExponent& q,
                  unsigned bits) {
  if (x.size() != m.cols()) throw std::invalid_argument("rayleigh: dimension mismatch");
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
    throw std::invalid_argument("rayleigh: zero vector");
  }
  const unsigned work = std::max(bits, kDoubleBits) + 16;
  const auto xh = to_hp(x, work);
  const HPScalar top = root_abs(pow_sum(m, xh, q, work), q, work);
  const HPScalar bottom = root_abs(pow_sum(std::span<const HPScalar>(xh), p, work), p, work);
  return (top / bottom).with_precision(std::max(bits, kDoubleBits));
}

std::pair<NormEstimate, NormEstimate> dual_norm_pair(const Matrix& m, const PExponent& p, const AscentConfig& cfg) {
  return {p_norm_ascent(m, p, cfg), p_norm_ascent(m.transpose(), conjugate(p), cfg)};
}

Rational norm_1(const ExactMatrix& m) {
  Rational best = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

Rational norm_inf(const ExactMatrix& m) {
  Rational best = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

MixedNormReport mixed_pq_sign_maximizer_check(const ExactMatrix& m, const PExponent& p, const PExponent& q,
                                              int samples, std::uint64_t seed, int limit) {
  if (!(q < p)) throw std::invalid_argument("mixed_pq_sign_maximizer_check: requires q < p");
  const std::size_t n = m.cols();
  if (n > static_cast<std::size_t>(limit)) throw std::length_error("mixed_pq_sign_maximizer_check: too many columns");
  const Matrix md = to_real(m);
  auto ratio = [&](std::span<const double> x) { return p_norm(multiply(md, x), q) / p_norm(x, p); };

  MixedNormReport report;
  report.samples = samples;
  const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
  std::vector<double> x(n, 1.0);
  for (std::uint64_t bits = 0; bits < patterns; ++bits) {
    for (std::size_t j = 1; j < n; ++j) x[j] = (bits >> (j - 1)) & 1u ? -1.0 : 1.0;
    const double r = ratio(x);
    if (r > report.best_sign) {
      report.best_sign = r;
      report.best_sign_witness = x;
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> log_scale(std::log(1e-4), std::log(0.3));
  std::bernoulli_distribution coin;
  report.best_sampled = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    if (s % 2 == 0) {
      for (double& v : x) v = normal(rng);
    } else {
      const double sigma = std::exp(log_scale(rng));
      for (double& v : x) v = (coin(rng) ? 1.0 : -1.0) + sigma * normal(rng);
    }
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) continue;
    report.best_sampled = std::max(report.best_sampled, ratio(x));
  }
  report.gap = report.best_sampled - report.best_sign;
  return report;
}

}  // namespace pnormcut
