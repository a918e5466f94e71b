#ifndef PNORMCUT_NORMS_HPP
#define PNORMCUT_NORMS_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pnormcut/graph.hpp"
#include "pnormcut/matrix.hpp"
#include "pnormcut/numerics.hpp"

namespace pnormcut {

enum class NormMethod {
  kEnumeration,  ///< exact mixed infinity,p norm over the hypercube vertices
  kAscent,       ///< multistart nonlinear power iteration
  kSignSearch,   ///< p->p ratio restricted to sign vectors
};

std::string_view to_string(NormMethod method);

struct AscentConfig {
  int restarts = 32;        ///< random unit starts, on top of the structured ones
  int max_iters = 10000;
  double tol = 1e-12;       ///< relative stall tolerance
  std::uint64_t seed = 0;
  int threads = 0;          ///< 0 picks std::thread::hardware_concurrency()
  bool structured_starts = true;  ///< add sign vectors (n <= 12) and coordinate vectors

  /// Throws std::invalid_argument unless restarts >= 1, tol > 0, max_iters >= 1.
  void validate() const;
};

/// Bookkeeping of a multistart ascent.
struct AscentStats {
  int runs = 0;
  int best_run = -1;
  long best_run_iterations = 0;
  bool best_run_converged = false;
  int unconverged_runs = 0;
  /// Largest relative drop of the objective between consecutive iterates,
  /// over all runs (0 when every run was monotone).
  double max_relative_decrease = 0.0;
};

struct NormEstimate {
  HPScalar value;
  /// Enumeration methods: the maximizing sign vector. Ascent: a unit p-norm
  /// vector whose first nonzero entry is positive.
  std::vector<double> witness;
  NormMethod method = NormMethod::kAscent;
  /// True only when the optimum is provably attained on the enumerated set.
  bool certified = false;
  AscentStats ascent;
};

/// max over x in {-1,1}^n of ||Mx||_p, which equals the infinity,p norm by
/// convexity. Candidates are ranked in doubles when bits <= 53 and in
/// `bits`-precision otherwise; the reported value is evaluated at
/// max(bits, 53). Witness has x_1 = +1 and is lexicographically smallest
/// among ties.
NormEstimate infinity_p_norm_exact(const ExactMatrix& m, const PExponent& p, unsigned bits = kDoubleBits,
                                   int limit = kDefaultEnumerationLimit);

/// max over sign vectors of ||Mx||_p / ||x||_p: a lower bound on ||M||_p.
NormEstimate p_norm_sign_search(const ExactMatrix& m, const PExponent& p, unsigned bits = kDoubleBits,
                                int limit = kDefaultEnumerationLimit);

/// One run of the fixed-point iteration
///   y = Mx, z = sign(y)|y|^{p-1}, w = M^T z, x = sign(w)|w|^{p'-1} / norm
/// from x0, stopping after 3 consecutive relative improvements below tol.
struct AscentRun {
  double value = 0.0;          ///< best ||Mx||_p / ||x||_p seen
  std::vector<double> witness; ///< unit p-norm
  long iterations = 0;
  bool converged = false;
  double max_relative_decrease = 0.0;
  std::vector<double> trajectory;  ///< objective per iterate, when requested
};

AscentRun ascent_run(const Matrix& m, const PExponent& p, std::span<const double> x0, int max_iters, double tol,
                     bool record_trajectory = false);

/// Heuristic ||M||_p for p > 1: best of the restart set (random unit
/// vectors, all sign vectors with x_1 = +1 when n <= 12, coordinate
/// vectors). Never certified. A zero matrix yields value 0 and witness e_1.
NormEstimate p_norm_ascent(const Matrix& m, const PExponent& p, const AscentConfig& cfg = {});
NormEstimate p_norm_ascent(const ExactMatrix& m, const PExponent& p, const AscentConfig& cfg = {});

/// The same iteration in `bits`-precision arithmetic from a double start,
/// for polishing optimizers whose decode needs more than 53 bits. Keeps
/// the best iterate, so the result is never below the start.
struct HPAscentResult {
  HPScalar value;                 ///< ||Mx||_p / ||x||_p at the witness
  std::vector<HPScalar> witness;  ///< unit p-norm
  long iterations = 0;
  bool converged = false;
  bool improved = false;  ///< some iterate beat the start
};

HPAscentResult p_norm_ascent_refine(const ExactMatrix& m, const PExponent& p, std::span<const double> x0,
                                    unsigned bits, int max_iters = 400);

/// ||Mx||_p^p in `bits`-precision with exact matrix entries.
HPScalar pow_sum(const ExactMatrix& m, std::span<const HPScalar> x, const PExponent& p, unsigned bits);
/// ||x||_p^p.
HPScalar pow_sum(std::span<const HPScalar> x, const PExponent& p, unsigned bits);
std::vector<HPScalar> to_hp(std::span<const double> x, unsigned bits);

/// ||Mx||_q / ||x||_p. Throws std::invalid_argument for x = 0.
HPScalar rayleigh(const ExactMatrix& m, std::span<const double> x, const PExponent& p, const PExponent& q,
                  unsigned bits = kDoubleBits);

/// (||M||_p, ||M^T||_{p'}) by ascent; equal in exact arithmetic.
std::pair<NormEstimate, NormEstimate> dual_norm_pair(const Matrix& m, const PExponent& p, const AscentConfig& cfg = {});

/// Largest absolute column sum.
Rational norm_1(const ExactMatrix& m);
/// Largest absolute row sum.
Rational norm_inf(const ExactMatrix& m);

struct MixedNormReport {
  double best_sampled = 0.0;     ///< max ||Mx||_q / ||x||_p over random x
  double best_sign = 0.0;        ///< same maximum over sign vectors
  double gap = 0.0;              ///< best_sampled - best_sign
  std::vector<double> best_sign_witness;
  int samples = 0;
};

/// Compares random points against sign vectors for ||Mx||_q / ||x||_p with
/// q < p. Half of the samples are Gaussian, half are jittered sign vectors.
MixedNormReport mixed_pq_sign_maximizer_check(const ExactMatrix& m, const PExponent& p, const PExponent& q,
                                              int samples = 10000, std::uint64_t seed = 0,
                                              int limit = kDefaultEnumerationLimit);

}  // namespace pnormcut

#endif  // PNORMCUT_NORMS_HPP
