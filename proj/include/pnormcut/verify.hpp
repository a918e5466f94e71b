#ifndef PNORMCUT_VERIFY_HPP
#define PNORMCUT_VERIFY_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pnormcut/graph.hpp"
#include "pnormcut/numerics.hpp"

namespace pnormcut {

/// One checked property. `worst` is the largest measured violation-style
/// quantity (an error, a distance, an overshoot) and the property holds
/// when worst <= limit.
struct PropertyResult {
  std::string name;
  long cases = 0;
  double worst = 0.0;
  double limit = 0.0;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> properties;
  double seconds = 0.0;
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  int max_n = 10;        ///< largest graph in the incidence-norm suites
  int restarts = 200;    ///< ascent restarts for duality and localization
};

/// lemma4 lemma5 lemma6 prop1 prop2 prop6 prop7 prop8 duality replication padding
const std::vector<std::string_view>& suite_names();

/// Runs one suite by name, or every suite for "all". Throws
/// std::invalid_argument for an unknown name.
std::vector<SuiteReport> run_suites(std::string_view name, const VerifyOptions& opts = {});

/// One graph pushed through the full graph -> norm -> max-cut pipeline.
struct DecodeInstance {
  int n = 0;
  PExponent p{3};
  bool default_alpha = false;
  long oracle = 0;
  long decoded = 0;
  long witness_cut = 0;
  bool rounding_valid = false;
  double gap = 0.0;           ///< ||Z x*||_p^p - ||Z x_r||_p^p on the sphere
  double norm_ratio = 0.0;    ///< f / (2 * 66 p n^8 / (p-2))
};

/// `graphs` random connected graphs with n in 3..7, each run for p in
/// {5/2, 3} and alpha in {10 n^2, default}.
std::vector<DecodeInstance> decode_instances(int graphs, std::uint64_t seed);

}  // namespace pnormcut

#endif  // PNORMCUT_VERIFY_HPP
