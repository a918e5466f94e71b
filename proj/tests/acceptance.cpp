// Acceptance gate: one line per criterion. Each criterion re-checks the
// measured worst case against its own limit and case count instead of
// trusting the suite's verdict.

#include <cstdio>
#include <string>
#include <vector>

#include "pnormcut/verify.hpp"

using pnormcut::PropertyResult;
using pnormcut::SuiteReport;

namespace {

struct Check {
  std::string property;  // prefix of the suite's property name
  double limit;
  long min_cases;
};

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> suites;
  std::vector<Check> checks;
  double max_seconds;
};

const PropertyResult* find(const std::vector<SuiteReport>& reports, const std::string& prefix) {
  for (const auto& s : reports)
    for (const auto& r : s.properties)
      if (r.name.rfind(prefix, 0) == 0) return &r;
  return nullptr;
}

}  // namespace

int main() {
  const pnormcut::VerifyOptions opts;  // seed 0, n <= 10, 200 restarts
  const std::vector<Criterion> criteria = {
      {1, "infinity,p norm of M(G) equals 2 maxcut^{1/p}", {"prop1"},
       {{"infinity,p norm equals", 1e-9, 250}}, 60},
      {2, "pair inequality with error term", {"lemma4"},
       {{"error term is nonnegative", 1e-12, 100000}, {"lhs <= bound", 1e-12, 100000}}, 10},
      {3, "gadget peak on sign vectors, cap and deficiency on the sphere", {"lemma5", "lemma6"},
       {{"sign vectors reach", 1e-9, 1}, {"sphere points stay below", 1e-9, 210000},
        {"sphere points respect", 1e-9, 200000}}, 60},
      {4, "decoded max-cut equals the oracle and the witness achieves it", {"prop8"},
       {{"decoded max-cut differs", 0.0, 120}, {"rounded witness misses", 0.0, 120}}, 300},
      {5, "rounding gap lies in [0, 1/n^2]", {"prop7"},
       {{"rounding gap is nonnegative", 0.0, 120}, {"rounding gap minus", 0.0, 120}}, 300},
      {6, "ascent optimizer of the scaled-down reduction sits near a sign vector", {"prop6"},
       {{"n=3:", 1.0 / (64.0 * 729), 1}, {"n=4:", 1.0 / (64.0 * 4096), 1}, {"n=5:", 1e-6, 1}}, 300},
      {7, "k-fold stacked gadget equals the k^{1/3}-weighted gadget", {"replication"},
       {{"k-fold stack", 1e-12, 30}}, 300},
      {8, "duality of p and conjugate norms", {"duality"}, {{"||M||_p and", 1e-6, 40}}, 300},
      {9, "padding to a square leaves norms unchanged", {"padding"},
       {{"infinity,p enumeration", 1e-12, 20}, {"p-norm ascent", 1e-12, 20}, {"1- and infinity-norms", 1e-12, 20}},
       300},
      {10, "perturbed norms decode within 2^{p-1} p eps maxcut", {"prop2"},
       {{"perturbed norms decode", 1e-9, 250}}, 300},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::vector<SuiteReport> reports;
    double seconds = 0.0;
    for (const auto& name : c.suites) {
      for (auto& r : pnormcut::run_suites(name, opts)) {
        seconds += r.seconds;
        reports.push_back(std::move(r));
      }
    }
    bool ok = seconds < c.max_seconds;
    std::string measured;
    for (const Check& check : c.checks) {
      const PropertyResult* r = find(reports, check.property);
      char buf[160];
      if (!r) {
        ok = false;
        std::snprintf(buf, sizeof buf, " [%s: missing]", check.property.c_str());
      } else {
        const bool hit = r->cases >= check.min_cases && r->worst <= check.limit;
        ok = ok && hit;
        std::snprintf(buf, sizeof buf, " [%s worst=%.3e limit=%.3e cases=%ld]", check.property.c_str(), r->worst,
                      check.limit, r->cases);
      }
      measured += buf;
    }
    if (!ok) ++failures;
    std::printf("criterion %2d: %s  %s (%.2fs)%s\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(), seconds,
                measured.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
