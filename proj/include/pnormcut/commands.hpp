#ifndef PNORMCUT_COMMANDS_HPP
#define PNORMCUT_COMMANDS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pnormcut/matrix.hpp"
#include "pnormcut/norms.hpp"
#include "pnormcut/verify.hpp"

namespace pnormcut {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// `record` holds everything that must be reproducible (command echo, input
/// digests, results, per-property outcomes); wall-clock data lives in
/// `timings` so two runs with the same seed give byte-identical records.
struct RunReport {
  nlohmann::ordered_json record;
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  int exit_code = kExitOk;
};

/// Flags shared by the subcommands; strings are parsed exactly.
struct CommonOptions {
  std::string p = "3";
  std::optional<std::string> alpha;
  std::optional<unsigned> bits;
  AscentConfig ascent;
  int limit_enum = kDefaultEnumerationLimit;
};

struct BuildOptions {
  std::string graph_path;
  std::string out_path;
  std::string construction = "z";
  std::optional<std::string> k;  ///< repeat count for zdoublestar
  bool rational = false;         ///< write num/den tokens instead of decimals
  bool pad = false;
};

/// The sidecar is written next to the matrix as out_path + ".json".
RunReport cmd_build(const BuildOptions& build, const CommonOptions& common);

/// mode: inftyp-exact, pnorm-ascent or pnorm-signsearch. A graph input is
/// replaced by its incidence matrix.
RunReport cmd_solve(const std::string& input_path, bool graph_input, const std::string& mode,
                    const CommonOptions& common);

/// method: oracle or pnorm. For p in (1, 2) the pnorm method runs on the
/// conjugate exponent, since ||Z^T||_p = ||Z||_{p'}.
RunReport cmd_maxcut(const std::string& graph_path, const std::string& method, const CommonOptions& common);

RunReport cmd_verify(const std::string& suite, const VerifyOptions& opts);

/// The p-norm schedule needs n (and p > 2); the infinity,p schedule needs
/// delta. With neither given, delta defaults to 1.
RunReport cmd_epsilons(std::optional<int> n, const std::string& p, std::optional<std::string> delta,
                       std::optional<unsigned> bits);

/// Full command line (args[0] is the program name). Prints the report as
/// text, or as JSON with --json, and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pnormcut

#endif  // PNORMCUT_COMMANDS_HPP
