#include "pnormcut/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "pnormcut/gadget.hpp"
#include "pnormcut/graph.hpp"
#include "pnormcut/reduction.hpp"

namespace pnormcut {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// FNV-1a, enough to tell inputs apart in a report.
std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json input_entry(const std::string& path, const std::string& bytes) {
  return json{{"path", path}, {"fnv1a64", digest(bytes)}};
}

json ascent_echo(const CommonOptions& c) {
  return json{{"restarts", c.ascent.restarts}, {"tol", c.ascent.tol}, {"seed", c.ascent.seed},
              {"max_iters", c.ascent.max_iters}};
}

// Integers print exactly; everything else in round-trip scientific notation.
std::string scalar_text(const HPScalar& x) {
  if (x.is_finite()) {
    const BigInt r = x.round_to_integer();
    if (HPScalar(r, x.precision()) == x) return r.str();
  }
  return x.to_string();
}

json signs_json(const SignVector& s) { return s.entries(); }

json stats_json(const AscentStats& s) {
  return json{{"runs", s.runs},
              {"best_run", s.best_run},
              {"best_run_iterations", s.best_run_iterations},
              {"best_run_converged", s.best_run_converged},
              {"unconverged_runs", s.unconverged_runs},
              {"max_relative_decrease", s.max_relative_decrease}};
}

Graph load_graph(const std::string& path, json& inputs) {
  const std::string text = read_file(path);
  inputs.push_back(input_entry(path, text));
  return parse_graph(std::string_view(text));
}

ReductionInstance build_instance(const Graph& g, Construction c, const PExponent& p,
                                 const std::optional<std::string>& alpha, const std::optional<std::string>& k) {
  const std::optional<Rational> a = alpha ? std::optional<Rational>(parse_rational(*alpha)) : std::nullopt;
  switch (c) {
    case Construction::kZTilde:
      return build_ztilde(g, p);
    case Construction::kZ:
      return build_z(g, p, a);
    case Construction::kZStar:
      return build_zstar(g, p, a);
    case Construction::kZDoubleStar: {
      std::optional<BigInt> copies;
      if (k) {
        const Rational q = parse_rational(*k);
        if (denominator(q) != 1) throw std::invalid_argument("k must be an integer");
        copies = numerator(q);
      }
      return build_zdoublestar(g, p, copies);
    }
    case Construction::kPadded:
      return build_padded(g);
  }
  throw std::logic_error("unhandled construction");
}

}  // namespace

RunReport cmd_build(const BuildOptions& build, const CommonOptions& common) {
  RunReport report;
  json inputs = json::array();
  const auto start = Clock::now();
  const Graph g = load_graph(build.graph_path, inputs);
  const Construction c = parse_construction(build.construction);
  const PExponent p = PExponent::parse(common.p);
  const ReductionInstance inst = build_instance(g, c, p, common.alpha, build.k);
  if (inst.is_virtual())
    throw std::invalid_argument("zdoublestar with " + inst.rows().str() +
                                " rows cannot be written out; pass a small --k");
  ExactMatrix m = inst.dense();
  if (build.pad) m = pad_square(m);
  {
    std::ofstream out(build.out_path);
    if (!out) throw std::runtime_error("cannot write '" + build.out_path + "'");
    write_matrix(out, m, build.rational ? MatrixFormat::kRational : MatrixFormat::kDecimal);
  }

  json meta{{"construction", std::string(to_string(c))},
            {"n", g.vertex_count()},
            {"edges", g.edge_count()},
            {"p", inst.construction == Construction::kPadded ? std::string("-") : p.to_string()},
            {"alpha", scalar_text(inst.alpha)},
            {"bits", inst.bits},
            {"rows", m.rows()},
            {"cols", m.cols()},
            {"padded", build.pad},
            {"graph_fnv1a64", inputs[0]["fnv1a64"]}};
  if (c == Construction::kZDoubleStar) meta["k"] = build.k ? *build.k : std::string();
  {
    std::ofstream side(build.out_path + ".json");
    if (!side) throw std::runtime_error("cannot write '" + build.out_path + ".json'");
    side << meta.dump(2) << '\n';
  }

  report.record = json{{"command", "build"},
                       {"options", {{"construction", build.construction},
                                    {"p", common.p},
                                    {"alpha", common.alpha ? *common.alpha : std::string()},
                                    {"k", build.k ? *build.k : std::string()},
                                    {"rational", build.rational},
                                    {"pad", build.pad}}},
                       {"inputs", inputs},
                       {"results", {{"matrix", build.out_path}, {"sidecar", build.out_path + ".json"}, {"instance", meta}}}};
  report.timings["build_ms"] = ms_since(start);
  return report;
}

RunReport cmd_solve(const std::string& input_path, bool graph_input, const std::string& mode,
                    const CommonOptions& common) {
  RunReport report;
  json inputs = json::array();
  ExactMatrix m;
  if (graph_input) {
    m = incidence_matrix(load_graph(input_path, inputs));
  } else {
    const std::string text = read_file(input_path);
    inputs.push_back(input_entry(input_path, text));
    std::istringstream in(text);
    m = read_matrix(in);
  }
  const PExponent p = PExponent::parse(common.p);
  const unsigned bits = common.bits.value_or(kDoubleBits);

  const auto start = Clock::now();
  NormEstimate est;
  if (mode == "inftyp-exact") {
    est = infinity_p_norm_exact(m, p, bits, common.limit_enum);
  } else if (mode == "pnorm-signsearch") {
    est = p_norm_sign_search(m, p, bits, common.limit_enum);
  } else if (mode == "pnorm-ascent") {
    est = p_norm_ascent(m, p, common.ascent);
  } else {
    throw std::invalid_argument("unknown mode '" + mode + "'");
  }
  report.timings["solve_ms"] = ms_since(start);

  json results{{"rows", m.rows()},
               {"cols", m.cols()},
               {"p", p.to_string()},
               {"method", std::string(to_string(est.method))},
               {"value", est.value.to_string()},
               {"value_double", est.value.to_double()},
               {"certified", est.certified},
               {"witness", est.witness}};
  if (mode == "pnorm-ascent") results["ascent"] = stats_json(est.ascent);
  json options{{"mode", mode}, {"p", common.p}, {"graph_input", graph_input}};
  if (mode == "pnorm-ascent") {
    options["ascent"] = ascent_echo(common);
  } else {
    options["bits"] = bits;
    options["limit_enum"] = common.limit_enum;
  }
  report.record = json{{"command", "solve"}, {"options", options}, {"inputs", inputs}, {"results", results}};
  return report;
}

RunReport cmd_maxcut(const std::string& graph_path, const std::string& method, const CommonOptions& common) {
  RunReport report;
  json inputs = json::array();
  const Graph g = load_graph(graph_path, inputs);
  json options{{"method", method}};
  json results{{"n", g.vertex_count()}, {"edges", g.edge_count()}};
  const auto start = Clock::now();

  if (method == "oracle") {
    options["limit_enum"] = common.limit_enum;
    const CutResult cut = maxcut_bruteforce(g, common.limit_enum);
    results["maxcut"] = cut.value;
    results["witness"] = signs_json(cut.witness);
    report.timings["oracle_ms"] = ms_since(start);
  } else if (method == "pnorm") {
    if (common.bits) throw std::invalid_argument("--bits does not apply to maxcut; the decode picks its own precision");
    const PExponent requested = PExponent::parse(common.p);
    if (!(PExponent(1) < requested) || requested == PExponent(2))
      throw std::invalid_argument("maxcut via p-norms needs p in (1, 2) or p > 2");
    const bool dual = requested < PExponent(2);
    const PExponent p = dual ? conjugate(requested) : requested;
    const std::optional<Rational> alpha =
        common.alpha ? std::optional<Rational>(parse_rational(*common.alpha)) : std::nullopt;
    options["p"] = common.p;
    options["alpha"] = common.alpha ? *common.alpha : std::string();
    options["ascent"] = ascent_echo(common);
    options["limit_enum"] = common.limit_enum;

    const MaxcutSolution s = solve_maxcut_via_pnorm(g, p, alpha, common.ascent, common.limit_enum);
    results["p_requested"] = requested.to_string();
    results["p"] = p.to_string();
    results["via_conjugate"] = dual;
    results["alpha"] = scalar_text(s.alpha);
    results["bits"] = s.bits;
    results["f"] = s.f.to_string();
    results["f_sign_search"] = s.f_sign_search.to_string();
    results["f_ascent"] = s.f_ascent.to_string();
    results["f_refined"] = s.f_refined.to_string();
    results["method"] = std::string(to_string(s.method));
    results["maxcut_estimate"] = s.decode.maxcut_estimate.to_string();
    results["maxcut_rounded"] = s.decode.maxcut_rounded;
    results["additive_error_bound"] = s.decode.additive_error_bound.to_string(6);
    results["rounding_valid"] = s.decode.rounding_valid;
    if (s.decode.witness_cut) {
      results["witness"] = signs_json(s.decode.witness_cut->witness);
      results["witness_cut"] = s.decode.witness_cut->value;
    }
    results["rounding_gap"] = s.rounding_gap.to_string(6);
    results["ascent"] = stats_json(s.ascent);
    report.timings = json{{"build_ms", s.timings.build_ms},
                          {"sign_search_ms", s.timings.sign_search_ms},
                          {"ascent_ms", s.timings.ascent_ms},
                          {"refine_ms", s.timings.refine_ms},
                          {"decode_ms", s.timings.decode_ms}};
  } else {
    throw std::invalid_argument("unknown method '" + method + "'");
  }
  report.record = json{{"command", "maxcut"}, {"options", options}, {"inputs", inputs}, {"results", results}};
  return report;
}

RunReport cmd_verify(const std::string& suite, const VerifyOptions& opts) {
  RunReport report;
  const std::vector<SuiteReport> suites = run_suites(suite, opts);
  json out = json::array();
  bool ok = true;
  for (const SuiteReport& s : suites) {
    json props = json::array();
    for (const PropertyResult& r : s.properties) {
      props.push_back(json{{"name", r.name},
                           {"passed", r.passed},
                           {"cases", r.cases},
                           {"worst", r.worst},
                           {"limit", r.limit},
                           {"detail", r.detail}});
    }
    out.push_back(json{{"suite", s.suite}, {"passed", s.passed()}, {"properties", props}});
    report.timings[s.suite + "_s"] = s.seconds;
    ok = ok && s.passed();
  }
  report.record = json{{"command", "verify"},
                       {"options", {{"suite", suite}, {"seed", opts.seed}, {"max_n", opts.max_n}, {"restarts", opts.restarts}}},
                       {"inputs", json::array()},
                       {"results", {{"passed", ok}, {"suites", out}}}};
  report.exit_code = ok ? kExitOk : kExitVerificationFailed;
  return report;
}

RunReport cmd_epsilons(std::optional<int> n, const std::string& p_text, std::optional<std::string> delta,
                       std::optional<unsigned> bits) {
  RunReport report;
  const PExponent p = PExponent::parse(p_text);
  const unsigned b = bits.value_or(256);
  if (!n && !delta) delta = "1";
  json results{{"p", p.to_string()}, {"bits", b}};
  if (n) {
    results["n"] = *n;
    results["pnorm"] = required_epsilon_pnorm(*n, p, b).to_string();
  }
  if (delta) {
    results["delta"] = to_string(parse_rational(*delta));
    results["inftyp"] = required_epsilon_inftyp(p, parse_rational(*delta), b).to_string();
  }
  report.record = json{{"command", "epsilons"},
                       {"options", {{"n", n ? json(*n) : json()}, {"p", p_text}, {"delta", delta ? json(*delta) : json()}}},
                       {"inputs", json::array()},
                       {"results", results}};
  return report;
}

namespace {

void print_text(const RunReport& report, std::ostream& out) {
  const json& results = report.record["results"];
  if (report.record["command"] == "verify") {
    for (const auto& s : results["suites"]) {
      out << s["suite"].get<std::string>() << ": " << (s["passed"].get<bool>() ? "pass" : "FAIL") << '\n';
      for (const auto& r : s["properties"]) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-4s worst %11.4e  limit %10.3e  %6ld cases  ",
                      r["passed"].get<bool>() ? "ok" : "FAIL", r["worst"].get<double>(), r["limit"].get<double>(),
                      r["cases"].get<long>());
        out << line << r["name"].get<std::string>();
        if (!r["detail"].get<std::string>().empty()) out << "  [" << r["detail"].get<std::string>() << ']';
        out << '\n';
      }
    }
    return;
  }
  for (const auto& [key, value] : results.items()) {
    out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

void add_common(CLI::App* cmd, CommonOptions& c, bool ascent) {
  cmd->add_option("--p", c.p, "exponent, decimal or a/b")->capture_default_str();
  cmd->add_option("--bits", c.bits, "working precision in bits");
  cmd->add_option("--limit-enum", c.limit_enum, "largest column count to enumerate")->capture_default_str();
  if (ascent) {
    cmd->add_option("--alpha", c.alpha, "gadget weight, decimal or a/b (default 64pn^8/(p-2))");
    cmd->add_option("--restarts", c.ascent.restarts, "random ascent starts")->capture_default_str();
    cmd->add_option("--tol", c.ascent.tol, "relative stall tolerance")->capture_default_str();
    cmd->add_option("--seed", c.ascent.seed, "random seed")->capture_default_str();
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MAX-CUT through matrix p-norms: reduction matrices, norm solvers and checks"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "print the report as JSON");
  app.fallthrough();

  CommonOptions common;
  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "write a reduction matrix and its metadata sidecar");
  build_cmd->add_option("graph", build.graph_path, "edge-list graph file")->required();
  build_cmd->add_option("-o,--out", build.out_path, "matrix output file")->required();
  build_cmd->add_option("--construction", build.construction, "ztilde, z, zstar, zdoublestar or padded")
      ->capture_default_str();
  build_cmd->add_option("--k", build.k, "repeat count for zdoublestar");
  build_cmd->add_flag("--rational", build.rational, "write num/den tokens");
  build_cmd->add_flag("--pad", build.pad, "zero-pad to a square matrix");
  add_common(build_cmd, common, true);

  std::string solve_input;
  std::string mode = "inftyp-exact";
  bool graph_input = false;
  auto* solve_cmd = app.add_subcommand("solve", "estimate a matrix norm");
  solve_cmd->add_option("input", solve_input, "matrix file, or graph file with --graph")->required();
  solve_cmd->add_option("--mode", mode, "inftyp-exact, pnorm-ascent or pnorm-signsearch")->capture_default_str();
  solve_cmd->add_flag("--graph", graph_input, "input is a graph; solve on its incidence matrix");
  add_common(solve_cmd, common, true);

  std::string maxcut_input;
  std::string method = "pnorm";
  auto* maxcut_cmd = app.add_subcommand("maxcut", "maximum cut by enumeration or through a p-norm");
  maxcut_cmd->add_option("graph", maxcut_input, "edge-list graph file")->required();
  maxcut_cmd->add_option("--method", method, "oracle or pnorm")->capture_default_str();
  add_common(maxcut_cmd, common, true);

  std::string suite = "all";
  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "run an invariant suite");
  verify_cmd->add_option("suite", suite, "suite name or all")->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "random seed")->capture_default_str();
  verify_cmd->add_option("--max-n", verify.max_n, "largest graph in the incidence-norm suites")->capture_default_str();
  verify_cmd->add_option("--restarts", verify.restarts, "ascent restarts")->capture_default_str();

  std::optional<int> eps_n;
  std::optional<std::string> eps_delta;
  std::string eps_p = "3";
  std::optional<unsigned> eps_bits;
  auto* eps_cmd = app.add_subcommand("epsilons", "required relative accuracies");
  eps_cmd->add_option("--n", eps_n, "vertex count (p-norm schedule)");
  eps_cmd->add_option("--p", eps_p, "exponent")->capture_default_str();
  eps_cmd->add_option("--delta", eps_delta, "gap parameter (infinity,p schedule)");
  eps_cmd->add_option("--bits", eps_bits, "evaluation precision (default 256)");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunReport report;
  try {
    common.ascent.validate();
    if (*build_cmd) report = cmd_build(build, common);
    else if (*solve_cmd) report = cmd_solve(solve_input, graph_input, mode, common);
    else if (*maxcut_cmd) report = cmd_maxcut(maxcut_input, method, common);
    else if (*verify_cmd) report = cmd_verify(suite, verify);
    else report = cmd_epsilons(eps_n, eps_p, eps_delta, eps_bits);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (as_json) {
    json full = report.record;
    full["timings"] = report.timings;
    out << full.dump(2) << '\n';
  } else {
    print_text(report, out);
  }
  return report.exit_code;
}

}  // namespace pnormcut
