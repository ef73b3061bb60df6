// Command-line front end: Matrix Market in, factor files and JSON reports out.
//
// Exit codes: 0 success/exact/pass, 1 usage, 2 I/O or parse, 3 infeasible
// (including degenerate B and special-case precondition failures), 4
// verification or exactness failure, 5 numerical failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csvd/conditional.hpp"
#include "csvd/generate.hpp"
#include "csvd/matrix.hpp"
#include "csvd/matrix_market.hpp"
#include "csvd/version.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace csvd;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitCheckFailed = 4;
constexpr int kExitNumerical = 5;

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

json vector_json(const RealVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json base_report(const std::vector<std::string>& argv_echo) {
  json rep;
  rep["schema"] = 1;
  rep["version"] = kVersion;
  std::string cmd;
  for (size_t i = 0; i < argv_echo.size(); ++i) {
    if (i > 0) cmd += " ";
    cmd += argv_echo[i];
  }
  rep["command"] = cmd;
  rep["inputs"] = json::array();
  return rep;
}

void add_input(json& rep, const std::string& path, const ComplexDense& a) {
  rep["inputs"].push_back(
      {{"path", path}, {"rows", a.rows()}, {"cols", a.cols()}});
}

void write_report(const std::string& path, const json& rep) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open report file '" + path + "' for writing");
  }
  out << rep.dump(2) << "\n";
}

ComplexDense load(const std::string& path, json& rep) {
  ComplexDense a = read_matrix(path);
  add_input(rep, path, a);
  return a;
}

// Runs a subcommand body, mapping library errors onto exit codes and
// recording the outcome in the report. invalid_input_code lets commands with
// domain preconditions (special) report 3 while operand mixups stay usage
// errors.
int run_guarded(json& rep, const std::string& report_path,
                int invalid_input_code, const Clock& clock,
                const std::function<int()>& body) {
  int code = kExitOk;
  std::string error;
  try {
    code = body();
  } catch (const ParseError& e) {
    error = e.what();
    code = kExitIo;
  } catch (const IoError& e) {
    error = e.what();
    code = kExitIo;
  } catch (const InfeasibleError& e) {
    error = e.what();
    code = kExitInfeasible;
  } catch (const SingularBError& e) {
    error = e.what();
    code = kExitInfeasible;
  } catch (const NotDecomposableError& e) {
    error = e.what();
    code = kExitCheckFailed;
  } catch (const ConvergenceError& e) {
    error = e.what();
    code = kExitNumerical;
  } catch (const InvalidInputError& e) {
    error = e.what();
    code = invalid_input_code;
  } catch (const Error& e) {
    error = e.what();
    code = kExitNumerical;
  }
  if (!error.empty()) {
    std::cerr << "error: " << error << "\n";
    rep["error"] = error;
  }
  rep["exit_code"] = code;
  rep["timing_ms"] = clock.elapsed_ms();
  if (!report_path.empty()) {
    try {
      write_report(report_path, rep);
    } catch (const IoError& e) {
      std::cerr << "error: " << e.what() << "\n";
      if (code == kExitOk) code = kExitIo;
    }
  }
  return code;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void report_feasibility(json& rep, const FeasibilityReport& fr) {
  rep["case"] = case_name(fr.condition);
  rep["p"] = fr.p;
  rep["dims"] = {fr.dims[0], fr.dims[1], fr.dims[2], fr.dims[3]};
  rep["sigma_b_min"] = fr.sigma_b_min;
  rep["violations"] = fr.violations;
}

int cmd_svd(const std::string& a_path, const std::string& prefix,
            const std::string& report_path,
            const std::vector<std::string>& argv_echo) {
  Clock clock;
  json rep = base_report(argv_echo);
  return run_guarded(rep, report_path, kExitUsage, clock, [&]() {
    const ComplexDense a = load(a_path, rep);
    const SvdFactors f = full_svd(a);
    write_matrix(prefix + ".U.mtx", f.u);
    write_matrix(prefix + ".S.mtx", embed(f.sigma));
    write_matrix(prefix + ".V.mtx", f.v);
    const double residual = (a - reconstruct(f)).norm();
    const double rel = residual / std::max(1.0, a.norm());
    rep["sigma"] = vector_json(f.sigma.diag);
    rep["residual_abs"] = residual;
    rep["residual_rel"] = rel;
    rep["outputs"] = {prefix + ".U.mtx", prefix + ".S.mtx", prefix + ".V.mtx"};
    std::cout << "svd: " << a.rows() << "x" << a.cols()
              << ", sigma_max = " << fmt(f.sigma.diag[0])
              << ", reconstruction residual = " << fmt(residual) << "\n";
    return kExitOk;
  });
}

int cmd_check(const std::string& a_path, const std::string& b_path,
              double zero_tol, const std::string& report_path,
              const std::vector<std::string>& argv_echo) {
  Clock clock;
  json rep = base_report(argv_echo);
  return run_guarded(rep, report_path, kExitUsage, clock, [&]() {
    const ComplexDense a = load(a_path, rep);
    const ComplexDense b = load(b_path, rep);
    const SvdFactors fb = full_svd(b);
    const FeasibilityReport fr = check_conditions(
        a.rows(), a.cols(), b.rows(), b.cols(), fb.sigma.diag, zero_tol);
    report_feasibility(rep, fr);
    if (fr.condition == Case::kInfeasible) {
      std::cout << "check: infeasible\n";
      for (const std::string& v : fr.violations) {
        std::cout << "  violation: " << v << "\n";
      }
      return kExitInfeasible;
    }
    std::cout << "check: feasible under " << case_name(fr.condition)
              << ", p = " << fr.p << "\n";
    return kExitOk;
  });
}

int cmd_decompose(const std::string& a_path, const std::string& b_path,
                  const std::string& prefix, const DecomposeOptions& opts,
                  const std::string& report_path,
                  const std::vector<std::string>& argv_echo) {
  Clock clock;
  json rep = base_report(argv_echo);
  return run_guarded(rep, report_path, kExitUsage, clock, [&]() {
    const ComplexDense a = load(a_path, rep);
    const ComplexDense b = load(b_path, rep);
    const ConditionalFactors cf = conditional_svd(a, b, opts);
    write_matrix(prefix + ".H.mtx", cf.h);
    write_matrix(prefix + ".M.mtx", cf.m);
    const VerifyReport vr = verify_factors(a, b, cf.h, cf.m, opts.exact_tol);
    report_feasibility(rep, cf.report);
    rep["d"] = vector_json(cf.scaling.d);
    rep["residual_abs"] = cf.residual_abs;
    rep["residual_rel"] = cf.residual_rel;
    rep["exact"] = cf.exact;
    rep["hh_hermitian"] = vr.hh_hermitian;
    rep["mm_hermitian"] = vr.mm_hermitian;
    rep["outputs"] = {prefix + ".H.mtx", prefix + ".M.mtx"};
    std::cout << "decompose: " << case_name(cf.report.condition)
              << ", p = " << cf.report.p
              << ", residual_abs = " << fmt(cf.residual_abs)
              << ", residual_rel = " << fmt(cf.residual_rel)
              << ", exact = " << (cf.exact ? "yes" : "no") << "\n";
    return cf.exact ? kExitOk : kExitCheckFailed;
  });
}

int cmd_special(const std::string& a_path, const std::string& b_path,
                const std::string& prefix, const DecomposeOptions& opts,
                const std::string& report_path,
                const std::vector<std::string>& argv_echo) {
  Clock clock;
  json rep = base_report(argv_echo);
  // Precondition failures (non-Hermitian, non-PSD, mismatched dims) mean the
  // special-case factorization does not exist: infeasible.
  return run_guarded(rep, report_path, kExitInfeasible, clock, [&]() {
    const ComplexDense a = load(a_path, rep);
    const ComplexDense b = load(b_path, rep);
    const SpecialFactors sf = special_case(a, b, opts);
    write_matrix(prefix + ".H.mtx", sf.h);
    rep["residual_abs"] = sf.residual_abs;
    rep["residual_rel"] = sf.residual_rel;
    rep["exact"] = sf.exact;
    rep["outputs"] = {prefix + ".H.mtx"};
    std::cout << "special: residual_abs = " << fmt(sf.residual_abs)
              << ", residual_rel = " << fmt(sf.residual_rel)
              << ", exact = " << (sf.exact ? "yes" : "no") << "\n";
    return sf.exact ? kExitOk : kExitCheckFailed;
  });
}

int cmd_verify(const std::string& a_path, const std::string& b_path,
               const std::string& h_path, const std::string& m_path,
               double tol, const std::string& report_path,
               const std::vector<std::string>& argv_echo) {
  Clock clock;
  json rep = base_report(argv_echo);
  return run_guarded(rep, report_path, kExitUsage, clock, [&]() {
    const ComplexDense a = load(a_path, rep);
    const ComplexDense b = load(b_path, rep);
    const ComplexDense h = load(h_path, rep);
    const ComplexDense m = load(m_path, rep);
    const VerifyReport vr = verify_factors(a, b, h, m, tol);
    rep["residual_abs"] = vr.residual_abs;
    rep["residual_rel"] = vr.residual_rel;
    rep["hh_hermitian"] = vr.hh_hermitian;
    rep["mm_hermitian"] = vr.mm_hermitian;
    rep["pass"] = vr.pass;
    rep["tol"] = tol;
    std::cout << "verify: residual_abs = " << fmt(vr.residual_abs)
              << ", residual_rel = " << fmt(vr.residual_rel) << ", HH* "
              << (vr.hh_hermitian ? "hermitian" : "NOT hermitian") << ", MM* "
              << (vr.mm_hermitian ? "hermitian" : "NOT hermitian") << ", "
              << (vr.pass ? "pass" : "FAIL") << "\n";
    return vr.pass ? kExitOk : kExitCheckFailed;
  });
}

struct GenerateArgs {
  std::vector<Index> dims;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<double> tail;
  std::vector<double> spectrum_b;
  std::vector<double> spectrum_b_range;
  std::vector<double> d_values;
  std::vector<double> d_range;
  std::string config_path;
  std::string prefix;
};

RealVector to_vector(const std::vector<double>& v) {
  RealVector out(static_cast<Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[static_cast<Index>(i)] = v[i];
  return out;
}

GenSpec resolve_genspec(const GenerateArgs& args) {
  GenSpec spec;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) {
      throw IoError("cannot open config '" + args.config_path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    spec = parse_genspec(buffer.str());
  }
  if (!args.dims.empty()) {
    if (args.dims.size() != 4) {
      throw InvalidInputError("generate: --dims needs m,n,k,l");
    }
    spec.m = args.dims[0];
    spec.n = args.dims[1];
    spec.k = args.dims[2];
    spec.l = args.dims[3];
  }
  if (args.seed_set) spec.seed = args.seed;
  if (!args.tail.empty()) spec.tail = to_vector(args.tail);
  if (!args.spectrum_b.empty()) spec.spectrum_b.values = to_vector(args.spectrum_b);
  if (!args.spectrum_b_range.empty()) {
    if (args.spectrum_b_range.size() != 2) {
      throw InvalidInputError("generate: --spectrum-b-range needs lo,hi");
    }
    spec.spectrum_b.lo = args.spectrum_b_range[0];
    spec.spectrum_b.hi = args.spectrum_b_range[1];
  }
  if (!args.d_values.empty()) spec.d_spec.values = to_vector(args.d_values);
  if (!args.d_range.empty()) {
    if (args.d_range.size() != 2) {
      throw InvalidInputError("generate: --d-range needs lo,hi");
    }
    spec.d_spec.lo = args.d_range[0];
    spec.d_spec.hi = args.d_range[1];
  }
  if (spec.m < 1 || spec.n < 1 || spec.k < 1 || spec.l < 1) {
    throw InvalidInputError("generate: dims not given (use --dims or a config)");
  }
  return spec;
}

int cmd_generate(const GenerateArgs& args, const std::string& report_path,
                 const std::vector<std::string>& argv_echo) {
  Clock clock;
  json rep = base_report(argv_echo);
  return run_guarded(rep, report_path, kExitUsage, clock, [&]() {
    const GenSpec spec = resolve_genspec(args);
    const DecomposableInstance inst = random_decomposable(spec);
    write_matrix(args.prefix + ".A.mtx", inst.a);
    write_matrix(args.prefix + ".B.mtx", inst.b);
    rep["seed"] = spec.seed;
    rep["dims"] = {spec.m, spec.n, spec.k, spec.l};
    rep["case"] = case_name(inst.certificate.condition);
    rep["d"] = vector_json(inst.certificate.d);
    rep["sigma_a"] = vector_json(inst.certificate.sigma_a);
    rep["sigma_b"] = vector_json(inst.certificate.sigma_b);
    rep["certificate_residual"] = inst.certificate.residual;
    rep["outputs"] = {args.prefix + ".A.mtx", args.prefix + ".B.mtx"};
    std::cout << "generate: (" << spec.m << "," << spec.n << "," << spec.k
              << "," << spec.l << ") seed " << spec.seed
              << ", planted residual = " << fmt(inst.certificate.residual)
              << "\n";
    return kExitOk;
  });
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> argv_echo(argv, argv + argc);

  CLI::App app{"conditional singular value decomposition toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();  // app-level --report may follow the subcommand

  std::string report_path;
  app.add_option("--report", report_path,
                 "write the run report as JSON to this path")
      ->configurable(false);

  // svd
  auto* svd_cmd = app.add_subcommand("svd", "full SVD of one matrix");
  std::string svd_a, svd_prefix;
  svd_cmd->add_option("A", svd_a, "input matrix file")->required();
  svd_cmd->add_option("--out-prefix", svd_prefix, "prefix for U/S/V files")
      ->required();

  // check
  auto* check_cmd =
      app.add_subcommand("check", "feasibility of the conditional decomposition");
  std::string check_a, check_b;
  double check_zero_tol = 1e-12;
  check_cmd->add_option("A", check_a)->required();
  check_cmd->add_option("B", check_b)->required();
  check_cmd->add_option("--zero-tol", check_zero_tol,
                        "relative threshold for nonzero sigma_B");

  // decompose
  auto* dec_cmd = app.add_subcommand("decompose", "compute A = H B M*");
  std::string dec_a, dec_b, dec_prefix;
  DecomposeOptions dec_opts;
  dec_cmd->add_option("A", dec_a)->required();
  dec_cmd->add_option("B", dec_b)->required();
  dec_cmd->add_option("--out-prefix", dec_prefix)->required();
  dec_cmd->add_flag("--strict", dec_opts.strict,
                    "error out when no exact decomposition exists");
  dec_cmd->add_option("--zero-tol", dec_opts.zero_tol);
  dec_cmd->add_option("--exact-tol", dec_opts.exact_tol);

  // special
  auto* spec_cmd =
      app.add_subcommand("special", "square Hermitian PSD case A = H B H*");
  std::string spc_a, spc_b, spc_prefix;
  DecomposeOptions spc_opts;
  spec_cmd->add_option("A", spc_a)->required();
  spec_cmd->add_option("B", spc_b)->required();
  spec_cmd->add_option("--out-prefix", spc_prefix)->required();
  spec_cmd->add_flag("--strict", spc_opts.strict);
  spec_cmd->add_option("--zero-tol", spc_opts.zero_tol);
  spec_cmd->add_option("--exact-tol", spc_opts.exact_tol);

  // verify
  auto* ver_cmd =
      app.add_subcommand("verify", "check externally produced factors");
  std::string ver_a, ver_b, ver_h, ver_m;
  double ver_tol = 1e-8;
  ver_cmd->add_option("A", ver_a)->required();
  ver_cmd->add_option("B", ver_b)->required();
  ver_cmd->add_option("H", ver_h)->required();
  ver_cmd->add_option("M", ver_m)->required();
  ver_cmd->add_option("--tol", ver_tol, "relative residual tolerance");

  // generate
  auto* gen_cmd =
      app.add_subcommand("generate", "build a certified test instance");
  GenerateArgs genargs{};
  gen_cmd->add_option("--dims", genargs.dims, "m,n,k,l")->delimiter(',');
  gen_cmd->add_option("--seed", genargs.seed)
      ->each([&](const std::string&) { genargs.seed_set = true; });
  gen_cmd->add_option("--tail", genargs.tail, "extra sigma_A values past p")
      ->delimiter(',');
  gen_cmd->add_option("--spectrum-b", genargs.spectrum_b,
                      "explicit sigma_B values")
      ->delimiter(',');
  gen_cmd->add_option("--spectrum-b-range", genargs.spectrum_b_range,
                      "log-uniform range lo,hi for sigma_B")
      ->delimiter(',');
  gen_cmd->add_option("--d", genargs.d_values, "explicit scaling diagonal")
      ->delimiter(',');
  gen_cmd->add_option("--d-range", genargs.d_range,
                      "log-uniform range lo,hi for d")
      ->delimiter(',');
  gen_cmd->add_option("--config", genargs.config_path,
                      "key=value GenSpec file");
  gen_cmd->add_option("--out-prefix", genargs.prefix)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (svd_cmd->parsed()) {
    return cmd_svd(svd_a, svd_prefix, report_path, argv_echo);
  }
  if (check_cmd->parsed()) {
    return cmd_check(check_a, check_b, check_zero_tol, report_path, argv_echo);
  }
  if (dec_cmd->parsed()) {
    return cmd_decompose(dec_a, dec_b, dec_prefix, dec_opts, report_path,
                         argv_echo);
  }
  if (spec_cmd->parsed()) {
    return cmd_special(spc_a, spc_b, spc_prefix, spc_opts, report_path,
                       argv_echo);
  }
  if (ver_cmd->parsed()) {
    return cmd_verify(ver_a, ver_b, ver_h, ver_m, ver_tol, report_path,
                      argv_echo);
  }
  if (gen_cmd->parsed()) {
    return cmd_generate(genargs, report_path, argv_echo);
  }
  return kExitUsage;
}
