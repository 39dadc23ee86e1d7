#include "qdunkl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "qdunkl/verify.hpp"

namespace qdunkl {
namespace {

/// Bad arity, unknown names and inconsistent flags.
struct UsageError {
  std::string message;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(cplx z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return fmt(z.real()) + (std::signbit(z.imag()) ? " - " : " + ") + fmt(std::abs(z.imag())) + "i";
}

struct QFlags {
  std::optional<int> k;
  std::optional<double> q;

  void add(CLI::App* app) {
    app->add_option("--k", k, "admissibility index: q^{2k} + q = 1 (default 1)");
    app->add_option("--q", q, "generic q in (0,1) instead of an admissible one");
  }
  QParameter make() const {
    if (k && q) throw UsageError{"--k and --q are exclusive"};
    if (q) return QParameter(*q);
    return admissible_q(k.value_or(1));
  }
};

// ------------------------------------------------------------ eval

struct EvalArgs {
  std::string name;
  std::vector<double> values;
  std::optional<double> alpha, x, lambda, t;
  bool q2 = false;
  QFlags qf;
};

/// The argument as a complex number: one or two positional values, or --x.
cplx complex_arg(const EvalArgs& a, bool allow_complex) {
  if (a.x && !a.values.empty()) throw UsageError{a.name + ": give the argument either positionally or by --x"};
  if (a.x) return *a.x;
  if (a.values.size() == 1) return a.values[0];
  if (a.values.size() == 2 && allow_complex) return {a.values[0], a.values[1]};
  throw UsageError{a.name + " takes " + (allow_complex ? "one argument (real, or re im)" : "one real argument")};
}

double required(const std::optional<double>& v, const EvalArgs& a, const char* flag) {
  if (!v) throw UsageError{a.name + " needs " + flag};
  return *v;
}

void no_positionals(const EvalArgs& a) {
  if (!a.values.empty()) throw UsageError{a.name + " takes no positional arguments"};
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const QParameter qp = a.qf.make();
  const std::string& n = a.name;
  if (n == "qgamma") {
    const cplx x = complex_arg(a, false);
    const double base = a.q2 ? qp.q2() : qp.q();
    const double v = q_gamma(x.real(), base);
    const ProductResult p = q_pochhammer_inf_detailed(std::pow(base, x.real()), base);
    out << "qgamma(" << fmt(x.real()) << "; " << (a.q2 ? "q^2" : "q") << ") = " << fmt(v) << "\n";
    out << "truncation_error = " << fmt(std::abs(v) * p.tail) << "\n";
  } else if (n == "qcos" || n == "qsin" || n == "qexp") {
    const TrigKind kind = n == "qcos" ? TrigKind::cos : n == "qsin" ? TrigKind::sin : TrigKind::exp;
    const cplx z = complex_arg(a, true);
    const SeriesResult r = q_trig_detailed(kind, z, qp);
    out << n.substr(1) << "(" << fmt(z) << "; q^2) = " << fmt(r.value) << "\n";
    out << "truncation_error = " << fmt(r.error) << "\n";
  } else if (n == "jalpha") {
    const AlphaParam al(required(a.alpha, a, "--alpha"), qp);
    const cplx x = complex_arg(a, true);
    const SeriesResult r = j_alpha(al, x);
    out << "j_alpha(" << fmt(x) << "; q^2) = " << fmt(r.value) << "\n";
    out << "truncation_error = " << fmt(r.error) << "\n";
    if (al.alpha() == -0.5) out << "cos(x; q^2) = " << fmt(q_trig(TrigKind::cos, x, qp)) << "\n";
    if (al.alpha() == 0.5 && x != 0.0) out << "sin(x; q^2) / x = " << fmt(q_trig(TrigKind::sin, x, qp) / x) << "\n";
  } else if (n == "psi") {
    no_positionals(a);
    const AlphaParam al(required(a.alpha, a, "--alpha"), qp);
    const double lam = required(a.lambda, a, "--lambda"), x = required(a.x, a, "--x");
    const double z = lam * x;
    const SeriesResult j0 = bessel_series(al.alpha(), z, qp), j1 = bessel_series(al.alpha() + 1.0, z, qp);
    const cplx f = cplx(0.0, z / al.bracket2());
    out << "psi(" << fmt(x) << ") = " << fmt(j0.value + f * j1.value) << "\n";
    out << "truncation_error = " << fmt(j0.error + std::abs(f) * j1.error) << "\n";
    if (al.alpha() == -0.5) out << "e(i lambda x; q^2) = " << fmt(q_trig(TrigKind::exp, cplx(0.0, z), qp)) << "\n";
  } else if (n == "W") {
    no_positionals(a);
    const AlphaParam al(required(a.alpha, a, "--alpha"), qp);
    al.require_strict("Mehler weight");
    const double t = required(a.t, a, "--t");
    const double t2 = t * t, b = qp.q2();
    const ProductResult num = q_pochhammer_inf_detailed(t2 * b, b);
    const ProductResult den = q_pochhammer_inf_detailed(t2 * std::pow(qp.q(), 2.0 * al.alpha() + 1.0), b);
    const double v = (num.value / den.value).real();
    out << "W(" << fmt(t) << "; q^2) = " << fmt(v) << "\n";
    out << "truncation_error = " << fmt(std::abs(v) * (num.tail + den.tail)) << "\n";
  } else if (n == "constants") {
    no_positionals(a);
    out << "q = " << fmt(qp.q()) << "\n";
    out << "k = " << (qp.k() ? std::to_string(*qp.k()) : std::string("none")) << "\n";
    out << "(q;q)_inf = " << fmt(qp.qq_inf()) << "\n";
    out << "K = " << fmt(qp.K()) << "\n";
    const QGrid g = QGrid::standard(qp);
    out << "window = [" << g.n_lo() << ", " << g.n_hi() << "]\n";
    if (a.alpha) {
      const AlphaParam al(*a.alpha, qp);
      out << "alpha = " << fmt(al.alpha()) << "\n";
      out << "c = " << fmt(al.c()) << "\n";
      if (al.strict()) {
        out << "C = " << fmt(al.C()) << "\n";
        out << "M = " << fmt(al.M()) << "\n";
      }
      out << "[2 alpha + 1]_q = " << fmt(al.bracket1()) << "\n";
      out << "[2 alpha + 2]_q = " << fmt(al.bracket2()) << "\n";
    }
  } else {
    throw UsageError{"unknown function '" + n + "'"};
  }
  return kExitOk;
}

// ------------------------------------------------------------ transform

struct TransformArgs {
  std::string kind, in, out;
  std::optional<double> alpha;
  std::optional<int> k;
  std::string route = "direct";
  bool negate = false, force = false;
};

const std::vector<std::string> kTransformKinds = {"dunkl", "dunkl-inverse", "bessel", "rubin", "V",
                                                  "tV", "V-inverse", "tV-inverse", "R", "tR"};

int cmd_transform(const TransformArgs& t, std::ostream& out) {
  const GridFunction f = load_grid_function(t.in);
  const QGrid& g = f.grid();
  if (t.k) {
    const QParameter expect = admissible_q(*t.k);
    if (std::abs(expect.q() - g.q()) > 1e-14)
      throw UsageError{"q = " + fmt(g.q()) + " in " + t.in + " does not match --k " + std::to_string(*t.k)};
  }
  if (t.kind != "rubin" && !t.alpha) throw UsageError{t.kind + " needs --alpha"};
  const AlphaParam a(t.alpha.value_or(-0.5), g.qp());
  const Route route = t.route == "decomposed" ? Route::decomposed : Route::direct;
  TailPolicy policy;
  policy.force = t.force;

  // Weight power of the integral tail: |x|^{power} f(x) d_qx.
  std::optional<double> power;
  if (t.kind == "rubin") power = 0.0;
  if (t.kind == "dunkl" || t.kind == "dunkl-inverse" || t.kind == "bessel") power = 2.0 * a.alpha() + 1.0;
  if (t.kind == "tV" || t.kind == "tV-inverse" || t.kind == "tR") power = 2.0 * a.alpha();
  if (power) {
    const TailReport tr = weighted_tail(f, *power);
    out << "tail estimate = " << fmt(tr.estimate) << " (relative " << fmt(tr.scale > 0.0 ? tr.estimate / tr.scale : 0.0)
        << ")\n";
  } else {
    out << "tail estimate = n/a\n";
  }

  GridFunction r(g);
  if (t.kind == "dunkl") r = dunkl_transform(a, f, Direction::forward, std::nullopt, policy);
  else if (t.kind == "dunkl-inverse") r = dunkl_transform(a, f, Direction::inverse, std::nullopt, policy);
  else if (t.kind == "bessel") r = bessel_transform(a, f, std::nullopt, policy);
  else if (t.kind == "rubin") r = rubin_transform(f, std::nullopt, policy);
  else if (t.kind == "V") r = intertwiner_V(a, f, route);
  else if (t.kind == "V-inverse") r = intertwiner_V_inverse(a, f, route);
  else if (t.kind == "tV") r = transpose_tV(a, f, route, policy);
  else if (t.kind == "tV-inverse") r = transpose_tV_inverse(a, f, route, policy);
  else if (t.kind == "R") r = riemann_liouville(a, f);
  else if (t.kind == "tR") r = weyl_transpose(a, f, policy);
  if (t.negate) r = r.reflected();
  save_grid_function(t.out, r);
  out << "wrote " << t.out << " on [" << r.grid().n_lo() << ", " << r.grid().n_hi() << "]\n";
  return kExitOk;
}

// ------------------------------------------------------------ verify

struct VerifyArgs {
  VerifyConfig config;
  std::string window, report, format = "json";
  bool list = false;
};

std::pair<int, int> parse_window(const std::string& s) {
  const auto sep = s.find_first_of(":,");
  try {
    if (sep == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    const int lo = std::stoi(s.substr(0, sep), &used);
    if (used != sep) throw std::invalid_argument(s);
    const std::string rest = s.substr(sep + 1);
    const int hi = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError{"--window expects LO:HI, got '" + s + "'"};
  }
}

int cmd_verify(VerifyArgs v, std::ostream& out, std::ostream& err) {
  if (v.list) {
    for (const IdentitySpec& s : identity_registry())
      out << s.id << "  criterion " << s.criterion << "  tol " << fmt(s.tolerance) << (s.per_alpha ? "  per alpha" : "")
          << (s.strict_only ? "  strict" : "") << "  " << s.anchor << "\n";
    return kExitOk;
  }
  if (!v.window.empty()) v.config.window = parse_window(v.window);
  const VerificationReport report = run_verification(v.config);
  const std::string text = v.format == "csv" ? report_csv(report) : report_json(report);
  std::ostream& summary = v.report.empty() ? err : out;
  if (v.report.empty()) {
    out << text;
  } else {
    std::ofstream os(v.report, std::ios::binary);
    os << text;
    if (!os) throw UsageError{"cannot write report " + v.report};
  }
  summary << report.entries.size() << " checks, " << report.failures() << " failed\n";
  for (const ReportEntry& e : report.entries) {
    if (e.pass) continue;
    summary << "FAIL " << e.identity_id;
    if (e.alpha) summary << " alpha=" << fmt(*e.alpha);
    if (e.residual) summary << " residual=" << fmt(*e.residual) << " tolerance=" << fmt(e.tolerance);
    if (!e.error.empty()) summary << " error: " << e.error;
    summary << "\n";
  }
  return report.all_pass() ? kExitOk : kExitFailure;
}

}  // namespace

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::tail_not_converged:
    case ErrorCode::not_compact:
    case ErrorCode::non_convergence:
    case ErrorCode::pole:
      return kExitNumeric;
    default:
      return kExitUsage;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"q-Dunkl harmonic analysis on the q-lattice", "qdunkl"};
  app.require_subcommand(1);

  EvalArgs ev;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a special function or constant");
  eval->add_option("name", ev.name, "jalpha, psi, qcos, qsin, qexp, qgamma, W or constants")->required();
  eval->add_option("values", ev.values, "argument (re [im])");
  eval->add_option("--alpha", ev.alpha, "Dunkl index alpha >= -1/2");
  eval->add_option("--x", ev.x, "real argument");
  eval->add_option("--lambda", ev.lambda, "spectral parameter of psi");
  eval->add_option("--t", ev.t, "argument of the Mehler weight W");
  eval->add_flag("--q2", ev.q2, "qgamma in base q^2");
  ev.qf.add(eval);

  TransformArgs tr;
  CLI::App* transform = app.add_subcommand("transform", "apply a transform to a lattice-function file");
  transform->add_option("kind", tr.kind, "dunkl, dunkl-inverse, bessel, rubin, V, tV, V-inverse, tV-inverse, R, tR")
      ->required()
      ->check(CLI::IsMember(kTransformKinds));
  transform->add_option("input", tr.in, "input file")->required();
  transform->add_option("output", tr.out, "output file")->required();
  transform->add_option("--alpha", tr.alpha, "Dunkl index alpha >= -1/2");
  transform->add_option("--k", tr.k, "require the file's q to be admissible_q(k)");
  transform->add_option("--route", tr.route, "direct or decomposed (V, tV and inverses)")
      ->check(CLI::IsMember({"direct", "decomposed"}));
  transform->add_flag("--negate", tr.negate, "evaluate the output at -x");
  transform->add_flag("--force", tr.force, "proceed when tails have not converged");

  VerifyArgs vf;
  CLI::App* verify = app.add_subcommand("verify", "run the identity suite and write a report");
  verify->add_option("--k", vf.config.k, "admissibility index")->capture_default_str();
  verify->add_option("--alpha-list", vf.config.alphas, "comma-separated alphas")->delimiter(',')->capture_default_str();
  verify->add_option("--window", vf.window, "exponent window LO:HI (default: standard)");
  verify->add_option("--tol", vf.config.tol, "replace every tolerance");
  verify->add_option("--report", vf.report, "report path (default: stdout)");
  verify->add_option("--seed", vf.config.seed, "corpus seed")->capture_default_str();
  verify->add_option("--format", vf.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  verify->add_flag("--timings", vf.config.timings, "record runtime_ms (reports are then not reproducible)");
  verify->add_option("--threads", vf.config.threads, "worker threads (0: hardware)");
  verify->add_option("--only", vf.config.only, "run only these identity ids")->delimiter(',');
  verify->add_flag("--list", vf.list, "print the identity registry");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* used = app.get_subcommands().front();
  try {
    if (used == eval) return cmd_eval(ev, out);
    if (used == transform) return cmd_transform(tr, out);
    return cmd_verify(vf, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n\n" << used->help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace qdunkl
