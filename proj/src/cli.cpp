#include "qbmf/cli.hpp"

#include <CLI11.hpp>

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbmf/double_integral.hpp"
#include "qbmf/format.hpp"
#include "qbmf/qbessel.hpp"
#include "qbmf/qseries.hpp"
#include "qbmf/quadrature.hpp"
#include "qbmf/types.hpp"
#include "qbmf/verify.hpp"

namespace qbmf::cli {
namespace {

using C = std::complex<double>;

enum class Selector { J, I, K, A, xi, weight };
enum class Representation { series, integral_single, integral_double };
enum class Format { human, csv };

struct Command {
  Selector selector = Selector::K;
  int kind = 2;
  double nu = 0;
  double z = 1;
  double q = 0.5;
  double eta = 0.5;
  Representation rep = Representation::series;
  DoubleForm form = DoubleForm::half_half;
  Format format = Format::human;
  std::optional<double> tol;
  int nodes_angular = 128;
  bool continuation = false;
  std::vector<double> z_range;
  int count = 0;
};

struct Evaluation {
  EvalResult<double> result;
  std::string representation;
};

SeriesPolicy series_policy(const Command& cmd) {
  SeriesPolicy p;
  if (cmd.tol) p.rel_tol = *cmd.tol;
  p.validate();
  return p;
}

Evaluation evaluate(const Command& cmd, double z) {
  const QBase<double> base(cmd.q);
  const SeriesPolicy policy = series_policy(cmd);
  const FunctionKind kind(cmd.kind);
  const BesselArgs<double> args{C(cmd.nu), C(z), base, cmd.continuation};
  if (cmd.selector != Selector::K && cmd.rep != Representation::series) {
    throw domain_error("only K has integral representations; use --rep series");
  }
  switch (cmd.selector) {
    case Selector::J:
      return {bessel_j(kind, args, policy), "series (raw argument)"};
    case Selector::I:
      return {bessel_i(kind, args, policy), "series"};
    case Selector::A: {
      EvalResult<double> r;
      r.value = a_nu(C(cmd.nu), base, policy);
      return {r, "series ratio"};
    }
    case Selector::xi: {
      const XiParams<double> params{cmd.eta, kind.delta(), base};
      return {xi(params, C(z), policy, cmd.continuation), "series"};
    }
    case Selector::weight: {
      EvalResult<double> r;
      r.value = weight_f(WeightParams<double>{C(cmd.nu), kind, base}, z);
      return {r, "product ratio"};
    }
    case Selector::K:
      break;
  }
  QuadraturePolicy qpolicy;
  switch (cmd.rep) {
    case Representation::series:
      return {bessel_k(kind, args, policy), "series"};
    case Representation::integral_single:
      return {k_integral_single(kind, C(cmd.nu), C(z), base, qpolicy, policy), "single integral"};
    case Representation::integral_double:
      // The double integral yields K at 2|w|; w = z/2 returns K at z.
      return {k_integral_double(kind, C(cmd.nu), C(z / 2), base, qpolicy, cmd.nodes_angular, cmd.form, policy),
              "double integral"};
  }
  throw domain_error("unknown representation");
}

std::string number(double x, Format f) {
  return f == Format::csv ? format_shortest(x) : format_significant(x, 12);
}

std::string warnings_text(const EvalResult<double>& r) {
  std::string s;
  for (const auto w : r.warnings) {
    if (!s.empty()) s += ",";
    s += to_string(w);
  }
  return s.empty() ? "none" : s;
}

int cmd_eval(const Command& cmd, std::ostream& out) {
  const auto ev = evaluate(cmd, cmd.z);
  const auto& r = ev.result;
  if (cmd.format == Format::csv) {
    out << "value_re,value_im,abs_err\n"
        << number(r.value.real(), cmd.format) << ',' << number(r.value.imag(), cmd.format) << ','
        << number(r.abs_err, cmd.format) << '\n';
    return kExitOk;
  }
  out << "value          " << number(r.value.real(), cmd.format) << (r.value.imag() < 0 ? " - " : " + ")
      << number(std::abs(r.value.imag()), cmd.format) << "i\n"
      << "abs_err        " << format_significant(r.abs_err, 3) << '\n'
      << "representation " << ev.representation << '\n'
      << "terms_or_nodes " << r.terms_or_nodes << '\n'
      << "warnings       " << warnings_text(r) << '\n';
  return kExitOk;
}

int cmd_table(const Command& cmd, std::ostream& out, std::ostream& err) {
  if (cmd.z_range.size() != 2 || !(cmd.z_range[0] < cmd.z_range[1]) || cmd.count < 2) {
    err << "table: need --z-range START END with START < END and --count >= 2\n";
    return kExitUsage;
  }
  const char sep = cmd.format == Format::csv ? ',' : ' ';
  out << "z" << sep << "value_re" << sep << "value_im" << sep << "abs_err\n";
  bool any_failed = false;
  for (int i = 0; i < cmd.count; ++i) {
    const double z = cmd.z_range[0] + (cmd.z_range[1] - cmd.z_range[0]) * double(i) / double(cmd.count - 1);
    out << number(z, cmd.format) << sep;
    try {
      const auto r = evaluate(cmd, z).result;
      out << number(r.value.real(), cmd.format) << sep << number(r.value.imag(), cmd.format) << sep
          << number(r.abs_err, cmd.format) << '\n';
    } catch (const error& e) {
      any_failed = true;
      out << "nan" << sep << "nan" << sep << "error\n";
      err << "z=" << number(z, cmd.format) << ": " << e.what() << '\n';
    }
  }
  return any_failed ? kExitNumeric : kExitOk;
}

int cmd_verify(const std::string& suite, const verify::VerifyOptions& options, std::ostream& out) {
  const auto report = verify::run_suite(suite, options);
  verify::print_report(report, out);
  return report.all_pass() ? kExitOk : kExitCheckFailure;
}

void add_function_options(CLI::App* app, Command& cmd) {
  static const std::map<std::string, Selector> selectors{{"J", Selector::J},   {"I", Selector::I},
                                                         {"K", Selector::K},   {"A", Selector::A},
                                                         {"xi", Selector::xi}, {"weight", Selector::weight}};
  static const std::map<std::string, Representation> reps{{"series", Representation::series},
                                                          {"integral-single", Representation::integral_single},
                                                          {"integral-double", Representation::integral_double}};
  static const std::map<std::string, DoubleForm> forms{{"e-xi1", DoubleForm::exp_xi1},
                                                       {"half-half", DoubleForm::half_half}};
  static const std::map<std::string, Format> formats{{"human", Format::human}, {"csv", Format::csv}};

  app->add_option("function", cmd.selector,
                  "J (raw argument), I, K (scaled argument (1-q^2)z, base q^2), A, xi, weight")
      ->required()
      ->transform(CLI::CheckedTransformer(selectors, CLI::ignore_case));
  app->add_option("--kind", cmd.kind, "kind j (1, 2 or 3); xi uses its delta")->check(CLI::Range(1, 3));
  app->add_option("--nu", cmd.nu, "order nu");
  app->add_option("--q", cmd.q, "deformation parameter q")->required()->check(CLI::Range(0.0, 1.0));
  app->add_option("--eta", cmd.eta, "xi parameter eta");
  app->add_option("--rep", cmd.rep, "series, integral-single or integral-double (K only)")
      ->transform(CLI::CheckedTransformer(reps));
  app->add_option("--form", cmd.form, "double-integral xi pair: e-xi1 or half-half")
      ->transform(CLI::CheckedTransformer(forms));
  app->add_option("--format", cmd.format, "human or csv")->transform(CLI::CheckedTransformer(formats));
  app->add_option("--tol", cmd.tol, "series truncation tolerance")->check(CLI::PositiveNumber);
  app->add_option("--nodes", cmd.nodes_angular, "initial angular nodes for the double integral")
      ->check(CLI::Range(8, 1 << 20));
  app->add_flag("--continue", cmd.continuation, "allow kind-1 / e_q analytic continuation beyond the series radius");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"q-Bessel and q-Bessel-Macdonald functions: evaluation, tables and identity checks"};
  app.require_subcommand(1);

  Command eval_cmd;
  auto* eval = app.add_subcommand("eval", "evaluate one function at one point");
  add_function_options(eval, eval_cmd);
  eval->add_option("--z", eval_cmd.z, "argument z (s for xi and weight)");

  Command table_cmd;
  auto* table = app.add_subcommand("table", "tabulate a function over an evenly spaced z range");
  add_function_options(table, table_cmd);
  table->add_option("--z-range", table_cmd.z_range, "START END")->expected(2)->required();
  table->add_option("--count", table_cmd.count, "number of points (>= 2)")->required();

  std::string suite = "all";
  verify::VerifyOptions vopts;
  double vq = 0;
  double vtol = 0;
  auto* ver = app.add_subcommand("verify", "run identity-verification suites");
  std::vector<std::string> names = verify::suite_names();
  names.push_back("all");
  ver->add_option("suite", suite, "suite name or all")->check(CLI::IsMember(names));
  auto* q_opt = ver->add_option("--q", vq, "restrict grid suites to this q")->check(CLI::Range(0.0, 1.0));
  auto* tol_opt = ver->add_option("--tol", vtol, "override every check tolerance")->check(CLI::NonNegativeNumber);
  ver->add_option("--seed", vopts.seed, "seed for randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(eval_cmd, out);
    if (table->parsed()) return cmd_table(table_cmd, out, err);
    if (q_opt->count() > 0) {
      if (!(vq > 0.0 && vq < 1.0)) throw domain_error("--q must lie in (0, 1)");
      vopts.q = vq;
    }
    if (tol_opt->count() > 0) vopts.tol = vtol;
    return cmd_verify(suite, vopts, out);
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace qbmf::cli
