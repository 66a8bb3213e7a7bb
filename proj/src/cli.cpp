#include "vage/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "vage/analysis.hpp"
#include "vage/errors.hpp"
#include "vage/expr.hpp"
#include "vage/hermite.hpp"
#include "vage/json_io.hpp"
#include "vage/linsys.hpp"
#include "vage/series.hpp"
#include "vage/weights.hpp"

namespace vage::cli {

namespace {

constexpr unsigned kDefaultDegree = 4;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

/// "@path" reads the file, anything else is literal text.
std::string read_text(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw ParseError("cannot read file " + arg.substr(1));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

long parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || v != std::floor(v) || std::abs(v) > 9e15) throw std::invalid_argument(s);
    return static_cast<long>(v);
  } catch (const std::logic_error&) {
    throw ParseError(std::string(what) + " must be an integer, got \"" + s + "\"");
  }
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(trim(s), &used);
    if (used != trim(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(std::string(what) + " must be a number, got \"" + s + "\"");
  }
}

std::optional<TruncationSpec> parse_window(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw ParseError("--window expects K,N");
  const long k = parse_int(parts[0], "window K"), n = parse_int(parts[1], "window N");
  if (k < 1 || n < 0) throw ParseError("--window needs K >= 1 and N >= 0");
  return TruncationSpec{static_cast<Generator>(k), static_cast<std::uint32_t>(n)};
}

/// JSON object, @file, or inline expression. Expressions take the given
/// window, else K = largest generator mentioned and N = 4.
Series read_series(const std::string& arg, const std::optional<TruncationSpec>& window) {
  const std::string text = trim(read_text(arg));
  if (!text.empty() && text[0] == '{') {
    Series f = series_from_json(parse_json(text));
    if (window && !(f.window() == *window)) {
      throw DomainError("series window differs from --window");
    }
    return f;
  }
  const TruncationSpec t = window.value_or(TruncationSpec{std::max<Generator>(1, max_generator_in(text)), kDefaultDegree});
  return parse_series_expr(text, t);
}

WeightSpec read_weight(const std::string& arg) {
  const std::string text = trim(read_text(arg));
  if (!text.empty() && (text[0] == '{' || text[0] == '"')) return weight_from_json(parse_json(text));
  if (text == "schwartz") return WeightSpec::schwartz();
  if (text == "gspace") return WeightSpec::gspace();
  if (text == "kondratiev") return WeightSpec::kondratiev();
  if (text == "doubly_exponential" || text == "doubly-exponential") return WeightSpec::doubly_exponential();
  if (text.rfind("power:", 0) == 0) return WeightSpec::power(parse_double(text.substr(6), "power c"));
  if (text.rfind("custom:", 0) == 0) {
    std::vector<double> w;
    for (const auto& s : split(text.substr(7), ',')) w.push_back(parse_double(s, "custom weight"));
    return WeightSpec::custom_generators(std::move(w));
  }
  if (text.rfind("tensor(", 0) == 0 && text.back() == ')') {
    const auto parts = split(text.substr(7, text.size() - 8), ';');
    if (parts.size() != 2) throw ParseError("tensor(W1;W2) expects two weights separated by ';'");
    return WeightSpec::tensor(read_weight(parts[0]), read_weight(parts[1]));
  }
  throw ParseError("unknown weight spec \"" + text +
                   "\" (schwartz, gspace, kondratiev, doubly_exponential, power:C, custom:w1,w2,.., "
                   "tensor(W1;W2) or JSON)");
}

Realization read_realization(const std::string& arg) {
  return realization_from_json(parse_json(read_text(arg)));
}

PowerSeries read_phi(const std::string& arg) {
  const std::string s = trim(arg);
  if (s == "exp") return PowerSeries::exp();
  if (s == "sin") return PowerSeries::sin();
  if (s == "cos") return PowerSeries::cos();
  if (s == "geometric") return PowerSeries::geometric();
  if (s == "log1p") return PowerSeries::log1p();
  if (s.rfind("poly:", 0) == 0) {
    std::vector<Complex> c;
    for (const auto& t : split(s.substr(5), ',')) c.push_back(parse_complex(t));
    return PowerSeries::polynomial(std::move(c));
  }
  throw ParseError("unknown --phi \"" + s + "\" (exp, sin, cos, geometric, log1p, poly:c0,c1,..)");
}

std::vector<double> parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw ParseError("--grid expects lo:hi:step");
  const double lo = parse_double(parts[0], "grid lo"), hi = parse_double(parts[1], "grid hi"),
               step = parse_double(parts[2], "grid step");
  if (!(step > 0.0) || hi < lo) throw ParseError("--grid needs step > 0 and lo <= hi");
  std::vector<double> out;
  const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
  if (n > 1000000) throw ParseError("--grid has too many points");
  for (long i = 0; i <= n; ++i) out.push_back(lo + i * step);
  return out;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::uint64_t default_seed() {
  if (const char* s = std::getenv("VAGE_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::logic_error&) {
      throw ParseError(std::string("VAGE_SEED must be an unsigned integer, got \"") + s + "\"");
    }
  }
  return 1;
}

struct Options {
  std::string out_path;
  bool compact = false;
  // shared
  std::string spec, in, lhs, rhs, op, phi, window, real, at;
  long d = 1, K = 4, N = 6, p = 0, q = 0, terms = 200, neumann = -1, random = 0, trials = 20;
  std::string K_text;
  bool closed_form = false;
  std::optional<std::uint64_t> seed;
  double target = 0.0;
  // hermite
  std::string grid = "-2:2:0.5", s_list = "0.5", coeffs, decay, log_coeffs, degrees = "0,1,2";
  long nmax = 100000;
  double rate = 1.0, ratio = 0.5, cap = 10.0;
  std::string guard_spec;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Truncated convolution-ring computations over weighted free commutative monoids", "vage"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--out", o.out_path, "Write the result to this file instead of standard output");
  app.add_flag("--compact", o.compact, "Single-line JSON output");

  auto sub = [](CLI::App* parent, const char* name, const char* help) {
    auto* s = parent->add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto seed_opt = [&](CLI::App* s) {
    s->add_option("--seed", o.seed, "Random seed (default: $VAGE_SEED or 1)");
  };

  auto* weight = sub(&app, "weight", "Weight admissibility, regularity and Vage constants");
  weight->require_subcommand(1);
  auto* w_check = sub(weight, "check", "Admissibility, d-regularity and superexponential report");
  w_check->add_option("--spec", o.spec, "Weight spec")->required();
  w_check->add_option("--d", o.d, "Regularity exponent")->check(CLI::PositiveNumber);
  w_check->add_option("--K", o.K, "Generators probed")->check(CLI::PositiveNumber);
  w_check->add_option("--N", o.N, "Degree of the superexponential probe window")->check(CLI::NonNegativeNumber);
  auto* w_const = sub(weight, "vage-constant", "A(d) = (sum a_alpha^{-d})^{1/2}");
  w_const->add_option("--spec", o.spec, "Weight spec")->required();
  w_const->add_option("--d", o.d, "Exponent d")->check(CLI::PositiveNumber);
  w_const->add_flag("--closed-form", o.closed_form, "Infinite product (exponential weights)");
  w_const->add_option("--window", o.window, "K,N window for the partial sum (default 4,8)");
  auto* w_show = sub(weight, "show", "Print the canonical JSON of a weight spec");
  w_show->add_option("--spec", o.spec, "Weight spec")->required();

  auto* series = sub(&app, "series", "Ring operations on truncated series");
  series->require_subcommand(1);
  auto* s_op = sub(series, "op", "Binary operation");
  s_op->add_option("--lhs", o.lhs, "Left operand")->required();
  s_op->add_option("--rhs", o.rhs, "Right operand")->required();
  s_op->add_option("--op", o.op, "convolve, add or sub")->required()->check(CLI::IsMember({"convolve", "add", "sub"}));
  auto* s_inv = sub(series, "invert", "Multiplicative inverse");
  s_inv->add_option("--in", o.in, "Series")->required();
  s_inv->add_option("--neumann", o.neumann, "Use the Neumann series with this many terms")->check(CLI::NonNegativeNumber);
  auto* s_norm = sub(series, "norm", "Weighted norm ||f||_p");
  s_norm->add_option("--in", o.in, "Series")->required();
  s_norm->add_option("--spec", o.spec, "Weight spec")->required();
  s_norm->add_option("--p", o.p, "Norm index")->required();
  auto* s_comp = sub(series, "compose", "phi(f) for a scalar power series phi");
  s_comp->add_option("--phi", o.phi, "exp, sin, cos, geometric, log1p or poly:c0,c1,..")->required();
  s_comp->add_option("--in", o.in, "Series")->required();
  s_comp->add_option("--spec", o.guard_spec, "Weight for the |E[f]| < R/A(d) guard");
  s_comp->add_option("--d", o.d, "Guard exponent")->check(CLI::PositiveNumber);
  auto* s_show = sub(series, "show", "Print the canonical JSON of a series");
  s_show->add_option("--in", o.in, "Series")->required();
  for (auto* s : {s_op, s_inv, s_norm, s_comp, s_show}) {
    s->add_option("--window", o.window, "K,N window for inline expressions");
  }

  auto* analysis = sub(&app, "analysis", "Inequality experiments");
  analysis->require_subcommand(1);
  auto* a_vage = sub(analysis, "vage", "||fg||_p <= A(p-q) ||f||_q ||g||_p");
  a_vage->add_option("--spec", o.spec, "Weight spec")->required();
  a_vage->add_option("--p", o.p, "p")->required();
  a_vage->add_option("--q", o.q, "q")->required();
  a_vage->add_option("--d", o.d, "Index d (p >= q + d)")->check(CLI::PositiveNumber);
  auto* a_random = a_vage->add_option("--random", o.random, "Number of seeded random pairs")->check(CLI::PositiveNumber);
  auto* a_lhs = a_vage->add_option("--lhs", o.lhs, "f");
  auto* a_rhs = a_vage->add_option("--rhs", o.rhs, "g");
  a_lhs->needs(a_rhs);
  a_rhs->needs(a_lhs);
  a_random->excludes(a_lhs);
  a_vage->add_option("--window", o.window, "K,N window (default 4,6 for --random)");
  seed_opt(a_vage);
  auto* a_schw = sub(analysis, "schwartz-failure", "Unbounded monomial ratios for the Schwartz weight");
  a_schw->add_option("--p", o.p, "p")->required();
  a_schw->add_option("--q", o.q, "q")->required();
  a_schw->add_option("--target", o.target, "Ratio to exceed")->required();
  auto* a_zhang = sub(analysis, "zhang", "prod_{n<=K} 1/(1-(2n)^{-d})");
  a_zhang->add_option("--d", o.d, "d")->required()->check(CLI::PositiveNumber);
  a_zhang->add_option("--K", o.K_text, "Number of factors (1e6 accepted)")->required();

  auto* linsys = sub(&app, "linsys", "Realizations over the ring");
  linsys->require_subcommand(1);
  auto* l_eval = sub(linsys, "eval", "D + f C (I - fA)^{-1} B");
  l_eval->add_option("--real", o.real, "Realization JSON")->required();
  l_eval->add_option("--at", o.at, "Series f")->required();
  auto* l_comp = sub(linsys, "compose", "Realization algebra");
  l_comp->add_option("--op", o.op, "sum, product, inverse, concat-col or concat-row")
      ->required()
      ->check(CLI::IsMember({"sum", "product", "inverse", "concat-col", "concat-row"}));
  l_comp->add_option("--lhs", o.lhs, "First realization")->required();
  l_comp->add_option("--rhs", o.rhs, "Second realization (not for inverse)");
  auto* l_obs = sub(linsys, "observable", "Kalman test on expectations plus a random witness search");
  l_obs->add_option("--real", o.real, "Realization JSON")->required();
  l_obs->add_option("--trials", o.trials, "Random inputs tried")->check(CLI::NonNegativeNumber);
  seed_opt(l_obs);
  auto* l_show = sub(linsys, "show", "Print the canonical JSON of a realization");
  l_show->add_option("--real", o.real, "Realization JSON")->required();

  auto* hermite = sub(&app, "hermite", "Hermite functions");
  hermite->require_subcommand(1);
  auto* h_mehler = sub(hermite, "mehler", "CSV of Mehler series vs closed form on a grid");
  h_mehler->add_option("--grid", o.grid, "lo:hi:step, used for both u and v");
  h_mehler->add_option("--s", o.s_list, "Comma-separated values of s, |s| < 1");
  h_mehler->add_option("--terms", o.terms, "Series terms")->check(CLI::PositiveNumber);
  auto* h_sample = sub(hermite, "sample", "CSV of xi_n on a grid");
  h_sample->add_option("--n", o.degrees, "Comma-separated degrees");
  h_sample->add_option("--grid", o.grid, "lo:hi:step");
  auto* h_gp = sub(hermite, "gp-norm", "Weighted area integral vs sum |f_n|^2 2^{np}");
  h_gp->add_option("--coeffs", o.coeffs, "Comma-separated (complex) coefficients of xi_0, xi_1, ..")->required();
  h_gp->add_option("--p", o.p, "p >= 1")->required();
  auto* h_strip = sub(hermite, "strip", "Strip of convergence of sum F_n xi_n");
  h_strip->add_option("--decay", o.decay, "exp-sqrt, geometric or custom")
      ->required()
      ->check(CLI::IsMember({"exp-sqrt", "geometric", "custom"}));
  h_strip->add_option("--nmax", o.nmax, "Largest n sampled")->check(CLI::PositiveNumber);
  h_strip->add_option("--rate", o.rate, "exp-sqrt: F_n = exp(-rate sqrt(2n+1))");
  h_strip->add_option("--ratio", o.ratio, "geometric: F_n = ratio^n");
  h_strip->add_option("--log-coeffs", o.log_coeffs, "custom: log|F_n| for n = 0, 1, .. (inline list or @file)");
  h_strip->add_option("--cap", o.cap, "Estimates above this that keep growing are reported infinite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  std::ostringstream result;
  try {
    const auto window = parse_window(o.window);
    const std::uint64_t seed = o.seed ? *o.seed : default_seed();
    auto emit = [&](const Json& j) { result << dump_canonical(j, o.compact ? -1 : 2) << '\n'; };

    if (w_check->parsed()) {
      const auto w = read_weight(o.spec);
      const TruncationSpec probe{static_cast<Generator>(o.K), static_cast<std::uint32_t>(o.N)};
      const auto adm = is_admissible(w, probe);
      const auto cls = w.classification();
      Json j{{"spec", to_json(w)}, {"describe", w.describe()}, {"probe", to_json(probe)}, {"admissible", adm.ok}};
      Json viol = Json::array();
      for (const auto& v : adm.violations) viol.push_back(Json{{"generator", v.generator}, {"value", v.value}});
      j["violations"] = viol;
      const bool regular = cls.min_regular_d && unsigned(o.d) >= *cls.min_regular_d;
      Json reg{{"d", o.d}, {"regular", regular}};
      reg["min_regular_d"] = cls.min_regular_d ? Json(*cls.min_regular_d) : Json(nullptr);
      reg["partial_sum"] = adm.ok ? Json(regularity_sum(w, unsigned(o.d), probe.max_generator)) : Json(nullptr);
      j["regularity"] = reg;
      j["exponential"] = cls.exponential;
      const auto sup = check_superexponential(w, probe);
      j["superexponential"] = sup.ok;
      if (sup.witness) {
        j["witness"] = Json::array({sup.witness->first.to_string(), sup.witness->second.to_string()});
        j["witness_lhs"] = sup.lhs;
        j["witness_rhs"] = sup.rhs;
      } else {
        j["witness"] = nullptr;
      }
      j["pairs_tested"] = sup.pairs_tested;
      emit(j);
    } else if (w_const->parsed()) {
      const auto w = read_weight(o.spec);
      Json j{{"spec", to_json(w)}, {"d", o.d}};
      double v;
      if (o.closed_form) {
        v = vage_constant_closed_form(w, unsigned(o.d));
        j["mode"] = "closed_form";
      } else {
        const TruncationSpec t = window.value_or(TruncationSpec{4, 8});
        v = vage_constant_partial(w, unsigned(o.d), t);
        j["mode"] = "partial";
        j["window"] = to_json(t);
      }
      j["value"] = v;
      j["value_squared"] = v * v;
      emit(j);
    } else if (w_show->parsed()) {
      emit(to_json(read_weight(o.spec)));
    } else if (s_op->parsed()) {
      const auto f = read_series(o.lhs, window);
      const auto g = read_series(o.rhs, window ? window : std::optional(f.window()));
      emit(to_json(o.op == "convolve" ? convolve(f, g) : o.op == "add" ? f + g : f - g));
    } else if (s_inv->parsed()) {
      const auto f = read_series(o.in, window);
      emit(to_json(o.neumann >= 0 ? neumann_invert(f, unsigned(o.neumann)) : invert(f)));
    } else if (s_norm->parsed()) {
      const auto f = read_series(o.in, window);
      const auto w = read_weight(o.spec);
      emit(Json{{"spec", to_json(w)}, {"p", o.p}, {"window", to_json(f.window())}, {"norm", norm_p(f, w, int(o.p))}});
    } else if (s_comp->parsed()) {
      const auto f = read_series(o.in, window);
      std::optional<ComposeGuard> guard;
      if (!o.guard_spec.empty()) guard = ComposeGuard{read_weight(o.guard_spec), unsigned(o.d)};
      emit(to_json(compose(read_phi(o.phi), f, guard)));
    } else if (s_show->parsed()) {
      emit(to_json(read_series(o.in, window)));
    } else if (a_vage->parsed()) {
      const auto w = read_weight(o.spec);
      Json j{{"spec", to_json(w)}, {"p", o.p}, {"q", o.q}, {"d", o.d}};
      if (o.random > 0) {
        const Generator k = std::min<Generator>(4, w.max_generator().value_or(4));
        const TruncationSpec t = window.value_or(TruncationSpec{k, 6});
        const auto r = vage_random_suite(w, int(o.p), int(o.q), int(o.d), std::size_t(o.random), t, seed);
        j["window"] = to_json(t);
        j["seed"] = seed;
        j["pairs"] = r.pairs;
        j["failures"] = r.failures;
        j["all_hold"] = r.all_hold();
        j["max_ratio"] = r.max_ratio;
        j["constant"] = r.constant;
        j["closed_form"] = r.worst ? r.worst->closed_form : true;
      } else if (!o.lhs.empty()) {
        const auto f = read_series(o.lhs, window);
        const auto g = read_series(o.rhs, window ? window : std::optional(f.window()));
        const auto r = check_vage(f, g, w, int(o.p), int(o.q), int(o.d));
        j["window"] = to_json(f.window());
        j["lhs"] = r.lhs;
        j["rhs"] = r.rhs;
        j["ratio"] = r.ratio;
        j["constant"] = r.constant;
        j["closed_form"] = r.closed_form;
        j["holds"] = r.holds;
      } else {
        throw ParseError("analysis vage needs --random N or --lhs F --rhs G");
      }
      emit(j);
    } else if (a_schw->parsed()) {
      const auto r = demonstrate_schwartz_failure(int(o.p), int(o.q), o.target);
      const auto n = MultiIndex::unit(1, r.k).to_string();
      emit(Json{{"p", o.p}, {"q", o.q}, {"target", o.target}, {"k", r.k}, {"n", n}, {"m", n},
                {"ratio", r.ratio}, {"probes", r.probes}});
    } else if (a_zhang->parsed()) {
      const long k = parse_int(o.K_text, "--K");
      if (k < 0) throw ParseError("--K must be nonnegative");
      const double v = zhang_partial(unsigned(o.d), std::uint64_t(k));
      Json j{{"d", o.d}, {"K", k}, {"value", v}};
      if (o.d == 2) {
        j["target"] = "pi/2";
        j["target_value"] = std::numbers::pi / 2;
        j["abs_err"] = std::abs(v - std::numbers::pi / 2);
      } else if (o.d == 1) {
        j["diverges"] = true;
        j["sqrt_pi_K"] = std::sqrt(std::numbers::pi * double(k));
      }
      emit(j);
    } else if (l_eval->parsed()) {
      const auto r = read_realization(o.real);
      emit(Json{{"value", to_json(eval_realization(r, read_series(o.at, r.window())))}});
    } else if (l_comp->parsed()) {
      const auto r1 = read_realization(o.lhs);
      if (o.op == "inverse") {
        if (!o.rhs.empty()) throw ParseError("--op inverse takes only --lhs");
        emit(to_json(realization_inverse(r1)));
      } else {
        if (o.rhs.empty()) throw ParseError("--op " + o.op + " needs --rhs");
        const auto r2 = read_realization(o.rhs);
        const auto r = o.op == "sum"        ? realization_sum(r1, r2)
                       : o.op == "product"  ? realization_product(r1, r2)
                       : o.op == "concat-col" ? realization_concat_col(r1, r2)
                                              : realization_concat_row(r1, r2);
        emit(to_json(r));
      }
    } else if (l_obs->parsed()) {
      const auto r = read_realization(o.real);
      const auto ce = r.C.expectation(), ae = r.A.expectation();
      const auto rank = kalman_rank(ce, ae);
      Json j{{"state_dim", r.state_dim()}, {"kalman_rank", rank}, {"observable", rank == r.state_dim()}};
      const auto t = observability_witness(r, std::size_t(o.trials), seed);
      Json w{{"status", to_string(t.status)}, {"trials", t.trials}, {"found", t.found}, {"max_k", t.max_k},
             {"horizon", r.state_dim() * window_size(r.window())}, {"seed", seed}};
      if (!t.witnesses.empty() && t.witnesses[0].status == WitnessStatus::found) {
        const auto& f = t.witnesses[0];
        w["first"] = Json{{"k", f.k}, {"row", f.row}, {"alpha", to_json(f.alpha)}, {"re", f.value.real()},
                          {"im", f.value.imag()}};
      }
      j["witness"] = w;
      emit(j);
    } else if (l_show->parsed()) {
      emit(to_json(read_realization(o.real)));
    } else if (h_mehler->parsed()) {
      const auto grid = parse_grid(o.grid);
      result << "u,v,s_re,s_im,lhs_re,lhs_im,rhs_re,rhs_im,abs_err\n";
      for (const auto& st : split(o.s_list, ',')) {
        const Complex s = parse_complex(st);
        for (double u : grid) {
          for (double v : grid) {
            const auto m = mehler_check(u, v, s, unsigned(o.terms));
            result << csv_number(u) << ',' << csv_number(v) << ',' << csv_number(s.real()) << ','
                   << csv_number(s.imag()) << ',' << csv_number(m.lhs.real()) << ',' << csv_number(m.lhs.imag())
                   << ',' << csv_number(m.rhs.real()) << ',' << csv_number(m.rhs.imag()) << ','
                   << csv_number(m.abs_err) << '\n';
          }
        }
      }
    } else if (h_sample->parsed()) {
      const auto grid = parse_grid(o.grid);
      result << "n,x,xi_re,xi_im\n";
      for (const auto& ns : split(o.degrees, ',')) {
        const long n = parse_int(ns, "degree");
        if (n < 0) throw ParseError("degrees must be nonnegative");
        for (double x : grid) {
          const Complex v = hermite_fn(unsigned(n), x);
          result << n << ',' << csv_number(x) << ',' << csv_number(v.real()) << ',' << csv_number(v.imag()) << '\n';
        }
      }
    } else if (h_gp->parsed()) {
      std::vector<Complex> c;
      Json cj = Json::array();
      for (const auto& t : split(o.coeffs, ',')) {
        c.push_back(parse_complex(t));
        cj.push_back(Json::array({c.back().real(), c.back().imag()}));
      }
      const auto r = gp_integral_norm(c, int(o.p));
      emit(Json{{"p", o.p},
                {"coeffs", cj},
                {"integral", r.integral},
                {"coefficient_norm", r.coefficient},
                {"rel_err", r.coefficient > 0 ? std::abs(r.integral - r.coefficient) / r.coefficient : 0.0},
                {"half_width", r.half_width},
                {"step", r.step}});
    } else if (h_strip->parsed()) {
      std::function<double(std::size_t)> lc;
      std::size_t nmax = std::size_t(o.nmax);
      std::vector<double> custom;
      Json j{{"decay", o.decay}};
      if (o.decay == "exp-sqrt") {
        const double r = o.rate;
        lc = [r](std::size_t n) { return -r * std::sqrt(2.0 * n + 1.0); };
        j["rate"] = r;
      } else if (o.decay == "geometric") {
        if (!(o.ratio > 0.0 && o.ratio < 1.0)) throw DomainError("--ratio must lie in (0, 1)");
        const double lr = std::log(o.ratio);
        lc = [lr](std::size_t n) { return lr * double(n); };
        j["ratio"] = o.ratio;
      } else {
        if (o.log_coeffs.empty()) throw ParseError("--decay custom needs --log-coeffs");
        std::string text = read_text(o.log_coeffs);
        for (char& ch : text)
          if (std::isspace(static_cast<unsigned char>(ch))) ch = ',';
        for (const auto& t : split(text, ','))
          if (!t.empty()) custom.push_back(parse_double(t, "log coefficient"));
        if (custom.size() < 9) throw DomainError("--log-coeffs needs at least 9 values");
        nmax = std::min(nmax, custom.size() - 1);
        lc = [&custom](std::size_t n) { return custom[n]; };
      }
      const auto r = strip_radius(lc, nmax, o.cap);
      j["nmax"] = nmax;
      j["tau"] = number_or_null(r.tau);
      j["infinite"] = r.infinite;
      j["window"] = Json::array({r.window_lo, r.window_hi});
      j["history"] = Json::array({r.history[0], r.history[1], r.history[2]});
      emit(j);
    }
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  }

  if (o.out_path.empty()) {
    out << result.str();
  } else {
    std::ofstream f(o.out_path);
    if (!f) {
      err << "usage error: cannot write " << o.out_path << '\n';
      return kUsage;
    }
    f << result.str();
  }
  return kOk;
}

}  // namespace vage::cli
