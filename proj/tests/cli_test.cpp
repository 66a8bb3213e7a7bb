#include "vage/cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "vage/errors.hpp"
#include "vage/expr.hpp"
#include "vage/json_io.hpp"

namespace vage {
namespace {

struct Result {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vage");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / ("vage_cli_test_" + name);
  std::ofstream(p) << content;
  return p.string();
}

const char* kZ = R"({"A":[[{"window":{"K":1,"N":3},"terms":[]}]],
  "B":[[{"window":{"K":1,"N":3},"terms":[{"alpha":[],"re":1,"im":0}]}]],
  "C":[[{"window":{"K":1,"N":3},"terms":[{"alpha":[],"re":1,"im":0}]}]],
  "D":[[{"window":{"K":1,"N":3},"terms":[]}]]})";

TEST(Expr, Parses) {
  const TruncationSpec t{2, 3};
  const auto x1 = monomial(MultiIndex::unit(1), 1.0, t), x2 = monomial(MultiIndex::unit(2), 1.0, t);
  EXPECT_EQ(parse_series_expr("1 - x1 + 2*x1*x2", t), Series::one(t) - x1 + 2.0 * (x1 * x2));
  EXPECT_EQ(parse_series_expr("(1+x1)^2", t), Series::one(t) + 2.0 * x1 + x1 * x1);
  EXPECT_EQ(parse_series_expr("x1^4", t), Series::zero(t));
  EXPECT_EQ(parse_series_expr("-0.5i*x2 + 1e-1", t), Complex(0.0, -0.5) * x2 + Series::constant(0.1, t));
  EXPECT_EQ(parse_series_expr("1/(1-x1)", t), invert(Series::one(t) - x1));
  EXPECT_THROW(parse_series_expr("1/x1", t), NotInvertibleError);
  EXPECT_EQ(parse_complex("1+2i"), Complex(1.0, 2.0));
  EXPECT_EQ(parse_complex("-i"), Complex(0.0, -1.0));
  EXPECT_EQ(max_generator_in("x12 + x3"), 12u);
  EXPECT_THROW(parse_series_expr("x3", t), ParseError);
  EXPECT_THROW(parse_series_expr("1 +", t), ParseError);
  EXPECT_THROW(parse_series_expr("(1", t), ParseError);
  EXPECT_THROW(parse_series_expr("x0", t), ParseError);
  EXPECT_THROW(parse_complex("x1"), ParseError);
}

TEST(Json, CanonicalRoundTrip) {
  const TruncationSpec t{3, 3};
  const auto f = parse_series_expr("0.1 - x1 + (1/3)*0 + 2.5e-7i*x1*x2^2 + 3*x3", t);
  const std::string once = dump_canonical(to_json(f));
  const auto g = series_from_json(Json::parse(once));
  EXPECT_EQ(dump_canonical(to_json(g)), once);
  EXPECT_EQ(g.max_abs_diff(f), 0.0);
  const auto w = WeightSpec::tensor(WeightSpec::power(1.0 / 3.0 + 2.0),
                                    WeightSpec::tensor(WeightSpec::custom_generators({2, 3.5}), WeightSpec::kondratiev()));
  const std::string wj = dump_canonical(to_json(w));
  EXPECT_EQ(dump_canonical(to_json(weight_from_json(Json::parse(wj)))), wj);
  EXPECT_TRUE(weight_from_json(Json::parse(wj)) == w);
  EXPECT_EQ(dump_canonical(Json{{"x", -0.0}, {"y", 0.1}}), R"({"x":0,"y":0.10000000000000001})");
  EXPECT_THROW(series_from_json(Json::parse(R"({"window":{"K":1,"N":1},"terms":[{"alpha":[[2,1]],"re":1}]})")),
               DomainError);
  EXPECT_THROW(weight_from_json(Json::parse(R"({"family":"nope"})")), DomainError);
}

TEST(Cli, Examples) {
  const auto z = cli({"analysis", "zhang", "--d", "2", "--K", "1000000"});
  ASSERT_EQ(z.code, 0) << z.err;
  EXPECT_NEAR(z.json()["value"].get<double>(), 1.570795, 1e-6);
  EXPECT_EQ(z.json()["target"], "pi/2");
  EXPECT_EQ(cli({"analysis", "zhang", "--d", "2", "--K", "1e6"}).out, z.out);

  const auto inv = cli({"series", "invert", "--in", "1-x1", "--window", "1,3"});
  ASSERT_EQ(inv.code, 0) << inv.err;
  const auto g = series_from_json(inv.json());
  EXPECT_EQ(g, parse_series_expr("1 + x1 + x1^2 + x1^3", {1, 3}));

  const auto w = cli({"weight", "check", "--spec", "schwartz", "--K", "1"});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_EQ(w.json()["admissible"], true);
  EXPECT_EQ(w.json()["superexponential"], false);
  EXPECT_EQ(w.json()["witness"], Json::array({"e1", "e1"}));
  EXPECT_EQ(cli({"weight", "check", "--spec", "kondratiev", "--d", "2", "--K", "3", "--N", "3"})
                .json()["superexponential"],
            true);
}

TEST(Cli, SeriesCommands) {
  const auto conv = cli({"--compact", "series", "op", "--lhs", "1+x1", "--rhs", "1-x1", "--op", "convolve",
                         "--window", "1,2"});
  ASSERT_EQ(conv.code, 0) << conv.err;
  EXPECT_EQ(series_from_json(conv.json()), parse_series_expr("1 - x1^2", {1, 2}));
  const auto add = cli({"series", "op", "--lhs", "x1", "--rhs", "x2", "--op", "add", "--window", "2,2"});
  EXPECT_EQ(series_from_json(add.json()), parse_series_expr("x1+x2", {2, 2}));
  const auto neu = cli({"series", "invert", "--in", "2+x1", "--neumann", "3", "--window", "1,3"});
  EXPECT_EQ(series_from_json(neu.json()), invert(parse_series_expr("2+x1", {1, 3})));
  const auto norm = cli({"series", "norm", "--in", "1+x1", "--spec", "kondratiev", "--p", "1"});
  EXPECT_NEAR(norm.json()["norm"].get<double>(), std::sqrt(1.5), 1e-15);
  const auto ex = cli({"series", "compose", "--phi", "exp", "--in", "x1", "--window", "1,3"});
  EXPECT_EQ(series_from_json(ex.json()), parse_series_expr("1 + x1 + 0.5*x1^2 + x1^3/6", {1, 3}));
  const auto guarded = cli({"series", "compose", "--phi", "geometric", "--in", "0.9+x1", "--spec", "kondratiev",
                            "--d", "2"});
  EXPECT_EQ(guarded.code, 3);
  // Windows of operands must match.
  const auto f = temp_file("f.json", cli({"series", "show", "--in", "x1", "--window", "1,2"}).out);
  EXPECT_EQ(cli({"series", "op", "--lhs", "@" + f, "--rhs", "x1", "--op", "add", "--window", "1,3"}).code, 3);
}

TEST(Cli, RoundTripsAreByteIdentical) {
  const auto first = cli({"series", "show", "--in", "0.3 - 2*x1*x2 + 0.1i*x3^2", "--window", "3,4"});
  ASSERT_EQ(first.code, 0);
  const auto path = temp_file("rt.json", first.out);
  EXPECT_EQ(cli({"series", "show", "--in", "@" + path}).out, first.out);
  const auto w = cli({"weight", "show", "--spec", "tensor(power:2.5;custom:2,3)"});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_EQ(cli({"weight", "show", "--spec", w.out}).out, w.out);
  const auto r = cli({"linsys", "compose", "--op", "product", "--lhs", kZ, "--rhs", kZ});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(cli({"linsys", "show", "--real", r.out}).out, r.out);
}

TEST(Cli, Analysis) {
  const auto v = cli({"analysis", "vage", "--spec", "kondratiev", "--p", "3", "--q", "1", "--d", "2", "--lhs", "1+x1",
                      "--rhs", "1+x1"});
  ASSERT_EQ(v.code, 0) << v.err;
  EXPECT_NEAR(v.json()["lhs"].get<double>(), 1.2311, 1e-4);
  EXPECT_EQ(v.json()["holds"], true);
  const auto r = cli({"analysis", "vage", "--spec", "gspace", "--p", "2", "--q", "1", "--random", "20", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["seed"], 7);
  EXPECT_EQ(r.json()["all_hold"], true);
  EXPECT_EQ(cli({"analysis", "vage", "--spec", "gspace", "--p", "2", "--q", "1", "--random", "20", "--seed", "7"}).out,
            r.out);
  const auto s = cli({"analysis", "schwartz-failure", "--p", "3", "--q", "1", "--target", "10"});
  ASSERT_EQ(s.code, 0);
  EXPECT_GT(s.json()["ratio"].get<double>(), 10.0);
  EXPECT_EQ(s.json()["k"], 128);
  EXPECT_EQ(cli({"analysis", "vage", "--spec", "kondratiev", "--p", "2", "--q", "1", "--random", "3"}).code, 3);
  EXPECT_EQ(cli({"analysis", "vage", "--spec", "kondratiev", "--p", "3", "--q", "1", "--d", "2"}).code, 2);
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv("VAGE_SEED", "99", 1);
  const auto r = cli({"analysis", "vage", "--spec", "gspace", "--p", "2", "--q", "1", "--random", "2"});
  ::unsetenv("VAGE_SEED");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["seed"], 99);
}

TEST(Cli, Linsys) {
  const auto e = cli({"linsys", "eval", "--real", kZ, "--at", "x1"});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(series_from_json(e.json()["value"][0][0]), parse_series_expr("x1", {1, 3}));
  const auto path = temp_file("z.json", kZ);
  const auto prod = cli({"--compact", "linsys", "compose", "--op", "product", "--lhs", "@" + path, "--rhs", "@" + path});
  const auto pp = temp_file("zz.json", prod.out);
  EXPECT_EQ(series_from_json(cli({"linsys", "eval", "--real", "@" + pp, "--at", "x1"}).json()["value"][0][0]),
            parse_series_expr("x1^2", {1, 3}));
  EXPECT_EQ(cli({"linsys", "compose", "--op", "inverse", "--lhs", kZ}).code, 3);
  EXPECT_EQ(cli({"linsys", "compose", "--op", "sum", "--lhs", kZ}).code, 2);
  const auto obs = cli({"linsys", "observable", "--real", kZ, "--trials", "5", "--seed", "3"});
  ASSERT_EQ(obs.code, 0) << obs.err;
  // N = 1, Ce = 1: observable; f is a nonzero scalar so k = 0 already works.
  EXPECT_EQ(obs.json()["observable"], true);
  EXPECT_EQ(obs.json()["witness"]["status"], "found");
  EXPECT_EQ(obs.json()["witness"]["max_k"], 0);
  auto blind = Json::parse(kZ);
  blind["C"] = blind["A"];
  const auto b = cli({"linsys", "observable", "--real", blind.dump()});
  EXPECT_EQ(b.json()["observable"], false);
  EXPECT_EQ(b.json()["witness"]["status"], "inconclusive");
}

TEST(Cli, Hermite) {
  const auto m = cli({"hermite", "mehler", "--grid", "-1:1:1", "--s", "0.3,-0.5", "--terms", "200"});
  ASSERT_EQ(m.code, 0) << m.err;
  std::istringstream lines(m.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "u,v,s_re,s_im,lhs_re,lhs_im,rhs_re,rhs_im,abs_err");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_LT(std::stod(line.substr(line.rfind(',') + 1)), 1e-10);
  }
  EXPECT_EQ(rows, 18);
  EXPECT_EQ(cli({"hermite", "mehler", "--s", "1.0"}).code, 3);
  const auto sm = cli({"hermite", "sample", "--n", "0", "--grid", "0:0:1"});
  EXPECT_NE(sm.out.find("0,0,0.75112554446494"), std::string::npos);
  const auto gp = cli({"hermite", "gp-norm", "--coeffs", "1,1", "--p", "1"});
  ASSERT_EQ(gp.code, 0) << gp.err;
  EXPECT_NEAR(gp.json()["integral"].get<double>(), 3.0, 3e-6);
  const auto st = cli({"hermite", "strip", "--decay", "exp-sqrt", "--nmax", "100000"});
  EXPECT_NEAR(st.json()["tau"].get<double>(), 1.0, 0.02);
  EXPECT_EQ(cli({"hermite", "strip", "--decay", "geometric"}).json()["infinite"], true);
  const auto custom = cli({"hermite", "strip", "--decay", "custom", "--log-coeffs", "-1 -2 -3 -4 -5 -6 -7 -8 -9 -10"});
  ASSERT_EQ(custom.code, 0) << custom.err;
  EXPECT_EQ(custom.json()["nmax"], 9);
  EXPECT_EQ(cli({"hermite", "strip", "--decay", "custom"}).code, 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({"series", "invert"}).code, 2);
  EXPECT_EQ(cli({"series", "invert", "--in", "1 +"}).code, 2);
  EXPECT_EQ(cli({"series", "invert", "--in", "@/nonexistent/file"}).code, 2);
  EXPECT_EQ(cli({"series", "invert", "--in", "x1"}).code, 3);
  EXPECT_EQ(cli({"series", "norm", "--in", "x2", "--spec", "schwartz", "--p", "1"}).code, 3);
  EXPECT_EQ(cli({"weight", "check", "--spec", "nope"}).code, 2);
  EXPECT_EQ(cli({"weight", "vage-constant", "--spec", "kondratiev", "--d", "1", "--closed-form"}).code, 3);
  EXPECT_EQ(cli({"weight", "vage-constant", "--spec", "gspace", "--d", "1", "--closed-form"}).code, 0);
  EXPECT_EQ(cli({"series", "compose", "--phi", "log1p", "--in", "-0.999999999+x1", "--window", "1,1"}).code, 4);
  EXPECT_EQ(cli({"hermite", "sample", "--n", "501"}).code, 3);
  EXPECT_EQ(cli({"analysis", "zhang", "--d", "2", "--K", "1.5"}).code, 2);
  EXPECT_EQ(cli({"linsys", "eval", "--real", "{", "--at", "x1"}).code, 2);
}

TEST(Cli, OutFile) {
  const auto p = std::filesystem::temp_directory_path() / "vage_cli_test_out.json";
  std::filesystem::remove(p);
  const auto r = cli({"--out", p.string(), "analysis", "zhang", "--d", "2", "--K", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(p);
  EXPECT_NEAR(Json::parse(in)["value"].get<double>(), 2304.0 / 1575.0, 1e-15);
}

}  // namespace
}  // namespace vage
