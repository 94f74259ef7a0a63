#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ucfg/cli.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  Json report;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "ucfg");
  std::ostringstream out, err;
  int code = ucfg::cli::run(args, out, err);
  Json j;
  if (!out.str().empty() && out.str()[0] == '{') j = Json::parse(out.str());
  return {code, j, err.str()};
}

std::string fixture(const std::string& name) { return std::string(UCFG_FIXTURE_DIR) + "/" + name; }

fs::path scratch() {
  fs::path p = fs::temp_directory_path() / "ucfg_cli_test";
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("parse and count") {
  auto p = run({"parse", "--grammar", fixture("dyck.gnf"), "--check-unambiguous-up-to", "8"});
  CHECK(p.code == ucfg::cli::kExitBounded);
  CHECK(p.report["result"]["lint"]["ambiguous"] == false);
  CHECK(p.report["schema"] == 1);
  CHECK(p.report["inputs"][0]["bytes"].get<long>() > 0);

  auto a = run({"parse", "--grammar", fixture("ambiguous.gnf"), "--check-unambiguous-up-to", "4"});
  CHECK(a.code == ucfg::cli::kExitDefinitive);
  CHECK(a.report["result"]["lint"]["witness"] == "a");

  auto c = run({"count", "--grammar", fixture("dyck.gnf"), "--upto", "8"});
  CHECK(c.report["result"]["counts"] == Json({"1", "0", "1", "0", "2", "0", "5", "0", "14"}));
}

TEST_CASE("universality") {
  auto u = run({"universal", "--grammar", fixture("universal.gnf"), "--bound", "200"});
  CHECK(u.code == ucfg::cli::kExitBounded);
  CHECK(u.report["result"]["verdict"] == "UniversalUpTo");

  auto a = run({"universal", "--grammar", fixture("aonly.gnf")});
  CHECK(a.code == ucfg::cli::kExitDefinitive);
  CHECK(a.report["result"]["witness"] == "b");

  auto y = run({"universal", "--grammar", fixture("y2.gnf")});
  CHECK(y.report["result"]["witness_length"] == 4);

  auto f = run({"universal-ufa", "--aut", fixture("evenodd.aut")});
  CHECK(f.report["result"]["verdict"] == "Universal");

  fs::path smt = scratch() / "u.smt2";
  run({"--quiet", "universal", "--grammar", fixture("universal.gnf"), "--bound", "20", "--emit-reals", smt.string()});
  std::ifstream in(smt);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("(check-sat)") != std::string::npos);
}

TEST_CASE("inclusion with artifacts") {
  auto r = run({"include", "--lhs", fixture("even.aut"), "--rhs", fixture("evenodd.aut")});
  CHECK(r.report["result"]["verdict"] == "Included");

  fs::path dir = scratch() / "dump";
  auto g = run({"include", "--lhs", fixture("astar.aut"), "--rhs", fixture("dyck.gnf"), "--dump-dir", dir.string()});
  CHECK(g.report["result"]["verdict"] == "NotIncluded");
  CHECK(g.report["result"]["witness"] == "a");
  for (const char* f : {"lhs_lifted.aut", "rhs_lifted.gnf", "product.gnf", "union.gnf", "complement.aut"})
    CHECK(fs::exists(dir / f));
}

TEST_CASE("measures") {
  auto a = run({"measure", "--input", fixture("astar.aut")});
  CHECK(a.report["result"]["measure"]["exact"] == "1/2");
  auto r = run({"measure", "--input", fixture("ab_star.rx")});
  CHECK(r.report["result"]["measure"]["exact"] == "1/2");
  auto c = run({"measure", "--input", fixture("dyck.gnf"), "--cmp", "<=", "--threshold", "1/2"});
  CHECK(c.report["result"]["verdict"] == "True");
  CHECK(c.code == ucfg::cli::kExitDefinitive);
}

TEST_CASE("generators") {
  fs::path rx = scratch() / "r.rx";
  auto g = run({"gen-repr", "--n", "3", "--m", "2", "--c", "5/16", "--out", rx.string()});
  CHECK(g.code == 0);
  CHECK(g.report["result"]["measure"]["exact"] == "5/16");
  auto m = run({"measure", "--input", rx.string()});
  CHECK(m.report["result"]["measure"]["exact"] == "5/16");

  fs::path gnf = scratch() / "s.gnf";
  auto s = run({"gen-sqrtsum", "--d0", "10", "--ds", "16,9,4", "--out", gnf.string(), "--verify"});
  CHECK(s.report["result"]["construction"] == "separated");
  CHECK(s.report["result"]["verification"]["verdict"] == "True");
  CHECK(s.code == ucfg::cli::kExitDefinitive);
  CHECK(fs::exists(gnf));
}

TEST_CASE("errors and usage") {
  auto missing = run({"parse", "--grammar", "/nonexistent/x.gnf"});
  CHECK(missing.code == ucfg::cli::kExitError);
  CHECK(missing.report["error"]["code"] == "cli.io");

  CHECK(run({"frobnicate"}).code == ucfg::cli::kExitUsage);
  CHECK(run({}).code == ucfg::cli::kExitUsage);
  CHECK(run({"measure", "--input", fixture("dyck.gnf"), "--cmp", "<="}).code == ucfg::cli::kExitUsage);

  fs::path two = scratch() / "two.gnf";
  std::ofstream(two) << "alphabet a\nstart S\nS ->\nS -> a E S\nS -> a F E\nE ->\nF ->\n";
  auto amb = run({"universal", "--grammar", two.string()});
  CHECK(amb.code == ucfg::cli::kExitError);
  CHECK(amb.report["error"]["code"] == "counting.ambiguity");
  CHECK(amb.report["error"]["length"] == 1);

  auto quiet = run({"--quiet", "count", "--grammar", fixture("dyck.gnf"), "--upto", "2"});
  CHECK(quiet.report.is_null());
}
