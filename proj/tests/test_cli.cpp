#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"

using namespace kmedian;
namespace fs = std::filesystem;
using Json = io::Json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "kmedian");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "kmedian_test_cli";
  fs::create_directories(dir);
  return dir;
}

fs::path write(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, MedianOfTwoStrings) {
  const auto in = write("two.txt", "AAAA\nBBB\n");
  const auto r = run_cli({"median", "--domain", "string", "--kernel", "lin", "--reconstruct", "lin-rec", "--search",
                          "--input", in.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  ASSERT_EQ(doc["runs"].size(), 1u);
  const auto& run = doc["runs"][0];
  EXPECT_EQ(run["sod"].get<double>(), 4.0);
  EXPECT_EQ(run["lower_bound"].get<double>(), 4.0);
  EXPECT_EQ(run["normalized_sod"].get<double>(), 0.0);
  EXPECT_EQ(run["reconstruction"], "lin-rec+search");
  const auto m = run["median"].get<std::string>();
  EXPECT_EQ(levenshtein("AAAA", m) + levenshtein(m, "BBB"), 4u);
  EXPECT_EQ(run["runtime_ms"].get<double>(), 0.0);
}

TEST(Cli, ReportedSodMatchesSerializedMedian) {
  const auto in = write("rankings.txt", "a>b>c>d\nb>a>c>d\na>c>b>d\n\nd>c>b>a\nc>d>b>a\n");
  const auto r = run_cli({"median", "--domain", "ranking", "--kernel", "kendall", "--input", in.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto sets = io::parse_rankings(in);
  const auto doc = Json::parse(r.out);
  ASSERT_EQ(doc["runs"].size(), 2u);
  for (std::size_t s = 0; s < 2; ++s) {
    const auto m = Ranking::parse(doc["runs"][s]["median"].get<std::string>());
    double total = 0.0;
    for (const auto& o : sets[s]) total += kendall_tau_gen(o, m);
    EXPECT_EQ(doc["runs"][s]["sod"].get<double>(), total);
  }
}

TEST(Cli, DistortionLinIsExact) {
  const auto in = write("dist.txt", "kitten\nsitting\nmitten\nbiting\nknitting\n");
  const auto r = run_cli({"distortion", "--domain", "string", "--kernel", "lin", "--input", in.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto run = Json::parse(r.out)["runs"][0];
  EXPECT_EQ(run["pairs"].get<int>(), 10);
  EXPECT_EQ(run["min_c"].get<double>(), 1.0);
  EXPECT_EQ(run["max_c"].get<double>(), 1.0);
  EXPECT_EQ(run["ncc"].get<double>(), 1.0);
}

TEST(Cli, GenIsByteIdentical) {
  const auto a = scratch() / "gen_a.txt", b = scratch() / "gen_b.txt";
  for (const auto& p : {a, b}) {
    const auto r = run_cli({"gen", "--domain", "ranking", "--seed", "7", "--sets", "3", "--output", p.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
  const auto meta = Json::parse(slurp(a.string() + ".meta.json"));
  EXPECT_EQ(meta["seed"].get<int>(), 7);
  EXPECT_EQ(meta["generator"], "mt19937_64");
  EXPECT_EQ(meta["set_seeds"].size(), 3u);
  EXPECT_EQ(io::parse_rankings(a).size(), 3u);
}

TEST(Cli, GenStringsDirectory) {
  const auto dir = scratch() / "gen_strings";
  fs::remove_all(dir);
  const auto r = run_cli({"gen", "--domain", "string", "--seed", "3", "--sets", "2", "--objects", "4", "--min-length",
                          "5", "--max-length", "8", "--output", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto sets = io::parse_strings(dir);
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[0].size(), 4u);
  EXPECT_TRUE(fs::exists(dir / "metadata.json"));
}

TEST(Cli, IdenticalInvocationsGiveIdenticalReports) {
  const auto in = scratch() / "clusters.csv";
  ASSERT_EQ(run_cli({"gen", "--domain", "clustering", "--seed", "5", "--sets", "2", "--objects", "8", "--size", "20",
                     "--output", in.string()})
                .code,
            0);
  std::vector<std::string> args{"eval", "--domain", "clustering", "--kernel", "comb", "--input", in.string(),
                                "--format", "csv", "--seed", "9"};
  const auto a = run_cli(args), b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  // header, then set median and four reconstructions per set
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 1 + 2 * 5);
}

TEST(Cli, EmptyRunList) {
  cli::Options o;
  Json doc;
  doc["runs"] = Json::array();
  EXPECT_EQ(cli::detail::render(o, doc, cli::detail::kRunColumns), "{\n  \"runs\": []\n}\n");
  o.format = "csv";
  EXPECT_EQ(cli::detail::render(o, doc, cli::detail::kRunColumns),
            "set,kernel,reconstruction,median,sod,lower_bound,normalized_sod,sigma,iterations,complex_weight_count,"
            "runtime_ms\n");
}

TEST(Cli, CsvRowHasEveryColumn) {
  const auto in = write("csv.txt", "abc\nabd\nxbc\n");
  const auto r = run_cli({"median", "--input", in.string(), "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_FALSE(std::getline(lines, extra));
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 10);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 10);
}

TEST(Cli, JsonRoundTrip) {
  const auto in = write("rt.txt", "kitten\nsitting\nmitten\n");
  const auto out = scratch() / "rt.json";
  ASSERT_EQ(run_cli({"median", "--input", in.string(), "--output", out.string()}).code, 0);
  const auto text = slurp(out);
  const auto doc = Json::parse(text);
  EXPECT_EQ(io::to_json_text(doc), text);
  const auto& run = doc["runs"][0];
  for (const char* key : {"median", "sod", "lower_bound", "normalized_sod", "sigma", "iterations",
                          "complex_weight_count", "runtime_ms", "kernel", "reconstruction"}) {
    EXPECT_TRUE(run.contains(key)) << key;
  }
}

TEST(Cli, NineSignificantDigits) {
  EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(io::format_number(2.0 / 3.0 * 1e6), "666666.667");
  EXPECT_EQ(io::format_number(4.0), "4");
}

TEST(Cli, ExitCodes) {
  const auto tied = write("tied.txt", "a>b=c\nc>b>a\n");
  const auto r = run_cli({"median", "--domain", "ranking", "--kernel", "kendall", "--input", tied.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("kendall"), std::string::npos);
  EXPECT_EQ(run_cli({"median", "--domain", "ranking", "--kernel", "lin", "--input", tied.string()}).code, 0);

  const auto strings = write("s.txt", "abc\nabd\n");
  EXPECT_EQ(run_cli({"median", "--kernel", "partition", "--input", strings.string()}).code, 1);
  EXPECT_EQ(run_cli({"median", "--kernel", "bogus", "--input", strings.string()}).code, 1);
  EXPECT_EQ(run_cli({"median", "--reconstruct", "best-recursive", "--input", strings.string()}).code, 1);
  EXPECT_EQ(run_cli({"median", "--input", (scratch() / "missing.txt").string()}).code, 2);
  const auto bad = write("bad.csv", "1,2,x\n");
  const auto rb = run_cli({"median", "--domain", "clustering", "--input", bad.string()});
  EXPECT_EQ(rb.code, 2);
  EXPECT_NE(rb.err.find(":1"), std::string::npos);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, ExecutableRuns) {
  const auto in = write("exe.txt", "AAAA\nBBB\n");
  const auto out = scratch() / "exe.json";
  const std::string cmd = std::string(KMEDIAN_CLI_PATH) + " median --search --input " + in.string() + " --output " +
                          out.string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(Json::parse(slurp(out))["runs"][0]["sod"].get<double>(), 4.0);
  const std::string bad = std::string(KMEDIAN_CLI_PATH) + " median --input " + (scratch() / "nope").string() +
                          " 2>/dev/null";
  const int status = std::system(bad.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
}
