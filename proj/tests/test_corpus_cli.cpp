#include "bvlab/cli.hpp"
#include "bvlab/corpus.hpp"
#include "bvlab/errors.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bvlab;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

// Machine block only: the human part carries timings.
std::string machine_part(const std::string& text) { return text.substr(text.find("# machine")); }

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / ("bvlab-test-" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    auto file = path_ / name;
    std::ofstream(file) << text;
    return file.string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST(CorpusTest, ListsShippedEntries) {
  EXPECT_EQ(corpus_names(), (std::vector<std::string>{"e2", "e4", "e6", "e8", "e9"}));
  EXPECT_TRUE(corpus_file("e2.space"));
  EXPECT_TRUE(corpus_file("harmonic.seed"));
  EXPECT_FALSE(corpus_file("missing.space"));
  EXPECT_THROW(load_corpus("nope"), UnknownExample);
}

TEST(CorpusTest, HarmonicEntryCarriesItsClaims) {
  const auto& e2 = fixtures::entry("e2");
  EXPECT_EQ(e2.space.name(), "e2");
  EXPECT_EQ(e2.space_spec.claimed_v, 3);
  EXPECT_EQ(e2.space_spec.claimed_s, 3);
  EXPECT_EQ(e2.sample().size(), 8u);
  ASSERT_GE(e2.claims.size(), 2u);
  EXPECT_EQ(e2.claims[0].kind, "axiom-class");
  EXPECT_EQ(e2.claims[0].params.at("v"), "3");
  EXPECT_EQ(e2.claims[0].params.at("s"), "3");
  EXPECT_EQ(e2.claims[1].kind, "no-fixed-point");
  for (const auto& claim : e2.claims) {
    EXPECT_NE(std::find(claim_kinds().begin(), claim_kinds().end(), claim.kind), claim_kinds().end());
  }
}

TEST(CorpusTest, EveryShippedClaimHolds) {
  for (const auto& name : corpus_names()) {
    auto report = evaluate_claims(fixtures::entry(name));
    EXPECT_EQ(report.failed(), 0u) << report.render();
    EXPECT_EQ(report.passed(), fixtures::entry(name).claims.size());
  }
}

TEST(CorpusTest, NotBanachWitnessOnTheSmallSample) {
  auto report = evaluate_claims(fixtures::entry("e9"));
  const auto machine = report.machine();
  EXPECT_TRUE(contains(machine, "e9.2.witness=(4, 5)")) << machine;
  EXPECT_TRUE(contains(machine, "e9.2.kind=not-banach")) << machine;
}

TEST(CorpusTest, WrongClaimIsReportedNotThrown) {
  TempDir dir;
  const auto path = dir.write("wrong.claims",
                              "name: wrong\nspace: e2.space\nmap: e2.map\nsample: 2..9\n"
                              "claim: axiom-class v=3 s=3\n"
                              "claim: axiom-class v=1 s=1\n"
                              "claim: fixed-points set={1/2}\n");
  auto entry = load_corpus(path);
  auto report = evaluate_claims(entry);
  EXPECT_EQ(report.passed(), 1u);
  EXPECT_EQ(report.failed(), 2u);
  EXPECT_EQ(report.exit_status(), 1);

  auto run = cli({"corpus", "run", path});
  EXPECT_EQ(run.status, 1);
  EXPECT_TRUE(contains(run.out, "wrong.2.status=fail"));
  EXPECT_TRUE(contains(run.out, "summary.failed=2"));
}

TEST(CorpusTest, MalformedClaimsFiles) {
  TempDir dir;
  auto unknown = dir.write("a.claims", "name: a\nspace: e2.space\nmap: e2.map\nsample: 2..9\nclaim: telepathy\n");
  EXPECT_THROW(load_corpus(unknown), Error);
  auto missing = dir.write("b.claims", "name: b\nspace: absent.space\nmap: e2.map\nsample: 2..9\n");
  EXPECT_THROW(load_corpus(missing), Error);
}

TEST(CliTest, MinimalS) {
  auto run = cli({"minimal-s", "--space", "e2@2..6", "--v", "3"});
  EXPECT_EQ(run.status, 0);
  EXPECT_TRUE(contains(run.out, "s_min = 2"));
  EXPECT_TRUE(contains(run.out, "minimal_s.witness=(1/2, 1/6)"));
  EXPECT_TRUE(contains(run.out, "minimal_s.interior={1/3, 1/4, 1/5}"));
}

TEST(CliTest, VerifyExitStatuses) {
  EXPECT_EQ(cli({"verify", "--space", "e2@2..9", "--v", "3", "--s", "3"}).status, 0);
  auto fail = cli({"verify", "--space", "e2@2..9", "--v", "1", "--s", "1"});
  EXPECT_EQ(fail.status, 1);
  EXPECT_TRUE(contains(fail.out, "verify.witness=(1/2, 1/4)"));
  EXPECT_TRUE(contains(fail.out, "verify.interior={1/3}"));
}

TEST(CliTest, UsageErrorsExitTwo) {
  auto none = cli({});
  EXPECT_EQ(none.status, 2);
  EXPECT_FALSE(none.err.empty());
  EXPECT_EQ(cli({"verify", "--space", "e2@2..9"}).status, 2);
  EXPECT_EQ(cli({"verify", "--space", "e2@2..9", "--v", "1", "--s", "1/2"}).status, 2);
  EXPECT_EQ(cli({"contraction", "--space", "e9", "--kind", "zeno"}).status, 2);
  auto unknown = cli({"verify", "--space", "nope", "--v", "1", "--s", "1"});
  EXPECT_EQ(unknown.status, 2);
  EXPECT_TRUE(contains(unknown.err, "nope"));
  auto infinite = cli({"verify", "--space", "unit-interval.space", "--v", "1", "--s", "1"});
  EXPECT_EQ(infinite.status, 2);
  EXPECT_TRUE(contains(infinite.err, "infinite"));
}

TEST(CliTest, HelpExitsZero) {
  auto run = cli({"--help"});
  EXPECT_EQ(run.status, 0);
  EXPECT_TRUE(contains(run.out, "minimal-s"));
  auto sub = cli({"suzuki", "--help"});
  EXPECT_EQ(sub.status, 0);
  EXPECT_TRUE(contains(sub.out, "--factor"));
}

TEST(CliTest, ContractionAndSearch) {
  auto banach = cli({"contraction", "--space", "e9@{0, 1, 2, 4, 5}", "--kind", "banach"});
  EXPECT_EQ(banach.status, 1);
  EXPECT_TRUE(contains(banach.out, "contraction.witness=(4, 5)"));
  EXPECT_TRUE(contains(banach.out, "contraction.lhs=2"));
  EXPECT_EQ(cli({"contraction", "--space", "e8@{1/4, 1/2, 1, 2}", "--kind", "ciric"}).status, 0);
  // Searches and probes report their finding as the outcome and exit 0.
  auto reich = cli({"reich-search", "--space", "e2@2..8"});
  EXPECT_EQ(reich.status, 0);
  EXPECT_TRUE(contains(reich.out, "Infeasible"));
  EXPECT_TRUE(contains(reich.out, "(0, 1/2, 1/2)"));
  TempDir dir;
  const auto map = dir.write("const.map", "name: K\notherwise => 1/2\n");
  auto constant = cli({"reich-search", "--space", "e2@2..8", "--map", map});
  EXPECT_EQ(constant.status, 0);
  EXPECT_FALSE(contains(constant.out, "Infeasible")) << constant.out;
}

TEST(CliTest, IterateAndSuzuki) {
  auto orbit = cli({"iterate", "--space", "e4", "--start", "1", "--budget", "10"});
  EXPECT_EQ(orbit.status, 0);
  EXPECT_TRUE(contains(orbit.out, "iterate.orbit=FixedPoint(0, 2)"));
  EXPECT_TRUE(contains(orbit.out, "iterate.points={1, 1/2, 0}"));
  auto indexed = cli({"iterate", "--space", "e2", "--start", "#2", "--budget", "5"});
  EXPECT_TRUE(contains(indexed.out, "{1/2, 1/4, 1/2}")) << indexed.out;

  auto supported = cli({"suzuki", "--space", "e4", "--start", "1", "--factor", "s2", "--s", "2", "--budget", "10"});
  EXPECT_EQ(supported.status, 0) << supported.out;
  EXPECT_TRUE(contains(supported.out, "SupportedUpToHorizon")) << supported.out;
  auto refuted = cli({"suzuki", "--space", "e8", "--start", "1", "--factor", "s2", "--s", "2", "--eps", "1/4",
                      "--budget", "40"});
  EXPECT_EQ(refuted.status, 0) << refuted.out;
  EXPECT_TRUE(contains(refuted.out, "RefutedUpToGrid"));
  EXPECT_TRUE(contains(refuted.out, "n=4 m=5 premise=19/16 conclusion=35/32"));
}

TEST(CliTest, CorpusRunIsDeterministic) {
  auto first = cli({"corpus", "run", "all"});
  auto second = cli({"corpus", "run", "all"});
  EXPECT_EQ(first.status, 0) << first.out;
  EXPECT_EQ(machine_part(first.out), machine_part(second.out));
  EXPECT_TRUE(contains(first.out, "summary.failed=0"));
  EXPECT_EQ(cli({"corpus", "run", "nope"}).status, 2);
  auto list = cli({"corpus", "list"});
  EXPECT_EQ(list.out, "e2\ne4\ne6\ne8\ne9\n");
}

TEST(CliTest, CompletenessDemo) {
  auto run = cli({"completeness-demo"});
  EXPECT_EQ(run.status, 0) << run.out;
  EXPECT_TRUE(contains(run.out, "demo.coverage.outsider/member=400"));
  EXPECT_TRUE(contains(run.out, "ZeroDistanceToRange")) << run.out;
  EXPECT_EQ(cli({"completeness-demo", "--b", "0"}).status, 2);
  EXPECT_EQ(cli({"completeness-demo", "--b", "3/4", "--no-control"}).status, 1);
}
