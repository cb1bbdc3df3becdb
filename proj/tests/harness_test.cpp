#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "lndkit/harness/corpus.hpp"
#include "lndkit/harness/fiber.hpp"
#include "lndkit/harness/random.hpp"
#include "lndkit/harness/runner.hpp"
#include "test_support.hpp"

namespace lndkit {
namespace {

using namespace harness;
using testing::P;

const char* kMinimal = R"(id: minimal
ring.main: X, Y
base: full
algebra: full
derivation D: X -> 0, Y -> 1
task s find_slice: derivation = D
expect s: verdict = slice; values = Y; provenance = TRIVIAL: D(Y) = 1
)";

std::vector<json> task_records(const Report& r) {
  std::vector<json> out;
  for (const auto& rec : r.records)
    if (rec["record"] == "task") out.push_back(rec);
  return out;
}

json task_record(const Report& r, const std::string& id) {
  for (const auto& rec : task_records(r))
    if (rec["task"] == id) return rec;
  ADD_FAILURE() << "no task " << id;
  return {};
}

TEST(Job, ParsesMinimal) {
  JobSpec j = parse_job(kMinimal);
  EXPECT_EQ(j.id, "minimal");
  EXPECT_EQ(j.ctx.num_coeff(), 0u);
  ASSERT_EQ(j.derivations.size(), 1u);
  EXPECT_EQ(j.derivations[0].second.image(1), P(j.ctx, "1"));
  ASSERT_EQ(j.tasks.size(), 1u);
  EXPECT_EQ(j.tasks[0].op, "find_slice");
  ASSERT_NE(j.expectation("s"), nullptr);
  EXPECT_EQ(j.expectation("s")->values, std::vector<std::string>{"Y"});
  EXPECT_TRUE(j.subalgebra().full_ring());
}

void expect_parse_error(const std::string& text, const std::string& message, std::size_t line) {
  try {
    parse_job(text);
    ADD_FAILURE() << "accepted: " << text;
  } catch (const ParseError& e) {
    EXPECT_NE(e.message().find(message), std::string::npos) << e.what();
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(Job, Diagnostics) {
  expect_parse_error("id: z\nring.main: X, Y\nderivation D: X -> Z\n", "unknown variable Z", 3);
  expect_parse_error("id: z\nring.main: X, Y\ntask a find_slice: derivation = E\n", "E", 3);
  expect_parse_error("id: z\nring.main: X, Y\nderivation D: X -> 1, Y -> 0\ntask a find_slice: derivation = D; bound = 0\n",
                     "bound", 4);
  expect_parse_error("id: z\nring.main: X, Y\nderivation D: X -> 1, Y -> 0\ntask a dixmier: derivation = D; slice = $s; element = X\n",
                     "$s", 4);
  expect_parse_error("id: z\nring.main: X, Y\nderivation D: X -> 1\n", "no image for main variable Y", 3);
  expect_parse_error("id: z\nring.main: X\nexpect a: verdict = yes; provenance = PAPER\n", "a", 3);
  expect_parse_error("id: z\nring.main: X\nderivation D: X -> 1\ntask a apply: derivation = D\n", "element", 4);
  expect_parse_error("id: z\nring.main: X\nfrobnicate: 1\n", "unknown key", 3);
}

TEST(Job, RoundTripsEveryCorpusFile) {
  for (const auto& e : load_corpus(corpus_dir())) {
    std::string once = serialize_job(e.job);
    EXPECT_EQ(serialize_job(parse_job(once)), once) << e.path;
  }
}

TEST(Job, GoldenParseOfExample53) {
  JobSpec j = parse_job(read_file(corpus_dir() / "example-5-3.job"));
  EXPECT_EQ(serialize_job(j), read_file(std::filesystem::path(LNDKIT_TEST_DATA_DIR) / "golden" / "example-5-3.parsed"));
}

TEST(Random, DeterministicAndVerified) {
  RandomProfile fpf{1, 3, true};
  auto a = random_triangular_lnd(1, fpf), b = random_triangular_lnd(1, fpf);
  EXPECT_EQ(a.derivation.images(), b.derivation.images());
  EXPECT_TRUE(is_fixed_point_free(a.derivation).fixed_point_free());
  EXPECT_TRUE(is_triangular(a.derivation).has_value());

  auto n = random_triangular_lnd(2, {1, 3, false});
  EXPECT_FALSE(is_fixed_point_free(n.derivation).fixed_point_free());
  EXPECT_TRUE(n.derivation.image(0).is_zero());

  auto two = random_triangular_lnd(5, {2, 2, true});
  EXPECT_EQ(two.derivation.context().num_coeff(), 2u);
  EXPECT_THROW(random_triangular_lnd(1, {3, 3, true}), PreconditionError);
  EXPECT_THROW(random_triangular_lnd(1, {1, 4, true}), PreconditionError);

  for (std::uint64_t s = 0; s < 30; ++s)
    EXPECT_TRUE(is_fixed_point_free(random_triangular_lnd(s, fpf).derivation).fixed_point_free()) << s;

  EXPECT_EQ(family_member_job("f", "a1-proportional", 3, 4), family_member_job("f", "a1-proportional", 3, 4));
  EXPECT_NE(family_member_job("f", "triangular-fpf", 3, 4), family_member_job("f", "triangular-fpf", 3, 5));
}

TEST(Fiber, Examples) {
  auto ctx = VarContext::make({"t"}, {"X", "Y"});
  auto full = Subalgebra::full(ctx);
  auto r = check_fiber_witness(full, {{{"t", Rational(0)}}, {P(ctx, "X"), P(ctx, "Y")}, 2});
  EXPECT_TRUE(r.pass);

  auto line = VarContext::make({"t"}, {"X"});
  r = check_fiber_witness(Subalgebra::full(line), {{{"t", Rational(0)}}, {P(line, "X^2")}, 4});
  ASSERT_FALSE(r.pass);
  EXPECT_EQ(*r.direction, FiberResult::Direction::generator_not_reachable);
  EXPECT_EQ(*r.element, P(line, "X"));

  auto ex = VarContext::make({"X"}, {"V", "W"});
  Subalgebra a(ex, {P(ex, "X^2"), P(ex, "X^3")},
               {P(ex, "V"), P(ex, "W + X*V^2*W^2"), P(ex, "X^2*W"), P(ex, "X^3*W"), P(ex, "X^2*W^2"), P(ex, "X^2*V*W")});
  r = check_fiber_witness(a, {{{"X", Rational(0)}}, {P(ex, "V"), P(ex, "W")}, 6});
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.specialized_generators.size(), 2u);

  r = check_fiber_witness(a, {{{"X", Rational(0)}}, {P(ex, "V"), P(ex, "V^2")}, 6});
  ASSERT_FALSE(r.pass);
  EXPECT_EQ(*r.direction, FiberResult::Direction::generator_not_reachable);
  EXPECT_EQ(*r.element, P(ex, "W"));

  EXPECT_THROW(check_fiber_witness(full, {{}, {P(ctx, "X")}, 2}), PreconditionError);
  EXPECT_THROW(check_fiber_witness(full, {{{"X", Rational(0)}}, {P(ctx, "X")}, 2}), PreconditionError);
}

TEST(Runner, MinimalSlice) {
  Report r = run_job(parse_job(kMinimal));
  EXPECT_TRUE(r.passed());
  auto rec = task_record(r, "s");
  EXPECT_EQ(rec["verdict"], "slice");
  EXPECT_EQ(rec["values"], json::array({"Y"}));
  EXPECT_EQ(rec["status"], "pass");
}

TEST(Runner, TiltedCertificateCarriesBothReexpressions) {
  Report r = run_job(parse_job(read_file(corpus_dir() / "tilted.job")));
  EXPECT_TRUE(r.passed());
  auto cert = task_record(r, "cert");
  ASSERT_EQ(cert["verdict"], "certificate");
  const auto& re = cert["witnesses"]["reexpression"];
  ASSERT_EQ(re.size(), 2u);
  // Re-evaluate each expression from the serialized symbols alone.
  auto ctx = VarContext::make({"t"}, {"X", "Y"});
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& w = re[i];
    std::vector<std::string> names;
    std::vector<Polynomial> values;
    for (const auto& [k, v] : w["symbols"].items()) {
      names.push_back(k);
      values.push_back(P(ctx, v.get<std::string>()));
    }
    auto fctx = VarContext::make({}, names);
    Polynomial expr = P(fctx, w["expression"].get<std::string>());
    EXPECT_EQ(evaluate(expr, values, ctx), P(ctx, w["target"].get<std::string>()));
  }
  EXPECT_EQ(re[0]["target"], "X");
  EXPECT_EQ(re[1]["target"], "Y");
}

TEST(Runner, PreconditionsBecomeTaskErrors) {
  Report r = run_job(parse_job(R"(id: e
ring.main: X, Y
base: full
algebra: full
derivation D: X -> Y, Y -> 0
task bad verify_slice_theorem: derivation = D; slice = X; bound = 2
task ok apply: derivation = D; element = X^2
)"));
  EXPECT_EQ(r.errors, 1u);
  EXPECT_EQ(task_record(r, "bad")["verdict"], "domain_error");
  EXPECT_EQ(task_record(r, "bad")["status"], "error");
  EXPECT_EQ(task_record(r, "ok")["values"], json::array({"2*X*Y"}));
  EXPECT_FALSE(r.passed());
}

TEST(Runner, MismatchIsReported) {
  Report r = run_job(parse_job(R"(id: m
ring.main: X, Y
base: full
algebra: full
derivation D: X -> 0, Y -> 1
task a apply: derivation = D; element = Y^2
expect a: verdict = value; values = Y; provenance = TRIVIAL: deliberately wrong
)"));
  EXPECT_EQ(r.mismatches, 1u);
  EXPECT_EQ(task_record(r, "a")["status"], "mismatch");
}

TEST(Runner, Example53ComplementaryHasNoFpf) {
  Report r = run_job(parse_job(read_file(corpus_dir() / "example-5-3.job")));
  EXPECT_TRUE(r.passed()) << r.to_jsonl();
  auto fpf = task_record(r, "fpf");
  EXPECT_EQ(fpf["verdict"], "not_found_up_to_bound");
  EXPECT_EQ(fpf["bound"], 10);
}

TEST(Runner, ReportsAreDeterministic) {
  for (const char* id : {"tilted.job", "example-5-3.job", "a1-proportional.job"}) {
    JobSpec j = parse_job(read_file(corpus_dir() / id));
    EXPECT_EQ(run_job(j).to_jsonl(false), run_job(j).to_jsonl(false)) << id;
  }
  JobSpec fam = parse_job(read_file(corpus_dir() / "triangular-nonfpf.job"));
  RunOptions seeded;
  seeded.seed = 99;
  EXPECT_EQ(run_job(fam, seeded).to_jsonl(false), run_job(fam, seeded).to_jsonl(false));
  EXPECT_NE(run_job(fam, seeded).to_jsonl(false), run_job(fam).to_jsonl(false));
}

TEST(Corpus, ParallelRunMatchesSerial) {
  auto entries = load_corpus(corpus_dir());
  std::set<std::string> ids;
  for (const auto& e : entries) ids.insert(e.job.id);
  for (const char* id : {"tilted", "negative-control", "example-5-3", "a3-tuple", "remark-4-8b", "hochster-raynaud",
                         "example-5-1-analogue", "triangular-fpf", "a1-proportional"})
    EXPECT_TRUE(ids.count(id)) << id;
  CorpusOptions serial{"worked", 1, {}}, parallel{"worked", 4, {}};
  Report a = run_corpus(entries, serial), b = run_corpus(entries, parallel);
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(a.to_jsonl(false), b.to_jsonl(false));
  EXPECT_GT(a.tasks, 0u);
  EXPECT_EQ(run_corpus(entries, {"a3-tuple", 2, {}}).records.back()["jobs"], 3);
}

}  // namespace
}  // namespace lndkit
