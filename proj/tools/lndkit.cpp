#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lndkit/harness/corpus.hpp"
#include "lndkit/harness/random.hpp"
#include "lndkit/harness/runner.hpp"

namespace {

using namespace lndkit;
using namespace lndkit::harness;

constexpr int kPass = 0;
constexpr int kMismatch = 1;
constexpr int kInputError = 2;

int emit(const Report& report, const std::string& out) {
  const std::string text = report.to_jsonl();
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      std::cerr << "lndkit: cannot write " << out << "\n";
      return kInputError;
    }
    f << text;
  }
  return report.passed() ? kPass : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally nilpotent derivations: job runner and verification corpus"};
  app.require_subcommand(1);

  std::string job_file, out;
  std::size_t bound = kDefaultNilpotencyBound;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Run one job file and print its report");
  run->add_option("job", job_file, "Job file")->required();
  run->add_option("--out", out, "Write the report here instead of stdout");
  run->add_option("--bound", bound, "Nilpotency iteration bound")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Override the family seed");

  std::string filter;
  std::size_t parallel = 1;
  auto* corpus = app.add_subcommand("corpus", "Run the shipped corpus");
  corpus->add_option("--filter", filter, "Only entries with this tag or id");
  corpus->add_option("--parallel", parallel, "Entries run concurrently")->check(CLI::PositiveNumber);
  corpus->add_option("--out", out, "Write the report here instead of stdout");
  corpus->add_option("--bound", bound, "Nilpotency iteration bound")->check(CLI::PositiveNumber);

  std::string family = "triangular-fpf";
  std::size_t count = 1;
  std::uint64_t random_seed = 1;
  auto* random = app.add_subcommand("random", "Print generated job files of a random family");
  random->add_option("--family", family, "Family kind")->check(CLI::IsMember(family_kinds()));
  random->add_option("--count", count, "Number of members")->check(CLI::PositiveNumber);
  random->add_option("--seed", random_seed, "Family seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    RunOptions opts;
    opts.nilpotency_bound = bound;
    if (*run) {
      if (*seed_opt) opts.seed = seed;
      JobSpec job = parse_job(read_file(job_file));
      if (out.empty() && job.output) out = *job.output;
      return emit(run_job(job, opts), out);
    }
    if (*corpus) {
      auto entries = load_corpus(corpus_dir());
      return emit(run_corpus(entries, {filter, parallel, opts}), out);
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (i) std::cout << "\n";
      std::cout << family_member_job(family, family, random_seed, i);
    }
    return kPass;
  } catch (const ParseError& e) {
    std::cerr << "lndkit: " << (job_file.empty() ? "" : job_file + ":") << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "lndkit: " << e.what() << "\n";
  }
  return kInputError;
}
