#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "lndkit/harness/runner.hpp"

#ifndef LNDKIT_DEFAULT_CORPUS_DIR
#define LNDKIT_DEFAULT_CORPUS_DIR "corpus"
#endif

namespace lndkit::harness {

inline std::filesystem::path corpus_dir() {
  if (const char* env = std::getenv("LNDKIT_CORPUS_DIR"); env && *env) return env;
  return LNDKIT_DEFAULT_CORPUS_DIR;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw PreconditionError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CorpusEntry {
  std::filesystem::path path;
  JobSpec job;
};

/// All *.job files under dir, parsed and ordered by id. Parse errors name the file.
inline std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw PreconditionError("corpus directory " + dir.string() + " not found");
  std::vector<CorpusEntry> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".job") continue;
    try {
      out.push_back({e.path(), parse_job(read_file(e.path()))});
    } catch (const ParseError& err) {
      throw ParseError(e.path().filename().string() + ": " + err.message(), err.line(), err.column());
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.job.id < b.job.id; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].job.id == out[i - 1].job.id) throw StructuralError("duplicate corpus id " + out[i].job.id);
  return out;
}

inline bool matches_filter(const JobSpec& j, const std::string& filter) {
  if (filter.empty() || j.id == filter) return true;
  return std::find(j.tags.begin(), j.tags.end(), filter) != j.tags.end();
}

struct CorpusOptions {
  std::string filter;
  std::size_t parallel = 1;
  RunOptions run;
};

/// Runs matching entries (up to `parallel` at a time); records keep id order.
inline Report run_corpus(const std::vector<CorpusEntry>& entries, const CorpusOptions& opts) {
  std::vector<const CorpusEntry*> selected;
  for (const auto& e : entries)
    if (matches_filter(e.job, opts.filter)) selected.push_back(&e);

  std::vector<Report> reports(selected.size());
  const std::size_t width = std::max<std::size_t>(1, opts.parallel);
  for (std::size_t start = 0; start < selected.size(); start += width) {
    std::vector<std::future<Report>> batch;
    for (std::size_t i = start; i < std::min(selected.size(), start + width); ++i)
      batch.push_back(std::async(std::launch::async, [&, i] { return run_job(selected[i]->job, opts.run); }));
    for (std::size_t k = 0; k < batch.size(); ++k) reports[start + k] = batch[k].get();
  }

  Report all;
  std::size_t failed_jobs = 0;
  for (const auto& r : reports) {
    all.append(r);
    failed_jobs += !r.passed();
  }
  all.records.push_back(json{{"record", "corpus"},
                             {"jobs", selected.size()},
                             {"failed_jobs", failed_jobs},
                             {"tasks", all.tasks},
                             {"mismatches", all.mismatches},
                             {"errors", all.errors},
                             {"passed", all.passed()}});
  return all;
}

}  // namespace lndkit::harness
