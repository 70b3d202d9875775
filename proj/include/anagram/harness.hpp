#pragma once

// Experiment orchestration: (problem × seed) jobs, artifact layout, table
// aggregation, diagnostic plots, and the built-in invariant self-test.

#include <string>
#include <vector>

#include "anagram/config.hpp"
#include "anagram/records.hpp"

namespace anagram {

struct JobResult {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    RunSummary summary;
    std::string run_dir;
};

/// Runs every seed of the config in a worker pool; each job owns its output
/// subdirectory (<output>/<problem>/seed<k>). A failing seed is recorded and
/// the others proceed. Returns one entry per seed.
std::vector<JobResult> run_experiment(const ExperimentConfig& config);

/// Scan directories recursively for summary.json files.
std::vector<RunSummary> collect_summaries(const std::vector<std::string>& dirs,
                                          std::vector<std::string>* missing = nullptr);

/// Loss/L2-vs-iteration chart plus an RCE-curve snapshot for the selected
/// iteration (nearest available when out of range). Returns the files written.
std::vector<std::string> plot_run(const std::string& records_csv, int iteration,
                                  double epsilon, const std::string& out_dir);

/// Executes the invariant suites on synthetic instances; prints one line per
/// check when verbose. Returns the number of failed checks.
int selftest(bool verbose);

}  // namespace anagram
