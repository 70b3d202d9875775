#pragma once

// Run telemetry persistence: records CSV (one row per iteration), per-iteration
// RCE curve sidecar, and the per-run summary file.

#include <optional>
#include <string>
#include <vector>

#include "anagram/optimizer.hpp"

namespace anagram {

/// Fixed, versioned records schema. Floats are serialized with 17 significant
/// digits so they round-trip exactly.
inline constexpr const char* kRecordsSchema =
    "t,train_loss,rel_l2,r_min,r_max,r_int,r_eps,elbow,eta,phase";
inline constexpr const char* kRecordsVersion = "anagram-records v1";

void write_records_csv(const std::string& path, const std::vector<IterationRecord>& records);

/// Sidecar with the full RCE curve and spectrum per iteration
/// (columns: iteration, N, rce, sigma; sigma is empty on the N = 0 row).
void write_rce_curves_csv(const std::string& path, const std::vector<IterationRecord>& records);

struct LoadedRecords {
    std::vector<IterationRecord> records;  ///< rce/singular_values filled if sidecar present
};

/// Reads a records CSV (and rce_curves.csv next to it when present).
LoadedRecords read_records_csv(const std::string& path);

struct RunSummary {
    std::string problem;
    std::uint64_t seed = 0;
    std::string strategy;
    double final_mse = 0.0;
    std::optional<double> final_rel_l2;
    int iterations = 0;
    std::string termination;
};

void write_summary_json(const std::string& path, const RunSummary& summary);
RunSummary read_summary_json(const std::string& path);

struct SummaryRow {
    std::string problem;
    int runs = 0;
    double mse_mean = 0.0, mse_std = 0.0;
    double l2_mean = 0.0, l2_std = 0.0;
};

/// Aggregate per-problem mean/std over seeds; rows ordered by problem name.
std::vector<SummaryRow> summarize(const std::vector<RunSummary>& summaries);

/// Aligned text rendering, scientific notation with 3 significant digits.
std::string render_table(const std::vector<SummaryRow>& rows);
std::string render_table_csv(const std::vector<SummaryRow>& rows);

/// Sample mean and standard deviation (n−1 denominator; 0 for n < 2).
std::pair<double, double> mean_std(const std::vector<double>& values);

}  // namespace anagram
