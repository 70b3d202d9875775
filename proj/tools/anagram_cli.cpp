// Command-line front end: run experiments, aggregate summary tables, render
// diagnostic plots, and execute the invariant self-test.

#include <cstdio>
#include <fstream>

#include <CLI11.hpp>

#include "anagram/config.hpp"
#include "anagram/harness.hpp"
#include "anagram/records.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ANaGRAM natural-gradient PINN optimizer with the adaptive "
                 "multi-cutoff strategy"};
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    auto* run = app.add_subcommand("run", "execute all (problem × seed) runs of a config");
    std::string config_path;
    std::string output_override;
    run->add_option("-c,--config", config_path, "configuration file")->required();
    run->add_option("-o,--output", output_override, "override the output directory");

    // --- table -------------------------------------------------------------
    auto* table = app.add_subcommand("table", "aggregate run summaries into a table");
    std::vector<std::string> table_dirs;
    std::string table_csv;
    table->add_option("dirs", table_dirs, "run directories to scan");
    table->add_option("-o,--csv", table_csv, "also write the table as CSV");

    // --- plot --------------------------------------------------------------
    auto* plot = app.add_subcommand("plot", "render SVG charts from a records CSV");
    std::string records_path, plot_out = "plots";
    int iteration = 1;
    double plot_epsilon = 1e-10;
    plot->add_option("records", records_path, "records.csv of a run")->required();
    plot->add_option("-i,--iteration", iteration, "iteration for the RCE snapshot");
    plot->add_option("-o,--output", plot_out, "output directory");
    plot->add_option("--epsilon", plot_epsilon, "precision line for the RCE chart");

    // --- selftest ----------------------------------------------------------
    auto* self = app.add_subcommand("selftest", "run the built-in invariant suites");

    // --- example-config ----------------------------------------------------
    auto* example = app.add_subcommand("example-config", "print a commented config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            anagram::ExperimentConfig cfg = anagram::parse_config_file(config_path);
            if (!output_override.empty()) cfg.output_dir = output_override;
            const auto results = anagram::run_experiment(cfg);
            int failures = 0;
            for (const auto& r : results)
                if (!r.ok) ++failures;
            if (failures > 0) {
                std::fprintf(stderr, "%d of %zu runs failed\n", failures, results.size());
                return 1;
            }
            return 0;
        }
        if (*table) {
            std::vector<std::string> missing;
            const auto summaries = anagram::collect_summaries(table_dirs, &missing);
            for (const auto& dir : missing)
                std::fprintf(stderr, "warning: no summaries under %s\n", dir.c_str());
            const auto rows = anagram::summarize(summaries);
            std::fputs(anagram::render_table(rows).c_str(), stdout);
            if (!table_csv.empty()) {
                std::ofstream out(table_csv);
                out << anagram::render_table_csv(rows);
            }
            return 0;
        }
        if (*plot) {
            const auto files =
                anagram::plot_run(records_path, iteration, plot_epsilon, plot_out);
            for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
            return 0;
        }
        if (*self) {
            const int failures = anagram::selftest(true);
            std::printf(failures == 0 ? "selftest: all checks passed\n"
                                      : "selftest: %d checks FAILED\n",
                        failures);
            return failures == 0 ? 0 : 1;
        }
        if (*example) {
            std::fputs(anagram::example_config().c_str(), stdout);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
