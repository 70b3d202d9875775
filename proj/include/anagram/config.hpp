#pragma once

// Experiment configuration: a flat key = value text file with '#' comments.
// Unknown keys are rejected so typos in tolerance names cannot pass silently.

#include <cstdint>
#include <string>
#include <vector>

#include "anagram/optimizer.hpp"
#include "anagram/problems.hpp"

namespace anagram {

struct ExperimentConfig {
    std::string problem = "heat";
    GridSpec grid{{32}, 0};
    MlpSpec model{2, {32}, Activation::Tanh, 0};
    TrainConfig train;
    std::vector<std::uint64_t> seeds = {0};
    std::string output_dir = "runs";
    std::string data_dir;  ///< reference tables; empty = default
    int verbosity = 1;
    bool plots = true;
};

/// Parse a config file. Throws std::invalid_argument naming the offending
/// key or value. The model's input_dim is derived from the problem.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

/// The set of recognized keys with their defaults, as a config file.
std::string example_config();

}  // namespace anagram
