#include "anagram/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anagram {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (...) {
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" +
                                    value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (...) {
        throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" +
                                    value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("config: key '" + key + "' expects a boolean, got '" + value +
                                "'");
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& key, const std::string& value, F item) {
    std::vector<T> out;
    std::stringstream ss(value);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(item(key, trim(field)));
    if (out.empty()) throw std::invalid_argument("config: key '" + key + "' expects a list");
    return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "problem") {
            cfg.problem = value;
        } else if (key == "grid.interior") {
            cfg.grid.interior_counts =
                parse_list<int>(key, value, [](const auto& k, const auto& v) {
                    return parse_int(k, v);
                });
        } else if (key == "grid.boundary") {
            cfg.grid.boundary_count = parse_int(key, value);
        } else if (key == "model.hidden") {
            cfg.model.hidden_widths =
                parse_list<int>(key, value, [](const auto& k, const auto& v) {
                    return parse_int(k, v);
                });
        } else if (key == "model.activation") {
            if (value == "tanh")
                cfg.model.activation = Activation::Tanh;
            else if (value == "sine")
                cfg.model.activation = Activation::Sine;
            else
                throw std::invalid_argument("config: model.activation must be tanh or sine");
        } else if (key == "train.strategy") {
            if (value == "adaptive")
                cfg.train.strategy = Strategy::Adaptive;
            else if (value == "fixed")
                cfg.train.strategy = Strategy::FixedCutoff;
            else if (value == "principled")
                cfg.train.strategy = Strategy::PrincipledAdaptive;
            else
                throw std::invalid_argument(
                    "config: train.strategy must be adaptive, fixed or principled");
        } else if (key == "train.epsilon") {
            cfg.train.epsilon = parse_double(key, value);
        } else if (key == "train.t_max") {
            cfg.train.t_max = parse_int(key, value);
        } else if (key == "train.fixed_alpha") {
            cfg.train.fixed_cutoff_alpha = parse_double(key, value);
        } else if (key == "train.eta_max") {
            cfg.train.line_search.eta_max = parse_double(key, value);
        } else if (key == "train.grid_depth") {
            cfg.train.line_search.grid_depth = parse_int(key, value);
        } else if (key == "train.golden_iters") {
            cfg.train.line_search.golden_iters = parse_int(key, value);
        } else if (key == "train.elbow_log") {
            cfg.train.elbow_log_scale = parse_bool(key, value);
        } else if (key == "train.flatten_tol") {
            cfg.train.flatten_tol = parse_double(key, value);
        } else if (key == "train.record_curves") {
            cfg.train.record_curves = parse_bool(key, value);
        } else if (key == "seeds") {
            cfg.seeds = parse_list<std::uint64_t>(key, value, [](const auto& k, const auto& v) {
                return static_cast<std::uint64_t>(parse_int(k, v));
            });
        } else if (key == "output") {
            cfg.output_dir = value;
        } else if (key == "data_dir") {
            cfg.data_dir = value;
        } else if (key == "verbosity") {
            cfg.verbosity = parse_int(key, value);
        } else if (key == "plots") {
            cfg.plots = parse_bool(key, value);
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }

    // Basic validation beyond per-key parsing.
    if (cfg.seeds.empty()) throw std::invalid_argument("config: seeds must not be empty");
    if (cfg.train.epsilon <= 0.0)
        throw std::invalid_argument("config: train.epsilon must be > 0");
    if (cfg.train.t_max < 1) throw std::invalid_argument("config: train.t_max must be >= 1");
    bool known = false;
    for (const auto& name : problem_names()) known = known || name == cfg.problem;
    if (!known) {
        std::string valid;
        for (const auto& n : problem_names()) valid += (valid.empty() ? "" : ", ") + n;
        throw std::invalid_argument("config: unknown problem '" + cfg.problem +
                                    "' (valid: " + valid + ")");
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string example_config() {
    return R"(# anagram experiment configuration
problem = heat            # heat | laplace2d | laplace5d | burgers1d | nonlinear-poisson-k1 | allen-cahn
grid.interior = 32        # per-axis interior counts (single value broadcasts)
grid.boundary = 0         # boundary points per face axis (0 = problem default)
model.hidden = 32         # hidden layer widths
model.activation = tanh   # tanh | sine
train.strategy = adaptive # adaptive | fixed | principled
train.epsilon = 1e-10
train.t_max = 2000
train.fixed_alpha = 1e-3  # threshold for the fixed strategy
train.eta_max = 2.0
train.grid_depth = 20
train.golden_iters = 40
train.elbow_log = true
train.flatten_tol = 0.01
train.record_curves = true
seeds = 0,1,2
output = runs/heat
verbosity = 1
plots = true
)";
}

}  // namespace anagram
