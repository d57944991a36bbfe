#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fermiblock/clock.hpp"
#include "fermiblock/lattice.hpp"

namespace fermiblock {

/// All validation problems found in a config, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

struct ModelConfig {
    std::string type;  // lattice | margulis | fermi-sea | clock | chain | none
    LatticeSpec lattice;
    std::int64_t margulis_n = 0;
    int fermi_n = 0;
    double fermi_fill = 0.0;
    GateList gates;
    int chain_len = 0;
};

struct ExperimentConfig {
    std::string command;
    ModelConfig model;
    // [parameters]: each key holds a sweep list (single values are length 1)
    std::map<std::string, std::vector<double>> params;
    std::string csv_path = "out.csv";
    std::string report_path = "report.txt";
    std::uint64_t seed = 0;  // default 0
    double delta = 0.05;     // default 0.05

    bool has(const std::string& key) const { return params.count(key) != 0; }
    double scalar(const std::string& key) const;
    double scalar_or(const std::string& key, double fallback) const;
    const std::vector<double>& sweep(const std::string& key) const;
};

/// Parse and validate; throws ConfigError carrying every problem found.
ExperimentConfig parse_config(const std::string& text);

const std::vector<std::string>& known_commands();

}  // namespace fermiblock
