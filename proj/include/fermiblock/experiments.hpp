#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fermiblock/config.hpp"
#include "fermiblock/oracle.hpp"

namespace fermiblock {

/// Oracle for the configured model (lattice, margulis, fermi-sea or clock).
OracleTuple build_model_oracle(const ModelConfig& model);

/// Deterministic per-sweep-point seed stream.
std::uint64_t point_seed(std::uint64_t master_seed, std::uint64_t point);

/// Executes the configured experiment, writing the CSV and report artifacts
/// under output_dir. Returns 0 on success; on a module error the partial CSV
/// is flushed with a truncation marker and the status is nonzero.
int run_experiment(const ExperimentConfig& cfg, const std::string& output_dir,
                   std::optional<std::uint64_t> seed_override = std::nullopt, int jobs = 1);

}  // namespace fermiblock
