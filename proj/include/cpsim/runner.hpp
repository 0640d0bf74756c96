#pragma once

#include <string>

#include "cpsim/config.hpp"

namespace cpsim {

// Executes a single (scalar-parameter) run: writes CSV outputs plus
// manifest.json into cfg.out_dir. Returns the process exit code
// (0 ok, 3 validation error, 4 numeric error); parse errors throw before
// this point and map to exit 2.
int run_experiment(const RunConfig& cfg, int threads = 1);

// Cartesian product over list-valued parameters; one row of headline
// diagnostics per cell in sweep.csv. Failed cells are recorded and skipped.
int run_sweep(const RunConfig& cfg, int threads = 1);

// 64-bit FNV-1a of a file, hex-encoded; used in the manifest.
std::string file_hash_hex(const std::string& path);

}  // namespace cpsim
