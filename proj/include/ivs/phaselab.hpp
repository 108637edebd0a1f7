#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivs/bounds.hpp"
#include "ivs/svt.hpp"

namespace ivs::phaselab {

enum class Mode { independent, shift, reflection, rotation, block_perm };

std::string mode_name(Mode mode);

struct ExperimentSpec {
    Mode mode = Mode::independent;
    int n = 50;
    int k = 10;
    std::vector<int> m_grid;
    std::vector<int> g_grid;     // independent mode: number of operators per cell
    int n1 = 0, n2 = 0;          // rotation mode
    std::vector<int> moving;     // block_perm mode (0-based)
    int trials = 10;
    int samples_mult = 150;      // N = samples_mult * k
    svt::SolverParams solver;
    std::uint64_t base_seed = 0;
    std::string out_path;
    int workers = 0;             // 0: hardware concurrency

    int num_samples() const { return samples_mult * k; }
    void validate() const;
};

struct GridCell {
    Mode mode = Mode::independent;
    int n = 0, k = 0, m = 0;
    std::uint64_t num_ops = 0;
    std::string group;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    double mean_rel_err = 0.0;
    std::optional<double> bound_necessary;
    std::optional<double> bound_sufficient;
    std::optional<double> bound_conjectured;
    std::uint64_t seed = 0;
};

// Per-trial seed: base_seed folded with (m, group index, trial) through the
// splitmix64 combinator; collision-free across desk-scale grids (asserted in
// tests) and independent of worker scheduling.
std::uint64_t trial_seed(std::uint64_t base_seed, int m, int group_index, int trial);

// Runs the Monte Carlo grid: one completion problem per (cell, trial), solver
// divergence counted as a failed trial. Deterministic for a fixed spec
// regardless of the worker count.
std::vector<GridCell> run_grid(const ExperimentSpec& spec);

// UTF-8 CSV, header
// mode,n,k,m,num_ops,group,trials,successes,success_rate,mean_rel_err,bound_necessary,bound_sufficient,bound_conjectured,seed
// one row per cell, floats with 6 significant digits, rows ordered by m then
// group size. Byte-identical across reruns of the same spec.
void emit_csv(const std::vector<GridCell>& cells, const std::string& path);
std::string cells_to_csv(const std::vector<GridCell>& cells);

// CLI entry point (subcommands: run, bounds, decompose, covdof).
// Exit codes: 0 success, 2 argument error, 1 runtime failure.
int cli(int argc, const char* const* argv);

} // namespace ivs::phaselab
