#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "frop/grid.hpp"
#include "frop/kernel.hpp"
#include "frop/obstacle.hpp"
#include "frop/operator.hpp"
#include "frop/rearrangement.hpp"
#include "frop/slimit.hpp"

namespace frop {

/// Everything needed to rebuild the operator of a persisted run.
struct RunParameters {
    Domain domain = Domain::interval(-1.0, 1.0);
    int n = 0;
    KernelParams kernel;
    double beta = 0.0;
};

/// Field CSV: header row, node coordinates then value, comma separated,
/// 17-significant-digit floats.
void write_field_csv(const std::filesystem::path& path, const Grid& grid, const Field& f);
Field read_field_csv(const std::filesystem::path& path, const Grid& grid);

/// Binary dump of the dense operator: 16-byte header (magic "FLAP", u32 N,
/// u32 reserved) followed by row-major 64-bit floats.
void write_operator_binary(const std::filesystem::path& path, const NonlocalOperator& op);

void save_rearrangement(const std::filesystem::path& dir, const RunParameters& params,
                        const RearrangementSolution& sol);

struct LoadedRearrangement {
    RunParameters params;
    RearrangementSolution solution;
    Grid grid;
};
LoadedRearrangement load_rearrangement(const std::filesystem::path& dir);

void save_obstacle(const std::filesystem::path& dir, const RunParameters& params,
                   const ObstacleSolution& sol, const Grid& grid);

/// Sweep table: one CSV row per order, a JSON mirror, and gnuplot-ready
/// two-column files per metric.
void save_sweep(const std::filesystem::path& dir, const SweepTable& table);

std::string format_double(double v);

}  // namespace frop
