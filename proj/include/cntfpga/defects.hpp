#pragma once
// Metallic-CNT defect synthesis and the geometric mapping onto LUT faults.
// Defects grow along the x axis (one per candidate lattice site at most),
// misaligned ones drift across CLB rows at a shallow angle. Each CLB stacks
// its four LUTs as horizontal bands, so the band a segment passes through
// decides which LUT it poisons: a full-width crossing shorts the select tree
// (always-select), a graze clips one cell line (stuck-at, polarity alternates
// by row), anything between bridges an adjacent cell pair (wired AND/OR).
// Removed defects vanish unless the removal itself left an open line.

#include <cstdint>
#include <map>
#include <vector>

#include "cntfpga/fault.hpp"
#include "cntfpga/fpga_array.hpp"
#include "cntfpga/geometry.hpp"

namespace cntfpga {

struct DefectParams {
    double p_m = 1e-4;           // per-site defect probability
    double p_rm = 0.0;           // probability the removal pass kills a defect
    double l_mu_um = 57.0;       // defect length, truncated normal
    double l_sigma_um = 10.0;
    double p_mis = 0.05;         // chance the tube is misaligned at all
    double angle_sigma_deg = 1.0;
    double p_open = 0.0;         // removal collateral: broken line
};

struct MCntDefect {
    double x_um = 0.0;  // start point, growth runs toward +x
    double y_um = 0.0;
    double length_um = 0.0;
    double angle_deg = 0.0;  // from the growth axis, within (-90, 90)
    bool removed = false;
    bool opened = false;
};

// One candidate site per CLB lattice point; per-site substreams keep the
// defect population monotone in p_m under a shared seed.
std::vector<MCntDefect> sample_defects(const DefectParams& params,
                                       const ArrayGeometry& g,
                                       uint64_t seed);

struct FaultMap {
    int n_rows = 0;
    int n_cols = 0;
    int luts_per_clb = 4;
    int lut_inputs = 6;
    std::vector<FaultKind> lut_faults;       // row-major (row, col, lut)
    std::map<uint64_t, FaultKind> carry_faults;  // flat (row, col, stage), sparse
    std::vector<uint8_t> tile_faulty;        // row-major tiles

    FaultKind& at(int r, int c, int lut) {
        return lut_faults[(static_cast<size_t>(r) * n_cols + c) * luts_per_clb + lut];
    }
    const FaultKind& at(int r, int c, int lut) const {
        return lut_faults[(static_cast<size_t>(r) * n_cols + c) * luts_per_clb + lut];
    }
    bool tile(int r, int c) const {
        return tile_faulty[static_cast<size_t>(r) * n_cols + c] != 0;
    }
    void set_carry_fault(int r, int c, int stage, const FaultKind& f);
    void refresh_tile_flags();
    size_t faulty_tile_count() const;
    size_t faulty_lut_count() const;
};

FaultMap make_fault_map(const ArrayGeometry& g);

FaultMap map_defects_to_faults(const std::vector<MCntDefect>& defects,
                               const ArrayGeometry& g,
                               uint64_t seed);

// Copies the map's fault assignments onto a built device.
void apply_fault_map(FpgaArray& array, const FaultMap& map);

enum class InjectPattern { Random, Clustered };

struct InjectCounts {
    int stuck_at0 = 0;
    int stuck_at1 = 0;
    int mux_override = 0;
    int total() const { return stuck_at0 + stuck_at1 + mux_override; }
};

// Adds synthetic faults to free LUT sites. Random scatters uniformly;
// Clustered grows square neighborhoods ring by ring around seeded centers.
void inject_faults(FaultMap& map,
                   InjectPattern pattern,
                   const InjectCounts& counts,
                   uint64_t seed,
                   int clusters = 32);

FaultMap inject_faults(const ArrayGeometry& g,
                       InjectPattern pattern,
                       const InjectCounts& counts,
                       uint64_t seed,
                       int clusters = 32);

}  // namespace cntfpga
