#pragma once
// The island-style array: a grid of CLB tiles, four LUTs plus a carry chain
// per tile. build_array produces a fault-free device with all-zero configs;
// defect injection and test procedures mutate or read it from there.

#include <cstdint>
#include <vector>

#include "cntfpga/carry_chain.hpp"
#include "cntfpga/geometry.hpp"
#include "cntfpga/lut.hpp"

namespace cntfpga {

struct Clb {
    std::vector<LutInstance> luts;
    std::vector<CarryChainStage> carry;  // one stage per LUT
};

struct FpgaArray {
    ArrayGeometry geometry;
    std::vector<Clb> clbs;  // row-major, n_rows * n_cols

    Clb& at(int row, int col) { return clbs[static_cast<size_t>(row) * geometry.n_cols + col]; }
    const Clb& at(int row, int col) const {
        return clbs[static_cast<size_t>(row) * geometry.n_cols + col];
    }
};

FpgaArray build_array(const ArrayGeometry& g);

}  // namespace cntfpga
