#pragma once
// Array floorplan. One tile is one CLB; pitch is derived from the transistor
// budget per CLB times the per-transistor area, so it scales with technology.

#include <cstdint>
#include <stdexcept>

namespace cntfpga {

struct ArrayGeometry {
    int n_rows = 49;
    int n_cols = 49;
    int luts_per_clb = 4;
    int lut_inputs = 6;
    double clb_area_transistors = 27698.0;
    double transistor_area_um2 = 0.0022;

    int n_tiles() const { return n_rows * n_cols; }
    int n_luts() const { return n_tiles() * luts_per_clb; }
    double width_um() const;
    double height_um() const;
};

// Edge length of one square CLB tile in micrometers.
double clb_pitch_um(const ArrayGeometry& g);

}  // namespace cntfpga
