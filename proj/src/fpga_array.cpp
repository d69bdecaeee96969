#include "cntfpga/fpga_array.hpp"

#include <stdexcept>

namespace cntfpga {

FpgaArray build_array(const ArrayGeometry& g) {
    if (g.n_rows < 1 || g.n_cols < 1)
        throw std::invalid_argument("build_array: grid must be at least 1x1");
    if (g.lut_inputs < 2 || g.lut_inputs > 8)
        throw std::invalid_argument("build_array: lut_inputs must be in [2, 8]");
    if (g.luts_per_clb < 1)
        throw std::invalid_argument("build_array: luts_per_clb must be positive");

    FpgaArray a;
    a.geometry = g;
    a.clbs.resize(static_cast<size_t>(g.n_rows) * g.n_cols);
    for (Clb& clb : a.clbs) {
        clb.luts.reserve(g.luts_per_clb);
        for (int i = 0; i < g.luts_per_clb; ++i) clb.luts.push_back(make_lut(g.lut_inputs));
        clb.carry.assign(g.luts_per_clb, CarryChainStage{});
    }
    return a;
}

}  // namespace cntfpga
