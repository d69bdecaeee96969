#include "cntfpga/geometry.hpp"

#include <cmath>

namespace cntfpga {

double clb_pitch_um(const ArrayGeometry& g) {
    if (g.clb_area_transistors <= 0.0 || g.transistor_area_um2 <= 0.0)
        throw std::invalid_argument("clb_pitch_um: areas must be positive");
    return std::sqrt(g.clb_area_transistors * g.transistor_area_um2);
}

double ArrayGeometry::width_um() const { return n_cols * clb_pitch_um(*this); }
double ArrayGeometry::height_um() const { return n_rows * clb_pitch_um(*this); }

}  // namespace cntfpga
