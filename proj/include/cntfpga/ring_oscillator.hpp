#pragma once
// Ring-oscillator BIST over the LUT fabric. LUT sites are walked row-major
// and chopped into closed loops of `stages` inverters; leftover sites stay
// untested. Each hop between stages rides one CNT bundle of CLB-pitch length.
// A loop is measured a few times with proportional gaussian jitter and the
// trial mean is reported; loops far above the population mean are flagged.

#include <cstdint>
#include <vector>

#include "cntfpga/delay.hpp"
#include "cntfpga/geometry.hpp"
#include "cntfpga/lut.hpp"

namespace cntfpga {

struct RoParams {
    int stages = 7;
    int trials = 3;
    double noise_pct = 0.01;        // sigma as a fraction of the loop delay
    double threshold_sigmas = 3.0;  // flag loops above mean + k * sigma
};

struct RoCell {
    int ro_id = 0;
    std::vector<uint64_t> lut_sites;  // flat row-major LUT indices
    std::vector<MwcntSpec> hops;      // one bundle per stage-to-stage link
};

struct RoMeasurement {
    int ro_id = 0;
    double loop_delay_s = 0.0;
};

// Configure a LUT as an inverter on input I0: an XNOR whose second leg is
// tied low. Cell index parity decides the output.
void load_ro_config(LutInstance& lut);

std::vector<RoCell> build_ro_partition(const ArrayGeometry& g,
                                       const CntProcessParams& process,
                                       int stages,
                                       uint64_t seed);

// Noiseless loop delay for a uniform reference bundle on every hop.
double ro_loop_nominal_s(const MwcntSpec& reference,
                         double hop_length_um,
                         const DelayModelParams& m,
                         int stages);

RoMeasurement measure_ro(const RoCell& cell,
                         double hop_length_um,
                         const DelayModelParams& m,
                         const RoParams& p,
                         uint64_t seed);

struct DelayFaultReport {
    double mean_s = 0.0;
    double sigma_s = 0.0;
    double min_s = 0.0;
    double max_s = 0.0;
    std::vector<int> flagged_ro_ids;
};

DelayFaultReport detect_delay_faults(const std::vector<RoMeasurement>& ms,
                                     double threshold_sigmas);

}  // namespace cntfpga
