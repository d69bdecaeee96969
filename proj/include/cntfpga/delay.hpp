#pragma once
// Interconnect delay through multi-wall CNT bundles. Shell diameters step
// down by 0.68 nm from the outer wall until half the outer diameter; each
// shell is metallic or semiconducting by chirality. Metallic shells conduct
// in parallel; a bundle with none is not open but horribly resistive, modeled
// as the innermost shell at one percent conductance. Segment delay is the
// usual 0.69 RC charge time against the driving mux resistance, scaled once
// against a reference technology.

#include <cstdint>
#include <vector>

#include "cntfpga/rng.hpp"

namespace cntfpga {

inline constexpr double kShellStepNm = 0.68;
inline constexpr double kQuantumResistanceOhm = 6453.2;  // h / 4e^2

struct CntProcessParams {
    double mu_d_nm = 11.0;
    double sigma_d_nm = 1.65;
    double p_metal = 1.0 / 3.0;
};

struct MwcntSpec {
    double d_max_nm = 11.0;
    std::vector<double> shell_d_nm;
    std::vector<uint8_t> shell_metallic;

    int metallic_count() const {
        int n = 0;
        for (uint8_t m : shell_metallic) n += m;
        return n;
    }
};

struct DelayModelParams {
    double mfp_um_per_nm = 1.0;             // mean free path per nm of shell diameter
    double contact_resistance_ohm = 3200.0;
    double cap_per_um_f = 2.0e-16;
    double load_capacitance_f = 1.0e-16;
    double driver_resistance_ohm = 61951.0;
    double lut_stage_delay_s = 384.92e-12;
    double calibration_scale = 0.011;
    double dead_bundle_conductance = 0.01;  // all-semiconducting fallback
};

// Outer diameter from a positive-truncated normal, then one chirality draw
// per shell.
MwcntSpec sample_mwcnt(Rng& rng, const CntProcessParams& p);

// Deterministic reference tube: nominal diameter, every shell metallic.
MwcntSpec nominal_mwcnt(const CntProcessParams& p);

double bundle_resistance_ohm(const MwcntSpec& spec, double length_um, const DelayModelParams& m);
double segment_delay_s(const MwcntSpec& spec, double length_um, const DelayModelParams& m);

}  // namespace cntfpga
