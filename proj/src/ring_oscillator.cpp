#include "cntfpga/ring_oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cntfpga {

void load_ro_config(LutInstance& lut) {
    const uint32_t n = 1u << lut.k;
    lut.config_bits.assign(n, 0);
    for (uint32_t i = 0; i < n; ++i)
        lut.config_bits[i] = static_cast<uint8_t>(1u - (i & 1u));  // out = NOT I0
}

std::vector<RoCell> build_ro_partition(const ArrayGeometry& g,
                                       const CntProcessParams& process,
                                       int stages,
                                       uint64_t seed) {
    if (stages < 3 || stages % 2 == 0)
        throw std::invalid_argument("build_ro_partition: stages must be odd and at least 3");
    const uint64_t total = static_cast<uint64_t>(g.n_luts());
    const uint64_t count = total / stages;
    std::vector<RoCell> cells(count);
    for (uint64_t i = 0; i < count; ++i) {
        RoCell& c = cells[i];
        c.ro_id = static_cast<int>(i);
        c.lut_sites.resize(stages);
        for (int s = 0; s < stages; ++s) c.lut_sites[s] = i * stages + s;
        Rng rng(seed_stream(seed, i, 0xca11));
        c.hops.reserve(stages);
        for (int s = 0; s < stages; ++s) c.hops.push_back(sample_mwcnt(rng, process));
    }
    return cells;
}

double ro_loop_nominal_s(const MwcntSpec& reference,
                         double hop_length_um,
                         const DelayModelParams& m,
                         int stages) {
    return stages * (m.lut_stage_delay_s + segment_delay_s(reference, hop_length_um, m));
}

RoMeasurement measure_ro(const RoCell& cell,
                         double hop_length_um,
                         const DelayModelParams& m,
                         const RoParams& p,
                         uint64_t seed) {
    double loop = 0.0;
    for (const MwcntSpec& hop : cell.hops)
        loop += m.lut_stage_delay_s + segment_delay_s(hop, hop_length_um, m);

    Rng rng(seed_stream(seed, static_cast<uint64_t>(cell.ro_id), 0x0b5e));
    double sum = 0.0;
    for (int t = 0; t < p.trials; ++t) sum += loop + rng.normal(0.0, p.noise_pct * loop);
    return {cell.ro_id, sum / p.trials};
}

DelayFaultReport detect_delay_faults(const std::vector<RoMeasurement>& ms,
                                     double threshold_sigmas) {
    DelayFaultReport r;
    if (ms.empty()) return r;
    double sum = 0.0;
    r.min_s = ms.front().loop_delay_s;
    r.max_s = ms.front().loop_delay_s;
    for (const RoMeasurement& m : ms) {
        sum += m.loop_delay_s;
        r.min_s = std::min(r.min_s, m.loop_delay_s);
        r.max_s = std::max(r.max_s, m.loop_delay_s);
    }
    r.mean_s = sum / ms.size();
    double var = 0.0;
    for (const RoMeasurement& m : ms) {
        const double d = m.loop_delay_s - r.mean_s;
        var += d * d;
    }
    r.sigma_s = std::sqrt(var / ms.size());
    const double cut = r.mean_s + threshold_sigmas * r.sigma_s;
    for (const RoMeasurement& m : ms)
        if (m.loop_delay_s > cut) r.flagged_ro_ids.push_back(m.ro_id);
    return r;
}

}  // namespace cntfpga
