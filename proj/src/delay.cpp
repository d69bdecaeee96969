#include "cntfpga/delay.hpp"

#include <stdexcept>

namespace cntfpga {

namespace {

void fill_shells(MwcntSpec& s) {
    s.shell_d_nm.clear();
    const double d_min = s.d_max_nm / 2.0;
    for (double d = s.d_max_nm; d > d_min - 1e-9; d -= kShellStepNm)
        s.shell_d_nm.push_back(d);
}

double shell_resistance_ohm(double d_nm, double length_um, const DelayModelParams& m) {
    const double mfp_um = m.mfp_um_per_nm * d_nm;
    return m.contact_resistance_ohm + kQuantumResistanceOhm * length_um / mfp_um;
}

}  // namespace

MwcntSpec sample_mwcnt(Rng& rng, const CntProcessParams& p) {
    MwcntSpec s;
    do {
        s.d_max_nm = rng.normal(p.mu_d_nm, p.sigma_d_nm);
    } while (s.d_max_nm <= 0.0);
    fill_shells(s);
    s.shell_metallic.resize(s.shell_d_nm.size());
    for (size_t i = 0; i < s.shell_metallic.size(); ++i)
        s.shell_metallic[i] = rng.bernoulli(p.p_metal) ? 1 : 0;
    return s;
}

MwcntSpec nominal_mwcnt(const CntProcessParams& p) {
    MwcntSpec s;
    s.d_max_nm = p.mu_d_nm;
    fill_shells(s);
    s.shell_metallic.assign(s.shell_d_nm.size(), 1);
    return s;
}

double bundle_resistance_ohm(const MwcntSpec& spec, double length_um, const DelayModelParams& m) {
    if (length_um <= 0.0) throw std::invalid_argument("bundle_resistance_ohm: length must be positive");
    if (spec.shell_d_nm.empty() || spec.shell_d_nm.size() != spec.shell_metallic.size())
        throw std::invalid_argument("bundle_resistance_ohm: malformed shell spec");
    double conductance = 0.0;
    for (size_t i = 0; i < spec.shell_d_nm.size(); ++i)
        if (spec.shell_metallic[i])
            conductance += 1.0 / shell_resistance_ohm(spec.shell_d_nm[i], length_um, m);
    if (conductance > 0.0) return 1.0 / conductance;
    // All-semiconducting bundle: innermost shell limps along at a fixed
    // fraction of its metallic conductance.
    const double r_inner = shell_resistance_ohm(spec.shell_d_nm.back(), length_um, m);
    return r_inner / m.dead_bundle_conductance;
}

double segment_delay_s(const MwcntSpec& spec, double length_um, const DelayModelParams& m) {
    const double r = m.driver_resistance_ohm + bundle_resistance_ohm(spec, length_um, m);
    const double c = m.cap_per_um_f * length_um + m.load_capacitance_f;
    return m.calibration_scale * 0.69 * r * c;
}

}  // namespace cntfpga
