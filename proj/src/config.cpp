#include "cntfpga/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cntfpga {

using nlohmann::json;

RunConfig default_config() {
    RunConfig c;

    // Array-test defect climate: short segments, a handful of tiles wide.
    c.defect.p_m = 0.0612;
    c.defect.p_rm = 0.0;
    c.defect.l_mu_um = 39.0;
    c.defect.l_sigma_um = 5.0;
    c.defect.p_mis = 0.12;
    c.defect.angle_sigma_deg = 14.0;
    c.defect.p_open = 0.0;

    // Repair-study defect climate: rare short tubes, half misaligned by a
    // few degrees.
    c.repair_defect.p_m = 3.0e-6;
    c.repair_defect.p_rm = 0.0;
    c.repair_defect.l_mu_um = 100.0;
    c.repair_defect.l_sigma_um = 12.0;
    c.repair_defect.p_mis = 0.5;
    c.repair_defect.angle_sigma_deg = 3.0;
    c.repair_defect.p_open = 0.0;
    return c;
}

namespace {

template <typename T>
void get_to(const json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

void parse_geometry(const json& j, ArrayGeometry& g) {
    get_to(j, "rows", g.n_rows);
    get_to(j, "cols", g.n_cols);
    get_to(j, "luts_per_clb", g.luts_per_clb);
    get_to(j, "lut_inputs", g.lut_inputs);
    get_to(j, "clb_area_transistors", g.clb_area_transistors);
    get_to(j, "transistor_area_um2", g.transistor_area_um2);
}

void parse_defect(const json& j, DefectParams& d) {
    get_to(j, "p_m", d.p_m);
    get_to(j, "p_rm", d.p_rm);
    get_to(j, "l_mu_um", d.l_mu_um);
    get_to(j, "l_sigma_um", d.l_sigma_um);
    get_to(j, "p_mis", d.p_mis);
    get_to(j, "angle_sigma_deg", d.angle_sigma_deg);
    get_to(j, "p_open", d.p_open);
}

json geometry_json(const ArrayGeometry& g) {
    return json{{"rows", g.n_rows},
                {"cols", g.n_cols},
                {"luts_per_clb", g.luts_per_clb},
                {"lut_inputs", g.lut_inputs},
                {"clb_area_transistors", g.clb_area_transistors},
                {"transistor_area_um2", g.transistor_area_um2}};
}

json defect_json(const DefectParams& d) {
    return json{{"p_m", d.p_m},
                {"p_rm", d.p_rm},
                {"l_mu_um", d.l_mu_um},
                {"l_sigma_um", d.l_sigma_um},
                {"p_mis", d.p_mis},
                {"angle_sigma_deg", d.angle_sigma_deg},
                {"p_open", d.p_open}};
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config parse error: ") + e.what());
    }

    RunConfig c = default_config();
    get_to(j, "experiment", c.experiment);
    get_to(j, "samples", c.samples);
    get_to(j, "master_seed", c.master_seed);
    get_to(j, "output_dir", c.output_dir);
    get_to(j, "workers", c.workers);

    if (j.contains("geometry")) parse_geometry(j.at("geometry"), c.geometry);
    if (j.contains("defect")) parse_defect(j.at("defect"), c.defect);

    if (j.contains("process")) {
        const json& p = j.at("process");
        get_to(p, "mu_d_nm", c.process.mu_d_nm);
        get_to(p, "sigma_d_nm", c.process.sigma_d_nm);
        get_to(p, "p_metal", c.process.p_metal);
    }
    if (j.contains("delay")) {
        const json& d = j.at("delay");
        get_to(d, "mfp_um_per_nm", c.delay.mfp_um_per_nm);
        get_to(d, "contact_resistance_ohm", c.delay.contact_resistance_ohm);
        get_to(d, "cap_per_um_f", c.delay.cap_per_um_f);
        get_to(d, "load_capacitance_f", c.delay.load_capacitance_f);
        get_to(d, "driver_resistance_ohm", c.delay.driver_resistance_ohm);
        get_to(d, "lut_stage_delay_s", c.delay.lut_stage_delay_s);
        get_to(d, "calibration_scale", c.delay.calibration_scale);
        get_to(d, "dead_bundle_conductance", c.delay.dead_bundle_conductance);
    }
    if (j.contains("ro")) {
        const json& r = j.at("ro");
        get_to(r, "stages", c.ro.stages);
        get_to(r, "trials", c.ro.trials);
        get_to(r, "noise_pct", c.ro.noise_pct);
        get_to(r, "threshold_sigmas", c.ro.threshold_sigmas);
    }
    if (j.contains("timing")) {
        const json& t = j.at("timing");
        get_to(t, "t_config_s", c.timing.t_config_s);
        get_to(t, "t_pattern_s", c.timing.t_pattern_s);
        get_to(t, "t_session_s", c.timing.t_session_s);
    }
    if (j.contains("chirality")) {
        const json& h = j.at("chirality");
        get_to(h, "p_metal_points", c.p_metal_points);
        get_to(h, "samples", c.chirality_samples);
    }
    if (j.contains("test")) {
        const json& t = j.at("test");
        get_to(t, "steps", c.steps);
        get_to(t, "density_sweep", c.density_sweep);
        get_to(t, "step_ref", c.step_ref);
        get_to(t, "mask", c.mask_path);
    }
    if (j.contains("inject")) {
        const json& i = j.at("inject");
        get_to(i, "pattern", c.inject_pattern);
        get_to(i, "clusters", c.clusters);
        get_to(i, "random_fraction", c.random_fraction);
        if (i.contains("counts")) {
            const json& n = i.at("counts");
            get_to(n, "stuck_at0", c.inject_counts.stuck_at0);
            get_to(n, "stuck_at1", c.inject_counts.stuck_at1);
            get_to(n, "mux_override", c.inject_counts.mux_override);
        }
        if (i.contains("geometry")) parse_geometry(i.at("geometry"), c.inject_geometry);
    }
    if (j.contains("redundancy")) {
        const json& r = j.at("redundancy");
        get_to(r, "schemes", c.schemes);
        if (r.contains("geometry")) parse_geometry(r.at("geometry"), c.repair_geometry);
        if (r.contains("defect")) parse_defect(r.at("defect"), c.repair_defect);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["samples"] = c.samples;
    j["master_seed"] = c.master_seed;
    j["output_dir"] = c.output_dir;
    j["workers"] = c.workers;
    j["geometry"] = geometry_json(c.geometry);
    j["defect"] = defect_json(c.defect);
    j["process"] = json{{"mu_d_nm", c.process.mu_d_nm},
                        {"sigma_d_nm", c.process.sigma_d_nm},
                        {"p_metal", c.process.p_metal}};
    j["delay"] = json{{"mfp_um_per_nm", c.delay.mfp_um_per_nm},
                      {"contact_resistance_ohm", c.delay.contact_resistance_ohm},
                      {"cap_per_um_f", c.delay.cap_per_um_f},
                      {"load_capacitance_f", c.delay.load_capacitance_f},
                      {"driver_resistance_ohm", c.delay.driver_resistance_ohm},
                      {"lut_stage_delay_s", c.delay.lut_stage_delay_s},
                      {"calibration_scale", c.delay.calibration_scale},
                      {"dead_bundle_conductance", c.delay.dead_bundle_conductance}};
    j["ro"] = json{{"stages", c.ro.stages},
                   {"trials", c.ro.trials},
                   {"noise_pct", c.ro.noise_pct},
                   {"threshold_sigmas", c.ro.threshold_sigmas}};
    j["timing"] = json{{"t_config_s", c.timing.t_config_s},
                       {"t_pattern_s", c.timing.t_pattern_s},
                       {"t_session_s", c.timing.t_session_s}};
    j["chirality"] = json{{"p_metal_points", c.p_metal_points},
                          {"samples", c.chirality_samples}};
    j["test"] = json{{"steps", c.steps},
                     {"density_sweep", c.density_sweep},
                     {"step_ref", c.step_ref},
                     {"mask", c.mask_path}};
    j["inject"] = json{{"pattern", c.inject_pattern},
                       {"clusters", c.clusters},
                       {"random_fraction", c.random_fraction},
                       {"counts", json{{"stuck_at0", c.inject_counts.stuck_at0},
                                       {"stuck_at1", c.inject_counts.stuck_at1},
                                       {"mux_override", c.inject_counts.mux_override}}},
                       {"geometry", geometry_json(c.inject_geometry)}};
    j["redundancy"] = json{{"schemes", c.schemes},
                           {"geometry", geometry_json(c.repair_geometry)},
                           {"defect", defect_json(c.repair_defect)}};
    return j.dump(2);
}

uint64_t config_hash(const RunConfig& c) {
    const std::string s = config_to_json(c);
    uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    for (const char ch : s) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

void check_prob(std::vector<std::string>& errs, double v, const std::string& name) {
    if (v < 0.0 || v > 1.0) errs.push_back(name + " must be in [0, 1]");
}

void check_geometry(std::vector<std::string>& errs, const ArrayGeometry& g,
                    const std::string& prefix) {
    if (g.n_rows < 1 || g.n_cols < 1) errs.push_back(prefix + ": grid must be at least 1x1");
    if (g.lut_inputs < 2 || g.lut_inputs > 8)
        errs.push_back(prefix + ": lut_inputs must be in [2, 8]");
    if (g.luts_per_clb < 1) errs.push_back(prefix + ": luts_per_clb must be positive");
    if (g.clb_area_transistors <= 0.0 || g.transistor_area_um2 <= 0.0)
        errs.push_back(prefix + ": areas must be positive");
}

void check_defect(std::vector<std::string>& errs, const DefectParams& d,
                  const std::string& prefix) {
    check_prob(errs, d.p_m, prefix + ".p_m");
    check_prob(errs, d.p_rm, prefix + ".p_rm");
    check_prob(errs, d.p_mis, prefix + ".p_mis");
    check_prob(errs, d.p_open, prefix + ".p_open");
    if (d.l_mu_um <= 0.0) errs.push_back(prefix + ".l_mu_um must be positive");
    if (d.l_sigma_um < 0.0) errs.push_back(prefix + ".l_sigma_um must be non-negative");
    if (d.angle_sigma_deg < 0.0) errs.push_back(prefix + ".angle_sigma_deg must be non-negative");
}

}  // namespace

std::vector<std::string> validate_config(const RunConfig& c) {
    std::vector<std::string> errs;

    static const char* known[] = {"delay", "ro-test", "clb-test", "array-test", "inject", "repair"};
    bool ok = false;
    for (const char* k : known) ok = ok || c.experiment == k;
    if (!ok) errs.push_back("unknown experiment: " + c.experiment);

    if (c.samples < 1) errs.push_back("samples must be positive");
    if (c.workers < 1) errs.push_back("workers must be positive");
    if (c.chirality_samples < 1) errs.push_back("chirality.samples must be positive");

    check_geometry(errs, c.geometry, "geometry");
    check_geometry(errs, c.inject_geometry, "inject.geometry");
    check_geometry(errs, c.repair_geometry, "redundancy.geometry");
    check_defect(errs, c.defect, "defect");
    check_defect(errs, c.repair_defect, "redundancy.defect");

    check_prob(errs, c.process.p_metal, "process.p_metal");
    if (c.process.mu_d_nm <= 0.0) errs.push_back("process.mu_d_nm must be positive");
    if (c.process.sigma_d_nm < 0.0) errs.push_back("process.sigma_d_nm must be non-negative");
    for (const double p : c.p_metal_points) check_prob(errs, p, "chirality.p_metal_points");

    if (c.ro.stages < 3 || c.ro.stages % 2 == 0)
        errs.push_back("ro.stages must be odd and at least 3");
    if (c.ro.trials < 1) errs.push_back("ro.trials must be positive");
    if (c.ro.noise_pct < 0.0) errs.push_back("ro.noise_pct must be non-negative");

    if (c.timing.t_config_s < 0.0 || c.timing.t_pattern_s < 0.0 || c.timing.t_session_s < 0.0)
        errs.push_back("timing values must be non-negative");

    auto check_step = [&](int s) {
        if (s < 1)
            errs.push_back("test step must be positive");
        else if (s > 1 && s % 2 == 1)
            errs.push_back("test step " + std::to_string(s) +
                           " is odd; the jump schedule needs an even stride");
    };
    for (const int s : c.steps) check_step(s);
    check_step(c.step_ref);
    for (const double p : c.density_sweep) check_prob(errs, p, "test.density_sweep");
    if (!c.mask_path.empty() && !std::filesystem::exists(c.mask_path))
        errs.push_back("mask file not found: " + c.mask_path);

    if (c.inject_pattern != "random" && c.inject_pattern != "clustered")
        errs.push_back("inject.pattern must be random or clustered");
    if (c.inject_counts.stuck_at0 < 0 || c.inject_counts.stuck_at1 < 0 ||
        c.inject_counts.mux_override < 0)
        errs.push_back("inject.counts must be non-negative");
    if (c.clusters < 1) errs.push_back("inject.clusters must be positive");
    check_prob(errs, c.random_fraction, "inject.random_fraction");

    for (const int s : c.schemes)
        if (s < 0 || s > 7) errs.push_back("redundancy scheme ids must be in [0, 7]");

    return errs;
}

}  // namespace cntfpga
