#pragma once
// Run configuration: one JSON file, every key optional, defaults match the
// desk-scale study. CLI flags override after parsing. The config hash feeds
// the output manifest so a result directory is traceable to its inputs.

#include <cstdint>
#include <string>
#include <vector>

#include "cntfpga/clb_test.hpp"
#include "cntfpga/defects.hpp"
#include "cntfpga/delay.hpp"
#include "cntfpga/geometry.hpp"
#include "cntfpga/ring_oscillator.hpp"

namespace cntfpga {

struct RunConfig {
    std::string experiment = "ro-test";
    int samples = 1000;
    uint64_t master_seed = 42;
    std::string output_dir = "out";
    int workers = 1;

    ArrayGeometry geometry;
    DefectParams defect;
    CntProcessParams process;
    DelayModelParams delay;
    RoParams ro;
    TimingParams timing;

    // delay experiment: chirality sweep
    std::vector<double> p_metal_points = {1.0 / 3.0, 0.53};
    int chirality_samples = 10000;

    // array-test experiment
    std::vector<int> steps = {4, 8, 12, 16, 20};
    std::vector<double> density_sweep = {1e-4, 0.02, 0.04, 0.06};
    int step_ref = 4;
    std::string mask_path;

    // inject experiment
    std::string inject_pattern = "clustered";
    int clusters = 270;
    double random_fraction = 0.135;
    InjectCounts inject_counts{22121, 14764, 14693};
    ArrayGeometry inject_geometry{391, 391, 4, 6, 27698.0, 0.0022};

    // repair experiment
    std::vector<int> schemes = {0, 1, 2, 3, 4, 5, 6, 7};
    ArrayGeometry repair_geometry{608, 608, 4, 6, 27698.0, 0.0022};
    DefectParams repair_defect;
};

// Built-in defaults; the repair defect block is tuned separately from the
// array-test one because the two studies model different manufacturing runs.
RunConfig default_config();

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);
std::string config_to_json(const RunConfig& c);
uint64_t config_hash(const RunConfig& c);

// Human-readable problems; empty means the config is runnable.
std::vector<std::string> validate_config(const RunConfig& c);

}  // namespace cntfpga
