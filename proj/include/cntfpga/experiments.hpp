#pragma once
// The six shipped studies. Each has a pure core that returns numbers and a
// writer that lays CSV/JSON files into the output directory next to a
// manifest. Cores are deterministic in (config, seed) regardless of worker
// count; only the coordinating thread touches the filesystem.

#include <cstdint>
#include <string>
#include <vector>

#include "cntfpga/array_test.hpp"
#include "cntfpga/clb_test.hpp"
#include "cntfpga/config.hpp"
#include "cntfpga/redundancy.hpp"
#include "cntfpga/ring_oscillator.hpp"

namespace cntfpga {

inline constexpr const char* kToolVersion = "0.1.0";

struct ChiralityPoint {
    double p_metal = 0.0;
    int samples = 0;
    double mean_resistance_ohm = 0.0;
    double mean_delay_s = 0.0;
};

struct ChiralitySampleRow {
    double p_metal = 0.0;
    int sample = 0;
    double d_max_nm = 0.0;
    int shells = 0;
    int metallic = 0;
    double r_ohm = 0.0;
    double delay_s = 0.0;
};

struct ChiralityStudy {
    std::vector<ChiralityPoint> points;
    std::vector<ChiralitySampleRow> samples;
    double delay_reduction_pct = 0.0;  // first point vs last point
};

ChiralityStudy run_chirality_study(const RunConfig& c);

struct RoStudy {
    std::vector<RoMeasurement> measurements;
    DelayFaultReport report;
    double nominal_loop_s = 0.0;
};

RoStudy run_ro_study(const RunConfig& c);

struct ClbRow {
    int clb_id = 0;
    SessionStyle style = SessionStyle::Traditional;
    int detected_faults = 0;
};

struct ClbStyleSummary {
    SessionStyle style = SessionStyle::Traditional;
    int configs = 0;
    long patterns = 0;
    double time_s = 0.0;
    long clbs_failing = 0;
};

struct ClbKRow {
    int k = 0;
    double t_traditional_s = 0.0;
    double t_improved_s = 0.0;
    double reduction_pct = 0.0;
};

struct ClbStudy {
    std::vector<ClbRow> rows;
    std::vector<ClbStyleSummary> styles;
    std::vector<ClbKRow> k_table;          // k = 2..8 on configured timing
    double avg_reduction_pct_k3_6 = 0.0;
};

ClbStudy run_clb_study(const RunConfig& c);

struct ArraySweepRow {
    std::string sweep;  // "step" or "density"
    TestMethod method = TestMethod::Recursive;
    int step = 4;
    double p_m = 0.0;
    double coverage_pct = 0.0;   // mean over samples
    double overhead_pct = 0.0;   // mean over samples, single-step = 100
    double mean_probes = 0.0;
    double mean_segments = 0.0;
};

struct ArrayStudy {
    std::vector<ArraySweepRow> rows;
};

ArrayStudy run_array_study(const RunConfig& c);

const ArraySweepRow* find_sweep_row(const ArrayStudy& s,
                                    const std::string& sweep,
                                    TestMethod method,
                                    int step,
                                    double p_m);

struct InjectStudy {
    FaultMap map;
    std::vector<MethodKindReport> methods;
};

InjectStudy run_inject_study(const RunConfig& c);

struct RepairSampleRow {
    int scheme_id = 0;
    int sample = 0;
    long faulty_rows = 0;
    long repaired = 0;
};

struct RepairStudy {
    std::vector<RepairSampleRow> rows;
    std::vector<SchemeOutcome> summary;  // pooled over samples
};

RepairStudy run_repair_study(const RunConfig& c);

// Row-major text grid of 0/1 characters, one line per tile row.
std::vector<uint8_t> load_mask(const std::string& path, const ArrayGeometry& g);

// Dispatch by config.experiment, write outputs under config.output_dir.
// Returns the list of files written (manifest last).
std::vector<std::string> run_experiment(const RunConfig& c);

}  // namespace cntfpga
