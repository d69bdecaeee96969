#include "cntfpga/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace cntfpga {

namespace {

using nlohmann::json;

// Work is indexed, results land in preallocated slots, so the output is the
// same no matter how many workers run.
void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string fmt(double v, int prec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string style_name(SessionStyle s) {
    switch (s) {
        case SessionStyle::Traditional: return "traditional";
        case SessionStyle::WithCarryChain: return "with-carry";
        case SessionStyle::Improved: return "improved";
    }
    return "traditional";
}

}  // namespace

ChiralityStudy run_chirality_study(const RunConfig& c) {
    const double pitch = clb_pitch_um(c.geometry);
    ChiralityStudy study;
    study.samples.reserve(static_cast<size_t>(c.p_metal_points.size()) * c.chirality_samples);
    for (size_t pi = 0; pi < c.p_metal_points.size(); ++pi) {
        CntProcessParams proc = c.process;
        proc.p_metal = c.p_metal_points[pi];
        ChiralityPoint point;
        point.p_metal = proc.p_metal;
        point.samples = c.chirality_samples;
        double r_sum = 0.0, d_sum = 0.0;
        for (int i = 0; i < c.chirality_samples; ++i) {
            Rng rng(seed_stream(c.master_seed, 0xdea1, pi, static_cast<uint64_t>(i)));
            const MwcntSpec spec = sample_mwcnt(rng, proc);
            const double r = bundle_resistance_ohm(spec, pitch, c.delay);
            const double d = segment_delay_s(spec, pitch, c.delay);
            r_sum += r;
            d_sum += d;
            study.samples.push_back({proc.p_metal, i, spec.d_max_nm,
                                     static_cast<int>(spec.shell_d_nm.size()),
                                     spec.metallic_count(), r, d});
        }
        point.mean_resistance_ohm = r_sum / c.chirality_samples;
        point.mean_delay_s = d_sum / c.chirality_samples;
        study.points.push_back(point);
    }
    if (study.points.size() >= 2) {
        const double first = study.points.front().mean_delay_s;
        const double last = study.points.back().mean_delay_s;
        study.delay_reduction_pct = (1.0 - last / first) * 100.0;
    }
    return study;
}

RoStudy run_ro_study(const RunConfig& c) {
    const double pitch = clb_pitch_um(c.geometry);
    RoStudy study;
    const auto cells =
        build_ro_partition(c.geometry, c.process, c.ro.stages, seed_stream(c.master_seed, 0xb1));
    study.measurements.resize(cells.size());
    parallel_for(static_cast<int>(cells.size()), c.workers, [&](int i) {
        study.measurements[i] =
            measure_ro(cells[i], pitch, c.delay, c.ro, seed_stream(c.master_seed, 0x0e));
    });
    study.report = detect_delay_faults(study.measurements, c.ro.threshold_sigmas);
    study.nominal_loop_s =
        ro_loop_nominal_s(nominal_mwcnt(c.process), pitch, c.delay, c.ro.stages);
    return study;
}

ClbStudy run_clb_study(const RunConfig& c) {
    FpgaArray array = build_array(c.geometry);
    if (c.defect.p_m > 0.0) {
        const auto defects =
            sample_defects(c.defect, c.geometry, seed_stream(c.master_seed, 0xdef));
        apply_fault_map(array, map_defects_to_faults(defects, c.geometry,
                                                     seed_stream(c.master_seed, 0xdef, 1)));
    }

    ClbStudy study;
    const SessionStyle all_styles[] = {SessionStyle::Traditional, SessionStyle::WithCarryChain,
                                       SessionStyle::Improved};
    const int n_clbs = c.geometry.n_tiles();
    for (const SessionStyle style : all_styles) {
        const TestSession session = gen_session(c.geometry.lut_inputs, style);
        ClbStyleSummary sum;
        sum.style = style;
        sum.configs = static_cast<int>(session.configs.size());
        sum.patterns = static_cast<long>(session.total_patterns());
        sum.time_s = estimate_test_time_s(session, c.timing);

        std::vector<ClbRow> rows(n_clbs);
        parallel_for(n_clbs, c.workers, [&](int i) {
            const SessionResult r = simulate_session(array.clbs[i], session);
            rows[i].clb_id = i;
            rows[i].style = style;
            rows[i].detected_faults =
                static_cast<int>(r.failing_luts.size()) + (r.carry_failed ? 1 : 0);
        });
        for (const ClbRow& r : rows) {
            if (r.detected_faults > 0) ++sum.clbs_failing;
            study.rows.push_back(r);
        }
        study.styles.push_back(sum);
    }

    double acc = 0.0;
    for (int k = 2; k <= 8; ++k) {
        ClbKRow row;
        row.k = k;
        row.t_traditional_s =
            estimate_test_time_s(gen_session(k, SessionStyle::Traditional), c.timing);
        row.t_improved_s = estimate_test_time_s(gen_session(k, SessionStyle::Improved), c.timing);
        row.reduction_pct = (1.0 - row.t_improved_s / row.t_traditional_s) * 100.0;
        if (k >= 3 && k <= 6) acc += row.reduction_pct;
        study.k_table.push_back(row);
    }
    study.avg_reduction_pct_k3_6 = acc / 4.0;
    return study;
}

ArrayStudy run_array_study(const RunConfig& c) {
    std::vector<uint8_t> mask_store;
    const std::vector<uint8_t>* mask = nullptr;
    if (!c.mask_path.empty()) {
        mask_store = load_mask(c.mask_path, c.geometry);
        mask = &mask_store;
    }

    struct Slot {
        const char* sweep;
        TestMethod method;
        int step;
        double p_m;
    };
    std::vector<Slot> slots;
    const TestMethod methods[] = {TestMethod::Recursive, TestMethod::FixedStep,
                                  TestMethod::SingleStep};
    for (const int step : c.steps)
        for (const TestMethod m : methods)
            slots.push_back({"step", m, m == TestMethod::SingleStep ? 1 : step, c.defect.p_m});
    for (const double pm : c.density_sweep)
        for (const TestMethod m : methods)
            slots.push_back({"density", m, m == TestMethod::SingleStep ? 1 : c.step_ref, pm});

    // Distinct defect densities; every slot reuses the same per-sample map.
    std::vector<double> densities;
    for (const Slot& s : slots)
        if (std::find(densities.begin(), densities.end(), s.p_m) == densities.end())
            densities.push_back(s.p_m);

    struct Acc {
        double coverage = 0.0, overhead = 0.0, probes = 0.0, segments = 0.0;
    };
    std::vector<std::vector<Acc>> per_sample(c.samples, std::vector<Acc>(slots.size()));

    parallel_for(c.samples, c.workers, [&](int i) {
        for (const double pm : densities) {
            DefectParams params = c.defect;
            params.p_m = pm;
            const auto defects = sample_defects(params, c.geometry,
                                                seed_stream(c.master_seed, 0xa77e, i));
            const FaultMap map = map_defects_to_faults(defects, c.geometry,
                                                       seed_stream(c.master_seed, 0xa77e, i, 1));
            for (size_t s = 0; s < slots.size(); ++s) {
                if (slots[s].p_m != pm) continue;
                const TestReport rep = run_array_test(map, slots[s].method, slots[s].step, mask);
                Acc& a = per_sample[i][s];
                a.coverage = rep.coverage;
                a.overhead = rep.overhead;
                a.probes = static_cast<double>(rep.probes);
                a.segments = static_cast<double>(rep.segments);
            }
        }
    });

    ArrayStudy study;
    for (size_t s = 0; s < slots.size(); ++s) {
        ArraySweepRow row;
        row.sweep = slots[s].sweep;
        row.method = slots[s].method;
        row.step = slots[s].step;
        row.p_m = slots[s].p_m;
        for (int i = 0; i < c.samples; ++i) {
            row.coverage_pct += per_sample[i][s].coverage;
            row.overhead_pct += per_sample[i][s].overhead;
            row.mean_probes += per_sample[i][s].probes;
            row.mean_segments += per_sample[i][s].segments;
        }
        row.coverage_pct *= 100.0 / c.samples;
        row.overhead_pct *= 100.0 / c.samples;
        row.mean_probes /= c.samples;
        row.mean_segments /= c.samples;
        study.rows.push_back(row);
    }
    return study;
}

const ArraySweepRow* find_sweep_row(const ArrayStudy& s,
                                    const std::string& sweep,
                                    TestMethod method,
                                    int step,
                                    double p_m) {
    for (const ArraySweepRow& r : s.rows) {
        if (r.sweep == sweep && r.method == method && r.step == step &&
            std::abs(r.p_m - p_m) <= 1e-12 * std::max(1.0, std::abs(p_m)))
            return &r;
    }
    return nullptr;
}

InjectStudy run_inject_study(const RunConfig& c) {
    InjectStudy study;
    study.map = make_fault_map(c.inject_geometry);

    if (c.inject_pattern == "clustered") {
        auto portion = [&](int n) { return n - static_cast<int>(std::lround(n * c.random_fraction)); };
        InjectCounts clustered{portion(c.inject_counts.stuck_at0),
                               portion(c.inject_counts.stuck_at1),
                               portion(c.inject_counts.mux_override)};
        InjectCounts scatter{c.inject_counts.stuck_at0 - clustered.stuck_at0,
                             c.inject_counts.stuck_at1 - clustered.stuck_at1,
                             c.inject_counts.mux_override - clustered.mux_override};
        inject_faults(study.map, InjectPattern::Clustered, clustered,
                      seed_stream(c.master_seed, 0xc1), c.clusters);
        inject_faults(study.map, InjectPattern::Random, scatter,
                      seed_stream(c.master_seed, 0xc2), c.clusters);
    } else {
        inject_faults(study.map, InjectPattern::Random, c.inject_counts,
                      seed_stream(c.master_seed, 0xc1), c.clusters);
    }

    const std::vector<std::pair<TestMethod, int>> methods = {
        {TestMethod::Recursive, c.step_ref},
        {TestMethod::FixedStep, c.step_ref},
        {TestMethod::SingleStep, 1},
    };
    study.methods = evaluate_fault_injection(study.map, methods);
    return study;
}

RepairStudy run_repair_study(const RunConfig& c) {
    RepairStudy study;
    const std::vector<int>& ids = c.schemes;
    std::vector<std::vector<SchemeSampleResult>> per_sample(c.samples);

    parallel_for(c.samples, c.workers, [&](int s) {
        const auto defects = sample_defects(c.repair_defect, c.repair_geometry,
                                            seed_stream(c.master_seed, static_cast<uint64_t>(s)));
        const FaultMap map = map_defects_to_faults(
            defects, c.repair_geometry, seed_stream(c.master_seed, s, 0xfa77));
        per_sample[s] = evaluate_schemes_on_map(map, c.repair_geometry, ids);
    });

    study.summary.resize(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) {
        const SharingScheme& sch = scheme_by_id(ids[i]);
        study.summary[i].scheme_id = sch.id;
        study.summary[i].rows_per_tile = scheme_rows_per_tile(sch);
        study.summary[i].overhead_pct = scheme_overhead_pct(sch);
    }
    for (int s = 0; s < c.samples; ++s) {
        for (size_t i = 0; i < ids.size(); ++i) {
            const SchemeSampleResult& r = per_sample[s][i];
            study.rows.push_back({r.scheme_id, s, r.faulty_rows, r.repaired});
            study.summary[i].faulty_rows += r.faulty_rows;
            study.summary[i].repaired += r.repaired;
        }
    }
    for (SchemeOutcome& o : study.summary)
        o.repair_rate_pct = o.faulty_rows == 0
                                ? 100.0
                                : 100.0 * static_cast<double>(o.repaired) / o.faulty_rows;
    return study;
}

std::vector<uint8_t> load_mask(const std::string& path, const ArrayGeometry& g) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mask file: " + path);
    std::vector<uint8_t> mask;
    mask.reserve(static_cast<size_t>(g.n_rows) * g.n_cols);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (static_cast<int>(line.size()) != g.n_cols)
            throw std::runtime_error("mask row width does not match the array");
        for (const char ch : line) {
            if (ch != '0' && ch != '1') throw std::runtime_error("mask must contain only 0/1");
            mask.push_back(ch == '1' ? 1 : 0);
        }
        ++rows;
    }
    if (rows != g.n_rows) throw std::runtime_error("mask row count does not match the array");
    return mask;
}

namespace {

struct OutputWriter {
    std::filesystem::path dir;
    std::vector<std::string> files;

    std::ofstream open(const std::string& name) {
        std::filesystem::create_directories(dir);
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file: " + name);
        files.push_back(name);
        return out;
    }
};

void write_manifest(OutputWriter& w, const RunConfig& c) {
    json m;
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(config_hash(c)));
    m["experiment"] = c.experiment;
    m["config_hash"] = hex;
    m["master_seed"] = c.master_seed;
    m["samples"] = c.samples;
    m["tool_version"] = kToolVersion;
    m["outputs"] = w.files;
    auto out = w.open("manifest.json");
    out << m.dump(2) << "\n";
}

void write_delay(OutputWriter& w, const RunConfig& c, const ChiralityStudy& s) {
    {
        auto out = w.open("delay_samples.csv");
        out << "p_metal,sample,d_max_nm,shells,metallic_shells,r_bundle_ohm,delay_ns\n";
        for (const auto& r : s.samples)
            out << fmt(r.p_metal, 6) << ',' << r.sample << ',' << fmt(r.d_max_nm, 4) << ','
                << r.shells << ',' << r.metallic << ',' << fmt(r.r_ohm, 3) << ','
                << fmt(r.delay_s * 1e9, 6) << "\n";
    }
    {
        auto out = w.open("delay_summary.csv");
        out << "p_metal,samples,mean_r_ohm,mean_delay_ns,reduction_from_first_pct\n";
        const double first = s.points.empty() ? 1.0 : s.points.front().mean_delay_s;
        for (const auto& p : s.points)
            out << fmt(p.p_metal, 6) << ',' << p.samples << ',' << fmt(p.mean_resistance_ohm, 3)
                << ',' << fmt(p.mean_delay_s * 1e9, 6) << ','
                << fmt((1.0 - p.mean_delay_s / first) * 100.0, 4) << "\n";
    }
}

void write_ro(OutputWriter& w, const RunConfig& c, const RoStudy& s) {
    {
        auto out = w.open("ro_delays.csv");
        out << "ro_id,loop_delay_ns,flagged\n";
        std::vector<uint8_t> is_flagged(s.measurements.size(), 0);
        for (const int id : s.report.flagged_ro_ids)
            if (id >= 0 && static_cast<size_t>(id) < is_flagged.size()) is_flagged[id] = 1;
        for (const RoMeasurement& m : s.measurements)
            out << m.ro_id << ',' << fmt(m.loop_delay_s * 1e9, 6) << ','
                << int(is_flagged[m.ro_id]) << "\n";
    }
    {
        json h;
        h["n"] = s.measurements.size();
        h["mean_ns"] = s.report.mean_s * 1e9;
        h["std_ps"] = s.report.sigma_s * 1e12;
        h["min_ns"] = s.report.min_s * 1e9;
        h["max_ns"] = s.report.max_s * 1e9;
        h["range_ps"] = (s.report.max_s - s.report.min_s) * 1e12;
        h["nominal_ns"] = s.nominal_loop_s * 1e9;
        h["threshold_sigmas"] = c.ro.threshold_sigmas;
        h["flagged"] = s.report.flagged_ro_ids;
        auto out = w.open("ro_histogram.json");
        out << h.dump(2) << "\n";
    }
}

void write_clb(OutputWriter& w, const RunConfig& c, const ClbStudy& s) {
    {
        auto out = w.open("clb_test_report.csv");
        out << "clb_id,style,configs,patterns,time_s,detected_faults\n";
        for (const ClbRow& r : s.rows) {
            const ClbStyleSummary* sum = nullptr;
            for (const auto& st : s.styles)
                if (st.style == r.style) sum = &st;
            out << r.clb_id << ',' << style_name(r.style) << ',' << sum->configs << ','
                << sum->patterns << ',' << fmt(sum->time_s, 6) << ',' << r.detected_faults
                << "\n";
        }
    }
    {
        json j;
        j["k"] = c.geometry.lut_inputs;
        j["styles"] = json::array();
        for (const auto& st : s.styles)
            j["styles"].push_back(json{{"style", style_name(st.style)},
                                       {"configs", st.configs},
                                       {"patterns", st.patterns},
                                       {"time_s", st.time_s},
                                       {"clbs_failing", st.clbs_failing}});
        j["k_table"] = json::array();
        for (const auto& row : s.k_table)
            j["k_table"].push_back(json{{"k", row.k},
                                        {"t_traditional_s", row.t_traditional_s},
                                        {"t_improved_s", row.t_improved_s},
                                        {"reduction_pct", row.reduction_pct}});
        j["avg_reduction_pct_k3_6"] = s.avg_reduction_pct_k3_6;
        auto out = w.open("sessions.json");
        out << j.dump(2) << "\n";
    }
}

void write_array(OutputWriter& w, const ArrayStudy& s) {
    auto out = w.open("array_test_report.csv");
    out << "sweep,method,step,p_m,coverage_pct,overhead_pct,mean_probes,mean_segments\n";
    for (const ArraySweepRow& r : s.rows)
        out << r.sweep << ',' << method_name(r.method) << ',' << r.step << ',' << fmt_g(r.p_m)
            << ',' << fmt(r.coverage_pct, 4) << ',' << fmt(r.overhead_pct, 4) << ','
            << fmt(r.mean_probes, 2) << ',' << fmt(r.mean_segments, 3) << "\n";
}

void write_inject(OutputWriter& w, const InjectStudy& s) {
    {
        auto out = w.open("inject_report.csv");
        out << "method,step,kind,injected,detected,detected_pct\n";
        for (const MethodKindReport& m : s.methods) {
            long inj_total = 0, det_total = 0;
            for (const auto& [kind, tally] : m.kinds) {
                out << method_name(m.method) << ',' << m.step << ',' << kind << ','
                    << tally.injected << ',' << tally.detected << ','
                    << fmt(tally.injected ? 100.0 * tally.detected / tally.injected : 0.0, 4)
                    << "\n";
                inj_total += tally.injected;
                det_total += tally.detected;
            }
            out << method_name(m.method) << ',' << m.step << ",total," << inj_total << ','
                << det_total << ','
                << fmt(inj_total ? 100.0 * det_total / inj_total : 0.0, 4) << "\n";
        }
    }
    {
        auto out = w.open("fault_map.csv");
        out << "row,col,lut,kind\n";
        for (int r = 0; r < s.map.n_rows; ++r)
            for (int c = 0; c < s.map.n_cols; ++c)
                for (int l = 0; l < s.map.luts_per_clb; ++l) {
                    const FaultKind& f = s.map.at(r, c, l);
                    if (!f.is_none())
                        out << r << ',' << c << ',' << l << ',' << fault_code(f) << "\n";
                }
    }
}

void write_repair(OutputWriter& w, const RepairStudy& s) {
    {
        auto out = w.open("repair_report.csv");
        out << "scheme,sample,faulty_rows,repaired,repair_rate,rows_per_tile,"
               "normalized_overhead_pct\n";
        for (const RepairSampleRow& r : s.rows) {
            const SharingScheme& sch = scheme_by_id(r.scheme_id);
            const double rate =
                r.faulty_rows == 0 ? 1.0 : static_cast<double>(r.repaired) / r.faulty_rows;
            out << r.scheme_id << ',' << r.sample << ',' << r.faulty_rows << ',' << r.repaired
                << ',' << fmt(rate, 6) << ',' << fmt(scheme_rows_per_tile(sch), 4) << ','
                << fmt(scheme_overhead_pct(sch), 1) << "\n";
        }
    }
    {
        auto out = w.open("repair_summary.csv");
        out << "scheme,faulty_rows,repaired,repair_rate_pct,rows_per_tile,"
               "normalized_overhead_pct\n";
        for (const SchemeOutcome& o : s.summary)
            out << o.scheme_id << ',' << o.faulty_rows << ',' << o.repaired << ','
                << fmt(o.repair_rate_pct, 4) << ',' << fmt(o.rows_per_tile, 4) << ','
                << fmt(o.overhead_pct, 1) << "\n";
    }
}

}  // namespace

std::vector<std::string> run_experiment(const RunConfig& c) {
    OutputWriter w;
    w.dir = c.output_dir;

    if (c.experiment == "delay") {
        write_delay(w, c, run_chirality_study(c));
    } else if (c.experiment == "ro-test") {
        write_ro(w, c, run_ro_study(c));
    } else if (c.experiment == "clb-test") {
        write_clb(w, c, run_clb_study(c));
    } else if (c.experiment == "array-test") {
        write_array(w, run_array_study(c));
    } else if (c.experiment == "inject") {
        write_inject(w, run_inject_study(c));
    } else if (c.experiment == "repair") {
        write_repair(w, run_repair_study(c));
    } else {
        throw std::invalid_argument("unknown experiment: " + c.experiment);
    }
    write_manifest(w, c);
    return w.files;
}

}  // namespace cntfpga
