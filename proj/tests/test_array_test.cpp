#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "cntfpga/array_test.hpp"
#include "cntfpga/rng.hpp"

using namespace cntfpga;

namespace {

std::vector<uint8_t> row_with_segment(int n, int first, int last) {
    std::vector<uint8_t> row(n, 0);
    for (int i = first; i <= last; ++i) row[i] = 1;
    return row;
}

std::vector<ColSegment> true_segments(const std::vector<uint8_t>& row) {
    std::vector<ColSegment> out;
    const int n = int(row.size());
    int i = 0;
    while (i < n) {
        if (!row[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && row[j + 1]) ++j;
        out.push_back({i, j});
        i = j + 1;
    }
    return out;
}

bool segments_equal(const std::vector<ColSegment>& a, const std::vector<ColSegment>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || a[i].last != b[i].last) return false;
    return true;
}

}  // namespace

TEST_CASE("oracle: counts every call and rejects bad columns") {
    const auto row = row_with_segment(8, 2, 3);
    ProbeOracle oracle(row.data(), 8);
    CHECK(oracle.probe(2));
    CHECK(oracle.probe(2));
    CHECK_FALSE(oracle.probe(0));
    CHECK(oracle.probe_count() == 3);
    CHECK_THROWS_AS(oracle.probe(8), std::out_of_range);
    CHECK_THROWS_AS(oracle.probe(-1), std::out_of_range);
}

TEST_CASE("recursive: hand-traced sixteen-column example") {
    const auto row = row_with_segment(16, 5, 9);
    ProbeOracle oracle(row.data(), 16);
    const RowResult r = recursive_jump_row(oracle, 4);
    REQUIRE(r.segments.size() == 1);
    CHECK(r.segments[0].first == 5);
    CHECK(r.segments[0].last == 9);
    // trace: 0 4 8 (locate: 6 5) 12 (locate: 10 9) 15
    CHECK(r.probes == 9);
    CHECK(oracle.probe_count() == 9);
}

TEST_CASE("recursive: clean row walks the grid only") {
    const std::vector<uint8_t> row(32, 0);
    ProbeOracle oracle(row.data(), 32);
    const RowResult r = recursive_jump_row(oracle, 4);
    CHECK(r.segments.empty());
    CHECK(r.probes == 9);  // 0, 4, ..., 28, 31
}

TEST_CASE("recursive: odd steps above one are rejected") {
    const auto row = row_with_segment(16, 5, 9);
    ProbeOracle oracle(row.data(), 16);
    CHECK_THROWS_AS(recursive_jump_row(oracle, 3), std::invalid_argument);
    CHECK_THROWS_AS(recursive_jump_row(oracle, 5), std::invalid_argument);
    CHECK_THROWS_AS(recursive_jump_row(oracle, 0), std::invalid_argument);
    CHECK_NOTHROW(recursive_jump_row(oracle, 1));
}

TEST_CASE("recursive: power-of-two steps locate exact boundaries") {
    Rng rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 8 + int(rng.uniform_int(57));  // 8..64 columns
        int step = 2 << rng.uniform_int(4);          // 2, 4, 8, 16
        while (step > n / 2) step /= 2;
        const int len = step + int(rng.uniform_int(uint64_t(n - step + 1)));
        const int first = int(rng.uniform_int(uint64_t(n - len + 1)));
        const auto row = row_with_segment(n, first, first + len - 1);

        ProbeOracle oracle(row.data(), n);
        const RowResult r = recursive_jump_row(oracle, step);
        CHECK(segments_equal(r.segments, true_segments(row)));
        CHECK(r.probes < n);  // always beats single-step when a segment exists
    }
}

TEST_CASE("recursive: multi-segment rows with roomy gaps") {
    Rng rng(77);
    for (int trial = 0; trial < 500; ++trial) {
        const int step = 4;
        const int n = 48 + int(rng.uniform_int(17));
        std::vector<uint8_t> row(n, 0);
        int cursor = int(rng.uniform_int(4));
        std::vector<ColSegment> want;
        while (cursor + step <= n) {
            const int len = step + int(rng.uniform_int(6));
            const int last = std::min(cursor + len - 1, n - 1);
            for (int i = cursor; i <= last; ++i) row[i] = 1;
            want.push_back({cursor, last});
            cursor = last + 1 + step + int(rng.uniform_int(8));
        }
        if (want.empty()) continue;

        ProbeOracle oracle(row.data(), n);
        const RowResult r = recursive_jump_row(oracle, step);
        CHECK(segments_equal(r.segments, true_segments(row)));
    }
}

TEST_CASE("fixed: probe grid and probe-resolution segments") {
    const auto row = row_with_segment(16, 5, 9);
    ProbeOracle oracle(row.data(), 16);
    const RowResult r = fixed_step_row(oracle, 4);
    CHECK(r.probes == 4);  // 0, 4, 8, 12
    REQUIRE(r.segments.size() == 1);
    CHECK(r.segments[0].first == 8);
    CHECK(r.segments[0].last == 8);

    // a short segment placed between probes is missed entirely
    const auto hidden = row_with_segment(16, 5, 6);
    ProbeOracle oracle2(hidden.data(), 16);
    CHECK(fixed_step_row(oracle2, 4).segments.empty());
}

TEST_CASE("single: exhaustive and exact") {
    const auto row = row_with_segment(16, 5, 9);
    ProbeOracle oracle(row.data(), 16);
    const RowResult r = single_step_row(oracle);
    CHECK(r.probes == 16);
    CHECK(segments_equal(r.segments, true_segments(row)));
}

namespace {

FaultMap map_from_rows(const std::vector<std::vector<uint8_t>>& rows) {
    ArrayGeometry g;
    g.n_rows = int(rows.size());
    g.n_cols = int(rows[0].size());
    FaultMap map = make_fault_map(g);
    for (int r = 0; r < g.n_rows; ++r)
        for (int c = 0; c < g.n_cols; ++c)
            if (rows[r][c]) map.at(r, c, 0) = FaultKind::stuck_at0();
    map.refresh_tile_flags();
    return map;
}

std::vector<std::vector<uint8_t>> random_rows(Rng& rng, int n_rows, int n_cols, double density) {
    std::vector<std::vector<uint8_t>> rows(n_rows, std::vector<uint8_t>(n_cols, 0));
    for (auto& row : rows)
        for (auto& cell : row) cell = rng.bernoulli(density) ? 1 : 0;
    return rows;
}

}  // namespace

TEST_CASE("array: single-step report is the exact baseline") {
    Rng rng(5);
    const FaultMap map = map_from_rows(random_rows(rng, 12, 30, 0.1));
    const TestReport rep = run_array_test(map, TestMethod::SingleStep, 1);
    CHECK(rep.coverage == 1.0);
    CHECK(rep.overhead == 1.0);
    CHECK(rep.probes == 12 * 30);
}

TEST_CASE("array: recursive dominates fixed-step on any map") {
    Rng rng(6);
    for (int trial = 0; trial < 40; ++trial) {
        const FaultMap map = map_from_rows(
            random_rows(rng, 10, 40, 0.02 + 0.2 * rng.uniform01()));
        for (const int step : {4, 8, 12, 16, 20}) {
            const TestReport rec = run_array_test(map, TestMethod::Recursive, step);
            const TestReport fix = run_array_test(map, TestMethod::FixedStep, step);
            CHECK(rec.coverage >= fix.coverage);
            CHECK(rec.overhead <= 1.0);
            CHECK(rec.coverage <= 1.0);
        }
    }
}

TEST_CASE("array: fixed-step overhead on a clean map") {
    const FaultMap map = map_from_rows(std::vector<std::vector<uint8_t>>(
        8, std::vector<uint8_t>(32, 0)));
    const TestReport rep = run_array_test(map, TestMethod::FixedStep, 4);
    CHECK(rep.coverage == 1.0);  // vacuous
    CHECK(rep.overhead == doctest::Approx(8.0 / 32.0));
    CHECK(rep.segments == 0);
}

TEST_CASE("array: masked tiles are never probed nor counted") {
    std::vector<std::vector<uint8_t>> rows(4, std::vector<uint8_t>(24, 0));
    rows[1][6] = 1;   // inside the masked-out window
    rows[2][20] = 1;  // in use
    const FaultMap map = map_from_rows(rows);

    std::vector<uint8_t> mask(4 * 24, 1);
    for (int c = 4; c < 12; ++c) mask[1 * 24 + c] = 0;  // row 1: columns 4..11 unused
    const TestReport rep = run_array_test(map, TestMethod::SingleStep, 1, &mask);
    CHECK(rep.probes == 4 * 24 - 8);
    CHECK(rep.coverage == 1.0);  // the masked fault is outside the denominator
    CHECK(rep.segments == 1);
    CHECK(rep.row_segments[2][0].first == 20);

    std::vector<uint8_t> bad(3, 1);
    CHECK_THROWS_AS(run_array_test(map, TestMethod::SingleStep, 1, &bad),
                    std::invalid_argument);
}

TEST_CASE("array: identical runs, identical traces") {
    Rng rng(8);
    const FaultMap map = map_from_rows(random_rows(rng, 16, 48, 0.08));
    const TestReport a = run_array_test(map, TestMethod::Recursive, 4);
    const TestReport b = run_array_test(map, TestMethod::Recursive, 4);
    CHECK(a.probes == b.probes);
    CHECK(a.coverage == b.coverage);
    CHECK(a.overhead == b.overhead);
    CHECK(a.segments == b.segments);
}

TEST_CASE("array: method names") {
    CHECK(method_name(TestMethod::Recursive) == "recursive");
    CHECK(method_name(TestMethod::FixedStep) == "fixed");
    CHECK(method_name(TestMethod::SingleStep) == "single");
}

TEST_CASE("inject evaluation: single-step sees the whole population") {
    ArrayGeometry g;
    g.n_rows = 24;
    g.n_cols = 24;
    FaultMap map = inject_faults(g, InjectPattern::Clustered, {60, 40, 30}, 17, 6);
    const auto reports = evaluate_fault_injection(
        map, {{TestMethod::SingleStep, 1}, {TestMethod::Recursive, 4}});
    REQUIRE(reports.size() == 2);

    long injected = 0, detected = 0;
    for (const auto& [kind, tally] : reports[0].kinds) {
        injected += tally.injected;
        detected += tally.detected;
        CHECK(tally.detected == tally.injected);
    }
    CHECK(injected == 130);
    CHECK(detected == 130);

    long rec_detected = 0;
    for (const auto& [kind, tally] : reports[1].kinds) {
        CHECK(tally.injected == reports[0].kinds.at(kind).injected);
        CHECK(tally.detected <= tally.injected);
        rec_detected += tally.detected;
    }
    CHECK(rec_detected <= detected);
}
