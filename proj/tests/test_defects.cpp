#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "cntfpga/defects.hpp"
#include "cntfpga/rng.hpp"

using namespace cntfpga;

namespace {

ArrayGeometry small_grid(int rows, int cols) {
    ArrayGeometry g;
    g.n_rows = rows;
    g.n_cols = cols;
    return g;
}

using TileSet = std::set<std::pair<int, int>>;

TileSet faulty_tiles(const FaultMap& map) {
    TileSet out;
    for (int r = 0; r < map.n_rows; ++r)
        for (int c = 0; c < map.n_cols; ++c)
            if (map.tile(r, c)) out.insert({r, c});
    return out;
}

// 1000-point sampling of the segment; every sampled tile must be marked.
TileSet sampled_tiles(const std::vector<MCntDefect>& defects, const ArrayGeometry& g) {
    const double pitch = clb_pitch_um(g);
    const double w = g.n_cols * pitch, h = g.n_rows * pitch;
    TileSet out;
    for (const MCntDefect& d : defects) {
        if (d.removed && !d.opened) continue;
        const double rad = d.angle_deg * 0.017453292519943295;
        for (int j = 0; j < 1000; ++j) {
            const double t = (j + 0.5) / 1000.0;
            const double x = d.x_um + t * d.length_um * std::cos(rad);
            const double y = d.y_um + t * d.length_um * std::sin(rad);
            if (x < 0.0 || x >= w || y < 0.0 || y >= h) continue;
            out.insert({int(y / pitch), int(x / pitch)});
        }
    }
    return out;
}

// Exact oracle: a tile is faulty iff the segment crosses its rectangle with
// positive length. Interval arithmetic in the segment parameter, done per
// tile, no rasterization sharing with the implementation.
TileSet exact_tiles(const std::vector<MCntDefect>& defects, const ArrayGeometry& g) {
    const double pitch = clb_pitch_um(g);
    TileSet out;
    for (const MCntDefect& d : defects) {
        if (d.removed && !d.opened) continue;
        const double rad = d.angle_deg * 0.017453292519943295;
        const double dx = d.length_um * std::cos(rad);
        const double dy = d.length_um * std::sin(rad);
        for (int r = 0; r < g.n_rows; ++r) {
            for (int c = 0; c < g.n_cols; ++c) {
                double t0 = 0.0, t1 = 1.0;
                const double x_lo = c * pitch, y_lo = r * pitch;
                t0 = std::max(t0, (x_lo - d.x_um) / dx);
                t1 = std::min(t1, (x_lo + pitch - d.x_um) / dx);
                if (dy > 0.0) {
                    t0 = std::max(t0, (y_lo - d.y_um) / dy);
                    t1 = std::min(t1, (y_lo + pitch - d.y_um) / dy);
                } else if (dy < 0.0) {
                    t0 = std::max(t0, (y_lo + pitch - d.y_um) / dy);
                    t1 = std::min(t1, (y_lo - d.y_um) / dy);
                } else if (d.y_um < y_lo || d.y_um >= y_lo + pitch) {
                    continue;
                }
                if (t1 - t0 > 1e-12) out.insert({r, c});
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("defects: trivial populations") {
    const ArrayGeometry g = small_grid(10, 10);
    DefectParams p;
    p.p_m = 0.0;
    CHECK(sample_defects(p, g, 1).empty());

    p.p_m = 1.0;
    const auto all = sample_defects(p, g, 1);
    CHECK(all.size() == 100);
    const double w = g.n_cols * clb_pitch_um(g);
    for (const MCntDefect& d : all) {
        CHECK(d.length_um > 0.0);
        CHECK(d.x_um >= 0.0);
        CHECK(d.x_um < w);
        CHECK(std::abs(d.angle_deg) < 90.0);
        CHECK_FALSE(d.removed);
        CHECK_FALSE(d.opened);
    }
}

TEST_CASE("defects: alignment forced at p_mis zero") {
    DefectParams p;
    p.p_m = 1.0;
    p.p_mis = 0.0;
    for (const MCntDefect& d : sample_defects(p, small_grid(8, 8), 5))
        CHECK(d.angle_deg == 0.0);
}

TEST_CASE("defects: parameter validation") {
    const ArrayGeometry g = small_grid(8, 8);
    DefectParams p;
    p.p_m = 1.5;
    CHECK_THROWS_AS(sample_defects(p, g, 1), std::invalid_argument);
    p = DefectParams{};
    p.l_mu_um = 0.0;
    CHECK_THROWS_AS(sample_defects(p, g, 1), std::invalid_argument);
}

TEST_CASE("defects: population grows monotonically with p_m") {
    const ArrayGeometry g = small_grid(12, 12);
    DefectParams p;
    std::vector<size_t> counts;
    for (const double pm : {0.05, 0.2, 0.5, 0.8}) {
        p.p_m = pm;
        counts.push_back(sample_defects(p, g, 77).size());
    }
    for (size_t i = 1; i < counts.size(); ++i) CHECK(counts[i] >= counts[i - 1]);

    // and the sparser population is literally a subset of the denser one
    p.p_m = 0.2;
    const auto sparse = sample_defects(p, g, 77);
    p.p_m = 0.8;
    const auto dense = sample_defects(p, g, 77);
    std::set<std::pair<double, double>> dense_pts;
    for (const MCntDefect& d : dense) dense_pts.insert({d.x_um, d.y_um});
    for (const MCntDefect& d : sparse) CHECK(dense_pts.count({d.x_um, d.y_um}) == 1);
}

TEST_CASE("defects: removal empties the map") {
    const ArrayGeometry g = small_grid(10, 10);
    DefectParams p;
    p.p_m = 0.5;
    p.p_rm = 1.0;
    p.p_open = 0.0;
    const FaultMap map = map_defects_to_faults(sample_defects(p, g, 9), g, 9);
    CHECK(map.faulty_tile_count() == 0);
}

TEST_CASE("defects: rasterization matches the geometric oracles") {
    for (const uint64_t seed : {11ull, 22ull, 33ull, 44ull}) {
        const ArrayGeometry g = small_grid(16, 16);
        DefectParams p;
        p.p_m = 0.15;
        p.p_mis = 0.6;
        p.angle_sigma_deg = 25.0;
        p.l_mu_um = 30.0;
        p.l_sigma_um = 15.0;
        const auto defects = sample_defects(p, g, seed);
        REQUIRE(!defects.empty());
        const FaultMap map = map_defects_to_faults(defects, g, seed);

        const TileSet got = faulty_tiles(map);
        CHECK(got == exact_tiles(defects, g));
        for (const auto& t : sampled_tiles(defects, g)) CHECK(got.count(t) == 1);
    }
}

TEST_CASE("defects: aligned defect paints a contiguous run along its row") {
    const ArrayGeometry g = small_grid(12, 12);
    const double pitch = clb_pitch_um(g);
    MCntDefect d;
    d.x_um = 5.0 * pitch;
    d.y_um = 2.0 * pitch + 0.1;
    d.length_um = 3.2 * pitch;
    const FaultMap map = map_defects_to_faults({d}, g, 1);
    CHECK(faulty_tiles(map) == TileSet{{2, 5}, {2, 6}, {2, 7}, {2, 8}});
}

TEST_CASE("defects: position rule selects the taxonomy branch") {
    const ArrayGeometry g = small_grid(12, 12);
    const double pitch = clb_pitch_um(g);
    MCntDefect d;
    d.x_um = 5.0 * pitch;
    d.y_um = 2.0 * pitch + 0.1;  // row 2, first LUT band
    d.length_um = 3.05 * pitch;
    FaultMap map = map_defects_to_faults({d}, g, 1);

    // fully crossed cells read one configuration bit forever
    CHECK(map.at(2, 5, 0) == FaultKind::mux_always_select(0));
    CHECK(map.at(2, 6, 0) == FaultKind::mux_always_select(0));
    CHECK(map.at(2, 7, 0) == FaultKind::mux_always_select(0));
    // 5% graze on an even row: stuck-at-0
    CHECK(map.at(2, 8, 0) == FaultKind::stuck_at0());
    CHECK(map.at(2, 5, 1).is_none());

    // odd row grazes give stuck-at-1
    d.y_um = 3.0 * pitch + 0.1;
    map = map_defects_to_faults({d}, g, 1);
    CHECK(map.at(3, 8, 0) == FaultKind::stuck_at1());

    // mid-cell termination picks a wired pair
    d.y_um = 2.0 * pitch + 0.1;
    d.length_um = 0.5 * pitch;
    map = map_defects_to_faults({d}, g, 1);
    const FaultKind f = map.at(2, 5, 0);
    const bool wired =
        f.tag == FaultKind::Tag::WiredAnd || f.tag == FaultKind::Tag::WiredOr;
    CHECK(wired);
    CHECK(f.b == f.a + 1);

    // opened defects break the line outright
    d.removed = true;
    d.opened = true;
    map = map_defects_to_faults({d}, g, 1);
    CHECK(map.at(2, 5, 0) == FaultKind::open());
}

TEST_CASE("defects: fault map bookkeeping") {
    const ArrayGeometry g = small_grid(6, 6);
    FaultMap map = make_fault_map(g);
    CHECK(map.faulty_tile_count() == 0);
    map.at(1, 2, 3) = FaultKind::stuck_at1();
    map.refresh_tile_flags();
    CHECK(map.tile(1, 2));
    CHECK(map.faulty_tile_count() == 1);
    CHECK(map.faulty_lut_count() == 1);

    map.set_carry_fault(4, 4, 0, FaultKind::stuck_at0());
    CHECK(map.tile(4, 4));
    map.set_carry_fault(4, 4, 0, FaultKind::none());
    CHECK_FALSE(map.tile(4, 4));

    FpgaArray array = build_array(g);
    map.set_carry_fault(5, 5, 2, FaultKind::stuck_at1());
    apply_fault_map(array, map);
    CHECK(array.at(1, 2).luts[3].fault == FaultKind::stuck_at1());
    CHECK(array.at(5, 5).carry[2].mux_fault == FaultKind::stuck_at1());

    FpgaArray wrong = build_array(small_grid(5, 6));
    CHECK_THROWS_AS(apply_fault_map(wrong, map), std::invalid_argument);
}

TEST_CASE("inject: exact counts, kinds, and no double placement") {
    const ArrayGeometry g = small_grid(20, 20);
    const InjectCounts counts{50, 30, 20};
    for (const InjectPattern pat : {InjectPattern::Random, InjectPattern::Clustered}) {
        FaultMap map = make_fault_map(g);
        inject_faults(map, pat, counts, 31, 5);
        CHECK(map.faulty_lut_count() == 100);
        std::map<std::string, int> hist;
        for (const FaultKind& f : map.lut_faults)
            if (!f.is_none()) ++hist[fault_name(f)];
        CHECK(hist["sa0"] == 50);
        CHECK(hist["sa1"] == 30);
        CHECK(hist["mux_override"] == 20);
    }
}

TEST_CASE("inject: rejects impossible requests") {
    const ArrayGeometry g = small_grid(8, 8);
    FaultMap map = make_fault_map(g);
    CHECK_THROWS_AS(inject_faults(map, InjectPattern::Random, {-1, 0, 0}, 1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(inject_faults(map, InjectPattern::Random, {8 * 8 * 4 + 1, 0, 0}, 1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(inject_faults(map, InjectPattern::Clustered, {1, 0, 0}, 1, 0),
                    std::invalid_argument);
}

TEST_CASE("inject: one cluster stays compact") {
    const ArrayGeometry g = small_grid(8, 8);
    const FaultMap map = inject_faults(g, InjectPattern::Clustered, {8, 0, 0}, 12, 1);
    CHECK(map.faulty_lut_count() == 8);
    const TileSet tiles = faulty_tiles(map);
    int max_cheb = 0;
    for (const auto& a : tiles)
        for (const auto& b : tiles)
            max_cheb = std::max(max_cheb,
                                std::max(std::abs(a.first - b.first),
                                         std::abs(a.second - b.second)));
    CHECK(max_cheb <= 2);
}

TEST_CASE("inject: deterministic in the seed") {
    const ArrayGeometry g = small_grid(16, 16);
    const FaultMap a = inject_faults(g, InjectPattern::Clustered, {40, 20, 10}, 9, 4);
    const FaultMap b = inject_faults(g, InjectPattern::Clustered, {40, 20, 10}, 9, 4);
    const FaultMap c = inject_faults(g, InjectPattern::Clustered, {40, 20, 10}, 10, 4);
    CHECK(a.lut_faults == b.lut_faults);
    CHECK(a.lut_faults != c.lut_faults);
}
