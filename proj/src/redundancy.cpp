#include "cntfpga/redundancy.hpp"

#include <algorithm>
#include <stdexcept>

#include "cntfpga/rng.hpp"

namespace cntfpga {

const std::array<SharingScheme, 8>& sharing_schemes() {
    static const std::array<SharingScheme, 8> table = {{
        {0, 1, 1},
        {1, 2, 2},
        {2, 2, 3},
        {3, 3, 3},
        {4, 3, 4},
        {5, 4, 4},
        {6, 4, 5},
        {7, 5, 4},
    }};
    return table;
}

const SharingScheme& scheme_by_id(int id) {
    if (id < 0 || id > 7) throw std::invalid_argument("scheme_by_id: id must be in [0, 7]");
    return sharing_schemes()[id];
}

double scheme_rows_per_tile(const SharingScheme& s) {
    return static_cast<double>(s.spares_per_group) / s.tiles_per_group;
}

double scheme_overhead_pct(const SharingScheme& s) {
    return scheme_rows_per_tile(s) / 1.5 * 100.0;
}

std::vector<TileGroup> group_tiles(const ArrayGeometry& g, const SharingScheme& s) {
    if (g.n_rows < kSmallTileClbs || g.n_cols < kSmallTileClbs)
        throw std::invalid_argument("group_tiles: array smaller than one small tile");
    const int tiles_x = (g.n_cols + kSmallTileClbs - 1) / kSmallTileClbs;
    const int tiles_y = (g.n_rows + kSmallTileClbs - 1) / kSmallTileClbs;

    std::vector<TileGroup> groups;
    for (int ty = 0; ty < tiles_y; ++ty) {
        for (int tx = 0; tx < tiles_x; tx += s.tiles_per_group) {
            TileGroup grp;
            grp.tile_row = ty;
            grp.tile_col_first = tx;
            grp.tile_count = std::min(s.tiles_per_group, tiles_x - tx);
            grp.spares = (grp.tile_count == s.tiles_per_group)
                             ? s.spares_per_group
                             : s.spares_per_group * grp.tile_count / s.tiles_per_group;
            groups.push_back(grp);
        }
    }
    return groups;
}

namespace {

struct TileSpanCols {
    int lo, hi;  // global CLB column range of a small tile, half-open
};

TileSpanCols tile_cols(const FaultMap& map, int tx) {
    return {tx * kSmallTileClbs, std::min((tx + 1) * kSmallTileClbs, map.n_cols)};
}

// Per (CLB row, small tile) faulty flags, one pass over the cell grid.
struct TileRowIndex {
    int tiles_x = 0;
    std::vector<uint8_t> flags;

    bool faulty(int clb_row, int tx) const {
        return flags[static_cast<size_t>(clb_row) * tiles_x + tx] != 0;
    }
};

TileRowIndex build_tile_row_index(const FaultMap& map) {
    TileRowIndex idx;
    idx.tiles_x = (map.n_cols + kSmallTileClbs - 1) / kSmallTileClbs;
    idx.flags.assign(static_cast<size_t>(map.n_rows) * idx.tiles_x, 0);
    for (int y = 0; y < map.n_rows; ++y)
        for (int c = 0; c < map.n_cols; ++c)
            if (map.tile(y, c))
                idx.flags[static_cast<size_t>(y) * idx.tiles_x + c / kSmallTileClbs] = 1;
    return idx;
}

FaultySegmentSet extract_impl(const FaultMap& map,
                              const std::vector<TileGroup>& groups,
                              const TileRowIndex& idx) {
    FaultySegmentSet out;
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        const TileGroup& grp = groups[gi];
        const int row_lo = grp.tile_row * kSmallTileClbs;
        const int row_hi = std::min(row_lo + kSmallTileClbs, map.n_rows);
        for (int y = row_lo; y < row_hi; ++y) {
            int tx = grp.tile_col_first;
            const int tx_end = grp.tile_col_first + grp.tile_count;
            while (tx < tx_end) {
                if (!idx.faulty(y, tx)) {
                    ++tx;
                    continue;
                }
                // Merge with the right neighbor only when the defect actually
                // crosses the shared boundary: both boundary cells faulty.
                bool merged = false;
                if (tx + 1 < tx_end && idx.faulty(y, tx + 1)) {
                    const int last_col = tile_cols(map, tx).hi - 1;
                    const int first_col = tile_cols(map, tx + 1).lo;
                    if (map.tile(y, last_col) && map.tile(y, first_col)) merged = true;
                }
                RowEntry e;
                e.group = static_cast<int>(gi);
                e.tile_a = tx;
                e.tile_b = merged ? tx + 1 : -1;
                e.clb_row = y;
                out.entries.push_back(e);
                tx += merged ? 2 : 1;
            }
        }
    }
    return out;
}

}  // namespace

FaultySegmentSet extract_faulty_rows(const FaultMap& map, const std::vector<TileGroup>& groups) {
    return extract_impl(map, groups, build_tile_row_index(map));
}

namespace {

// Kuhn's augmenting-path matching. The graph per group is complete (every
// spare can cover every unit), but the matcher does not rely on that.
struct Matcher {
    int n_spares;
    std::vector<std::vector<int>> adj;  // entry -> candidate spares
    std::vector<int> spare_owner;       // spare -> entry or -1

    explicit Matcher(int spares) : n_spares(spares), spare_owner(spares, -1) {}

    bool augment(int v, std::vector<uint8_t>& used) {
        for (const int s : adj[v]) {
            if (used[s]) continue;
            used[s] = 1;
            if (spare_owner[s] < 0 || augment(spare_owner[s], used)) {
                spare_owner[s] = v;
                return true;
            }
        }
        return false;
    }

    int run() {
        int matched = 0;
        for (size_t v = 0; v < adj.size(); ++v) {
            std::vector<uint8_t> used(n_spares, 0);
            if (augment(static_cast<int>(v), used)) ++matched;
        }
        return matched;
    }
};

}  // namespace

RepairPlan assign_repairs(const FaultySegmentSet& set, const std::vector<TileGroup>& groups) {
    RepairPlan plan;
    plan.unrepaired_per_group.assign(groups.size(), 0);

    std::vector<std::vector<int>> per_group(groups.size());
    for (size_t i = 0; i < set.entries.size(); ++i)
        per_group[set.entries[i].group].push_back(static_cast<int>(i));

    for (size_t gi = 0; gi < groups.size(); ++gi) {
        const int demand = static_cast<int>(per_group[gi].size());
        if (demand == 0) continue;
        Matcher m(groups[gi].spares);
        m.adj.assign(demand, {});
        for (int v = 0; v < demand; ++v) {
            m.adj[v].resize(groups[gi].spares);
            for (int s = 0; s < groups[gi].spares; ++s) m.adj[v][s] = s;
        }
        const int matched = m.run();
        plan.total_entries += demand;
        plan.repaired += matched;
        plan.unrepaired_per_group[gi] = demand - matched;
    }
    return plan;
}

std::vector<SchemeSampleResult> evaluate_schemes_on_map(const FaultMap& map,
                                                        const ArrayGeometry& g,
                                                        const std::vector<int>& scheme_ids) {
    const TileRowIndex idx = build_tile_row_index(map);
    std::vector<SchemeSampleResult> out;
    out.reserve(scheme_ids.size());
    for (const int id : scheme_ids) {
        const SharingScheme& sch = scheme_by_id(id);
        const auto groups = group_tiles(g, sch);
        const auto rows = extract_impl(map, groups, idx);
        const auto plan = assign_repairs(rows, groups);
        out.push_back({id, plan.total_entries, plan.repaired});
    }
    return out;
}

std::vector<SchemeOutcome> evaluate_schemes(const ArrayGeometry& g,
                                            const DefectParams& params,
                                            const std::vector<int>& scheme_ids,
                                            int samples,
                                            uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("evaluate_schemes: samples must be positive");
    std::vector<SchemeOutcome> out(scheme_ids.size());
    for (size_t i = 0; i < scheme_ids.size(); ++i) {
        const SharingScheme& sch = scheme_by_id(scheme_ids[i]);
        out[i].scheme_id = sch.id;
        out[i].rows_per_tile = scheme_rows_per_tile(sch);
        out[i].overhead_pct = scheme_overhead_pct(sch);
    }
    for (int s = 0; s < samples; ++s) {
        const auto defects = sample_defects(params, g, seed_stream(seed, static_cast<uint64_t>(s)));
        const FaultMap map = map_defects_to_faults(defects, g, seed_stream(seed, s, 0xfa77));
        const auto results = evaluate_schemes_on_map(map, g, scheme_ids);
        for (size_t i = 0; i < results.size(); ++i) {
            out[i].faulty_rows += results[i].faulty_rows;
            out[i].repaired += results[i].repaired;
        }
    }
    for (SchemeOutcome& o : out)
        o.repair_rate_pct =
            o.faulty_rows == 0 ? 100.0 : 100.0 * static_cast<double>(o.repaired) / o.faulty_rows;
    return out;
}

}  // namespace cntfpga
