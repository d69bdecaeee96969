#pragma once
// Spare-row repair. The array is cut into 8x8-CLB small tiles; a sharing
// scheme groups a run of horizontally adjacent small tiles and gives the
// group a pool of spare CLB rows. A repairable unit is one faulty row inside
// one small tile; when the same CLB row is faulty in two adjacent tiles of a
// group and the cells touching the shared boundary are both faulty, the two
// merge into one double-width unit served by a single spare. Assignment is a
// bipartite matching of units to the group's spare pool.

#include <array>
#include <cstdint>
#include <vector>

#include "cntfpga/defects.hpp"
#include "cntfpga/geometry.hpp"

namespace cntfpga {

inline constexpr int kSmallTileClbs = 8;

struct SharingScheme {
    int id = 0;
    int tiles_per_group = 1;
    int spares_per_group = 1;
};

const std::array<SharingScheme, 8>& sharing_schemes();
const SharingScheme& scheme_by_id(int id);

double scheme_rows_per_tile(const SharingScheme& s);
// Spare-row area relative to the densest scheme in the family (1.5 rows per
// tile), as a percentage.
double scheme_overhead_pct(const SharingScheme& s);

struct TileGroup {
    int tile_row = 0;        // small-tile y index
    int tile_col_first = 0;  // small-tile x index of the leftmost member
    int tile_count = 0;
    int spares = 0;  // trailing partial groups get a prorated pool
};

std::vector<TileGroup> group_tiles(const ArrayGeometry& g, const SharingScheme& s);

struct RowEntry {
    int group = 0;
    int tile_a = 0;   // small-tile x index
    int tile_b = -1;  // second tile for a merged double-width unit
    int clb_row = 0;  // global CLB row
};

struct FaultySegmentSet {
    std::vector<RowEntry> entries;
};

FaultySegmentSet extract_faulty_rows(const FaultMap& map, const std::vector<TileGroup>& groups);

struct RepairPlan {
    long total_entries = 0;
    long repaired = 0;
    std::vector<int> unrepaired_per_group;

    double repaired_fraction() const {
        return total_entries == 0 ? 1.0 : static_cast<double>(repaired) / total_entries;
    }
};

RepairPlan assign_repairs(const FaultySegmentSet& set, const std::vector<TileGroup>& groups);

struct SchemeSampleResult {
    int scheme_id = 0;
    long faulty_rows = 0;
    long repaired = 0;
};

std::vector<SchemeSampleResult> evaluate_schemes_on_map(const FaultMap& map,
                                                        const ArrayGeometry& g,
                                                        const std::vector<int>& scheme_ids);

struct SchemeOutcome {
    int scheme_id = 0;
    long faulty_rows = 0;
    long repaired = 0;
    double repair_rate_pct = 100.0;  // pooled over all samples
    double rows_per_tile = 0.0;
    double overhead_pct = 0.0;
};

// Monte Carlo over defect maps; every scheme sees the same map per sample.
std::vector<SchemeOutcome> evaluate_schemes(const ArrayGeometry& g,
                                            const DefectParams& params,
                                            const std::vector<int>& scheme_ids,
                                            int samples,
                                            uint64_t seed);

}  // namespace cntfpga
