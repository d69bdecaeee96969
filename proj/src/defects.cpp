#include "cntfpga/defects.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cntfpga/rng.hpp"

namespace cntfpga {

namespace {

constexpr double kGrazeFraction = 0.10;  // <= this much x-overlap is a graze
constexpr double kFullSlack = 1e-9;      // tolerance when testing full crossings
constexpr double kDeg2Rad = 0.017453292519943295;

}  // namespace

std::vector<MCntDefect> sample_defects(const DefectParams& params,
                                       const ArrayGeometry& g,
                                       uint64_t seed) {
    if (params.p_m < 0.0 || params.p_m > 1.0 || params.p_rm < 0.0 || params.p_rm > 1.0 ||
        params.p_mis < 0.0 || params.p_mis > 1.0 || params.p_open < 0.0 || params.p_open > 1.0)
        throw std::invalid_argument("sample_defects: probabilities must be in [0, 1]");
    if (params.l_mu_um <= 0.0 || params.l_sigma_um < 0.0 || params.angle_sigma_deg < 0.0)
        throw std::invalid_argument("sample_defects: bad length or angle parameters");

    const double pitch = clb_pitch_um(g);
    std::vector<MCntDefect> out;
    for (int r = 0; r < g.n_rows; ++r) {
        for (int c = 0; c < g.n_cols; ++c) {
            Rng rng(seed_stream(seed, static_cast<uint64_t>(r), static_cast<uint64_t>(c)));
            // The membership draw comes first and each site owns its stream,
            // so raising p_m only adds defects and never perturbs the
            // geometry of ones already present.
            if (rng.uniform01() >= params.p_m) continue;
            MCntDefect d;
            d.x_um = (c + rng.uniform01()) * pitch;
            d.y_um = (r + rng.uniform01()) * pitch;
            do {
                d.length_um = rng.normal(params.l_mu_um, params.l_sigma_um);
            } while (d.length_um <= 0.0);
            const bool mis = rng.bernoulli(params.p_mis);
            double angle = rng.normal(0.0, params.angle_sigma_deg);
            angle = std::clamp(angle, -89.0, 89.0);
            d.angle_deg = mis ? angle : 0.0;
            d.removed = rng.bernoulli(params.p_rm);
            d.opened = d.removed && rng.bernoulli(params.p_open);
            out.push_back(d);
        }
    }
    return out;
}

void FaultMap::set_carry_fault(int r, int c, int stage, const FaultKind& f) {
    const uint64_t key = (static_cast<uint64_t>(r) * n_cols + c) * luts_per_clb + stage;
    if (f.is_none())
        carry_faults.erase(key);
    else
        carry_faults[key] = f;
    refresh_tile_flags();
}

void FaultMap::refresh_tile_flags() {
    tile_faulty.assign(static_cast<size_t>(n_rows) * n_cols, 0);
    for (size_t t = 0; t < tile_faulty.size(); ++t) {
        for (int l = 0; l < luts_per_clb; ++l) {
            if (!lut_faults[t * luts_per_clb + l].is_none()) {
                tile_faulty[t] = 1;
                break;
            }
        }
    }
    for (const auto& [key, f] : carry_faults) {
        if (!f.is_none()) tile_faulty[key / luts_per_clb] = 1;
    }
}

size_t FaultMap::faulty_tile_count() const {
    size_t n = 0;
    for (uint8_t t : tile_faulty) n += t;
    return n;
}

size_t FaultMap::faulty_lut_count() const {
    size_t n = 0;
    for (const FaultKind& f : lut_faults) n += f.is_none() ? 0 : 1;
    return n;
}

FaultMap make_fault_map(const ArrayGeometry& g) {
    FaultMap m;
    m.n_rows = g.n_rows;
    m.n_cols = g.n_cols;
    m.luts_per_clb = g.luts_per_clb;
    m.lut_inputs = g.lut_inputs;
    m.lut_faults.assign(static_cast<size_t>(g.n_rows) * g.n_cols * g.luts_per_clb, FaultKind{});
    m.tile_faulty.assign(static_cast<size_t>(g.n_rows) * g.n_cols, 0);
    return m;
}

namespace {

// One contiguous x-interval of the defect inside a single global LUT band.
struct BandSpan {
    int band_row;  // row * luts_per_clb + lut
    double x_lo, x_hi;
};

// Clip the segment to the floorplan and split it at band boundaries. x is
// monotone along the defect (|angle| < 90), y is monotone too, so each band
// row holds at most one span.
std::vector<BandSpan> rasterize(const MCntDefect& d, const ArrayGeometry& g, double pitch) {
    const double band_h = pitch / g.luts_per_clb;
    const double w = g.n_cols * pitch;
    const double h = g.n_rows * pitch;
    const double rad = d.angle_deg * kDeg2Rad;
    const double dx = d.length_um * std::cos(rad);
    const double dy = d.length_um * std::sin(rad);

    double t0 = 0.0, t1 = 1.0;
    auto clip = [&](double p, double q) {
        // Liang-Barsky edge test: p * t <= q must hold on [t0, t1].
        if (p == 0.0) return q >= 0.0;
        const double t = q / p;
        if (p < 0.0) {
            if (t > t1) return false;
            if (t > t0) t0 = t;
        } else {
            if (t < t0) return false;
            if (t < t1) t1 = t;
        }
        return true;
    };
    if (!clip(-dx, d.x_um) || !clip(dx, w - d.x_um) || !clip(-dy, d.y_um) ||
        !clip(dy, h - d.y_um) || t0 >= t1)
        return {};

    const int n_bands = g.n_rows * g.luts_per_clb;
    auto band_of = [&](double y) {
        return std::clamp(static_cast<int>(std::floor(y / band_h)), 0, n_bands - 1);
    };

    std::vector<double> ts{t0, t1};
    if (dy != 0.0) {
        const double y_enter = d.y_um + dy * t0;
        const double y_exit = d.y_um + dy * t1;
        const double y_min = std::min(y_enter, y_exit);
        const double y_max = std::max(y_enter, y_exit);
        for (int b = static_cast<int>(std::ceil(y_min / band_h)); b * band_h < y_max; ++b) {
            if (b <= 0) continue;
            const double t = (b * band_h - d.y_um) / dy;
            if (t > t0 && t < t1) ts.push_back(t);
        }
        std::sort(ts.begin(), ts.end());
    }

    std::vector<BandSpan> spans;
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
        const double ta = ts[i], tb = ts[i + 1];
        if (tb - ta <= 0.0) continue;
        const double ym = d.y_um + dy * 0.5 * (ta + tb);
        const double xa = d.x_um + dx * ta;
        const double xb = d.x_um + dx * tb;
        spans.push_back({band_of(ym), std::min(xa, xb), std::max(xa, xb)});
    }
    return spans;
}

}  // namespace

FaultMap map_defects_to_faults(const std::vector<MCntDefect>& defects,
                               const ArrayGeometry& g,
                               uint64_t seed) {
    FaultMap map = make_fault_map(g);
    const double pitch = clb_pitch_um(g);
    const int pair_sites = (1 << g.lut_inputs) - 1;  // adjacent cell pairs (j, j+1)

    for (size_t id = 0; id < defects.size(); ++id) {
        const MCntDefect& d = defects[id];
        if (d.removed && !d.opened) continue;

        for (const BandSpan& span : rasterize(d, g, pitch)) {
            const int row = span.band_row / g.luts_per_clb;
            const int lut = span.band_row % g.luts_per_clb;
            const int c_lo = std::clamp(static_cast<int>(std::floor(span.x_lo / pitch)), 0,
                                        g.n_cols - 1);
            const int c_hi = std::clamp(static_cast<int>(std::floor((span.x_hi - 1e-12) / pitch)),
                                        0, g.n_cols - 1);
            for (int c = c_lo; c <= c_hi; ++c) {
                const double cell_lo = c * pitch;
                const double overlap =
                    std::min(span.x_hi, cell_lo + pitch) - std::max(span.x_lo, cell_lo);
                if (overlap <= 0.0) continue;
                FaultKind& slot = map.at(row, c, lut);
                if (!slot.is_none()) continue;  // first defect wins the site

                if (d.opened) {
                    slot = FaultKind::open();
                    continue;
                }
                const double frac = overlap / pitch;
                if (frac >= 1.0 - kFullSlack) {
                    slot = FaultKind::mux_always_select(0);
                } else if (frac <= kGrazeFraction + 1e-12) {
                    slot = (row % 2 == 0) ? FaultKind::stuck_at0() : FaultKind::stuck_at1();
                } else {
                    const uint64_t tile_flat = static_cast<uint64_t>(row) * g.n_cols + c;
                    Rng site(seed_stream(seed, id, tile_flat, static_cast<uint64_t>(lut)));
                    const uint16_t j = static_cast<uint16_t>(site.uniform_int(pair_sites));
                    slot = site.bernoulli(0.5) ? FaultKind::wired_and(j) : FaultKind::wired_or(j);
                }
            }
        }
    }
    map.refresh_tile_flags();
    return map;
}

void apply_fault_map(FpgaArray& array, const FaultMap& map) {
    const ArrayGeometry& g = array.geometry;
    if (map.n_rows != g.n_rows || map.n_cols != g.n_cols ||
        map.luts_per_clb != g.luts_per_clb)
        throw std::invalid_argument("apply_fault_map: geometry mismatch");
    for (int r = 0; r < g.n_rows; ++r)
        for (int c = 0; c < g.n_cols; ++c)
            for (int l = 0; l < g.luts_per_clb; ++l)
                array.at(r, c).luts[l].fault = map.at(r, c, l);
    for (const auto& [key, f] : map.carry_faults) {
        const int stage = static_cast<int>(key % g.luts_per_clb);
        const uint64_t tile = key / g.luts_per_clb;
        array.clbs[tile].carry[stage].mux_fault = f;
    }
}

namespace {

void place_kinds(FaultMap& map, const std::vector<size_t>& sites,
                 const InjectCounts& counts, Rng& rng) {
    std::vector<FaultKind::Tag> kinds;
    kinds.reserve(counts.total());
    kinds.insert(kinds.end(), counts.stuck_at0, FaultKind::Tag::StuckAt0);
    kinds.insert(kinds.end(), counts.stuck_at1, FaultKind::Tag::StuckAt1);
    kinds.insert(kinds.end(), counts.mux_override, FaultKind::Tag::MuxOverride);
    // Fisher-Yates so every site sees the requested kind mix, not a block of
    // one kind followed by another.
    for (size_t i = kinds.size(); i > 1; --i)
        std::swap(kinds[i - 1], kinds[rng.uniform_int(i)]);

    const int n_cells = 1 << map.lut_inputs;
    for (size_t i = 0; i < sites.size(); ++i) {
        switch (kinds[i]) {
            case FaultKind::Tag::StuckAt0:
                map.lut_faults[sites[i]] = FaultKind::stuck_at0();
                break;
            case FaultKind::Tag::StuckAt1:
                map.lut_faults[sites[i]] = FaultKind::stuck_at1();
                break;
            default:
                map.lut_faults[sites[i]] =
                    FaultKind::mux_override(static_cast<uint16_t>(rng.uniform_int(n_cells)));
                break;
        }
    }
}

}  // namespace

void inject_faults(FaultMap& map,
                   InjectPattern pattern,
                   const InjectCounts& counts,
                   uint64_t seed,
                   int clusters) {
    if (counts.stuck_at0 < 0 || counts.stuck_at1 < 0 || counts.mux_override < 0)
        throw std::invalid_argument("inject_faults: negative count");
    const size_t want = static_cast<size_t>(counts.total());
    if (want == 0) return;

    std::vector<size_t> free_sites;
    free_sites.reserve(map.lut_faults.size());
    for (size_t i = 0; i < map.lut_faults.size(); ++i)
        if (map.lut_faults[i].is_none()) free_sites.push_back(i);
    if (want > free_sites.size())
        throw std::invalid_argument("inject_faults: counts exceed free LUT sites");

    Rng rng(seed_stream(seed, 0x1f));
    std::vector<size_t> chosen;
    chosen.reserve(want);

    if (pattern == InjectPattern::Random) {
        // Partial Fisher-Yates over the free-site list.
        for (size_t i = 0; i < want; ++i) {
            const size_t j = i + rng.uniform_int(free_sites.size() - i);
            std::swap(free_sites[i], free_sites[j]);
            chosen.push_back(free_sites[i]);
        }
    } else {
        if (clusters < 1) throw std::invalid_argument("inject_faults: clusters must be positive");
        std::vector<uint8_t> taken(map.lut_faults.size(), 0);
        for (size_t i = 0; i < map.lut_faults.size(); ++i)
            if (!map.lut_faults[i].is_none()) taken[i] = 1;

        const size_t base = want / clusters;
        const size_t extra = want % clusters;
        const int max_radius = map.n_rows + map.n_cols;
        for (int cl = 0; cl < clusters && chosen.size() < want; ++cl) {
            size_t quota = base + (static_cast<size_t>(cl) < extra ? 1 : 0);
            quota = std::min(quota, want - chosen.size());
            const int cr = static_cast<int>(rng.uniform_int(map.n_rows));
            const int cc = static_cast<int>(rng.uniform_int(map.n_cols));
            for (int rad = 0; rad <= max_radius && quota > 0; ++rad) {
                for (int r = cr - rad; r <= cr + rad && quota > 0; ++r) {
                    if (r < 0 || r >= map.n_rows) continue;
                    for (int c = cc - rad; c <= cc + rad && quota > 0; ++c) {
                        if (c < 0 || c >= map.n_cols) continue;
                        if (std::max(std::abs(r - cr), std::abs(c - cc)) != rad) continue;
                        const size_t tile = static_cast<size_t>(r) * map.n_cols + c;
                        for (int l = 0; l < map.luts_per_clb && quota > 0; ++l) {
                            const size_t site = tile * map.luts_per_clb + l;
                            if (taken[site]) continue;
                            taken[site] = 1;
                            chosen.push_back(site);
                            --quota;
                        }
                    }
                }
            }
        }
        // Clusters clipped by the array edge may leave a remainder.
        for (size_t i = 0; i < free_sites.size() && chosen.size() < want; ++i)
            if (!taken[free_sites[i]]) {
                taken[free_sites[i]] = 1;
                chosen.push_back(free_sites[i]);
            }
    }

    place_kinds(map, chosen, counts, rng);
    map.refresh_tile_flags();
}

FaultMap inject_faults(const ArrayGeometry& g,
                       InjectPattern pattern,
                       const InjectCounts& counts,
                       uint64_t seed,
                       int clusters) {
    FaultMap map = make_fault_map(g);
    inject_faults(map, pattern, counts, seed, clusters);
    return map;
}

}  // namespace cntfpga
