#include "cntfpga/lut.hpp"

#include <stdexcept>

namespace cntfpga {

namespace {

// Cell-level read; wired faults corrupt both cells of the shorted pair.
bool read_cell(const LutInstance& lut, uint32_t idx) {
    const FaultKind& f = lut.fault;
    if (f.tag == FaultKind::Tag::WiredAnd && (idx == f.a || idx == f.b))
        return lut.config_bits[f.a] && lut.config_bits[f.b];
    if (f.tag == FaultKind::Tag::WiredOr && (idx == f.a || idx == f.b))
        return lut.config_bits[f.a] || lut.config_bits[f.b];
    return lut.config_bits[idx] != 0;
}

}  // namespace

LutInstance make_lut(int k) {
    if (k < 2 || k > 8) throw std::invalid_argument("make_lut: k must be in [2, 8]");
    LutInstance lut;
    lut.k = k;
    lut.config_bits.assign(size_t{1} << k, 0);
    return lut;
}

void load_config(LutInstance& lut, uint64_t truth, int k) {
    if (k < 2 || k > 8) throw std::invalid_argument("load_config: k must be in [2, 8]");
    lut.k = k;
    const uint32_t n = 1u << k;
    lut.config_bits.assign(n, 0);
    for (uint32_t i = 0; i < n; ++i)
        lut.config_bits[i] = static_cast<uint8_t>((truth >> (n - 1 - i)) & 1u);
}

bool lut_eval(const LutInstance& lut, uint32_t input_index) {
    const uint32_t n = 1u << lut.k;
    if (input_index >= n) throw std::out_of_range("lut_eval: input index out of range");
    const uint32_t m = n >> 1;
    const uint32_t sub = input_index & (m - 1);
    const bool hi = input_index >= m;

    switch (lut.fault.tag) {
        case FaultKind::Tag::None:
        case FaultKind::Tag::WiredAnd:
        case FaultKind::Tag::WiredOr:
            return read_cell(lut, input_index);
        case FaultKind::Tag::StuckAt0:
            return false;
        case FaultKind::Tag::StuckAt1:
            return true;
        case FaultKind::Tag::MuxOverride:
        case FaultKind::Tag::MuxAlwaysSelect:
            return lut.config_bits[lut.fault.a] != 0;
        case FaultKind::Tag::StuckOn: {
            // The leaking transistor drives the off half's addressed cell onto
            // the shared output node; pass-transistor contention resolves low.
            const bool wired = lut.config_bits[sub] && lut.config_bits[sub + m];
            if (lut.fault.a == 0)  // TA: NW1 always connected
                return hi ? wired : lut.config_bits[input_index] != 0;
            return hi ? lut.config_bits[input_index] != 0 : wired;  // TB
        }
        case FaultKind::Tag::Open:
            return false;
    }
    return false;
}

bool lut_eval(const LutInstance& lut, const std::vector<uint8_t>& inputs) {
    if (static_cast<int>(inputs.size()) != lut.k)
        throw std::invalid_argument("lut_eval: input length mismatch");
    uint32_t idx = 0;
    for (int i = 0; i < lut.k; ++i)
        if (inputs[i]) idx |= 1u << i;
    return lut_eval(lut, idx);
}

SplitOutputs lut_eval_split(const LutInstance& lut, uint32_t input_index, bool test_mode) {
    const uint32_t n = 1u << lut.k;
    if (input_index >= n) throw std::out_of_range("lut_eval_split: input index out of range");
    const uint32_t m = n >> 1;
    const uint32_t sub = input_index & (m - 1);
    const bool msb = input_index >= m;

    if (!test_mode) {
        const bool out = lut_eval(lut, input_index);
        return msb ? SplitOutputs{false, out} : SplitOutputs{out, false};
    }

    switch (lut.fault.tag) {
        case FaultKind::Tag::None:
        case FaultKind::Tag::WiredAnd:
        case FaultKind::Tag::WiredOr:
            if (msb) return {false, false};
            return {read_cell(lut, sub), read_cell(lut, sub + m)};
        case FaultKind::Tag::StuckAt0:
            return {false, false};
        case FaultKind::Tag::StuckAt1:
            return {true, true};
        case FaultKind::Tag::MuxOverride:
        case FaultKind::Tag::MuxAlwaysSelect: {
            // The shared decoder is pinned toward the faulty branch address.
            const uint32_t j = lut.fault.a & (m - 1);
            if (msb) return {false, false};
            return {lut.config_bits[j] != 0, lut.config_bits[j + m] != 0};
        }
        case FaultKind::Tag::StuckOn: {
            if (!msb) return {lut.config_bits[sub] != 0, lut.config_bits[sub + m] != 0};
            // Both transistors should be off; the stuck one leaks its half.
            if (lut.fault.a == 0) return {lut.config_bits[sub] != 0, false};
            return {false, lut.config_bits[sub + m] != 0};
        }
        case FaultKind::Tag::Open:
            return {false, false};
    }
    return {false, false};
}

}  // namespace cntfpga
