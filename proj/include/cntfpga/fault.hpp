#pragma once
// Fault taxonomy for LUT cells, the internal mux tree, the split-network pass
// transistors, and carry-chain nodes. One LUT carries at most one fault.

#include <cstdint>
#include <string>

namespace cntfpga {

struct FaultKind {
    enum class Tag : uint8_t {
        None,
        StuckAt0,
        StuckAt1,
        MuxOverride,      // decoder ignores inputs, always reads cell a
        MuxAlwaysSelect,  // one tree branch stuck conducting toward cell a
        WiredAnd,         // adjacent cells a, a+1 read as AND when addressed
        WiredOr,          // adjacent cells a, a+1 read as OR when addressed
        StuckOn,          // split-network pass transistor a (0 = TA, 1 = TB) always on
        Open,             // broken net, line reads 0
    };

    Tag tag = Tag::None;
    uint16_t a = 0;
    uint16_t b = 0;

    static FaultKind none() { return {}; }
    static FaultKind stuck_at0() { return {Tag::StuckAt0, 0, 0}; }
    static FaultKind stuck_at1() { return {Tag::StuckAt1, 0, 0}; }
    static FaultKind mux_override(uint16_t cell) { return {Tag::MuxOverride, cell, 0}; }
    static FaultKind mux_always_select(uint16_t cell) { return {Tag::MuxAlwaysSelect, cell, 0}; }
    static FaultKind wired_and(uint16_t lo) { return {Tag::WiredAnd, lo, static_cast<uint16_t>(lo + 1)}; }
    static FaultKind wired_or(uint16_t lo) { return {Tag::WiredOr, lo, static_cast<uint16_t>(lo + 1)}; }
    static FaultKind stuck_on(uint16_t transistor) { return {Tag::StuckOn, transistor, 0}; }
    static FaultKind open() { return {Tag::Open, 0, 0}; }

    bool is_none() const { return tag == Tag::None; }

    friend bool operator==(const FaultKind& x, const FaultKind& y) {
        return x.tag == y.tag && x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const FaultKind& x, const FaultKind& y) { return !(x == y); }
};

// Short labels for reports; the single-character codes match the fault-map CSV.
std::string fault_name(const FaultKind& f);
char fault_code(const FaultKind& f);

}  // namespace cntfpga
