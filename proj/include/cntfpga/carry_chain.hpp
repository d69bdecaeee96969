#pragma once
// Ripple carry chain through a CLB. Each stage has a carry mux steered by its
// LUT output (select=1 propagates the incoming carry, select=0 injects the
// external operand bit) and an XOR that exposes carry XOR external as the sum.
// Only stuck-at faults apply to the mux output and the XOR output nodes.

#include <cstdint>
#include <vector>

#include "cntfpga/fault.hpp"

namespace cntfpga {

struct CarryChainStage {
    FaultKind mux_fault;  // None / StuckAt0 / StuckAt1 on the mux output node
    FaultKind xor_fault;  // same, on the sum node
};

struct CarryEvalResult {
    std::vector<uint8_t> sums;  // one per stage
    bool carry_out = false;
};

CarryEvalResult carry_chain_eval(const std::vector<CarryChainStage>& stages,
                                 const std::vector<uint8_t>& lut_outputs,
                                 bool carry_in,
                                 const std::vector<uint8_t>& external);

}  // namespace cntfpga
