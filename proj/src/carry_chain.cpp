#include "cntfpga/carry_chain.hpp"

#include <stdexcept>

namespace cntfpga {

namespace {

bool apply_stuck(const FaultKind& f, bool value) {
    if (f.tag == FaultKind::Tag::StuckAt0) return false;
    if (f.tag == FaultKind::Tag::StuckAt1) return true;
    if (f.tag != FaultKind::Tag::None)
        throw std::invalid_argument("carry_chain_eval: only stuck-at faults allowed");
    return value;
}

}  // namespace

CarryEvalResult carry_chain_eval(const std::vector<CarryChainStage>& stages,
                                 const std::vector<uint8_t>& lut_outputs,
                                 bool carry_in,
                                 const std::vector<uint8_t>& external) {
    const size_t n = stages.size();
    if (lut_outputs.size() != n || external.size() != n)
        throw std::invalid_argument("carry_chain_eval: per-stage vector size mismatch");

    CarryEvalResult r;
    r.sums.resize(n);
    bool carry = carry_in;
    for (size_t i = 0; i < n; ++i) {
        const bool mux_out = apply_stuck(stages[i].mux_fault,
                                         lut_outputs[i] ? carry : external[i] != 0);
        r.sums[i] = apply_stuck(stages[i].xor_fault, carry != (external[i] != 0)) ? 1 : 0;
        carry = mux_out;
    }
    r.carry_out = carry;
    return r;
}

}  // namespace cntfpga
