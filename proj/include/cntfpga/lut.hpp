#pragma once
// k-input LUT model: 2^k SRAM cells behind a mux tree addressed by the inputs.
// Input index packs I_{k-1}..I_0 with I_0 as the least significant bit, so the
// index is also the cell address. config_bits[0..2^k-1] holds the truth table.
//
// The split-network variant halves the tree into NW1 (cells 0..2^(k-1)-1) and
// NW2 (upper half). In test mode both halves are observed at once on outputs
// (o2, o2p) for each (k-1)-bit sub-address; an input with the top bit set
// turns both pass transistors off, which exposes stuck-on leakage. In normal
// mode I_{k-1} picks the half and a stuck-on transistor fights the selected
// one, which degrades to a wired AND of the two addressed cells.

#include <cstdint>
#include <vector>

#include "cntfpga/fault.hpp"

namespace cntfpga {

struct LutInstance {
    int k = 6;
    std::vector<uint8_t> config_bits;  // size 2^k, values 0/1
    FaultKind fault;
};

LutInstance make_lut(int k);

// Fill from an integer truth table written the way datasheets print it: the
// literal reads left to right as cells 0..2^k-1, so 0b01101001 with k=3 gives
// config_bits = {0,1,1,0,1,0,0,1}.
void load_config(LutInstance& lut, uint64_t truth, int k);

bool lut_eval(const LutInstance& lut, uint32_t input_index);
bool lut_eval(const LutInstance& lut, const std::vector<uint8_t>& inputs);

struct SplitOutputs {
    bool o2 = false;   // NW1 side
    bool o2p = false;  // NW2 side
};

// test_mode=true drives both halves from the low k-1 input bits; the top input
// bit gates the pass transistors off. test_mode=false reproduces lut_eval on
// the pair (selected half on its output, other output idle low).
SplitOutputs lut_eval_split(const LutInstance& lut, uint32_t input_index, bool test_mode);

}  // namespace cntfpga
