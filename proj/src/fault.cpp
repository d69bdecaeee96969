#include "cntfpga/fault.hpp"

namespace cntfpga {

std::string fault_name(const FaultKind& f) {
    using Tag = FaultKind::Tag;
    switch (f.tag) {
        case Tag::None: return "none";
        case Tag::StuckAt0: return "sa0";
        case Tag::StuckAt1: return "sa1";
        case Tag::MuxOverride: return "mux_override";
        case Tag::MuxAlwaysSelect: return "mux_always_select";
        case Tag::WiredAnd: return "wired_and";
        case Tag::WiredOr: return "wired_or";
        case Tag::StuckOn: return "stuck_on";
        case Tag::Open: return "open";
    }
    return "none";
}

char fault_code(const FaultKind& f) {
    using Tag = FaultKind::Tag;
    switch (f.tag) {
        case Tag::None: return '.';
        case Tag::StuckAt0: return '0';
        case Tag::StuckAt1: return '1';
        case Tag::MuxOverride: return 'M';
        case Tag::MuxAlwaysSelect: return 'A';
        case Tag::WiredAnd: return '&';
        case Tag::WiredOr: return '|';
        case Tag::StuckOn: return 'S';
        case Tag::Open: return 'X';
    }
    return '.';
}

}  // namespace cntfpga
