#include "cntfpga/clb_test.hpp"

#include <stdexcept>

#include "cntfpga/carry_chain.hpp"

namespace cntfpga {

namespace {

std::vector<uint8_t> bit_readout_config(int k, int bit) {
    std::vector<uint8_t> cfg(size_t{1} << k);
    for (uint32_t b = 0; b < cfg.size(); ++b)
        cfg[b] = static_cast<uint8_t>((b >> bit) & 1u);
    return cfg;
}

std::vector<uint32_t> all_patterns(int k) {
    std::vector<uint32_t> p(size_t{1} << k);
    for (uint32_t i = 0; i < p.size(); ++i) p[i] = i;
    return p;
}

}  // namespace

std::vector<TestConfiguration> gen_carry_chain_configs(int k) {
    std::vector<TestConfiguration> out(2);
    for (int i = 0; i < 2; ++i) {
        out[i].lut_config.assign(size_t{1} << k, 1);
        out[i].has_carry = true;
        out[i].carry_in = (i == 1);
    }
    return out;
}

TestSession gen_session(int k, SessionStyle style) {
    if (k < 2 || k > 8) throw std::invalid_argument("gen_session: k must be in [2, 8]");
    TestSession s;
    s.style = style;
    s.k = k;

    if (style == SessionStyle::Improved) {
        const uint32_t half = 1u << (k - 1);
        for (int i = 0; i < 2; ++i) {
            TestConfiguration cfg;
            cfg.config_id = i + 1;
            cfg.lut_config = bit_readout_config(k, i == 0 ? 0 : k - 2);
            cfg.test_mode = true;
            s.configs.push_back(std::move(cfg));
            std::vector<uint32_t> pat(half);
            for (uint32_t j = 0; j < half; ++j) pat[j] = j;
            s.patterns.push_back(std::move(pat));
        }
        // One extra pattern under the second config turns both pass
        // transistors off; anything observed then is stuck-on leakage.
        s.patterns[1].push_back((1u << k) - 1);
        return s;
    }

    for (int i = 0; i < k; ++i) {
        TestConfiguration cfg;
        cfg.config_id = i + 1;
        cfg.lut_config = bit_readout_config(k, i);
        s.configs.push_back(std::move(cfg));
        s.patterns.push_back(all_patterns(k));
    }
    TestConfiguration comp;
    comp.config_id = k + 1;
    comp.lut_config = bit_readout_config(k, 0);
    for (auto& b : comp.lut_config) b ^= 1;
    s.configs.push_back(std::move(comp));
    s.patterns.push_back(all_patterns(k));

    if (style == SessionStyle::WithCarryChain) {
        auto carry = gen_carry_chain_configs(k);
        for (size_t i = 0; i < carry.size(); ++i) {
            carry[i].config_id = k + 2 + static_cast<int>(i);
            s.configs.push_back(std::move(carry[i]));
            s.patterns.push_back({(1u << k) - 1});
        }
    }
    return s;
}

double estimate_test_time_s(const TestSession& s, const TimingParams& t) {
    return t.t_session_s + s.configs.size() * t.t_config_s + s.total_patterns() * t.t_pattern_s;
}

SessionResult simulate_session(const Clb& clb, const TestSession& s) {
    SessionResult r;
    if (clb.luts.empty() || clb.luts.front().k != s.k)
        throw std::invalid_argument("simulate_session: session k does not match CLB");

    const int n_luts = static_cast<int>(clb.luts.size());
    std::vector<uint8_t> lut_failed(n_luts, 0);
    LutInstance golden = make_lut(s.k);

    for (size_t ci = 0; ci < s.configs.size(); ++ci) {
        const TestConfiguration& cfg = s.configs[ci];
        golden.config_bits = cfg.lut_config;
        golden.fault = FaultKind::none();

        if (cfg.has_carry) {
            // Constant operands; observation is the sum vector plus carry-out.
            std::vector<uint8_t> lut_out(n_luts), gold_out(n_luts, 0);
            std::vector<uint8_t> external(n_luts, 1);
            const uint32_t idx = (1u << s.k) - 1;
            for (int l = 0; l < n_luts; ++l) {
                LutInstance dut = golden;
                dut.fault = clb.luts[l].fault;
                lut_out[l] = lut_eval(dut, idx) ? 1 : 0;
                gold_out[l] = lut_eval(golden, idx) ? 1 : 0;
            }
            std::vector<CarryChainStage> clean(clb.carry.size());
            const CarryEvalResult got =
                carry_chain_eval(clb.carry, lut_out, cfg.carry_in, external);
            const CarryEvalResult want =
                carry_chain_eval(clean, gold_out, cfg.carry_in, external);
            if (got.sums != want.sums || got.carry_out != want.carry_out) r.carry_failed = true;
            continue;
        }

        std::vector<LutInstance> duts(n_luts, golden);
        for (int l = 0; l < n_luts; ++l) duts[l].fault = clb.luts[l].fault;
        for (const uint32_t idx : s.patterns[ci]) {
            if (cfg.test_mode) {
                const SplitOutputs want = lut_eval_split(golden, idx, true);
                for (int l = 0; l < n_luts; ++l) {
                    const SplitOutputs got = lut_eval_split(duts[l], idx, true);
                    if (got.o2 != want.o2 || got.o2p != want.o2p) lut_failed[l] = 1;
                }
            } else {
                const bool want = lut_eval(golden, idx);
                for (int l = 0; l < n_luts; ++l)
                    if (lut_eval(duts[l], idx) != want) lut_failed[l] = 1;
            }
        }
    }

    for (int l = 0; l < n_luts; ++l)
        if (lut_failed[l]) r.failing_luts.push_back(l);
    r.passed = r.failing_luts.empty() && !r.carry_failed;
    return r;
}

}  // namespace cntfpga
