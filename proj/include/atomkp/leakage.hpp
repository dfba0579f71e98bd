/* leakage.hpp - cycle-accurate synthetic side-channel trace generator.
 *
 * Walks a kP event log and emits amplitude samples: per opcode, its cycle
 * count from the config; per clock cycle, a Hamming-weight component of the
 * destination value (4 limbs round-robin); per sample, Gaussian noise.  NOP
 * runs emit a low baseline and become the troughs segmentation relies on.
 *
 * Injection knobs (all default off) let fixtures break atomicity on purpose:
 * an extra cycle count on the first X of every addition's first block, and an
 * amplitude offset over a sample window of each addition pattern.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "atomkp/scalar_mult.hpp"
#include "atomkp/trace.hpp"

namespace atomkp {

struct LeakageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSeed = 1001;

struct LeakageConfig {
    // opcode durations in clock cycles
    std::uint32_t cycles_x = 16570;
    std::uint32_t cycles_xp = 16569;
    std::uint32_t cycles_n = 1197;
    std::uint32_t cycles_a = 1353;

    // the first X of a pattern's first block may come in short
    bool x_jitter = false;
    std::uint32_t x_jitter_low = 16565;
    double x_jitter_low_prob = 0.75;

    std::uint32_t cycles_per_nop = 14;
    bool nop_jitter = false;  // +/- 1 cycle per NOP unit (memory wait states)

    std::uint32_t samples_per_cycle = 10;
    double clock_hz = 100e6;

    // amplitude model
    double noise_sigma = 0.001;
    double hw_coeff = 0.05;
    double baseline_active = 0.015;
    double baseline_nop = 0.002;

    std::uint64_t rng_seed = kDefaultSeed;

    // --- distinguishability injection (defaults keep atomicity intact) ----
    // extra cycles on the first X of every addition's first block
    std::int32_t addition_d1_extra_cycles = 0;
    // amplitude offset over [begin, end) samples counted from each addition
    // pattern's first sample (put the window inside the first block)
    double addition_d1_amp_offset = 0.0;
    std::uint64_t addition_d1_amp_begin = 0;
    std::uint64_t addition_d1_amp_end = 0;
    // first doubling runs a few cycles short of the rest (Z = 1 inputs)
    bool doubling1_offset = false;
    std::int32_t doubling1_delta_cycles = -5;

    void validate() const {
        if (cycles_x == 0 || cycles_xp == 0 || cycles_n == 0 || cycles_a == 0)
            throw LeakageError("cycle counts must be positive");
        if (samples_per_cycle < 1) throw LeakageError("samples_per_cycle must be >= 1");
        if (cycles_per_nop == 0) throw LeakageError("cycles_per_nop must be positive");
        if (clock_hz <= 0) throw LeakageError("clock_hz must be positive");
        if (noise_sigma < 0) throw LeakageError("noise_sigma must be >= 0");
        if (!(baseline_nop < baseline_active))
            throw LeakageError("baseline_nop must stay below baseline_active");
        if (x_jitter_low_prob < 0 || x_jitter_low_prob > 1)
            throw LeakageError("x_jitter_low_prob must be a probability");
        if (x_jitter && x_jitter_low == 0) throw LeakageError("x_jitter_low must be positive");
        if (addition_d1_extra_cycles < 0 && static_cast<std::uint32_t>(-addition_d1_extra_cycles) >= cycles_x)
            throw LeakageError("addition_d1_extra_cycles would erase the first X");
        if (doubling1_offset && doubling1_delta_cycles < 0 &&
            static_cast<std::uint32_t>(-doubling1_delta_cycles) >= cycles_x)
            throw LeakageError("doubling1_delta_cycles would erase the first X");
    }

    std::uint32_t opcode_cycles(Opcode op) const {
        switch (op) {
            case Opcode::X: return cycles_x;
            case Opcode::XPrime: return cycles_xp;
            case Opcode::N: return cycles_n;
            default: return cycles_a;
        }
    }

    // one MNAMNAA block with no adjustments
    std::uint64_t block_cycles() const {
        return 2ull * (cycles_x + cycles_xp + cycles_n) + 3ull * cycles_a;
    }
};

inline Trace simulate_trace(const KPEventLog& log, const LeakageConfig& cfg) {
    cfg.validate();

    std::mt19937_64 rng(cfg.rng_seed);
    std::normal_distribution<double> gauss(0.0, cfg.noise_sigma > 0 ? cfg.noise_sigma : 1.0);
    auto noise = [&]() { return cfg.noise_sigma > 0 ? gauss(rng) : 0.0; };
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pm1(-1, 1);

    Trace t;
    t.clock_hz = cfg.clock_hz;
    t.sample_rate_hz = cfg.clock_hz * cfg.samples_per_cycle;

    GroundTruth gt;
    gt.scalar_bits = log.scalar_bits;

    const std::uint32_t spc = cfg.samples_per_cycle;

    // walk state
    bool in_pattern = false;
    PatternKind cur_kind = PatternKind::Doubling;
    std::uint32_t cur_ordinal = 0;
    bool first_x_pending = false;
    std::uint64_t pattern_start = 0;
    bool pattern_started = false;
    std::uint16_t cur_block = 0;  // 0 = none open
    std::uint64_t block_start = 0;
    std::uint64_t last_op_end = 0;

    auto close_block = [&]() {
        if (cur_block != 0) {
            gt.block_bounds.push_back(Bound{block_start, last_op_end});
            gt.block_pattern.push_back(static_cast<std::uint32_t>(gt.pattern_kinds.size() - 1));
            cur_block = 0;
        }
    };
    auto close_pattern = [&]() {
        close_block();
        if (in_pattern && pattern_started)
            gt.pattern_bounds.push_back(Bound{pattern_start, last_op_end});
        in_pattern = false;
        pattern_started = false;
    };

    for (const LogEntry& e : log.entries) {
        switch (e.type) {
            case LogEntry::Type::PatternBegin: {
                close_pattern();
                in_pattern = true;
                cur_kind = e.kind;
                cur_ordinal = e.ordinal;
                first_x_pending = true;
                gt.pattern_kinds.push_back(e.kind);
                break;
            }
            case LogEntry::Type::Nops: {
                for (std::uint32_t u = 0; u < e.nop_count; u++) {
                    std::int64_t cyc = cfg.cycles_per_nop;
                    if (cfg.nop_jitter) cyc += pm1(rng);
                    if (cyc < 1) cyc = 1;
                    for (std::int64_t c = 0; c < cyc; c++)
                        for (std::uint32_t s = 0; s < spc; s++)
                            t.samples.push_back(static_cast<float>(cfg.baseline_nop + noise()));
                }
                break;
            }
            case LogEntry::Type::Op: {
                const OpEvent& ev = e.op;
                std::int64_t cycles = cfg.opcode_cycles(ev.op);
                if (first_x_pending && ev.op == Opcode::X && ev.block == 1) {
                    if (cfg.x_jitter)
                        cycles = unit(rng) < cfg.x_jitter_low_prob ? cfg.x_jitter_low : cfg.cycles_x;
                    if (in_pattern && cur_kind == PatternKind::Addition)
                        cycles += cfg.addition_d1_extra_cycles;
                    if (in_pattern && cur_kind == PatternKind::Doubling && cur_ordinal == 1 &&
                        cfg.doubling1_offset)
                        cycles += cfg.doubling1_delta_cycles;
                    first_x_pending = false;
                }
                if (cycles < 1) cycles = 1;

                std::uint64_t start = t.samples.size();
                if (!pattern_started) {
                    pattern_started = true;
                    pattern_start = start;
                }
                if (ev.block != cur_block) {
                    close_block();
                    cur_block = ev.block;
                    block_start = start;
                }

                bool inject_amp = cur_kind == PatternKind::Addition && cfg.addition_d1_amp_offset != 0.0;
                for (std::int64_t c = 0; c < cycles; c++) {
                    std::uint64_t word = ev.dst_value.w[static_cast<std::size_t>(c) % kWords];
                    double amp = cfg.baseline_active +
                                 cfg.hw_coeff * (static_cast<double>(std::popcount(word)) / 64.0);
                    for (std::uint32_t s = 0; s < spc; s++) {
                        double v = amp + noise();
                        if (inject_amp) {
                            std::uint64_t off = t.samples.size() - pattern_start;
                            if (off >= cfg.addition_d1_amp_begin && off < cfg.addition_d1_amp_end)
                                v += cfg.addition_d1_amp_offset;
                        }
                        t.samples.push_back(static_cast<float>(v));
                    }
                }
                last_op_end = t.samples.size();
                gt.op_codes.push_back(ev.op);
                gt.op_bounds.push_back(Bound{start, last_op_end});
                break;
            }
        }
    }
    close_pattern();

    t.truth = gt;
    return t;
}

}  // namespace atomkp
