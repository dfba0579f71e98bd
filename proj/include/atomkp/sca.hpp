/* sca.hpp - windowed complete-separation scan, distance buckets, streaks,
 * block opcode annotation, and the duration-classification key recovery.
 *
 * Separation at index i with window w: the doubling set is point-valued
 * (max_d(i), min_d(i)); the addition set is windowed over
 * [i - floor((w-1)/2), i + ceil((w-1)/2)].  A larger window can only relax
 * the requirement, so hit sets grow monotonically with w.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "atomkp/leakage.hpp"
#include "atomkp/segment.hpp"

namespace atomkp {

struct SScaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// the duration walk stepped past the end of the block list mid-pattern,
// which signals misclassification (or an intact countermeasure)
struct WalkDesync : SScaError {
    using SScaError::SScaError;
};

inline constexpr int kMaxWindow = 6;

// ---------------------------------------------------------------------------
// separation scan

struct SeparationHit {
    std::uint64_t index = 0;
    enum class Direction : std::uint8_t { AdditionAbove, DoublingAbove } direction =
        Direction::AdditionAbove;
    double gap = 0;  // strict margin, always > 0
    int window = 1;
};

inline std::vector<SeparationHit> separation_scan(const std::vector<SubTrace>& d_set,
                                                  const std::vector<SubTrace>& a_set, int window,
                                                  std::uint64_t range_begin,
                                                  std::uint64_t range_end) {
    if (d_set.empty() || a_set.empty()) throw SScaError("separation_scan: empty trace set");
    if (window < 1 || window > kMaxWindow) throw SScaError("separation_scan: window out of range");
    if (range_end <= range_begin) throw SScaError("separation_scan: empty scan range");

    const std::int64_t lo_pad = (window - 1) / 2;
    const std::int64_t hi_pad = window / 2;
    const std::int64_t ext_begin = static_cast<std::int64_t>(range_begin) - lo_pad;
    const std::int64_t ext_end = static_cast<std::int64_t>(range_end) + hi_pad;
    if (ext_begin < 0) throw SScaError("separation_scan: range does not leave room for the window");

    for (const SubTrace& s : d_set)
        if (!s.aligned_index_ok(static_cast<std::int64_t>(range_begin)) ||
            !s.aligned_index_ok(static_cast<std::int64_t>(range_end) - 1))
            throw SScaError("separation_scan: doubling sub-trace does not cover the range");
    for (const SubTrace& s : a_set)
        if (!s.aligned_index_ok(ext_begin) || !s.aligned_index_ok(ext_end - 1))
            throw SScaError("separation_scan: addition sub-trace does not cover the range");

    const std::size_t ext_len = static_cast<std::size_t>(ext_end - ext_begin);
    std::vector<double> min_a(ext_len), max_a(ext_len);
    for (std::size_t k = 0; k < ext_len; k++) {
        std::int64_t i = ext_begin + static_cast<std::int64_t>(k);
        double mn = a_set[0].aligned_at(i), mx = mn;
        for (std::size_t t = 1; t < a_set.size(); t++) {
            double v = a_set[t].aligned_at(i);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        min_a[k] = mn;
        max_a[k] = mx;
    }

    std::vector<SeparationHit> hits;
    for (std::uint64_t i = range_begin; i < range_end; i++) {
        double max_d = d_set[0].aligned_at(static_cast<std::int64_t>(i));
        double min_d = max_d;
        for (std::size_t t = 1; t < d_set.size(); t++) {
            double v = d_set[t].aligned_at(static_cast<std::int64_t>(i));
            max_d = std::max(max_d, v);
            min_d = std::min(min_d, v);
        }
        std::size_t wb = static_cast<std::size_t>(static_cast<std::int64_t>(i) - lo_pad - ext_begin);
        double w_min_a = min_a[wb], w_max_a = max_a[wb];
        for (std::size_t j = 1; j < static_cast<std::size_t>(lo_pad + hi_pad) + 1; j++) {
            w_min_a = std::max(w_min_a, min_a[wb + j]);  // best separation over the window
            w_max_a = std::min(w_max_a, max_a[wb + j]);
        }
        if (max_d < w_min_a)
            hits.push_back(SeparationHit{i, SeparationHit::Direction::AdditionAbove, w_min_a - max_d,
                                         window});
        if (w_max_a < min_d)
            hits.push_back(SeparationHit{i, SeparationHit::Direction::DoublingAbove, min_d - w_max_a,
                                         window});
    }
    return hits;
}

// ---------------------------------------------------------------------------
// histograms

struct BucketThresholds {
    std::array<double, 3> edges = {0.002, 0.003, 0.004};
};

struct BucketTable {
    // rows 1..kMaxWindow, columns: v<=e0, e0<v<=e1, e1<v<=e2, v>e2
    std::array<std::array<std::uint64_t, 4>, kMaxWindow> counts{};
    BucketThresholds thresholds;
};

inline void bucket_accumulate(BucketTable& table, const std::vector<SeparationHit>& hits) {
    for (const SeparationHit& h : hits) {
        if (h.window < 1 || h.window > kMaxWindow) throw SScaError("bucket_histogram: bad hit window");
        const auto& e = table.thresholds.edges;
        std::size_t bucket = h.gap <= e[0] ? 0 : h.gap <= e[1] ? 1 : h.gap <= e[2] ? 2 : 3;
        table.counts[static_cast<std::size_t>(h.window - 1)][bucket]++;
    }
}

inline BucketTable bucket_histogram(const std::vector<SeparationHit>& hits,
                                    BucketThresholds thresholds = {}) {
    BucketTable table;
    table.thresholds = thresholds;
    bucket_accumulate(table, hits);
    return table;
}

struct StreakTable {
    // per window: maximal-run length -> occurrence count
    std::array<std::map<std::uint64_t, std::uint64_t>, kMaxWindow> runs;
};

inline void streak_accumulate(StreakTable& table, const std::vector<SeparationHit>& hits) {
    std::array<std::vector<std::uint64_t>, kMaxWindow> index_sets;
    for (const SeparationHit& h : hits) {
        if (h.window < 1 || h.window > kMaxWindow) throw SScaError("streak_histogram: bad hit window");
        index_sets[static_cast<std::size_t>(h.window - 1)].push_back(h.index);
    }
    for (int w = 0; w < kMaxWindow; w++) {
        auto& idx = index_sets[static_cast<std::size_t>(w)];
        if (idx.empty()) continue;
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());  // both directions count once
        std::uint64_t run = 1;
        for (std::size_t k = 1; k <= idx.size(); k++) {
            if (k < idx.size() && idx[k] == idx[k - 1] + 1) {
                run++;
            } else {
                table.runs[static_cast<std::size_t>(w)][run]++;
                run = 1;
            }
        }
    }
}

inline StreakTable streak_histogram(const std::vector<SeparationHit>& hits) {
    StreakTable table;
    streak_accumulate(table, hits);
    return table;
}

// ---------------------------------------------------------------------------
// per-index min/max envelopes of a synchronized set, for the report plots

struct Envelope {
    std::uint64_t begin = 0;
    std::vector<double> min_v, max_v;
};

inline Envelope compute_envelope(const std::vector<SubTrace>& set, std::uint64_t range_begin,
                                 std::uint64_t range_end) {
    if (set.empty()) throw SScaError("compute_envelope: empty trace set");
    if (range_end <= range_begin) throw SScaError("compute_envelope: empty range");
    for (const SubTrace& s : set)
        if (!s.aligned_index_ok(static_cast<std::int64_t>(range_begin)) ||
            !s.aligned_index_ok(static_cast<std::int64_t>(range_end) - 1))
            throw SScaError("compute_envelope: sub-trace does not cover the range");
    Envelope env;
    env.begin = range_begin;
    env.min_v.resize(range_end - range_begin);
    env.max_v.resize(range_end - range_begin);
    for (std::uint64_t i = range_begin; i < range_end; i++) {
        double mn = set[0].aligned_at(static_cast<std::int64_t>(i)), mx = mn;
        for (std::size_t t = 1; t < set.size(); t++) {
            double v = set[t].aligned_at(static_cast<std::int64_t>(i));
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        env.min_v[i - range_begin] = mn;
        env.max_v[i - range_begin] = mx;
    }
    return env;
}

// ---------------------------------------------------------------------------
// opcode annotation of a single block sub-trace

inline std::vector<std::tuple<Opcode, std::uint64_t, std::uint64_t>> annotate_block_operations(
    const SubTrace& block, const LeakageConfig& cfg) {
    static constexpr Opcode kBlockOps[9] = {Opcode::X, Opcode::XPrime, Opcode::N,
                                            Opcode::A, Opcode::X,      Opcode::XPrime,
                                            Opcode::N, Opcode::A,      Opcode::A};
    std::uint64_t total = cfg.block_cycles() * cfg.samples_per_cycle;
    if (block.samples.size() < total)
        throw SScaError("annotate_block_operations: block too short (" +
                        std::to_string(block.samples.size()) + " < " + std::to_string(total) + ")");
    std::vector<std::tuple<Opcode, std::uint64_t, std::uint64_t>> out;
    std::uint64_t pos = 0;
    for (Opcode op : kBlockOps) {
        std::uint64_t len = static_cast<std::uint64_t>(cfg.opcode_cycles(op)) * cfg.samples_per_cycle;
        out.emplace_back(op, pos, pos + len);
        pos += len;
    }
    return out;
}

// ---------------------------------------------------------------------------
// duration-classification key recovery

struct AttackDecision {
    std::size_t block_index = 0;       // position in the flat block list
    std::uint64_t t_d1_samples = 0;    // measured first-block duration
    PatternKind classified = PatternKind::Doubling;
};

struct AttackResult {
    std::string recovered_bits;  // includes the implicit leading 1
    std::vector<AttackDecision> decisions;
    bool have_truth = false;
    bool success = false;
};

// reference duration: median first-block length of doublings 2..4
// (the first doubling is excluded, its timing is the Z=1 special case)
inline std::uint64_t calibrate_t_ref_pd(const Segmentation& seg) {
    std::vector<std::uint64_t> d1;
    for (const auto& op : seg.operations) {
        if (op.kind != PatternKind::Doubling) continue;
        d1.push_back(op.block_bounds.front().length());
        if (d1.size() == 4) break;
    }
    if (d1.size() < 4) throw SScaError("calibrate_t_ref_pd: need at least four doublings");
    std::vector<std::uint64_t> mid(d1.begin() + 1, d1.end());
    std::sort(mid.begin(), mid.end());
    return mid[1];
}

inline AttackResult duration_attack(const Segmentation& seg, std::uint64_t t_ref_pd,
                                    std::uint64_t tolerance_samples,
                                    const std::string& truth_bits = {}) {
    std::vector<Bound> blocks = seg.all_blocks();
    AttackResult res;

    // walk the flat block list as if the operation grouping were unknown
    std::size_t i = 0;
    while (i < blocks.size()) {
        std::uint64_t t = blocks[i].length();
        std::uint64_t diff = t > t_ref_pd ? t - t_ref_pd : t_ref_pd - t;
        bool pd = diff <= tolerance_samples;
        res.decisions.push_back(AttackDecision{i, t, pd ? PatternKind::Doubling : PatternKind::Addition});
        i += pd ? 4 : 6;
    }
    if (i != blocks.size())
        throw WalkDesync("duration walk stepped past the block list mid-pattern (pointer " +
                         std::to_string(i) + " of " + std::to_string(blocks.size()) + " blocks)");

    res.recovered_bits = "1";  // the implicit MSB
    std::size_t d = 0;
    while (d < res.decisions.size()) {
        if (res.decisions[d].classified != PatternKind::Doubling)
            throw WalkDesync("duration walk classified an addition where a doubling must start a bit");
        bool followed_by_add = d + 1 < res.decisions.size() &&
                               res.decisions[d + 1].classified == PatternKind::Addition;
        res.recovered_bits.push_back(followed_by_add ? '1' : '0');
        d += followed_by_add ? 2 : 1;
    }

    if (!truth_bits.empty()) {
        res.have_truth = true;
        res.success = res.recovered_bits == truth_bits;
    }
    return res;
}

}  // namespace atomkp
