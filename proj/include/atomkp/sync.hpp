/* sync.hpp - three sub-trace synchronization methods plus mean-trace tools.
 *
 * All methods search integer shifts s in [-max_shift, max_shift] and record
 * the winner on the returned sub-trace as applied_shift, with the convention
 * aligned[i] = target[i - s].  A target that lags the reference by 7 samples
 * therefore gets applied_shift = -7.
 *
 *   A  match local extrema positions (3-point strict test), score by
 *      coincidences within 1 sample; ties: smaller |s|, then smaller SSE
 *   B  overlap of rising-run index sets (samples on strictly increasing runs)
 *   C  per-clock-period minimum sequences, minimize summed absolute difference
 *
 * A and B mechanize procedures done by eye in practice, so both first smooth
 * the anchor region with a centered moving average (smooth_window samples,
 * <= 1 disables it).  Without that, per-sample noise plants extrema on every
 * plateau and the scores lose the timing structure.  The smoothing is
 * shift-equivariant away from the array edges, so recovered shifts are not
 * biased by it.  C works on raw samples; period minima are robust as is.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "atomkp/segment.hpp"

namespace atomkp {

struct SyncError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_anchor(const SubTrace& ref, const SubTrace& target, std::size_t anchor_start,
                         std::size_t anchor_len, int max_shift) {
    if (anchor_len < 2) throw SyncError("anchor window too small");
    if (max_shift < 0) throw SyncError("max_shift must be >= 0");
    if (anchor_start + anchor_len > ref.samples.size())
        throw SyncError("anchor window out of bounds for the reference");
    std::size_t m = static_cast<std::size_t>(max_shift);
    if (anchor_start < m || anchor_start + anchor_len + m > target.samples.size())
        throw SyncError("anchor window out of bounds for the target");
}

inline double shift_sse(const SubTrace& ref, const SubTrace& target, std::size_t a, std::size_t len,
                        std::int64_t s) {
    double sse = 0;
    for (std::size_t i = a; i < a + len; i++) {
        double d = static_cast<double>(ref.samples[i]) -
                   static_cast<double>(target.samples[static_cast<std::size_t>(
                       static_cast<std::int64_t>(i) - s)]);
        sse += d * d;
    }
    return sse;
}

// centered moving average over [lo, hi), window clamped at the array edges;
// out[j] corresponds to absolute index lo + j
inline std::vector<float> smooth_region(const std::vector<float>& x, std::size_t lo, std::size_t hi,
                                        std::size_t smooth_window) {
    std::vector<float> out(hi - lo);
    if (smooth_window <= 1) {
        std::copy(x.begin() + static_cast<std::ptrdiff_t>(lo),
                  x.begin() + static_cast<std::ptrdiff_t>(hi), out.begin());
        return out;
    }
    std::size_t h = smooth_window / 2;
    for (std::size_t j = 0; j < out.size(); j++) {
        std::size_t c = lo + j;
        std::size_t b = c >= h ? c - h : 0;
        std::size_t e = std::min(c + h + 1, x.size());
        double sum = 0;
        for (std::size_t i = b; i < e; i++) sum += x[i];
        out[j] = static_cast<float>(sum / static_cast<double>(e - b));
    }
    return out;
}

// candidate ordering shared by methods A and B: higher score wins, then the
// smaller SSE over the anchor, then the smaller |shift|.  SSE must outrank
// |shift|: the 1-sample coincidence tolerance of method A ties the true
// shift with both neighbors, and only the SSE (exactly zero on noiseless
// copies) picks the right one of the three.
struct BestShift {
    bool have = false;
    double score = 0;
    std::int64_t shift = 0;
    double sse = 0;

    bool better(double cand_score, std::int64_t cand_shift, double cand_sse) const {
        if (!have) return true;
        if (cand_score != score) return cand_score > score;
        if (cand_sse != sse) return cand_sse < sse;
        if (std::llabs(cand_shift) != std::llabs(shift)) return std::llabs(cand_shift) < std::llabs(shift);
        return cand_shift < shift;  // final deterministic tie break
    }
};

// strict 3-point local extrema of a windowed vector; emitted positions are
// absolute (base = parent index of v[0])
inline void local_extrema(const std::vector<float>& v, std::size_t base,
                          std::vector<std::size_t>& maxima, std::vector<std::size_t>& minima) {
    maxima.clear();
    minima.clear();
    for (std::size_t i = 1; i + 1 < v.size(); i++) {
        if (v[i] > v[i - 1] && v[i] > v[i + 1]) maxima.push_back(base + i);
        else if (v[i] < v[i - 1] && v[i] < v[i + 1]) minima.push_back(base + i);
    }
}

// count of reference extrema with a same-polarity target extremum within
// 1 sample after applying the shift
inline std::size_t coincidences(const std::vector<std::size_t>& ref_pos,
                                const std::vector<std::size_t>& tgt_pos, std::int64_t s) {
    std::size_t count = 0, j = 0;
    for (std::size_t r : ref_pos) {
        std::int64_t want = static_cast<std::int64_t>(r);
        while (j < tgt_pos.size() && static_cast<std::int64_t>(tgt_pos[j]) + s < want - 1) j++;
        if (j < tgt_pos.size() && std::llabs(static_cast<std::int64_t>(tgt_pos[j]) + s - want) <= 1)
            count++;
    }
    return count;
}

}  // namespace detail

// --- method A: align local maxima and minima -------------------------------
inline SubTrace sync_extrema(const SubTrace& ref, const SubTrace& target, std::size_t anchor_start,
                             std::size_t anchor_len, int max_shift,
                             std::size_t smooth_window = 20) {
    detail::check_anchor(ref, target, anchor_start, anchor_len, max_shift);
    std::size_t m = static_cast<std::size_t>(max_shift);
    auto ref_sm = detail::smooth_region(ref.samples, anchor_start, anchor_start + anchor_len,
                                        smooth_window);
    auto tgt_sm = detail::smooth_region(target.samples, anchor_start - m,
                                        anchor_start + anchor_len + m, smooth_window);
    std::vector<std::size_t> ref_max, ref_min, tgt_max, tgt_min;
    detail::local_extrema(ref_sm, anchor_start, ref_max, ref_min);
    detail::local_extrema(tgt_sm, anchor_start - m, tgt_max, tgt_min);

    detail::BestShift best;
    for (std::int64_t s = -max_shift; s <= max_shift; s++) {
        double score = static_cast<double>(detail::coincidences(ref_max, tgt_max, s) +
                                           detail::coincidences(ref_min, tgt_min, s));
        double sse = detail::shift_sse(ref, target, anchor_start, anchor_len, s);
        if (best.better(score, s, sse)) best = {true, score, s, sse};
    }
    SubTrace out = target;
    out.applied_shift = best.shift;
    return out;
}

// --- method B: align rising segments ---------------------------------------
inline SubTrace sync_rising(const SubTrace& ref, const SubTrace& target, std::size_t anchor_start,
                            std::size_t anchor_len, int max_shift,
                            std::size_t smooth_window = 20) {
    detail::check_anchor(ref, target, anchor_start, anchor_len, max_shift);

    auto rising_set = [](const std::vector<float>& v) {
        // marks samples lying on a strictly increasing pair
        std::vector<std::uint8_t> member(v.size(), 0);
        for (std::size_t i = 0; i + 1 < v.size(); i++) {
            if (v[i + 1] > v[i]) {
                member[i] = 1;
                member[i + 1] = 1;
            }
        }
        return member;
    };

    std::size_t m = static_cast<std::size_t>(max_shift);
    auto ref_set = rising_set(detail::smooth_region(ref.samples, anchor_start,
                                                    anchor_start + anchor_len, smooth_window));
    auto tgt_set = rising_set(detail::smooth_region(target.samples, anchor_start - m,
                                                    anchor_start + anchor_len + m, smooth_window));
    bool ref_any = std::find(ref_set.begin(), ref_set.end(), 1) != ref_set.end();
    bool tgt_any = std::find(tgt_set.begin(), tgt_set.end(), 1) != tgt_set.end();
    if (!ref_any || !tgt_any) throw SyncError("no rising segments in the anchor window");

    detail::BestShift best;
    for (std::int64_t s = -max_shift; s <= max_shift; s++) {
        std::size_t overlap = 0;
        for (std::size_t i = 0; i < ref_set.size(); i++) {
            if (!ref_set[i]) continue;
            // ref index anchor_start + i aligns with target index (.. - s)
            std::int64_t j = static_cast<std::int64_t>(anchor_start + i) - s -
                             static_cast<std::int64_t>(anchor_start - m);
            if (j >= 0 && j < static_cast<std::int64_t>(tgt_set.size()) && tgt_set[static_cast<std::size_t>(j)])
                overlap++;
        }
        double sse = detail::shift_sse(ref, target, anchor_start, anchor_len, s);
        if (best.better(static_cast<double>(overlap), s, sse)) best = {true, static_cast<double>(overlap), s, sse};
    }
    SubTrace out = target;
    out.applied_shift = best.shift;
    return out;
}

// --- method C: align per-clock-period minima --------------------------------
inline SubTrace sync_clock_minima(const SubTrace& ref, const SubTrace& target,
                                  std::size_t anchor_start, std::size_t anchor_len,
                                  std::size_t clock_period_samples, int max_shift) {
    if (clock_period_samples < 2) throw SyncError("clock period must be at least 2 samples");
    detail::check_anchor(ref, target, anchor_start, anchor_len, max_shift);
    std::size_t periods = anchor_len / clock_period_samples;
    if (periods == 0) throw SyncError("anchor window shorter than one clock period");

    std::vector<double> ref_min(periods);
    for (std::size_t k = 0; k < periods; k++) {
        double mn = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < clock_period_samples; i++)
            mn = std::min(mn, static_cast<double>(ref.samples[anchor_start + k * clock_period_samples + i]));
        ref_min[k] = mn;
    }

    bool have = false;
    double best_score = 0;
    std::int64_t best_shift = 0;
    for (std::int64_t s = -max_shift; s <= max_shift; s++) {
        double score = 0;
        for (std::size_t k = 0; k < periods; k++) {
            double mn = std::numeric_limits<double>::infinity();
            std::size_t base = static_cast<std::size_t>(
                static_cast<std::int64_t>(anchor_start + k * clock_period_samples) - s);
            for (std::size_t i = 0; i < clock_period_samples; i++)
                mn = std::min(mn, static_cast<double>(target.samples[base + i]));
            score += std::abs(ref_min[k] - mn);
        }
        bool better = !have || score < best_score ||
                      (score == best_score && std::llabs(s) < std::llabs(best_shift)) ||
                      (score == best_score && std::llabs(s) == std::llabs(best_shift) && s < best_shift);
        if (better) {
            have = true;
            best_score = score;
            best_shift = s;
        }
    }
    SubTrace out = target;
    out.applied_shift = best_shift;
    return out;
}

// --- mean trace and the paper's sync-quality heuristic -----------------------
inline SubTrace mean_trace(const std::vector<SubTrace>& set, std::size_t len) {
    if (set.empty()) throw SyncError("mean_trace: empty set");
    for (const SubTrace& s : set) {
        if (!s.aligned_index_ok(0) || !s.aligned_index_ok(static_cast<std::int64_t>(len) - 1))
            throw SyncError("mean_trace: member shorter than requested length after shift");
    }
    SubTrace out;
    out.label = "mean";
    out.samples.resize(len);
    for (std::size_t i = 0; i < len; i++) {
        double acc = 0;
        for (const SubTrace& s : set) acc += s.aligned_at(static_cast<std::int64_t>(i));
        out.samples[i] = static_cast<float>(acc / static_cast<double>(set.size()));
    }
    return out;
}

// RMS amplitude of the mean trace over a window; higher = better synchronized
inline double sync_quality(const std::vector<SubTrace>& set, std::size_t window_start,
                           std::size_t window_len) {
    if (set.empty()) throw SyncError("sync_quality: empty set");
    SubTrace m = mean_trace(set, window_start + window_len);
    double acc = 0;
    for (std::size_t i = window_start; i < window_start + window_len; i++)
        acc += static_cast<double>(m.samples[i]) * static_cast<double>(m.samples[i]);
    return std::sqrt(acc / static_cast<double>(window_len));
}

}  // namespace atomkp
