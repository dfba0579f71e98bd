/* segment.hpp - NOP-trough segmentation of a trace into blocks/operations.
 *
 * Troughs are found coarsely with a moving average one clock period wide,
 * then snapped to raw-sample boundaries (a boundary is confirmed by three
 * consecutive samples above the trough level, so a lone noise spike cannot
 * move it).  Active regions between troughs are atomic blocks; short troughs
 * join blocks into one point operation, long troughs separate operations.
 * Kind follows block count: 4 = doubling, 6 = addition.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "atomkp/trace.hpp"

namespace atomkp {

struct SegmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SubTrace {
    std::vector<float> samples;
    std::uint64_t origin_offset = 0;  // index of samples[0] in the parent trace
    std::int64_t applied_shift = 0;   // set by the sync methods
    std::string label;

    // aligned view: aligned_at(i) pairs with the reference's sample i
    float aligned_at(std::int64_t i) const {
        return samples[static_cast<std::size_t>(i - applied_shift)];
    }
    bool aligned_index_ok(std::int64_t i) const {
        std::int64_t j = i - applied_shift;
        return j >= 0 && j < static_cast<std::int64_t>(samples.size());
    }
};

inline SubTrace extract(const Trace& t, Bound b, std::string label = {}) {
    if (b.end > t.samples.size() || b.begin > b.end) throw SegmentError("extract: bounds outside trace");
    SubTrace s;
    s.samples.assign(t.samples.begin() + static_cast<std::ptrdiff_t>(b.begin),
                     t.samples.begin() + static_cast<std::ptrdiff_t>(b.end));
    s.origin_offset = b.begin;
    s.label = std::move(label);
    return s;
}

struct OperationSeg {
    PatternKind kind = PatternKind::Doubling;
    Bound bounds;                    // first block begin .. last block end
    std::vector<Bound> block_bounds;
    std::string label;               // "Doubling i" / "Addition j"
    std::int64_t applied_shift = 0;  // filled by the sync stage
};

struct Segmentation {
    std::vector<OperationSeg> operations;

    std::vector<Bound> all_blocks() const {
        std::vector<Bound> out;
        for (const auto& op : operations)
            out.insert(out.end(), op.block_bounds.begin(), op.block_bounds.end());
        return out;
    }

    std::string interleaving() const {
        std::string s;
        for (const auto& op : operations) {
            if (!s.empty()) s.push_back(' ');
            s.push_back(op.kind == PatternKind::Doubling ? 'D' : 'A');
        }
        return s;
    }
};

inline Segmentation segment_trace(const Trace& t, double trough_level,
                                  std::uint64_t min_trough_samples) {
    Segmentation seg;
    const auto& x = t.samples;
    const std::uint64_t n = x.size();
    if (n == 0) return seg;  // no operations ran, nothing to segment

    std::uint64_t W = static_cast<std::uint64_t>(std::llround(t.samples_per_cycle()));
    if (W < 1) W = 1;
    if (n < W) throw SegmentError("no troughs found");

    auto above = [&](std::uint64_t i) { return x[i] > trough_level; };

    // coarse pass: moving average over a trailing window of W samples
    std::vector<Bound> troughs;
    {
        double acc = 0;
        for (std::uint64_t i = 0; i < W; i++) acc += x[i];
        bool in_run = false;
        std::uint64_t run_start = 0;  // window-end index where the run began
        for (std::uint64_t i = W - 1; i < n; i++) {
            if (i >= W) acc += x[i] - x[i - W];
            bool low = acc / static_cast<double>(W) < trough_level;
            if (low && !in_run) {
                in_run = true;
                run_start = i;
            } else if (!low && in_run) {
                in_run = false;
                troughs.push_back(Bound{run_start >= W - 1 ? run_start - (W - 1) : 0, i});
            }
        }
        if (in_run) troughs.push_back(Bound{run_start >= W - 1 ? run_start - (W - 1) : 0, n});
    }

    // snap to raw boundaries; three consecutive active samples confirm an edge
    auto three_above_before = [&](std::uint64_t b) {
        return b >= 3 && above(b - 1) && above(b - 2) && above(b - 3);
    };
    auto three_above_at = [&](std::uint64_t e) {
        return e + 2 < n && above(e) && above(e + 1) && above(e + 2);
    };
    std::vector<Bound> refined;
    for (Bound tr : troughs) {
        std::uint64_t b = tr.begin;
        while (b > 0 && !three_above_before(b)) b--;
        while (b < n && above(b)) b++;
        std::uint64_t e = tr.end;
        while (e < n && !three_above_at(e)) e++;
        while (e > b && three_above_at(e - 1)) e--;
        if (e > b && e - b >= min_trough_samples) {
            if (!refined.empty() && b <= refined.back().end) refined.back().end = e;
            else refined.push_back(Bound{b, e});
        }
    }
    if (refined.empty()) throw SegmentError("no troughs found");

    // active regions between troughs are atomic blocks; remember the trough
    // separating each consecutive pair
    std::vector<Bound> blocks;
    std::vector<std::uint64_t> sep_before;  // separator length before block i (0 for the first)
    std::uint64_t cursor = 0;
    std::uint64_t pending_sep = 0;
    for (const Bound& tr : refined) {
        if (tr.begin > cursor) {
            blocks.push_back(Bound{cursor, tr.begin});
            sep_before.push_back(pending_sep);
        }
        pending_sep = tr.length();
        cursor = tr.end;
    }
    if (cursor < n) {
        blocks.push_back(Bound{cursor, n});
        sep_before.push_back(pending_sep);
    }
    if (blocks.empty()) return seg;

    std::uint64_t min_sep = 0;
    for (const Bound& tr : refined)
        if (min_sep == 0 || tr.length() < min_sep) min_sep = tr.length();

    // group blocks: a separator at least twice the shortest trough ends an op
    std::vector<std::vector<Bound>> groups;
    for (std::size_t i = 0; i < blocks.size(); i++) {
        bool long_sep = i > 0 && sep_before[i] >= 2 * min_sep;
        if (i == 0 || long_sep) groups.emplace_back();
        groups.back().push_back(blocks[i]);
    }

    std::uint32_t d_ord = 0, a_ord = 0;
    for (std::size_t g = 0; g < groups.size(); g++) {
        OperationSeg op;
        op.block_bounds = groups[g];
        op.bounds = Bound{groups[g].front().begin, groups[g].back().end};
        if (groups[g].size() == 4) {
            op.kind = PatternKind::Doubling;
            op.label = "Doubling " + std::to_string(++d_ord);
        } else if (groups[g].size() == 6) {
            op.kind = PatternKind::Addition;
            op.label = "Addition " + std::to_string(++a_ord);
        } else {
            throw SegmentError("ambiguous block count: operation " + std::to_string(g + 1) +
                               " has " + std::to_string(groups[g].size()) + " blocks");
        }
        seg.operations.push_back(std::move(op));
    }
    return seg;
}

// ---------------------------------------------------------------------------
// JSON round trip

inline void write_segmentation(const Segmentation& seg, const std::string& path) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& op : seg.operations) {
        nlohmann::json j;
        j["kind"] = op.kind == PatternKind::Doubling ? "Doubling" : "Addition";
        j["label"] = op.label;
        j["bounds"] = {op.bounds.begin, op.bounds.end};
        nlohmann::json blocks = nlohmann::json::array();
        for (const Bound& b : op.block_bounds) blocks.push_back({b.begin, b.end});
        j["blocks"] = blocks;
        j["applied_shift"] = op.applied_shift;
        ops.push_back(j);
    }
    nlohmann::json root;
    root["operations"] = ops;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SegmentError("cannot open for writing: " + path);
    out << root.dump(1) << "\n";
    if (!out) throw SegmentError("write failed: " + path);
}

inline Segmentation read_segmentation(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SegmentError("cannot open: " + path);
    nlohmann::json root;
    in >> root;
    Segmentation seg;
    for (const auto& j : root.at("operations")) {
        OperationSeg op;
        op.kind = j.at("kind").get<std::string>() == "Doubling" ? PatternKind::Doubling
                                                                : PatternKind::Addition;
        op.label = j.at("label").get<std::string>();
        op.bounds = Bound{j.at("bounds").at(0).get<std::uint64_t>(),
                          j.at("bounds").at(1).get<std::uint64_t>()};
        for (const auto& b : j.at("blocks"))
            op.block_bounds.push_back(Bound{b.at(0).get<std::uint64_t>(), b.at(1).get<std::uint64_t>()});
        op.applied_shift = j.at("applied_shift").get<std::int64_t>();
        seg.operations.push_back(std::move(op));
    }
    return seg;
}

// CSV export of a sub-trace for external plotting
inline void write_subtrace_csv(const SubTrace& s, std::ostream& out) {
    out << "index,amplitude\n";
    char buf[64];
    for (std::size_t i = 0; i < s.samples.size(); i++) {
        std::snprintf(buf, sizeof(buf), "%zu,%.9g\n", i, static_cast<double>(s.samples[i]));
        out << buf;
    }
}

}  // namespace atomkp
