/* trace.hpp - sample container, binary trace file, ground-truth sidecar.
 *
 * File layout (little endian):
 *   8 bytes   magic "ATRC0001"
 *   u32       version (1)
 *   f64       sample_rate_hz
 *   f64       clock_hz
 *   u64       sample count
 *   f32 * n   samples
 *
 * Ground truth lives in a separate JSON sidecar (<path>.truth.json) so the
 * attacker-view loader can simply not read it.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "atomkp/scalar_mult.hpp"

namespace atomkp {

struct TraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr char kTraceMagic[8] = {'A', 'T', 'R', 'C', '0', '0', '0', '1'};
inline constexpr std::uint32_t kTraceVersion = 1;

struct Bound {
    std::uint64_t begin = 0;  // inclusive
    std::uint64_t end = 0;    // exclusive

    std::uint64_t length() const { return end - begin; }
    bool operator==(const Bound&) const = default;
};

struct GroundTruth {
    std::string scalar_bits;
    std::vector<PatternKind> pattern_kinds;
    std::vector<Bound> pattern_bounds;     // first block begin .. last block end
    std::vector<std::uint32_t> block_pattern;  // owning pattern index per block
    std::vector<Bound> block_bounds;
    std::vector<Opcode> op_codes;
    std::vector<Bound> op_bounds;
};

struct Trace {
    std::vector<float> samples;
    double sample_rate_hz = 0.0;
    double clock_hz = 0.0;
    std::optional<GroundTruth> truth;

    double samples_per_cycle() const { return sample_rate_hz / clock_hz; }
};

// ---------------------------------------------------------------------------

namespace detail {

// native byte copy; the format is little endian, so insist on an LE host
static_assert(std::endian::native == std::endian::little,
              "trace file IO assumes a little-endian host");

template <typename T>
void put_le(std::ostream& out, T v) {
    std::array<unsigned char, sizeof(T)> buf;
    std::memcpy(buf.data(), &v, sizeof(T));
    out.write(reinterpret_cast<const char*>(buf.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> buf;
    in.read(reinterpret_cast<char*>(buf.data()), sizeof(T));
    if (!in) throw TraceError("trace file truncated");
    T v;
    std::memcpy(&v, buf.data(), sizeof(T));
    return v;
}

inline nlohmann::json bounds_json(const std::vector<Bound>& bounds) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Bound& b : bounds) arr.push_back({b.begin, b.end});
    return arr;
}

inline std::vector<Bound> bounds_from_json(const nlohmann::json& arr) {
    std::vector<Bound> out;
    for (const auto& e : arr) out.push_back(Bound{e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>()});
    return out;
}

}  // namespace detail

inline std::string truth_sidecar_path(const std::string& trace_path) {
    return trace_path + ".truth.json";
}

inline void write_ground_truth(const GroundTruth& gt, const std::string& path) {
    nlohmann::json j;
    j["scalar_bits"] = gt.scalar_bits;
    {
        std::string kinds;
        for (PatternKind k : gt.pattern_kinds) kinds.push_back(k == PatternKind::Doubling ? 'D' : 'A');
        j["pattern_kinds"] = kinds;
    }
    j["pattern_bounds"] = detail::bounds_json(gt.pattern_bounds);
    j["block_pattern"] = gt.block_pattern;
    j["block_bounds"] = detail::bounds_json(gt.block_bounds);
    {
        nlohmann::json codes = nlohmann::json::array();
        for (Opcode op : gt.op_codes) codes.push_back(opcode_name(op));
        j["op_codes"] = codes;
    }
    j["op_bounds"] = detail::bounds_json(gt.op_bounds);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TraceError("cannot open for writing: " + path);
    out << j.dump(0) << "\n";
    if (!out) throw TraceError("write failed: " + path);
}

inline GroundTruth read_ground_truth(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TraceError("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    GroundTruth gt;
    gt.scalar_bits = j.at("scalar_bits").get<std::string>();
    for (char c : j.at("pattern_kinds").get<std::string>())
        gt.pattern_kinds.push_back(c == 'D' ? PatternKind::Doubling : PatternKind::Addition);
    gt.pattern_bounds = detail::bounds_from_json(j.at("pattern_bounds"));
    gt.block_pattern = j.at("block_pattern").get<std::vector<std::uint32_t>>();
    gt.block_bounds = detail::bounds_from_json(j.at("block_bounds"));
    for (const auto& e : j.at("op_codes")) {
        std::string s = e.get<std::string>();
        if (s == "X") gt.op_codes.push_back(Opcode::X);
        else if (s == "X'") gt.op_codes.push_back(Opcode::XPrime);
        else if (s == "N") gt.op_codes.push_back(Opcode::N);
        else if (s == "A") gt.op_codes.push_back(Opcode::A);
        else throw TraceError("ground truth: bad opcode " + s);
    }
    gt.op_bounds = detail::bounds_from_json(j.at("op_bounds"));
    return gt;
}

// write_trace stores the sidecar next to the trace when ground truth is
// attached; attacker-view reads can pass load_truth = false
inline void write_trace(const Trace& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TraceError("cannot open for writing: " + path);
    out.write(kTraceMagic, sizeof(kTraceMagic));
    detail::put_le<std::uint32_t>(out, kTraceVersion);
    detail::put_le<double>(out, t.sample_rate_hz);
    detail::put_le<double>(out, t.clock_hz);
    detail::put_le<std::uint64_t>(out, t.samples.size());
    if (!t.samples.empty())
        out.write(reinterpret_cast<const char*>(t.samples.data()),
                  static_cast<std::streamsize>(t.samples.size() * sizeof(float)));
    if (!out) throw TraceError("write failed: " + path);
    if (t.truth) write_ground_truth(*t.truth, truth_sidecar_path(path));
}

inline Trace read_trace(const std::string& path, bool load_truth = true) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TraceError("cannot open: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kTraceMagic, 8) != 0) throw TraceError("bad trace magic: " + path);
    std::uint32_t version = detail::get_le<std::uint32_t>(in);
    if (version != kTraceVersion)
        throw TraceError("unsupported trace version " + std::to_string(version));
    Trace t;
    t.sample_rate_hz = detail::get_le<double>(in);
    t.clock_hz = detail::get_le<double>(in);
    std::uint64_t count = detail::get_le<std::uint64_t>(in);
    t.samples.resize(count);
    if (count) {
        in.read(reinterpret_cast<char*>(t.samples.data()),
                static_cast<std::streamsize>(count * sizeof(float)));
        if (!in) throw TraceError("trace file truncated: " + path);
    }
    if (load_truth) {
        std::ifstream probe(truth_sidecar_path(path));
        if (probe.good()) {
            probe.close();
            t.truth = read_ground_truth(truth_sidecar_path(path));
        }
    }
    return t;
}

}  // namespace atomkp
