/* tracekit_tests.cpp - trace file IO, trough segmentation, the three
 * synchronization methods, mean traces, and the export helpers.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "atomkp/leakage.hpp"
#include "atomkp/segment.hpp"
#include "atomkp/sync.hpp"
#include "atomkp/trace.hpp"

using namespace atomkp;

namespace {

const FieldParams& P = FieldParams::p256();

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        std::mt19937_64 r(std::random_device{}());
        dir = std::filesystem::temp_directory_path() / ("atomkp_ut_" + std::to_string(r()));
        std::filesystem::create_directories(dir);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

LeakageConfig small_config() {
    LeakageConfig cfg;
    cfg.cycles_x = 60;
    cfg.cycles_xp = 59;
    cfg.cycles_n = 8;
    cfg.cycles_a = 10;
    return cfg;
}

KPOptions small_markers() {
    KPOptions opt;
    opt.nops_intra_block = 20;
    opt.nops_inter_op = 50;
    opt.nops_double_double = 100;
    return opt;
}

Trace run(const char* bits, const LeakageConfig& cfg, const KPOptions& opt) {
    Scalar k = Scalar::from_bin(bits, P);
    KPEventLog log;
    kp_atomic(k, generator(P), P, opt, &log);
    return simulate_trace(log, cfg);
}

bool truth_equal(const GroundTruth& a, const GroundTruth& b) {
    return a.scalar_bits == b.scalar_bits && a.pattern_kinds == b.pattern_kinds &&
           a.pattern_bounds == b.pattern_bounds && a.block_pattern == b.block_pattern &&
           a.block_bounds == b.block_bounds && a.op_codes == b.op_codes &&
           a.op_bounds == b.op_bounds;
}

// hand-built trace: explicit rate metadata, caller supplies the samples
Trace synthetic(std::vector<float> samples, double spc = 10.0) {
    Trace t;
    t.samples = std::move(samples);
    t.clock_hz = 1.0;
    t.sample_rate_hz = spc;
    return t;
}

void patch_byte(const std::string& path, std::streamoff off, char value) {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    REQUIRE(f.good());
    f.seekp(off);
    f.put(value);
}

}  // namespace

TEST_CASE("trace files round trip with their ground-truth sidecar", "[tracekit]") {
    TempDir tmp;
    Trace t = run("101", small_config(), small_markers());
    std::string path = tmp.path("t.trace");
    write_trace(t, path);
    REQUIRE(std::filesystem::exists(truth_sidecar_path(path)));

    Trace back = read_trace(path);
    CHECK(back.samples == t.samples);
    CHECK(back.sample_rate_hz == t.sample_rate_hz);
    CHECK(back.clock_hz == t.clock_hz);
    REQUIRE(back.truth.has_value());
    CHECK(truth_equal(*back.truth, *t.truth));

    // the attacker view skips the sidecar even though it exists
    Trace blind = read_trace(path, false);
    CHECK(blind.samples == t.samples);
    CHECK_FALSE(blind.truth.has_value());

    // no sidecar next to the file: truth is simply absent
    std::filesystem::remove(truth_sidecar_path(path));
    Trace bare = read_trace(path);
    CHECK(bare.samples == t.samples);
    CHECK_FALSE(bare.truth.has_value());
}

TEST_CASE("an empty truthless trace still round trips", "[tracekit]") {
    TempDir tmp;
    Trace t;
    t.sample_rate_hz = 1e9;
    t.clock_hz = 1e8;
    std::string path = tmp.path("empty.trace");
    write_trace(t, path);
    CHECK_FALSE(std::filesystem::exists(truth_sidecar_path(path)));
    Trace back = read_trace(path);
    CHECK(back.samples.empty());
    CHECK(back.sample_rate_hz == 1e9);
    CHECK_FALSE(back.truth.has_value());
}

TEST_CASE("corrupt trace files are rejected", "[tracekit]") {
    TempDir tmp;
    CHECK_THROWS_WITH(read_trace(tmp.path("missing.trace")),
                      Catch::Matchers::ContainsSubstring("cannot open"));

    Trace t = synthetic({0.1f, 0.2f, 0.3f, 0.4f});
    std::string path = tmp.path("ok.trace");
    write_trace(t, path);
    CHECK_NOTHROW(read_trace(path));

    std::string bad_magic = tmp.path("magic.trace");
    std::filesystem::copy_file(path, bad_magic);
    patch_byte(bad_magic, 0, 'B');
    CHECK_THROWS_WITH(read_trace(bad_magic), Catch::Matchers::ContainsSubstring("bad trace magic"));

    std::string bad_version = tmp.path("version.trace");
    std::filesystem::copy_file(path, bad_version);
    patch_byte(bad_version, 8, 2);
    CHECK_THROWS_WITH(read_trace(bad_version),
                      Catch::Matchers::ContainsSubstring("unsupported trace version 2"));

    std::string cut_payload = tmp.path("cut1.trace");
    std::filesystem::copy_file(path, cut_payload);
    std::filesystem::resize_file(cut_payload, 8 + 4 + 8 + 8 + 8 + 7);  // header + 1.75 floats
    CHECK_THROWS_WITH(read_trace(cut_payload), Catch::Matchers::ContainsSubstring("truncated"));

    std::string cut_header = tmp.path("cut2.trace");
    std::filesystem::copy_file(path, cut_header);
    std::filesystem::resize_file(cut_header, 14);
    CHECK_THROWS_WITH(read_trace(cut_header), Catch::Matchers::ContainsSubstring("truncated"));
}

TEST_CASE("segmentation recovers the simulator's exact block layout", "[tracekit]") {
    LeakageConfig cfg = small_config();
    cfg.noise_sigma = 0.0;
    Trace t = run("1011", cfg, small_markers());  // D D A D A
    const GroundTruth& gt = *t.truth;

    Segmentation seg = segment_trace(t, 0.0085, 100);
    REQUIRE(seg.operations.size() == 5);
    CHECK(seg.interleaving() == "D D A D A");

    std::vector<std::string> labels;
    for (const auto& op : seg.operations) labels.push_back(op.label);
    CHECK(labels == std::vector<std::string>{"Doubling 1", "Doubling 2", "Addition 1",
                                             "Doubling 3", "Addition 2"});

    for (std::size_t i = 0; i < seg.operations.size(); i++) {
        const OperationSeg& op = seg.operations[i];
        CHECK(op.bounds == gt.pattern_bounds[i]);
        CHECK((op.kind == gt.pattern_kinds[i]));
        REQUIRE(op.block_bounds.size() == (op.kind == PatternKind::Doubling ? 4u : 6u));
    }
    CHECK(seg.all_blocks() == gt.block_bounds);
}

TEST_CASE("segmentation still finds exact bounds under gaussian noise", "[tracekit]") {
    Trace t = run("110", small_config(), small_markers());  // default sigma 0.001
    Segmentation seg = segment_trace(t, 0.0085, 100);
    CHECK(seg.interleaving() == "D A D");
    CHECK(seg.all_blocks() == t.truth->block_bounds);
}

TEST_CASE("segmentation corner cases", "[tracekit]") {
    // nothing recorded: nothing to segment
    CHECK(segment_trace(synthetic({}), 0.0085, 10).operations.empty());

    // all-active trace has no troughs at all
    CHECK_THROWS_WITH(segment_trace(synthetic(std::vector<float>(500, 0.05f)), 0.0085, 10),
                      Catch::Matchers::ContainsSubstring("no troughs found"));

    // shorter than one averaging window
    CHECK_THROWS_WITH(segment_trace(synthetic(std::vector<float>(5, 0.05f)), 0.0085, 10),
                      Catch::Matchers::ContainsSubstring("no troughs found"));

    // an all-quiet trace has troughs but no blocks
    CHECK(segment_trace(synthetic(std::vector<float>(500, 0.0f)), 0.0085, 10).operations.empty());

    // five equally spaced blocks match neither pattern shape
    std::vector<float> five;
    for (int b = 0; b < 5; b++) {
        five.insert(five.end(), 100, 0.05f);
        if (b != 4) five.insert(five.end(), 60, 0.0f);
    }
    CHECK_THROWS_WITH(segment_trace(synthetic(std::move(five)), 0.02, 10),
                      Catch::Matchers::ContainsSubstring("ambiguous block count"));
}

TEST_CASE("extract copies a window and remembers where it came from", "[tracekit]") {
    Trace t = synthetic({0.0f, 1.0f, 2.0f, 3.0f, 4.0f});
    SubTrace s = extract(t, Bound{1, 4}, "blocky");
    CHECK(s.samples == std::vector<float>{1.0f, 2.0f, 3.0f});
    CHECK(s.origin_offset == 1);
    CHECK(s.label == "blocky");
    CHECK(s.applied_shift == 0);
    CHECK_THROWS_AS(extract(t, Bound{3, 6}), SegmentError);
    CHECK_THROWS_AS(extract(t, Bound{4, 2}), SegmentError);

    s.applied_shift = -1;
    CHECK(s.aligned_at(0) == 2.0f);  // aligned[i] = samples[i - shift]
    CHECK(s.aligned_index_ok(1));
    CHECK_FALSE(s.aligned_index_ok(2));
    CHECK_FALSE(s.aligned_index_ok(-2));
}

namespace {

SubTrace wave(std::size_t n, double delay, double period) {
    SubTrace s;
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; i++)
        s.samples[i] = static_cast<float>(
            0.5 + 0.4 * std::sin(2.0 * M_PI * (static_cast<double>(i) - delay) / period));
    return s;
}

}  // namespace

TEST_CASE("extrema sync recovers a known delay on a smooth wave", "[tracekit][sync]") {
    SubTrace ref = wave(2000, 0.0, 40.0);
    SubTrace tgt = wave(2000, 7.0, 40.0);  // lags the reference by 7 samples
    SubTrace out = sync_extrema(ref, tgt, 300, 400, 20);
    CHECK(out.applied_shift == -7);
    // aligned view reproduces the reference exactly
    for (std::int64_t i = 300; i < 700; i++) REQUIRE(out.aligned_at(i) == ref.samples[i]);

    CHECK(sync_extrema(ref, ref, 300, 400, 20).applied_shift == 0);

    SubTrace lead = wave(2000, -12.0, 40.0);
    CHECK(sync_extrema(ref, lead, 300, 400, 20).applied_shift == 12);
}

TEST_CASE("rising-run sync recovers a known delay on a ramp train", "[tracekit][sync]") {
    auto ramps = [](std::size_t n, std::int64_t delay) {
        SubTrace s;
        s.samples.resize(n);
        for (std::size_t i = 0; i < n; i++) {
            std::int64_t j = (static_cast<std::int64_t>(i) - delay) % 50;
            if (j < 0) j += 50;
            s.samples[i] = static_cast<float>(std::min<std::int64_t>(j, 25)) * 0.01f;
        }
        return s;
    };
    SubTrace ref = ramps(2000, 0);
    SubTrace tgt = ramps(2000, 3);
    SubTrace out = sync_rising(ref, tgt, 300, 400, 20, 1);
    CHECK(out.applied_shift == -3);
    CHECK(sync_rising(ref, ref, 300, 400, 20, 1).applied_shift == 0);

    SubTrace flat;
    flat.samples.assign(2000, 0.015f);
    CHECK_THROWS_WITH(sync_rising(flat, flat, 300, 400, 20, 1),
                      Catch::Matchers::ContainsSubstring("no rising segments"));
}

TEST_CASE("clock-minima sync recovers delays and breaks ties toward zero", "[tracekit][sync]") {
    // aperiodic floor: per-period minima form a distinctive sequence
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> level(0.01, 0.05);
    std::vector<float> base(2000);
    for (float& v : base) v = static_cast<float>(level(rng));

    SubTrace ref;
    ref.samples = base;
    SubTrace tgt;
    tgt.samples.resize(base.size());
    for (std::size_t i = 0; i < base.size(); i++)
        tgt.samples[i] = base[i >= 4 ? i - 4 : 0];  // delayed by 4

    SubTrace out = sync_clock_minima(ref, tgt, 200, 400, 10, 20);
    CHECK(out.applied_shift == -4);

    // a strictly periodic signal scores identically at every shift, so the
    // tie break settles on zero
    SubTrace tri;
    tri.samples.resize(2000);
    for (std::size_t i = 0; i < tri.samples.size(); i++)
        tri.samples[i] = 0.01f + 0.01f * static_cast<float>(std::abs(static_cast<int>(i % 10) - 5));
    CHECK(sync_clock_minima(tri, tri, 200, 400, 10, 20).applied_shift == 0);

    CHECK_THROWS_WITH(sync_clock_minima(ref, tgt, 200, 400, 1, 20),
                      Catch::Matchers::ContainsSubstring("at least 2 samples"));
    CHECK_THROWS_WITH(sync_clock_minima(ref, tgt, 200, 5, 10, 20),
                      Catch::Matchers::ContainsSubstring("shorter than one clock period"));
}

TEST_CASE("anchor windows are validated against both traces", "[tracekit][sync]") {
    SubTrace ref = wave(500, 0.0, 40.0);
    SubTrace tgt = wave(500, 0.0, 40.0);
    CHECK_THROWS_WITH(sync_extrema(ref, tgt, 100, 1, 10),
                      Catch::Matchers::ContainsSubstring("anchor window too small"));
    CHECK_THROWS_WITH(sync_extrema(ref, tgt, 100, 100, -1),
                      Catch::Matchers::ContainsSubstring("max_shift"));
    CHECK_THROWS_WITH(sync_extrema(ref, tgt, 450, 100, 10),
                      Catch::Matchers::ContainsSubstring("out of bounds for the reference"));
    // needs max_shift of margin on each side of the target
    SubTrace short_tgt = wave(505, 0.0, 40.0);
    CHECK_THROWS_WITH(sync_extrema(ref, short_tgt, 5, 100, 10),
                      Catch::Matchers::ContainsSubstring("out of bounds for the target"));
    CHECK_THROWS_WITH(sync_extrema(wave(700, 0.0, 40.0), short_tgt, 420, 80, 10),
                      Catch::Matchers::ContainsSubstring("out of bounds for the target"));
}

TEST_CASE("mean trace averages aligned views", "[tracekit][sync]") {
    SubTrace a;
    a.samples = {1.0f, 2.0f, 3.0f, 4.0f};
    SubTrace b;
    b.samples = {-1.0f, -2.0f, -3.0f, -4.0f};
    SubTrace m = mean_trace({a, b}, 4);
    CHECK(m.samples == std::vector<float>{0.0f, 0.0f, 0.0f, 0.0f});

    SubTrace solo = mean_trace({a}, 4);
    CHECK(solo.samples == a.samples);

    // negative shift: member contributes samples[i + 2]
    SubTrace c;
    c.samples = {9.0f, 9.0f, 5.0f, 6.0f, 7.0f, 8.0f};
    c.applied_shift = -2;
    SubTrace shifted = mean_trace({c}, 4);
    CHECK(shifted.samples == std::vector<float>{5.0f, 6.0f, 7.0f, 8.0f});

    // a positive shift pushes index 0 before the member's first sample
    SubTrace d = a;
    d.applied_shift = 2;
    CHECK_THROWS_WITH(mean_trace({d}, 4), Catch::Matchers::ContainsSubstring("shorter"));
    CHECK_THROWS_AS(mean_trace({}, 4), SyncError);
    CHECK_THROWS_AS(mean_trace({a}, 5), SyncError);
}

TEST_CASE("sync quality rewards coherent sets", "[tracekit][sync]") {
    SubTrace s1, s2, s3;
    s1.samples.resize(400);
    s2.samples.resize(400);
    s3.samples.resize(400);
    for (std::size_t i = 0; i < 400; i++) {
        float v = static_cast<float>(0.4 * std::sin(2.0 * M_PI * static_cast<double>(i) / 40.0));
        s1.samples[i] = v;
        s2.samples[i] = v;
        s3.samples[i] = -v;
    }
    double coherent = sync_quality({s1, s2}, 40, 320);
    double opposed = sync_quality({s1, s3}, 40, 320);
    CHECK(coherent > 0.25);
    CHECK(opposed < 1e-4);
    CHECK_THROWS_AS(sync_quality({}, 0, 10), SyncError);
}

TEST_CASE("segmentations round trip through json", "[tracekit]") {
    TempDir tmp;
    LeakageConfig cfg = small_config();
    cfg.noise_sigma = 0.0;
    Trace t = run("110", cfg, small_markers());
    Segmentation seg = segment_trace(t, 0.0085, 100);
    seg.operations[1].applied_shift = -42;

    std::string path = tmp.path("seg.json");
    write_segmentation(seg, path);
    Segmentation back = read_segmentation(path);
    REQUIRE(back.operations.size() == seg.operations.size());
    for (std::size_t i = 0; i < seg.operations.size(); i++) {
        CHECK((back.operations[i].kind == seg.operations[i].kind));
        CHECK(back.operations[i].label == seg.operations[i].label);
        CHECK(back.operations[i].bounds == seg.operations[i].bounds);
        CHECK(back.operations[i].block_bounds == seg.operations[i].block_bounds);
        CHECK(back.operations[i].applied_shift == seg.operations[i].applied_shift);
    }
    CHECK(back.interleaving() == "D A D");

    CHECK_THROWS_AS(read_segmentation(tmp.path("nope.json")), SegmentError);
}

TEST_CASE("sub-trace csv export writes plain index/amplitude rows", "[tracekit]") {
    SubTrace s;
    s.samples = {0.5f, 0.25f, -1.0f};
    std::ostringstream out;
    write_subtrace_csv(s, out);
    CHECK(out.str() == "index,amplitude\n0,0.5\n1,0.25\n2,-1\n");
}
