/* atomkp - atomic-pattern scalar multiplication lab, command line surface.
 *
 * Subcommands:
 *   kp        run the scalar multiplication, print the affine result
 *   simulate  simulate a leakage trace for a scalar
 *   segment   split a trace into operations/blocks via NOP troughs
 *   sync      align a target trace against a reference
 *   scan      windowed complete-separation scan over first-block sets
 *   attack    duration-classification key recovery
 *   report    bucket/streak CSV tables and envelope SVG from scan output
 *
 * All commands are deterministic for a fixed seed (default 1001).
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atomkp/config.hpp"
#include "atomkp/field.hpp"
#include "atomkp/leakage.hpp"
#include "atomkp/pattern_tables.hpp"
#include "atomkp/report.hpp"
#include "atomkp/sca.hpp"
#include "atomkp/scalar_mult.hpp"
#include "atomkp/segment.hpp"
#include "atomkp/sync.hpp"
#include "atomkp/trace.hpp"

namespace {

using namespace atomkp;

Config load_config(const std::string& path) {
    if (path.empty()) return Config{};
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    Config cfg = Config::parse(in);
    cfg.check_known_keys();
    return cfg;
}

AffinePoint parse_point(const std::string& s, const FieldParams& P) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw PointError("point must be <xhex>,<yhex>");
    AffinePoint pt;
    pt.x = from_hex(s.substr(0, comma), P);
    pt.y = from_hex(s.substr(comma + 1), P);
    pt.infinity = false;
    if (!is_on_curve(pt, P)) throw PointError("point is not on the curve");
    return pt;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::string out_path(const std::string& given, const char* dflt) {
    if (!given.empty()) return given;
    return default_output_dir() + "/" + dflt;
}

const char* direction_name(SeparationHit::Direction d) {
    return d == SeparationHit::Direction::AdditionAbove ? "addition_above" : "doubling_above";
}

// first blocks of every operation, re-based so aligned index 0 is the block
// start; the first doubling and first addition are skipped by default since
// their timing knobs differ from the steady-state population
void build_first_block_sets(const Trace& t, const Segmentation& seg, bool include_first,
                            std::vector<SubTrace>& d_set, std::vector<SubTrace>& a_set) {
    for (const auto& op : seg.operations) {
        if (!include_first && (op.label == "Doubling 1" || op.label == "Addition 1")) continue;
        if (op.block_bounds.empty()) continue;
        SubTrace s = extract(t, op.block_bounds.front(), op.label);
        (op.kind == PatternKind::Doubling ? d_set : a_set).push_back(std::move(s));
    }
    if (d_set.empty() || a_set.empty())
        throw SScaError("scan needs at least one doubling and one addition past the first of each kind");
}

int cmd_kp(const std::string& scalar_str, const std::string& point_str, const std::string& patterns,
           bool verify, bool want_log, const std::string& log_out, bool no_markers) {
    const FieldParams& P = FieldParams::p256();
    Scalar k = Scalar::parse(scalar_str, P);
    AffinePoint pt = point_str.empty() ? generator(P) : parse_point(point_str, P);

    KPOptions opt;
    opt.variant = patterns == "original" ? PatternVariant::Original : PatternVariant::Corrected;
    opt.markers = !no_markers;

    KPEventLog log;
    bool need_log = want_log || !log_out.empty();
    JacobianPoint Q = kp_atomic(k, pt, P, opt, need_log ? &log : nullptr);
    AffinePoint R = jacobian_to_affine(Q, P);

    std::cout << "x = " << to_hex(R.x) << "\n";
    std::cout << "y = " << to_hex(R.y) << "\n";

    if (want_log) {
        std::cout << log.doubling_count() << " doublings, " << log.addition_count() << " additions\n";
        std::cout << "interleaving: " << log.interleaving() << "\n";
    }
    if (!log_out.empty()) {
        auto out = open_out(log_out);
        write_log_jsonl(log, out);
        std::cout << "event log: " << log_out << "\n";
    }

    if (verify) {
        AffinePoint want = kp_reference(k, pt, P);
        if (want.infinity || !(R == want)) {
            std::cerr << "oracle mismatch: pattern result differs from the affine reference\n";
            return 2;
        }
        std::cout << "verified against the affine reference\n";
    }
    return 0;
}

int cmd_simulate(const std::string& scalar_str, const std::string& config_path,
                 const std::string& out, const std::string& patterns, bool no_markers,
                 std::int64_t seed, std::int64_t pa_d1_cycles, double pa_d1_amp,
                 std::int64_t pa_d1_begin, std::int64_t pa_d1_end) {
    const FieldParams& P = FieldParams::p256();
    Scalar k = Scalar::parse(scalar_str, P);

    Config cfg = load_config(config_path);
    LeakageConfig leak = cfg.leakage();
    KPOptions opt = cfg.kp_options();
    if (!patterns.empty())
        opt.variant = patterns == "original" ? PatternVariant::Original : PatternVariant::Corrected;
    if (no_markers) opt.markers = false;
    if (seed >= 0) leak.rng_seed = static_cast<std::uint64_t>(seed);
    if (pa_d1_cycles != 0) leak.addition_d1_extra_cycles = static_cast<std::int32_t>(pa_d1_cycles);
    if (pa_d1_amp != 0) leak.addition_d1_amp_offset = pa_d1_amp;
    if (pa_d1_begin >= 0) leak.addition_d1_amp_begin = static_cast<std::uint64_t>(pa_d1_begin);
    if (pa_d1_end >= 0) leak.addition_d1_amp_end = static_cast<std::uint64_t>(pa_d1_end);
    leak.validate();

    KPEventLog log;
    kp_atomic(k, generator(P), P, opt, &log);
    Trace t = simulate_trace(log, leak);

    std::string path = out_path(out, "kp.trace");
    write_trace(t, path);
    std::cout << "wrote " << t.samples.size() << " samples to " << path << "\n";
    std::cout << "ground truth: " << truth_sidecar_path(path) << "\n";
    return 0;
}

int cmd_segment(const std::string& in, const std::string& out, const std::string& config_path) {
    Config cfg = load_config(config_path);
    AnalysisConfig ana = cfg.analysis();
    Trace t = read_trace(in);
    Segmentation seg = segment_trace(t, ana.trough_level, ana.min_trough_samples);

    std::uint32_t d = 0, a = 0;
    for (const auto& op : seg.operations) (op.kind == PatternKind::Doubling ? d : a)++;
    std::cout << d << " doublings, " << a << " additions\n";
    std::cout << "interleaving: " << seg.interleaving() << "\n";

    std::string path = out_path(out, "segmentation.json");
    write_segmentation(seg, path);
    std::cout << "segmentation: " << path << "\n";
    return 0;
}

int cmd_sync(const std::string& in, const std::string& ref_path, const std::string& method,
             const std::string& out, const std::string& config_path) {
    Config cfg = load_config(config_path);
    AnalysisConfig ana = cfg.analysis();

    Trace target_t = read_trace(in, /*load_truth=*/false);
    Trace ref_t = ref_path.empty() ? target_t : read_trace(ref_path, /*load_truth=*/false);

    SubTrace ref{ref_t.samples, 0, 0, "reference"};
    SubTrace target{target_t.samples, 0, 0, "target"};

    SubTrace aligned;
    if (method == "A")
        aligned = sync_extrema(ref, target, ana.anchor_start, ana.anchor_len, ana.max_shift);
    else if (method == "B")
        aligned = sync_rising(ref, target, ana.anchor_start, ana.anchor_len, ana.max_shift);
    else
        aligned = sync_clock_minima(ref, target, ana.anchor_start, ana.anchor_len,
                                    ana.clock_period_samples, ana.max_shift);

    std::cout << "method " << method << " applied shift: " << aligned.applied_shift << "\n";

    std::string path = out_path(out, "sync.json");
    nlohmann::json j;
    j["method"] = method;
    j["applied_shift"] = aligned.applied_shift;
    j["anchor_start"] = ana.anchor_start;
    j["anchor_len"] = ana.anchor_len;
    auto o = open_out(path);
    o << j.dump(0) << "\n";
    std::cout << "sync result: " << path << "\n";
    return 0;
}

int cmd_scan(const std::string& in, int window, const std::string& hits_path,
             const std::string& env_path, const std::string& config_path, bool include_first) {
    Config cfg = load_config(config_path);
    AnalysisConfig ana = cfg.analysis();
    Trace t = read_trace(in);
    Segmentation seg = segment_trace(t, ana.trough_level, ana.min_trough_samples);

    std::vector<SubTrace> d_set, a_set;
    build_first_block_sets(t, seg, include_first, d_set, a_set);

    std::size_t min_len = d_set.front().samples.size();
    for (const auto* set : {&d_set, &a_set})
        for (const SubTrace& s : *set) min_len = std::min(min_len, s.samples.size());
    // leave room for the widest supported window on both sides
    if (min_len < 8) throw SScaError("first blocks too short to scan");
    std::uint64_t range_begin = 2, range_end = min_len - 3;

    std::vector<SeparationHit> hits;
    if (window > 0) {
        hits = separation_scan(d_set, a_set, window, range_begin, range_end);
    } else {
        for (int w = 1; w <= kMaxWindow; w++) {
            auto h = separation_scan(d_set, a_set, w, range_begin, range_end);
            hits.insert(hits.end(), h.begin(), h.end());
        }
    }

    std::string hp = out_path(hits_path, "hits.csv");
    {
        auto out = open_out(hp);
        out << "index,direction,gap,window\n";
        char buf[64];
        for (const SeparationHit& h : hits) {
            std::snprintf(buf, sizeof(buf), "%.9g", h.gap);
            out << h.index << "," << direction_name(h.direction) << "," << buf << "," << h.window
                << "\n";
        }
    }

    std::string ep = out_path(env_path, "envelope.csv");
    {
        Envelope d_env = compute_envelope(d_set, range_begin, range_end);
        Envelope a_env = compute_envelope(a_set, range_begin, range_end);
        auto out = open_out(ep);
        out << "index,d_min,d_max,a_min,a_max\n";
        char buf[160];
        for (std::size_t i = 0; i < d_env.min_v.size(); i++) {
            std::snprintf(buf, sizeof(buf), "%llu,%.9g,%.9g,%.9g,%.9g",
                          static_cast<unsigned long long>(d_env.begin + i), d_env.min_v[i],
                          d_env.max_v[i], a_env.min_v[i], a_env.max_v[i]);
            out << buf << "\n";
        }
    }

    std::cout << d_set.size() << " doubling / " << a_set.size() << " addition first blocks, range ["
              << range_begin << ", " << range_end << ")\n";
    std::cout << hits.size() << " separation hits: " << hp << "\n";
    std::cout << "envelopes: " << ep << "\n";
    return 0;
}

int cmd_attack(const std::string& in, std::int64_t tolerance_cycles,
               const std::string& config_path) {
    Config cfg = load_config(config_path);
    AnalysisConfig ana = cfg.analysis();
    Trace t = read_trace(in);
    Segmentation seg = segment_trace(t, ana.trough_level, ana.min_trough_samples);

    std::uint64_t tol_cycles = tolerance_cycles >= 0 ? static_cast<std::uint64_t>(tolerance_cycles)
                                                     : ana.tolerance_cycles;
    std::uint64_t spc = static_cast<std::uint64_t>(std::llround(t.samples_per_cycle()));
    std::uint64_t tol_samples = tol_cycles * spc;

    std::uint64_t t_ref = calibrate_t_ref_pd(seg);
    std::cout << "t_ref(PD) = " << t_ref << " samples, tolerance = " << tol_samples << " samples\n";

    std::string truth_bits = t.truth ? t.truth->scalar_bits : std::string{};
    try {
        AttackResult res = duration_attack(seg, t_ref, tol_samples, truth_bits);
        std::cout << "recovered key: " << res.recovered_bits << "\n";
        if (res.have_truth) {
            std::cout << (res.success ? "SUCCESS" : "FAILURE") << "\n";
            return res.success ? 0 : 1;
        }
        return 0;
    } catch (const WalkDesync& e) {
        std::cout << "walk desynchronized: " << e.what() << "\n";
        if (!truth_bits.empty()) std::cout << "FAILURE\n";
        return 1;
    }
}

int cmd_report(const std::string& hits_path, const std::string& env_path,
               const std::string& out_dir) {
    std::vector<SeparationHit> hits;
    {
        std::ifstream in(hits_path);
        if (!in) throw std::runtime_error("cannot open: " + hits_path);
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("empty hits file: " + hits_path);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            unsigned long long idx = 0;
            char dir[32] = {0};
            double gap = 0;
            int window = 0;
            if (std::sscanf(line.c_str(), "%llu,%31[^,],%lf,%d", &idx, dir, &gap, &window) != 4)
                throw std::runtime_error("bad hits row: " + line);
            SeparationHit h;
            h.index = idx;
            h.direction = std::string(dir) == "doubling_above"
                              ? SeparationHit::Direction::DoublingAbove
                              : SeparationHit::Direction::AdditionAbove;
            h.gap = gap;
            h.window = window;
            hits.push_back(h);
        }
    }

    Envelope d_env, a_env;
    {
        std::ifstream in(env_path);
        if (!in) throw std::runtime_error("cannot open: " + env_path);
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("empty envelope file: " + env_path);
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            unsigned long long idx = 0;
            double dmin = 0, dmax = 0, amin = 0, amax = 0;
            if (std::sscanf(line.c_str(), "%llu,%lf,%lf,%lf,%lf", &idx, &dmin, &dmax, &amin,
                            &amax) != 5)
                throw std::runtime_error("bad envelope row: " + line);
            if (first) {
                d_env.begin = a_env.begin = idx;
                first = false;
            }
            d_env.min_v.push_back(dmin);
            d_env.max_v.push_back(dmax);
            a_env.min_v.push_back(amin);
            a_env.max_v.push_back(amax);
        }
    }

    std::string dir = out_dir.empty() ? default_output_dir() : out_dir;
    BucketTable buckets = bucket_histogram(hits);
    StreakTable streaks = streak_histogram(hits);
    {
        auto out = open_out(dir + "/buckets.csv");
        write_bucket_csv(buckets, out);
    }
    {
        auto out = open_out(dir + "/streaks.csv");
        write_streak_csv(streaks, out);
    }
    {
        auto out = open_out(dir + "/envelopes.svg");
        write_envelope_svg(d_env, a_env, out);
    }
    std::cout << "wrote " << dir << "/buckets.csv, " << dir << "/streaks.csv, " << dir
              << "/envelopes.svg\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"atomic-pattern kP laboratory: scalar multiplication, leakage simulation, "
                 "trace analysis"};
    app.require_subcommand(1);

    // kp
    auto* kp = app.add_subcommand("kp", "run kP and print the affine result");
    std::string kp_scalar, kp_point, kp_patterns = "corrected", kp_log_out;
    bool kp_verify = false, kp_log = false, kp_no_markers = false;
    kp->add_option("--scalar", kp_scalar, "scalar (0b..., 0x..., raw binary or hex)")->required();
    kp->add_option("--point", kp_point, "base point <xhex>,<yhex> (default: G)");
    kp->add_option("--patterns", kp_patterns, "pattern tables: corrected|original")
        ->check(CLI::IsMember({"corrected", "original"}));
    kp->add_flag("--verify", kp_verify, "cross-check against the affine reference");
    kp->add_flag("--log", kp_log, "print the event-log summary");
    kp->add_option("--log-out", kp_log_out, "write the event log as JSONL");
    kp->add_flag("--no-markers", kp_no_markers, "omit NOP marker entries from the log");

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate a leakage trace");
    std::string sim_scalar, sim_config, sim_out, sim_patterns;
    bool sim_no_markers = false;
    std::int64_t sim_seed = -1, sim_pa_cycles = 0, sim_pa_begin = -1, sim_pa_end = -1;
    double sim_pa_amp = 0;
    sim->add_option("--scalar", sim_scalar, "scalar (0b..., 0x..., raw binary or hex)")->required();
    sim->add_option("--config", sim_config, "key=value config file");
    sim->add_option("--out", sim_out, "output trace path (default $ATOMKP_OUT/kp.trace)");
    sim->add_option("--patterns", sim_patterns, "pattern tables: corrected|original")
        ->check(CLI::IsMember({"corrected", "original"}));
    sim->add_flag("--no-markers", sim_no_markers, "disable NOP markers (segmentation will fail)");
    sim->add_option("--seed", sim_seed, "RNG seed override (default 1001)");
    sim->add_option("--pa-d1-cycles", sim_pa_cycles, "extra cycles on each addition's first X");
    sim->add_option("--pa-d1-amp", sim_pa_amp, "amplitude offset inside addition first blocks");
    sim->add_option("--pa-d1-begin", sim_pa_begin, "offset window begin (samples from pattern start)");
    sim->add_option("--pa-d1-end", sim_pa_end, "offset window end (samples from pattern start)");

    // segment
    auto* seg = app.add_subcommand("segment", "segment a trace into operations and blocks");
    std::string seg_in, seg_out, seg_config;
    seg->add_option("--in", seg_in, "input trace")->required();
    seg->add_option("--out", seg_out, "output JSON (default $ATOMKP_OUT/segmentation.json)");
    seg->add_option("--config", seg_config, "key=value config file");

    // sync
    auto* syn = app.add_subcommand("sync", "align a target trace against a reference");
    std::string syn_in, syn_ref, syn_method, syn_out, syn_config;
    syn->add_option("--in", syn_in, "target trace")->required();
    syn->add_option("--ref", syn_ref, "reference trace (default: the target itself)");
    syn->add_option("--method", syn_method, "A = extrema, B = rising edges, C = clock minima")
        ->required()
        ->check(CLI::IsMember({"A", "B", "C"}));
    syn->add_option("--out", syn_out, "output JSON (default $ATOMKP_OUT/sync.json)");
    syn->add_option("--config", syn_config, "key=value config file");

    // scan
    auto* scan = app.add_subcommand("scan", "complete-separation scan over first-block sets");
    std::string scan_in, scan_hits, scan_env, scan_config;
    int scan_window = 0;
    bool scan_include_first = false;
    scan->add_option("--in", scan_in, "input trace")->required();
    scan->add_option("--window", scan_window, "window width 1..6 (default: scan all)")
        ->check(CLI::Range(1, kMaxWindow));
    scan->add_option("--hits", scan_hits, "hit CSV path (default $ATOMKP_OUT/hits.csv)");
    scan->add_option("--envelope", scan_env, "envelope CSV path (default $ATOMKP_OUT/envelope.csv)");
    scan->add_option("--config", scan_config, "key=value config file");
    scan->add_flag("--include-first", scan_include_first,
                   "keep Doubling 1 / Addition 1 in the sets");

    // attack
    auto* atk = app.add_subcommand("attack", "duration-classification key recovery");
    std::string atk_in, atk_config;
    std::int64_t atk_tol = -1;
    atk->add_option("--in", atk_in, "input trace")->required();
    atk->add_option("--tolerance-cycles", atk_tol, "PD-match tolerance in clock cycles (default 100)");
    atk->add_option("--config", atk_config, "key=value config file");

    // report
    auto* rep = app.add_subcommand("report", "bucket/streak CSVs and envelope SVG");
    std::string rep_hits, rep_env, rep_dir;
    rep->add_option("--hits", rep_hits, "hit CSV from scan")->required();
    rep->add_option("--envelope", rep_env, "envelope CSV from scan")->required();
    rep->add_option("--out-dir", rep_dir, "output directory (default $ATOMKP_OUT)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (kp->parsed())
            return cmd_kp(kp_scalar, kp_point, kp_patterns, kp_verify, kp_log, kp_log_out,
                          kp_no_markers);
        if (sim->parsed())
            return cmd_simulate(sim_scalar, sim_config, sim_out, sim_patterns, sim_no_markers,
                                sim_seed, sim_pa_cycles, sim_pa_amp, sim_pa_begin, sim_pa_end);
        if (seg->parsed()) return cmd_segment(seg_in, seg_out, seg_config);
        if (syn->parsed()) return cmd_sync(syn_in, syn_ref, syn_method, syn_out, syn_config);
        if (scan->parsed())
            return cmd_scan(scan_in, scan_window, scan_hits, scan_env, scan_config,
                            scan_include_first);
        if (atk->parsed()) return cmd_attack(atk_in, atk_tol, atk_config);
        if (rep->parsed()) return cmd_report(rep_hits, rep_env, rep_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
