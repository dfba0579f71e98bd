/* pattern_tests.cpp - atomic pattern assets, executor semantics, and the
 * oracle-equivalence checks (corrected tables pass, uncorrected tables and
 * single-slot reversions fail).
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#include <catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "atomkp/pattern.hpp"
#include "atomkp/pattern_tables.hpp"
#include "oracle.hpp"

using namespace atomkp;

namespace {

const FieldParams& P = FieldParams::p256();

// replaces exactly one occurrence; fails the test if the needle is not unique
std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    REQUIRE(text.find(from, pos + 1) == std::string::npos);
    text.replace(pos, from.size(), to);
    return text;
}

struct TrialPoints {
    std::vector<oracle::Point> pool;
    std::size_t next = 0;
    std::mt19937_64 rng;

    explicit TrialPoints(std::uint64_t seed, std::size_t n) : rng(seed) {
        pool = oracle::sequential_points(rng, n);
    }
    const oracle::Point& take() { return pool.at(next++); }
};

void load_jacobian(RegisterFile& regs, const AtomicPattern& pat, const oracle::Point& pt,
                   std::mt19937_64& rng) {
    FieldElement X, Y, Z;
    oracle::randomize_jacobian(pt, rng, X, Y, Z);
    regs[pat.input("X1")] = X;
    regs[pat.input("Y1")] = Y;
    regs[pat.input("Z1")] = Z;
}

oracle::Point result_point(const RegisterFile& regs, const AtomicPattern& pat) {
    return oracle::jacobian_to_point(regs[pat.output("X3")], regs[pat.output("Y3")],
                                     regs[pat.output("Z3")]);
}

bool points_equal(const oracle::Point& a, const oracle::Point& b) {
    return !a.infinity && !b.infinity && a.x == b.x && a.y == b.y;
}

// one equivalence trial per pattern family; returns true when the pattern
// reproduces the oracle group law
bool doubling_trial(const AtomicPattern& pat, TrialPoints& tp) {
    const oracle::Point& pt = tp.take();
    RegisterFile regs;
    load_jacobian(regs, pat, pt, tp.rng);
    execute_pattern(pat, regs, P);
    return points_equal(result_point(regs, pat), oracle::add(pt, pt));
}

bool mixed_add_trial(const AtomicPattern& pat, TrialPoints& tp, bool check_byproduct = false) {
    const oracle::Point& p1 = tp.take();
    const oracle::Point& p2 = tp.take();
    RegisterFile regs;
    load_jacobian(regs, pat, p1, tp.rng);
    regs[pat.input("X2")] = oracle::from_big(p2.x);
    regs[pat.input("Y2")] = oracle::from_big(p2.y);
    execute_pattern(pat, regs, P);
    if (!points_equal(result_point(regs, pat), oracle::add(p1, p2))) return false;
    if (check_byproduct) {
        // X1p, Y1p must be the first operand rescaled to the output Z
        oracle::Point by = oracle::jacobian_to_point(regs[pat.output("X1p")],
                                                     regs[pat.output("Y1p")],
                                                     regs[pat.output("Z3")]);
        if (!points_equal(by, p1)) return false;
    }
    return true;
}

// chained construction: mixed addition leaves (P+Q) and the co-Z image of P
// in exactly the registers the special addition declares as inputs
bool special_add_chain_trial(const AtomicPattern& madd, const AtomicPattern& sadd,
                             TrialPoints& tp) {
    const oracle::Point& p1 = tp.take();
    const oracle::Point& p2 = tp.take();
    RegisterFile regs;
    load_jacobian(regs, madd, p1, tp.rng);
    regs[madd.input("X2")] = oracle::from_big(p2.x);
    regs[madd.input("Y2")] = oracle::from_big(p2.y);
    execute_pattern(madd, regs, P);
    execute_pattern(sadd, regs, P);
    return points_equal(result_point(regs, sadd), oracle::add(oracle::add(p1, p2), p1));
}

bool tripling_trial(const AtomicPattern& pat, TrialPoints& tp, bool check_byproduct = false) {
    const oracle::Point& pt = tp.take();
    RegisterFile regs;
    load_jacobian(regs, pat, pt, tp.rng);
    execute_pattern(pat, regs, P);
    oracle::Point twice = oracle::add(pt, pt);
    if (!points_equal(result_point(regs, pat), oracle::add(twice, pt))) return false;
    if (check_byproduct) {
        // the 2P byproduct sits at a pre-output Z scale, so compare projectively
        if (!oracle::projectively_equal(regs[pat.output("X2")], regs[pat.output("Y2")], twice))
            return false;
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// assets and structure

TEST_CASE("all shipped assets parse, validate, and serialize byte-exact", "[pattern]") {
    for (const PatternAsset& asset : all_pattern_assets()) {
        INFO(asset.name);
        AtomicPattern pat = parse_pattern(asset.text);
        CHECK(pat.name == asset.name);
        CHECK_NOTHROW(pat.validate());
        CHECK(serialize_pattern(pat) == asset.text);
        // parse(serialize(parse(text))) is a fixed point
        CHECK(serialize_pattern(parse_pattern(serialize_pattern(pat))) == asset.text);
    }
}

TEST_CASE("shapes and block counts match the pattern catalogue", "[pattern]") {
    auto expect = [](const AtomicPattern& p, BlockShape shape, std::uint16_t blocks) {
        INFO(p.name);
        CHECK(p.shape == shape);
        CHECK(p.blocks == blocks);
        CHECK(p.slots.size() == blocks * p.slots_per_block());
    };
    expect(pattern_doubling_mnamnaa(), BlockShape::MNAMNAA, 4);
    expect(pattern_mixed_add_mnamnaa(), BlockShape::MNAMNAA, 6);
    expect(pattern_special_add_mnamnaa(), BlockShape::MNAMNAA, 4);
    expect(pattern_tripling_mnamnaa(), BlockShape::MNAMNAA, 8);
    expect(pattern_mixed_add_mana(), BlockShape::MANA, 11);
    expect(pattern_special_add_mana(), BlockShape::MANA, 8);
    expect(pattern_tripling_mana(), BlockShape::MANA, 15);
    expect(pattern_doubling_original(), BlockShape::MNAMNAA, 4);
    expect(pattern_mixed_add_original(), BlockShape::MNAMNAA, 6);
}

TEST_CASE("input and output bindings carry the documented registers", "[pattern]") {
    const AtomicPattern& dbl = pattern_doubling_mnamnaa();
    CHECK(dbl.input("X1") == Reg::T1);
    CHECK(dbl.input("Y1") == Reg::T2);
    CHECK(dbl.input("Z1") == Reg::T3);
    CHECK(dbl.output("X3") == Reg::T1);
    CHECK_THROWS_AS(dbl.input("nope"), PatternError);
    CHECK_THROWS_AS(dbl.output("X1p"), PatternError);

    const AtomicPattern& madd = pattern_mixed_add_mnamnaa();
    CHECK(madd.input("X2") == Reg::Tx);
    CHECK(madd.input("Y2") == Reg::Ty);
    CHECK(madd.output("X1p") == Reg::T7);
    CHECK(madd.output("Y1p") == Reg::T8);

    // the mixed-addition byproducts land exactly where the special addition
    // expects its inputs, which is what makes the chained construction work
    const AtomicPattern& sadd = pattern_special_add_mnamnaa();
    CHECK(sadd.input("X2") == madd.output("X3"));
    CHECK(sadd.input("Y2") == madd.output("Y3"));
    CHECK(sadd.input("Z") == madd.output("Z3"));
    CHECK(sadd.input("X1p") == madd.output("X1p"));
    CHECK(sadd.input("Y1p") == madd.output("Y1p"));

    const AtomicPattern& madd_m = pattern_mixed_add_mana();
    const AtomicPattern& sadd_m = pattern_special_add_mana();
    CHECK(sadd_m.input("X2") == madd_m.output("X3"));
    CHECK(sadd_m.input("Z") == madd_m.output("Z3"));
    CHECK(sadd_m.input("X1p") == madd_m.output("X1p"));
    CHECK(sadd_m.input("Y1p") == madd_m.output("Y1p"));
}

TEST_CASE("corrected slots hold the fixed register bindings", "[pattern]") {
    auto slot_is = [](const AtomicSlot& s, SlotKind kind, Reg dst, Reg src1, Reg src2) {
        return s.kind == kind && !s.dummy && s.dst == dst && s.src1 == src1 && s.src2 == src2;
    };

    // doubling block 4, final addition slot: T2 = T2 + T5
    const auto& dbl = pattern_doubling_mnamnaa().slots;
    CHECK(slot_is(dbl[27], SlotKind::A, Reg::T2, Reg::T2, Reg::T5));

    // mixed addition block 2 slot 6, block 4 slot 6, block 5 slot 4
    const auto& madd = pattern_mixed_add_mnamnaa().slots;
    CHECK(slot_is(madd[12], SlotKind::A, Reg::T8, Reg::T7, Reg::T7));
    CHECK(slot_is(madd[26], SlotKind::A, Reg::T1, Reg::T10, Reg::T8));
    CHECK(slot_is(madd[31], SlotKind::M, Reg::T6, Reg::T6, Reg::T4));

    // the MANA spelling of the same two addition fixes
    const auto& mana = pattern_mixed_add_mana().slots;
    CHECK(slot_is(mana[13], SlotKind::A, Reg::T8, Reg::T7, Reg::T7));
    CHECK(slot_is(mana[31], SlotKind::A, Reg::T1, Reg::T10, Reg::T8));

    // tripling sixth-block product is T5 = T1 x T5 (+D^3), both shapes
    const auto& trip = pattern_tripling_mnamnaa().slots;
    CHECK(slot_is(trip[35], SlotKind::M, Reg::T5, Reg::T1, Reg::T5));
    const auto& trip_m = pattern_tripling_mana().slots;
    CHECK(slot_is(trip_m[40], SlotKind::M, Reg::T5, Reg::T1, Reg::T5));
}

TEST_CASE("uncorrected fixtures differ from the corrected tables only in the known slots",
          "[pattern]") {
    auto diff_indices = [](const AtomicPattern& a, const AtomicPattern& b) {
        REQUIRE(a.slots.size() == b.slots.size());
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < a.slots.size(); i++) {
            const AtomicSlot& x = a.slots[i];
            const AtomicSlot& y = b.slots[i];
            if (x.kind != y.kind || x.dummy != y.dummy || x.dst != y.dst || x.src1 != y.src1 ||
                x.src2 != y.src2)
                out.push_back(i);
        }
        return out;
    };
    CHECK(diff_indices(pattern_doubling_mnamnaa(), pattern_doubling_original()) ==
          std::vector<std::size_t>{27});
    CHECK(diff_indices(pattern_mixed_add_mnamnaa(), pattern_mixed_add_original()) ==
          std::vector<std::size_t>{12, 26, 31});
}

// ---------------------------------------------------------------------------
// parser and validator error paths

TEST_CASE("pattern asset parser rejects malformed input", "[pattern]") {
    const std::string head = "pattern t\nshape MANA\nblocks 1\nin X1 T1\nout X3 T1\n";
    const std::string body = "1 M 0 T1 T1 T1\n1 A 0 T1 T1 T1\n1 N 0 T1 T1\n1 A 0 T1 T1 T1\n";
    CHECK_NOTHROW(parse_pattern(head + body));

    CHECK_THROWS_AS(parse_pattern("shape MANA\nblocks 1\n" + body), PatternError);
    CHECK_THROWS_AS(parse_pattern(replace_once(head, "MANA", "NAMA") + body), PatternError);
    CHECK_THROWS_AS(parse_pattern(replace_once(head, "blocks 1", "blocks 0") + body), PatternError);
    CHECK_THROWS_AS(parse_pattern(replace_once(head, "blocks 1", "blocks x") + body), PatternError);
    CHECK_THROWS_AS(parse_pattern(head + "\n" + body), PatternError);  // empty line
    CHECK_THROWS_AS(parse_pattern(replace_once(head + body, "1 M 0", "1 Q 0")), PatternError);
    CHECK_THROWS_AS(parse_pattern(replace_once(head + body, "1 M 0", "1 M 2")), PatternError);
    CHECK_THROWS_AS(parse_pattern(replace_once(head + body, "1 N 0 T1 T1\n", "1 N 0 T1 T1 T1\n")),
                    PatternError);
    CHECK_THROWS_AS(parse_pattern(replace_once(head + body, "1 M 0 T1 T1 T1", "1 M 0 T1 T1")),
                    PatternError);
    CHECK_THROWS_AS(parse_pattern(replace_once(head + body, "1 M 0 T1 T1 T1", "1 M 0 T1 T1 T1 T1")),
                    PatternError);
    CHECK_THROWS_AS(parse_pattern(replace_once(head + body, "1 M 0 T1", "1 M 0 T99")), PatternError);
    CHECK_THROWS_AS(parse_pattern(replace_once(head, "in X1 T1", "in X1")), PatternError);
}

TEST_CASE("structural validation flags broken patterns", "[pattern]") {
    AtomicPattern base = parse_pattern(
        "pattern t\nshape MANA\nblocks 2\nin X1 T1\nout X3 T1\n"
        "1 M 0 T1 T1 T1\n1 A 0 T1 T1 T1\n1 N 0 T1 T1\n1 A 0 T1 T1 T1\n"
        "2 M 0 T1 T1 T1\n2 A 0 T1 T1 T1\n2 N 0 T1 T1\n2 A 0 T1 T1 T1\n");
    CHECK_NOTHROW(base.validate());

    AtomicPattern broken = base;
    broken.slots[4].block = 3;
    CHECK_THROWS_AS(broken.validate(), PatternError);

    broken = base;
    broken.slots[1].kind = SlotKind::N;  // breaks the M A N A shape
    CHECK_THROWS_AS(broken.validate(), PatternError);

    broken = base;
    broken.slots[0].dummy = true;  // dummy writing T1
    CHECK_THROWS_AS(broken.validate(), PatternError);

    broken = base;
    broken.slots[0].src1 = Reg::T0;  // real slot reading the dummy register
    CHECK_THROWS_AS(broken.validate(), PatternError);

    broken = base;
    broken.slots[0].dst = Reg::T0;  // real slot writing the dummy register
    CHECK_THROWS_AS(broken.validate(), PatternError);

    broken = base;
    broken.slots.pop_back();
    CHECK_THROWS_AS(broken.validate(), PatternError);

    broken = base;
    broken.blocks = 0;
    CHECK_THROWS_AS(broken.validate(), PatternError);
}

// ---------------------------------------------------------------------------
// executor semantics

TEST_CASE("every block emits its shape's opcode sequence", "[pattern]") {
    struct SeqRecorder final : OpRecorder {
        std::vector<std::string> per_block;
        std::uint16_t last = 0;
        void on_op(const OpEvent& ev) override {
            if (ev.block != last) {
                per_block.emplace_back();
                last = ev.block;
            }
            if (!per_block.back().empty()) per_block.back() += " ";
            per_block.back() += opcode_name(ev.op);
        }
    };

    std::mt19937_64 rng(202);
    for (const PatternAsset& asset : all_pattern_assets()) {
        AtomicPattern pat = parse_pattern(asset.text);
        const char* want = pat.shape == BlockShape::MNAMNAA ? "X X' N A X X' N A A" : "X X' A N A";
        for (int t = 0; t < 3; t++) {
            RegisterFile regs;
            for (std::size_t r = 0; r < kRegCount; r++)
                regs[static_cast<Reg>(r)] = oracle::random_element(rng);
            SeqRecorder rec;
            rec.last = 0;
            execute_pattern(pat, regs, P, &rec);
            REQUIRE(rec.per_block.size() == pat.blocks);
            for (const std::string& s : rec.per_block) {
                INFO(asset.name);
                REQUIRE(s == want);
            }
        }
    }
}

TEST_CASE("op events carry block numbers, dummy flags, and written values", "[pattern]") {
    struct CaptureRecorder final : OpRecorder {
        std::vector<OpEvent> events;
        void on_op(const OpEvent& ev) override { events.push_back(ev); }
    };
    std::mt19937_64 rng(203);
    const AtomicPattern& pat = pattern_doubling_mnamnaa();
    RegisterFile regs;
    for (std::size_t r = 0; r < kRegCount; r++)
        regs[static_cast<Reg>(r)] = oracle::random_element(rng);
    FieldElement z_in = regs[Reg::T3];
    CaptureRecorder rec;
    execute_pattern(pat, regs, P, &rec);

    // 4 blocks x (2 per M + 1 per N + 2 per A slots) = 4 x 9 events
    REQUIRE(rec.events.size() == 36);
    for (std::size_t i = 0; i < rec.events.size(); i++) {
        CHECK(rec.events[i].block == i / 9 + 1);
        CHECK(std::string(rec.events[i].pattern_name) == "doubling");
    }
    // first M slot is T4 = T3 * T3: X emits the Montgomery intermediate,
    // X' the standard-domain product
    CHECK(rec.events[0].op == Opcode::X);
    CHECK(rec.events[1].op == Opcode::XPrime);
    CHECK(rec.events[0].dst_value == mont_mul(z_in, z_in, P));
    CHECK(rec.events[1].dst_value == field_mul(z_in, z_in, P));
    CHECK(oracle::to_big(rec.events[1].dst_value) ==
          oracle::mul_mod(oracle::to_big(z_in), oracle::to_big(z_in), oracle::prime()));
    // second slot is the dummy negation
    CHECK(rec.events[2].op == Opcode::N);
    CHECK(rec.events[2].dummy);
    CHECK(rec.events[2].dst == Reg::T0);
}

TEST_CASE("dummy slots never influence the declared outputs", "[pattern]") {
    std::mt19937_64 rng(204);
    TrialPoints tp(2040, 400);
    int runs = 0;
    for (const PatternAsset& asset : all_pattern_assets()) {
        AtomicPattern pat = parse_pattern(asset.text);
        bool needs_affine = false;
        for (const auto& [label, reg] : pat.inputs)
            if (label == "X2" && reg == Reg::Tx) needs_affine = true;
        for (int t = 0; t < 25; t++) {
            RegisterFile regs;
            // valid group inputs where the pattern needs them, noise elsewhere
            if (asset.name == std::string("special_add") ||
                asset.name == std::string("special_add_mana")) {
                const oracle::Point& pa = tp.take();
                const oracle::Point& pb = tp.take();
                auto p = oracle::prime();
                boost::multiprecision::cpp_int lam = 0;
                while (lam == 0) lam = oracle::mod(boost::multiprecision::cpp_int(tp.rng()), p);
                auto l2 = oracle::mul_mod(lam, lam, p);
                auto l3 = oracle::mul_mod(l2, lam, p);
                regs[pat.input("X2")] = oracle::from_big(oracle::mul_mod(pa.x, l2, p));
                regs[pat.input("Y2")] = oracle::from_big(oracle::mul_mod(pa.y, l3, p));
                regs[pat.input("Z")] = oracle::from_big(lam);
                regs[pat.input("X1p")] = oracle::from_big(oracle::mul_mod(pb.x, l2, p));
                regs[pat.input("Y1p")] = oracle::from_big(oracle::mul_mod(pb.y, l3, p));
            } else {
                load_jacobian(regs, pat, tp.take(), tp.rng);
                if (needs_affine) {
                    const oracle::Point& q = tp.take();
                    regs[pat.input("X2")] = oracle::from_big(q.x);
                    regs[pat.input("Y2")] = oracle::from_big(q.y);
                }
            }

            RegisterFile clean = regs;
            RegisterFile poisoned = regs;
            poisoned[Reg::T0] = oracle::random_element(rng);
            execute_pattern(pat, clean, P);
            execute_pattern(pat, poisoned, P);
            for (const auto& [label, reg] : pat.outputs) {
                INFO(asset.name << " output " << label);
                REQUIRE(clean[reg] == poisoned[reg]);
            }
            runs++;
        }
    }
    CHECK(runs >= 200);
}

// ---------------------------------------------------------------------------
// oracle equivalence: corrected tables pass

TEST_CASE("corrected doubling reproduces 2P on random jacobian inputs", "[pattern][oracle]") {
    TrialPoints tp(301, 100);
    for (int t = 0; t < 100; t++) REQUIRE(doubling_trial(pattern_doubling_mnamnaa(), tp));
}

TEST_CASE("corrected mixed addition reproduces P+Q and its co-Z byproduct", "[pattern][oracle]") {
    TrialPoints tp(302, 200);
    for (int t = 0; t < 100; t++)
        REQUIRE(mixed_add_trial(pattern_mixed_add_mnamnaa(), tp, true));
}

TEST_CASE("special addition consumes the chained mixed-addition byproducts", "[pattern][oracle]") {
    TrialPoints tp(303, 200);
    for (int t = 0; t < 100; t++)
        REQUIRE(special_add_chain_trial(pattern_mixed_add_mnamnaa(), pattern_special_add_mnamnaa(),
                                        tp));
}

TEST_CASE("special addition also works standalone on a shared-Z pair", "[pattern][oracle]") {
    TrialPoints tp(304, 100);
    const AtomicPattern& pat = pattern_special_add_mnamnaa();
    auto p = oracle::prime();
    for (int t = 0; t < 50; t++) {
        const oracle::Point& pa = tp.take();
        const oracle::Point& pb = tp.take();
        boost::multiprecision::cpp_int lam = 0;
        while (lam == 0) lam = oracle::mod(boost::multiprecision::cpp_int(tp.rng()), p);
        auto l2 = oracle::mul_mod(lam, lam, p);
        auto l3 = oracle::mul_mod(l2, lam, p);
        RegisterFile regs;
        regs[pat.input("X2")] = oracle::from_big(oracle::mul_mod(pa.x, l2, p));
        regs[pat.input("Y2")] = oracle::from_big(oracle::mul_mod(pa.y, l3, p));
        regs[pat.input("Z")] = oracle::from_big(lam);
        regs[pat.input("X1p")] = oracle::from_big(oracle::mul_mod(pb.x, l2, p));
        regs[pat.input("Y1p")] = oracle::from_big(oracle::mul_mod(pb.y, l3, p));
        execute_pattern(pat, regs, P);
        REQUIRE(points_equal(result_point(regs, pat), oracle::add(pa, pb)));
    }
}

TEST_CASE("tripling reproduces P+P+P with a 2P byproduct", "[pattern][oracle]") {
    TrialPoints tp(305, 100);
    for (int t = 0; t < 100; t++) REQUIRE(tripling_trial(pattern_tripling_mnamnaa(), tp, true));
}

TEST_CASE("MANA variants reproduce the same group operations", "[pattern][oracle]") {
    TrialPoints tp(306, 500);
    for (int t = 0; t < 100; t++) REQUIRE(mixed_add_trial(pattern_mixed_add_mana(), tp, true));
    for (int t = 0; t < 100; t++)
        REQUIRE(special_add_chain_trial(pattern_mixed_add_mana(), pattern_special_add_mana(), tp));
    for (int t = 0; t < 100; t++) REQUIRE(tripling_trial(pattern_tripling_mana(), tp));
}

// ---------------------------------------------------------------------------
// oracle equivalence: uncorrected tables and reverted fixes fail

TEST_CASE("uncorrected doubling disagrees with the oracle almost always", "[pattern][oracle]") {
    TrialPoints tp(307, 100);
    int wrong = 0;
    for (int t = 0; t < 100; t++)
        if (!doubling_trial(pattern_doubling_original(), tp)) wrong++;
    CHECK(wrong >= 99);
}

TEST_CASE("uncorrected mixed addition disagrees with the oracle almost always",
          "[pattern][oracle]") {
    TrialPoints tp(308, 200);
    int wrong = 0;
    for (int t = 0; t < 100; t++)
        if (!mixed_add_trial(pattern_mixed_add_original(), tp)) wrong++;
    CHECK(wrong >= 99);
}

TEST_CASE("reverting any one of the four corrections breaks the oracle test",
          "[pattern][oracle]") {
    struct Mutation {
        const char* base;
        const char* from;
        const char* to;
        bool is_doubling;
    };
    const Mutation muts[4] = {
        {k_asset_doubling, "4 A 0 T2 T2 T5", "4 A 0 T2 T2 T4", true},
        {k_asset_mixed_add, "2 A 0 T8 T7 T7", "2 A 0 T8 T1 T1", false},
        {k_asset_mixed_add, "4 A 0 T1 T10 T8", "4 A 0 T1 T6 T8", false},
        {k_asset_mixed_add, "5 M 0 T6 T6 T4", "5 M 0 T6 T6 T10", false},
    };
    std::uint64_t seed = 309;
    for (const Mutation& m : muts) {
        INFO(std::string(m.from) + " -> " + m.to);
        AtomicPattern pat = parse_pattern(replace_once(m.base, m.from, m.to));
        CHECK_NOTHROW(pat.validate());
        TrialPoints tp(seed++, 200);
        int wrong = 0;
        for (int t = 0; t < 100; t++) {
            bool ok = m.is_doubling ? doubling_trial(pat, tp) : mixed_add_trial(pat, tp);
            if (!ok) wrong++;
        }
        CHECK(wrong >= 99);
    }
}
