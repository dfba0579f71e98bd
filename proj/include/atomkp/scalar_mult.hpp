/* scalar_mult.hpp - left-to-right binary double-and-add over atomic patterns.
 *
 * kp_atomic runs the pattern executor per scalar bit (doubling each step,
 * mixed addition on set bits) and records an event log: pattern begins,
 * opcode events, and the NOP marker runs inserted between blocks and
 * operations.  kp_reference is the independent textbook affine oracle.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "atomkp/field.hpp"
#include "atomkp/pattern.hpp"
#include "atomkp/pattern_tables.hpp"

namespace atomkp {

struct ScalarError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// scalars: MSB-first bit vector, 1 <= value < group order

struct Scalar {
    std::vector<std::uint8_t> bits;  // MSB first; bits.front() == 1

    std::size_t bit_length() const { return bits.size(); }

    std::string to_bin() const {
        std::string s;
        s.reserve(bits.size());
        for (auto b : bits) s.push_back(b ? '1' : '0');
        return s;
    }

    static Scalar from_bits(std::vector<std::uint8_t> bits, const FieldParams& P) {
        Scalar k;
        k.bits = std::move(bits);
        k.validate(P);
        return k;
    }

    static Scalar from_uint(u64 v, const FieldParams& P) {
        if (v == 0) throw ScalarError("scalar must be nonzero");
        std::vector<std::uint8_t> bits;
        for (int i = 63; i >= 0; --i) {
            if (bits.empty() && !((v >> i) & 1)) continue;
            bits.push_back(static_cast<std::uint8_t>((v >> i) & 1));
        }
        return from_bits(std::move(bits), P);
    }

    static Scalar from_bin(std::string_view s, const FieldParams& P) {
        if (s.substr(0, 2) == "0b" || s.substr(0, 2) == "0B") s.remove_prefix(2);
        if (s.empty()) throw ScalarError("empty scalar");
        std::vector<std::uint8_t> bits;
        for (char c : s) {
            if (c == '0') bits.push_back(0);
            else if (c == '1') bits.push_back(1);
            else throw ScalarError("binary scalar: bad digit");
        }
        return from_bits(std::move(bits), P);
    }

    static Scalar from_hex(std::string_view s, const FieldParams& P) {
        if (s.substr(0, 2) == "0x" || s.substr(0, 2) == "0X") s.remove_prefix(2);
        if (s.empty()) throw ScalarError("empty scalar");
        std::vector<std::uint8_t> bits;
        for (char c : s) {
            int v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
            else throw ScalarError("hex scalar: bad digit");
            for (int i = 3; i >= 0; --i) {
                if (bits.empty() && !((v >> i) & 1)) continue;
                bits.push_back(static_cast<std::uint8_t>((v >> i) & 1));
            }
        }
        return from_bits(std::move(bits), P);
    }

    // parses 0b..., 0x..., plain binary (only 0/1 digits) or plain hex
    static Scalar parse(std::string_view s, const FieldParams& P) {
        if (s.substr(0, 2) == "0b" || s.substr(0, 2) == "0B") return from_bin(s, P);
        if (s.substr(0, 2) == "0x" || s.substr(0, 2) == "0X") return from_hex(s, P);
        bool binary = !s.empty();
        for (char c : s)
            if (c != '0' && c != '1') binary = false;
        return binary ? from_bin(s, P) : from_hex(s, P);
    }

    void validate(const FieldParams& P) const {
        if (bits.empty()) throw ScalarError("scalar must be nonzero");
        if (bits.front() != 1) throw ScalarError("scalar bits must not have leading zeros");
        for (auto b : bits)
            if (b > 1) throw ScalarError("scalar bits must be 0/1");
        if (bits.size() > kWords * kWordBits) throw ScalarError("scalar exceeds the group order");
        if (bits.size() == kWords * kWordBits) {
            // full-width value: compare against the group order limb-wise
            FieldElement v{};
            for (std::size_t i = 0; i < bits.size(); i++) {
                std::size_t pos = bits.size() - 1 - i;  // bit weight
                if (bits[i]) v.w[pos / kWordBits] |= u64{1} << (pos % kWordBits);
            }
            if (!field_less(v, P.order)) throw ScalarError("scalar exceeds the group order");
        }
    }
};

// ---------------------------------------------------------------------------
// points

struct AffinePoint {
    FieldElement x, y;
    bool infinity = false;

    bool operator==(const AffinePoint&) const = default;
};

struct JacobianPoint {
    FieldElement X, Y, Z;
};

inline AffinePoint generator(const FieldParams& P) { return AffinePoint{P.gx, P.gy, false}; }

inline bool is_on_curve(const AffinePoint& pt, const FieldParams& P) {
    if (pt.infinity) return true;
    FieldElement lhs = field_mul(pt.y, pt.y, P);
    FieldElement x2 = field_mul(pt.x, pt.x, P);
    FieldElement rhs = field_mul(x2, pt.x, P);
    rhs = field_add(rhs, field_mul(P.a, pt.x, P), P);
    rhs = field_add(rhs, P.b, P);
    return lhs == rhs;
}

inline AffinePoint jacobian_to_affine(const JacobianPoint& Q, const FieldParams& P) {
    if (Q.Z.is_zero()) throw PointError("point at infinity has no affine form");
    FieldElement zi = field_inv(Q.Z, P);
    FieldElement zi2 = field_mul(zi, zi, P);
    AffinePoint r;
    r.x = field_mul(Q.X, zi2, P);
    r.y = field_mul(field_mul(Q.Y, zi2, P), zi, P);
    return r;
}

inline JacobianPoint to_jacobian(const AffinePoint& pt) {
    if (pt.infinity) throw PointError("cannot lift the point at infinity");
    FieldElement one;
    one.w[0] = 1;
    return JacobianPoint{pt.x, pt.y, one};
}

// ---------------------------------------------------------------------------
// event log

enum class PatternKind : std::uint8_t { Doubling, Addition };

inline const char* pattern_kind_name(PatternKind k) {
    return k == PatternKind::Doubling ? "doubling" : "addition";
}

enum class NopClass : std::uint8_t { IntraBlock, InterOperation, DoublingDoubling };

inline const char* nop_class_name(NopClass c) {
    switch (c) {
        case NopClass::IntraBlock: return "intra_block";
        case NopClass::InterOperation: return "inter_operation";
        default: return "doubling_doubling";
    }
}

struct LogEntry {
    enum class Type : std::uint8_t { PatternBegin, Op, Nops } type = Type::Op;
    // PatternBegin
    PatternKind kind = PatternKind::Doubling;
    std::uint32_t ordinal = 0;  // 1-based per kind: "Doubling i" / "Addition j"
    // Op
    OpEvent op;
    // Nops
    NopClass nop_class = NopClass::IntraBlock;
    std::uint32_t nop_count = 0;
};

struct KPEventLog {
    std::string scalar_bits;  // includes the implicit leading 1
    std::vector<LogEntry> entries;

    std::uint32_t doubling_count() const { return count_kind(PatternKind::Doubling); }
    std::uint32_t addition_count() const { return count_kind(PatternKind::Addition); }

    // "D A D D A ..." in execution order
    std::string interleaving() const {
        std::string s;
        for (const LogEntry& e : entries) {
            if (e.type != LogEntry::Type::PatternBegin) continue;
            if (!s.empty()) s.push_back(' ');
            s.push_back(e.kind == PatternKind::Doubling ? 'D' : 'A');
        }
        return s;
    }

  private:
    std::uint32_t count_kind(PatternKind k) const {
        std::uint32_t n = 0;
        for (const LogEntry& e : entries)
            if (e.type == LogEntry::Type::PatternBegin && e.kind == k) n++;
        return n;
    }
};

// ---------------------------------------------------------------------------
// kp

enum class PatternVariant : std::uint8_t { Corrected, Original };

struct KPOptions {
    PatternVariant variant = PatternVariant::Corrected;
    bool markers = true;                      // NOP runs between blocks/operations
    std::uint32_t nops_intra_block = 2000;    // between atomic blocks
    std::uint32_t nops_inter_op = 5000;       // doubling <-> addition boundary
    std::uint32_t nops_double_double = 10000; // between consecutive doublings
};

namespace detail {

// appends opcode events, inserting an intra-block NOP run at block boundaries
struct LogRecorder final : OpRecorder {
    KPEventLog* log = nullptr;
    const KPOptions* opt = nullptr;
    std::uint16_t last_block = 0;

    void begin_pattern(PatternKind kind, std::uint32_t ordinal) {
        last_block = 0;
        if (!log) return;
        LogEntry e;
        e.type = LogEntry::Type::PatternBegin;
        e.kind = kind;
        e.ordinal = ordinal;
        log->entries.push_back(e);
    }

    void nops(NopClass cls, std::uint32_t count) {
        if (!log || count == 0) return;
        LogEntry e;
        e.type = LogEntry::Type::Nops;
        e.nop_class = cls;
        e.nop_count = count;
        log->entries.push_back(e);
    }

    void on_op(const OpEvent& ev) override {
        if (!log) return;
        if (opt->markers && last_block != 0 && ev.block != last_block)
            nops(NopClass::IntraBlock, opt->nops_intra_block);
        last_block = ev.block;
        LogEntry e;
        e.type = LogEntry::Type::Op;
        e.op = ev;
        log->entries.push_back(e);
    }
};

}  // namespace detail

inline JacobianPoint kp_atomic(const Scalar& k, const AffinePoint& pt, const FieldParams& P,
                               const KPOptions& opt = {}, KPEventLog* log = nullptr) {
    k.validate(P);
    if (pt.infinity) throw PointError("kp_atomic: input must be a finite point");
    if (!is_on_curve(pt, P)) throw PointError("kp_atomic: point not on curve");

    const AtomicPattern& dbl = opt.variant == PatternVariant::Corrected
                                   ? pattern_doubling_mnamnaa()
                                   : pattern_doubling_original();
    const AtomicPattern& madd = opt.variant == PatternVariant::Corrected
                                    ? pattern_mixed_add_mnamnaa()
                                    : pattern_mixed_add_original();

    if (log) {
        log->entries.clear();
        log->scalar_bits = k.to_bin();
    }

    RegisterFile regs;
    regs[dbl.input("X1")] = pt.x;
    regs[dbl.input("Y1")] = pt.y;
    FieldElement one;
    one.w[0] = 1;
    regs[dbl.input("Z1")] = one;
    regs[madd.input("X2")] = pt.x;
    regs[madd.input("Y2")] = pt.y;

    detail::LogRecorder rec;
    rec.log = log;
    rec.opt = &opt;
    OpRecorder* sink = log ? &rec : nullptr;

    // operation schedule straight from the bits: one doubling per processed
    // bit, one mixed addition when the bit is set
    std::vector<PatternKind> schedule;
    for (std::size_t i = 1; i < k.bits.size(); i++) {
        schedule.push_back(PatternKind::Doubling);
        if (k.bits[i]) schedule.push_back(PatternKind::Addition);
    }

    std::uint32_t d_ordinal = 0, a_ordinal = 0;
    for (std::size_t idx = 0; idx < schedule.size(); idx++) {
        if (opt.markers && idx > 0) {
            bool dd = schedule[idx - 1] == PatternKind::Doubling && schedule[idx] == PatternKind::Doubling;
            rec.nops(dd ? NopClass::DoublingDoubling : NopClass::InterOperation,
                     dd ? opt.nops_double_double : opt.nops_inter_op);
        }
        if (schedule[idx] == PatternKind::Doubling) {
            rec.begin_pattern(PatternKind::Doubling, ++d_ordinal);
            execute_pattern(dbl, regs, P, sink);
        } else {
            rec.begin_pattern(PatternKind::Addition, ++a_ordinal);
            execute_pattern(madd, regs, P, sink);
        }
    }

    if (schedule.empty()) {
        // k = 1: no loop iterations, Q stays P
        return to_jacobian(pt);
    }
    return JacobianPoint{regs[dbl.output("X3")], regs[dbl.output("Y3")], regs[dbl.output("Z3")]};
}

// ---------------------------------------------------------------------------
// reference oracle: textbook affine group law, no atomic tables involved

inline AffinePoint affine_double(const AffinePoint& a, const FieldParams& P) {
    if (a.infinity) return a;
    if (a.y.is_zero()) return AffinePoint{{}, {}, true};
    // lambda = (3x^2 + a) / 2y
    FieldElement x2 = field_mul(a.x, a.x, P);
    FieldElement num = field_add(field_add(x2, x2, P), x2, P);
    num = field_add(num, P.a, P);
    FieldElement den = field_add(a.y, a.y, P);
    FieldElement lam = field_mul(num, field_inv(den, P), P);
    AffinePoint r;
    r.x = field_mul(lam, lam, P);
    r.x = field_add(r.x, field_neg(field_add(a.x, a.x, P), P), P);
    r.y = field_mul(lam, field_add(a.x, field_neg(r.x, P), P), P);
    r.y = field_add(r.y, field_neg(a.y, P), P);
    return r;
}

inline AffinePoint affine_add(const AffinePoint& a, const AffinePoint& b, const FieldParams& P) {
    if (a.infinity) return b;
    if (b.infinity) return a;
    if (a.x == b.x) {
        if (a.y == b.y) return affine_double(a, P);
        return AffinePoint{{}, {}, true};  // y1 = -y2
    }
    FieldElement num = field_add(b.y, field_neg(a.y, P), P);
    FieldElement den = field_add(b.x, field_neg(a.x, P), P);
    FieldElement lam = field_mul(num, field_inv(den, P), P);
    AffinePoint r;
    r.x = field_mul(lam, lam, P);
    r.x = field_add(r.x, field_neg(field_add(a.x, b.x, P), P), P);
    r.y = field_mul(lam, field_add(a.x, field_neg(r.x, P), P), P);
    r.y = field_add(r.y, field_neg(a.y, P), P);
    return r;
}

inline AffinePoint affine_neg(const AffinePoint& a, const FieldParams& P) {
    if (a.infinity) return a;
    return AffinePoint{a.x, field_neg(a.y, P), false};
}

inline AffinePoint kp_reference(const Scalar& k, const AffinePoint& pt, const FieldParams& P) {
    k.validate(P);
    if (pt.infinity) throw PointError("kp_reference: input must be a finite point");
    if (!is_on_curve(pt, P)) throw PointError("kp_reference: point not on curve");
    AffinePoint acc = pt;
    for (std::size_t i = 1; i < k.bits.size(); i++) {
        acc = affine_double(acc, P);
        if (k.bits[i]) acc = affine_add(acc, pt, P);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// JSON-lines log export, one event per line

inline void write_log_jsonl(const KPEventLog& log, std::ostream& out) {
    out << "{\"event\":\"scalar\",\"bits\":\"" << log.scalar_bits << "\"}\n";
    for (const LogEntry& e : log.entries) {
        switch (e.type) {
            case LogEntry::Type::PatternBegin:
                out << "{\"event\":\"pattern\",\"kind\":\"" << pattern_kind_name(e.kind)
                    << "\",\"ordinal\":" << e.ordinal << "}\n";
                break;
            case LogEntry::Type::Op:
                out << "{\"event\":\"op\",\"opcode\":\"" << opcode_name(e.op.op) << "\",\"block\":"
                    << e.op.block << ",\"dummy\":" << (e.op.dummy ? "true" : "false")
                    << ",\"dst\":\"" << reg_name(e.op.dst) << "\",\"value\":\"" << to_hex(e.op.dst_value)
                    << "\"}\n";
                break;
            case LogEntry::Type::Nops:
                out << "{\"event\":\"nops\",\"class\":\"" << nop_class_name(e.nop_class)
                    << "\",\"count\":" << e.nop_count << "}\n";
                break;
        }
    }
}

}  // namespace atomkp
