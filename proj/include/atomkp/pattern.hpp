/* pattern.hpp - atomic-pattern data model, text asset loader, executor.
 *
 * A pattern is a list of M/N/A slots grouped into fixed-shape blocks
 * (MNAMNAA or MANA).  Patterns are data: they load from a line-oriented
 * text asset, validate structurally, and execute against a register file
 * while streaming opcode events.  Every M slot runs as two Montgomery
 * multiplications (X, X'), so an MNAMNAA block always emits XX'NAXX'NAA.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atomkp/field.hpp"

namespace atomkp {

struct PatternError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// registers

enum class Reg : std::uint8_t {
    T0 = 0,  // dedicated dummy destination, never read by a non-dummy slot
    T1, T2, T3, T4, T5, T6, T7, T8, T9, T10,
    Tx, Ty,
};

inline constexpr std::size_t kRegCount = 13;

inline const char* reg_name(Reg r) {
    static const char* names[kRegCount] = {
        "T0", "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10", "Tx", "Ty"};
    return names[static_cast<std::size_t>(r)];
}

inline Reg reg_from_name(std::string_view s) {
    for (std::size_t i = 0; i < kRegCount; i++) {
        if (s == reg_name(static_cast<Reg>(i))) return static_cast<Reg>(i);
    }
    throw PatternError("unknown register name: " + std::string(s));
}

struct RegisterFile {
    std::array<FieldElement, kRegCount> r{};

    FieldElement& operator[](Reg reg) { return r[static_cast<std::size_t>(reg)]; }
    const FieldElement& operator[](Reg reg) const { return r[static_cast<std::size_t>(reg)]; }
};

// ---------------------------------------------------------------------------
// slots and patterns

enum class SlotKind : std::uint8_t { M, N, A };

inline char slot_kind_char(SlotKind k) {
    switch (k) {
        case SlotKind::M: return 'M';
        case SlotKind::N: return 'N';
        default: return 'A';
    }
}

enum class BlockShape : std::uint8_t { MNAMNAA, MANA };

inline const char* block_shape_name(BlockShape s) {
    return s == BlockShape::MNAMNAA ? "MNAMNAA" : "MANA";
}

inline const std::vector<SlotKind>& block_shape_slots(BlockShape s) {
    static const std::vector<SlotKind> mnamnaa = {SlotKind::M, SlotKind::N, SlotKind::A,
                                                  SlotKind::M, SlotKind::N, SlotKind::A, SlotKind::A};
    static const std::vector<SlotKind> mana = {SlotKind::M, SlotKind::A, SlotKind::N, SlotKind::A};
    return s == BlockShape::MNAMNAA ? mnamnaa : mana;
}

struct AtomicSlot {
    std::uint16_t block = 0;  // 1-based block index
    SlotKind kind = SlotKind::M;
    bool dummy = false;
    Reg dst = Reg::T0;
    Reg src1 = Reg::T0;
    Reg src2 = Reg::T0;  // ignored for N slots
};

struct AtomicPattern {
    std::string name;
    BlockShape shape = BlockShape::MNAMNAA;
    std::uint16_t blocks = 0;
    std::vector<std::pair<std::string, Reg>> inputs;   // coordinate label -> register
    std::vector<std::pair<std::string, Reg>> outputs;  // coordinate label -> register
    std::vector<AtomicSlot> slots;

    std::size_t slots_per_block() const { return block_shape_slots(shape).size(); }

    Reg input(std::string_view label) const {
        for (const auto& [l, r] : inputs)
            if (l == label) return r;
        throw PatternError(name + ": no input binding " + std::string(label));
    }
    Reg output(std::string_view label) const {
        for (const auto& [l, r] : outputs)
            if (l == label) return r;
        throw PatternError(name + ": no output binding " + std::string(label));
    }

    void validate() const {
        const auto& shape_kinds = block_shape_slots(shape);
        if (blocks == 0) throw PatternError(name + ": zero blocks");
        if (slots.size() != blocks * shape_kinds.size())
            throw PatternError(name + ": slot count does not match blocks * shape length");
        for (std::size_t i = 0; i < slots.size(); i++) {
            const AtomicSlot& s = slots[i];
            std::size_t pos = i % shape_kinds.size();
            std::uint16_t want_block = static_cast<std::uint16_t>(i / shape_kinds.size() + 1);
            if (s.block != want_block)
                throw PatternError(name + ": slot " + std::to_string(i) + " has wrong block index");
            if (s.kind != shape_kinds[pos])
                throw PatternError(name + ": slot " + std::to_string(i) + " breaks the block shape");
            if (s.dummy && s.dst != Reg::T0)
                throw PatternError(name + ": dummy slot must write T0");
            if (!s.dummy) {
                bool reads_t0 = s.src1 == Reg::T0 || (s.kind != SlotKind::N && s.src2 == Reg::T0);
                if (reads_t0) throw PatternError(name + ": non-dummy slot reads T0");
                if (s.dst == Reg::T0) throw PatternError(name + ": non-dummy slot writes T0");
            }
        }
    }
};

// ---------------------------------------------------------------------------
// opcode events

enum class Opcode : std::uint8_t { X, XPrime, N, A };

inline const char* opcode_name(Opcode op) {
    switch (op) {
        case Opcode::X: return "X";
        case Opcode::XPrime: return "X'";
        case Opcode::N: return "N";
        default: return "A";
    }
}

struct OpEvent {
    Opcode op = Opcode::X;
    bool dummy = false;
    std::uint16_t block = 0;          // 1-based block index within the pattern
    const char* pattern_name = "";    // points into the immutable AtomicPattern
    Reg dst = Reg::T0;
    Reg src1 = Reg::T0;
    Reg src2 = Reg::T0;
    FieldElement dst_value;           // value written; X carries the intermediate product
    std::uint32_t cycles = 0;         // duration placeholder, assigned by the trace simulator
};

struct OpRecorder {
    virtual void on_op(const OpEvent& ev) = 0;
    virtual ~OpRecorder() = default;
};

// ---------------------------------------------------------------------------
// executor

inline void execute_pattern(const AtomicPattern& pat, RegisterFile& regs, const FieldParams& P,
                            OpRecorder* rec = nullptr) {
    const auto& shape_kinds = block_shape_slots(pat.shape);
    if (pat.slots.size() != pat.blocks * shape_kinds.size())
        throw PatternError(pat.name + ": malformed pattern (slot count)");

    OpEvent ev;
    ev.pattern_name = pat.name.c_str();
    for (std::size_t i = 0; i < pat.slots.size(); i++) {
        const AtomicSlot& s = pat.slots[i];
        if (s.kind != shape_kinds[i % shape_kinds.size()])
            throw PatternError(pat.name + ": malformed pattern (slot kind at " + std::to_string(i) + ")");
        ev.dummy = s.dummy;
        ev.block = s.block;
        ev.dst = s.dst;
        ev.src1 = s.src1;
        ev.src2 = s.src2;
        switch (s.kind) {
            case SlotKind::M: {
                // two-step field product: both Montgomery passes are visible
                FieldElement t = mont_mul(regs[s.src1], regs[s.src2], P);
                if (rec) {
                    ev.op = Opcode::X;
                    ev.dst_value = t;
                    rec->on_op(ev);
                }
                FieldElement v = mont_mul(t, P.r2_mod_p, P);
                regs[s.dst] = v;
                if (rec) {
                    ev.op = Opcode::XPrime;
                    ev.dst_value = v;
                    rec->on_op(ev);
                }
                break;
            }
            case SlotKind::N: {
                FieldElement v = field_neg(regs[s.src1], P);
                regs[s.dst] = v;
                if (rec) {
                    ev.op = Opcode::N;
                    ev.dst_value = v;
                    rec->on_op(ev);
                }
                break;
            }
            case SlotKind::A: {
                FieldElement v = field_add(regs[s.src1], regs[s.src2], P);
                regs[s.dst] = v;
                if (rec) {
                    ev.op = Opcode::A;
                    ev.dst_value = v;
                    rec->on_op(ev);
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// text asset format, one slot per line:
//   <block> <kind> <dummy 0|1> <dst> <src1> [<src2>]
// preceded by header lines:
//   pattern <name> / shape <MNAMNAA|MANA> / blocks <n> / in <label> <reg> / out <label> <reg>

inline AtomicPattern parse_pattern(std::string_view text) {
    AtomicPattern pat;
    bool have_name = false, have_shape = false, have_blocks = false;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty()) throw PatternError("pattern asset line " + std::to_string(lineno) + ": empty line");
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "pattern") {
            if (!(ls >> pat.name)) throw PatternError("pattern asset: missing name");
            have_name = true;
        } else if (tok == "shape") {
            std::string s;
            ls >> s;
            if (s == "MNAMNAA") pat.shape = BlockShape::MNAMNAA;
            else if (s == "MANA") pat.shape = BlockShape::MANA;
            else throw PatternError("pattern asset: unknown shape " + s);
            have_shape = true;
        } else if (tok == "blocks") {
            unsigned n = 0;
            if (!(ls >> n) || n == 0) throw PatternError("pattern asset: bad block count");
            pat.blocks = static_cast<std::uint16_t>(n);
            have_blocks = true;
        } else if (tok == "in" || tok == "out") {
            std::string label, reg;
            if (!(ls >> label >> reg)) throw PatternError("pattern asset: bad binding line " + std::to_string(lineno));
            auto& list = tok == "in" ? pat.inputs : pat.outputs;
            list.emplace_back(label, reg_from_name(reg));
        } else {
            AtomicSlot s;
            unsigned block = 0;
            std::istringstream sl(line);
            std::string kind, dummy, dst, src1, src2;
            if (!(sl >> block >> kind >> dummy >> dst >> src1))
                throw PatternError("pattern asset: bad slot line " + std::to_string(lineno));
            s.block = static_cast<std::uint16_t>(block);
            if (kind == "M") s.kind = SlotKind::M;
            else if (kind == "N") s.kind = SlotKind::N;
            else if (kind == "A") s.kind = SlotKind::A;
            else throw PatternError("pattern asset: bad slot kind at line " + std::to_string(lineno));
            if (dummy == "0") s.dummy = false;
            else if (dummy == "1") s.dummy = true;
            else throw PatternError("pattern asset: bad dummy flag at line " + std::to_string(lineno));
            s.dst = reg_from_name(dst);
            s.src1 = reg_from_name(src1);
            if (s.kind == SlotKind::N) {
                if (sl >> src2) throw PatternError("pattern asset: N slot takes one source, line " + std::to_string(lineno));
                s.src2 = s.src1;
            } else {
                if (!(sl >> src2)) throw PatternError("pattern asset: missing src2 at line " + std::to_string(lineno));
                s.src2 = reg_from_name(src2);
            }
            std::string extra;
            if (sl >> extra) throw PatternError("pattern asset: trailing tokens at line " + std::to_string(lineno));
            pat.slots.push_back(s);
        }
    }
    if (!have_name || !have_shape || !have_blocks)
        throw PatternError("pattern asset: missing pattern/shape/blocks header");
    pat.validate();
    return pat;
}

inline std::string serialize_pattern(const AtomicPattern& pat) {
    std::ostringstream out;
    out << "pattern " << pat.name << "\n";
    out << "shape " << block_shape_name(pat.shape) << "\n";
    out << "blocks " << pat.blocks << "\n";
    for (const auto& [label, reg] : pat.inputs) out << "in " << label << " " << reg_name(reg) << "\n";
    for (const auto& [label, reg] : pat.outputs) out << "out " << label << " " << reg_name(reg) << "\n";
    for (const AtomicSlot& s : pat.slots) {
        out << s.block << " " << slot_kind_char(s.kind) << " " << (s.dummy ? 1 : 0) << " "
            << reg_name(s.dst) << " " << reg_name(s.src1);
        if (s.kind != SlotKind::N) out << " " << reg_name(s.src2);
        out << "\n";
    }
    return out.str();
}

}  // namespace atomkp
