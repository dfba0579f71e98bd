/* field.hpp - P-256 prime-field arithmetic on 64-bit limbs.
 *
 * Montgomery representation with R = 2^256 (4 limbs x 64 bit).  Every public
 * routine executes a fixed, input-independent sequence of word primitives;
 * reductions select between candidate results with whole-word masks instead
 * of branching on data.  A thread-local step counter can be attached so tests
 * can assert that uniformity.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace atomkp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr std::size_t kWordBits = 64;
inline constexpr std::size_t kWords = 4;

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// step instrumentation

enum class StepKind : std::uint8_t { MulWide = 0, AddCarry, SubBorrow, MaskSelect };

struct StepCounter {
    std::array<u64, 4> counts{};
    u64 total = 0;
    u64 seq_hash = 1469598103934665603ull;  // FNV-1a offset basis

    void record(StepKind k) {
        counts[static_cast<std::size_t>(k)]++;
        total++;
        seq_hash = (seq_hash ^ (static_cast<u64>(k) + 1)) * 1099511628211ull;
    }
    bool operator==(const StepCounter&) const = default;
};

inline thread_local StepCounter* tl_step_counter = nullptr;

struct ScopedStepCounter {
    explicit ScopedStepCounter(StepCounter& c) { tl_step_counter = &c; }
    ~ScopedStepCounter() { tl_step_counter = nullptr; }
};

inline void step(StepKind k) {
    if (tl_step_counter) tl_step_counter->record(k);
}

// ---------------------------------------------------------------------------
// word primitives

inline u64 addc(u64 a, u64 b, u64& carry) {
    step(StepKind::AddCarry);
    u128 t = static_cast<u128>(a) + b + carry;
    carry = static_cast<u64>(t >> kWordBits);
    return static_cast<u64>(t);
}

inline u64 subb(u64 a, u64 b, u64& borrow) {
    step(StepKind::SubBorrow);
    u128 t = static_cast<u128>(a) - b - borrow;
    borrow = static_cast<u64>(t >> kWordBits) & 1;
    return static_cast<u64>(t);
}

// t + a*b + carry -> (low word, new carry); one multiply, one wide add
inline u64 mac(u64 t, u64 a, u64 b, u64& carry) {
    step(StepKind::MulWide);
    step(StepKind::AddCarry);
    u128 acc = static_cast<u128>(a) * b + t + carry;
    carry = static_cast<u64>(acc >> kWordBits);
    return static_cast<u64>(acc);
}

inline u64 mul_low(u64 a, u64 b) {
    step(StepKind::MulWide);
    return a * b;
}

// mask is all-ones or all-zeros; returns mask ? a : b
inline u64 mask_select(u64 mask, u64 a, u64 b) {
    step(StepKind::MaskSelect);
    return (a & mask) | (b & ~mask);
}

// ---------------------------------------------------------------------------

struct FieldElement {
    std::array<u64, kWords> w{};  // little-endian limbs; reduced values are < p

    bool operator==(const FieldElement&) const = default;
    bool is_zero() const { return w[0] == 0 && w[1] == 0 && w[2] == 0 && w[3] == 0; }
};

// plain (non-masked) comparison, for tests and validation only
inline bool field_less(const FieldElement& a, const FieldElement& b) {
    for (std::size_t i = kWords; i-- > 0;) {
        if (a.w[i] != b.w[i]) return a.w[i] < b.w[i];
    }
    return false;
}

struct FieldParams {
    FieldElement p;         // field prime
    FieldElement a, b;      // curve coefficients, standard domain
    FieldElement order;     // group order, bounds valid scalars
    FieldElement gx, gy;    // generator, standard domain
    FieldElement r_mod_p;   // R mod p      (Montgomery image of 1)
    FieldElement r2_mod_p;  // R^2 mod p    (to-Montgomery multiplier)
    u64 p_inv_neg = 0;      // -p^-1 mod 2^64

    static const FieldParams& p256();
};

// ---------------------------------------------------------------------------
// Montgomery multiplication, SOS flavour: full 8-word product first, then a
// separated reduction pass.  Ends with a masked conditional subtraction.

inline FieldElement mont_mul(const FieldElement& x, const FieldElement& y, const FieldParams& P) {
    u64 t[2 * kWords + 1] = {0};

    for (std::size_t i = 0; i < kWords; i++) {
        u64 carry = 0;
        for (std::size_t j = 0; j < kWords; j++) {
            t[i + j] = mac(t[i + j], x.w[i], y.w[j], carry);
        }
        t[i + kWords] = carry;  // untouched so far, plain store
    }

    for (std::size_t i = 0; i < kWords; i++) {
        u64 m = mul_low(t[i], P.p_inv_neg);
        u64 carry = 0;
        for (std::size_t j = 0; j < kWords; j++) {
            t[i + j] = mac(t[i + j], m, P.p.w[j], carry);
        }
        // propagate through every remaining word; fixed trip count
        for (std::size_t k = i + kWords; k <= 2 * kWords; k++) {
            u64 c = 0;
            t[k] = addc(t[k], carry, c);
            carry = c;
        }
    }

    // u = t >> 256 lives in t[4..8], u < 2p; subtract p and mask-select
    u64 borrow = 0;
    u64 d[kWords];
    for (std::size_t j = 0; j < kWords; j++) {
        d[j] = subb(t[kWords + j], P.p.w[j], borrow);
    }
    u64 top = 0;
    top = subb(t[2 * kWords], 0, borrow);
    (void)top;

    FieldElement r;
    u64 keep_d = borrow - 1;  // borrow==0 -> all-ones -> take d
    for (std::size_t j = 0; j < kWords; j++) {
        r.w[j] = mask_select(keep_d, d[j], t[kWords + j]);
    }
    return r;
}

inline FieldElement field_add(const FieldElement& x, const FieldElement& y, const FieldParams& P) {
    FieldElement s, d, r;
    u64 carry = 0;
    for (std::size_t j = 0; j < kWords; j++) s.w[j] = addc(x.w[j], y.w[j], carry);
    u64 borrow = 0;
    for (std::size_t j = 0; j < kWords; j++) d.w[j] = subb(s.w[j], P.p.w[j], borrow);
    // reduce when the raw sum overflowed 2^256 or is >= p
    u64 keep_d = static_cast<u64>(0) - (carry | (borrow ^ 1));
    for (std::size_t j = 0; j < kWords; j++) r.w[j] = mask_select(keep_d, d.w[j], s.w[j]);
    return r;
}

inline FieldElement field_neg(const FieldElement& x, const FieldParams& P) {
    FieldElement d, r;
    u64 borrow = 0;
    for (std::size_t j = 0; j < kWords; j++) d.w[j] = subb(P.p.w[j], x.w[j], borrow);
    // -0 must stay 0, not p; fold limbs and build an is-nonzero mask
    u64 nz = x.w[0] | x.w[1] | x.w[2] | x.w[3];
    u64 keep_d = static_cast<u64>(0) - ((nz | (static_cast<u64>(0) - nz)) >> (kWordBits - 1));
    for (std::size_t j = 0; j < kWords; j++) r.w[j] = mask_select(keep_d, d.w[j], 0);
    return r;
}

inline FieldElement to_mont(const FieldElement& x, const FieldParams& P) {
    return mont_mul(x, P.r2_mod_p, P);
}

inline FieldElement from_mont(const FieldElement& x, const FieldParams& P) {
    FieldElement one;
    one.w[0] = 1;
    return mont_mul(x, one, P);
}

// Standard-domain product, exactly the two-step sequence the pattern executor
// performs per M slot: mont_mul(x, y) followed by mont_mul(result, R^2).
inline FieldElement field_mul(const FieldElement& x, const FieldElement& y, const FieldParams& P) {
    return mont_mul(mont_mul(x, y, P), P.r2_mod_p, P);
}

// Fermat inversion (a^(p-2)); conversion-path helper, not operation-uniform.
inline FieldElement field_inv(const FieldElement& x, const FieldParams& P) {
    if (x.is_zero()) throw FieldError("field_inv: zero has no inverse");
    FieldElement e = P.p;
    e.w[0] -= 2;  // p is odd with full low limb, no borrow
    FieldElement base = to_mont(x, P);
    FieldElement acc = P.r_mod_p;
    for (int i = static_cast<int>(kWords * kWordBits) - 1; i >= 0; --i) {
        acc = mont_mul(acc, acc, P);
        if ((e.w[static_cast<std::size_t>(i) / kWordBits] >> (static_cast<std::size_t>(i) % kWordBits)) & 1) {
            acc = mont_mul(acc, base, P);
        }
    }
    return from_mont(acc, P);
}

// ---------------------------------------------------------------------------
// serialization: 32-byte big-endian, plus hex convenience wrappers

inline std::array<std::uint8_t, 32> to_bytes32(const FieldElement& x) {
    std::array<std::uint8_t, 32> out{};
    for (std::size_t i = 0; i < kWords; i++) {
        u64 limb = x.w[kWords - 1 - i];
        for (std::size_t b = 0; b < 8; b++) {
            out[i * 8 + b] = static_cast<std::uint8_t>(limb >> (56 - 8 * b));
        }
    }
    return out;
}

inline FieldElement from_bytes32(const std::array<std::uint8_t, 32>& in, const FieldParams& P) {
    FieldElement x;
    for (std::size_t i = 0; i < kWords; i++) {
        u64 limb = 0;
        for (std::size_t b = 0; b < 8; b++) {
            limb = (limb << 8) | in[i * 8 + b];
        }
        x.w[kWords - 1 - i] = limb;
    }
    if (!field_less(x, P.p)) throw FieldError("from_bytes32: value not below the field prime");
    return x;
}

inline std::string to_hex(const FieldElement& x) {
    static const char* digits = "0123456789abcdef";
    auto bytes = to_bytes32(x);
    std::string s(64, '0');
    for (std::size_t i = 0; i < 32; i++) {
        s[2 * i] = digits[bytes[i] >> 4];
        s[2 * i + 1] = digits[bytes[i] & 0xf];
    }
    return s;
}

inline FieldElement from_hex(std::string_view hex, const FieldParams& P) {
    if (hex.substr(0, 2) == "0x" || hex.substr(0, 2) == "0X") hex.remove_prefix(2);
    if (hex.empty() || hex.size() > 64) throw FieldError("from_hex: bad length");
    std::array<std::uint8_t, 32> bytes{};
    std::size_t off = 64 - hex.size();
    for (std::size_t i = 0; i < hex.size(); i++) {
        char c = hex[i];
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw FieldError("from_hex: bad digit");
        std::size_t pos = off + i;
        bytes[pos / 2] |= static_cast<std::uint8_t>(pos % 2 ? v : v << 4);
    }
    return from_bytes32(bytes, P);
}

// ---------------------------------------------------------------------------

inline const FieldParams& FieldParams::p256() {
    static const FieldParams params = [] {
        FieldParams P;
        P.p.w = {0xffffffffffffffffull, 0x00000000ffffffffull, 0x0000000000000000ull, 0xffffffff00000001ull};
        P.a = P.p;
        P.a.w[0] -= 3;  // a = p - 3
        P.b.w = {0x3bce3c3e27d2604bull, 0x651d06b0cc53b0f6ull, 0xb3ebbd55769886bcull, 0x5ac635d8aa3a93e7ull};
        P.order.w = {0xf3b9cac2fc632551ull, 0xbce6faada7179e84ull, 0xffffffffffffffffull, 0xffffffff00000000ull};
        P.gx.w = {0xf4a13945d898c296ull, 0x77037d812deb33a0ull, 0xf8bce6e563a440f2ull, 0x6b17d1f2e12c4247ull};
        P.gy.w = {0xcbb6406837bf51f5ull, 0x2bce33576b315eceull, 0x8ee7eb4a7c0f9e16ull, 0x4fe342e2fe1a7f9bull};

        // R mod p = 2^256 - p (p has its top bit set)
        u64 borrow = 0;
        for (std::size_t j = 0; j < kWords; j++) {
            P.r_mod_p.w[j] = subb(0, P.p.w[j], borrow);
        }

        // -p^-1 mod 2^64 by Newton iteration on the low limb
        u64 inv = 1;
        for (int it = 0; it < 6; it++) {
            inv *= 2 - P.p.w[0] * inv;
        }
        P.p_inv_neg = static_cast<u64>(0) - inv;

        // R^2 mod p = (R mod p) doubled 256 times
        FieldElement t = P.r_mod_p;
        for (int i = 0; i < 256; i++) {
            t = field_add(t, t, P);
        }
        P.r2_mod_p = t;
        return P;
    }();
    return params;
}

}  // namespace atomkp
