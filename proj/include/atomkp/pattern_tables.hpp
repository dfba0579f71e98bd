/* pattern_tables.hpp - the shipped atomic-pattern assets.
 *
 * Patterns are data.  Each table below is the line-oriented text asset
 * (see pattern.hpp for the grammar), parsed once on first use.  The two
 * *_original tables carry the known-bad register bindings and exist as
 * negative fixtures; everything else is the corrected set.
 *
 * Dummy-slot convention: every * slot performs a real operation of the
 * block-mandated kind writing to the dedicated dummy register T0.  Where
 * the counterpart pattern (doubling vs mixed addition, same block/slot
 * position) has a real operation, the dummy mirrors its source operands;
 * where both sides are dummy or no counterpart exists, sources are T0.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#pragma once

#include <string_view>

#include "atomkp/pattern.hpp"

namespace atomkp {

// --- point doubling, MNAMNAA, 4 blocks ------------------------------------
// Jacobian doubling for a = -3 curves; final Δ4 slot is T2 = T2 + T5.
inline constexpr const char* k_asset_doubling = R"ASSET(pattern doubling
shape MNAMNAA
blocks 4
in X1 T1
in Y1 T2
in Z1 T3
out X3 T1
out Y3 T2
out Z3 T3
1 M 0 T4 T3 T3
1 N 1 T0 T0
1 A 0 T5 T1 T4
1 M 0 T6 T2 T2
1 N 0 T4 T4
1 A 0 T2 T2 T2
1 A 0 T4 T1 T4
2 M 0 T5 T4 T5
2 N 1 T0 T0
2 A 0 T4 T5 T5
2 M 0 T3 T2 T3
2 N 1 T0 T0
2 A 0 T4 T4 T5
2 A 0 T2 T6 T6
3 M 0 T5 T4 T4
3 N 1 T0 T0
3 A 0 T6 T2 T2
3 M 0 T6 T1 T6
3 N 0 T1 T6
3 A 0 T1 T1 T1
3 A 0 T1 T1 T5
4 M 0 T2 T2 T2
4 N 0 T5 T1
4 A 0 T5 T5 T6
4 M 0 T5 T4 T5
4 N 0 T2 T2
4 A 0 T2 T2 T2
4 A 0 T2 T2 T5
)ASSET";

// --- mixed addition (Jacobian + affine), MNAMNAA, 6 blocks -----------------
// Emits the co-Z byproducts X1', Y1' in T7, T8 for a later special addition.
// Corrected slots: Δ2 T8 = T7 + T7, Δ4 T1 = T10 + T8, Δ5 T6 = T6 x T4.
inline constexpr const char* k_asset_mixed_add = R"ASSET(pattern mixed_add
shape MNAMNAA
blocks 6
in X1 T1
in Y1 T2
in Z1 T3
in X2 Tx
in Y2 Ty
out X3 T1
out Y3 T2
out Z3 T3
out X1p T7
out Y1p T8
1 M 0 T4 T3 T3
1 N 1 T0 T0
1 A 1 T0 T1 T4
1 M 0 T5 Tx T4
1 N 0 T6 T1
1 A 0 T5 T5 T6
1 A 1 T0 T1 T4
2 M 0 T6 T5 T5
2 N 1 T0 T0
2 A 1 T0 T5 T5
2 M 0 T7 T1 T6
2 N 1 T0 T0
2 A 0 T8 T7 T7
2 A 1 T0 T6 T6
3 M 0 T9 T5 T6
3 N 1 T0 T0
3 A 0 T8 T8 T9
3 M 0 T4 T3 T4
3 N 1 T0 T6
3 A 1 T0 T1 T1
3 A 1 T0 T1 T5
4 M 0 T4 Ty T4
4 N 0 T10 T2
4 A 0 T4 T4 T10
4 M 0 T10 T4 T4
4 N 0 T8 T8
4 A 0 T1 T10 T8
4 A 1 T0 T2 T5
5 M 0 T8 T2 T9
5 N 0 T6 T1
5 A 0 T6 T6 T7
5 M 0 T6 T6 T4
5 N 0 T9 T8
5 A 0 T2 T6 T9
5 A 1 T0 T0 T0
6 M 0 T3 T3 T5
6 N 0 T4 T7
6 A 0 T4 T1 T4
6 M 0 T5 T4 T4
6 N 0 T6 T8
6 A 0 T6 T2 T6
6 A 1 T0 T0 T0
)ASSET";

// --- special (co-Z) addition, MNAMNAA, 4 blocks ----------------------------
// Adds two points sharing one Z; consumes the mixed-addition byproducts.
inline constexpr const char* k_asset_special_add = R"ASSET(pattern special_add
shape MNAMNAA
blocks 4
in X2 T1
in Y2 T2
in Z T3
in X1p T7
in Y1p T8
out X3 T1
out Y3 T2
out Z3 T3
1 M 1 T0 T0 T0
1 N 0 T4 T7
1 A 0 T4 T1 T4
1 M 0 T5 T4 T4
1 N 0 T6 T8
1 A 0 T6 T2 T6
1 A 1 T0 T0 T0
2 M 0 T7 T5 T7
2 N 1 T0 T0
2 A 0 T9 T7 T7
2 M 0 T5 T4 T5
2 N 1 T0 T0
2 A 0 T9 T5 T9
2 A 1 T0 T0 T0
3 M 0 T1 T6 T6
3 N 0 T9 T9
3 A 0 T1 T1 T9
3 M 0 T2 T5 T8
3 N 0 T5 T1
3 A 0 T5 T5 T7
3 A 1 T0 T0 T0
4 M 0 T5 T5 T6
4 N 0 T2 T2
4 A 0 T2 T2 T5
4 M 0 T3 T3 T4
4 N 1 T0 T0
4 A 1 T0 T0 T0
4 A 1 T0 T0 T0
)ASSET";

// --- point tripling, MNAMNAA, 8 blocks -------------------------------------
// Co-Z tripling; T7, T8 pick up 2P as a byproduct, scaled to the Z in effect
// before the final block updates it (so 2P up to a Z rescale).  The Δ6
// multiplication is T5 = T1 x T5: at that point T1 holds D and T5 holds D^2,
// so the product is +D^3, which is what the Δ6/Δ7 recombination consumes.
inline constexpr const char* k_asset_tripling = R"ASSET(pattern tripling
shape MNAMNAA
blocks 8
in X1 T1
in Y1 T2
in Z1 T3
out X3 T1
out Y3 T2
out Z3 T3
out X2 T7
out Y2 T8
1 M 0 T4 T3 T3
1 N 1 T0 T0
1 A 0 T3 T3 T3
1 M 0 T3 T2 T3
1 N 0 T5 T4
1 A 0 T4 T1 T4
1 A 0 T5 T1 T5
2 M 0 T4 T4 T5
2 N 1 T0 T0
2 A 0 T5 T4 T4
2 M 0 T2 T2 T2
2 N 1 T0 T0
2 A 0 T4 T4 T5
2 A 0 T2 T2 T2
3 M 0 T5 T4 T4
3 N 1 T0 T0
3 A 0 T1 T1 T1
3 M 0 T6 T1 T2
3 N 0 T1 T6
3 A 0 T1 T1 T1
3 A 0 T7 T1 T5
4 M 0 T2 T2 T2
4 N 0 T1 T7
4 A 0 T1 T1 T6
4 M 0 T4 T1 T4
4 N 0 T2 T2
4 A 0 T2 T2 T2
4 A 0 T8 T2 T4
5 M 0 T5 T1 T1
5 N 1 T0 T0
5 A 0 T4 T2 T8
5 M 0 T6 T5 T6
5 N 0 T9 T1
5 A 1 T0 T0 T0
5 A 1 T0 T0 T0
6 M 0 T5 T1 T5
6 N 1 T0 T0
6 A 0 T1 T6 T6
6 M 0 T10 T4 T4
6 N 0 T1 T1
6 A 0 T1 T1 T5
6 A 0 T1 T1 T10
7 M 0 T5 T2 T5
7 N 0 T10 T1
7 A 0 T2 T6 T10
7 M 0 T2 T2 T4
7 N 0 T5 T5
7 A 0 T2 T2 T5
7 A 1 T0 T0 T0
8 M 0 T3 T3 T9
8 N 0 T4 T7
8 A 0 T4 T1 T4
8 M 0 T5 T4 T4
8 N 0 T6 T8
8 A 0 T6 T2 T6
8 A 1 T0 T0 T0
)ASSET";

// --- mixed addition, MANA, 11 blocks ---------------------------------------
// Same formula as the MNAMNAA variant spread over M,A,N,A blocks.  The Δ4
// and Δ8 additions are T8 = T7 + T7 (2X1 x h^2) and T1 = T10 + T8 (X3);
// T10 holds B^2 at Δ8, whatever label the derivation uses for it.
inline constexpr const char* k_asset_mixed_add_mana = R"ASSET(pattern mixed_add_mana
shape MANA
blocks 11
in X1 T1
in Y1 T2
in Z1 T3
in X2 Tx
in Y2 Ty
out X3 T1
out Y3 T2
out Z3 T3
out X1p T7
out Y1p T8
1 M 0 T4 T3 T3
1 A 1 T0 T0 T0
1 N 1 T0 T0
1 A 1 T0 T0 T0
2 M 0 T5 Tx T4
2 A 1 T0 T0 T0
2 N 0 T6 T1
2 A 0 T5 T5 T6
3 M 0 T6 T5 T5
3 A 1 T0 T0 T0
3 N 1 T0 T0
3 A 1 T0 T0 T0
4 M 0 T7 T1 T6
4 A 0 T8 T7 T7
4 N 1 T0 T0
4 A 1 T0 T0 T0
5 M 0 T9 T5 T6
5 A 0 T8 T8 T9
5 N 1 T0 T0
5 A 1 T0 T0 T0
6 M 0 T4 T3 T4
6 A 1 T0 T0 T0
6 N 1 T0 T0
6 A 1 T0 T0 T0
7 M 0 T4 Ty T4
7 A 1 T0 T0 T0
7 N 0 T10 T2
7 A 0 T4 T4 T10
8 M 0 T10 T4 T4
8 A 1 T0 T0 T0
8 N 0 T8 T8
8 A 0 T1 T10 T8
9 M 0 T8 T2 T9
9 A 1 T0 T0 T0
9 N 0 T6 T1
9 A 0 T6 T6 T7
10 M 0 T6 T6 T4
10 A 1 T0 T0 T0
10 N 0 T9 T8
10 A 0 T2 T6 T9
11 M 0 T3 T3 T5
11 A 1 T0 T0 T0
11 N 0 T4 T7
11 A 0 T4 T1 T4
)ASSET";

// --- special (co-Z) addition, MANA, 8 blocks -------------------------------
inline constexpr const char* k_asset_special_add_mana = R"ASSET(pattern special_add_mana
shape MANA
blocks 8
in X2 T1
in Y2 T2
in Z T3
in X1p T7
in Y1p T8
out X3 T1
out Y3 T2
out Z3 T3
1 M 1 T0 T0 T0
1 A 1 T0 T0 T0
1 N 0 T4 T7
1 A 0 T4 T1 T4
2 M 0 T5 T4 T4
2 A 1 T0 T0 T0
2 N 0 T6 T8
2 A 0 T6 T2 T6
3 M 0 T7 T5 T7
3 A 0 T9 T7 T7
3 N 1 T0 T0
3 A 1 T0 T0 T0
4 M 0 T5 T4 T5
4 A 0 T9 T5 T9
4 N 1 T0 T0
4 A 1 T0 T0 T0
5 M 0 T1 T6 T6
5 A 1 T0 T0 T0
5 N 0 T9 T9
5 A 0 T1 T1 T9
6 M 0 T2 T5 T8
6 A 1 T0 T0 T0
6 N 0 T5 T1
6 A 0 T5 T5 T7
7 M 0 T5 T5 T6
7 A 1 T0 T0 T0
7 N 0 T2 T2
7 A 0 T2 T2 T5
8 M 0 T3 T3 T4
8 A 1 T0 T0 T0
8 N 1 T0 T0
8 A 1 T0 T0 T0
)ASSET";

// --- point tripling, MANA, 15 blocks ---------------------------------------
// Δ11 multiplication is T5 = T1 x T5 (+D^3), same reasoning as the MNAMNAA
// tripling's Δ6 slot.
inline constexpr const char* k_asset_tripling_mana = R"ASSET(pattern tripling_mana
shape MANA
blocks 15
in X1 T1
in Y1 T2
in Z1 T3
out X3 T1
out Y3 T2
out Z3 T3
out X2 T7
out Y2 T8
1 M 0 T4 T3 T3
1 A 0 T3 T3 T3
1 N 0 T5 T4
1 A 1 T0 T0 T0
2 M 0 T3 T2 T3
2 A 0 T4 T1 T4
2 N 1 T0 T0
2 A 0 T5 T1 T5
3 M 0 T4 T4 T5
3 A 0 T5 T4 T4
3 N 1 T0 T0
3 A 1 T0 T0 T0
4 M 0 T2 T2 T2
4 A 0 T4 T4 T5
4 N 1 T0 T0
4 A 0 T2 T2 T2
5 M 0 T5 T4 T4
5 A 0 T1 T1 T1
5 N 1 T0 T0
5 A 1 T0 T0 T0
6 M 0 T6 T1 T2
6 A 1 T0 T0 T0
6 N 0 T1 T6
6 A 0 T1 T1 T1
7 M 0 T2 T2 T2
7 A 0 T7 T1 T5
7 N 0 T1 T7
7 A 0 T1 T1 T6
8 M 0 T4 T1 T4
8 A 1 T0 T0 T0
8 N 0 T2 T2
8 A 0 T2 T2 T2
9 M 0 T5 T1 T1
9 A 0 T8 T2 T4
9 N 1 T0 T0
9 A 0 T4 T2 T8
10 M 0 T6 T5 T6
10 A 1 T0 T0 T0
10 N 0 T9 T1
10 A 1 T0 T0 T0
11 M 0 T5 T1 T5
11 A 0 T1 T6 T6
11 N 0 T1 T1
11 A 0 T1 T1 T5
12 M 0 T10 T4 T4
12 A 0 T1 T1 T10
12 N 0 T10 T1
12 A 1 T0 T0 T0
13 M 0 T5 T2 T5
13 A 0 T2 T6 T10
13 N 1 T0 T0
13 A 1 T0 T0 T0
14 M 0 T2 T2 T4
14 A 1 T0 T0 T0
14 N 0 T5 T5
14 A 0 T2 T2 T5
15 M 0 T3 T3 T9
15 A 1 T0 T0 T0
15 N 0 T4 T7
15 A 0 T4 T1 T4
)ASSET";

// --- uncorrected doubling (negative fixture) --------------------------------
// Differs from the corrected table in the final Δ4 slot only: T2 = T2 + T4.
inline constexpr const char* k_asset_doubling_original = R"ASSET(pattern doubling_original
shape MNAMNAA
blocks 4
in X1 T1
in Y1 T2
in Z1 T3
out X3 T1
out Y3 T2
out Z3 T3
1 M 0 T4 T3 T3
1 N 1 T0 T0
1 A 0 T5 T1 T4
1 M 0 T6 T2 T2
1 N 0 T4 T4
1 A 0 T2 T2 T2
1 A 0 T4 T1 T4
2 M 0 T5 T4 T5
2 N 1 T0 T0
2 A 0 T4 T5 T5
2 M 0 T3 T2 T3
2 N 1 T0 T0
2 A 0 T4 T4 T5
2 A 0 T2 T6 T6
3 M 0 T5 T4 T4
3 N 1 T0 T0
3 A 0 T6 T2 T2
3 M 0 T6 T1 T6
3 N 0 T1 T6
3 A 0 T1 T1 T1
3 A 0 T1 T1 T5
4 M 0 T2 T2 T2
4 N 0 T5 T1
4 A 0 T5 T5 T6
4 M 0 T5 T4 T5
4 N 0 T2 T2
4 A 0 T2 T2 T2
4 A 0 T2 T2 T4
)ASSET";

// --- uncorrected mixed addition (negative fixture) ---------------------------
// Differs in three slots: Δ2 T8 = T1 + T1, Δ4 T1 = T6 + T8, Δ5 T6 = T6 x T10.
inline constexpr const char* k_asset_mixed_add_original = R"ASSET(pattern mixed_add_original
shape MNAMNAA
blocks 6
in X1 T1
in Y1 T2
in Z1 T3
in X2 Tx
in Y2 Ty
out X3 T1
out Y3 T2
out Z3 T3
out X1p T7
out Y1p T8
1 M 0 T4 T3 T3
1 N 1 T0 T0
1 A 1 T0 T1 T4
1 M 0 T5 Tx T4
1 N 0 T6 T1
1 A 0 T5 T5 T6
1 A 1 T0 T1 T4
2 M 0 T6 T5 T5
2 N 1 T0 T0
2 A 1 T0 T5 T5
2 M 0 T7 T1 T6
2 N 1 T0 T0
2 A 0 T8 T1 T1
2 A 1 T0 T6 T6
3 M 0 T9 T5 T6
3 N 1 T0 T0
3 A 0 T8 T8 T9
3 M 0 T4 T3 T4
3 N 1 T0 T6
3 A 1 T0 T1 T1
3 A 1 T0 T1 T5
4 M 0 T4 Ty T4
4 N 0 T10 T2
4 A 0 T4 T4 T10
4 M 0 T10 T4 T4
4 N 0 T8 T8
4 A 0 T1 T6 T8
4 A 1 T0 T2 T5
5 M 0 T8 T2 T9
5 N 0 T6 T1
5 A 0 T6 T6 T7
5 M 0 T6 T6 T10
5 N 0 T9 T8
5 A 0 T2 T6 T9
5 A 1 T0 T0 T0
6 M 0 T3 T3 T5
6 N 0 T4 T7
6 A 0 T4 T1 T4
6 M 0 T5 T4 T4
6 N 0 T6 T8
6 A 0 T6 T2 T6
6 A 1 T0 T0 T0
)ASSET";

// ---------------------------------------------------------------------------
// parse-once accessors

inline const AtomicPattern& pattern_doubling_mnamnaa() {
    static const AtomicPattern p = parse_pattern(k_asset_doubling);
    return p;
}
inline const AtomicPattern& pattern_mixed_add_mnamnaa() {
    static const AtomicPattern p = parse_pattern(k_asset_mixed_add);
    return p;
}
inline const AtomicPattern& pattern_special_add_mnamnaa() {
    static const AtomicPattern p = parse_pattern(k_asset_special_add);
    return p;
}
inline const AtomicPattern& pattern_tripling_mnamnaa() {
    static const AtomicPattern p = parse_pattern(k_asset_tripling);
    return p;
}
inline const AtomicPattern& pattern_mixed_add_mana() {
    static const AtomicPattern p = parse_pattern(k_asset_mixed_add_mana);
    return p;
}
inline const AtomicPattern& pattern_special_add_mana() {
    static const AtomicPattern p = parse_pattern(k_asset_special_add_mana);
    return p;
}
inline const AtomicPattern& pattern_tripling_mana() {
    static const AtomicPattern p = parse_pattern(k_asset_tripling_mana);
    return p;
}
inline const AtomicPattern& pattern_doubling_original() {
    static const AtomicPattern p = parse_pattern(k_asset_doubling_original);
    return p;
}
inline const AtomicPattern& pattern_mixed_add_original() {
    static const AtomicPattern p = parse_pattern(k_asset_mixed_add_original);
    return p;
}

struct PatternAsset {
    const char* name;
    const char* text;
};

inline const std::vector<PatternAsset>& all_pattern_assets() {
    static const std::vector<PatternAsset> assets = {
        {"doubling", k_asset_doubling},
        {"mixed_add", k_asset_mixed_add},
        {"special_add", k_asset_special_add},
        {"tripling", k_asset_tripling},
        {"mixed_add_mana", k_asset_mixed_add_mana},
        {"special_add_mana", k_asset_special_add_mana},
        {"tripling_mana", k_asset_tripling_mana},
        {"doubling_original", k_asset_doubling_original},
        {"mixed_add_original", k_asset_mixed_add_original},
    };
    return assets;
}

}  // namespace atomkp
