/* report.hpp - CSV tables and SVG envelope plots for scan results.
 *
 * The bucket CSV has one row per window (1..6) and one column per gap
 * bucket; the streak CSV has columns s=2 and s>2.  The SVG plot draws the
 * per-index min/max envelopes of the doubling and addition sets, in the
 * style of an oscilloscope screenshot.  All numeric formatting goes through
 * snprintf with fixed precision so outputs are byte-stable.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "atomkp/sca.hpp"

namespace atomkp {

namespace detail {

inline std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

}  // namespace detail

inline void write_bucket_csv(const BucketTable& table, std::ostream& out) {
    const auto& e = table.thresholds.edges;
    out << "window,v<=" << detail::fmt("%g", e[0]) << "," << detail::fmt("%g", e[0]) << "<v<="
        << detail::fmt("%g", e[1]) << "," << detail::fmt("%g", e[1]) << "<v<="
        << detail::fmt("%g", e[2]) << ",v>" << detail::fmt("%g", e[2]) << "\n";
    for (int w = 0; w < kMaxWindow; w++) {
        out << (w + 1);
        for (std::size_t b = 0; b < 4; b++) out << "," << table.counts[static_cast<std::size_t>(w)][b];
        out << "\n";
    }
}

inline void write_streak_csv(const StreakTable& table, std::ostream& out) {
    out << "window,s=2,s>2\n";
    for (int w = 0; w < kMaxWindow; w++) {
        std::uint64_t two = 0, more = 0;
        for (const auto& [len, count] : table.runs[static_cast<std::size_t>(w)]) {
            if (len == 2) two += count;
            else if (len > 2) more += count;
        }
        out << (w + 1) << "," << two << "," << more << "\n";
    }
}

// min/max envelopes of both sets as four polylines; long ranges are strided
// down to at most max_points vertices per line
inline void write_envelope_svg(const Envelope& d_env, const Envelope& a_env, std::ostream& out,
                               const std::string& title = "separation envelopes",
                               std::size_t max_points = 2000) {
    const int width = 1000, height = 420;
    const int ml = 60, mr = 15, mt = 30, mb = 35;

    double lo = 0, hi = 0;
    bool first = true;
    for (const Envelope* env : {&d_env, &a_env}) {
        for (const auto* v : {&env->min_v, &env->max_v}) {
            for (double s : *v) {
                if (first) {
                    lo = hi = s;
                    first = false;
                } else {
                    lo = std::min(lo, s);
                    hi = std::max(hi, s);
                }
            }
        }
    }
    if (first) {
        lo = 0;
        hi = 1;
    }
    if (hi <= lo) hi = lo + 1e-9;
    double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;

    std::uint64_t x0 = std::min(d_env.begin, a_env.begin);
    std::uint64_t x1 = std::max(d_env.begin + d_env.min_v.size(), a_env.begin + a_env.min_v.size());
    if (x1 <= x0) x1 = x0 + 1;

    auto map_x = [&](double idx) {
        return ml + (idx - static_cast<double>(x0)) / static_cast<double>(x1 - x0) * (width - ml - mr);
    };
    auto map_y = [&](double v) { return mt + (hi - v) / (hi - lo) * (height - mt - mb); };

    auto polyline = [&](const Envelope& env, const std::vector<double>& v, const char* color) {
        std::size_t stride = v.size() > max_points ? (v.size() + max_points - 1) / max_points : 1;
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < v.size(); i += stride) {
            out << detail::fmt("%.2f", map_x(static_cast<double>(env.begin + i))) << ","
                << detail::fmt("%.2f", map_y(v[i])) << " ";
        }
        out << "\"/>\n";
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << ml << "\" y=\"18\" font-family=\"monospace\" font-size=\"13\">" << title
        << "</text>\n";
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (width - ml - mr)
        << "\" height=\"" << (height - mt - mb) << "\" fill=\"none\" stroke=\"#999\"/>\n";
    // axis labels: sample range and amplitude range
    out << "<text x=\"" << ml << "\" y=\"" << (height - 10)
        << "\" font-family=\"monospace\" font-size=\"11\">" << x0 << "</text>\n";
    out << "<text x=\"" << (width - mr - 80) << "\" y=\"" << (height - 10)
        << "\" font-family=\"monospace\" font-size=\"11\">" << x1 << "</text>\n";
    out << "<text x=\"4\" y=\"" << (mt + 10) << "\" font-family=\"monospace\" font-size=\"11\">"
        << detail::fmt("%.4g", hi) << "</text>\n";
    out << "<text x=\"4\" y=\"" << (height - mb) << "\" font-family=\"monospace\" font-size=\"11\">"
        << detail::fmt("%.4g", lo) << "</text>\n";
    polyline(d_env, d_env.min_v, "#1f77b4");
    polyline(d_env, d_env.max_v, "#1f77b4");
    polyline(a_env, a_env.min_v, "#d62728");
    polyline(a_env, a_env.max_v, "#d62728");
    out << "<text x=\"" << (width - mr - 260) << "\" y=\"18\" font-family=\"monospace\" "
        << "font-size=\"11\" fill=\"#1f77b4\">doubling min/max</text>\n";
    out << "<text x=\"" << (width - mr - 130) << "\" y=\"18\" font-family=\"monospace\" "
        << "font-size=\"11\" fill=\"#d62728\">addition min/max</text>\n";
    out << "</svg>\n";
}

}  // namespace atomkp
