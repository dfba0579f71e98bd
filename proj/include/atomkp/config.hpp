/* config.hpp - flat key=value configuration files.
 *
 * Format: one "key = value" pair per line, '#' starts a comment, blank
 * lines ignored.  Keys are dotted lowercase ("leakage.noise_sigma").
 * Unknown keys are an error so typos don't silently fall back to defaults.
 *
 * Copyright (c) 2026 the atomkp authors.  MIT licensed, see LICENSE.
 */

#pragma once

#include <cstdint>
#include <cstdlib>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "atomkp/leakage.hpp"
#include "atomkp/scalar_mult.hpp"

namespace atomkp {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// knobs for the analysis side (segmentation, sync, scan, attack)
struct AnalysisConfig {
    double trough_level = 0.0085;
    std::uint64_t min_trough_samples = 1000;
    std::uint64_t anchor_start = 198000;
    std::uint64_t anchor_len = 4000;
    std::uint64_t max_shift = 200;
    std::uint64_t clock_period_samples = 10;
    int scan_window = 1;
    std::uint64_t tolerance_cycles = 100;
};

class Config {
  public:
    Config() = default;

    static Config parse(std::istream& in) {
        Config cfg;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            lineno++;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                auto b = s.find_first_not_of(" \t\r");
                auto e = s.find_last_not_of(" \t\r");
                if (b == std::string::npos) return std::string();
                return s.substr(b, e - b + 1);
            };
            std::string t = trim(line);
            if (t.empty()) continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(t.substr(0, eq));
            std::string val = trim(t.substr(eq + 1));
            if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
            cfg.values_[key] = val;
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& dflt) const {
        auto it = values_.find(key);
        return it == values_.end() ? dflt : it->second;
    }

    double get_double(const std::string& key, double dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        try {
            std::size_t pos = 0;
            double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": expected number, got '" + it->second + "'");
        }
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        try {
            std::size_t pos = 0;
            unsigned long long v = std::stoull(it->second, &pos, 0);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": expected integer, got '" + it->second + "'");
        }
    }

    std::int64_t get_i64(const std::string& key, std::int64_t dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        try {
            std::size_t pos = 0;
            long long v = std::stoll(it->second, &pos, 0);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": expected integer, got '" + it->second + "'");
        }
    }

    bool get_bool(const std::string& key, bool dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        const std::string& v = it->second;
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw ConfigError("config key " + key + ": expected boolean, got '" + v + "'");
    }

    LeakageConfig leakage() const {
        LeakageConfig c;
        c.cycles_x = get_u64("leakage.cycles_x", c.cycles_x);
        c.cycles_xp = get_u64("leakage.cycles_xp", c.cycles_xp);
        c.cycles_n = get_u64("leakage.cycles_n", c.cycles_n);
        c.cycles_a = get_u64("leakage.cycles_a", c.cycles_a);
        c.x_jitter = get_bool("leakage.x_jitter", c.x_jitter);
        c.x_jitter_low = get_u64("leakage.x_jitter_low", c.x_jitter_low);
        c.x_jitter_low_prob = get_double("leakage.x_jitter_low_prob", c.x_jitter_low_prob);
        c.cycles_per_nop = get_u64("leakage.cycles_per_nop", c.cycles_per_nop);
        c.nop_jitter = get_bool("leakage.nop_jitter", c.nop_jitter);
        c.samples_per_cycle = get_u64("leakage.samples_per_cycle", c.samples_per_cycle);
        c.clock_hz = get_double("leakage.clock_hz", c.clock_hz);
        c.noise_sigma = get_double("leakage.noise_sigma", c.noise_sigma);
        c.hw_coeff = get_double("leakage.hw_coeff", c.hw_coeff);
        c.baseline_active = get_double("leakage.baseline_active", c.baseline_active);
        c.baseline_nop = get_double("leakage.baseline_nop", c.baseline_nop);
        c.rng_seed = get_u64("leakage.rng_seed", c.rng_seed);
        c.addition_d1_extra_cycles =
            static_cast<std::int32_t>(get_i64("inject.addition_d1_extra_cycles", c.addition_d1_extra_cycles));
        c.addition_d1_amp_offset = get_double("inject.addition_d1_amp_offset", c.addition_d1_amp_offset);
        c.addition_d1_amp_begin = get_u64("inject.addition_d1_amp_begin", c.addition_d1_amp_begin);
        c.addition_d1_amp_end = get_u64("inject.addition_d1_amp_end", c.addition_d1_amp_end);
        c.doubling1_offset = get_bool("inject.doubling1_offset", c.doubling1_offset);
        c.doubling1_delta_cycles =
            static_cast<std::int32_t>(get_i64("inject.doubling1_delta_cycles", c.doubling1_delta_cycles));
        c.validate();
        return c;
    }

    KPOptions kp_options() const {
        KPOptions o;
        std::string variant = get_string("kp.patterns", "corrected");
        if (variant == "corrected") o.variant = PatternVariant::Corrected;
        else if (variant == "original") o.variant = PatternVariant::Original;
        else throw ConfigError("config key kp.patterns: expected corrected|original, got '" + variant + "'");
        o.markers = get_bool("kp.markers", o.markers);
        o.nops_intra_block = get_u64("kp.nops_intra_block", o.nops_intra_block);
        o.nops_inter_op = get_u64("kp.nops_inter_op", o.nops_inter_op);
        o.nops_double_double = get_u64("kp.nops_double_double", o.nops_double_double);
        return o;
    }

    AnalysisConfig analysis() const {
        AnalysisConfig c;
        c.trough_level = get_double("analysis.trough_level", c.trough_level);
        c.min_trough_samples = get_u64("analysis.min_trough_samples", c.min_trough_samples);
        c.anchor_start = get_u64("analysis.anchor_start", c.anchor_start);
        c.anchor_len = get_u64("analysis.anchor_len", c.anchor_len);
        c.max_shift = get_u64("analysis.max_shift", c.max_shift);
        c.clock_period_samples = get_u64("analysis.clock_period_samples", c.clock_period_samples);
        c.scan_window = static_cast<int>(get_i64("analysis.scan_window", c.scan_window));
        c.tolerance_cycles = get_u64("analysis.tolerance_cycles", c.tolerance_cycles);
        return c;
    }

    // flags any key outside the known namespaces so config typos surface early
    void check_known_keys() const {
        static const std::set<std::string> known = {
            "leakage.cycles_x", "leakage.cycles_xp", "leakage.cycles_n", "leakage.cycles_a",
            "leakage.x_jitter", "leakage.x_jitter_low", "leakage.x_jitter_low_prob",
            "leakage.cycles_per_nop", "leakage.nop_jitter", "leakage.samples_per_cycle",
            "leakage.clock_hz", "leakage.noise_sigma", "leakage.hw_coeff",
            "leakage.baseline_active", "leakage.baseline_nop", "leakage.rng_seed",
            "inject.addition_d1_extra_cycles", "inject.addition_d1_amp_offset",
            "inject.addition_d1_amp_begin", "inject.addition_d1_amp_end",
            "inject.doubling1_offset", "inject.doubling1_delta_cycles",
            "kp.patterns", "kp.markers", "kp.nops_intra_block", "kp.nops_inter_op",
            "kp.nops_double_double",
            "analysis.trough_level", "analysis.min_trough_samples", "analysis.anchor_start",
            "analysis.anchor_len", "analysis.max_shift", "analysis.clock_period_samples",
            "analysis.scan_window", "analysis.tolerance_cycles",
        };
        for (const auto& [k, v] : values_) {
            if (!known.count(k)) throw ConfigError("unknown config key: " + k);
        }
    }

  private:
    std::map<std::string, std::string> values_;
};

// output directory: ATOMKP_OUT if set, else current directory
inline std::string default_output_dir() {
    const char* env = std::getenv("ATOMKP_OUT");
    if (env && *env) return env;
    return ".";
}

}  // namespace atomkp
