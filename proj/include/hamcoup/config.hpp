// config.hpp — flat `section.key = value` run configuration.
//
// Syntax: one assignment per line, `#` starts a comment, blank lines are
// skipped, keys are dotted paths, order does not matter.  Unknown keys are
// rejected so typos surface with their line numbers.
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <string>

#include "hamcoup/errors.hpp"
#include "hamcoup/integrators.hpp"
#include "hamcoup/registry.hpp"

namespace hamcoup {

class ConfigFile {
public:
    static ConfigFile parse(std::istream& in) {
        ConfigFile cfg;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(line_no) +
                                      ": expected 'key = value', got '" + trimmed +
                                      "'",
                                  line_no);
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty() || value.empty())
                throw ConfigError("line " + std::to_string(line_no) +
                                      ": empty key or value",
                                  line_no);
            if (cfg.items_.count(key))
                throw ConfigError("line " + std::to_string(line_no) +
                                      ": duplicate key '" + key + "' (first set on line " +
                                      std::to_string(cfg.items_.at(key).line) + ")",
                                  line_no);
            cfg.items_[key] = Item{value, line_no, false};
        }
        return cfg;
    }

    static ConfigFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        return parse(in);
    }

    bool has(const std::string& key) const { return items_.count(key) > 0; }

    std::string get_string(const std::string& key) const {
        auto it = items_.find(key);
        if (it == items_.end())
            throw ConfigError("missing required key '" + key + "'");
        it->second.used = true;
        return it->second.value;
    }

    std::string get_string_or(const std::string& key, const std::string& def) const {
        return has(key) ? get_string(key) : def;
    }

    double get_double(const std::string& key) const {
        const auto it = items_.find(key);
        if (it == items_.end())
            throw ConfigError("missing required key '" + key + "'");
        it->second.used = true;
        return parse_double(it->second.value, key, it->second.line);
    }

    double get_double_or(const std::string& key, double def) const {
        return has(key) ? get_double(key) : def;
    }

    long get_long(const std::string& key) const {
        const auto it = items_.find(key);
        const double v = get_double(key);
        if (std::rint(v) != v || std::abs(v) > 9.0e15)
            throw ConfigError("line " + std::to_string(it->second.line) + ": '" +
                                  key + "' must be an integer",
                              it->second.line);
        return static_cast<long>(v);
    }

    long get_long_or(const std::string& key, long def) const {
        return has(key) ? get_long(key) : def;
    }

    // All numeric entries under `prefix.` (the prefix and a trailing dot are
    // stripped from the returned keys); marks them used.
    ModelParams section(const std::string& prefix,
                        const std::string& skip_key = "") const {
        ModelParams out;
        const std::string p = prefix + ".";
        for (const auto& [key, item] : items_) {
            if (key.rfind(p, 0) != 0) continue;
            const std::string short_key = key.substr(p.size());
            if (short_key == skip_key) continue;
            item.used = true;
            out[short_key] = parse_double(item.value, key, item.line);
        }
        return out;
    }

    // Reject keys nobody consumed (typo safety).
    void require_all_used() const {
        for (const auto& [key, item] : items_)
            if (!item.used)
                throw ConfigError("line " + std::to_string(item.line) +
                                      ": unknown key '" + key + "'",
                                  item.line);
    }

private:
    struct Item {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };

    static std::string trim(const std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r");
        if (begin == std::string::npos) return "";
        const auto end = s.find_last_not_of(" \t\r");
        return s.substr(begin, end - begin + 1);
    }

    static double parse_double(const std::string& text, const std::string& key,
                               int line) {
        try {
            std::size_t consumed = 0;
            const double v = std::stod(text, &consumed);
            if (consumed != text.size())
                throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("line " + std::to_string(line) + ": value '" + text +
                                  "' for '" + key + "' is not a number",
                              line);
        }
    }

    std::map<std::string, Item> items_;
};

// Everything a run needs, decoded and validated.
struct SimulationConfig {
    std::string model_name;
    ModelParams model_params;

    IntegratorKind integrator = IntegratorKind::stormer_verlet;
    double fixed_point_tol = 1e-12;
    int max_iterations = 50;

    double total_time = 1.0;
    long n_steps = 100;
    long stride = 1;
    std::string output_path;

    std::uint64_t seed = 12345;
    long samples = 50;
    double tol = 1e-6;
    double half_width = 1.0;

    double dt() const { return total_time / static_cast<double>(n_steps); }

    IntegratorSpec integrator_spec() const {
        IntegratorSpec spec;
        spec.kind = integrator;
        spec.dt = dt();
        spec.fixed_point_tol = fixed_point_tol;
        spec.max_iterations = max_iterations;
        return spec;
    }
};

// `require_run_section = false` lets check-only configs omit run.T/n_steps.
inline SimulationConfig parse_simulation_config(const ConfigFile& cfg,
                                                bool require_run_section = true) {
    SimulationConfig sc;
    sc.model_name = cfg.get_string("model.name");
    sc.model_params = cfg.section("model", "name");

    sc.integrator = integrator_kind_from_string(
        cfg.get_string_or("integrator.kind", "stormer_verlet"));
    sc.fixed_point_tol = cfg.get_double_or("integrator.fixed_point_tol", 1e-12);
    sc.max_iterations =
        static_cast<int>(cfg.get_long_or("integrator.max_iterations", 50));

    sc.total_time = require_run_section ? cfg.get_double("run.T")
                                        : cfg.get_double_or("run.T", 1.0);
    sc.n_steps = require_run_section ? cfg.get_long("run.n_steps")
                                     : cfg.get_long_or("run.n_steps", 100);
    sc.stride = cfg.get_long_or("run.stride", 1);
    sc.output_path = cfg.get_string_or("output.path", "");

    const long seed = cfg.get_long_or("check.seed", 12345);
    if (seed < 0) throw ConfigError("check.seed must be nonnegative");
    sc.seed = static_cast<std::uint64_t>(seed);
    sc.samples = cfg.get_long_or("check.samples", 50);
    sc.tol = cfg.get_double_or("check.tol", 1e-6);
    sc.half_width = cfg.get_double_or("check.half_width", 1.0);

    cfg.require_all_used();

    if (!(sc.total_time > 0.0)) throw ConfigError("run.T must be positive");
    if (sc.n_steps < 1) throw ConfigError("run.n_steps must be >= 1");
    if (sc.stride < 1) throw ConfigError("run.stride must be >= 1");
    if (sc.samples < 1) throw ConfigError("check.samples must be >= 1");
    if (!(sc.tol > 0.0)) throw ConfigError("check.tol must be positive");
    if (!(sc.half_width >= 0.0))
        throw ConfigError("check.half_width must be nonnegative");
    return sc;
}

inline SimulationConfig load_simulation_config(const std::string& path,
                                               bool require_run_section = true) {
    return parse_simulation_config(ConfigFile::parse_file(path),
                                   require_run_section);
}

} // namespace hamcoup
