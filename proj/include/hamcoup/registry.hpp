// registry.hpp — named model catalogue backing the CLI and custom
// registrations from library users.
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hamcoup/errors.hpp"
#include "hamcoup/models.hpp"
#include "hamcoup/system.hpp"

namespace hamcoup {

using ModelParams = std::map<std::string, double>;

struct ModelParamSpec {
    std::string key;
    double default_value;
    std::string description;
};

struct BuiltModel {
    CoupledSystem system;
    PhaseState initial_state;
    // Named state entries worth a CSV column, in emission order.
    std::vector<std::pair<std::string, Index>> observables;
    // Subsystem energy column labels; empty labels suppress the columns
    // (single-subsystem models report H_total only).
    std::string energy1_label, energy2_label;
    std::vector<std::string> warnings;
};

class ModelRegistry {
public:
    using Builder = std::function<BuiltModel(const ModelParams&)>;

    struct Entry {
        std::string description;
        std::vector<ModelParamSpec> schema;
        Builder builder;
    };

    void register_model(const std::string& name, std::string description,
                        std::vector<ModelParamSpec> schema, Builder builder) {
        if (entries_.count(name))
            throw UsageError("model '" + name + "' is already registered");
        entries_[name] = Entry{std::move(description), std::move(schema),
                               std::move(builder)};
    }

    bool has(const std::string& name) const { return entries_.count(name) > 0; }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(entries_.size());
        for (const auto& [name, entry] : entries_) out.push_back(name);
        return out;  // std::map keeps them sorted
    }

    const Entry& entry(const std::string& name) const {
        auto it = entries_.find(name);
        if (it == entries_.end()) throw_unknown(name);
        return it->second;
    }

    // Merge overrides into the schema defaults and build.  Unknown parameter
    // keys are rejected with the list of valid ones.
    BuiltModel build(const std::string& name, const ModelParams& overrides) const {
        const Entry& e = entry(name);
        ModelParams params;
        for (const ModelParamSpec& p : e.schema) params[p.key] = p.default_value;
        for (const auto& [key, value] : overrides) {
            if (!params.count(key)) {
                std::string valid;
                for (const ModelParamSpec& p : e.schema)
                    valid += (valid.empty() ? "" : ", ") + p.key;
                throw UsageError("model '" + name + "' has no parameter '" + key +
                                 "' (valid: " + valid + ")");
            }
            params[key] = value;
        }
        return e.builder(params);
    }

private:
    [[noreturn]] void throw_unknown(const std::string& name) const {
        std::string known;
        for (const auto& [n, entry] : entries_)
            known += (known.empty() ? "" : ", ") + n;
        throw UsageError("unknown model '" + name + "' (registered: " + known +
                         ")");
    }

    std::map<std::string, Entry> entries_;
};

namespace detail {

inline double param(const ModelParams& p, const std::string& key) {
    return p.at(key);
}

inline Index integer_param(const ModelParams& p, const std::string& key) {
    const double v = p.at(key);
    if (!(std::rint(v) == v))
        throw UsageError("parameter '" + key + "' must be an integer, got " +
                         std::to_string(v));
    return static_cast<Index>(v);
}

inline BuiltModel build_beam_spring_model(const ModelParams& p) {
    BeamParams beam;
    beam.rho = param(p, "rho");
    beam.area = param(p, "area");
    beam.modulus = param(p, "modulus");
    beam.inertia = param(p, "inertia");
    beam.length = param(p, "length");
    beam.n_x = integer_param(p, "n_x");
    SpringMassParams sp{param(p, "m1"), param(p, "m2"), param(p, "k")};
    CouplingSpec c;
    c.n_b = integer_param(p, "n_b");
    c.b = param(p, "b");

    BuiltModel m{build_coupled_beam_spring(beam, sp, c),
                 beam_spring_initial_state(beam, sp, c, param(p, "q2_0")),
                 {},
                 "H_el",
                 "H_sp",
                 {}};
    const Index n = beam.n_interior();
    m.observables = {{"u_nb", c.n_b - 1}, {"q1", 2 * n}, {"q2", 2 * n + 1}};
    if (!c.consistent(beam))
        m.warnings.push_back(
            "coupling abscissa b = " + std::to_string(c.b) +
            " is more than one cell away from n_b*dx = " +
            std::to_string(static_cast<double>(c.n_b) * beam.dx()));
    return m;
}

inline BuiltModel build_spring_mass_model(const ModelParams& p) {
    SpringMassParams sp{param(p, "m1"), param(p, "m2"), param(p, "k")};
    CoupledSystem sys = build_spring_mass_system(sp);
    Vec z(4);
    z << param(p, "q1_0"), param(p, "q2_0"), param(p, "p1_0"), param(p, "p2_0");
    BuiltModel m{std::move(sys),
                 PhaseState(CoordinateLayout(2, 0), std::move(z)),
                 {{"q1", 0}, {"q2", 1}},
                 "",
                 "",
                 {}};
    return m;
}

inline BuiltModel build_harmonic_model(const ModelParams& p) {
    OscillatorParams osc{param(p, "mass"), param(p, "stiffness")};
    CoupledSystem sys = build_harmonic_system(osc);
    Vec z(2);
    z << param(p, "q0"), param(p, "p0");
    BuiltModel m{std::move(sys),
                 PhaseState(CoordinateLayout(1, 0), std::move(z)),
                 {{"q", 0}, {"p", 1}},
                 "",
                 "",
                 {}};
    return m;
}

inline BuiltModel build_coupled_oscillators_model(const ModelParams& p) {
    CoupledOscillatorParams cp;
    cp.osc1 = {param(p, "m1"), param(p, "k1")};
    cp.osc2 = {param(p, "m2"), param(p, "k2")};
    cp.k_c = param(p, "k_c");
    CoupledSystem sys = build_coupled_oscillators(cp);
    Vec z(4);
    z << param(p, "q1_0"), param(p, "p1_0"), param(p, "q2_0"), param(p, "p2_0");
    BuiltModel m{std::move(sys),
                 PhaseState(CoordinateLayout(1, 1), std::move(z)),
                 {{"q1", 0}, {"q2", 2}},
                 "H_1",
                 "H_2",
                 {}};
    return m;
}

inline BuiltModel build_velocity_coupled_model(const ModelParams& p) {
    OscillatorParams osc{param(p, "mass"), param(p, "stiffness")};
    CoupledSystem sys = build_velocity_coupled(param(p, "gamma"), osc);
    Vec z(4);
    z << param(p, "q1_0"), param(p, "p1_0"), param(p, "q2_0"), param(p, "p2_0");
    BuiltModel m{std::move(sys),
                 PhaseState(CoordinateLayout(1, 1), std::move(z)),
                 {{"q1", 0}, {"q2", 2}},
                 "H_1",
                 "H_2",
                 {}};
    return m;
}

inline void register_builtin_models(ModelRegistry& reg) {
    reg.register_model(
        "beam_spring",
        "simply supported beam tied to a two-mass spring chain at one grid point",
        {{"rho", 10.0, "beam density"},
         {"area", 1.0, "cross-section area"},
         {"modulus", 1.0, "elastic modulus"},
         {"inertia", 1.0, "second moment of area"},
         {"length", 1.0, "beam length"},
         {"n_x", 50.0, "grid intervals (interior unknowns n_x-1)"},
         {"n_b", 10.0, "coupling grid index"},
         {"b", 0.2, "coupling abscissa (informational)"},
         {"m1", 0.1, "coupled mass"},
         {"m2", 0.1, "free mass"},
         {"k", 0.5, "spring stiffness"},
         {"q2_0", -1.0, "initial offset of the free mass"}},
        build_beam_spring_model);
    reg.register_model(
        "spring_mass", "two masses joined by one spring (single subsystem)",
        {{"m1", 0.1, "first mass"},
         {"m2", 0.1, "second mass"},
         {"k", 0.5, "spring stiffness"},
         {"q1_0", 0.0, "initial position of mass 1"},
         {"q2_0", -1.0, "initial position of mass 2"},
         {"p1_0", 0.0, "initial momentum of mass 1"},
         {"p2_0", 0.0, "initial momentum of mass 2"}},
        build_spring_mass_model);
    reg.register_model("harmonic", "single harmonic oscillator",
                       {{"mass", 1.0, "mass"},
                        {"stiffness", 1.0, "spring constant"},
                        {"q0", 1.0, "initial position"},
                        {"p0", 0.0, "initial momentum"}},
                       build_harmonic_model);
    reg.register_model(
        "coupled_oscillators",
        "two harmonic oscillators with a gradient (spring) interaction",
        {{"m1", 1.0, "mass of oscillator 1"},
         {"k1", 1.0, "stiffness of oscillator 1"},
         {"m2", 1.0, "mass of oscillator 2"},
         {"k2", 1.0, "stiffness of oscillator 2"},
         {"k_c", 0.5, "coupling spring"},
         {"q1_0", 1.0, "initial position 1"},
         {"p1_0", 0.0, "initial momentum 1"},
         {"q2_0", 0.0, "initial position 2"},
         {"p2_0", 0.0, "initial momentum 2"}},
        build_coupled_oscillators_model);
    reg.register_model(
        "velocity_coupled",
        "two oscillators with momentum-proportional forcing f1 = gamma*p1 "
        "(not symplectic)",
        {{"gamma", 0.1, "forcing coefficient"},
         {"mass", 1.0, "oscillator mass"},
         {"stiffness", 1.0, "oscillator stiffness"},
         {"q1_0", 1.0, "initial position 1"},
         {"p1_0", 0.0, "initial momentum 1"},
         {"q2_0", 0.0, "initial position 2"},
         {"p2_0", 0.0, "initial momentum 2"}},
        build_velocity_coupled_model);
}

} // namespace detail

// Registry preloaded with the built-in models; library users may register
// more (they then show up in list-models).
inline ModelRegistry& builtin_registry() {
    static ModelRegistry reg = [] {
        ModelRegistry r;
        detail::register_builtin_models(r);
        return r;
    }();
    return reg;
}

} // namespace hamcoup
