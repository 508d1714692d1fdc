#include "helpers.hpp"

#include <sstream>
#include <string>

using namespace hamcoup;

namespace {

ConfigFile parse_text(const std::string& text) {
    std::istringstream in(text);
    return ConfigFile::parse(in);
}

} // namespace

TEST_CASE("config parsing: values, comments, sections") {
    const ConfigFile cfg = parse_text(
        "# run setup\n"
        "model.name = beam_spring\n"
        "model.n_x = 51   # grid\n"
        "run.T = 50\n"
        "run.n_steps = 1e5\n"
        "\n"
        "integrator.kind = stormer_verlet\n");
    REQUIRE(cfg.get_string("model.name") == "beam_spring");
    REQUIRE(cfg.get_double("run.T") == 50.0);
    REQUIRE(cfg.get_long("run.n_steps") == 100000);
    const ModelParams params = cfg.section("model", "name");
    REQUIRE(params.size() == 1);
    REQUIRE(params.at("n_x") == 51.0);
}

TEST_CASE("config parsing: diagnostics carry line numbers") {
    try {
        parse_text("a.b = 1\nnonsense line\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.line == 2);
        REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
    }

    try {
        parse_text("a.b = 1\na.b = 2\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.line == 2);
    }

    try {
        const ConfigFile cfg = parse_text("run.T = fifty\n");
        cfg.get_double("run.T");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.line == 1);
    }

    // integers reject fractional values
    const ConfigFile frac = parse_text("run.n_steps = 2.5\n");
    REQUIRE_THROWS_AS(frac.get_long("run.n_steps"), ConfigError);
}

TEST_CASE("simulation config: defaults, derived dt, unknown keys") {
    const SimulationConfig sc = parse_simulation_config(parse_text(
        "model.name = harmonic\n"
        "run.T = 5\n"
        "run.n_steps = 50\n"));
    REQUIRE(sc.integrator == IntegratorKind::stormer_verlet);
    REQUIRE(sc.dt() == 0.1);
    REQUIRE(sc.stride == 1);
    REQUIRE(sc.samples == 50);
    REQUIRE(sc.tol == 1e-6);
    // dt * n_steps reproduces T
    REQUIRE(std::abs(sc.dt() * static_cast<double>(sc.n_steps) - sc.total_time) <=
            1e-12 * sc.total_time);

    REQUIRE_THROWS_AS(
        parse_simulation_config(parse_text("model.name = harmonic\n"
                                           "run.T = 5\n"
                                           "run.n_steps = 50\n"
                                           "run.typo = 1\n")),
        ConfigError);
    REQUIRE_THROWS_AS(
        parse_simulation_config(parse_text("run.T = 5\nrun.n_steps = 50\n")),
        ConfigError);  // missing model.name
    REQUIRE_THROWS_AS(
        parse_simulation_config(parse_text("model.name = harmonic\n"
                                           "integrator.kind = rk5\n"
                                           "run.T = 5\n"
                                           "run.n_steps = 50\n")),
        UsageError);
}

TEST_CASE("doubles are written with shortest round-trip text") {
    REQUIRE(format_double(0.1) == "0.1");
    REQUIRE(format_double(50.0) == "50");
    REQUIRE(format_double(-1.0 / 3.0) == format_double(-1.0 / 3.0));

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int trial = 0; trial < 1000; ++trial) {
        const double v = dist(rng);
        REQUIRE(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("trajectory CSV layout for the beam-spring model") {
    BuiltModel model = builtin_registry().build(
        "beam_spring", {{"n_x", 8.0}, {"n_b", 3.0}, {"b", 0.375}});
    IntegratorSpec spec;
    spec.dt = 1e-4;
    const Trajectory tr =
        integrate(model.system, spec, model.initial_state, 2, 1);

    std::ostringstream out;
    write_trajectory_csv(out, tr, model);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    REQUIRE(header ==
            "t,u_nb,q1,q2,H_el,H_sp,H_total,dH_total,constraint_1,constraint_2");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    REQUIRE(rows == 3);
}

TEST_CASE("trajectory CSV layout for single-subsystem models") {
    BuiltModel model = builtin_registry().build("harmonic", {});
    IntegratorSpec spec;
    spec.dt = 0.1;
    const Trajectory tr =
        integrate(model.system, spec, model.initial_state, 1, 1);
    std::ostringstream out;
    write_trajectory_csv(out, tr, model);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    REQUIRE(header == "t,q,p,H_total,dH_total");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    REQUIRE(rows == 2);
}

TEST_CASE("model registry: sorted names, custom registration, diagnostics") {
    const std::vector<std::string> names = builtin_registry().names();
    REQUIRE(std::is_sorted(names.begin(), names.end()));
    for (const char* expected : {"beam_spring", "spring_mass", "harmonic"})
        REQUIRE(std::find(names.begin(), names.end(), expected) != names.end());

    ModelRegistry reg;
    detail::register_builtin_models(reg);
    reg.register_model("pendulum_pair", "demo registration", {{"g", 9.81, "gravity"}},
                       [](const ModelParams&) {
                           return BuiltModel{
                               build_harmonic_system(),
                               PhaseState::zero(CoordinateLayout(1, 0)),
                               {{"q", 0}},
                               "",
                               "",
                               {}};
                       });
    const std::vector<std::string> extended = reg.names();
    REQUIRE(std::find(extended.begin(), extended.end(), "pendulum_pair") !=
            extended.end());
    REQUIRE(std::is_sorted(extended.begin(), extended.end()));

    REQUIRE_THROWS_AS(reg.build("no_such_model", {}), UsageError);
    REQUIRE_THROWS_AS(reg.build("harmonic", {{"masss", 1.0}}), UsageError);
    REQUIRE_THROWS_AS(reg.build("beam_spring", {{"n_x", 50.5}}), UsageError);
}

TEST_CASE("built models expose warnings for inconsistent coupling data") {
    const BuiltModel ok = builtin_registry().build("beam_spring", {});
    REQUIRE(ok.warnings.empty());
    const BuiltModel off =
        builtin_registry().build("beam_spring", {{"b", 0.9}});
    REQUIRE(off.warnings.size() == 1);
}
