// hamcoup command-line front end: simulate, check, order-study, list-models.
//
// Exit codes: 0 success (check: symplectic; order-study: PASS),
//             1 check failed / order-study ratio out of band,
//             2 config or usage error, 3 numeric failure mid-run,
//             4 unwritable output.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hamcoup/hamcoup.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

hamcoup::BuiltModel build_model(const hamcoup::SimulationConfig& sc) {
    hamcoup::BuiltModel model =
        hamcoup::builtin_registry().build(sc.model_name, sc.model_params);
    for (const std::string& w : model.warnings)
        std::cerr << "warning: " << w << '\n';
    return model;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    return out;
}

int run_simulate(const std::string& config_path, const std::string& out_override,
                 bool gnuplot) {
    const hamcoup::SimulationConfig sc = hamcoup::load_simulation_config(config_path, true);
    const hamcoup::BuiltModel model = build_model(sc);

    const hamcoup::Trajectory traj =
        hamcoup::integrate(model.system, sc.integrator_spec(), model.initial_state,
                           sc.n_steps, sc.stride);

    std::string out_path = !out_override.empty() ? out_override
                           : !sc.output_path.empty() ? sc.output_path
                                                     : "simulation.csv";
    {
        std::ofstream out = open_output(out_path);
        hamcoup::write_trajectory_csv(out, traj, model);
        if (!out.good())
            throw std::ios_base::failure("write to '" + out_path + "' failed");
    }
    if (gnuplot) {
        std::ofstream gp = open_output(out_path + ".gp");
        hamcoup::write_trajectory_gnuplot(gp, out_path, model);
    }
    std::cout << "model: " << sc.model_name << '\n'
              << "integrator: " << hamcoup::to_string(sc.integrator)
              << "  dt: " << hamcoup::format_double(sc.dt())
              << "  steps: " << sc.n_steps << '\n'
              << "final t: " << hamcoup::format_double(traj.times.back()) << '\n'
              << "max |dH_total|: "
              << hamcoup::format_double(traj.max_abs_dh_total) << '\n'
              << "wrote " << out_path << " (" << traj.size() << " rows)\n";
    return kExitOk;
}

int run_check(const std::string& config_path, long samples_override,
              double tol_override, long seed_override, bool constrained) {
    hamcoup::SimulationConfig sc = hamcoup::load_simulation_config(config_path, false);
    if (samples_override > 0) sc.samples = samples_override;
    if (tol_override > 0.0) sc.tol = tol_override;
    if (seed_override >= 0) sc.seed = static_cast<std::uint64_t>(seed_override);
    const hamcoup::BuiltModel model = build_model(sc);

    const std::vector<hamcoup::PhaseState> states = hamcoup::sample_states(
        model.initial_state, sc.samples, sc.half_width, sc.seed);
    const hamcoup::SymplecticVerdict verdict =
        constrained
            ? hamcoup::check_symplectic_on_manifold(model.system, states, sc.tol)
            : hamcoup::check_symplectic(model.system, states, sc.tol);

    std::cout << "model: " << sc.model_name << '\n'
              << "constrained: " << (verdict.constrained ? "yes" : "no") << '\n'
              << "samples: " << verdict.samples << '\n'
              << "seed: " << sc.seed << '\n'
              << "tolerance: " << hamcoup::format_double(verdict.tolerance) << '\n'
              << "residual: " << hamcoup::format_double(verdict.residual) << '\n'
              << "verdict: " << (verdict.symplectic ? "symplectic" : "not symplectic")
              << '\n';
    return verdict.symplectic ? kExitOk : kExitNegative;
}

std::vector<double> parse_dt_list(const std::string& text) {
    std::vector<double> dts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            dts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw hamcoup::UsageError("--dts: '" + item + "' is not a number");
        }
    }
    return dts;
}

int run_order_study(const std::string& config_path, const std::string& dts_text,
                    long halvings, const std::string& out_override, bool gnuplot) {
    const hamcoup::SimulationConfig sc = hamcoup::load_simulation_config(config_path, true);
    const hamcoup::BuiltModel model = build_model(sc);

    std::vector<double> dts;
    if (!dts_text.empty()) {
        dts = parse_dt_list(dts_text);
    } else {
        if (halvings < 1)
            throw hamcoup::UsageError("order-study needs --dts or --halvings >= 1");
        double dt = sc.dt();
        for (long i = 0; i <= halvings; ++i, dt *= 0.5) dts.push_back(dt);
    }

    const hamcoup::OrderStudyReport report = hamcoup::run_order_study(
        model.system, model.initial_state, sc.integrator, sc.total_time, dts,
        sc.fixed_point_tol, sc.max_iterations);

    std::string out_path = !out_override.empty() ? out_override
                           : !sc.output_path.empty() ? sc.output_path
                                                     : "order_study.csv";
    {
        std::ofstream out = open_output(out_path);
        hamcoup::write_csv_header(out, {"dt", "max_abs_dH"});
        for (std::size_t i = 0; i < report.dts.size(); ++i)
            hamcoup::write_csv_row(out, {report.dts[i], report.max_abs_dh[i]});
        if (!out.good())
            throw std::ios_base::failure("write to '" + out_path + "' failed");
    }
    if (gnuplot) {
        std::ofstream gp = open_output(out_path + ".gp");
        gp << "set datafile separator ','\n"
           << "set key autotitle columnhead\n"
           << "set logscale xy\n"
           << "set xlabel 'dt'\n"
           << "plot '" << out_path << "' using 1:2 with linespoints\n";
    }

    std::cout << "model: " << sc.model_name << "  T: "
              << hamcoup::format_double(sc.total_time) << '\n';
    for (std::size_t i = 0; i < report.dts.size(); ++i)
        std::cout << "dt = " << hamcoup::format_double(report.dts[i])
                  << "  max|dH| = "
                  << hamcoup::format_double(report.max_abs_dh[i]) << '\n';
    for (std::size_t i = 0; i < report.ratios.size(); ++i)
        std::cout << "ratio " << hamcoup::format_double(report.dts[i]) << " -> "
                  << hamcoup::format_double(report.dts[i + 1]) << ": "
                  << hamcoup::format_double(report.ratios[i]) << '\n';
    std::cout << "slope: " << hamcoup::format_double(report.slope) << '\n';
    for (const std::string& note : report.notes)
        std::cout << "note: " << note << '\n';
    std::cout << "wrote " << out_path << '\n'
              << (report.pass ? "PASS" : "FAIL")
              << " (halving ratios within [3.5, 4.5])\n";
    return report.pass ? kExitOk : kExitNegative;
}

int run_list_models() {
    const hamcoup::ModelRegistry& reg = hamcoup::builtin_registry();
    for (const std::string& name : reg.names()) {
        const auto& entry = reg.entry(name);
        std::cout << name << " - " << entry.description << '\n';
        for (const auto& p : entry.schema)
            std::cout << "    model." << p.key << " = "
                      << hamcoup::format_double(p.default_value) << "  ("
                      << p.description << ")\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled Hamiltonian systems: simulation, symplecticity "
                 "checks, and step-size order studies"};
    app.require_subcommand(1);

    std::string config_path, out_path, dts_text;
    bool gnuplot = false, constrained = false;
    long samples = -1, seed = -1, halvings = 0;
    double tol = -1.0;

    CLI::App* sim = app.add_subcommand("simulate",
                                       "integrate a model and write a CSV time series");
    sim->add_option("config", config_path, "config file")->required();
    sim->add_option("--out", out_path, "output CSV path (overrides output.path)");
    sim->add_flag("--gnuplot", gnuplot, "write a plot script next to the CSV");

    CLI::App* chk = app.add_subcommand("check",
                                       "evaluate the symplecticity criterion on sampled states");
    chk->add_option("config", config_path, "config file")->required();
    chk->add_option("--samples", samples, "number of sampled states");
    chk->add_option("--tol", tol, "residual tolerance");
    chk->add_option("--seed", seed, "sampling seed (overrides check.seed)");
    chk->add_flag("--constrained", constrained,
                  "restrict the check to the constraint manifold");

    CLI::App* order = app.add_subcommand("order-study",
                                         "energy-fluctuation scaling across time steps");
    order->add_option("config", config_path, "config file")->required();
    CLI::Option* dts_opt = order->add_option("--dts", dts_text,
                                             "comma-separated list of steps, descending");
    order->add_option("--halvings", halvings,
                      "number of halvings starting from the config's dt")
        ->excludes(dts_opt);
    order->add_option("--out", out_path, "report CSV path (overrides output.path)");
    order->add_flag("--gnuplot", gnuplot, "write a plot script next to the CSV");

    app.add_subcommand("list-models", "print registered models and parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) return run_simulate(config_path, out_path, gnuplot);
        if (chk->parsed())
            return run_check(config_path, samples, tol, seed, constrained);
        if (order->parsed())
            return run_order_study(config_path, dts_text, halvings, out_path,
                                   gnuplot);
        return run_list_models();
    } catch (const hamcoup::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hamcoup::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hamcoup::CapabilityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hamcoup::ConvergenceError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const hamcoup::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const hamcoup::LayoutError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}
