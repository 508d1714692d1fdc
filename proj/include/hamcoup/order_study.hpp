// order_study.hpp — energy-fluctuation order study: rerun one model over a
// fixed horizon with several time steps and compare max |H - H(0)|.  A
// second-order symplectic method quarters the fluctuation when the step
// halves.
#pragma once

#include <cmath>
#include <future>
#include <string>
#include <vector>

#include "hamcoup/errors.hpp"
#include "hamcoup/integrators.hpp"
#include "hamcoup/system.hpp"

namespace hamcoup {

struct OrderStudyReport {
    std::vector<double> dts;         // descending
    std::vector<double> max_abs_dh;  // per run
    std::vector<double> ratios;      // max_abs_dh[i] / max_abs_dh[i+1]
    double slope = 0.0;              // log-log least-squares fit
    bool pass = false;               // every halving ratio within [3.5, 4.5]
    std::vector<std::string> notes;
};

inline constexpr double kOrderRatioLow = 3.5;
inline constexpr double kOrderRatioHigh = 4.5;

inline OrderStudyReport run_order_study(const CoupledSystem& sys,
                                        const PhaseState& s0,
                                        IntegratorKind kind, double total_time,
                                        const std::vector<double>& dts,
                                        double fixed_point_tol = 1e-12,
                                        int max_iterations = 50) {
    if (dts.size() < 2)
        throw UsageError("order study needs at least two time steps");
    for (std::size_t i = 0; i < dts.size(); ++i) {
        if (!(dts[i] > 0.0))
            throw UsageError("order study: time steps must be positive");
        if (i > 0 && !(dts[i] < dts[i - 1]))
            throw UsageError("order study: time steps must be strictly "
                             "decreasing (identical steps make the study invalid)");
    }
    if (!(total_time > 0.0))
        throw UsageError("order study: total time must be positive");

    std::vector<long> steps(dts.size());
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const double exact = total_time / dts[i];
        steps[i] = std::lround(exact);
        if (steps[i] < 1 ||
            std::abs(static_cast<double>(steps[i]) * dts[i] - total_time) >
                1e-9 * total_time)
            throw UsageError("order study: dt = " + std::to_string(dts[i]) +
                             " does not divide T = " + std::to_string(total_time));
    }

    // Independent runs over the shared immutable system.
    std::vector<std::future<double>> runs;
    runs.reserve(dts.size());
    for (std::size_t i = 0; i < dts.size(); ++i) {
        IntegratorSpec spec;
        spec.kind = kind;
        spec.dt = dts[i];
        spec.fixed_point_tol = fixed_point_tol;
        spec.max_iterations = max_iterations;
        const long n = steps[i];
        runs.push_back(std::async(std::launch::async, [&sys, &s0, spec, n] {
            return integrate(sys, spec, s0, n, n).max_abs_dh_total;
        }));
    }

    OrderStudyReport report;
    report.dts = dts;
    report.max_abs_dh.reserve(dts.size());
    for (auto& run : runs) report.max_abs_dh.push_back(run.get());

    bool any_halving = false;
    bool all_in_band = true;
    for (std::size_t i = 0; i + 1 < dts.size(); ++i) {
        const double denom = report.max_abs_dh[i + 1];
        report.ratios.push_back(denom > 0.0
                                    ? report.max_abs_dh[i] / denom
                                    : std::numeric_limits<double>::infinity());
        const bool halving = std::abs(dts[i] / dts[i + 1] - 2.0) <= 1e-9;
        if (halving) {
            any_halving = true;
            if (!(report.ratios.back() >= kOrderRatioLow &&
                  report.ratios.back() <= kOrderRatioHigh))
                all_in_band = false;
        } else {
            report.notes.push_back("pair " + std::to_string(i) + "->" +
                                   std::to_string(i + 1) +
                                   " is not a halving; excluded from PASS");
        }
    }
    if (!any_halving)
        report.notes.push_back("no halving pairs; PASS not applicable");
    report.pass = any_halving && all_in_band;

    // slope of log(max|dH|) against log(dt)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(dts.size());
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const double x = std::log(dts[i]);
        const double y = std::log(report.max_abs_dh[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    report.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return report;
}

// Log-log convergence slope of the *global error* against a reference
// solution supplied by the caller; shared by the integrator order tests.
inline double global_error_slope(const std::vector<double>& dts,
                                 const std::vector<double>& errors) {
    if (dts.size() != errors.size() || dts.size() < 2)
        throw UsageError("global_error_slope: need matching lists of >= 2 runs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(dts.size());
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const double x = std::log(dts[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace hamcoup
