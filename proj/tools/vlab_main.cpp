// Command line front end: scenario runs, the counterexample suite, the
// commutation and averaging probes, and the threshold calculator. All
// subcommands write CSV to --out. Exit codes: 0 success, 2 validation
// error, 3 numerical-horizon error.
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "vlab/averaging.hpp"
#include "vlab/counterexamples.hpp"
#include "vlab/operators.hpp"
#include "vlab/report.hpp"
#include "vlab/scenario.hpp"

using namespace vlab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Options {
    std::string command;
    std::string scenario_path;
    std::string out;
    std::string dump_dir;
    // counterexample1
    int k = 1;
    double t = 1.0;
    double amplitude = 1.0;
    // superposition
    std::string which = "example2";
    double T_override = -1.0;
    // thresholds
    int d = 1;
    double lambda = 0.0;
    double r0 = 0.0;
};

std::string res_tag(const Grid& g) {
    std::ostringstream os;
    os << g.nx << "x" << g.nv;
    return os.str();
}

int run_simulate(const Options& opt) {
    ScenarioSpec spec = parse_scenario(opt.scenario_path);
    Scenario sc = spec.build();
    SimOutput out = run_simulation(sc);
    emit_report(report_rows(out, res_tag(sc.grid)), opt.out);
    if (!opt.dump_dir.empty()) {
        std::filesystem::create_directories(opt.dump_dir);
        for (size_t q = 0; q < out.snapshots.size(); ++q) {
            std::ostringstream name;
            name << opt.dump_dir << "/snapshot_" << q << ".vlgrid";
            dump_phase_field(out.snapshots[q], name.str());
        }
    }
    std::cout << "converged in " << out.sweeps << " sweeps; "
              << out.snapshots.size() << " snapshots -> " << opt.out << "\n";
    return 0;
}

int run_counterexample1(const Options& opt) {
    Ce1Result r = counterexample1(opt.k, opt.t, opt.amplitude);
    std::ostringstream params;
    params << "k=" << opt.k << ";t=" << format_double(opt.t);
    std::vector<ReportRow> rows;
    rows.push_back(ReportRow{opt.t, "exact", params.str(), r.exact, "closed-form"});
    rows.push_back(ReportRow{opt.t, "quadrature", params.str(), r.quadrature, "fine-grid"});
    rows.push_back(ReportRow{opt.t, "relative_gap", params.str(),
                             std::abs(r.quadrature - r.exact) / r.exact, ""});
    emit_report(rows, opt.out);
    std::cout << "exact " << r.exact << "  quadrature " << r.quadrature << " -> " << opt.out
              << "\n";
    return 0;
}

int run_superposition(const Options& opt) {
    SuperpositionSpec spec = (opt.which == "example3") ? SuperpositionSpec::example3()
                                                       : SuperpositionSpec::example2();
    if (opt.which != "example2" && opt.which != "example3")
        throw config_error("--which must be example2 or example3");
    if (opt.T_override > 0.0) spec.T = opt.T_override;
    SuperpositionResult res = counterexample_superposition(spec);
    std::vector<ReportRow> rows;
    for (size_t q = 0; q < res.times.size(); ++q)
        rows.push_back(ReportRow{res.times[q], "decoupling_error", "which=" + opt.which,
                                 res.residuals[q],
                                 std::to_string(spec.nx) + "x" + std::to_string(spec.nv)});
    rows.push_back(ReportRow{0.0, "first_contact_time", "which=" + opt.which,
                             res.first_contact.value_or(-1.0), ""});
    emit_report(rows, opt.out);
    std::cout << "max residual " << res.max_residual_total;
    if (res.first_contact) std::cout << "  first contact at t=" << *res.first_contact;
    std::cout << " -> " << opt.out << "\n";
    return 0;
}

int run_commutation_check(const Options& opt) {
    ScenarioSpec spec = parse_scenario(opt.scenario_path);
    Scenario sc = spec.build();
    // Freeze the scenario's force at its initial state; the manufactured
    // trajectory has an analytic time derivative.
    auto frozen = force_assemble(sc.model, sc.f0);
    ManufacturedField traj{
        [](double t, double x, double v) {
            return std::cos(2.0 * kPi * x) * std::exp(-0.5 * v * v) * (1.0 + t);
        },
        [](double, double x, double v) {
            return std::cos(2.0 * kPi * x) * std::exp(-0.5 * v * v);
        }};
    const double t_check = 0.064;
    std::vector<ReportRow> rows;
    std::vector<double> resid;
    for (int level = 0; level < 3; ++level) {
        const int nx = 16 << level, nv = 32 << level;
        const double dt = 8e-3 / (1 << level);
        Grid g = build_grid(nx, nv, sc.grid.v_cut);
        CoeffPair coeffs = solve_coeff_system(*frozen, sc.advection, g, t_check + dt, dt, 1);
        const double r = commutation_residual(coeffs, *frozen, sc.advection, traj, t_check, dt);
        resid.push_back(r);
        std::ostringstream params;
        params << "nx=" << nx << ";nv=" << nv << ";dt=" << format_double(dt);
        rows.push_back(ReportRow{t_check, "commutation_residual", params.str(), r,
                                 "L" + std::to_string(level)});
    }
    for (size_t q = 1; q < resid.size(); ++q)
        rows.push_back(ReportRow{t_check, "observed_order", "levels=" + std::to_string(q - 1) +
                                 "->" + std::to_string(q),
                                 std::log2(resid[q - 1] / resid[q]), ""});
    emit_report(rows, opt.out);
    std::cout << "residuals";
    for (double r : resid) std::cout << " " << r;
    std::cout << " -> " << opt.out << "\n";
    return 0;
}

int run_averaging_probe(const Options& opt) {
    ScenarioSpec spec = parse_scenario(opt.scenario_path);
    Scenario sc = spec.build();
    Kernel kernel;
    kernel.U = [](double, double, double, double v) { return std::exp(-v * v); };
    kernel.smoothness_budget = 6;
    kernel.decay_weight = 6.0;
    kernel.id = "gauss";
    KernelRequirement req = kernel_requirements(kernel, sc.advection);
    if (!req.decay_ok || !req.smoothness_ok)
        std::cerr << "note: kernel certifies decay " << kernel.decay_weight << " / smoothness "
                  << kernel.smoothness_budget << " but the estimate wants decay "
                  << req.required_decay << " / smoothness " << req.required_smoothness << "\n";
    const double t = 0.5;
    const int quad_level = 129;
    auto rows = smoothing_ratio(kernel, sc.advection, {1, 2, 4, 8, 16, 32}, t, 128,
                                sc.grid.v_cut, 17, quad_level, 256);
    std::ofstream out(opt.out, std::ios::trunc);
    if (!out) throw io_error("cannot open " + opt.out + " for writing");
    out << "mode,ratio,kernel_id,t,quadrature_level\n";
    for (const auto& r : rows)
        out << r.mode << ',' << format_double(r.ratio) << ',' << kernel.id << ','
            << format_double(t) << ',' << quad_level << "\n";
    std::cout << rows.size() << " modes -> " << opt.out << "\n";
    return 0;
}

int run_thresholds(const Options& opt) {
    auto [N, R] = compute_thresholds(opt.d, opt.lambda, opt.r0);
    std::ostringstream params;
    params << "d=" << opt.d << ";lambda=" << format_double(opt.lambda)
           << ";r0=" << format_double(opt.r0);
    emit_report({ReportRow{0.0, "N", params.str(), N, ""},
                 ReportRow{0.0, "R", params.str(), R, ""}},
                opt.out);
    std::cout << "N = " << N << ", R = " << R << " -> " << opt.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vlasolab: a 1D1V kinetic transport laboratory on the torus"};
    app.require_subcommand(1);
    Options opt;

    auto* sim = app.add_subcommand("simulate", "run a scenario file");
    sim->add_option("scenario", opt.scenario_path, "scenario file")->required();
    sim->add_option("--out", opt.out, "output CSV path")->required();
    sim->add_option("--dump", opt.dump_dir, "directory for binary snapshot dumps");

    auto* ce1 = app.add_subcommand("counterexample1",
                                   "free-streaming moment norm, two routes");
    ce1->add_option("--k", opt.k, "derivative order (1..3)")->required();
    ce1->add_option("--t", opt.t, "evaluation time (0 < t < 4)")->required();
    ce1->add_option("--amplitude", opt.amplitude, "bump amplitude");
    ce1->add_option("--out", opt.out, "output CSV path")->required();

    auto* sup = app.add_subcommand("superposition", "decoupling residual runs");
    sup->add_option("--which", opt.which, "example2 | example3")->required();
    sup->add_option("--T", opt.T_override, "override the run horizon");
    sup->add_option("--out", opt.out, "output CSV path")->required();

    auto* comm = app.add_subcommand("commutation-check",
                                    "commutation-identity residual refinement study");
    comm->add_option("scenario", opt.scenario_path, "scenario file")->required();
    comm->add_option("--out", opt.out, "output CSV path")->required();

    auto* avg = app.add_subcommand("averaging-probe", "smoothing-ratio table");
    avg->add_option("scenario", opt.scenario_path, "scenario file")->required();
    avg->add_option("--out", opt.out, "output CSV path")->required();

    auto* thr = app.add_subcommand("thresholds", "regularity/integrability indices");
    thr->add_option("--d", opt.d, "dimension")->required();
    thr->add_option("--lambda", opt.lambda, "inverse-advection growth exponent")->required();
    thr->add_option("--r0", opt.r0, "moment growth exponent")->required();
    thr->add_option("--out", opt.out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return run_simulate(opt);
        if (ce1->parsed()) return run_counterexample1(opt);
        if (sup->parsed()) return run_superposition(opt);
        if (comm->parsed()) return run_commutation_check(opt);
        if (avg->parsed()) return run_averaging_probe(opt);
        if (thr->parsed()) return run_thresholds(opt);
    } catch (const horizon_error& e) {
        std::cerr << "numerical horizon: " << e.what() << "\n";
        return 3;
    } catch (const config_error& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
