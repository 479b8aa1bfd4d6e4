// crimesim command-line driver.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <crimesim/abm.hpp>
#include <crimesim/analysis.hpp>
#include <crimesim/cases.hpp>
#include <crimesim/empirical.hpp>
#include <crimesim/equilibrium.hpp>
#include <crimesim/io.hpp>
#include <crimesim/pde_solver.hpp>
#include <crimesim/policing.hpp>
#include <crimesim/stability.hpp>
#include <crimesim/version.hpp>

using namespace crimesim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kRuntimeError = 1;
constexpr int kConfigError = 2;

/// Options shared by commands that take a case description.
struct CaseOptions {
    int id = 0;
    std::string config;
    std::optional<double> eta, kappa, tau, pi0, a_static, L, T;

    void add(CLI::App* app) {
        app->add_option("--case", id, "preset 1-10");
        app->add_option("--config", config, "JSON case configuration");
        app->add_option("--eta", eta);
        app->add_option("--kappa", kappa);
        app->add_option("--tau", tau);
        app->add_option("--pi0", pi0);
        app->add_option("--a-static", a_static);
        app->add_option("--L", L);
        app->add_option("-T,--final-time", T);
    }

    CaseConfig resolve() const {
        CaseConfig c;
        if (!config.empty()) {
            json j;
            try {
                j = json::parse(io::read_file(config));
            } catch (const json::exception& e) {
                throw ConfigError(std::string("cannot parse config: ") + e.what());
            }
            if (id) j["case"] = id;
            c = case_from_json(j);
        } else if (id) {
            c = preset(id);
        }
        if (eta) c.params.eta = *eta;
        if (kappa) c.params.kappa = *kappa;
        if (tau) c.params.tau = *tau;
        if (pi0) c.params.pi0 = *pi0;
        if (a_static) c.params.a_static = *a_static;
        if (L) c.params.L = *L;
        if (T) c.T = *T;
        c.validate();
        return c;
    }
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& f : io::split(s)) out.push_back(io::to_double(f));
    return out;
}

json metadata(const CaseConfig& c, double wall, const json& extra = {}) {
    json j = {{"config", c},
              {"seed", c.solver.seed},
              {"version", kVersion},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"wall_seconds", wall}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    return j;
}

void write_fields(const fs::path& dir, const std::string& prefix, double t,
                  const std::vector<std::pair<std::string, const ScalarField*>>& fields, bool pgm) {
    for (const auto& [name, f] : fields) {
        io::write_atomic(dir / io::snapshot_name(prefix, name, t), io::field_csv(*f));
        if (pgm) {
            fs::path p = dir / io::snapshot_name(prefix, name, t);
            p.replace_extension(".pgm");
            io::write_pgm(p, *f);
        }
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- commands ------------------------------------------------------------

int cmd_equilibrium(const CaseOptions& o, const std::string& out) {
    const CaseConfig c = o.resolve();
    const auto e = equilibrium_nondim(c.params);
    std::printf("A_bar=%.4f rho_bar=%.4f pi_bar=%.4f H_bar=%.4f\n", e.a_bar, e.rho_bar, e.pi_bar, e.h_bar);
    const json j = {{"a_bar", e.a_bar}, {"rho_bar", e.rho_bar}, {"pi_bar", e.pi_bar}, {"h_bar", e.h_bar},
                    {"params", c.params}};
    if (!out.empty()) io::write_atomic(out, j.dump(2) + "\n");
    else std::cout << j.dump(2) << "\n";
    return 0;
}

struct StabilityOptions {
    bool taucstar = false, table2 = false;
    std::string sweep, grid, out;
    int cutoff = 20;
    double tau_lo = 1e-2, tau_hi = 1e3;
    std::string taus = "0.5,2.48,2.5,3,5,10";
};

int cmd_stability(const CaseOptions& o, const StabilityOptions& s) {
    CaseConfig c = o.resolve();
    const TauRange range{s.tau_lo, s.tau_hi, 200};
    const auto eq = equilibrium_nondim(c.params);
    bool did = false;
    std::optional<CriticalDelay> crit;
    if (s.taucstar || s.table2) {
        crit = tau_c_star(eq, c.params.eta, c.params.L, s.cutoff, range);
        if (!crit) {
            std::printf("no instability: no mode has a critical delay in [%g, %g]\n", s.tau_lo, s.tau_hi);
            if (s.table2) return kRuntimeError;
        } else if (s.taucstar) {
            const auto cp = char_coeffs(eq, crit->mode, crit->tau, c.params.eta);
            const double w0 = hopf_frequency(cp);
            const auto tr = transversality(eq, c.params.eta, crit->mode, crit->tau);
            std::printf("tau_c_star=%.5f mu_star=%.5f m=%d n=%d omega0=%.5f f_lin=%.5f transversality=%.5f%s\n",
                        crit->tau, crit->mode.mu, crit->mode.m, crit->mode.n, w0, w0 / (2 * std::numbers::pi),
                        tr.derivative, tr.conclusive ? "" : " (inconclusive)");
        }
        did = true;
    }
    if (s.table2 && crit) {
        std::vector<std::pair<double, cplx>> rows;
        std::printf("tau      re        im   (mode mu=%.4f)\n", crit->mode.mu);
        for (double t : parse_list(s.taus)) {
            const cplx l = dominant_root(char_coeffs(eq, crit->mode, t, c.params.eta), crit->mode);
            rows.emplace_back(t, l);
            std::printf("%-8g %+.4f  %+.4f\n", t, l.real(), std::abs(l.imag()));
        }
        if (!s.out.empty()) io::write_atomic(s.out, io::eigen_table_csv(rows));
    }
    if (!s.sweep.empty()) {
        const auto axis = parse_axis(s.sweep);
        std::vector<double> grid;
        if (!s.grid.empty()) grid = parse_list(s.grid);
        else if (axis == SweepAxis::Eta) for (int i = 0; i <= 26; ++i) grid.push_back(0.05 + 0.025 * i);
        else if (axis == SweepAxis::Kappa) for (int i = 0; i <= 25; ++i) grid.push_back(0.5 + 0.1 * i);
        else for (int i = 0; i <= 40; ++i) grid.push_back(std::pow(10.0, -4.0 + 0.1 * i));
        const auto rows = phase_sweep(axis, grid, c.params, s.cutoff, range);
        const auto csv = io::sweep_csv(rows);
        if (!s.out.empty()) io::write_atomic(s.out, csv);
        else std::cout << csv;
        did = true;
    }
    if (!did) {
        const auto r = dominant_growth(eq, c.params.eta, c.params.L, s.cutoff, c.params.tau);
        std::printf("tau=%g dominant=%+.5f%+.5fi at m=%d n=%d mu=%.5f\n", c.params.tau, r.lambda.real(),
                    r.lambda.imag(), r.mode.m, r.mode.n, r.mode.mu);
    }
    return 0;
}

struct SimulateOptions {
    std::string model, out, snapshots;
    bool pgm = false;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const CaseOptions& o, const SimulateOptions& s) {
    CaseConfig c = o.resolve();
    if (!s.model.empty()) {
        if (s.model == "pde") c.model = ModelKind::Pde;
        else if (s.model == "abm") c.model = ModelKind::Abm;
        else throw ConfigError("--model must be pde or abm");
    }
    if (!s.out.empty()) c.output_dir = s.out;
    if (!s.snapshots.empty()) c.snapshot_times = parse_list(s.snapshots);
    if (s.seed) c.solver.seed = *s.seed;
    c.validate();
    const fs::path dir = c.output_dir;
    const auto t0 = std::chrono::steady_clock::now();

    if (c.model == ModelKind::Pde) {
        const Mesh mesh = Mesh::square(c.params.L, c.solver.h);
        PartitionedSolver solver(mesh, c.params, c.solver);
        SystemState st = initial_state(mesh.grid, c.params, c.solver);
        TimeSeries ts;
        std::vector<Snapshot> snaps;
        const auto log = integrate(solver, st, c.T, PoliceMode::Dynamic, ts, c.snapshot_times, &snaps);
        io::write_atomic(dir / (c.name + "_timeseries.csv"), io::timeseries_csv(ts));
        for (const auto& sn : snaps) {
            const ScalarField S = sn.state.crime();
            write_fields(dir, c.name, sn.t,
                         {{"A", &sn.state.A}, {"rho", &sn.state.rho}, {"pi", &sn.state.pi}, {"H", &sn.state.H},
                          {"S", &S}},
                         s.pgm);
        }
        const json extra = {{"model", "pde"},
                            {"steps", log.steps},
                            {"max_iterations", log.max_iterations},
                            {"mean_iterations", log.steps ? double(log.total_iterations) / double(log.steps) : 0.0},
                            {"clamped_nodes", log.clamped}};
        io::write_atomic(dir / (c.name + "_run.json"), metadata(c, seconds_since(t0), extra).dump(2) + "\n");
        if (log.clamped) std::cerr << "warning: attractiveness clamped at the floor " << log.clamped << " times\n";
        const std::size_t n = ts.size() - 1;
        std::printf("t=%g <A>=%.4f <rho>=%.4f <pi>=%.4f <H>=%.4f <S>=%.4f (max iterations/step %d)\n", ts.time(n),
                    ts.data[0][n], ts.data[1][n], ts.data[2][n], ts.data[3][n], ts.data[4][n], log.max_iterations);
    } else {
        AbmRunConfig a;
        a.params = c.lattice_params();
        a.side = c.abm_side;
        a.T = c.T;
        a.mode = c.abm_mode;
        a.seed = c.solver.seed;
        a.perturbation = c.solver.seed_perturbation;
        a.snapshot_times = c.snapshot_times;
        const auto r = run_abm(a);
        const std::string prefix = "abm_" + c.name;
        io::write_atomic(dir / (prefix + "_timeseries.csv"), io::timeseries_csv(r.series));
        for (const auto& f : r.snapshots)
            write_fields(dir, prefix, f.t, {{"A", &f.A}, {"rho", &f.rho}, {"pi", &f.pi}, {"H", &f.H}, {"S", &f.S}},
                         s.pgm);
        const json extra = {{"model", "abm"},
                            {"abm_params", a.params},
                            {"abm_mode", a.mode == AbmMode::Expectation ? "expectation" : "stochastic"},
                            {"rng_seed", a.seed},
                            {"police_total", r.final_state.total_police()}};
        io::write_atomic(dir / (prefix + "_run.json"), metadata(c, seconds_since(t0), extra).dump(2) + "\n");
        const std::size_t n = r.series.size() - 1;
        const auto& ts = r.series;
        std::printf("t=%g <A>=%.4f <rho>=%.4f <pi>=%.4f <H>=%.4f <S>=%.4f\n", ts.time(n), ts.data[0][n],
                    ts.data[1][n], ts.data[2][n], ts.data[3][n], ts.data[4][n]);
    }
    return 0;
}

struct CompareOptions {
    std::string out = "out", strategies = "optimal,fixed,realistic";
    double settle = 100, switch_time = 200, mass = 50, mu = 5, Ac = 1.5, realistic_tau = 5;
};

int cmd_compare(const CaseOptions& o, const CompareOptions& s) {
    CaseOptions oo = o;
    if (!oo.id && oo.config.empty()) oo.id = 3;
    if (!oo.T) oo.T = 600.0;
    CaseConfig c = oo.resolve();
    std::vector<StrategySpec> specs;
    for (const auto& name : io::split(s.strategies)) {
        StrategySpec sp;
        sp.kind = parse_strategy(name);
        sp.mass = s.mass;
        sp.fixed_mu = s.mu;
        sp.fixed_Ac = s.Ac;
        sp.switch_time = s.switch_time;
        sp.realistic_tau = s.realistic_tau;
        specs.push_back(sp);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = compare_strategies(c.params, c.solver, specs, c.T, s.settle);
    const fs::path dir = s.out;
    io::write_atomic(dir / (c.name + "_prelude_timeseries.csv"), io::timeseries_csv(r.prelude));
    json report = json::array();
    for (const auto& b : r.branches) {
        const std::string k = to_string(b.kind);
        io::write_atomic(dir / (c.name + "_" + k + "_timeseries.csv"), io::timeseries_csv(b.series));
        report.push_back({{"strategy", k},
                          {"mean_S", b.mean_S},
                          {"window", {b.window_begin, b.window_end}},
                          {"mass", b.mass}});
        std::printf("%-10s mean_S=%.4f window=[%g, %g]\n", k.c_str(), b.mean_S, b.window_begin, b.window_end);
    }
    io::write_atomic(dir / (c.name + "_comparison.json"), report.dump(2) + "\n");
    io::write_atomic(dir / (c.name + "_compare_run.json"), metadata(c, seconds_since(t0)).dump(2) + "\n");
    return 0;
}

struct AnalyzeOptions {
    std::string input, out, spectrum, return_map, amplitude;
    std::vector<std::string> portrait;
    std::vector<double> window;
    std::size_t stride = 50;
    int subphases = 1;
};

int cmd_analyze(const AnalyzeOptions& a) {
    const TimeSeries ts = io::parse_timeseries_csv(io::read_file(a.input));
    double w0 = ts.time(0), w1 = ts.time(ts.size() - 1);
    if (!a.window.empty()) {
        if (a.window.size() != 2) throw ConfigError("--window takes two values");
        w0 = a.window[0];
        w1 = a.window[1];
    }
    const fs::path dir = a.out.empty() ? fs::path(".") : fs::path(a.out);
    const std::string stem = fs::path(a.input).stem().string();
    bool did = false;
    if (!a.spectrum.empty()) {
        const auto sp = power_spectrum(ts, a.spectrum, w0, w1);
        const double f = peak_frequency(sp);
        std::printf("peak_frequency=%.5f fundamental=%.5f bin=%.5f\n", f, f / a.subphases, sp.bin_width);
        io::write_atomic(dir / (stem + "_" + a.spectrum + "_spectrum.csv"), io::spectrum_csv(sp));
        did = true;
    }
    if (!a.return_map.empty()) {
        io::write_atomic(dir / (stem + "_" + a.return_map + "_return_map.csv"),
                         io::pairs_csv(return_map(ts, a.return_map, a.stride, w0, w1)));
        did = true;
    }
    if (!a.portrait.empty()) {
        if (a.portrait.size() != 2) throw ConfigError("--portrait takes two channel names");
        const auto pts = phase_portrait(ts, a.portrait[0], a.portrait[1], w0, w1);
        io::write_atomic(dir / (stem + "_" + a.portrait[0] + "_" + a.portrait[1] + "_portrait.csv"), io::pairs_csv(pts));
        did = true;
    }
    if (!a.amplitude.empty()) {
        std::printf("amplitude=%.6g\n", oscillation_amplitude(ts, a.amplitude, w0, w1));
        did = true;
    }
    if (!did) throw ConfigError("analyze needs --spectrum, --return-map, --portrait or --amplitude");
    return 0;
}

int cmd_mismatch(const std::string& input, const std::string& out, double alpha, double beta) {
    const auto beats = io::parse_beats_csv(io::read_file(input));
    const auto m = mismatch(beats, alpha, beta);
    const auto csv = io::mismatch_csv(beats, m);
    if (!out.empty()) io::write_atomic(out, csv);
    else std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crime dynamics with delayed police response: simulation and stability toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CaseOptions eq_o, st_o, sim_o, cmp_o;
    std::string eq_out;
    auto* eq = app.add_subcommand("equilibrium", "homogeneous steady state");
    eq_o.add(eq);
    eq->add_option("--out", eq_out, "JSON output file");

    StabilityOptions st;
    auto* stab = app.add_subcommand("stability", "linear stability and Hopf threshold");
    st_o.add(stab);
    stab->add_flag("--taucstar", st.taucstar, "critical delay over all modes");
    stab->add_flag("--table2", st.table2, "dominant eigenvalue at the critical mode for several delays");
    stab->add_option("--taus", st.taus, "comma-separated delays for --table2");
    stab->add_option("--sweep", st.sweep, "eta | kappa | pi0")->check(CLI::IsMember({"eta", "kappa", "pi0"}));
    stab->add_option("--grid", st.grid, "comma-separated sweep values");
    stab->add_option("--cutoff", st.cutoff, "largest mode index")->check(CLI::PositiveNumber);
    stab->add_option("--tau-min", st.tau_lo);
    stab->add_option("--tau-max", st.tau_hi);
    stab->add_option("--out", st.out, "CSV output file");

    SimulateOptions sim;
    auto* simc = app.add_subcommand("simulate", "run the PDE or lattice model");
    sim_o.add(simc);
    simc->add_option("--model", sim.model, "pde | abm");
    simc->add_option("--out", sim.out, "output directory");
    simc->add_option("--snapshots", sim.snapshots, "comma-separated snapshot times");
    simc->add_flag("--pgm", sim.pgm, "also write graymap renders");
    simc->add_option("--seed", sim.seed);

    CompareOptions cmp;
    auto* cmpc = app.add_subcommand("compare", "fixed / optimal / realistic policing");
    cmp_o.add(cmpc);
    cmpc->add_option("--out", cmp.out, "output directory");
    cmpc->add_option("--strategies", cmp.strategies);
    cmpc->add_option("--switch-time", cmp.switch_time);
    cmpc->add_option("--settle", cmp.settle, "delay after the switch before averaging");
    cmpc->add_option("--mass", cmp.mass);
    cmpc->add_option("--fixed-mu", cmp.mu);
    cmpc->add_option("--fixed-ac", cmp.Ac);
    cmpc->add_option("--realistic-tau", cmp.realistic_tau);

    AnalyzeOptions an;
    auto* anc = app.add_subcommand("analyze", "post-process a time series CSV");
    anc->add_option("--input", an.input)->required();
    anc->add_option("--out", an.out, "output directory");
    anc->add_option("--spectrum", an.spectrum, "channel");
    anc->add_option("--window", an.window)->expected(2);
    anc->add_option("--subphases", an.subphases)->check(CLI::PositiveNumber);
    anc->add_option("--return-map", an.return_map, "channel");
    anc->add_option("--stride", an.stride);
    anc->add_option("--portrait", an.portrait)->expected(2);
    anc->add_option("--amplitude", an.amplitude, "channel");

    std::string mm_in, mm_out;
    double alpha = 0.5, beta = 0.5;
    auto* mm = app.add_subcommand("mismatch", "beat-level crime-to-staffing mismatch");
    mm->add_option("--input", mm_in)->required();
    mm->add_option("--out", mm_out);
    mm->add_option("--alpha", alpha);
    mm->add_option("--beta", beta);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    try {
        if (*eq) return cmd_equilibrium(eq_o, eq_out);
        if (*stab) return cmd_stability(st_o, st);
        if (*simc) return cmd_simulate(sim_o, sim);
        if (*cmpc) return cmd_compare(cmp_o, cmp);
        if (*anc) return cmd_analyze(an);
        if (*mm) return cmd_mismatch(mm_in, mm_out, alpha, beta);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return 0;
}
