#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "params.hpp"
#include "pde_solver.hpp"
#include "timeseries.hpp"

namespace crimesim {

enum class StrategyKind { None, Fixed, Optimal, Realistic };

inline const char* to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::Fixed: return "fixed";
        case StrategyKind::Optimal: return "optimal";
        case StrategyKind::Realistic: return "realistic";
        default: return "none";
    }
}

inline StrategyKind parse_strategy(const std::string& s) {
    if (s == "none") return StrategyKind::None;
    if (s == "fixed") return StrategyKind::Fixed;
    if (s == "optimal") return StrategyKind::Optimal;
    if (s == "realistic") return StrategyKind::Realistic;
    throw std::invalid_argument("unknown strategy: " + s);
}

struct StrategySpec {
    StrategyKind kind = StrategyKind::Realistic;
    double mass = 50.0;
    double fixed_mu = 5.0;
    double fixed_Ac = 1.5;
    double switch_time = 200.0;
    double realistic_tau = 5.0;

    void validate() const {
        if (!(mass >= 0)) throw ConfigError("police mass must be non-negative");
        if (!(fixed_mu > 0)) throw ConfigError("fixed_mu must be positive");
        if (!(switch_time >= 0)) throw ConfigError("switch_time must be non-negative");
        if (!(realistic_tau > 0)) throw ConfigError("realistic_tau must be positive");
    }
};

/// Deployment frozen from an attractiveness snapshot, scaled to total mass spec.mass.
inline ScalarField fixed_field(const ScalarField& A, const StrategySpec& spec) {
    ScalarField pi(A.grid);
    for (std::size_t i = 0; i < A.size(); ++i) {
        const double v = 0.5 * (1.0 - std::tanh(spec.fixed_mu * (A[i] - spec.fixed_Ac)));
        pi[i] = -std::log(std::max(v, 1e-12));
    }
    const double total = pi.integral();
    if (!(total > 0)) throw std::domain_error("fixed deployment integrates to zero");
    const double scale = spec.mass / total;
    for (auto& v : pi.values) v *= scale;
    return pi;
}

/// Minimiser of int e^{-pi} rho A subject to pi >= 0, int pi = mass:
/// pi = max(0, log(rho A) - c) with c fixed by the mass constraint.
inline ScalarField optimal_field(const ScalarField& rho, const ScalarField& A, double mass,
                                 double* level = nullptr) {
    if (!(rho.grid == A.grid)) throw std::invalid_argument("fields live on different grids");
    if (!(mass > 0)) throw std::invalid_argument("police mass must be positive");
    const Grid& g = A.grid;
    const std::size_t N = g.size();
    std::vector<double> lg(N), w(N);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t iy = 0; iy < g.n; ++iy)
        for (std::size_t ix = 0; ix < g.n; ++ix) {
            const std::size_t i = g.index(ix, iy);
            const double s = rho[i] * A[i];
            w[i] = g.weight(ix, iy);
            lg[i] = s > 0 ? std::log(s) : -std::numeric_limits<double>::infinity();
            if (s > 0) {
                lo = std::min(lo, lg[i]);
                hi = std::max(hi, lg[i]);
            }
        }
    if (!std::isfinite(hi)) throw std::domain_error("rho*A is nonpositive everywhere");
    const double area = g.side() * g.side();
    auto mass_at = [&](double c) {
        double s = 0;
        for (std::size_t i = 0; i < N; ++i)
            if (lg[i] > c) s += w[i] * (lg[i] - c);
        return s;
    };
    double a = lo - mass / area, b = hi;
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        const double c = 0.5 * (a + b);
        (mass_at(c) > mass ? a : b) = c;
    }
    // exact level on the final active set (mass is affine in c there)
    double c = 0.5 * (a + b);
    double sw = 0, swl = 0;
    for (std::size_t i = 0; i < N; ++i)
        if (lg[i] > c) {
            sw += w[i];
            swl += w[i] * lg[i];
        }
    if (sw > 0) {
        const double exact = (swl - mass) / sw;
        if (std::abs(exact - c) <= 1e-6 * std::max(1.0, std::abs(c))) c = exact;
    }
    ScalarField pi(g);
    for (std::size_t i = 0; i < N; ++i) pi[i] = lg[i] > c ? lg[i] - c : 0.0;
    if (level) *level = c;
    return pi;
}

struct BranchResult {
    StrategyKind kind = StrategyKind::None;
    TimeSeries series;  // starts at the switch time
    std::vector<Snapshot> snapshots;
    double mean_S = 0.0;
    double window_begin = 0.0, window_end = 0.0;
    double mass = 0.0;
    IntegrationLog log;
};

struct ComparisonResult {
    TimeSeries prelude;  // no-police run up to the switch time
    SystemState at_switch;
    std::vector<BranchResult> branches;
};

inline double window_mean(const TimeSeries& ts, const std::string& channel, double t0, double t1) {
    const auto [a, b] = ts.window(t0, t1);
    if (b <= a) throw std::invalid_argument("empty averaging window");
    const auto& x = ts.channel(channel);
    double s = 0;
    for (std::size_t i = a; i < b; ++i) s += x[i];
    return s / double(b - a);
}

/// Runs the no-police model to spec.switch_time, then one branch per strategy up to T.
/// The reported mean of avgS covers [switch_time + settle, T].
inline ComparisonResult compare_strategies(const ModelParams& base, const SolverConfig& cfg,
                                           const std::vector<StrategySpec>& specs, double T,
                                           double settle = 100.0,
                                           const std::vector<double>& snapshot_times = {}) {
    if (specs.empty()) throw std::invalid_argument("no strategies given");
    const double ts_switch = specs.front().switch_time;
    for (const auto& s : specs) {
        s.validate();
        if (s.switch_time != ts_switch) throw std::invalid_argument("strategies must share the switch time");
    }
    if (!(T > ts_switch + settle)) throw std::invalid_argument("T must exceed switch_time + settle");
    const Mesh mesh = Mesh::square(base.L, cfg.h);

    ComparisonResult out;
    ModelParams free = base;
    free.pi0 = 0.0;
    {
        PartitionedSolver solver(mesh, free, cfg);
        SystemState s = initial_state(mesh.grid, free, cfg);
        std::vector<Snapshot> snaps;
        integrate(solver, s, ts_switch, PoliceMode::Prescribed, out.prelude, snapshot_times, &snaps);
        out.at_switch = s;
    }

    for (const auto& spec : specs) {
        BranchResult br;
        br.kind = spec.kind;
        br.mass = spec.mass;
        SystemState s = out.at_switch;
        const double area = base.L * base.L;
        ModelParams p = base;
        PoliceMode mode = PoliceMode::Prescribed;
        std::function<void(SystemState&)> hook;
        switch (spec.kind) {
            case StrategyKind::None:
                std::fill(s.pi.values.begin(), s.pi.values.end(), 0.0);
                break;
            case StrategyKind::Fixed:
                s.pi = fixed_field(s.A, spec);
                break;
            case StrategyKind::Optimal:
                hook = [&spec](SystemState& st) { st.pi = optimal_field(st.rho, st.A, spec.mass); };
                break;
            case StrategyKind::Realistic:
                p.tau = spec.realistic_tau;
                mode = PoliceMode::Dynamic;
                std::fill(s.pi.values.begin(), s.pi.values.end(), spec.mass / area);
                break;
        }
        if (hook) hook(s);
        for (std::size_t i = 0; i < s.H.size(); ++i) s.H[i] = s.rho[i] * s.A[i] * std::exp(-s.pi[i]);
        PartitionedSolver solver(mesh, p, cfg);
        br.log = integrate(solver, s, T, mode, br.series, snapshot_times, &br.snapshots, hook);
        br.window_begin = ts_switch + settle;
        br.window_end = T;
        br.mean_S = window_mean(br.series, "avgS", br.window_begin, br.window_end);
        out.branches.push_back(std::move(br));
    }
    return out;
}

}  // namespace crimesim
