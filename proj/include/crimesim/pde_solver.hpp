#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "equilibrium.hpp"
#include "fem.hpp"
#include "field.hpp"
#include "params.hpp"
#include "timeseries.hpp"

namespace crimesim {

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PositivityLoss : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    double dt = 1.0 / 50.0;
    double tol1 = 1e-6;
    double tol2 = 1e-6;
    double tol3 = 1e-6;
    int max_iters = 50;
    double linear_tol = 1e-10;
    double seed_perturbation = 1e-4;
    std::uint64_t seed = 12345;
    bool lenient = true;  // clamp A at the floor instead of throwing
    double h = 0.1;

    void validate() const {
        if (!(dt > 0)) throw ConfigError("dt must be positive");
        if (!(tol1 > 0 && tol2 > 0 && tol3 > 0)) throw ConfigError("tolerances must be positive");
        if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
        if (!(linear_tol > 0)) throw ConfigError("linear_tol must be positive");
        if (!(seed_perturbation >= 0)) throw ConfigError("seed_perturbation must be non-negative");
        if (!(h > 0)) throw ConfigError("h must be positive");
    }
};

struct SystemState {
    ScalarField A, rho, pi, H;
    double t = 0.0;

    ScalarField crime() const {
        ScalarField S(A.grid);
        for (std::size_t i = 0; i < S.size(); ++i) S[i] = rho[i] * A[i] * std::exp(-pi[i]);
        return S;
    }
};

/// Dynamic: all four equations. Prescribed: pi is held at its current value
/// and only the attractiveness/criminal equations (plus the H lag) advance.
enum class PoliceMode { Dynamic, Prescribed };

struct StepStats {
    int iterations = 0;
    int linear_iterations = 0;
    std::size_t clamped = 0;
};

/// Initial data: A = A^st + kappa, rho = 0.6 + seeded noise, pi = pi0, H = rho A e^{-pi}.
inline SystemState initial_state(const Grid& g, const ModelParams& p, const SolverConfig& cfg,
                                 double rho0 = 0.6) {
    SystemState s{ScalarField(g, p.a_static + p.kappa), ScalarField(g, rho0), ScalarField(g, p.pi0),
                  ScalarField(g), 0.0};
    if (cfg.seed_perturbation > 0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(-cfg.seed_perturbation, cfg.seed_perturbation);
        for (auto& v : s.rho.values) v += u(rng);
    }
    for (std::size_t i = 0; i < g.size(); ++i) s.H[i] = s.rho[i] * s.A[i] * std::exp(-s.pi[i]);
    return s;
}

/// Homogeneous equilibrium as a state.
inline SystemState equilibrium_state(const Grid& g, const ModelParams& p) {
    const auto e = equilibrium_nondim(p);
    return {ScalarField(g, e.a_bar), ScalarField(g, e.rho_bar), ScalarField(g, e.pi_bar),
            ScalarField(g, e.h_bar), 0.0};
}

/// BDF1 time stepping with the iterative partitioned scheme on Q1 elements.
class PartitionedSolver {
public:
    PartitionedSolver(const Mesh& mesh, const ModelParams& p, const SolverConfig& cfg)
        : mesh_(mesh), asm_(mesh), p_(p), cfg_(cfg) {
        p_.validate();
        cfg_.validate();
        M_ = asm_.mass();
        m_ones_ = M_ * Vec::Ones(Eigen::Index(mesh.nodes()));
        opA_ = asm_.empty();
        opR_ = asm_.empty();
        opP_ = asm_.empty();
    }

    const Mesh& mesh() const { return mesh_; }
    const ModelParams& params() const { return p_; }
    const SolverConfig& config() const { return cfg_; }
    const Assembler& assembler() const { return asm_; }
    const SpMat& mass_matrix() const { return M_; }

    StepStats step(SystemState& s, PoliceMode mode = PoliceMode::Dynamic) {
        const Eigen::Index N = Eigen::Index(mesh_.nodes());
        const double idt = 1.0 / cfg_.dt, itau = 1.0 / p_.tau;
        Eigen::Map<const Vec> An(s.A.values.data(), N), rn(s.rho.values.data(), N),
            pn(s.pi.values.data(), N), Hn(s.H.values.data(), N);

        const Vec rhsA0 = p_.a_static * m_ones_ + idt * (M_ * An);
        const Vec rhsR0 = idt * (M_ * rn);
        const Vec rhsP = idt * (M_ * pn);

        Vec Ak = An, rk = rn, pk = pn, Hk = Hn;
        Vec Anew(N), rnew(N), pnew(N), Hnew(N), epk(N);
        std::vector<double> w(static_cast<std::size_t>(N)), pot(static_cast<std::size_t>(N));
        StepStats st;

        for (int k = 1;; ++k) {
            epk = (-pk).array().exp();

            // A: [(1/dt+1) M + eta K - N(rho e^{-pi})] A = A^st M1 + M A^n / dt
            for (Eigen::Index i = 0; i < N; ++i) w[std::size_t(i)] = rk[i] * epk[i];
            asm_.assemble({.mass = idt + 1.0, .stiffness = p_.eta, .reaction = -1.0, .reaction_weight = &w}, opA_);
            Anew = solve(opA_, rhsA0, Ak, st);
            for (Eigen::Index i = 0; i < N; ++i)
                if (!(Anew[i] >= kPositivityFloor)) {
                    if (!cfg_.lenient || !std::isfinite(Anew[i])) {
                        std::ostringstream os;
                        os << "attractiveness fell below floor at t=" << s.t + cfg_.dt;
                        throw PositivityLoss(os.str());
                    }
                    Anew[i] = kPositivityFloor;
                    ++st.clamped;
                }

            // rho: [M/dt + K - D(A) + N(A e^{-pi})] rho = kappa M e^{-pi} + M rho^n / dt
            for (Eigen::Index i = 0; i < N; ++i) {
                pot[std::size_t(i)] = Anew[i];
                w[std::size_t(i)] = Anew[i] * epk[i];
            }
            asm_.assemble({.mass = idt, .stiffness = 1.0, .reaction = 1.0, .reaction_weight = &w,
                           .drift = 1.0, .drift_potential = &pot},
                          opR_);
            rnew = solve(opR_, p_.kappa * (M_ * epk) + rhsR0, rk, st);

            // H: nodal lag of the crime rate
            Hnew = (itau * (rnew.array() * Anew.array() * epk.array()) + idt * Hn.array()) / (idt + itau);

            if (mode == PoliceMode::Dynamic) {
                // pi: [M/dt + K - D(H)] pi = M pi^n / dt
                for (Eigen::Index i = 0; i < N; ++i) {
                    if (!(Hnew[i] > 0)) {
                        std::ostringstream os;
                        os << "lagged crime signal lost positivity at t=" << s.t + cfg_.dt;
                        throw PositivityLoss(os.str());
                    }
                    pot[std::size_t(i)] = Hnew[i];
                }
                asm_.assemble({.mass = idt, .stiffness = 1.0, .drift = 1.0, .drift_potential = &pot}, opP_);
                pnew = solve(opP_, rhsP, pk, st);
            } else {
                pnew = pn;
            }

            const double e1 = rel_change(Anew, Ak), e2 = rel_change(rnew, rk), e3 = rel_change(pnew, pk);
            Ak.swap(Anew);
            rk.swap(rnew);
            pk.swap(pnew);
            Hk.swap(Hnew);
            st.iterations = k;
            if (e1 < cfg_.tol1 && e2 < cfg_.tol2 && e3 < cfg_.tol3) break;
            if (k >= cfg_.max_iters) {
                std::ostringstream os;
                os << "partitioned iteration did not converge within " << cfg_.max_iters
                   << " iterations at t=" << s.t + cfg_.dt;
                throw NonConvergence(os.str());
            }
        }
        Eigen::Map<Vec>(s.A.values.data(), N) = Ak;
        Eigen::Map<Vec>(s.rho.values.data(), N) = rk;
        Eigen::Map<Vec>(s.pi.values.data(), N) = pk;
        Eigen::Map<Vec>(s.H.values.data(), N) = Hk;
        s.t += cfg_.dt;
        return st;
    }

private:
    static double rel_change(const Vec& x, const Vec& prev) {
        const double nx = x.norm(), d = (x - prev).norm();
        return nx > 0 ? d / nx : d;
    }

    Vec solve(const SpMat& A, const Vec& b, const Vec& guess, StepStats& st) {
        krylov_.setTolerance(cfg_.linear_tol);
        krylov_.setMaxIterations(1000);
        krylov_.compute(A);
        Vec x = krylov_.solveWithGuess(b, guess);
        if (krylov_.info() == Eigen::Success) {
            st.linear_iterations += int(krylov_.iterations());
            return x;
        }
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        Eigen::SparseMatrix<double> Ac = A;
        lu.compute(Ac);
        if (lu.info() != Eigen::Success) throw NonConvergence("sparse factorisation failed");
        return lu.solve(b);
    }

    Mesh mesh_;
    Assembler asm_;
    ModelParams p_;
    SolverConfig cfg_;
    SpMat M_, opA_, opR_, opP_;
    Vec m_ones_;
    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<double>> krylov_;
};

inline void record(TimeSeries& ts, const SystemState& s) {
    const double area = s.A.grid.side() * s.A.grid.side();
    double a = 0, r = 0, p = 0, h = 0, c = 0;
    const Grid& g = s.A.grid;
    for (std::size_t iy = 0; iy < g.n; ++iy)
        for (std::size_t ix = 0; ix < g.n; ++ix) {
            const std::size_t i = g.index(ix, iy);
            const double w = g.weight(ix, iy);
            a += w * s.A[i];
            r += w * s.rho[i];
            p += w * s.pi[i];
            h += w * s.H[i];
            c += w * s.rho[i] * s.A[i] * std::exp(-s.pi[i]);
        }
    ts.push(a / area, r / area, p / area, h / area, c / area);
}

struct Snapshot {
    double t = 0.0;
    SystemState state;
};

struct IntegrationLog {
    int max_iterations = 0;
    long total_iterations = 0;
    long steps = 0;
    std::size_t clamped = 0;
};

/// Advances s to t_end, recording each step into ts. before_step runs ahead of every step.
inline IntegrationLog integrate(PartitionedSolver& solver, SystemState& s, double t_end, PoliceMode mode,
                                TimeSeries& ts, const std::vector<double>& snapshot_times = {},
                                std::vector<Snapshot>* snapshots = nullptr,
                                const std::function<void(SystemState&)>& before_step = {}) {
    const double dt = solver.config().dt;
    IntegrationLog log;
    auto take = [&](const SystemState& st) {
        if (!snapshots) return;
        for (double ts_req : snapshot_times)
            if (std::abs(st.t - ts_req) <= 0.5 * dt + 1e-12) snapshots->push_back({st.t, st});
    };
    if (ts.size() == 0) {
        ts.t0 = s.t;
        ts.dt_sample = dt;
        record(ts, s);
        take(s);
    }
    const long steps = std::lround((t_end - s.t) / dt);
    for (long k = 0; k < steps; ++k) {
        if (before_step) before_step(s);
        const StepStats st = solver.step(s, mode);
        log.max_iterations = std::max(log.max_iterations, st.iterations);
        log.total_iterations += st.iterations;
        log.clamped += st.clamped;
        ++log.steps;
        record(ts, s);
        take(s);
    }
    return log;
}

}  // namespace crimesim
