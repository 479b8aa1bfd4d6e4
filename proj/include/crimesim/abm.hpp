#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "equilibrium.hpp"
#include "field.hpp"
#include "params.hpp"
#include "timeseries.hpp"

namespace crimesim {

/// Dimensional lattice state; arrays are row-major with `side` sites per axis.
struct LatticeState {
    std::size_t side = 0;
    double h = 1.0;
    std::vector<double> B, n, m, H;
    double t = 0.0;

    LatticeState() = default;
    LatticeState(std::size_t sites_per_axis, double spacing)
        : side(sites_per_axis), h(spacing), B(sites_per_axis * sites_per_axis, 0.0), n(B), m(B), H(B) {
        if (side < 1 || !(h > 0)) throw std::invalid_argument("lattice needs side >= 1 and h > 0");
    }

    std::size_t sites() const { return side * side; }
    double total_police() const {
        double s = 0;
        for (double v : m) s += v;
        return s;
    }
};

enum class AbmMode { Expectation, Stochastic };

namespace detail {

/// Neighbour in direction d (E, W, N, S); a missing neighbour maps to the site itself.
inline std::size_t lattice_neighbour(std::size_t side, std::size_t s, int d) {
    const std::size_t x = s % side, y = s / side;
    switch (d) {
        case 0: return x + 1 < side ? s + 1 : s;
        case 1: return x > 0 ? s - 1 : s;
        case 2: return y + 1 < side ? s + side : s;
        default: return y > 0 ? s - side : s;
    }
}

inline bool is_integral(const std::vector<double>& v) {
    for (double x : v)
        if (!(x >= 0) || std::abs(x - std::round(x)) > 1e-9) return false;
    return true;
}

}  // namespace detail

inline std::vector<double> attractiveness(const LatticeState& s, const AbmParams& p) {
    std::vector<double> A(s.sites());
    for (std::size_t i = 0; i < A.size(); ++i) A[i] = p.a_static + s.B[i];
    return A;
}

/// p^c_s = 1 - exp(-A_s exp(-beta m_s / h^2) dt).
inline std::vector<double> crime_probability(const LatticeState& s, const AbmParams& p) {
    std::vector<double> pc(s.sites());
    for (std::size_t i = 0; i < pc.size(); ++i) {
        const double A = p.a_static + s.B[i];
        pc[i] = -std::expm1(-A * std::exp(-p.beta * s.m[i] / (p.h * p.h)) * p.dt);
    }
    return pc;
}

/// One lattice update. All right-hand sides use the state at time t.
inline LatticeState abm_step(const LatticeState& s, const AbmParams& p, AbmMode mode = AbmMode::Expectation,
                             std::mt19937_64* rng = nullptr) {
    const std::size_t N = s.sites(), side = s.side;
    if (s.B.size() != N || s.n.size() != N || s.m.size() != N || s.H.size() != N)
        throw std::invalid_argument("lattice arrays have inconsistent sizes");
    if (mode == AbmMode::Stochastic) {
        if (!rng) throw std::invalid_argument("stochastic mode needs a random generator");
        if (!detail::is_integral(s.n) || !detail::is_integral(s.m))
            throw std::invalid_argument("stochastic mode needs integer agent counts");
    }
    const double h2 = p.h * p.h;
    const auto A = attractiveness(s, p);
    const auto pc = crime_probability(s, p);

    std::vector<double> T(N), V(N), deter(N), E(N), pp(N);
    for (std::size_t i = 0; i < N; ++i) {
        if (!(A[i] >= kPositivityFloor)) throw std::domain_error("attractiveness below floor");
        double t = 0, v = 0;
        for (int d = 0; d < 4; ++d) {
            const std::size_t r = detail::lattice_neighbour(side, i, d);
            t += A[r];
            v += s.H[r];
        }
        T[i] = t;
        V[i] = v;
        deter[i] = std::exp(-p.beta * s.m[i] / h2);
        E[i] = s.n[i] * pc[i];
        pp[i] = -std::expm1(-p.sigma * E[i]);
    }

    LatticeState o = s;
    o.t = s.t + p.dt;
    const double decay = 1.0 - p.omega * p.dt;
    const double itau = p.dt / p.tau_dim;
    const double gen = p.gamma * (1.0 - p.sigma) * p.dt;

    if (mode == AbmMode::Expectation) {
        for (std::size_t i = 0; i < N; ++i) {
            double lapB = -4.0 * s.B[i], arrive = 0.0, patrol = 0.0;
            for (int d = 0; d < 4; ++d) {
                const std::size_t r = detail::lattice_neighbour(side, i, d);
                lapB += s.B[r];
                arrive += s.n[r] * (1.0 - pc[r]) / T[r];
                if (s.m[r] > 0) {
                    if (!(V[r] > 0)) throw std::domain_error("police walk weights vanish");
                    patrol += s.m[r] * (1.0 - pp[r]) / V[r];
                }
            }
            o.B[i] = (s.B[i] + 0.25 * p.eta * lapB) * decay + p.theta * E[i];
            o.n[i] = A[i] * arrive + deter[i] * gen;
            o.H[i] = (1.0 - itau) * s.H[i] + itau * E[i] / (h2 * p.dt);
            o.m[i] = s.H[i] * patrol + s.m[i] * pp[i];
        }
        return o;
    }

    // stochastic: sampled burglaries, multinomial moves, Poisson generation
    auto& g = *rng;
    std::fill(o.n.begin(), o.n.end(), 0.0);
    std::fill(o.m.begin(), o.m.end(), 0.0);
    std::vector<double> Es(N);
    for (std::size_t i = 0; i < N; ++i) {
        const auto ni = static_cast<long long>(std::llround(s.n[i]));
        const long long burg = ni > 0 ? std::binomial_distribution<long long>(ni, pc[i])(g) : 0;
        Es[i] = double(burg);
        long long left = ni - burg;
        double wleft = T[i];
        for (int d = 0; d < 4 && left > 0; ++d) {
            const std::size_t r = detail::lattice_neighbour(side, i, d);
            const double q = d == 3 ? 1.0 : std::min(1.0, A[r] / wleft);
            const long long k = d == 3 ? left : std::binomial_distribution<long long>(left, q)(g);
            o.n[r] += double(k);
            left -= k;
            wleft -= A[r];
        }
        const auto mi = static_cast<long long>(std::llround(s.m[i]));
        const long long busy = mi > 0 ? std::binomial_distribution<long long>(mi, pp[i])(g) : 0;
        o.m[i] += double(busy);
        long long free = mi - busy;
        if (free > 0 && !(V[i] > 0)) throw std::domain_error("police walk weights vanish");
        double vleft = V[i];
        for (int d = 0; d < 4 && free > 0; ++d) {
            const std::size_t r = detail::lattice_neighbour(side, i, d);
            const double q = d == 3 ? 1.0 : (vleft > 0 ? std::min(1.0, s.H[r] / vleft) : 0.0);
            const long long k = d == 3 ? free : std::binomial_distribution<long long>(free, q)(g);
            o.m[r] += double(k);
            free -= k;
            vleft -= s.H[r];
        }
    }
    for (std::size_t i = 0; i < N; ++i) {
        double lapB = -4.0 * s.B[i];
        for (int d = 0; d < 4; ++d) lapB += s.B[detail::lattice_neighbour(side, i, d)];
        o.B[i] = (s.B[i] + 0.25 * p.eta * lapB) * decay + p.theta * Es[i];
        o.n[i] += double(std::poisson_distribution<long long>(deter[i] * gen)(g));
        o.H[i] = (1.0 - itau) * s.H[i] + itau * Es[i] / (h2 * p.dt);
    }
    return o;
}

/// Conversion of lattice quantities to the continuum scaling.
struct AbmScaling {
    double omega, beta, h, eps_L2;  // eps_L2 = theta dt L_char^2

    explicit AbmScaling(const AbmParams& p)
        : omega(p.omega), beta(p.beta), h(p.h),
          eps_L2(p.theta * p.dt * (p.h * p.h / p.dt) / p.omega) {}

    double A(double B, double a_static) const { return (a_static + B) / omega; }
    double rho(double n) const { return eps_L2 * n / (h * h); }
    double pi(double m) const { return beta * m / (h * h); }
    double H(double Hd) const { return eps_L2 * Hd / omega; }
    double time(double t) const { return omega * t; }
};

/// Nondimensional fields of a lattice state on the matching node grid.
struct AbmFields {
    double t = 0.0;
    ScalarField A, rho, pi, H, S;
};

inline AbmFields abm_fields(const LatticeState& s, const AbmParams& p, double L) {
    const AbmScaling sc(p);
    const Grid g(s.side, L / double(s.side - 1));
    AbmFields f{sc.time(s.t), ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
    for (std::size_t i = 0; i < s.sites(); ++i) {
        f.A[i] = sc.A(s.B[i], p.a_static);
        f.rho[i] = sc.rho(s.n[i]);
        f.pi[i] = sc.pi(s.m[i]);
        f.H[i] = sc.H(s.H[i]);
        f.S[i] = f.rho[i] * f.A[i] * std::exp(-f.pi[i]);
    }
    return f;
}

inline void record_abm(TimeSeries& ts, const LatticeState& s, const AbmParams& p) {
    const AbmScaling sc(p);
    double a = 0, r = 0, q = 0, h = 0, c = 0;
    for (std::size_t i = 0; i < s.sites(); ++i) {
        const double Ai = sc.A(s.B[i], p.a_static), ri = sc.rho(s.n[i]), pi = sc.pi(s.m[i]);
        a += Ai;
        r += ri;
        q += pi;
        h += sc.H(s.H[i]);
        c += ri * Ai * std::exp(-pi);
    }
    const double N = double(s.sites());
    ts.push(a / N, r / N, q / N, h / N, c / N);
}

struct AbmRunConfig {
    AbmParams params;
    std::size_t side = 101;
    double T = 150.0;  // nondimensional
    AbmMode mode = AbmMode::Expectation;
    std::uint64_t seed = 12345;
    double rho0 = 0.6;
    double perturbation = 1e-4;  // on nondimensional rho
    int sample_every = 8;        // lattice steps per recorded sample
    std::vector<double> snapshot_times;  // nondimensional
};

/// Initial lattice data mirroring the continuum initial conditions.
inline LatticeState abm_initial_state(const AbmRunConfig& c) {
    const AbmParams& p = c.params;
    const AbmScaling sc(p);
    LatticeState s(c.side, p.h);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(-c.perturbation, c.perturbation);
    const double B0 = p.theta * p.gamma * (1.0 - p.sigma) / p.omega;
    const double m0 = p.M / double(s.sites());
    for (std::size_t i = 0; i < s.sites(); ++i) {
        s.B[i] = B0;
        const double rho = c.rho0 + (c.perturbation > 0 ? u(rng) : 0.0);
        s.n[i] = rho * p.h * p.h / sc.eps_L2;
        s.m[i] = m0;
    }
    if (c.mode == AbmMode::Stochastic) {
        for (auto& v : s.n) v = double(std::poisson_distribution<long long>(v)(rng));
        // integer police with exact total
        const auto total = static_cast<long long>(std::llround(p.M));
        std::fill(s.m.begin(), s.m.end(), 0.0);
        std::uniform_int_distribution<std::size_t> site(0, s.sites() - 1);
        for (long long k = 0; k < total; ++k) s.m[site(rng)] += 1.0;
    }
    const auto pc = crime_probability(s, p);
    for (std::size_t i = 0; i < s.sites(); ++i) s.H[i] = s.n[i] * pc[i] / (p.h * p.h * p.dt);
    return s;
}

struct AbmRunResult {
    TimeSeries series;
    std::vector<AbmFields> snapshots;
    LatticeState final_state;
};

inline AbmRunResult run_abm(const AbmRunConfig& c) {
    c.params.validate();
    if (c.sample_every < 1) throw ConfigError("sample_every must be at least 1");
    const AbmParams& p = c.params;
    const double L = nondimensionalize(p, c.side).L;
    const AbmScaling sc(p);
    std::mt19937_64 rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
    AbmRunResult res;
    LatticeState s = abm_initial_state(c);
    res.series.t0 = 0.0;
    res.series.dt_sample = sc.time(p.dt) * c.sample_every;
    record_abm(res.series, s, p);
    const long steps = std::lround(c.T / sc.time(p.dt));
    const double half = 0.5 * sc.time(p.dt);
    auto snap = [&](const LatticeState& st) {
        for (double ts : c.snapshot_times)
            if (std::abs(sc.time(st.t) - ts) <= half) res.snapshots.push_back(abm_fields(st, p, L));
    };
    snap(s);
    for (long k = 1; k <= steps; ++k) {
        s = abm_step(s, p, c.mode, &rng);
        if (k % c.sample_every == 0) record_abm(res.series, s, p);
        snap(s);
    }
    res.final_state = std::move(s);
    return res;
}

/// Lattice parameters reproducing a continuum parameter set on a side x side lattice
/// (omega = 1/15, Sigma = 0, Gamma = 0.0285, h = 1, beta = 1; theta follows from kappa).
inline AbmParams abm_params_for(const ModelParams& m, std::size_t side, const LatticeScales& scales = {}) {
    return dimensionalize(m, scales, side);
}

/// Lattice state at the homogeneous fixed point.
inline LatticeState abm_equilibrium_state(const AbmParams& p, std::size_t side) {
    const auto e = equilibrium_abm(p, side * side);
    LatticeState s(side, p.h);
    std::fill(s.B.begin(), s.B.end(), e.B);
    std::fill(s.n.begin(), s.n.end(), e.n);
    std::fill(s.m.begin(), s.m.end(), e.m);
    std::fill(s.H.begin(), s.H.end(), e.H);
    return s;
}

}  // namespace crimesim
