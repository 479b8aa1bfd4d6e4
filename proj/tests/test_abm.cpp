#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <crimesim/abm.hpp>

using namespace crimesim;

namespace {
AbmParams policed() {
    AbmParams p;
    p.M = 900;
    p.sigma = 0.1;
    p.tau_dim = 30;
    return p;
}

LatticeState random_state(std::size_t side, const AbmParams& p, std::mt19937_64& rng, bool integral) {
    LatticeState s(side, p.h);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < s.sites(); ++i) {
        s.B[i] = 0.5 * u(rng);
        s.n[i] = integral ? std::floor(6 * u(rng)) : 3 * u(rng);
        s.m[i] = integral ? std::floor(4 * u(rng)) : 2 * u(rng);
        s.H[i] = 0.05 + u(rng);
    }
    return s;
}
}  // namespace

TEST(Lattice, NeighbourGhostIsSelf) {
    EXPECT_EQ(detail::lattice_neighbour(3, 0, 1), 0u);
    EXPECT_EQ(detail::lattice_neighbour(3, 0, 3), 0u);
    EXPECT_EQ(detail::lattice_neighbour(3, 0, 0), 1u);
    EXPECT_EQ(detail::lattice_neighbour(3, 0, 2), 3u);
    EXPECT_EQ(detail::lattice_neighbour(3, 8, 0), 8u);
    EXPECT_EQ(detail::lattice_neighbour(3, 4, 3), 1u);
}

TEST(CrimeProbability, MonotoneAndPoliceFree) {
    AbmParams p;
    LatticeState s(2, 1.0);
    s.B = {0.1, 0.2, 0.2, 0.2};
    s.m = {0.0, 0.0, 1.0, 3.0};
    const auto pc = crime_probability(s, p);
    EXPECT_LT(pc[0], pc[1]);
    EXPECT_GT(pc[1], pc[2]);
    EXPECT_GT(pc[2], pc[3]);
    p.beta = 0;
    const auto free = crime_probability(s, p);
    const double expect = 1 - std::exp(-(p.a_static + 0.2) * p.dt);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(free[i], expect, 1e-16);
}

TEST(AbmStep, HomogeneousFixedPoint) {
    for (double M : {0.0, 900.0}) {
        auto p = policed();
        p.M = M;
        const auto s = abm_equilibrium_state(p, 30);
        const auto o = abm_step(s, p);
        for (std::size_t i = 0; i < s.sites(); ++i) {
            ASSERT_NEAR(o.B[i], s.B[i], 1e-10 * s.B[i]);
            ASSERT_NEAR(o.n[i], s.n[i], 1e-10 * s.n[i]);
            ASSERT_NEAR(o.H[i], s.H[i], 1e-10 * s.H[i]);
            ASSERT_NEAR(o.m[i], s.m[i], 1e-10 * std::max(1.0, s.m[i]));
        }
    }
}

TEST(AbmStep, PureDecay) {
    AbmParams p;
    p.eta = 0;
    p.gamma = 0;
    LatticeState s(4, 1.0);
    for (std::size_t i = 0; i < s.sites(); ++i) s.B[i] = 0.1 * double(i + 1);
    const auto B0 = s.B;
    for (int k = 0; k < 50; ++k) s = abm_step(s, p);
    for (std::size_t i = 0; i < s.sites(); ++i)
        EXPECT_NEAR(s.B[i], B0[i] * std::pow(1 - p.omega * p.dt, 50), 1e-14);
}

TEST(AbmStep, PoliceConservedExactly) {
    const auto p = policed();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto s = random_state(7, p, rng, false);
        const auto o = abm_step(s, p);
        ASSERT_NEAR(o.total_police(), s.total_police(), 1e-12 * s.total_police());
    }
}

TEST(AbmStep, StochasticPoliceConserved) {
    const auto p = policed();
    std::mt19937_64 rng(5), g(6);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_state(5, p, rng, true);
        const auto o = abm_step(s, p, AbmMode::Stochastic, &g);
        ASSERT_EQ(o.total_police(), s.total_police());
        ASSERT_TRUE(detail::is_integral(o.n));
    }
}

TEST(AbmStep, CriminalAccounting) {
    const auto p = policed();
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_state(6, p, rng, false);
        const auto o = abm_step(s, p);
        const auto pc = crime_probability(s, p);
        double lhs = 0, rhs = 0;
        for (std::size_t i = 0; i < s.sites(); ++i) {
            lhs += o.n[i];
            rhs += s.n[i] * (1 - pc[i]) +
                   std::exp(-p.beta * s.m[i] / (p.h * p.h)) * p.gamma * (1 - p.sigma) * p.dt;
        }
        ASSERT_NEAR(lhs, rhs, 1e-12 * rhs);
    }
}

TEST(AbmStep, StochasticIsUnbiased) {
    auto p = policed();
    p.dt = 0.5;
    p.sigma = 0.3;
    std::mt19937_64 rng(21);
    const auto s = random_state(3, p, rng, true);
    const auto expect = abm_step(s, p);
    const int R = 10000;
    const std::size_t N = s.sites();
    std::vector<double> sn(N), sn2(N), sm(N), sm2(N), sb(N), sb2(N);
    std::mt19937_64 g(99);
    for (int r = 0; r < R; ++r) {
        const auto o = abm_step(s, p, AbmMode::Stochastic, &g);
        for (std::size_t i = 0; i < N; ++i) {
            sn[i] += o.n[i];
            sn2[i] += o.n[i] * o.n[i];
            sm[i] += o.m[i];
            sm2[i] += o.m[i] * o.m[i];
            sb[i] += o.B[i];
            sb2[i] += o.B[i] * o.B[i];
        }
    }
    auto check = [&](const std::vector<double>& s1, const std::vector<double>& s2, const std::vector<double>& want,
                     const char* what) {
        for (std::size_t i = 0; i < N; ++i) {
            const double m = s1[i] / R, var = s2[i] / R - m * m;
            const double se = std::sqrt(std::max(var, 0.0) / R);
            EXPECT_LE(std::abs(m - want[i]), 3 * se + 1e-12) << what << " site " << i;
        }
    };
    check(sn, sn2, expect.n, "n");
    check(sm, sm2, expect.m, "m");
    check(sb, sb2, expect.B, "B");
}

TEST(AbmStep, RejectsBadInput) {
    const auto p = policed();
    LatticeState s(3, 1.0);
    s.n[0] = 0.5;
    std::mt19937_64 g(1);
    EXPECT_THROW(abm_step(s, p, AbmMode::Stochastic, &g), std::invalid_argument);
    EXPECT_THROW(abm_step(s, p, AbmMode::Stochastic, nullptr), std::invalid_argument);
    s.m[1] = 1;
    std::fill(s.H.begin(), s.H.end(), 0.0);
    EXPECT_THROW(abm_step(s, p), std::domain_error);
}

TEST(AbmScaling, EquilibriumMapsToContinuum) {
    ModelParams m;
    m.eta = 0.7;
    m.kappa = 1.5;
    m.pi0 = 0.5;
    const auto p = abm_params_for(m, 101);
    const auto s = abm_equilibrium_state(p, 101);
    const auto f = abm_fields(s, p, 10.0);
    const auto e = equilibrium_nondim(m);
    EXPECT_NEAR(f.A[0], e.a_bar, 1e-3 * e.a_bar);
    EXPECT_NEAR(f.rho[0], e.rho_bar, 5e-3 * e.rho_bar);
    EXPECT_NEAR(f.pi[0], 0.5, 1e-12);
    EXPECT_NEAR(f.H[0], e.h_bar, 5e-3 * e.h_bar);
}

TEST(RunAbm, SamplingAndSnapshots) {
    ModelParams m;
    m.kappa = 1.5;
    AbmRunConfig c;
    c.params = abm_params_for(m, 21);
    c.side = 21;
    c.T = 5.0;
    c.snapshot_times = {0.0, 5.0};
    const double step = c.params.omega * c.params.dt;
    EXPECT_NEAR(step, 0.25 * 0.25, 1e-12);
    const auto r = run_abm(c);
    EXPECT_EQ(r.series.size(), 11u);
    EXPECT_NEAR(r.series.dt_sample, 8 * step, 1e-12);
    ASSERT_EQ(r.snapshots.size(), 2u);
    EXPECT_NEAR(r.snapshots[1].t, 5.0, 1e-9);
    EXPECT_NEAR(r.final_state.total_police(), c.params.M, 1e-9 * c.params.M);
}
