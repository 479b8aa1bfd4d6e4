#include <cmath>

#include <gtest/gtest.h>

#include <crimesim/cases.hpp>
#include <crimesim/equilibrium.hpp>
#include <crimesim/field.hpp>
#include <crimesim/params.hpp>

using namespace crimesim;

namespace {
ModelParams make(double eta, double kappa, double pi0) {
    ModelParams p;
    p.eta = eta;
    p.kappa = kappa;
    p.pi0 = pi0;
    return p;
}
}  // namespace

TEST(Equilibrium, StableReferenceCase) {
    const auto e = equilibrium_nondim(make(0.7, 1.5, 0.5));
    EXPECT_NEAR(e.a_bar, 0.9298, 1e-4);
    EXPECT_NEAR(e.rho_bar, 1.6133, 1e-4);
    EXPECT_NEAR(e.h_bar, 0.9098, 1e-4);
    EXPECT_DOUBLE_EQ(e.pi_bar, 0.5);
}

TEST(Equilibrium, ZeroSource) {
    const auto e = equilibrium_nondim(make(0.3, 0.0, 0.0));
    EXPECT_DOUBLE_EQ(e.a_bar, 0.02);
    EXPECT_DOUBLE_EQ(e.rho_bar, 0.0);
    EXPECT_DOUBLE_EQ(e.h_bar, 0.0);
}

TEST(Equilibrium, LowPoliceValues) {
    const auto e = equilibrium_nondim(make(0.3, 1.5, 0.1));
    EXPECT_NEAR(e.a_bar, 1.37726, 1e-5);
    EXPECT_NEAR(e.rho_bar, 1.08912, 1e-5);
    EXPECT_NEAR(e.h_bar, 1.35726, 1e-5);
}

TEST(Equilibrium, InvariantsHoldToMachinePrecision) {
    for (double kappa : {0.1, 0.5, 1.5, 2.5, 7.0})
        for (double pi0 : {0.0, 0.01, 0.3, 1.0, 4.0}) {
            const auto p = make(0.3, kappa, pi0);
            const auto e = equilibrium_nondim(p);
            EXPECT_NEAR(e.a_bar, p.a_static + kappa * std::exp(-pi0), 1e-15 * e.a_bar);
            EXPECT_NEAR(e.rho_bar * e.a_bar, kappa, 1e-14 * kappa);
            EXPECT_NEAR(e.h_bar, e.rho_bar * e.a_bar * std::exp(-pi0), 1e-15 * (1 + e.h_bar));
        }
}

TEST(Equilibrium, HBarDecreasesWithPolice) {
    double prev = INFINITY;
    for (double pi0 = 0.0; pi0 <= 5.0; pi0 += 0.25) {
        const double h = equilibrium_nondim(make(0.3, 1.5, pi0)).h_bar;
        EXPECT_LT(h, prev);
        prev = h;
    }
}

TEST(Equilibrium, RejectsNonpositiveStatic) {
    auto p = make(0.3, 1.5, 0.5);
    p.a_static = 0.0;
    EXPECT_THROW(equilibrium_nondim(p), ConfigError);
}

TEST(AbmEquilibrium, NoPoliceFixedPoint) {
    AbmParams p;
    p.M = 0;
    p.sigma = 0;
    const auto e = equilibrium_abm(p, 100);
    EXPECT_NEAR(e.B, p.theta * p.gamma / p.omega, 1e-15);
    EXPECT_DOUBLE_EQ(e.m, 0.0);
}

TEST(AbmEquilibrium, ReferenceScalesGiveKappa) {
    AbmParams p;
    p.gamma = 0.0285;
    p.theta = 0.2339;
    p.sigma = 0;
    p.omega = 1.0 / 15.0;
    EXPECT_NEAR(nondimensionalize(p, 101).kappa, 1.5, 1e-3);
    EXPECT_NEAR(p.gamma * p.theta / (p.omega * p.omega), 1.49988375, 1e-12);
}

TEST(AbmEquilibrium, DefinitionIdentities) {
    AbmParams p;
    p.M = 3000;
    p.sigma = 0.2;
    const auto e = equilibrium_abm(p, 400);
    const double deter = std::exp(-p.beta * e.m / (p.h * p.h));
    EXPECT_DOUBLE_EQ(e.m, 7.5);
    EXPECT_NEAR(e.pc, 1 - std::exp(-(p.a_static + e.B) * deter * p.dt), 1e-15);
    EXPECT_NEAR(e.n * e.pc, p.dt * p.gamma * (1 - p.sigma) * deter, 1e-15);
    EXPECT_NEAR(e.H, e.n * e.pc / (p.h * p.h * p.dt), 1e-14);
}

TEST(Nondimensionalize, UnitOmegaKeepsDelay) {
    AbmParams p;
    p.omega = 1.0;
    p.dt = 0.5;
    p.tau_dim = 7.25;
    EXPECT_DOUBLE_EQ(nondimensionalize(p, 11).tau, 7.25);
}

TEST(Nondimensionalize, ReferenceLatticeMapsToUnitGrid) {
    ModelParams m = make(0.3, 1.5, 0.5);
    m.tau = 5;
    const AbmParams p = dimensionalize(m, LatticeScales{}, 101);
    EXPECT_NEAR(p.dt, 0.0375, 1e-15);
    EXPECT_NEAR(p.tau_dim, 75.0, 1e-12);
    EXPECT_NEAR(nondimensionalize(p, 101).L, 10.0, 1e-12);
}

TEST(Nondimensionalize, RoundTrip) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int k = 0; k < 200; ++k) {
        ModelParams m;
        m.eta = std::min(1.0, u(rng) / 3);
        m.kappa = u(rng);
        m.tau = u(rng) * 10;
        m.pi0 = u(rng) - 0.05;
        m.a_static = 0.02;
        m.L = 10;
        LatticeScales s;
        s.omega = u(rng) / 10;
        s.beta = u(rng);
        s.gamma = u(rng) / 50;
        s.sigma = 0.3;
        const ModelParams back = nondimensionalize(dimensionalize(m, s, 51), 51);
        EXPECT_NEAR(back.eta, m.eta, 1e-12 * m.eta);
        EXPECT_NEAR(back.kappa, m.kappa, 1e-12 * m.kappa);
        EXPECT_NEAR(back.tau, m.tau, 1e-12 * m.tau);
        EXPECT_NEAR(back.pi0, m.pi0, 1e-12 * std::max(m.pi0, 1e-300));
        EXPECT_NEAR(back.a_static, m.a_static, 1e-12 * m.a_static);
        EXPECT_NEAR(back.L, m.L, 1e-12 * m.L);
    }
}

TEST(Nondimensionalize, RejectsNonpositiveOmega) {
    AbmParams p;
    p.omega = 0;
    EXPECT_THROW(nondimensionalize(p, 10), ConfigError);
}

TEST(Params, Validation) {
    ModelParams p;
    EXPECT_NO_THROW(p.validate());
    p.tau = 0;
    EXPECT_THROW(p.validate(), ConfigError);
    AbmParams a;
    a.omega = 1.0;
    a.dt = 1.0;
    EXPECT_THROW(a.validate(), ConfigError);
}

TEST(Params, JsonKeysAndRoundTrip) {
    ModelParams p = make(0.15, 2.5, 0.1);
    nlohmann::json j = p;
    for (const char* k : {"eta", "kappa", "tau", "pi0", "a_static", "L"}) EXPECT_TRUE(j.contains(k)) << k;
    const auto q = j.get<ModelParams>();
    EXPECT_EQ(q.eta, p.eta);
    EXPECT_EQ(q.kappa, p.kappa);
    EXPECT_EQ(q.pi0, p.pi0);

    AbmParams a;
    a.M = 123;
    nlohmann::json ja = a;
    for (const char* k : {"gamma", "theta", "omega", "sigma", "beta", "h", "dt", "M", "tau_dim"})
        EXPECT_TRUE(ja.contains(k)) << k;
    EXPECT_EQ(ja.get<AbmParams>().M, 123);
}

TEST(Grid, NodeCentredSquare) {
    const Grid g = Grid::square(10.0, 0.1);
    EXPECT_EQ(g.n, 101u);
    EXPECT_EQ(g.size(), 10201u);
    EXPECT_NEAR(g.side(), 10.0, 1e-12);
    EXPECT_THROW(Grid::square(10.0, 0.3), std::invalid_argument);
}

TEST(ScalarField, IntegralAndAverage) {
    const Grid g = Grid::square(10.0, 0.1);
    ScalarField c(g, 3.25);
    EXPECT_NEAR(spatial_average(c), 3.25, 1e-12);
    ScalarField x(g);
    for (std::size_t iy = 0; iy < g.n; ++iy)
        for (std::size_t ix = 0; ix < g.n; ++ix) x(ix, iy) = g.x(ix);
    EXPECT_NEAR(spatial_average(x), 5.0, 1e-10);
    EXPECT_NEAR(ScalarField(g, 1.0).integral(), 100.0, 1e-10);
}

TEST(Presets, MatchReferenceTable) {
    const double expect[10][4] = {{0.7, 1.5, 5, 0.5},    {0.3, 1.5, 5, 0.5},  {0.15, 1.5, 5, 0.5},
                                  {0.075, 1.5, 5, 0.5},  {0.15, 0.5, 5, 0.5}, {0.15, 2.5, 5, 0.5},
                                  {0.15, 1.5, 0.5, 0.5}, {0.15, 1.5, 50, 0.5}, {0.15, 1.5, 5, 0.1},
                                  {0.15, 1.5, 5, 1.0}};
    for (int i = 1; i <= 10; ++i) {
        const auto c = preset(i);
        EXPECT_EQ(c.params.eta, expect[i - 1][0]);
        EXPECT_EQ(c.params.kappa, expect[i - 1][1]);
        EXPECT_EQ(c.params.tau, expect[i - 1][2]);
        EXPECT_EQ(c.params.pi0, expect[i - 1][3]);
        EXPECT_EQ(c.params.a_static, 0.02);
        EXPECT_EQ(c.T, i == 1 ? 150.0 : i == 7 ? 300.0 : 1300.0);
        const auto back = case_from_json(nlohmann::json(c));
        EXPECT_EQ(back.params.eta, c.params.eta);
        EXPECT_EQ(back.params.tau, c.params.tau);
    }
    EXPECT_THROW(preset(11), ConfigError);
}
