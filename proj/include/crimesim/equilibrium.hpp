#pragma once

#include <cmath>
#include <cstddef>

#include "params.hpp"

namespace crimesim {

struct EquilibriumState {
    double a_bar = 0.0;
    double rho_bar = 0.0;
    double pi_bar = 0.0;
    double h_bar = 0.0;
};

/// Homogeneous steady state of the continuum model with pi_bar = pi0.
inline EquilibriumState equilibrium_nondim(const ModelParams& p) {
    if (!(p.a_static > 0)) throw ConfigError("a_static must be positive");
    EquilibriumState e;
    e.pi_bar = p.pi0;
    const double decay = std::exp(-p.pi0);
    e.a_bar = p.a_static + p.kappa * decay;
    e.rho_bar = p.kappa / e.a_bar;
    e.h_bar = e.rho_bar * e.a_bar * decay;
    return e;
}

/// Dimensional lattice fixed point.
struct AbmEquilibrium {
    double B = 0.0;
    double n = 0.0;
    double m = 0.0;
    double H = 0.0;
    double pc = 0.0;
};

inline AbmEquilibrium equilibrium_abm(const AbmParams& p, std::size_t n_sites) {
    p.validate();
    if (n_sites < 1) throw ConfigError("n_sites must be at least 1");
    AbmEquilibrium e;
    e.m = p.M / double(n_sites);
    const double deter = std::exp(-p.beta * e.m / (p.h * p.h));
    e.B = (p.theta * p.gamma / p.omega) * (1.0 - p.sigma) * deter;
    const double A = p.a_static + e.B;
    e.pc = 1.0 - std::exp(-A * deter * p.dt);
    if (!(e.pc > 0)) throw ConfigError("equilibrium crime probability vanishes");
    e.n = (p.dt * p.gamma / e.pc) * (1.0 - p.sigma) * deter;
    e.H = e.n * e.pc / (p.h * p.h * p.dt);
    return e;
}

}  // namespace crimesim
