#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace crimesim {

/// Lower bound enforced on attractiveness fields.
inline constexpr double kPositivityFloor = 1e-12;

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Nondimensional continuum parameters.
struct ModelParams {
    double eta = 0.3;
    double kappa = 1.5;
    double tau = 5.0;
    double pi0 = 0.5;
    double a_static = 0.02;
    double L = 10.0;

    void validate() const {
        if (!(eta > 0)) throw ConfigError("eta must be positive");
        if (!(kappa >= 0)) throw ConfigError("kappa must be non-negative");
        if (!(tau > 0)) throw ConfigError("tau must be positive");
        if (!(pi0 >= 0)) throw ConfigError("pi0 must be non-negative");
        if (!(a_static > 0)) throw ConfigError("a_static must be positive");
        if (!(L > 0)) throw ConfigError("L must be positive");
    }
};

/// Dimensional lattice parameters.
struct AbmParams {
    double gamma = 0.0285;
    double theta = 0.2339;
    double omega = 1.0 / 15.0;
    double sigma = 0.0;
    double beta = 1.0;
    double eta = 0.3;
    double h = 1.0;
    double dt = 0.0375;
    double M = 0.0;
    double tau_dim = 75.0;
    double a_static = 0.02 / 15.0;

    void validate() const {
        if (!(omega > 0)) throw ConfigError("omega must be positive");
        if (!(h > 0) || !(dt > 0)) throw ConfigError("h and dt must be positive");
        if (!(omega * dt < 1)) throw ConfigError("omega*dt must be below 1");
        if (!(M >= 0)) throw ConfigError("M must be non-negative");
        if (!(sigma >= 0 && sigma <= 1)) throw ConfigError("sigma must lie in [0,1]");
        if (!(beta >= 0)) throw ConfigError("beta must be non-negative");
        if (!(eta >= 0 && eta <= 1)) throw ConfigError("eta must lie in [0,1]");
        if (!(gamma >= 0) || !(theta >= 0)) throw ConfigError("gamma and theta must be non-negative");
        if (!(tau_dim > 0)) throw ConfigError("tau_dim must be positive");
        if (!(a_static > 0)) throw ConfigError("a_static must be positive");
    }
};

/// Scales that pin the dimensional realisation of a nondimensional parameter set.
struct LatticeScales {
    double h = 1.0;
    double omega = 1.0 / 15.0;
    double beta = 1.0;
    double gamma = 0.0285;
    double sigma = 0.0;
};

/// Maps lattice parameters on a sites x sites grid to the continuum scaling.
inline ModelParams nondimensionalize(const AbmParams& p, std::size_t sites_per_axis) {
    if (!(p.omega > 0)) throw ConfigError("omega must be positive");
    if (sites_per_axis < 2) throw ConfigError("lattice needs at least two sites per axis");
    const double n_sites = double(sites_per_axis) * double(sites_per_axis);
    const double D = p.h * p.h / p.dt;
    const double l_char = std::sqrt(D / p.omega);
    const double side = double(sites_per_axis - 1) * p.h;
    ModelParams m;
    m.eta = p.eta;
    m.kappa = p.gamma * p.theta * (1.0 - p.sigma) / (p.omega * p.omega);
    m.tau = p.omega * p.tau_dim;
    m.pi0 = p.beta * (p.M / n_sites) / (p.h * p.h);
    m.a_static = p.a_static / p.omega;
    m.L = 2.0 * side / l_char;
    return m;
}

/// Inverse of nondimensionalize. The time step follows from the requested L;
/// theta is chosen to hit kappa.
inline AbmParams dimensionalize(const ModelParams& m, const LatticeScales& s,
                                std::size_t sites_per_axis) {
    if (!(s.omega > 0)) throw ConfigError("omega must be positive");
    if (sites_per_axis < 2) throw ConfigError("lattice needs at least two sites per axis");
    if (!(s.gamma > 0) || !(s.sigma < 1)) throw ConfigError("gamma*(1-sigma) must be positive");
    if (!(s.beta > 0)) throw ConfigError("beta must be positive");
    const double n_sites = double(sites_per_axis) * double(sites_per_axis);
    const double h_nd = m.L / double(sites_per_axis - 1);  // = 2 sqrt(omega dt)
    AbmParams p;
    p.gamma = s.gamma;
    p.sigma = s.sigma;
    p.omega = s.omega;
    p.beta = s.beta;
    p.h = s.h;
    p.eta = m.eta;
    p.dt = h_nd * h_nd / (4.0 * s.omega);
    p.theta = m.kappa * s.omega * s.omega / (s.gamma * (1.0 - s.sigma));
    p.tau_dim = m.tau / s.omega;
    p.M = m.pi0 * s.h * s.h * n_sites / s.beta;
    p.a_static = m.a_static * s.omega;
    return p;
}

inline void to_json(nlohmann::json& j, const ModelParams& p) {
    j = {{"eta", p.eta}, {"kappa", p.kappa}, {"tau", p.tau},
         {"pi0", p.pi0}, {"a_static", p.a_static}, {"L", p.L}};
}

inline void from_json(const nlohmann::json& j, ModelParams& p) {
    p.eta = j.value("eta", p.eta);
    p.kappa = j.value("kappa", p.kappa);
    p.tau = j.value("tau", p.tau);
    p.pi0 = j.value("pi0", p.pi0);
    p.a_static = j.value("a_static", p.a_static);
    p.L = j.value("L", p.L);
}

inline void to_json(nlohmann::json& j, const AbmParams& p) {
    j = {{"gamma", p.gamma}, {"theta", p.theta}, {"omega", p.omega}, {"sigma", p.sigma},
         {"beta", p.beta},   {"eta", p.eta},     {"h", p.h},         {"dt", p.dt},
         {"M", p.M},         {"tau_dim", p.tau_dim}, {"a_static", p.a_static}};
}

inline void from_json(const nlohmann::json& j, AbmParams& p) {
    p.gamma = j.value("gamma", p.gamma);
    p.theta = j.value("theta", p.theta);
    p.omega = j.value("omega", p.omega);
    p.sigma = j.value("sigma", p.sigma);
    p.beta = j.value("beta", p.beta);
    p.eta = j.value("eta", p.eta);
    p.h = j.value("h", p.h);
    p.dt = j.value("dt", p.dt);
    p.M = j.value("M", p.M);
    p.tau_dim = j.value("tau_dim", p.tau_dim);
    p.a_static = j.value("a_static", p.a_static);
}

}  // namespace crimesim
