#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "abm.hpp"
#include "params.hpp"
#include "pde_solver.hpp"

namespace crimesim {

enum class ModelKind { Pde, Abm };

struct CaseConfig {
    int id = 0;  // 0 = custom
    std::string name = "custom";
    ModelParams params;
    SolverConfig solver;
    double T = 1300.0;
    std::vector<double> snapshot_times;
    std::string output_dir = "out";
    ModelKind model = ModelKind::Pde;
    double spectrum_begin = 500.0, spectrum_end = 1200.0;
    std::size_t return_map_stride = 50;
    // lattice options
    AbmMode abm_mode = AbmMode::Expectation;
    std::size_t abm_side = 101;
    std::optional<AbmParams> abm_params;  // overrides the mapping from params

    void validate() const {
        params.validate();
        solver.validate();
        if (!(T > 0)) throw ConfigError("T must be positive");
        for (double t : snapshot_times)
            if (t < 0 || t > T) throw ConfigError("snapshot times must lie in [0, T]");
        if (return_map_stride < 1) throw ConfigError("return-map stride must be at least 1");
        if (abm_params) abm_params->validate();
    }

    AbmParams lattice_params() const { return abm_params ? *abm_params : abm_params_for(params, abm_side); }
};

struct PresetRow {
    double eta, kappa, tau, pi0;
};

/// Table of the ten reference configurations.
inline constexpr std::array<PresetRow, 10> kPresets{{
    {0.7, 1.5, 5.0, 0.5},
    {0.3, 1.5, 5.0, 0.5},
    {0.15, 1.5, 5.0, 0.5},
    {0.075, 1.5, 5.0, 0.5},
    {0.15, 0.5, 5.0, 0.5},
    {0.15, 2.5, 5.0, 0.5},
    {0.15, 1.5, 0.5, 0.5},
    {0.15, 1.5, 50.0, 0.5},
    {0.15, 1.5, 5.0, 0.1},
    {0.15, 1.5, 5.0, 1.0},
}};

inline CaseConfig preset(int id) {
    if (id < 1 || id > 10) throw ConfigError("preset id must be in 1..10");
    const auto& r = kPresets[std::size_t(id - 1)];
    CaseConfig c;
    c.id = id;
    c.name = "case" + std::to_string(id);
    c.params.eta = r.eta;
    c.params.kappa = r.kappa;
    c.params.tau = r.tau;
    c.params.pi0 = r.pi0;
    c.params.a_static = 0.02;
    c.params.L = 10.0;
    c.T = id == 1 ? 150.0 : id == 7 ? 300.0 : 1300.0;
    return c;
}

inline void to_json(nlohmann::json& j, const SolverConfig& s) {
    j = {{"dt", s.dt},         {"tol1", s.tol1},
         {"tol2", s.tol2},     {"tol3", s.tol3},
         {"max_iters", s.max_iters}, {"linear_tol", s.linear_tol},
         {"seed_perturbation", s.seed_perturbation}, {"seed", s.seed},
         {"lenient", s.lenient}, {"h", s.h}};
}

inline void from_json(const nlohmann::json& j, SolverConfig& s) {
    s.dt = j.value("dt", s.dt);
    s.tol1 = j.value("tol1", s.tol1);
    s.tol2 = j.value("tol2", s.tol2);
    s.tol3 = j.value("tol3", s.tol3);
    s.max_iters = j.value("max_iters", s.max_iters);
    s.linear_tol = j.value("linear_tol", s.linear_tol);
    s.seed_perturbation = j.value("seed_perturbation", s.seed_perturbation);
    s.seed = j.value("seed", s.seed);
    s.lenient = j.value("lenient", s.lenient);
    s.h = j.value("h", s.h);
}

inline void to_json(nlohmann::json& j, const CaseConfig& c) {
    j = {{"case", c.id},
         {"name", c.name},
         {"params", c.params},
         {"solver", c.solver},
         {"T", c.T},
         {"snapshot_times", c.snapshot_times},
         {"output_dir", c.output_dir},
         {"model", c.model == ModelKind::Pde ? "pde" : "abm"},
         {"analysis", {{"spectrum_window", {c.spectrum_begin, c.spectrum_end}},
                       {"return_map_stride", c.return_map_stride}}},
         {"abm", {{"mode", c.abm_mode == AbmMode::Expectation ? "expectation" : "stochastic"},
                  {"side", c.abm_side}}}};
    if (c.abm_params) j["abm"]["params"] = *c.abm_params;
}

/// Reads a case document; a "case" key selects a preset that the remaining keys refine.
inline CaseConfig case_from_json(const nlohmann::json& j) {
    try {
        CaseConfig c;
        if (j.contains("case") && j["case"].get<int>() != 0) c = preset(j["case"].get<int>());
        c.name = j.value("name", c.name);
        if (j.contains("params")) {
            ModelParams p = c.params;
            from_json(j["params"], p);
            c.params = p;
        }
        if (j.contains("solver")) from_json(j["solver"], c.solver);
        c.T = j.value("T", c.T);
        c.snapshot_times = j.value("snapshot_times", c.snapshot_times);
        c.output_dir = j.value("output_dir", c.output_dir);
        if (j.contains("model")) {
            const auto m = j["model"].get<std::string>();
            if (m == "pde") c.model = ModelKind::Pde;
            else if (m == "abm") c.model = ModelKind::Abm;
            else throw ConfigError("model must be pde or abm");
        }
        if (j.contains("analysis")) {
            const auto& a = j["analysis"];
            if (a.contains("spectrum_window")) {
                const auto w = a["spectrum_window"].get<std::vector<double>>();
                if (w.size() != 2) throw ConfigError("spectrum_window needs two values");
                c.spectrum_begin = w[0];
                c.spectrum_end = w[1];
            }
            c.return_map_stride = a.value("return_map_stride", c.return_map_stride);
        }
        if (j.contains("abm")) {
            const auto& a = j["abm"];
            const auto mode = a.value("mode", std::string("expectation"));
            if (mode == "expectation") c.abm_mode = AbmMode::Expectation;
            else if (mode == "stochastic") c.abm_mode = AbmMode::Stochastic;
            else throw ConfigError("abm mode must be expectation or stochastic");
            c.abm_side = a.value("side", c.abm_side);
            if (a.contains("params")) {
                AbmParams p = abm_params_for(c.params, c.abm_side);
                from_json(a["params"], p);
                c.abm_params = p;
            }
        }
        c.validate();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
}

}  // namespace crimesim
