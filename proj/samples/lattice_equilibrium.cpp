// Lattice model started near the case 1 state; compares the averages with the continuum equilibrium.
#include <cstdio>

#include <crimesim/crimesim.hpp>

int main() {
    using namespace crimesim;
    const auto c = preset(1);
    AbmRunConfig rc;
    rc.side = 51;
    rc.params = abm_params_for(c.params, rc.side);
    rc.T = 30.0;
    const auto r = run_abm(rc);
    const auto e = equilibrium_nondim(nondimensionalize(rc.params, rc.side));
    const auto& ts = r.series;
    const std::size_t k = ts.size() - 1;
    std::printf("lattice   <A>=%.5f <rho>=%.5f <pi>=%.5f\n", ts.data[0][k], ts.data[1][k], ts.data[2][k]);
    std::printf("continuum  A =%.5f  rho =%.5f  pi =%.5f\n", e.a_bar, e.rho_bar, e.pi_bar);
    std::printf("police on lattice: %.6f (M=%.6f)\n", r.final_state.total_police(), rc.params.M);
}
