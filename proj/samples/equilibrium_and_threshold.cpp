// Homogeneous equilibrium and critical delay for a few presets.
#include <cstdio>

#include <crimesim/crimesim.hpp>

int main() {
    using namespace crimesim;
    for (int id : {1, 2, 3, 9}) {
        const auto c = preset(id);
        const auto e = equilibrium_nondim(c.params);
        std::printf("case %d: A=%.4f rho=%.4f pi=%.2f H=%.4f", id, e.a_bar, e.rho_bar, e.pi_bar, e.h_bar);
        if (const auto tc = tau_c_star(e, c.params.eta, c.params.L)) {
            const double w0 = hopf_frequency(char_coeffs(e, tc->mode, tc->tau, c.params.eta));
            std::printf("  tau_c*=%.4f at mode (%d,%d), omega0=%.4f\n", tc->tau, tc->mode.m, tc->mode.n, w0);
        }
        else
            std::printf("  no delay-induced instability\n");
    }
}
