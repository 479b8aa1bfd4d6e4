// Integrates the continuum model for case 1 and prints the averages every 5 time units.
#include <cstdio>

#include <crimesim/crimesim.hpp>

int main() {
    using namespace crimesim;
    const auto c = preset(1);
    const Mesh mesh = Mesh::square(c.params.L, c.solver.h);
    PartitionedSolver solver(mesh, c.params, c.solver);
    SystemState s = initial_state(mesh.grid, c.params, c.solver);
    TimeSeries ts;
    const auto log = integrate(solver, s, 20.0, PoliceMode::Dynamic, ts);
    for (std::size_t i = 0; i < ts.size(); i += 250)
        std::printf("t=%5.1f  <A>=%.5f  <rho>=%.5f  <pi>=%.5f  <S>=%.5f\n", ts.time(i), ts.data[0][i],
                    ts.data[1][i], ts.data[2][i], ts.data[4][i]);
    std::printf("%ld steps, at most %d iterations per step\n", log.steps, log.max_iterations);
}
