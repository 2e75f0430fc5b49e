// Trace the spin vector through one 4-pi-pulse unit, with and without an
// external field, and print a plot-ready table.
#include <cstdio>

#include "dysco/dysco.hpp"

int main() {
    using namespace dysco;
    RunParams params;
    params.rabi = two_pi * 8.33e6;
    params.substeps = 24;

    const PulseProgram prog = build_dysco(1, pi / 6, params.rabi);

    Waveform quiet;
    Waveform driven;
    driven.tones.push_back({5e-5, 0.0, 0.0});

    const auto closed = run_trace(prog, quiet, params);
    const auto open = run_trace(prog, driven, params);

    std::printf("t_s,pulse,closed_x,closed_y,closed_z,driven_x,driven_y,driven_z\n");
    for (std::size_t i = 0; i < closed.size(); ++i)
        std::printf("%.9e,%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", closed[i].t,
                    closed[i].pulse_index, closed[i].x, closed[i].y, closed[i].z,
                    open[i].x, open[i].y, open[i].z);
    return 0;
}
