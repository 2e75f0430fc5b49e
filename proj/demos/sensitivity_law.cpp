// Minimal library walkthrough: sweep the unit phase angle, ramp a static
// field, and print the extracted sensitivity next to |sin(phi)|.
#include <cstdio>
#include <vector>

#include "dysco/dysco.hpp"

int main() {
    using namespace dysco;
    RunParams params;
    params.rabi = two_pi * 8.33e6;
    params.substeps = 1;
    params.threads = 0;

    std::vector<double> phi_grid;
    for (int i = 0; i < 13; ++i) phi_grid.push_back(pi * i / 12.0);
    const double b_max = (params.rabi / 4.0) / std::fabs(params.gamma_nv);
    const SensitivityScan scan = run_sensitivity_scan(phi_grid, b_max, 256, 40, params);

    std::printf("phi_rad   beta      |sin(phi)|\n");
    for (std::size_t i = 0; i < phi_grid.size(); ++i)
        std::printf("%7.4f   %7.4f   %7.4f\n", phi_grid[i], scan.curve.beta[i],
                    std::fabs(std::sin(phi_grid[i])));
    std::printf("fit R^2 = %.5f, max residual = %.4f\n", scan.curve.r_squared,
                scan.curve.max_residual);
    return 0;
}
