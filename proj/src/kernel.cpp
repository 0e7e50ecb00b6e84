#include "qakin/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace qakin {

double intraband_kernel(double k_from, double k_to) {
    const double x = 0.5 * (k_from * k_from - k_to * k_to);
    if (std::abs(x) < 1e-12) return 1.0 + 0.5 * x;
    if (x > 700.0) return x;
    return x / (-std::expm1(-x));
}

KernelSpectrum kernel_spectrum(int grid_size, double k_max) {
    if (grid_size < 8) throw std::domain_error("kernel_spectrum: grid_size too small");
    if (!(k_max > 1.0)) throw std::domain_error("kernel_spectrum: k_max must exceed 1");

    KernelSpectrum spec;
    spec.grid_size = grid_size;
    spec.k_max = k_max;
    spec.nodes.resize(grid_size);
    const double step = 2.0 * k_max / (grid_size - 1);
    Eigen::VectorXd w(grid_size);
    for (int i = 0; i < grid_size; ++i) {
        spec.nodes[i] = -k_max + i * step;
        w[i] = (i == 0 || i == grid_size - 1) ? 0.5 * step : step;
    }

    // Maxwell-weighted symmetric gauge.  Detailed balance makes the gain
    // kernel symmetric once weighted with sqrt of the stationary measure:
    //   S_ij = sqrt(w_i w_j) w(K_j -> K_i) e^{(K_i^2 - K_j^2)/4}   (i != j)
    //   S_ii = -sum_{j != i} w_j w(K_i -> K_j)
    // The Maxwell vector is an exact null vector of this construction, so
    // e0 = 0 to rounding on any grid.
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(grid_size, grid_size);
    for (int i = 0; i < grid_size; ++i) {
        double out = 0.0;
        for (int j = 0; j < grid_size; ++j) {
            if (j == i) continue;
            out += w[j] * intraband_kernel(spec.nodes[i], spec.nodes[j]);
        }
        sym(i, i) = -out;
        for (int j = 0; j < i; ++j) {
            const double gauge =
                std::exp(0.25 * (spec.nodes[i] * spec.nodes[i] - spec.nodes[j] * spec.nodes[j]));
            const double val = std::sqrt(w[i] * w[j]) *
                               intraband_kernel(spec.nodes[j], spec.nodes[i]) * gauge;
            sym(i, j) = val;
            sym(j, i) = val;
        }
    }
    Eigen::VectorXd sqrt_p(grid_size);
    for (int i = 0; i < grid_size; ++i)
        sqrt_p[i] = std::sqrt(w[i] * std::exp(-0.5 * spec.nodes[i] * spec.nodes[i]));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("kernel_spectrum: eigensolver failed");

    // descending order; map eigenvectors back to distribution space
    spec.eigenvalues.resize(grid_size);
    spec.modes.resize(grid_size, grid_size);
    for (int m = 0; m < grid_size; ++m) {
        const int src = grid_size - 1 - m;
        spec.eigenvalues[m] = solver.eigenvalues()[src];
        spec.modes.col(m) = solver.eigenvectors().col(src).cwiseProduct(sqrt_p);
    }
    return spec;
}

}  // namespace qakin
