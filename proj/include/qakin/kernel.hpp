#pragma once

#include <Eigen/Dense>

#include <vector>

namespace qakin {

/// Scale-free intraband scattering kernel: rate density for K -> Q in thermal
/// momentum units, w(K->Q) = x/(1 - e^{-x}) with x = (K^2 - Q^2)/2.
double intraband_kernel(double k_from, double k_to);

/// Spectrum of the discretized gain-minus-loss operator L0 built from the
/// scale-free kernel on a uniform grid over [-k_max, k_max] with trapezoid
/// weights.  Eigenvalues are in units of the momentum relaxation rate 1/tau_r
/// and sorted descending; e0 = 0 (Maxwell stationary state) up to
/// discretization error, all others negative.
struct KernelSpectrum {
    std::vector<double> eigenvalues;  // descending
    int grid_size = 0;
    double k_max = 0.0;
    std::vector<double> nodes;        // grid in scaled momentum
    Eigen::MatrixXd modes;            // column m: distribution-space eigenvector
};

KernelSpectrum kernel_spectrum(int grid_size, double k_max = 6.0);

}  // namespace qakin
