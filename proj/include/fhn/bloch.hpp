#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fhn/fields.hpp"
#include "fhn/wave.hpp"

namespace fhn {

// Eigenvalues of one Bloch fiber L(xi), sorted by descending real part.
struct SpectrumSlice {
    double xi = 0.0;
    std::vector<Cplx> eigenvalues;
    int n_modes = 0;
};

struct StabilityReport {
    bool d1_pass = false;  // spectrum strictly left of 0 except the phase zero
    bool d2_pass = false;  // quadratic tangency Re lambda <= -theta xi^2
    bool d3_pass = false;  // zero eigenvalue of L(0) is simple
    double delta = 0.0;    // margin: -max Re over all non-phase eigenvalues
    double theta = 0.0;    // largest admissible quadratic-tangency constant
    double zero_abs = 0.0; // |lambda| of the phase eigenvalue at xi = 0
    double zero_gap = 0.0; // |lambda| of the next eigenvalue at xi = 0

    bool stable() const { return d1_pass && d2_pass && d3_pass; }
};

// Critical spectral branch through the origin with eigenfunctions.
struct CriticalCurve {
    std::vector<double> xi_samples;          // ascending, symmetric about 0
    std::vector<Cplx> lambda_c;
    std::vector<ComplexFieldPair> phi;       // Phi_xi, physical samples
    std::vector<ComplexFieldPair> phi_adj;   // adjoint eigenfunctions
    double xi0 = 0.0;                        // window half-width; the bump
                                             // rho is 1 on [-xi0/2, xi0/2]
                                             // and supported in (-xi0, xi0)
    int n_modes = 0;
    double period = 0.0;

    int center() const { return static_cast<int>(xi_samples.size()) / 2; }
    const ComplexFieldPair& phi0() const { return phi[center()]; }
    const ComplexFieldPair& phi0_adj() const { return phi_adj[center()]; }
};

struct DispersionCoefficients {
    // Group velocity: curve fit, projection formula, and omega'(1) - c0.
    double cg_fit = 0.0, cg_projection = 0.0, cg_family = 0.0;
    // Diffusion coefficient: curve fit and projection formula.
    double d_fit = 0.0, d_projection = 0.0;
    // Burgers coefficient: -omega''(1)/2 and the full projection expression.
    double nu_family = 0.0, nu_projection = 0.0;

    double cg_rel_gap = 0.0;  // |fit - projection| / max(|fit|, tiny)
    double d_rel_gap = 0.0;
    double nu_rel_gap = 0.0;
};

// Dense Bloch fiber matrix in the Fourier basis. The retained modes are the
// symmetric band -h..h sampled on the n_modes-point cell grid (for even
// n_modes the unpaired Nyquist bin is dropped, so the fiber at -xi is the
// exact conjugate of the one at +xi); multiplication by f'(u0) enters as the
// aliased circulant of the grid samples.
Eigen::MatrixXcd bloch_matrix(const WaveTrain& wave, double xi, int n_modes);

// L(xi) applied to physical samples by spectral differentiation, projecting
// input and product terms onto the same mode band as bloch_matrix (used for
// residual checks).
ComplexFieldPair apply_bloch(const WaveTrain& wave, double xi, const ComplexFieldPair& w);

std::vector<SpectrumSlice> bloch_spectrum(const WaveTrain& wave,
                                          const std::vector<double>& xi_grid, int n_modes,
                                          int n_eigs);

// Uniform xi grid of n points covering [-pi/T, pi/T).
std::vector<double> full_xi_grid(double period, int n);

StabilityReport verify_hypotheses(const std::vector<SpectrumSlice>& slices);

// Half the distance to the nearest eigenvalue collision along the critical
// branch, capped at 0.2*pi/T.
double default_xi0(const WaveTrain& wave, int n_modes);

CriticalCurve critical_curve(const WaveTrain& wave, double xi0, int n_xi, int n_modes);

DispersionCoefficients dispersion_coefficients(const CriticalCurve& curve,
                                               const WaveFamily& family);

}  // namespace fhn
