#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "fhn/bloch.hpp"
#include "fhn/fields.hpp"
#include "fhn/wave.hpp"

namespace fhn {

// Spatial-dynamics side of the stability analysis: the resolvent problem
// (L0 - lambda) w = g rewritten as the first-order system psi' = A(zeta;
// lambda) psi + G in psi = (u, u_zeta, v), with T-periodic coefficients.
// Floquet theory for that system yields the period map, the critical spatial
// Floquet exponent nu_c(lambda), and the rank-one factorization of the
// critical part of the resolvent.

struct MonodromyOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int path_points = 8;  // continuation hops along the segment from 0 to lambda
};

struct MonodromyData {
    Cplx lambda;
    Eigen::Matrix3cd matrix;                  // period map of the first-order system
    std::array<Cplx, 3> floquet_exponents;    // principal logs / T, descending real part
    Cplx nu_c;                                // branch continued from nu_c(0) = 0
    int winding = 0;                          // accumulated log-branch offset of nu_c
    double condition = 0.0;                   // norm(U) * norm(U^-1) of the period map
};

// Coefficient matrix A(zeta; lambda) of the first-order form, evaluated with
// band-limited (exact) interpolation of the wave profile.
Eigen::Matrix3cd first_order_matrix(const WaveTrain& wave, Cplx lambda, double zeta);

// Integrates the period map from identity initial data and continues the
// critical exponent from the translational zero at lambda = 0 along the
// straight segment to the requested lambda.
MonodromyData monodromy(const WaveTrain& wave, Cplx lambda, const MonodromyOptions& opts = {});

struct RankOneFactors {
    Cplx lambda;
    Cplx nu_c;
    ComplexFieldPair psi;       // Psi(.;lambda), T-periodic, on the wave grid
    ComplexFieldPair psi_adj;   // tilde Psi(.;lambda), T-periodic
    Eigen::Matrix3cd projection;  // spectral projection of the period map onto nu_c
    double separation = 0.0;    // multiplier distance to the nearest other exponent
};

// Builds the T-periodic fields Psi, tilde Psi whose outer product realizes
// the critical part of the resolvent kernel. The critical curve supplies the
// adjoint Bloch eigenfunction used to normalize Psi (at lambda = lambda_c(xi)
// this reproduces Psi = Phi_xi exactly).
RankOneFactors rank_one_factors(const WaveTrain& wave, Cplx lambda, const CriticalCurve& curve,
                                const MonodromyOptions& opts = {});

// Kernel factor Pi_2 Q(zeta)^-1 P^cu Q(zbar) Pi_3 evaluated by fresh ODE
// integrations to (zeta, zbar); used to cross-check psi * psi_adj^*.
Eigen::Matrix2cd rank_one_product(const WaveTrain& wave, const RankOneFactors& factors,
                                  double zeta, double zbar, const MonodromyOptions& opts = {});

struct HFResolventTerms {
    double b = 0.0;
    double varpi = 0.0;
    int n_cells = 0;
    ComplexFieldPair i1, i2, i3, i4;  // expansion terms applied to g
    ComplexFieldPair direct;          // directly solved resolvent applied to g
    double remainder_norm = 0.0;      // sup |i4 g|
    double identity_gap = 0.0;        // sup |(i1+i2+i3+i4) g - direct|
};

// High-frequency resolvent expansion at lambda = b + i varpi on the periodic
// multi-cell domain (g has n_cells * wave.n() samples): the three leading
// terms are Fourier-symbol products of the resolvents of the scalar operators
// d_zz and c0 d_z - eps*gamma; the remainder is the difference to a direct
// dense solve of the full resolvent system.
HFResolventTerms hf_resolvent_split(const WaveTrain& wave, double b, double varpi,
                                    const FieldPair& g);

struct RemainderSample {
    double varpi;
    double norm;
};

struct RemainderSlope {
    double slope = 0.0;              // log-log fit of sup|I4 g| against varpi
    std::vector<RemainderSample> samples;
};

// Least-squares slope of the remainder norm over [varpi0, 100 varpi0].
RemainderSlope hf_remainder_slope(const WaveTrain& wave, double b, const FieldPair& g,
                                  double varpi0, int n_samples = 9);

struct VarpiCalibration {
    double varpi0 = 0.0;
    double slope = 0.0;              // slope measured at the accepted varpi0
    std::vector<RemainderSlope> history;
};

// Scans varpi0 upward from 10/T until the remainder slope settles inside the
// -3/2 band on two consecutive candidates.
VarpiCalibration calibrate_varpi0(const WaveTrain& wave, double b, const FieldPair& g);

struct BromwichRow {
    double r;          // contour half-height
    Cplx quadrature;   // truncated inversion integral
    Cplx reference;    // closed-form convolution value
    double error;      // |quadrature - reference|
};

// Truncated Bromwich inversion of the product of two scalar resolvents
// against the closed-form convolution of the corresponding semigroups.
std::vector<BromwichRow> bromwich_convolution_check(Cplx a, Cplx b_coef, double t, double omega,
                                                    const std::vector<double>& r_list);

}  // namespace fhn
