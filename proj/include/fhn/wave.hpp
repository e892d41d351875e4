#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "fhn/fields.hpp"
#include "fhn/grid.hpp"
#include "fhn/params.hpp"

namespace fhn {

struct NewtonDivergenceError : std::runtime_error {
    NewtonDivergenceError(std::string what, double residual)
        : std::runtime_error(std::move(what)), last_residual(residual) {}
    double last_residual;
};

struct TrivialSolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Converged periodic traveling-wave profile on one period cell.
struct WaveTrain {
    FieldPair profile;
    double speed = 0.0;   // c0
    double period = 0.0;  // T
    FhnParams params;
    // Sup norm of the profile-equation residual of the trigonometric
    // interpolant, measured on a 2x refined grid (truncation-honest; the
    // collocation residual is at Newton tolerance by construction).
    double residual_norm = 0.0;
    int newton_iterations = 0;

    int n() const { return static_cast<int>(profile.size()); }
    Grid cell_grid() const { return {n(), 1, period}; }
    double amplitude() const { return profile.u.maxCoeff() - profile.u.minCoeff(); }
};

// Wavenumber family around k = 1: profiles phi(.;k) on a fixed T-periodic
// grid with frequencies omega(k); the wave of wavenumber k has physical
// wavelength T/k and speed omega(k)/k.
struct WaveFamily {
    WaveTrain base;
    std::vector<double> k_samples;
    std::vector<FieldPair> profiles;
    std::vector<double> omega;
    double r0 = 0.0;

    // Centered-difference k-derivatives at k = 1, phase-aligned and gauged.
    FieldPair dk_profile;      // d/dk phi(.;1)
    FieldPair dzk_profile;     // d/dzeta d/dk
    FieldPair dzzk_profile;    // d^2/dzeta^2 d/dk
    FieldPair dkk_profile;     // d^2/dk^2
    double omega_d1 = 0.0;     // omega'(1), 5-point stencil
    double omega_d2 = 0.0;     // omega''(1), 5-point stencil
    double omega_d2_3pt = 0.0; // omega''(1), 3-point stencil (cross-check)
    double gauge_inner = 0.0;  // |<adjoint_zero, dk_profile>| after gauging
};

// Residual of k^2 D f_yy + omega f_y + F(f) on the period-T grid.
FieldPair family_residual(const FieldPair& phi, double k, double omega, double period,
                          const FhnParams& p);
inline FieldPair profile_residual(const FieldPair& phi, double speed, double period,
                                  const FhnParams& p) {
    return family_residual(phi, 1.0, speed, period, p);
}

// Sup norm of the residual evaluated on a refined grid via band-limited
// upsampling of the profile.
double refined_residual_norm(const FieldPair& phi, double k, double omega, double period,
                             const FhnParams& p, int refine = 2);

enum class PeriodMode { fixed_period, free_period };

struct NewtonOptions {
    double tolerance = 1e-12;
    int max_iterations = 50;
    double divergence_threshold = 1e8;
};

struct ProfileSeed {
    FieldPair profile;        // on an n-point cell grid
    double speed = 0.0;
    double period = 0.0;
    double amplitude_ms = 0.0;  // mean-square u-amplitude target for free-T mode
};

// Newton iteration on the Fourier-collocated profile equation with the
// integral phase condition <phi_ref', phi - phi_ref> = 0. In free-period
// mode T is an unknown and the mean-square amplitude equation pins the
// member of the period family.
WaveTrain solve_profile(const FhnParams& params, const ProfileSeed& seed, PeriodMode mode,
                        const NewtonOptions& opts = {});

// Newton solve of the k-family equation at fixed (k, T): unknowns (phi, omega).
// Returns the converged profile, frequency, and iteration count.
struct FamilySolve {
    FieldPair profile;
    double omega;
    int iterations;
};
FamilySolve solve_family_member(const FhnParams& params, const FieldPair& seed, double k,
                                double omega_guess, double period, const FieldPair& phase_ref,
                                const NewtonOptions& opts = {});

struct ContinuationOptions {
    int n_k = 9;          // odd, k = 1 is the center sample
    double r0 = 0.05;
    int max_bisections = 6;
    NewtonOptions newton;
};

// Continues the wave in the wavenumber k over [1-r0, 1+r0] and forms the
// k-derivatives at k = 1. adjoint_zero (the zero-eigenvalue adjoint
// eigenfunction, normalized against phi0') fixes the translational gauge
// <adjoint_zero, d/dk phi(.;1)> = 0 by shifting the profiles; pass nullopt
// to skip gauging.
WaveFamily continue_family(const WaveTrain& wave,
                           const std::optional<ComplexFieldPair>& adjoint_zero,
                           const ContinuationOptions& opts = {});

struct FamilyCheckReport {
    std::vector<double> residuals;        // refined residual per k
    std::vector<bool> flagged;            // residual above threshold
    double gauge_inner = 0.0;
    double omega_d2_rel_gap = 0.0;        // |5pt - 3pt| / max(|5pt|, eps)
    double threshold = 1e-9;
    bool pass = false;
};
FamilyCheckReport family_consistency_check(const WaveFamily& family, double threshold = 1e-9);

struct SeedOptions {
    double domain_length = 80.0;
    int n_points = 1024;
    double t_run = 600.0;
    double dt = 0.02;
    int n_cell = 64;            // points per cell of the extracted seed
    double speed_sample_gap = 4.0;
};

// Transient simulation from a localized trigger next to a refractory patch;
// returns one wavelength of the developed pattern with measured speed.
ProfileSeed generate_seed(const FhnParams& params, const SeedOptions& opts = {});

struct FindWaveOptions {
    SeedOptions seed;
    NewtonOptions newton;
    int max_attempts = 3;  // each retry doubles the transient time
};

// Seed generation plus free-period Newton solve.
WaveTrain find_wave_train(const FhnParams& params, const FindWaveOptions& opts = {});

// Marches the cell period from a converged wave to the target by fixed-period
// re-solves, relabeling the samples onto the stretched grid at each step.
// Steps start at 4% of the period and bisect on divergence or collapse to
// the rest state; throws the last solver error once steps stop making
// progress. Use it to reach a selected family member away from the
// seed-selected wavelength.
WaveTrain continue_to_period(const WaveTrain& from, double t_target,
                             const NewtonOptions& opts = {});

// Best-fit translation: the shift s minimizing ||phi(.+s) - reference|| over
// the period, found by scanning grid offsets then refining. Returns the
// shifted profile distance and the shift.
struct AlignResult {
    double shift;
    double distance;
};
AlignResult align_profiles(const FieldPair& phi, const FieldPair& reference, double period);

// Profile translated by s via trigonometric interpolation: phi(. + s).
FieldPair shift_profile(const FieldPair& phi, double period, double s);

}  // namespace fhn
