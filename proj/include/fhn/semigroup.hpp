#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fhn/bloch.hpp"
#include "fhn/fields.hpp"
#include "fhn/wave.hpp"

namespace fhn {

// Snapshots of the linearized evolution w_t = L0 w on the multi-cell grid.
struct LinearEvolution {
    std::vector<double> times;
    std::vector<FieldPair> states;
};

// Steps the linearization about the wave train with the semi-implicit scheme
// (constant-coefficient symbols implicit, the pointwise reaction coupling
// explicit). g must live on a grid with wave.n() points per cell; snapshots
// are thinned to at most max_snapshots, always keeping t = 0 and t = t_end.
LinearEvolution linear_evolve(const WaveTrain& wave, const FieldPair& g, double t_end,
                              double dt, int max_snapshots = 256);

// Critical-branch eigendata bound to the wavenumber lattice of a concrete
// multi-cell domain: one eigentriple per xi_m = 2 pi m / (cells * period)
// inside the frequency window of the curve. Entries are mirrored from the
// m >= 0 samples, so conjugate symmetry (and hence realness of every
// reconstructed field) is structural rather than numerical.
struct BlochWindow {
    int n_cells = 0;
    int n_per_cell = 0;             // cell grid resolution (curve's n_modes)
    double period = 0.0;
    double xi0 = 0.0;               // window half-width, copied from the curve
    double cg = 0.0;                // group velocity, lattice stencil at 0
    std::vector<int> modes;         // signed lattice indices, ascending
    std::vector<double> xi;         // xi_m for each entry of modes
    std::vector<double> rho;        // frequency bump weights, rho > 0 inside
    std::vector<Cplx> lambda;       // critical eigenvalue at xi_m
    std::vector<ComplexFieldPair> phi;      // eigenfunctions on the cell grid
    std::vector<ComplexFieldPair> phi_adj;  // adjoints, <phi_adj, phi> = 1
    FieldPair phi0_prime;           // translational mode (window center)
    FieldPair dk_phi;               // d phi / d(i xi) at 0, lattice stencil

    int total() const { return n_cells * n_per_cell; }
    double length() const { return n_cells * period; }
};

// Matches the curve's samples to the lattice of an n_cells domain. Requires
// the curve to have been built with xi0 = M * 2 pi / (n_cells * period) and
// n_xi = 2 M + 1 so its samples coincide with lattice wavenumbers; throws
// std::invalid_argument otherwise, and a "domain too short" error when fewer
// than 8 lattice points fall inside the window.
BlochWindow bloch_window(const WaveTrain& wave, const CriticalCurve& curve, int n_cells);

// Fiber coefficients <phi_adj_m, g_hat(xi_m, .)> of g against the window,
// one per window mode. g_hat is the exact reindexing of the DFT of g onto
// cell-periodic fibers; coefficients at -m are conjugates of those at +m.
std::vector<Cplx> bloch_coefficients(const BlochWindow& win, const FieldPair& g);

// Phase propagator with derivative factors: evaluates
//   (d_t + cg d_zeta)^j d_zeta^l S_p(t) g
// as the discrete Bloch sum over the window, scalar-valued on the multi-cell
// grid. Identically zero for t <= 1 (temporal cutoff). Requires j, l >= 0
// with j + l <= 6 and t >= 0.
ArrayXd sp_apply(const BlochWindow& win, const FieldPair& g, double t, int j, int l);
ArrayXd sp_apply(const WaveTrain& wave, const CriticalCurve& curve, const FieldPair& g,
                 double t, int j, int l);

// Critical-window fields at one time, evaluated directly from the Bloch sum
// (no time stepping): the phase density, its lift to the wave's tangent
// directions, the full window reconstruction and the window-minus-lift
// residual. Everything vanishes identically for t <= 1.
struct CriticalParts {
    ArrayXd phase;       // S_p(t) g
    FieldPair lift;      // (phi0' + dk_phi d_zeta) S_p(t) g
    FieldPair window;    // full critical-window sum
    FieldPair residual;  // window - lift
};

CriticalParts critical_parts(const BlochWindow& win, const FieldPair& g, double t);

// One time slice of the semigroup decomposition. The parts satisfy
// full = principal_lift + residual_sr + residual_se with residual_se defined
// as the difference, so the identity is exact by construction.
struct PropagatorSample {
    double t = 0.0;
    FieldPair input;
    FieldPair full;            // e^{L0 t} g from the time stepper
    ArrayXd principal_phase;   // S_p(t) g
    FieldPair principal_lift;  // (phi0' + dk_phi d_zeta) S_p(t) g
    FieldPair residual_sr;     // critical window minus its leading lift
    FieldPair residual_se;     // full minus the critical window part
    double chi_value = 0.0;    // temporal cutoff at t
};

// Runs the linearized evolution once and evaluates the critical-window parts
// at each requested time. t_list must be increasing, with every entry an
// integer multiple of dt (the stepper cannot land between steps).
std::vector<PropagatorSample> semigroup_decompose(const WaveTrain& wave,
                                                  const CriticalCurve& curve,
                                                  const FieldPair& g,
                                                  const std::vector<double>& t_list,
                                                  double dt = 0.01);

// Applies d_zeta^m e^{(d d_zeta^2 - c_g d_zeta) t} by Fourier symbol on a
// periodic domain of the given length. m must be 0 or 1; d > 0 and t >= 0.
ArrayXd heat_propagate(const ArrayXd& g, double length, double t, double d, double c_g,
                       int m);

enum class DecayModel { power, power_log, exponential };

// Least-squares fit of a norm history in log coordinates:
//   power:       norm ~ a (1+t)^p          -> fitted_exponent = p
//   power-log:   norm ~ a log(2+t)(1+t)^-p -> fitted_exponent = -p
//   exponential: norm ~ a e^{r t}          -> fitted_exponent = r
struct DecayFit {
    std::vector<double> times;   // samples inside the window, ascending
    std::vector<double> norms;
    double fitted_exponent = 0.0;
    bool fitted_log_correction = false;
    std::pair<double, double> window{0.0, 0.0};
    double residual = 0.0;         // RMS of the log-space regression residual
    double exponent_stderr = 0.0;  // standard error of the fitted slope
};

// Fits the selected model over the samples inside the window (all samples
// when no window is given). Requires at least 8 in-window samples and
// strictly positive norms.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, DecayModel model,
                   std::optional<std::pair<double, double>> window = std::nullopt);

}  // namespace fhn
