#include "fhn/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fhn/cutoffs.hpp"
#include "fhn/evolve.hpp"
#include "fhn/fourier.hpp"
#include "fhn/grid.hpp"
#include "fhn/reaction.hpp"

namespace fhn {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Integer powers stay exact at a zero base (std::pow on complex goes through
// exp/log and returns NaN for 0^0, which the m = 0 lattice mode would hit).
Cplx cpow_int(Cplx base, int n) {
    Cplx r(1.0, 0.0);
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}

Grid multi_cell_grid(const WaveTrain& wave, Index g_size) {
    if (g_size <= 0 || g_size % wave.n() != 0)
        throw std::invalid_argument(
            "semigroup: field length must be a positive multiple of the wave's cell "
            "resolution (" +
            std::to_string(wave.n()) + ")");
    Grid grid{wave.n(), static_cast<int>(g_size / wave.n()), wave.period};
    grid.validate();
    return grid;
}

// Linearized reaction coupling about the profile, tiled over the cells. The
// constant-coefficient symbols already carry diffusion, frame advection and
// the -eps*gamma damping, so only the pointwise terms remain explicit.
ImexStepper make_linear_stepper(const WaveTrain& wave, const Grid& grid, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("semigroup: dt must be positive");
    ArrayXd fprime_cell =
        wave.profile.u.unaryExpr([&](double x) { return cubic_d1(x, wave.params.mu); });
    ArrayXd fprime = fprime_cell.replicate(grid.cells, 1);

    // The implicit half is unconditionally stable; the explicit two-step part
    // must resolve the pointwise coupling block.
    const double coupling = fprime.abs().maxCoeff() + 1.0 + wave.params.epsilon;
    if (dt * coupling > 0.5)
        throw std::invalid_argument(
            "semigroup: dt too large for the explicit coupling; use dt <= " +
            std::to_string(0.4 / coupling));

    const double eps = wave.params.epsilon;
    ImexStepper::Rhs rhs = [fprime = std::move(fprime), eps](const FieldPair& s,
                                                             double) -> FieldPair {
        return {fprime * s.u - s.v, eps * s.u};
    };
    return ImexStepper(grid, comoving_symbols(grid, wave.params, wave.speed),
                       std::move(rhs), dt);
}

}  // namespace

LinearEvolution linear_evolve(const WaveTrain& wave, const FieldPair& g, double t_end,
                              double dt, int max_snapshots) {
    if (!(t_end >= 0.0)) throw std::invalid_argument("linear_evolve: t_end must be >= 0");
    if (max_snapshots < 2) throw std::invalid_argument("linear_evolve: max_snapshots < 2");
    const Grid grid = multi_cell_grid(wave, g.size());
    ImexStepper stepper = make_linear_stepper(wave, grid, dt);
    stepper.reset(g);

    const long n_steps = std::lround(t_end / dt);
    const long stride = std::max(1L, (n_steps + max_snapshots - 2) / (max_snapshots - 1));

    LinearEvolution out;
    out.times.push_back(0.0);
    out.states.push_back(g);
    for (long s = 1; s <= n_steps; ++s) {
        stepper.step();
        if (s % stride == 0 || s == n_steps) {
            check_finite(stepper.state());
            out.times.push_back(stepper.time());
            out.states.push_back(stepper.state());
        }
    }
    return out;
}

BlochWindow bloch_window(const WaveTrain& wave, const CriticalCurve& curve, int n_cells) {
    if (n_cells < 1) throw std::invalid_argument("bloch_window: n_cells must be >= 1");
    if (curve.period != wave.period)
        throw std::invalid_argument("bloch_window: curve and wave periods differ");

    BlochWindow win;
    win.n_cells = n_cells;
    win.n_per_cell = curve.n_modes;
    win.period = wave.period;
    win.xi0 = curve.xi0;

    const double dxi = kTwoPi / (n_cells * wave.period);
    int m_max = 0;
    while ((m_max + 1) * dxi < curve.xi0) ++m_max;
    if (2 * m_max + 1 < 8)
        throw std::invalid_argument(
            "bloch_window: domain too short: only " + std::to_string(2 * m_max + 1) +
            " lattice wavenumbers inside the frequency window (need at least 8)");

    // Locate each nonnegative lattice wavenumber among the curve samples; the
    // negative side is mirrored by conjugation below.
    std::vector<int> sample_of(m_max + 1, -1);
    for (int m = 0; m <= m_max; ++m) {
        const double target = m * dxi;
        int best = 0;
        for (std::size_t i = 1; i < curve.xi_samples.size(); ++i)
            if (std::abs(curve.xi_samples[i] - target) <
                std::abs(curve.xi_samples[best] - target))
                best = static_cast<int>(i);
        if (std::abs(curve.xi_samples[best] - target) > 1e-9)
            throw std::invalid_argument(
                "bloch_window: curve samples miss the lattice wavenumber " +
                std::to_string(target) +
                "; build the curve with xi0 = M * 2 pi / (n_cells * period) and "
                "n_xi = 2 M + 1");
        sample_of[m] = best;
    }

    const int count = 2 * m_max + 1;
    win.modes.resize(count);
    win.xi.resize(count);
    win.rho.resize(count);
    win.lambda.resize(count);
    win.phi.resize(count);
    win.phi_adj.resize(count);
    for (int m = -m_max; m <= m_max; ++m) {
        const int i = m + m_max;
        const int s = sample_of[std::abs(m)];
        win.modes[i] = m;
        win.xi[i] = m * dxi;
        win.rho[i] = rho_bump(win.xi[i], curve.xi0);
        if (m >= 0) {
            win.lambda[i] = curve.lambda_c[s];
            win.phi[i] = curve.phi[s];
            win.phi_adj[i] = curve.phi_adj[s];
        } else {
            win.lambda[i] = std::conj(curve.lambda_c[s]);
            win.phi[i] = {curve.phi[s].u.conjugate(), curve.phi[s].v.conjugate()};
            win.phi_adj[i] = {curve.phi_adj[s].u.conjugate(),
                              curve.phi_adj[s].v.conjugate()};
        }
    }

    // Lattice stencils about the center. Conjugate symmetry of the branch
    // makes both results exactly real, so only the +1, +2 samples enter.
    // The branch expands as lambda = -i cg xi - d xi^2 + ..., so the group
    // velocity is minus the imaginary slope.
    const Cplx l1 = win.lambda[m_max + 1], l2 = win.lambda[m_max + 2];
    win.cg = -(8.0 * l1 - l2).imag() / (6.0 * dxi);
    const ComplexFieldPair& p1 = win.phi[m_max + 1];
    const ComplexFieldPair& p2 = win.phi[m_max + 2];
    win.dk_phi = {(8.0 * p1.u - p2.u).imag() / (6.0 * dxi),
                  (8.0 * p1.v - p2.v).imag() / (6.0 * dxi)};
    win.phi0_prime = win.phi[m_max].real();
    return win;
}

std::vector<Cplx> bloch_coefficients(const BlochWindow& win, const FieldPair& g) {
    const int n = win.total();
    if (g.size() != n)
        throw std::invalid_argument("bloch_coefficients: field length mismatch");
    const ArrayXcd gu = dft(g.u);
    const ArrayXcd gv = dft(g.v);
    const int npc = win.n_per_cell;

    std::vector<Cplx> coeffs(win.modes.size());
    ArrayXcd su(npc), sv(npc);
    for (std::size_t i = 0; i < win.modes.size(); ++i) {
        // Fiber at xi_m: DFT bins congruent to m modulo n_cells, reindexed as
        // a cell-periodic signal. The small inverse transform lands on the
        // cell grid where the eigenfunctions live.
        for (int s = 0; s < npc; ++s) {
            const int q = ((win.modes[i] + s * win.n_cells) % n + n) % n;
            su[s] = gu[q];
            sv[s] = gv[q];
        }
        const ComplexFieldPair fiber{idft(su) / static_cast<double>(win.n_cells),
                                     idft(sv) / static_cast<double>(win.n_cells)};
        coeffs[i] = mean_inner(win.phi_adj[i], fiber);
    }
    return coeffs;
}

namespace {

// Shared state for evaluating the critical-window parts at many times: the
// coefficients, carrier waves and tiled eigenfunctions do not depend on t.
struct WindowEvaluator {
    const BlochWindow& win;
    std::vector<Cplx> coeffs;
    std::vector<ArrayXcd> carrier;        // e^{i xi_m x} on the multi-cell grid
    std::vector<ArrayXcd> phi_u, phi_v;   // eigenfunctions tiled over cells
    ArrayXd lift0_u, lift0_v;             // tiled phi0'
    ArrayXd lift1_u, lift1_v;             // tiled dk_phi

    WindowEvaluator(const BlochWindow& w, const FieldPair& g) : win(w) {
        coeffs = bloch_coefficients(win, g);
        const Grid grid{win.n_per_cell, win.n_cells, win.period};
        const ArrayXd x = grid.nodes();
        carrier.reserve(win.modes.size());
        phi_u.reserve(win.modes.size());
        phi_v.reserve(win.modes.size());
        for (std::size_t i = 0; i < win.modes.size(); ++i) {
            carrier.push_back((Cplx(0.0, win.xi[i]) * x.cast<Cplx>()).exp());
            phi_u.push_back(win.phi[i].u.replicate(win.n_cells, 1));
            phi_v.push_back(win.phi[i].v.replicate(win.n_cells, 1));
        }
        lift0_u = win.phi0_prime.u.replicate(win.n_cells, 1);
        lift0_v = win.phi0_prime.v.replicate(win.n_cells, 1);
        lift1_u = win.dk_phi.u.replicate(win.n_cells, 1);
        lift1_v = win.dk_phi.v.replicate(win.n_cells, 1);
    }

    CriticalParts parts(double t) const {
        const int n = win.total();
        const double chi = chi_cutoff(t);
        CriticalParts out;
        if (chi == 0.0) {
            out.phase = ArrayXd::Zero(n);
            out.lift = FieldPair::zero(n);
            out.window = FieldPair::zero(n);
            out.residual = FieldPair::zero(n);
            return out;
        }
        ArrayXcd acc_sp = ArrayXcd::Zero(n), acc_dsp = ArrayXcd::Zero(n);
        ArrayXcd acc_u = ArrayXcd::Zero(n), acc_v = ArrayXcd::Zero(n);
        for (std::size_t i = 0; i < win.modes.size(); ++i) {
            const Cplx w = chi * win.rho[i] * coeffs[i] * std::exp(win.lambda[i] * t);
            const ArrayXcd term = w * carrier[i];
            acc_sp += term;
            acc_dsp += Cplx(0.0, win.xi[i]) * term;
            acc_u += term * phi_u[i];
            acc_v += term * phi_v[i];
        }
        out.phase = acc_sp.real();
        const ArrayXd dsp = acc_dsp.real();
        out.lift = {lift0_u * out.phase + lift1_u * dsp,
                    lift0_v * out.phase + lift1_v * dsp};
        out.window = {acc_u.real(), acc_v.real()};
        out.residual = out.window - out.lift;
        return out;
    }
};

}  // namespace

CriticalParts critical_parts(const BlochWindow& win, const FieldPair& g, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("critical_parts: t must be >= 0");
    if (g.size() != win.total())
        throw std::invalid_argument("critical_parts: field length mismatch");
    return WindowEvaluator(win, g).parts(t);
}

ArrayXd sp_apply(const BlochWindow& win, const FieldPair& g, double t, int j, int l) {
    if (!(t >= 0.0)) throw std::invalid_argument("sp_apply: t must be >= 0");
    if (j < 0 || l < 0 || j + l > 6)
        throw std::invalid_argument("sp_apply: need j, l >= 0 with j + l <= 6");
    const int n = win.total();
    if (g.size() != n) throw std::invalid_argument("sp_apply: field length mismatch");

    const double chi = chi_cutoff(t);
    if (chi == 0.0) return ArrayXd::Zero(n);

    const std::vector<Cplx> coeffs = bloch_coefficients(win, g);
    const Grid grid{win.n_per_cell, win.n_cells, win.period};
    const ArrayXcd x = grid.nodes().cast<Cplx>();

    ArrayXcd acc = ArrayXcd::Zero(n);
    for (std::size_t i = 0; i < win.modes.size(); ++i) {
        const Cplx drift(0.0, win.cg * win.xi[i]);
        const Cplx w = chi * win.rho[i] * coeffs[i] * std::exp(win.lambda[i] * t) *
                       cpow_int(win.lambda[i] + drift, j) *
                       cpow_int(Cplx(0.0, win.xi[i]), l);
        acc += w * (Cplx(0.0, win.xi[i]) * x).exp();
    }
    return acc.real();
}

ArrayXd sp_apply(const WaveTrain& wave, const CriticalCurve& curve, const FieldPair& g,
                 double t, int j, int l) {
    if (g.size() <= 0 || g.size() % curve.n_modes != 0)
        throw std::invalid_argument(
            "sp_apply: field length must be a multiple of the curve's cell resolution");
    const int n_cells = static_cast<int>(g.size() / curve.n_modes);
    return sp_apply(bloch_window(wave, curve, n_cells), g, t, j, l);
}

std::vector<PropagatorSample> semigroup_decompose(const WaveTrain& wave,
                                                  const CriticalCurve& curve,
                                                  const FieldPair& g,
                                                  const std::vector<double>& t_list,
                                                  double dt) {
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        if (!(t_list[i] >= 0.0))
            throw std::invalid_argument("semigroup_decompose: times must be >= 0");
        if (i > 0 && !(t_list[i] > t_list[i - 1]))
            throw std::invalid_argument("semigroup_decompose: t_list must be increasing");
        const double steps = t_list[i] / dt;
        if (std::abs(steps - std::lround(steps)) > 1e-8 * std::max(1.0, steps))
            throw std::invalid_argument(
                "semigroup_decompose: t = " + std::to_string(t_list[i]) +
                " is not an integer multiple of dt");
    }

    const Grid grid = multi_cell_grid(wave, g.size());
    if (grid.n != curve.n_modes)
        throw std::invalid_argument(
            "semigroup_decompose: curve resolution differs from the wave's cell grid");
    const BlochWindow win = bloch_window(wave, curve, grid.cells);
    const WindowEvaluator eval(win, g);

    ImexStepper stepper = make_linear_stepper(wave, grid, dt);
    stepper.reset(g);

    std::vector<PropagatorSample> out;
    out.reserve(t_list.size());
    for (const double t : t_list) {
        stepper.advance_to(t);
        check_finite(stepper.state());
        PropagatorSample s;
        s.t = t;
        s.input = g;
        s.full = stepper.state();
        CriticalParts parts = eval.parts(t);
        s.principal_phase = std::move(parts.phase);
        s.principal_lift = std::move(parts.lift);
        s.residual_sr = std::move(parts.residual);
        s.residual_se = s.full - s.principal_lift - s.residual_sr;
        s.chi_value = chi_cutoff(t);
        out.push_back(std::move(s));
    }
    return out;
}

ArrayXd heat_propagate(const ArrayXd& g, double length, double t, double d, double c_g,
                       int m) {
    if (!(d > 0.0)) throw std::invalid_argument("heat_propagate: d must be positive");
    if (!(length > 0.0)) throw std::invalid_argument("heat_propagate: length must be > 0");
    if (!(t >= 0.0)) throw std::invalid_argument("heat_propagate: t must be >= 0");
    if (m < 0 || m > 1) throw std::invalid_argument("heat_propagate: m must be 0 or 1");

    const int n = static_cast<int>(g.size());
    ArrayXcd c = dft(g);
    for (int q = 0; q < n; ++q) {
        const double k = kTwoPi * signed_mode(q, n) / length;
        if (n % 2 == 0 && q == n / 2) {
            // The Nyquist bin aliases +k and -k; on the grid the advected
            // mode stays a cosine, and the odd derivative factor vanishes.
            c[q] *= (m == 1) ? 0.0 : std::exp(-d * k * k * t) * std::cos(c_g * k * t);
            continue;
        }
        Cplx mult = std::exp(t * Cplx(-d * k * k, -c_g * k));
        if (m == 1) mult *= Cplx(0.0, k);
        c[q] *= mult;
    }
    return idft_real(c);
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, DecayModel model,
                   std::optional<std::pair<double, double>> window) {
    std::vector<std::pair<double, double>> pts(series);
    std::sort(pts.begin(), pts.end());
    std::pair<double, double> w;
    if (window) {
        w = *window;
    } else if (!pts.empty()) {
        w = {pts.front().first, pts.back().first};
    } else {
        throw std::invalid_argument("fit_decay: empty series");
    }

    DecayFit fit;
    fit.window = w;
    fit.fitted_log_correction = (model == DecayModel::power_log);
    for (const auto& [t, norm] : pts) {
        if (t < w.first || t > w.second) continue;
        if (!(norm > 0.0))
            throw std::invalid_argument("fit_decay: non-positive norm at t = " +
                                        std::to_string(t));
        fit.times.push_back(t);
        fit.norms.push_back(norm);
    }
    const int n = static_cast<int>(fit.times.size());
    if (n < 8)
        throw std::invalid_argument("fit_decay: need at least 8 samples in the window, got " +
                                    std::to_string(n));

    // Regression coordinates per model; the slope is the reported exponent.
    ArrayXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
        const double t = fit.times[i];
        switch (model) {
            case DecayModel::power:
                x[i] = std::log(1.0 + t);
                y[i] = std::log(fit.norms[i]);
                break;
            case DecayModel::power_log:
                x[i] = std::log(1.0 + t);
                y[i] = std::log(fit.norms[i]) - std::log(std::log(2.0 + t));
                break;
            case DecayModel::exponential:
                x[i] = t;
                y[i] = std::log(fit.norms[i]);
                break;
        }
    }
    const double xm = x.mean(), ym = y.mean();
    const double sxx = ((x - xm) * (x - xm)).sum();
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_decay: degenerate time samples");
    const double slope = ((x - xm) * (y - ym)).sum() / sxx;
    const ArrayXd res = y - ym - slope * (x - xm);
    fit.fitted_exponent = slope;
    fit.residual = std::sqrt((res * res).sum() / n);
    fit.exponent_stderr = std::sqrt((res * res).sum() / (n - 2) / sxx);
    return fit;
}

}  // namespace fhn
