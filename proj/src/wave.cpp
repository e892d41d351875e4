#include "fhn/wave.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fhn/evolve.hpp"
#include "fhn/fourier.hpp"
#include "fhn/reaction.hpp"

namespace fhn {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Dense spectral differentiation matrix (column-by-column transform; sizes
// here are small enough that this costs nothing measurable).
MatrixXd deriv_matrix(int n, double length, int order) {
    MatrixXd d(n, n);
    ArrayXd e = ArrayXd::Zero(n);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        d.col(j) = spectral_derivative(e, length, order).matrix();
        e[j] = 0.0;
    }
    return d;
}

struct NewtonState {
    FieldPair phi;
    double omega;
    double period;
    int iterations;
};

// Shared Newton core for the collocated profile equation
//   k^2 D f_yy + omega f_y + F(f) = 0
// with the integral phase condition against phase_ref. Unknowns are (phi,
// omega) and, in free-period mode, T with the mean-square amplitude equation.
NewtonState newton_profile(const FhnParams& p, FieldPair phi, double k, double omega,
                           double period, bool free_period, const FieldPair& phase_ref,
                           double amp_target, const NewtonOptions& opts) {
    const int n = static_cast<int>(phi.size());
    const int unknowns = 2 * n + 1 + (free_period ? 1 : 0);

    const ArrayXd ref_du = spectral_derivative(phase_ref.u, period, 1);
    const ArrayXd ref_dv = spectral_derivative(phase_ref.v, period, 1);

    const auto residual = [&](const FieldPair& f, double om, double t) -> VectorXd {
        const FieldPair r = family_residual(f, k, om, t, p);
        VectorXd out(unknowns);
        out.segment(0, n) = r.u.matrix();
        out.segment(n, n) = r.v.matrix();
        out[2 * n] = mean_inner(FieldPair{ref_du, ref_dv}, f - phase_ref);
        if (free_period) {
            const ArrayXd cu = f.u - f.u.mean();
            out[2 * n + 1] = cu.square().mean() - amp_target;
        }
        return out;
    };

    VectorXd r = residual(phi, omega, period);
    double rnorm = r.lpNorm<Eigen::Infinity>();
    int iter = 0;
    for (; rnorm >= opts.tolerance; ++iter) {
        if (iter >= opts.max_iterations)
            throw NewtonDivergenceError("profile Newton: no convergence after max iterations",
                                        rnorm);
        if (!std::isfinite(rnorm) || rnorm > opts.divergence_threshold)
            throw NewtonDivergenceError("profile Newton: residual blow-up", rnorm);

        const MatrixXd d1 = deriv_matrix(n, period, 1);
        const MatrixXd d2 = deriv_matrix(n, period, 2);
        const ArrayXd du = spectral_derivative(phi.u, period, 1);
        const ArrayXd dv = spectral_derivative(phi.v, period, 1);
        const ArrayXd duu = spectral_derivative(phi.u, period, 2);

        MatrixXd jac = MatrixXd::Zero(unknowns, unknowns);
        // d/dphi blocks
        jac.block(0, 0, n, n) = k * k * d2 + omega * d1;
        jac.block(0, 0, n, n).diagonal() +=
            (-3.0 * phi.u.square() + 2.0 * (1.0 + p.mu) * phi.u - p.mu).matrix();
        jac.block(0, n, n, n).diagonal().setConstant(-1.0);
        jac.block(n, 0, n, n).diagonal().setConstant(p.epsilon);
        jac.block(n, n, n, n) = omega * d1;
        jac.block(n, n, n, n).diagonal().array() -= p.epsilon * p.gamma;
        // d/domega column
        jac.block(0, 2 * n, n, 1) = du.matrix();
        jac.block(n, 2 * n, n, 1) = dv.matrix();
        // phase row
        jac.block(2 * n, 0, 1, n) = ref_du.matrix().transpose() / n;
        jac.block(2 * n, n, 1, n) = ref_dv.matrix().transpose() / n;
        if (free_period) {
            // Derivative operators scale as 1/T per order.
            jac.block(0, 2 * n + 1, n, 1) =
                ((-2.0 * k * k / period) * duu - (omega / period) * du).matrix();
            jac.block(n, 2 * n + 1, n, 1) = (-(omega / period) * dv).matrix();
            const ArrayXd cu = phi.u - phi.u.mean();
            jac.block(2 * n + 1, 0, 1, n) = (2.0 / n) * cu.matrix().transpose();
        }

        const VectorXd delta = jac.partialPivLu().solve(-r);

        // Backtracking on the residual norm.
        double alpha = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 12; ++bt) {
            FieldPair trial = phi;
            trial.u += alpha * delta.segment(0, n).array();
            trial.v += alpha * delta.segment(n, n).array();
            const double trial_omega = omega + alpha * delta[2 * n];
            const double trial_period =
                free_period ? period + alpha * delta[2 * n + 1] : period;
            if (trial_period > 0.0) {
                const VectorXd rt = residual(trial, trial_omega, trial_period);
                const double tnorm = rt.lpNorm<Eigen::Infinity>();
                if (std::isfinite(tnorm) && tnorm < rnorm) {
                    phi = std::move(trial);
                    omega = trial_omega;
                    period = trial_period;
                    r = rt;
                    rnorm = tnorm;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted)
            throw NewtonDivergenceError("profile Newton: line search stalled", rnorm);
    }
    return {std::move(phi), omega, period, iter};
}

}  // namespace

FieldPair family_residual(const FieldPair& phi, double k, double omega, double period,
                          const FhnParams& p) {
    const FieldPair reaction = evaluate_reaction(phi, p);
    FieldPair r;
    r.u = k * k * spectral_derivative(phi.u, period, 2) +
          omega * spectral_derivative(phi.u, period, 1) + reaction.u;
    r.v = omega * spectral_derivative(phi.v, period, 1) + reaction.v;
    return r;
}

double refined_residual_norm(const FieldPair& phi, double k, double omega, double period,
                             const FhnParams& p, int refine) {
    const FieldPair fine{upsample(phi.u, refine), upsample(phi.v, refine)};
    return sup_norm(family_residual(fine, k, omega, period, p));
}

WaveTrain solve_profile(const FhnParams& params, const ProfileSeed& seed, PeriodMode mode,
                        const NewtonOptions& opts) {
    params.validate();
    const int n = static_cast<int>(seed.profile.size());
    if (n < 32) throw std::invalid_argument("solve_profile: grid resolution below 32");
    if (!(seed.period > 0.0)) throw std::invalid_argument("solve_profile: period must be positive");
    check_finite(seed.profile);

    const bool free_period = (mode == PeriodMode::free_period);
    double amp_target = seed.amplitude_ms;
    if (free_period && amp_target <= 0.0) {
        const ArrayXd cu = seed.profile.u - seed.profile.u.mean();
        amp_target = cu.square().mean();
    }

    NewtonState s = newton_profile(params, seed.profile, 1.0, seed.speed, seed.period,
                                   free_period, seed.profile, amp_target, opts);

    WaveTrain wave;
    wave.profile = std::move(s.phi);
    wave.speed = s.omega;
    wave.period = s.period;
    wave.params = params;
    wave.newton_iterations = s.iterations;
    wave.residual_norm =
        refined_residual_norm(wave.profile, 1.0, wave.speed, wave.period, params);
    if (wave.amplitude() <= 1e-2)
        throw TrivialSolutionError("solve_profile: converged to a constant state");
    return wave;
}

FamilySolve solve_family_member(const FhnParams& params, const FieldPair& seed, double k,
                                double omega_guess, double period, const FieldPair& phase_ref,
                                const NewtonOptions& opts) {
    NewtonState s =
        newton_profile(params, seed, k, omega_guess, period, false, phase_ref, 0.0, opts);
    return {std::move(s.phi), s.omega, s.iterations};
}

namespace {

struct FamilyPoint {
    FieldPair phi;
    double omega;
};

// Continuation step from `from` at wavenumber k_from to k_to, bisecting the
// interval when Newton fails.
FamilyPoint advance_k(const FhnParams& p, const FamilyPoint& from, double k_from, double k_to,
                      double period, const NewtonOptions& opts, int depth, int max_depth) {
    try {
        FamilySolve s = solve_family_member(p, from.phi, k_to, from.omega, period, from.phi, opts);
        return {std::move(s.profile), s.omega};
    } catch (const NewtonDivergenceError&) {
        if (depth >= max_depth) throw;
        const double k_mid = 0.5 * (k_from + k_to);
        FamilyPoint mid = advance_k(p, from, k_from, k_mid, period, opts, depth + 1, max_depth);
        return advance_k(p, mid, k_mid, k_to, period, opts, depth + 1, max_depth);
    }
}

// 5-point centered first and second derivative weights with spacing h.
double stencil_d1(double fm2, double fm1, double fp1, double fp2, double h) {
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}
double stencil_d2(double fm2, double fm1, double f0, double fp1, double fp2, double h) {
    return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
}

ArrayXd stencil_d1(const ArrayXd& fm2, const ArrayXd& fm1, const ArrayXd& fp1,
                   const ArrayXd& fp2, double h) {
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}
ArrayXd stencil_d2(const ArrayXd& fm2, const ArrayXd& fm1, const ArrayXd& f0,
                   const ArrayXd& fp1, const ArrayXd& fp2, double h) {
    return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
}

}  // namespace

FieldPair shift_profile(const FieldPair& phi, double period, double s) {
    if (s == 0.0) return phi;  // exact identity, no transform round-trip
    const int n = static_cast<int>(phi.size());
    const auto translate = [&](const ArrayXd& f) -> ArrayXd {
        ArrayXcd c = dft(f);
        for (int q = 0; q < n; ++q) {
            const int m = signed_mode(q, n);
            const double th = kTwoPi * m * s / period;
            if (2 * q == n)
                c[q] *= std::cos(th);  // keep the translated signal real
            else
                c[q] *= Cplx(std::cos(th), std::sin(th));
        }
        return idft_real(c);
    };
    return {translate(phi.u), translate(phi.v)};
}

AlignResult align_profiles(const FieldPair& phi, const FieldPair& reference, double period) {
    const int n = static_cast<int>(phi.size());
    const double h = period / n;
    const auto distance2 = [&](double s) {
        const FieldPair shifted = shift_profile(phi, period, s);
        return (shifted.u - reference.u).square().mean() +
               (shifted.v - reference.v).square().mean();
    };
    // Coarse scan over grid offsets (circular reindex, no interpolation).
    double best = std::numeric_limits<double>::infinity();
    int best_j = 0;
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const int ij = (i + j) % n;
            const double du = phi.u[ij] - reference.u[i];
            const double dv = phi.v[ij] - reference.v[i];
            acc += du * du + dv * dv;
        }
        if (acc < best) {
            best = acc;
            best_j = j;
        }
    }
    // Parabolic refinement of the quadratic distance around the best offset.
    double s = best_j * h;
    double step = h;
    for (int pass = 0; pass < 40 && step > 1e-14 * period; ++pass) {
        const double dm = distance2(s - step), d0 = distance2(s), dp = distance2(s + step);
        const double denom = dm - 2.0 * d0 + dp;
        if (denom > 0.0) {
            double move = 0.5 * (dm - dp) / denom * step;
            move = std::clamp(move, -step, step);
            s += move;
        }
        step *= 0.5;
    }
    const FieldPair shifted = shift_profile(phi, period, s);
    return {std::fmod(s, period), sup_norm(shifted - reference)};
}

WaveFamily continue_family(const WaveTrain& wave,
                           const std::optional<ComplexFieldPair>& adjoint_zero,
                           const ContinuationOptions& opts) {
    if (opts.n_k < 5 || opts.n_k % 2 == 0)
        throw std::invalid_argument("continue_family: n_k must be odd and at least 5");
    if (!(opts.r0 > 0.0)) throw std::invalid_argument("continue_family: r0 must be positive");

    const int half = (opts.n_k - 1) / 2;
    const double dk = opts.r0 / half;
    const double period = wave.period;
    const FhnParams& p = wave.params;

    WaveFamily fam;
    fam.base = wave;
    fam.r0 = opts.r0;
    fam.k_samples.resize(opts.n_k);
    fam.profiles.resize(opts.n_k);
    fam.omega.resize(opts.n_k);

    fam.k_samples[half] = 1.0;
    fam.profiles[half] = wave.profile;
    fam.omega[half] = wave.speed;

    // March outward in both directions, bisecting on failure.
    for (int dir : {+1, -1}) {
        FamilyPoint current{wave.profile, wave.speed};
        double k_current = 1.0;
        for (int j = 1; j <= half; ++j) {
            const double k_next = 1.0 + dir * j * dk;
            current = advance_k(p, current, k_current, k_next, period, opts.newton, 0,
                                opts.max_bisections);
            k_current = k_next;
            fam.k_samples[half + dir * j] = k_next;
            fam.profiles[half + dir * j] = current.phi;
            fam.omega[half + dir * j] = current.omega;
        }
    }

    // Re-anchor every sample to the base profile's phase so that centered
    // k-differences see one smooth translation-free branch.
    for (int j = 0; j < opts.n_k; ++j) {
        if (j == half) continue;
        FamilySolve s = solve_family_member(p, fam.profiles[j], fam.k_samples[j], fam.omega[j],
                                            period, wave.profile, opts.newton);
        fam.profiles[j] = std::move(s.profile);
        fam.omega[j] = s.omega;
    }

    // Translational gauge: shift phi(.;k) by sigma1 (k-1) so the k-derivative
    // at k = 1 is orthogonal to the adjoint zero eigenfunction.
    if (adjoint_zero) {
        const ArrayXd phi0_d = spectral_derivative(wave.profile.u, period, 1);
        const ArrayXd phi0_dv = spectral_derivative(wave.profile.v, period, 1);
        const ComplexFieldPair phi0_prime =
            ComplexFieldPair::from_real(FieldPair{phi0_d, phi0_dv});
        const Cplx denom = mean_inner(*adjoint_zero, phi0_prime);
        if (std::abs(denom) < 1e-8)
            throw std::runtime_error(
                "continue_family: adjoint pairing with the profile derivative is "
                "degenerate; gauge shift ill-posed");
        const FieldPair dk_raw{
            stencil_d1(fam.profiles[half - 2].u, fam.profiles[half - 1].u,
                       fam.profiles[half + 1].u, fam.profiles[half + 2].u, dk),
            stencil_d1(fam.profiles[half - 2].v, fam.profiles[half - 1].v,
                       fam.profiles[half + 1].v, fam.profiles[half + 2].v, dk)};
        const Cplx num = mean_inner(*adjoint_zero, ComplexFieldPair::from_real(dk_raw));
        const double sigma1 = -(num / denom).real();
        for (int j = 0; j < opts.n_k; ++j)
            fam.profiles[j] =
                shift_profile(fam.profiles[j], period, sigma1 * (fam.k_samples[j] - 1.0));
    }

    // k-derivatives at k = 1 from the gauged, phase-aligned samples.
    const auto& pr = fam.profiles;
    fam.dk_profile = {stencil_d1(pr[half - 2].u, pr[half - 1].u, pr[half + 1].u,
                                 pr[half + 2].u, dk),
                      stencil_d1(pr[half - 2].v, pr[half - 1].v, pr[half + 1].v,
                                 pr[half + 2].v, dk)};
    fam.dkk_profile = {stencil_d2(pr[half - 2].u, pr[half - 1].u, pr[half].u, pr[half + 1].u,
                                  pr[half + 2].u, dk),
                       stencil_d2(pr[half - 2].v, pr[half - 1].v, pr[half].v, pr[half + 1].v,
                                  pr[half + 2].v, dk)};
    fam.dzk_profile = {spectral_derivative(fam.dk_profile.u, period, 1),
                       spectral_derivative(fam.dk_profile.v, period, 1)};
    fam.dzzk_profile = {spectral_derivative(fam.dk_profile.u, period, 2),
                        spectral_derivative(fam.dk_profile.v, period, 2)};

    fam.omega_d1 = stencil_d1(fam.omega[half - 2], fam.omega[half - 1], fam.omega[half + 1],
                              fam.omega[half + 2], dk);
    fam.omega_d2 = stencil_d2(fam.omega[half - 2], fam.omega[half - 1], fam.omega[half],
                              fam.omega[half + 1], fam.omega[half + 2], dk);
    fam.omega_d2_3pt =
        (fam.omega[half + 1] - 2.0 * fam.omega[half] + fam.omega[half - 1]) / (dk * dk);

    if (adjoint_zero) {
        fam.gauge_inner =
            std::abs(mean_inner(*adjoint_zero, ComplexFieldPair::from_real(fam.dk_profile)));
    }
    return fam;
}

FamilyCheckReport family_consistency_check(const WaveFamily& family, double threshold) {
    FamilyCheckReport rep;
    rep.threshold = threshold;
    const double period = family.base.period;
    for (std::size_t j = 0; j < family.profiles.size(); ++j) {
        const double res = refined_residual_norm(family.profiles[j], family.k_samples[j],
                                                 family.omega[j], period, family.base.params);
        rep.residuals.push_back(res);
        rep.flagged.push_back(res >= threshold);
    }
    rep.gauge_inner = family.gauge_inner;
    rep.omega_d2_rel_gap = std::abs(family.omega_d2 - family.omega_d2_3pt) /
                           std::max(std::abs(family.omega_d2), 1e-300);
    bool ok = true;
    for (const bool f : rep.flagged) ok = ok && !f;
    rep.pass = ok && rep.gauge_inner < 1e-8;
    return rep;
}

ProfileSeed generate_seed(const FhnParams& params, const SeedOptions& opts) {
    params.validate();
    const Grid grid{opts.n_points, 1, opts.domain_length};
    // n_points may be odd-ish for validate(); only evenness matters here.
    const ArrayXd x = grid.nodes();
    const double x0 = 0.5 * opts.domain_length;

    // Superthreshold bump with a refractory patch behind it: the leftward
    // front dies in the patch, leaving a rightward-running excitation that
    // wraps around the periodic domain and seeds a traveling pattern.
    FieldPair state;
    state.u = params.mu + 1.0 * (-((x - x0) / 2.0).square()).exp();
    state.v = 0.3 * (-((x - (x0 - 8.0)) / 4.0).square()).exp();

    ImexStepper stepper(grid, comoving_symbols(grid, params, 0.0),
                        nonlinear_rhs(params, params.mu), opts.dt);
    stepper.reset(state);
    stepper.advance_to(opts.t_run - opts.speed_sample_gap);
    const ArrayXd u_before = stepper.state().u;
    stepper.advance_to(opts.t_run);
    const ArrayXd u_after = stepper.state().u;
    const ArrayXd v_after = stepper.state().v;
    if (sup_norm(u_after) > 100.0)
        throw std::runtime_error("generate_seed: transient simulation blew up");

    // Propagation speed from the circular cross-correlation peak.
    const int nn = opts.n_points;
    const ArrayXcd corr_hat =
        dft(ArrayXd(u_before - u_before.mean())).conjugate() * dft(ArrayXd(u_after - u_after.mean()));
    const ArrayXd corr = idft_real(corr_hat);
    int peak = 0;
    for (int j = 1; j < nn; ++j)
        if (corr[j] > corr[peak]) peak = j;
    const double cm = corr[(peak - 1 + nn) % nn], c0v = corr[peak], cp = corr[(peak + 1) % nn];
    double frac = 0.0;
    const double denom = cm - 2.0 * c0v + cp;
    if (denom < 0.0) frac = std::clamp(0.5 * (cm - cp) / denom, -0.5, 0.5);
    double shift_idx = peak + frac;
    if (shift_idx > nn / 2.0) shift_idx -= nn;
    const double speed = shift_idx * grid.spacing() / opts.speed_sample_gap;

    // Wavelength from the pulse count (midline upcrossings).
    const double mid = 0.5 * (u_after.maxCoeff() + u_after.minCoeff());
    int pulses = 0;
    double first_cross = -1.0;
    for (int j = 0; j < nn; ++j) {
        const double a = u_after[j] - mid, b = u_after[(j + 1) % nn] - mid;
        if (a <= 0.0 && b > 0.0) {
            ++pulses;
            if (first_cross < 0.0)
                first_cross = x[j] + grid.spacing() * (-a) / (b - a);
        }
    }
    if (pulses == 0)
        throw std::runtime_error("generate_seed: no pattern developed (no midline crossings)");
    const double wavelength = opts.domain_length / pulses;

    // One wavelength of the developed pattern, resampled to the cell grid.
    ProfileSeed seed;
    ArrayXd cell_x(opts.n_cell);
    for (int j = 0; j < opts.n_cell; ++j)
        cell_x[j] = first_cross + wavelength * j / opts.n_cell;
    seed.profile = {trig_interpolate(u_after, opts.domain_length, cell_x),
                    trig_interpolate(v_after, opts.domain_length, cell_x)};
    seed.speed = speed;
    seed.period = wavelength;
    const ArrayXd cu = seed.profile.u - seed.profile.u.mean();
    seed.amplitude_ms = cu.square().mean();
    return seed;
}

WaveTrain find_wave_train(const FhnParams& params, const FindWaveOptions& opts) {
    SeedOptions seed_opts = opts.seed;
    for (int attempt = 0;; ++attempt) {
        try {
            const ProfileSeed seed = generate_seed(params, seed_opts);
            return solve_profile(params, seed, PeriodMode::free_period, opts.newton);
        } catch (const std::runtime_error&) {
            if (attempt + 1 >= opts.max_attempts) throw;
            seed_opts.t_run *= 2.0;
        }
    }
}

WaveTrain continue_to_period(const WaveTrain& from, double t_target,
                             const NewtonOptions& opts) {
    if (!(t_target > 0.0) || !std::isfinite(t_target))
        throw std::invalid_argument("continue_to_period: target period must be positive");
    WaveTrain w = from;
    double cap = 0.04 * w.period;
    const double cap_floor = 1e-6 * w.period;
    while (std::abs(w.period - t_target) > 1e-13 * t_target) {
        double step = t_target - w.period;
        if (std::abs(step) > cap) step = step > 0 ? cap : -cap;
        const ProfileSeed seed{w.profile, w.speed, w.period + step, 0.0};
        try {
            w = solve_profile(w.params, seed, PeriodMode::fixed_period, opts);
            cap = std::min(1.5 * cap, 0.04 * w.period);
        } catch (const std::runtime_error&) {
            cap *= 0.5;
            if (cap < cap_floor) throw;
        }
    }
    return w;
}

}  // namespace fhn
