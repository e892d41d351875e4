#include "fhn/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fhn/fourier.hpp"
#include "fhn/reaction.hpp"

namespace fhn {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Physical samples of the cell profile at n_modes points.
FieldPair resample_profile(const WaveTrain& wave, int n_modes) {
    if (n_modes == wave.n()) return wave.profile;
    ArrayXd pts(n_modes);
    for (int j = 0; j < n_modes; ++j) pts[j] = wave.period * j / n_modes;
    return {trig_interpolate(wave.profile.u, wave.period, pts),
            trig_interpolate(wave.profile.v, wave.period, pts)};
}

// The fiber matrix acts on the modes -h..h with h = (n_modes-1)/2; the even
// grid's Nyquist bin is excluded so every retained mode has its negative
// partner. This keeps the fiber at -xi the exact conjugate of the one at +xi
// and avoids an artificial first-order-derivative convention on the odd bin.
int retained_modes(int n_modes) { return n_modes % 2 == 0 ? n_modes - 1 : n_modes; }

ComplexFieldPair coeffs_to_samples(const VectorXcd& w, int n_modes) {
    const int mr = retained_modes(n_modes);
    ArrayXcd cu = ArrayXcd::Zero(n_modes), cv = ArrayXcd::Zero(n_modes);
    for (int r = 0; r < mr; ++r) {
        const int bin = (signed_mode(r, mr) + n_modes) % n_modes;
        cu[bin] = w[r];
        cv[bin] = w[mr + r];
    }
    // Basis functions are exp(i k_m zeta); raw backward transform sums them.
    return {idft(cu) * static_cast<double>(n_modes), idft(cv) * static_cast<double>(n_modes)};
}

struct EigPick {
    Cplx value;
    VectorXcd vector;
    double gap;  // distance to the nearest other eigenvalue
};

// Eigenpair of A with eigenvalue closest to the target.
EigPick pick_nearest(const MatrixXcd& a, Cplx target) {
    Eigen::ComplexEigenSolver<MatrixXcd> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("Bloch eigensolver failed (matrix norm " +
                                 std::to_string(a.norm()) + ")");
    const VectorXcd& vals = solver.eigenvalues();
    int best = 0;
    for (int i = 1; i < vals.size(); ++i)
        if (std::abs(vals[i] - target) < std::abs(vals[best] - target)) best = i;
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < vals.size(); ++i)
        if (i != best) gap = std::min(gap, std::abs(vals[i] - vals[best]));
    return {vals[best], solver.eigenvectors().col(best), gap};
}

}  // namespace

Eigen::MatrixXcd bloch_matrix(const WaveTrain& wave, double xi, int n_modes) {
    const int mr = retained_modes(n_modes);
    const double t = wave.period;
    const FhnParams& p = wave.params;
    const FieldPair prof = resample_profile(wave, n_modes);
    const ArrayXd fprime =
        prof.u.unaryExpr([&](double x) { return cubic_d1(x, p.mu); });
    const ArrayXcd fhat = dft(fprime);

    MatrixXcd a = MatrixXcd::Zero(2 * mr, 2 * mr);
    for (int r = 0; r < mr; ++r) {
        const double k = kTwoPi * signed_mode(r, mr) / t + xi;  // symbol of d/dzeta + i xi
        a(r, r) = Cplx(-k * k, wave.speed * k);
        a(mr + r, mr + r) = Cplx(-p.epsilon * p.gamma, wave.speed * k);
        a(r, mr + r) = -1.0;
        a(mr + r, r) = p.epsilon;
        // Multiplication by f'(u0): circulant in the Fourier basis, with mode
        // differences aliased onto the n_modes-point sampling grid.
        for (int c = 0; c < mr; ++c) {
            const int d = signed_mode(r, mr) - signed_mode(c, mr);
            a(r, c) += fhat[(d % n_modes + n_modes) % n_modes] / static_cast<double>(n_modes);
        }
    }
    return a;
}

ComplexFieldPair apply_bloch(const WaveTrain& wave, double xi, const ComplexFieldPair& w) {
    const int m = static_cast<int>(w.size());
    const FhnParams& p = wave.params;
    const FieldPair prof = resample_profile(wave, m);
    const ArrayXd fprime =
        prof.u.unaryExpr([&](double x) { return cubic_d1(x, p.mu); });

    ArrayXcd cu = dft(w.u), cv = dft(w.v);
    // Project the input onto the retained modes (drop the even grid's
    // Nyquist bin, matching the fiber matrix basis).
    if (m % 2 == 0) cu[m / 2] = cv[m / 2] = 0.0;
    const ArrayXcd u_band = idft(cu);
    ArrayXcd ph = dft(fprime.cast<Cplx>() * u_band);
    if (m % 2 == 0) ph[m / 2] = 0.0;

    ArrayXcd ou(m), ov(m);
    for (int r = 0; r < m; ++r) {
        const double k = kTwoPi * signed_mode(r, m) / wave.period + xi;
        ou[r] = Cplx(-k * k, wave.speed * k) * cu[r] + ph[r] - cv[r];
        ov[r] = Cplx(-p.epsilon * p.gamma, wave.speed * k) * cv[r] + p.epsilon * cu[r];
    }
    return {idft(ou), idft(ov)};
}

std::vector<double> full_xi_grid(double period, int n) {
    std::vector<double> grid(n);
    const double lo = -kPi / period, width = kTwoPi / period;
    for (int i = 0; i < n; ++i) grid[i] = lo + width * i / n;
    return grid;
}

std::vector<SpectrumSlice> bloch_spectrum(const WaveTrain& wave,
                                          const std::vector<double>& xi_grid, int n_modes,
                                          int n_eigs) {
    if (n_modes < 32) throw std::invalid_argument("bloch_spectrum: n_modes must be >= 32");
    std::vector<SpectrumSlice> out;
    out.reserve(xi_grid.size());
    for (const double xi : xi_grid) {
        const MatrixXcd a = bloch_matrix(wave, xi, n_modes);
        Eigen::ComplexEigenSolver<MatrixXcd> solver(a, /*computeEigenvectors=*/false);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("Bloch eigensolver failed at xi = " + std::to_string(xi) +
                                     " (matrix norm " + std::to_string(a.norm()) + ")");
        std::vector<Cplx> vals(solver.eigenvalues().data(),
                               solver.eigenvalues().data() + solver.eigenvalues().size());
        std::sort(vals.begin(), vals.end(),
                  [](Cplx a_, Cplx b_) { return a_.real() > b_.real(); });
        if (n_eigs > 0 && n_eigs < static_cast<int>(vals.size())) vals.resize(n_eigs);
        out.push_back({xi, std::move(vals), n_modes});
    }
    return out;
}

StabilityReport verify_hypotheses(const std::vector<SpectrumSlice>& slices) {
    StabilityReport rep;
    if (slices.empty()) return rep;

    // Locate the phase eigenvalue: nearest to 0 on the slice closest to xi=0.
    int zero_slice = 0;
    for (std::size_t i = 1; i < slices.size(); ++i)
        if (std::abs(slices[i].xi) < std::abs(slices[zero_slice].xi)) zero_slice = static_cast<int>(i);
    const auto& zvals = slices[zero_slice].eigenvalues;
    if (zvals.empty()) return rep;
    std::size_t phase_idx = 0;
    for (std::size_t i = 1; i < zvals.size(); ++i)
        if (std::abs(zvals[i]) < std::abs(zvals[phase_idx])) phase_idx = i;
    rep.zero_abs = std::abs(zvals[phase_idx]);
    double second = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < zvals.size(); ++i)
        if (i != phase_idx) second = std::min(second, std::abs(zvals[i]));
    rep.zero_gap = second;
    rep.d3_pass = rep.zero_gap > 1e-6;

    // (D1): strict stability margin away from the phase eigenvalue.
    double max_re = -std::numeric_limits<double>::infinity();
    // (D2): quadratic tangency constant.
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < slices.size(); ++s) {
        const auto& sl = slices[s];
        for (std::size_t i = 0; i < sl.eigenvalues.size(); ++i) {
            if (static_cast<int>(s) == zero_slice && i == phase_idx) continue;
            max_re = std::max(max_re, sl.eigenvalues[i].real());
        }
        if (sl.eigenvalues.empty()) continue;
        const double top = sl.eigenvalues.front().real();  // rightmost
        if (sl.xi != 0.0) theta = std::min(theta, -top / (sl.xi * sl.xi));
    }
    rep.delta = -max_re;
    rep.d1_pass = rep.delta > 0.0;
    rep.theta = std::isfinite(theta) ? theta : 0.0;
    rep.d2_pass = rep.theta > 1e-6;
    return rep;
}

double default_xi0(const WaveTrain& wave, int n_modes) {
    const double xi_max = kPi / wave.period;
    const int n_scan = 64;
    Cplx lam(0.0, 0.0);
    Cplx prev = lam;
    for (int i = 1; i <= n_scan; ++i) {
        const double xi = xi_max * i / n_scan;
        const Cplx predict = (i == 1) ? lam : lam + (lam - prev);
        const MatrixXcd a = bloch_matrix(wave, xi, n_modes);
        Eigen::ComplexEigenSolver<MatrixXcd> solver(a, false);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("default_xi0: eigensolver failed");
        const VectorXcd& vals = solver.eigenvalues();
        int best = 0;
        for (int j = 1; j < vals.size(); ++j)
            if (std::abs(vals[j] - predict) < std::abs(vals[best] - predict)) best = j;
        double gap = std::numeric_limits<double>::infinity();
        for (int j = 0; j < vals.size(); ++j)
            if (j != best) gap = std::min(gap, std::abs(vals[j] - vals[best]));
        // A collision is declared when the branch prediction error becomes
        // comparable to the distance to the nearest other eigenvalue, i.e.
        // the branch identity is no longer trustworthy.
        if (std::abs(vals[best] - predict) > 0.5 * gap) return std::min(0.5 * xi, 0.2 * xi_max);
        prev = lam;
        lam = vals[best];
    }
    return 0.2 * xi_max;
}

namespace {

struct CurvePoint {
    Cplx lambda;
    ComplexFieldPair phi;
    ComplexFieldPair phi_adj;
    double gap;
};

CurvePoint solve_point(const WaveTrain& wave, double xi, int n_modes, Cplx predict) {
    const MatrixXcd a = bloch_matrix(wave, xi, n_modes);
    EigPick right = pick_nearest(a, predict);
    EigPick left = pick_nearest(MatrixXcd(a.adjoint()), std::conj(right.value));
    CurvePoint pt;
    pt.lambda = right.value;
    pt.phi = coeffs_to_samples(right.vector, n_modes);
    pt.phi_adj = coeffs_to_samples(left.vector, n_modes);
    pt.gap = right.gap;
    return pt;
}

}  // namespace

CriticalCurve critical_curve(const WaveTrain& wave, double xi0, int n_xi, int n_modes) {
    if (n_xi < 5) throw std::invalid_argument("critical_curve: n_xi must be >= 5");
    if (n_xi % 2 == 0) ++n_xi;  // symmetric sampling with a center point
    const double xi_floor = 1e-2 * kPi / wave.period;

    for (;;) {
        CriticalCurve curve;
        curve.xi0 = xi0;
        curve.n_modes = n_modes;
        curve.period = wave.period;
        curve.xi_samples.resize(n_xi);
        curve.lambda_c.resize(n_xi);
        curve.phi.resize(n_xi);
        curve.phi_adj.resize(n_xi);
        const int half = n_xi / 2;
        const double dxi = xi0 / half;

        bool collision = false;
        double xi_collision = xi0;

        // Center point: realify and anchor to the profile derivative.
        CurvePoint base = solve_point(wave, 0.0, n_modes, Cplx(0.0, 0.0));
        const FieldPair prof = resample_profile(wave, n_modes);
        const ArrayXd du = spectral_derivative(prof.u, wave.period, 1);
        const ArrayXd dv = spectral_derivative(prof.v, wave.period, 1);
        const ComplexFieldPair phi0_prime = ComplexFieldPair::from_real({du, dv});
        {
            const Cplx align = mean_inner(base.phi, phi0_prime) / mean_inner(base.phi, base.phi);
            ComplexFieldPair phi0{(align * base.phi.u).real().cast<Cplx>(),
                                  (align * base.phi.v).real().cast<Cplx>()};
            const Cplx norm = mean_inner(base.phi_adj, phi0);
            if (std::abs(norm) < 1e-12)
                throw std::runtime_error("critical_curve: adjoint normalization degenerate");
            ComplexFieldPair adj{(base.phi_adj.u / std::conj(norm)).real().cast<Cplx>(),
                                 (base.phi_adj.v / std::conj(norm)).real().cast<Cplx>()};
            // Imaginary residue from the eigensolver phase is discarded above;
            // re-enforce the pairing exactly on the realified pair.
            const Cplx renorm = mean_inner(adj, phi0);
            adj.u /= std::conj(renorm);
            adj.v /= std::conj(renorm);
            curve.xi_samples[half] = 0.0;
            curve.lambda_c[half] = base.lambda;
            curve.phi[half] = std::move(phi0);
            curve.phi_adj[half] = std::move(adj);
        }

        for (int dir : {+1, -1}) {
            Cplx lam_prev2 = base.lambda, lam_prev = base.lambda;
            for (int j = 1; j <= half && !collision; ++j) {
                const double xi = dir * j * dxi;
                const Cplx predict =
                    (j == 1) ? lam_prev : lam_prev + (lam_prev - lam_prev2);
                CurvePoint pt = solve_point(wave, xi, n_modes, predict);
                if (std::abs(pt.lambda - predict) > 0.5 * pt.gap) {
                    collision = true;
                    xi_collision = std::abs(xi);
                    break;
                }
                // Normalize: <adj0, phi> = 1 fixes scale and phase; <adj, phi> = 1.
                const Cplx a0p = mean_inner(curve.phi_adj[half], pt.phi);
                if (std::abs(a0p) < 1e-12) {
                    collision = true;  // lost the branch
                    xi_collision = std::abs(xi);
                    break;
                }
                pt.phi *= 1.0 / a0p;
                const Cplx g = mean_inner(pt.phi_adj, pt.phi);
                if (std::abs(g) < 1e-12) {
                    collision = true;
                    xi_collision = std::abs(xi);
                    break;
                }
                pt.phi_adj *= 1.0 / std::conj(g);
                const int idx = half + dir * j;
                curve.xi_samples[idx] = xi;
                curve.lambda_c[idx] = pt.lambda;
                curve.phi[idx] = std::move(pt.phi);
                curve.phi_adj[idx] = std::move(pt.phi_adj);
                lam_prev2 = lam_prev;
                lam_prev = pt.lambda;
            }
        }

        if (!collision) return curve;
        xi0 = 0.9 * xi_collision;
        if (xi0 < xi_floor)
            throw std::runtime_error(
                "critical_curve: eigenvalue collision forces the window below its floor");
    }
}

DispersionCoefficients dispersion_coefficients(const CriticalCurve& curve,
                                               const WaveFamily& family) {
    DispersionCoefficients out;
    const double t = curve.period;
    const WaveTrain& wave = family.base;

    // Window fits with the leading correction terms included:
    //   Im lambda = a xi + b xi^3,  Re lambda = p xi^2 + q xi^4.
    {
        double s2 = 0, s4 = 0, s6 = 0, s8 = 0, ri = 0, r3 = 0, re2 = 0, re4 = 0;
        for (std::size_t i = 0; i < curve.xi_samples.size(); ++i) {
            const double xi = curve.xi_samples[i];
            const double x2 = xi * xi;
            s2 += x2;
            s4 += x2 * x2;
            s6 += x2 * x2 * x2;
            s8 += x2 * x2 * x2 * x2;
            ri += xi * curve.lambda_c[i].imag();
            r3 += xi * x2 * curve.lambda_c[i].imag();
            re2 += x2 * curve.lambda_c[i].real();
            re4 += x2 * x2 * curve.lambda_c[i].real();
        }
        // Normal equations of the two 2-parameter least-squares problems.
        const double det_odd = s2 * s6 - s4 * s4;
        const double a = (s6 * ri - s4 * r3) / det_odd;
        const double det_even = s4 * s8 - s6 * s6;
        const double pcoef = (s8 * re2 - s6 * re4) / det_even;
        out.cg_fit = -a;
        out.d_fit = -pcoef;
    }

    // Profile-side factors live on the family grid; the center adjoint is
    // real after curve normalization, so it resamples like any profile.
    ComplexFieldPair adj0 = curve.phi0_adj();
    if (adj0.size() != wave.n()) {
        ArrayXd pts(wave.n());
        for (int j = 0; j < wave.n(); ++j) pts[j] = t * j / wave.n();
        const FieldPair r = adj0.real();
        adj0 = ComplexFieldPair::from_real(
            {trig_interpolate(r.u, t, pts), trig_interpolate(r.v, t, pts)});
    }
    const ArrayXd du2 = spectral_derivative(wave.profile.u, t, 2);
    const ArrayXd du1 = spectral_derivative(wave.profile.u, t, 1);

    const auto pair_first = [&](const ArrayXd& first) {
        return mean_inner(adj0, ComplexFieldPair{first.cast<Cplx>(),
                                                 ArrayXcd::Zero(first.size())})
            .real();
    };

    out.cg_projection = -2.0 * pair_first(du2) - wave.speed;
    out.cg_family = family.omega_d1 - wave.speed;
    out.d_projection = pair_first(du1 + 2.0 * family.dzk_profile.u);
    out.nu_family = -0.5 * family.omega_d2;

    // Full projection expression for nu: the D-weighted second-order terms,
    // the quadratic form in dk phi, minus the product of projections.
    const FieldPair f2 =
        reaction_hessian(wave.profile, wave.params).apply(family.dk_profile, family.dk_profile);
    const double main_term = pair_first(du2 + 2.0 * family.dzzk_profile.u + 0.5 * f2.u);
    const double product_term =
        -2.0 * pair_first(du2) *
        mean_inner(adj0, ComplexFieldPair::from_real(family.dzk_profile)).real();
    out.nu_projection = main_term + product_term;

    const auto rel_gap = [](double x, double y) {
        return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300});
    };
    out.cg_rel_gap = rel_gap(out.cg_fit, out.cg_projection);
    out.d_rel_gap = rel_gap(out.d_fit, out.d_projection);
    out.nu_rel_gap = rel_gap(out.nu_family, out.nu_projection);
    return out;
}

}  // namespace fhn
