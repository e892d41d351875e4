// Scratch probe: spectral vetting of a candidate parameter triple.
#include <cstdio>

#include "fhn/bloch.hpp"
#include "fhn/fourier.hpp"
#include "fhn/wave.hpp"

using namespace fhn;

int main(int argc, char** argv) {
    FhnParams p;
    p.mu = argc > 1 ? std::atof(argv[1]) : 0.25;
    p.gamma = argc > 2 ? std::atof(argv[2]) : 0.3;
    p.epsilon = argc > 3 ? std::atof(argv[3]) : 0.05;
    p.regime = Regime::oscillatory;

    const double t_target = argc > 4 ? std::atof(argv[4]) : 0.0;

    std::printf("triple mu=%g gamma=%g eps=%g\n", p.mu, p.gamma, p.epsilon);
    WaveTrain wave = find_wave_train(p);
    std::printf("wave: T=%.6f c0=%.6f amp=%.4f res=%.3e iters=%d\n", wave.period,
                wave.speed, wave.amplitude(), wave.residual_norm, wave.newton_iterations);
    if (t_target > 0.0) {
        wave = continue_to_period(wave, t_target);
        std::printf("at T=%.6f: c0=%.6f amp=%.4f res=%.3e\n", wave.period, wave.speed,
                    wave.amplitude(), wave.residual_norm);
    }

    const int n_modes = 64;
    auto slices = bloch_spectrum(wave, full_xi_grid(wave.period, 64), n_modes, 0);
    for (const auto& sl : slices) {
        if (std::abs(sl.xi) > 0.02 && std::abs(std::abs(sl.xi) - M_PI / wave.period) > 0.02)
            continue;
        std::printf("  xi=%+.5f top:", sl.xi);
        for (int i = 0; i < 4; ++i)
            std::printf(" (%+.4e,%+.4e)", sl.eigenvalues[i].real(), sl.eigenvalues[i].imag());
        std::printf("\n");
    }
    StabilityReport rep = verify_hypotheses(slices);
    std::printf("hyp: d1=%d d2=%d d3=%d delta=%.3e theta=%.3e z0=%.3e gap=%.3e\n",
                rep.d1_pass, rep.d2_pass, rep.d3_pass, rep.delta, rep.theta, rep.zero_abs,
                rep.zero_gap);

    double xi0 = default_xi0(wave, n_modes);
    std::printf("xi0 default=%.6f (cap %.6f)\n", xi0, 0.2 * M_PI / wave.period);
    CriticalCurve curve = critical_curve(wave, xi0, 17, n_modes);
    std::printf("curve: xi0=%.6f lam_c(0)=%.3e\n", curve.xi0, std::abs(curve.lambda_c[curve.center()]));

    // Eigenresidual spot check.
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.xi_samples.size(); ++i) {
        ComplexFieldPair lhs = apply_bloch(wave, curve.xi_samples[i], curve.phi[i]);
        lhs -= curve.lambda_c[i] * curve.phi[i];
        worst = std::max(worst, sup_norm(lhs) / sup_norm(curve.phi[i]));
    }
    std::printf("eigenresidual worst=%.3e\n", worst);

    // Truncation doubling.
    CriticalCurve curve2 = critical_curve(wave, curve.xi0, 17, 2 * n_modes);
    double dl = 0.0;
    for (std::size_t i = 0; i < curve.lambda_c.size(); ++i)
        dl = std::max(dl, std::abs(curve.lambda_c[i] - curve2.lambda_c[i]));
    std::printf("doubling dlambda=%.3e\n", dl);

    WaveFamily fam = continue_family(wave, curve.phi0_adj());
    std::printf("family: omega'(1)=%.8f omega''(1)=%.8f (3pt %.8f) gauge=%.3e\n",
                fam.omega_d1, fam.omega_d2, fam.omega_d2_3pt, fam.gauge_inner);

    DispersionCoefficients disp = dispersion_coefficients(curve, fam);
    std::printf("cg: fit=%.8f proj=%.8f family=%.8f gap=%.3e\n", disp.cg_fit,
                disp.cg_projection, disp.cg_family, disp.cg_rel_gap);
    std::printf("d:  fit=%.8f proj=%.8f gap=%.3e\n", disp.d_fit, disp.d_projection,
                disp.d_rel_gap);
    std::printf("nu: family=%.8f proj=%.8f gap=%.3e\n", disp.nu_family, disp.nu_projection,
                disp.nu_rel_gap);

    // Eigenfunction expansion order.
    ComplexFieldPair phi0p = ComplexFieldPair::from_real(
        {spectral_derivative(wave.profile.u, wave.period, 1),
         spectral_derivative(wave.profile.v, wave.period, 1)});
    for (int j = curve.center() + 1; j < static_cast<int>(curve.xi_samples.size()); ++j) {
        const double xi = curve.xi_samples[j];
        ComplexFieldPair lin = phi0p;
        lin += Cplx(0.0, xi) * ComplexFieldPair::from_real(fam.dk_profile);
        ComplexFieldPair diff = curve.phi[j];
        diff -= lin;
        std::printf("  xi=%.5f |Phi-lin|=%.3e\n", xi, sup_norm(diff));
    }

    // Damping removed: march gamma down to zero re-solving from the last profile.
    WaveTrain w = wave;
    for (double g : {0.2, 0.1, 0.05, 0.02, 0.0}) {
        FhnParams q = w.params;
        q.gamma = g;
        q.regime = Regime::custom;
        ProfileSeed seed{w.profile, w.speed, w.period, 0.0};
        try {
            w = solve_profile(q, seed, PeriodMode::free_period);
            std::printf("gamma=%.3f: T=%.4f c0=%.4f amp=%.3f res=%.2e\n", g, w.period,
                        w.speed, w.amplitude(), w.residual_norm);
        } catch (const std::exception& e) {
            std::printf("gamma=%.3f: solve failed: %s\n", g, e.what());
            return 1;
        }
    }
    for (int nm : {64, 128, 256}) {
        auto slices0 = bloch_spectrum(w, full_xi_grid(w.period, 64), nm, 0);
        StabilityReport rep0 = verify_hypotheses(slices0);
        std::printf(
            "gamma=0 nm=%3d: d1=%d d2=%d d3=%d delta=%.3e theta=%.3e z0=%.3e gap=%.3e\n",
            nm, rep0.d1_pass, rep0.d2_pass, rep0.d3_pass, rep0.delta, rep0.theta,
            rep0.zero_abs, rep0.zero_gap);
    }
    return 0;
}
