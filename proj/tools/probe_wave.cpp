// Scratch probe for pinning wave-existence test tolerances: fine-grid
// residual decay under grid doubling, omega(k) second-difference texture,
// and translation-invariance alignment quality. Not built by CMake.
#include <cstdio>

#include "fhn/bloch.hpp"
#include "fhn/fourier.hpp"
#include "fhn/wave.hpp"

using namespace fhn;

namespace {

// Residual of the k=1 profile equation evaluated on a refined grid, so the
// number measures discretization error rather than Newton tolerance.
double fine_residual(const WaveTrain& w, int n_fine) {
    const int factor = n_fine / w.n();
    FieldPair fine{upsample(w.profile.u, factor), upsample(w.profile.v, factor)};
    return sup_norm(family_residual(fine, 1.0, w.speed, w.period, w.params));
}

}  // namespace

int main() {
    FhnParams p;
    p.mu = 0.25;
    p.gamma = 0.3;
    p.epsilon = 0.05;
    p.regime = Regime::oscillatory;

    const WaveTrain w0 = find_wave_train(p);
    std::printf("seed wave: T=%.6f c0=%.6f amp=%.4f res=%.3e iters=%d\n", w0.period, w0.speed,
                w0.amplitude(), w0.residual_norm, w0.newton_iterations);

    const WaveTrain w = continue_to_period(w0, 28.0);
    std::printf("member:    T=%.6f c0=%.6f amp=%.4f res=%.3e\n", w.period, w.speed,
                w.amplitude(), w.residual_norm);

    // Grid doubling.
    FieldPair up{upsample(w.profile.u, 2), upsample(w.profile.v, 2)};
    const WaveTrain w128 = solve_profile(p, ProfileSeed{up, w.speed, w.period, 0.0},
                                         PeriodMode::fixed_period);
    std::printf("fine residual n=64:  %.3e\n", fine_residual(w, 512));
    std::printf("fine residual n=128: %.3e (grid res %.3e, iters %d)\n",
                fine_residual(w128, 512), w128.residual_norm, w128.newton_iterations);

    // Under-resolved margin: coarsen to 32 points and re-solve there.
    {
        ArrayXd pts(32);
        for (int j = 0; j < 32; ++j) pts[j] = w.period * j / 32;
        FieldPair coarse{trig_interpolate(w.profile.u, w.period, pts),
                         trig_interpolate(w.profile.v, w.period, pts)};
        const WaveTrain w32 = solve_profile(p, ProfileSeed{coarse, w.speed, w.period, 0.0},
                                            PeriodMode::fixed_period);
        std::printf("fine residual n=32:  %.3e (grid res %.3e, iters %d, amp %.4f)\n",
                    fine_residual(w32, 512), w32.residual_norm, w32.newton_iterations,
                    w32.amplitude());
    }

    // Also for the small-amplitude seed-selected wave, for reference.
    FieldPair up0{upsample(w0.profile.u, 2), upsample(w0.profile.v, 2)};
    const WaveTrain w0_128 = solve_profile(p, ProfileSeed{up0, w0.speed, w0.period, 0.0},
                                           PeriodMode::fixed_period);
    std::printf("seed wave fine residual n=64: %.3e  n=128: %.3e\n", fine_residual(w0, 512),
                fine_residual(w0_128, 512));

    // Translation invariance.
    for (double frac : {17.0 / 64.0, 0.37}) {
        const double s = frac * w.period;
        FieldPair shifted = shift_profile(w.profile, w.period, s);
        const WaveTrain ws = solve_profile(p, ProfileSeed{shifted, w.speed, w.period, 0.0},
                                           PeriodMode::fixed_period);
        const AlignResult a = align_profiles(ws.profile, w.profile, w.period);
        std::printf("shift %.4f: iters=%d align shift=%.6f dist=%.3e\n", s,
                    ws.newton_iterations, a.shift, a.distance);
    }

    // Family texture.
    const CriticalCurve curve = critical_curve(w, 0.02, 5, 64);
    const WaveFamily fam = continue_family(w, curve.phi0_adj());
    std::printf("omega(1)-c0 = %.3e  gauge=%.3e  d2 5pt=%.8f 3pt=%.8f\n",
                fam.omega[fam.k_samples.size() / 2] - w.speed, fam.gauge_inner, fam.omega_d2,
                fam.omega_d2_3pt);
    std::printf("omega second differences:\n");
    for (std::size_t i = 1; i + 1 < fam.omega.size(); ++i)
        std::printf("  k=%.4f  d2=%.6e\n", fam.k_samples[i],
                    fam.omega[i + 1] - 2.0 * fam.omega[i] + fam.omega[i - 1]);

    const FamilyCheckReport rep = family_consistency_check(fam);
    std::printf("consistency: pass=%d gauge=%.3e d2gap=%.3e max_res=%.3e\n", rep.pass ? 1 : 0,
                rep.gauge_inner, rep.omega_d2_rel_gap,
                *std::max_element(rep.residuals.begin(), rep.residuals.end()));
    return 0;
}
