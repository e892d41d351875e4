// Scratch probe: transient-seed + free-period Newton for candidate parameter
// triples; prints period, speed, amplitude, refined residual at n = 64/128.
#include <cstdio>

#include "fhn/fourier.hpp"
#include "fhn/wave.hpp"

using namespace fhn;

int main(int argc, char** argv) {
    double mu = 0.3, gamma = 0.05, eps = 0.002, t_run = 600.0, L = 80.0;
    int np = 1024;
    if (argc > 3) {
        mu = std::atof(argv[1]);
        gamma = std::atof(argv[2]);
        eps = std::atof(argv[3]);
    }
    if (argc > 4) t_run = std::atof(argv[4]);
    if (argc > 5) L = std::atof(argv[5]);
    if (argc > 6) np = std::atoi(argv[6]);

    FhnParams p;
    p.mu = mu;
    p.gamma = gamma;
    p.epsilon = eps;
    p.regime = Regime::custom;

    SeedOptions so;
    so.t_run = t_run;
    so.domain_length = L;
    so.n_points = np;
    std::printf("triple (%g, %g, %g), L=%g, t_run=%g\n", mu, gamma, eps, L, t_run);
    try {
        const ProfileSeed seed = generate_seed(p, so);
        std::printf("seed: period=%.6f speed=%.6f amp_ms=%.4e\n", seed.period, seed.speed,
                    seed.amplitude_ms);
        const WaveTrain w = solve_profile(p, seed, PeriodMode::free_period);
        std::printf("wave: T=%.10f c0=%.10f amp=%.4f iters=%d residual(n=64)=%.3e\n", w.period,
                    w.speed, w.amplitude(), w.newton_iterations, w.residual_norm);
        // Spectral convergence probe: resample to 128 and re-solve.
        ProfileSeed fine;
        fine.profile = {upsample(w.profile.u, 2), upsample(w.profile.v, 2)};
        fine.speed = w.speed;
        fine.period = w.period;
        const WaveTrain w2 = solve_profile(p, fine, PeriodMode::fixed_period);
        std::printf("refined: c0=%.10f residual(n=128)=%.3e ratio=%.1f\n", w2.speed,
                    w2.residual_norm, w.residual_norm / w2.residual_norm);
    } catch (const std::exception& e) {
        std::printf("FAILED: %s\n", e.what());
        return 1;
    }
    return 0;
}
