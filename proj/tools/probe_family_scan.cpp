// Scratch probe: stability verdict across the wavelength family of a triple.
#include <cstdio>
#include <vector>

#include "fhn/bloch.hpp"
#include "fhn/fourier.hpp"
#include "fhn/wave.hpp"

using namespace fhn;

namespace {

// Quick verdict: max Re over a coarse xi grid, phase eigenvalue excluded.
struct Verdict {
    double max_re;     // over all non-phase eigenvalues
    double zero_gap;   // |second eigenvalue| at xi = 0
    double theta;
};

Verdict quick_verdict(const WaveTrain& w, int n_modes, int n_xi) {
    std::vector<double> grid = full_xi_grid(w.period, n_xi);
    auto slices = bloch_spectrum(w, grid, n_modes, 8);
    StabilityReport rep = verify_hypotheses(slices);
    return {-rep.delta, rep.zero_gap, rep.theta};
}

WaveTrain resolve_at_period(const WaveTrain& from, double t_new) {
    WaveTrain w = from;
    double cap = 0.04 * w.period;
    int failures = 0;
    while (std::abs(w.period - t_new) > 1e-12) {
        double step = t_new - w.period;
        if (std::abs(step) > cap) step = step > 0 ? cap : -cap;
        ProfileSeed seed{w.profile, w.speed, w.period + step, 0.0};
        try {
            w = solve_profile(w.params, seed, PeriodMode::fixed_period);
            cap = std::min(1.5 * cap, 0.04 * w.period);
        } catch (const std::exception&) {
            cap *= 0.5;
            if (++failures > 40) throw;
        }
    }
    return w;
}

}  // namespace

int main(int argc, char** argv) {
    FhnParams p;
    p.mu = argc > 1 ? std::atof(argv[1]) : 0.25;
    p.gamma = argc > 2 ? std::atof(argv[2]) : 0.3;
    p.epsilon = argc > 3 ? std::atof(argv[3]) : 0.05;
    const double f_lo = argc > 4 ? std::atof(argv[4]) : 0.8;
    const double f_hi = argc > 5 ? std::atof(argv[5]) : 2.0;
    const int n_t = argc > 6 ? std::atoi(argv[6]) : 10;
    p.regime = Regime::oscillatory;

    std::printf("triple mu=%g gamma=%g eps=%g\n", p.mu, p.gamma, p.epsilon);
    WaveTrain wave;
    try {
        wave = find_wave_train(p);
    } catch (const std::exception& e) {
        std::printf("find_wave_train failed: %s\n", e.what());
        return 1;
    }
    std::printf("seed-selected: T=%.4f c0=%.4f amp=%.4f res=%.2e\n", wave.period, wave.speed,
                wave.amplitude(), wave.residual_norm);

    for (int i = 0; i < n_t; ++i) {
        const double t_new = wave.period * (f_lo + (f_hi - f_lo) * i / (n_t - 1));
        try {
            WaveTrain w = resolve_at_period(wave, t_new);
            Verdict v = quick_verdict(w, 64, 24);
            std::printf("T=%8.4f c0=%.4f amp=%.4f res=%.2e | maxRe=%+.3e gap=%.2e theta=%+.3e %s\n",
                        w.period, w.speed, w.amplitude(), w.residual_norm, v.max_re,
                        v.zero_gap, v.theta, v.max_re < 0 && v.theta > 1e-6 ? "STABLE" : "");
        } catch (const std::exception& e) {
            std::printf("T=%8.4f solve failed: %s\n", t_new, e.what());
        }
    }
    return 0;
}
