#pragma once

#include <string>

namespace fhn {

enum class Regime { oscillatory, excitable, custom };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

// Parameters of the FitzHugh-Nagumo system
//   u_t = u_xx + u(1-u)(u-mu) - v,
//   v_t = eps (u - gamma v - mu).
struct FhnParams {
    double mu = 0.3;
    double gamma = 0.05;
    double epsilon = 0.002;
    Regime regime = Regime::oscillatory;

    // Throws std::invalid_argument on violated parameter constraints.
    // Named regimes require gamma > 0; custom additionally admits gamma = 0
    // so that the v-damping can be switched off in diagnostic runs.
    void validate() const;
};

// Affine change of variables mapping a solution of the mu < 0 system onto
// the equivalent system with cubic parameter in (0,1):
//   u~ = (u - u_shift) * u_scale,  v~ = v * v_scale,
//   x~ = space * x,                t~ = time * t.
struct ExcitableRescaling {
    FhnParams params;  // (mu~, gamma~, eps~)
    double space;
    double time;
    double u_shift;
    double u_scale;
    double v_scale;
    // The rescaled system reads v~_t = eps~ (u~ - gamma~ v~): the rest state
    // moves to the origin, so the v-equation carries no offset.
    double v_equation_offset = 0.0;
};

// Requires p.mu < 0. Produces mu~ = -mu/(1-mu) in (0,1),
// gamma~ = (1-mu)^2 gamma, eps~ = eps/(1-mu)^4.
ExcitableRescaling rescale_excitable(const FhnParams& p);

}  // namespace fhn
