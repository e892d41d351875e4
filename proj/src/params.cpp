#include "fhn/params.hpp"

#include <cmath>
#include <stdexcept>

namespace fhn {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::oscillatory: return "oscillatory";
        case Regime::excitable: return "excitable";
        case Regime::custom: return "custom";
    }
    return "custom";
}

Regime regime_from_string(const std::string& s) {
    if (s == "oscillatory") return Regime::oscillatory;
    if (s == "excitable") return Regime::excitable;
    if (s == "custom") return Regime::custom;
    throw std::invalid_argument("unknown regime: " + s);
}

void FhnParams::validate() const {
    if (!std::isfinite(mu) || !std::isfinite(gamma) || !std::isfinite(epsilon))
        throw std::invalid_argument("FhnParams: non-finite parameter");
    if (epsilon <= 0.0)
        throw std::invalid_argument("FhnParams: epsilon must be positive");
    if (regime == Regime::custom) {
        if (gamma < 0.0)
            throw std::invalid_argument("FhnParams: gamma must be nonnegative");
        return;
    }
    if (gamma <= 0.0)
        throw std::invalid_argument("FhnParams: gamma must be positive");
    if (regime == Regime::oscillatory && !(mu > 0.0 && mu < 0.5))
        throw std::invalid_argument("FhnParams: oscillatory regime needs 0 < mu < 1/2");
    if (regime == Regime::excitable && !(mu < 0.0))
        throw std::invalid_argument("FhnParams: excitable regime needs mu < 0");
}

ExcitableRescaling rescale_excitable(const FhnParams& p) {
    if (!(p.mu < 0.0))
        throw std::domain_error("rescale_excitable: defined for mu < 0 only");
    if (p.gamma < 0.0)
        throw std::domain_error("rescale_excitable: gamma must be nonnegative");
    const double s = 1.0 - p.mu;  // s > 1
    ExcitableRescaling r;
    r.params.mu = -p.mu / s;
    r.params.gamma = s * s * p.gamma;
    r.params.epsilon = p.epsilon / (s * s * s * s);
    r.params.regime =
        (r.params.mu < 0.5 && r.params.gamma > 0.0) ? Regime::oscillatory : Regime::custom;
    r.space = s;
    r.time = s * s;
    r.u_shift = p.mu;
    r.u_scale = 1.0 / s;
    r.v_scale = 1.0 / (s * s * s);
    return r;
}

}  // namespace fhn
