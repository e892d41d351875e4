#include "fhn/evolve.hpp"

#include <cmath>
#include <stdexcept>

#include "fhn/fourier.hpp"
#include "fhn/reaction.hpp"

namespace fhn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

ImexOperator comoving_symbols(const Grid& grid, const FhnParams& p, double c0) {
    const int m = grid.total();
    const double length = grid.length();
    ImexOperator op{ArrayXcd(m), ArrayXcd(m)};
    for (int q = 0; q < m; ++q) {
        const double k = kTwoPi * signed_mode(q, m) / length;
        op.symbol_u[q] = Cplx(-k * k, c0 * k);
        op.symbol_v[q] = Cplx(-p.epsilon * p.gamma, c0 * k);
    }
    return op;
}

ImexStepper::ImexStepper(Grid grid, ImexOperator op, Rhs explicit_rhs, double dt)
    : grid_(std::move(grid)), op_(std::move(op)), rhs_(std::move(explicit_rhs)), dt_(dt) {
    grid_.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("ImexStepper: dt must be positive");
    if (op_.symbol_u.size() != grid_.total() || op_.symbol_v.size() != grid_.total())
        throw std::invalid_argument("ImexStepper: symbol length mismatch");
}

void ImexStepper::reset(const FieldPair& state, double t0) {
    if (state.size() != grid_.total())
        throw std::invalid_argument("ImexStepper: state length mismatch");
    state_ = state;
    hat_u_ = dft(state.u);
    hat_v_ = dft(state.v);
    t_ = t0;
    have_prev_ = false;
}

void ImexStepper::sync_physical() {
    state_.u = idft_real(hat_u_);
    state_.v = idft_real(hat_v_);
}

void ImexStepper::step() {
    const FieldPair n_now = rhs_(state_, t_);
    ArrayXcd nu = dft(n_now.u);
    ArrayXcd nv = dft(n_now.v);

    ArrayXcd fu, fv;
    if (have_prev_) {
        fu = 1.5 * nu - 0.5 * prev_nu_;
        fv = 1.5 * nv - 0.5 * prev_nv_;
    } else {
        fu = nu;
        fv = nv;
    }
    const double h = 0.5 * dt_;
    hat_u_ = ((1.0 + h * op_.symbol_u) * hat_u_ + dt_ * fu) / (1.0 - h * op_.symbol_u);
    hat_v_ = ((1.0 + h * op_.symbol_v) * hat_v_ + dt_ * fv) / (1.0 - h * op_.symbol_v);

    prev_nu_ = std::move(nu);
    prev_nv_ = std::move(nv);
    have_prev_ = true;
    t_ += dt_;
    sync_physical();
}

void ImexStepper::advance_to(double t_end) {
    const long steps = std::lround((t_end - t_) / dt_);
    for (long i = 0; i < steps; ++i) step();
}

ImexStepper::Rhs nonlinear_rhs(const FhnParams& p, double v_offset) {
    return [p, v_offset](const FieldPair& s, double) -> FieldPair {
        // The symbols already integrate diffusion, advection and -eps*gamma*v.
        return {s.u * (1.0 - s.u) * (s.u - p.mu) - s.v,
                p.epsilon * (s.u - v_offset)};
    };
}

}  // namespace fhn
