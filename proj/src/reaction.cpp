#include "fhn/reaction.hpp"

namespace fhn {

FieldPair evaluate_reaction(const FieldPair& state, const FhnParams& p, double v_offset) {
    check_finite(state);
    FieldPair out;
    out.u = state.u * (1.0 - state.u) * (state.u - p.mu) - state.v;
    out.v = p.epsilon * (state.u - p.gamma * state.v - v_offset);
    return out;
}

ReactionJacobian reaction_jacobian(const FieldPair& state, const FhnParams& p) {
    check_finite(state);
    ReactionJacobian jac;
    jac.f_u = -3.0 * state.u.square() + 2.0 * (1.0 + p.mu) * state.u - p.mu;
    jac.j12 = -1.0;
    jac.j21 = p.epsilon;
    jac.j22 = -p.epsilon * p.gamma;
    return jac;
}

ReactionHessian reaction_hessian(const FieldPair& state, const FhnParams& p) {
    check_finite(state);
    return {-6.0 * state.u + 2.0 * (1.0 + p.mu)};
}

}  // namespace fhn
