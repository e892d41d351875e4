#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fhn/fourier.hpp"
#include "fhn/grid.hpp"
#include "fhn/params.hpp"
#include "fhn/reaction.hpp"

using namespace fhn;

namespace {

FieldPair constant_state(double u, double v, int n = 4) {
    return {ArrayXd::Constant(n, u), ArrayXd::Constant(n, v)};
}

// One explicit Euler step of the reaction-diffusion system on a periodic grid.
FieldPair euler_step(const FieldPair& s, const FhnParams& p, double v_offset, double length,
                     double dt) {
    const FieldPair r = evaluate_reaction(s, p, v_offset);
    return {s.u + dt * (spectral_derivative(s.u, length, 2) + r.u), s.v + dt * r.v};
}

}  // namespace

TEST_CASE("reaction vanishes at the rest state for any parameters") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> umu(-2.0, 0.49), upos(0.001, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        FhnParams p;
        p.mu = umu(rng);
        p.gamma = upos(rng);
        p.epsilon = upos(rng);
        p.regime = Regime::custom;
        // Exact zero: the factors (u - mu) and (u - gamma v - mu) vanish identically.
        const FieldPair out = evaluate_reaction(constant_state(p.mu, 0.0), p);
        CHECK(sup_norm(out) == 0.0);
    }
}

TEST_CASE("reaction at hand-checked states") {
    FhnParams p;  // defaults (0.3, 0.05, 0.002)
    const FieldPair at_origin = evaluate_reaction(constant_state(0.0, 0.0), p);
    CHECK(at_origin.u[0] == 0.0);
    CHECK(at_origin.v[0] == doctest::Approx(-p.epsilon * p.mu).epsilon(1e-15));

    const FieldPair at_one = evaluate_reaction(constant_state(1.0, 0.0), p);
    CHECK(at_one.u[0] == 0.0);
    CHECK(at_one.v[0] == doctest::Approx(p.epsilon * (1.0 - p.mu)).epsilon(1e-15));
}

TEST_CASE("reaction rejects non-finite input naming the offending index") {
    FhnParams p;
    FieldPair s = constant_state(0.1, 0.2, 8);
    s.v[5] = std::nan("");
    try {
        evaluate_reaction(s, p);
        FAIL("expected NonFiniteFieldError");
    } catch (const NonFiniteFieldError& e) {
        CHECK(e.component == "v");
        CHECK(e.index == 5);
    }
}

TEST_CASE("jacobian at the origin matches the closed form") {
    FhnParams p;
    p.mu = 0.37;
    p.gamma = 0.21;
    p.epsilon = 0.013;
    p.regime = Regime::custom;
    const ReactionJacobian jac = reaction_jacobian(constant_state(0.0, 0.0), p);
    CHECK(jac.f_u[0] == doctest::Approx(-p.mu).epsilon(1e-15));
    CHECK(jac.j12 == -1.0);
    CHECK(jac.j21 == doctest::Approx(p.epsilon).epsilon(1e-15));
    CHECK(jac.j22 == doctest::Approx(-p.epsilon * p.gamma).epsilon(1e-15));
}

TEST_CASE("jacobian matches centered finite differences of the reaction") {
    FhnParams p;
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double u = box(rng), v = box(rng);
        const ReactionJacobian jac = reaction_jacobian(constant_state(u, v, 1), p);
        const auto column = [&](double du, double dv) {
            const FieldPair hi = evaluate_reaction(constant_state(u + h * du, v + h * dv, 1), p);
            const FieldPair lo = evaluate_reaction(constant_state(u - h * du, v - h * dv, 1), p);
            return std::pair<double, double>{(hi.u[0] - lo.u[0]) / (2 * h),
                                             (hi.v[0] - lo.v[0]) / (2 * h)};
        };
        const auto [j11, j21] = column(1.0, 0.0);
        const auto [j12, j22] = column(0.0, 1.0);
        const double scale = std::max({1.0, std::abs(j11), std::abs(j12)});
        worst = std::max(worst, std::abs(j11 - jac.f_u[0]) / scale);
        worst = std::max(worst, std::abs(j12 - jac.j12) / scale);
        worst = std::max(worst, std::abs(j21 - jac.j21) / scale);
        worst = std::max(worst, std::abs(j22 - jac.j22) / scale);
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("second derivative form: second component vanishes, first matches FD") {
    FhnParams p;
    const FieldPair state = constant_state(0.3, 0.1, 1);
    const ReactionHessian hess = reaction_hessian(state, p);
    const FieldPair a = constant_state(0.7, -0.4, 1), b = constant_state(-1.1, 0.9, 1);
    const FieldPair hab = hess.apply(a, b);
    CHECK(hab.v[0] == 0.0);

    // FD of the Jacobian-vector product in direction b.
    const double h = 1e-6;
    FieldPair sp = state, sm = state;
    sp.u[0] += h * b.u[0];
    sp.v[0] += h * b.v[0];
    sm.u[0] -= h * b.u[0];
    sm.v[0] -= h * b.v[0];
    const FieldPair dp = reaction_jacobian(sp, p).apply(a);
    const FieldPair dm = reaction_jacobian(sm, p).apply(a);
    CHECK(hab.u[0] == doctest::Approx((dp.u[0] - dm.u[0]) / (2 * h)).epsilon(1e-6));
    CHECK((dp.v[0] - dm.v[0]) / (2 * h) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("excitable rescaling hand-checked values") {
    FhnParams p;
    p.mu = -1.0;
    p.gamma = 0.1;
    p.epsilon = 0.01;
    p.regime = Regime::excitable;
    const ExcitableRescaling r = rescale_excitable(p);
    CHECK(r.params.mu == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.params.gamma == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(r.params.epsilon == doctest::Approx(0.01 / 16.0).epsilon(1e-15));

    p.mu = -3.0;
    CHECK(rescale_excitable(p).params.mu == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("excitable rescaling lands mu in (0,1) and rejects mu >= 0") {
    FhnParams p;
    p.regime = Regime::custom;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> neg(-50.0, -1e-6);
    for (int trial = 0; trial < 50; ++trial) {
        p.mu = neg(rng);
        const double mt = rescale_excitable(p).params.mu;
        CHECK(mt > 0.0);
        CHECK(mt < 1.0);
    }
    p.mu = 0.0;
    CHECK_THROWS_AS(rescale_excitable(p), std::domain_error);
    p.mu = 0.2;
    CHECK_THROWS_AS(rescale_excitable(p), std::domain_error);
}

TEST_CASE("rescale then step equals step then rescale") {
    FhnParams p;
    p.mu = -0.8;
    p.gamma = 0.2;
    p.epsilon = 0.01;
    p.regime = Regime::excitable;
    const ExcitableRescaling r = rescale_excitable(p);

    const Grid g{64, 1, 10.0};
    const ArrayXd z = g.nodes();
    FieldPair s;
    s.u = 0.4 * (2 * M_PI * z / g.length()).sin() + p.mu;
    s.v = 0.05 * (4 * M_PI * z / g.length()).cos();

    const double dt = 1e-3;
    // Path A: rescale the state, then one Euler step in the rescaled system.
    FieldPair st{(s.u - r.u_shift) * r.u_scale, s.v * r.v_scale};
    const FieldPair a =
        euler_step(st, r.params, r.v_equation_offset, r.space * g.length(), r.time * dt);
    // Path B: one Euler step in the original system, then rescale.
    const FieldPair sb = euler_step(s, p, p.mu, g.length(), dt);
    const FieldPair b{(sb.u - r.u_shift) * r.u_scale, sb.v * r.v_scale};

    CHECK(sup_norm(a - b) < 1e-8);
}

TEST_CASE("parameter validation") {
    FhnParams p;
    CHECK_NOTHROW(p.validate());
    p.epsilon = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.epsilon = 0.002;
    p.mu = 0.7;  // outside oscillatory range
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.regime = Regime::custom;
    CHECK_NOTHROW(p.validate());
    p.regime = Regime::excitable;
    p.mu = -1.5;
    CHECK_NOTHROW(p.validate());
    p.gamma = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.regime = Regime::custom;
    CHECK_NOTHROW(p.validate());  // gamma = 0 allowed only for custom runs
}

TEST_CASE("grid validation and geometry") {
    Grid g{64, 4, 2.5};
    CHECK_NOTHROW(g.validate());
    CHECK(g.total() == 256);
    CHECK(g.spacing() == doctest::Approx(2.5 / 64));
    CHECK(g.length() == doctest::Approx(10.0));
    CHECK(g.nodes()[1] == doctest::Approx(g.spacing()));

    CHECK_THROWS_AS((Grid{6, 1, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((Grid{63, 1, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((Grid{64, 0, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((Grid{64, 1, -1.0}).validate(), std::invalid_argument);
}

TEST_CASE("spectral differentiation is exact on resolved sine modes") {
    const Grid g{64, 1, 3.7};
    const ArrayXd z = g.nodes();
    for (int m = 1; m <= g.n / 4; ++m) {
        const double k = 2 * M_PI * m / g.period;
        const ArrayXd f = (k * z).sin();
        const ArrayXd expected = k * (k * z).cos();
        const ArrayXd got = spectral_derivative(f, g.length(), 1);
        CHECK(sup_norm(ArrayXd(got - expected)) / sup_norm(expected) < 1e-10);
    }
}

TEST_CASE("spectral differentiation on a multi-cell domain") {
    const Grid g{32, 8, 2.0};
    const ArrayXd z = g.nodes();
    const double k = 2 * M_PI * 3 / g.length();  // mode of the long domain
    const ArrayXd f = (k * z).sin();
    CHECK(sup_norm(ArrayXd(spectral_derivative(f, g.length(), 1) - k * (k * z).cos())) < 1e-10);
    CHECK(sup_norm(ArrayXd(spectral_derivative(f, g.length(), 2) + k * k * (k * z).sin())) < 1e-9);
}

TEST_CASE("dft round trip and trig interpolation") {
    const Grid g{64, 1, 5.0};
    const ArrayXd z = g.nodes();
    ArrayXd f = (2 * M_PI * z / g.period).sin() + 0.3 * (3 * 2 * M_PI * z / g.period).cos() + 0.7;

    CHECK(sup_norm(ArrayXd(idft_real(dft(f)) - f)) < 1e-12);

    // Interpolation reproduces the band-limited signal off grid.
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> pos(0.0, g.period);
    for (int trial = 0; trial < 20; ++trial) {
        const double x = pos(rng);
        const double exact = std::sin(2 * M_PI * x / g.period) +
                             0.3 * std::cos(3 * 2 * M_PI * x / g.period) + 0.7;
        CHECK(std::abs(trig_interpolate(f, g.period, x) - exact) < 1e-11);
    }

    // Fast path: refined-table cubic agrees closely with the exact interpolant.
    const PeriodicInterpolant fast(f, g.period, 16);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const double x = pos(rng);
        worst = std::max(worst, std::abs(fast(x) - trig_interpolate(f, g.period, x)));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("upsampling preserves the original samples") {
    const Grid g{32, 1, 1.0};
    const ArrayXd z = g.nodes();
    const ArrayXd f = (2 * M_PI * z).sin() + 0.2 * (6 * M_PI * z).cos();
    const ArrayXd fine = upsample(f, 4);
    REQUIRE(fine.size() == 128);
    for (int j = 0; j < 32; ++j) CHECK(std::abs(fine[4 * j] - f[j]) < 1e-12);
}
