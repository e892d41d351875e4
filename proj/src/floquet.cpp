#include "fhn/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "fhn/fourier.hpp"
#include "fhn/reaction.hpp"

namespace fhn {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

using Eigen::Matrix2cd;
using Eigen::Matrix3cd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector3cd;
using Eigen::VectorXcd;

// Coefficient data for the first-order system. f'(u0) is a trigonometric
// polynomial of degree <= n, so sampling it on a 4x refined grid makes the
// interpolated evaluation below exact, not an approximation.
struct Coefficients {
    ArrayXd fprime_fine;
    double period;
    double c0;
    double epsilon;
    double gamma;
};

Coefficients make_coefficients(const WaveTrain& wave) {
    const ArrayXd u_fine = upsample(wave.profile.u, 4);
    return {u_fine.unaryExpr([&](double x) { return cubic_d1(x, wave.params.mu); }),
            wave.period, wave.speed, wave.params.epsilon, wave.params.gamma};
}

double eval_fprime(const Coefficients& co, double zeta) {
    double z = std::fmod(zeta, co.period);
    if (z < 0.0) z += co.period;
    return trig_interpolate(co.fprime_fine, co.period, z);
}

Matrix3cd coefficient_matrix(const Coefficients& co, Cplx lambda, double zeta) {
    Matrix3cd a;
    const double fp = eval_fprime(co, zeta);
    a << 0.0, 1.0, 0.0,                                        //
        lambda - fp, -co.c0, 1.0,                              //
        -co.epsilon / co.c0, 0.0, (co.epsilon * co.gamma + lambda) / co.c0;
    return a;
}

using OdeState = std::array<Cplx, 9>;

struct MatrixSystem {
    const Coefficients* co;
    Cplx lambda;
    bool adjoint;  // integrate theta' = -A(zeta)^* theta instead

    void operator()(const OdeState& s, OdeState& ds, double zeta) const {
        Eigen::Map<const Matrix3cd> u(s.data());
        Eigen::Map<Matrix3cd> du(ds.data());
        const Matrix3cd a = coefficient_matrix(*co, lambda, zeta);
        if (adjoint)
            du = -a.adjoint() * u;
        else
            du = a * u;
    }
};

OdeState identity_state() {
    OdeState s{};
    Eigen::Map<Matrix3cd>(s.data()).setIdentity();
    return s;
}

// Evolution of the (possibly adjoint) system from 0 to each requested time.
std::vector<Matrix3cd> evolve_samples(const Coefficients& co, Cplx lambda,
                                      const std::vector<double>& times, bool adjoint,
                                      const MonodromyOptions& opts) {
    namespace ode = boost::numeric::odeint;
    std::vector<Matrix3cd> out;
    out.reserve(times.size());
    OdeState state = identity_state();
    std::vector<double> pts = times;
    if (pts.empty() || pts.front() != 0.0) pts.insert(pts.begin(), 0.0);
    auto stepper = ode::make_controlled(opts.abs_tol, opts.rel_tol,
                                        ode::runge_kutta_fehlberg78<OdeState>());
    std::vector<Matrix3cd> all;
    ode::integrate_times(stepper, MatrixSystem{&co, lambda, adjoint}, state, pts.begin(),
                         pts.end(), co.period / 256.0,
                         [&](const OdeState& s, double) {
                             all.emplace_back(Eigen::Map<const Matrix3cd>(s.data()));
                         });
    const std::size_t offset = all.size() - times.size();
    for (std::size_t i = 0; i < times.size(); ++i) out.push_back(all[offset + i]);
    return out;
}

// Adjoint evolutions anchored at the period end: returns T_ad(t_j, T) for
// ascending times. Integrating the adjoint system forward from 0 amplifies
// eigenvector roundoff by exp(+|nu_ss| T) (the mirrored strong-stable
// exponent), which wipes out six digits of the adjoint factor; anchoring at
// zeta = T makes that branch contract instead.
std::vector<Matrix3cd> adjoint_samples_from_period(const Coefficients& co, Cplx lambda,
                                                   const std::vector<double>& times,
                                                   const MonodromyOptions& opts) {
    namespace ode = boost::numeric::odeint;
    std::vector<double> pts(times.rbegin(), times.rend());
    if (pts.empty() || pts.front() != co.period) pts.insert(pts.begin(), co.period);
    OdeState state = identity_state();
    auto stepper = ode::make_controlled(opts.abs_tol, opts.rel_tol,
                                        ode::runge_kutta_fehlberg78<OdeState>());
    std::vector<Matrix3cd> all;
    ode::integrate_times(stepper, MatrixSystem{&co, lambda, true}, state, pts.begin(), pts.end(),
                         -co.period / 256.0,
                         [&](const OdeState& s, double) {
                             all.emplace_back(Eigen::Map<const Matrix3cd>(s.data()));
                         });
    std::vector<Matrix3cd> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out.push_back(all[all.size() - 1 - i]);
    return out;
}

Matrix3cd evolve_to(const Coefficients& co, Cplx lambda, double zeta_to, bool adjoint,
                    const MonodromyOptions& opts) {
    if (zeta_to == 0.0) return Matrix3cd::Identity();
    return evolve_samples(co, lambda, {zeta_to}, adjoint, opts).front();
}

// nu candidates of a multiplier across nearby log branches; picks the one
// closest to the prediction.
Cplx branch_log(Cplx multiplier, double period, Cplx predict, int* winding) {
    const Cplx principal = std::log(multiplier);
    Cplx best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int k = -2; k <= 2; ++k) {
        const Cplx nu = (principal + Cplx(0.0, kTwoPi * k)) / period;
        const double dist = std::abs(nu - predict);
        if (dist < best_dist) {
            best_dist = dist;
            best = nu;
            if (winding) *winding = k;
        }
    }
    return best;
}

std::array<Cplx, 3> period_map_eigenvalues(const Matrix3cd& u) {
    Eigen::ComplexEigenSolver<Matrix3cd> solver(u, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("monodromy: 3x3 eigensolver failed");
    return {solver.eigenvalues()[0], solver.eigenvalues()[1], solver.eigenvalues()[2]};
}

void validate_speed(const WaveTrain& wave) {
    if (std::abs(wave.speed) < 1e-8)
        throw std::invalid_argument(
            "monodromy: zero wave speed, the first-order reduction divides by c0");
}

ComplexFieldPair resample_complex(const ComplexFieldPair& f, double period, int n) {
    if (static_cast<int>(f.size()) == n) return f;
    ArrayXd pts(n);
    for (int j = 0; j < n; ++j) pts[j] = period * j / n;
    const auto interp = [&](const ArrayXcd& c) -> ArrayXcd {
        const ArrayXd re = trig_interpolate(c.real().eval(), period, pts);
        const ArrayXd im = trig_interpolate(c.imag().eval(), period, pts);
        return re.cast<Cplx>() + Cplx(0.0, 1.0) * im.cast<Cplx>();
    };
    return {interp(f.u), interp(f.v)};
}

}  // namespace

Eigen::Matrix3cd first_order_matrix(const WaveTrain& wave, Cplx lambda, double zeta) {
    validate_speed(wave);
    return coefficient_matrix(make_coefficients(wave), lambda, zeta);
}

MonodromyData monodromy(const WaveTrain& wave, Cplx lambda, const MonodromyOptions& opts) {
    validate_speed(wave);
    const Coefficients co = make_coefficients(wave);
    const double t = wave.period;
    const int hops = std::max(2, opts.path_points);

    // Continue the critical exponent from the translational zero at lambda=0
    // along the straight segment, tracking the log branch.
    Cplx nu_prev2(0.0, 0.0), nu_prev(0.0, 0.0);
    int winding = 0;
    Matrix3cd u_final;
    for (int j = 0; j <= hops; ++j) {
        const Cplx lam = lambda * (static_cast<double>(j) / hops);
        const Matrix3cd u = evolve_to(co, lam, t, false, opts);
        const auto mults = period_map_eigenvalues(u);
        const Cplx predict = (j <= 1) ? nu_prev : nu_prev + (nu_prev - nu_prev2);
        Cplx best_nu;
        int best_winding = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (const Cplx mult : mults) {
            int w = 0;
            const Cplx nu = branch_log(mult, t, predict, &w);
            if (std::abs(nu - predict) < best_dist) {
                best_dist = std::abs(nu - predict);
                best_nu = nu;
                best_winding = w;
            }
        }
        nu_prev2 = nu_prev;
        nu_prev = best_nu;
        winding = best_winding;
        if (j == hops) u_final = u;
        if (lambda == Cplx(0.0, 0.0)) {  // degenerate path, no need to re-integrate
            u_final = u;
            break;
        }
    }

    MonodromyData data;
    data.lambda = lambda;
    data.matrix = u_final;
    data.nu_c = nu_prev;
    data.winding = winding;
    auto mults = period_map_eigenvalues(u_final);
    std::array<Cplx, 3> exps;
    for (int i = 0; i < 3; ++i) exps[i] = std::log(mults[i]) / t;
    std::sort(exps.begin(), exps.end(),
              [](Cplx a, Cplx b) { return a.real() > b.real(); });
    data.floquet_exponents = exps;
    data.condition = u_final.norm() * u_final.inverse().norm();
    return data;
}

RankOneFactors rank_one_factors(const WaveTrain& wave, Cplx lambda, const CriticalCurve& curve,
                                const MonodromyOptions& opts) {
    const MonodromyData mono = monodromy(wave, lambda, opts);
    const Coefficients co = make_coefficients(wave);
    const double t = wave.period;
    const int n = wave.n();
    const Cplx mult_c = std::exp(t * mono.nu_c);

    Eigen::ComplexEigenSolver<Matrix3cd> right(mono.matrix);
    if (right.info() != Eigen::Success)
        throw std::runtime_error("rank_one_factors: eigensolver failed on the period map");
    int ic = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(right.eigenvalues()[i] - mult_c) <
            std::abs(right.eigenvalues()[ic] - mult_c))
            ic = i;
    double separation = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        if (i != ic)
            separation = std::min(separation,
                                  std::abs(right.eigenvalues()[i] - right.eigenvalues()[ic]));
    if (separation < 1e-6) {
        const Cplx other = std::log(right.eigenvalues()[ic]) / t;
        throw std::runtime_error("rank_one_factors: exponent collision near nu = " +
                                 std::to_string(mono.nu_c.real()) + "+" +
                                 std::to_string(mono.nu_c.imag()) + "i with exponent " +
                                 std::to_string(other.real()) + "+" +
                                 std::to_string(other.imag()) + "i");
    }
    const Vector3cd w1 = right.eigenvectors().col(ic);

    Eigen::ComplexEigenSolver<Matrix3cd> left(mono.matrix.adjoint().eval());
    if (left.info() != Eigen::Success)
        throw std::runtime_error("rank_one_factors: eigensolver failed on the adjoint map");
    const Cplx mult_adj = std::conj(mult_c);
    int il = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(left.eigenvalues()[i] - mult_adj) <
            std::abs(left.eigenvalues()[il] - mult_adj))
            il = i;
    const Vector3cd w1t = left.eigenvectors().col(il);

    // Spectral projection of the period map onto the critical eigenvector.
    const Cplx pair_w = w1t.dot(w1);  // <w1t, w1>
    if (std::abs(pair_w) < 1e-12)
        throw std::runtime_error("rank_one_factors: left/right eigenvector pairing degenerate");
    const Matrix3cd projection = (w1 * w1t.adjoint()) / pair_w;

    // Periodic Floquet factors on the cell grid: v1 = e^{-nu z} U(z) w1 and
    // v2 = e^{+conj(nu) z} U(z)^{-*} w1t, the latter solving the adjoint ODE.
    // The adjoint transport runs from zeta = T downward; since U(T)* w1t =
    // conj(mu_c) w1t the anchored values agree with the zeta = 0 convention.
    std::vector<double> grid(n);
    for (int j = 0; j < n; ++j) grid[j] = t * j / n;
    const std::vector<Matrix3cd> u_path = evolve_samples(co, lambda, grid, false, opts);
    const std::vector<Matrix3cd> v_path = adjoint_samples_from_period(co, lambda, grid, opts);

    ComplexFieldPair psi_raw{ArrayXcd(n), ArrayXcd(n)};
    ComplexFieldPair adj_raw{ArrayXcd(n), ArrayXcd(n)};
    for (int j = 0; j < n; ++j) {
        const Vector3cd v1 = std::exp(-mono.nu_c * grid[j]) * (u_path[j] * w1);
        const Vector3cd v2 = std::exp(std::conj(mono.nu_c) * (grid[j] - t)) * (v_path[j] * w1t);
        psi_raw.u[j] = v1[0];
        psi_raw.v[j] = v1[2];
        adj_raw.u[j] = v2[1];
        adj_raw.v[j] = v2[2] / wave.speed;
    }

    // Normalization from the rank-one lemma: pair against the adjoint Bloch
    // eigenfunction at the Floquet exponent closest to -i nu_c. On the
    // critical curve this reproduces Psi = Phi_xi exactly.
    const double xi_eff = (-Cplx(0.0, 1.0) * mono.nu_c).real();
    std::size_t idx = 0;
    for (std::size_t i = 1; i < curve.xi_samples.size(); ++i)
        if (std::abs(curve.xi_samples[i] - xi_eff) < std::abs(curve.xi_samples[idx] - xi_eff))
            idx = i;
    const ComplexFieldPair phi_adj = resample_complex(curve.phi_adj[idx], t, n);
    const Cplx alpha = mean_inner(phi_adj, psi_raw);
    if (std::abs(alpha) < 1e-12)
        throw std::runtime_error("rank_one_factors: Bloch normalization pairing degenerate");

    RankOneFactors out;
    out.lambda = lambda;
    out.nu_c = mono.nu_c;
    out.psi = psi_raw;
    out.psi *= 1.0 / alpha;
    out.psi_adj = adj_raw;
    out.psi_adj *= std::conj(alpha / pair_w);
    out.projection = projection;
    out.separation = separation;
    return out;
}

Eigen::Matrix2cd rank_one_product(const WaveTrain& wave, const RankOneFactors& factors,
                                  double zeta, double zbar, const MonodromyOptions& opts) {
    validate_speed(wave);
    const Coefficients co = make_coefficients(wave);
    const Matrix3cd u_z = evolve_to(co, factors.lambda, zeta, false, opts);
    const Matrix3cd u_zb = evolve_to(co, factors.lambda, zbar, false, opts);
    Eigen::Matrix<Cplx, 2, 3> pi2;
    pi2 << 1, 0, 0, 0, 0, 1;
    Eigen::Matrix<Cplx, 3, 2> pi3;
    pi3 << 0, 0, 1, 0, 0, 1.0 / wave.speed;
    const Matrix3cd core =
        std::exp(-factors.nu_c * (zeta - zbar)) * (u_z * factors.projection * u_zb.inverse());
    return pi2 * core * pi3;
}

HFResolventTerms hf_resolvent_split(const WaveTrain& wave, double b, double varpi,
                                    const FieldPair& g) {
    const int n = wave.n();
    const int big_n = static_cast<int>(g.size());
    if (big_n % n != 0)
        throw std::invalid_argument(
            "hf_resolvent_split: g size must be a multiple of the cell grid");
    const int n_cells = big_n / n;
    const FhnParams& p = wave.params;
    if (b < -0.75 * p.epsilon * p.gamma - 1e-12)
        throw std::invalid_argument("hf_resolvent_split: b below -(3/4) eps gamma");
    const double l = n_cells * wave.period;
    const Cplx shift(b, varpi);

    // Symbol resolvents of the scalar operators d_zz and c0 d_z - eps gamma.
    const ArrayXcd g1 = dft(g.u), g2 = dft(g.v);
    ArrayXcd s1(big_n), s2(big_n);
    for (int q = 0; q < big_n; ++q) {
        const double k = kTwoPi * signed_mode(q, big_n) / l;
        const double k1 = (2 * q == big_n) ? 0.0 : k;  // first-order Nyquist convention
        s1[q] = 1.0 / (Cplx(0.0, varpi) + k * k);
        s2[q] = 1.0 / (shift + p.epsilon * p.gamma - Cplx(0.0, wave.speed * k1));
    }

    HFResolventTerms out;
    out.b = b;
    out.varpi = varpi;
    out.n_cells = n_cells;
    out.i1 = {idft(s1 * g1), idft(s2 * g2)};
    out.i2 = {idft(s1 * s2 * g2), -p.epsilon * idft(s2 * s1 * g1)};
    out.i3 = {ArrayXcd::Zero(big_n), -p.epsilon * idft(s2 * s1 * s2 * g2)};

    // Direct dense solve of (b + i varpi - L0) w = g on the multi-cell grid.
    MatrixXd d1 = MatrixXd::Zero(big_n, big_n), d2 = MatrixXd::Zero(big_n, big_n);
    for (int j = 0; j < big_n; ++j) {
        ArrayXd e = ArrayXd::Zero(big_n);
        e[j] = 1.0;
        d1.col(j) = spectral_derivative(e, l, 1).matrix();
        d2.col(j) = spectral_derivative(e, l, 2).matrix();
    }
    ArrayXd fprime_big(big_n);
    const ArrayXd fprime_cell =
        wave.profile.u.unaryExpr([&](double x) { return cubic_d1(x, p.mu); });
    for (int c = 0; c < n_cells; ++c) fprime_big.segment(c * n, n) = fprime_cell;

    MatrixXcd m = MatrixXcd::Zero(2 * big_n, 2 * big_n);
    m.block(0, 0, big_n, big_n) = (-d2 - wave.speed * d1).cast<Cplx>();
    m.block(0, 0, big_n, big_n).diagonal() += (shift - fprime_big.cast<Cplx>()).matrix();
    m.block(0, big_n, big_n, big_n).diagonal().setConstant(1.0);
    m.block(big_n, 0, big_n, big_n).diagonal().setConstant(-p.epsilon);
    m.block(big_n, big_n, big_n, big_n) = (-wave.speed * d1).cast<Cplx>();
    m.block(big_n, big_n, big_n, big_n).diagonal().array() +=
        shift + p.epsilon * p.gamma;

    VectorXcd rhs(2 * big_n);
    rhs.segment(0, big_n) = g.u.cast<Cplx>().matrix();
    rhs.segment(big_n, big_n) = g.v.cast<Cplx>().matrix();
    const Eigen::PartialPivLU<MatrixXcd> lu(m);
    const VectorXcd w = lu.solve(rhs);
    const double rel_res = (m * w - rhs).lpNorm<Eigen::Infinity>() /
                           std::max(rhs.lpNorm<Eigen::Infinity>(), 1e-300);
    if (rel_res > 1e-8)
        throw std::runtime_error(
            "hf_resolvent_split: direct resolvent solve ill-conditioned (relative residual " +
            std::to_string(rel_res) + "), lambda likely near the spectrum");
    out.direct = {w.segment(0, big_n).array(), w.segment(big_n, big_n).array()};

    out.i4 = out.direct;
    out.i4 -= out.i1;
    out.i4 -= out.i2;
    out.i4 -= out.i3;
    out.remainder_norm = sup_norm(out.i4);
    ComplexFieldPair sum = out.i1;
    sum += out.i2;
    sum += out.i3;
    sum += out.i4;
    sum -= out.direct;
    out.identity_gap = sup_norm(sum);
    return out;
}

RemainderSlope hf_remainder_slope(const WaveTrain& wave, double b, const FieldPair& g,
                                  double varpi0, int n_samples) {
    if (n_samples < 3) throw std::invalid_argument("hf_remainder_slope: need >= 3 samples");
    RemainderSlope out;
    out.samples.reserve(n_samples);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n_samples; ++i) {
        const double varpi = varpi0 * std::pow(100.0, static_cast<double>(i) / (n_samples - 1));
        const HFResolventTerms terms = hf_resolvent_split(wave, b, varpi, g);
        out.samples.push_back({varpi, terms.remainder_norm});
        const double x = std::log(varpi), y = std::log(terms.remainder_norm);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double nn = n_samples;
    out.slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    return out;
}

VarpiCalibration calibrate_varpi0(const WaveTrain& wave, double b, const FieldPair& g) {
    VarpiCalibration cal;
    double prev_varpi = 0.0;
    bool prev_ok = false;
    for (int j = 0; j <= 8; ++j) {
        const double varpi0 = (10.0 / wave.period) * std::pow(2.0, j);
        RemainderSlope s = hf_remainder_slope(wave, b, g, varpi0, 7);
        const bool ok = std::abs(s.slope + 1.5) <= 0.15;
        cal.history.push_back(std::move(s));
        if (ok && prev_ok) {
            cal.varpi0 = prev_varpi;
            cal.slope = cal.history[cal.history.size() - 2].slope;
            return cal;
        }
        prev_ok = ok;
        prev_varpi = varpi0;
    }
    throw std::runtime_error("calibrate_varpi0: remainder slope never settled near -3/2");
}

std::vector<BromwichRow> bromwich_convolution_check(Cplx a, Cplx b_coef, double t, double omega,
                                                    const std::vector<double>& r_list) {
    if (!(t > 0.0)) throw std::invalid_argument("bromwich_convolution_check: t must be positive");
    if (omega <= std::max(a.real(), b_coef.real()))
        throw std::invalid_argument(
            "bromwich_convolution_check: contour must lie right of both poles");
    if (r_list.empty())
        throw std::invalid_argument("bromwich_convolution_check: empty contour list");

    const Cplx reference = (std::abs(a - b_coef) < 1e-14)
                               ? t * std::exp(a * t)
                               : (std::exp(a * t) - std::exp(b_coef * t)) / (a - b_coef);

    // Vertical segment lambda = omega + i s; the 1/(2 pi i) and dlambda = i ds
    // combine to 1/(2 pi).
    const auto integrand = [&](double s) -> Cplx {
        const Cplx lam(omega, s);
        return std::exp(lam * t) / ((lam - a) * (lam - b_coef));
    };

    std::vector<BromwichRow> rows;
    rows.reserve(r_list.size());
    for (const double r : r_list) {
        if (!(r > 0.0))
            throw std::invalid_argument("bromwich_convolution_check: contour height <= 0");
        const Cplx integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            integrand, -r, r, 14, 1e-12);
        const Cplx value = integral / kTwoPi;
        rows.push_back({r, value, reference, std::abs(value - reference)});
    }
    return rows;
}

}  // namespace fhn
