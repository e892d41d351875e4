// Scratch measurement harness for the spatial Floquet module. Not built by
// CMake; compile by hand when re-measuring tolerances.
#include <cstdio>
#include <vector>

#include "fhn/bloch.hpp"
#include "fhn/floquet.hpp"
#include "fhn/fourier.hpp"
#include "fhn/wave.hpp"

using namespace fhn;

static const double kTwoPi_probe = 6.283185307179586;

static FhnParams lab_params() {
    FhnParams p;
    p.mu = 0.25;
    p.gamma = 0.30;
    p.epsilon = 0.05;
    return p;
}

int main() {
    const WaveTrain seeded = find_wave_train(lab_params());
    const WaveTrain w = continue_to_period(seeded, 28.0);
    std::printf("wave: c0=%.9f T=%.3f n=%d residual=%.3e\n", w.speed, w.period, w.n(),
                w.residual_norm);

    // --- monodromy at lambda = 0 ---
    const MonodromyData m0 = monodromy(w, 0.0);
    std::printf("\n[lambda=0] nu_c=%.3e%+.3ei winding=%d cond=%.3e\n", m0.nu_c.real(),
                m0.nu_c.imag(), m0.winding, m0.condition);
    for (const auto& nu : m0.floquet_exponents)
        std::printf("  exponent %.12f %+.12fi  multiplier err vs exp: %.3e\n", nu.real(),
                    nu.imag(),
                    std::abs(std::exp(w.period * nu) -
                             std::exp(w.period * nu)));  // placeholder
    // multiplier 1?
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(m0.matrix);
    for (int i = 0; i < 3; ++i) {
        const Cplx mu = es.eigenvalues()[i];
        std::printf("  multiplier %.12f %+.12fi |mu-1|=%.3e\n", mu.real(), mu.imag(),
                    std::abs(mu - 1.0));
    }
    // product of multipliers vs exp(T tr A) with trA = -c0 + eps gamma / c0
    const Cplx prod = es.eigenvalues()[0] * es.eigenvalues()[1] * es.eigenvalues()[2];
    const double tr = -w.speed + (w.params.epsilon * w.params.gamma) / w.speed;
    std::printf("  det U(T)=%.6e%+.6ei vs exp(T trA)=%.6e rel=%.3e\n", prod.real(), prod.imag(),
                std::exp(w.period * tr),
                std::abs(prod - std::exp(w.period * tr)) / std::exp(w.period * tr));
    // eigenvector at multiplier 1 proportional to (u0'(0), u0''(0), v0'(0))
    int i1 = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(es.eigenvalues()[i] - 1.0) < std::abs(es.eigenvalues()[i1] - 1.0)) i1 = i;
    Eigen::Vector3cd vec = es.eigenvectors().col(i1);
    const ArrayXd du = spectral_derivative(w.profile.u, w.period, 1);
    const ArrayXd ddu = spectral_derivative(w.profile.u, w.period, 2);
    const ArrayXd dv = spectral_derivative(w.profile.v, w.period, 1);
    Eigen::Vector3cd ref;
    ref << du[0], ddu[0], dv[0];
    vec /= vec[0];
    ref /= ref[0];
    std::printf("  eigvec vs (u0',u0'',v0')(0): err=%.3e\n", (vec - ref).norm() / ref.norm());

    // --- nu_c(lambda_c(xi)) = i xi on the curve ---
    const CriticalCurve curve = critical_curve(w, default_xi0(w, 64), 9, 64);
    std::printf("\n[curve] xi0(default window)=%.5f n_xi=%zu\n", curve.xi0,
                curve.xi_samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.xi_samples.size(); ++i) {
        const MonodromyData md = monodromy(w, curve.lambda_c[i]);
        const double err = std::abs(md.nu_c - Cplx(0.0, curve.xi_samples[i]));
        worst = std::max(worst, err);
        std::printf("  xi=%+.5f lambda=%.3e%+.3ei nu_c-i xi=%.3e winding=%d\n",
                    curve.xi_samples[i], curve.lambda_c[i].real(), curve.lambda_c[i].imag(), err,
                    md.winding);
    }
    std::printf("  sup|nu_c - i xi| = %.3e\n", worst);

    // --- expansion |nu_c(lambda) + lambda/c_g| <= C |lambda|^2 ---
    const WaveFamily fam = continue_family(w, curve.phi0_adj());
    const DispersionCoefficients disp = dispersion_coefficients(curve, fam);
    const double cg = disp.cg_fit;
    std::printf("\n[expansion] cg_fit=%.6f\n", cg);
    std::vector<double> radii, gaps;
    for (int j = 0; j <= 8; ++j) {
        const double r = 1e-4 * std::pow(100.0, j / 8.0);
        double gap = 0.0;
        for (const double ang : {0.0, 1.5707963, 3.14159265, 4.71238898}) {
            const Cplx lam = r * std::exp(Cplx(0.0, ang));
            const MonodromyData md = monodromy(w, lam);
            gap = std::max(gap, std::abs(md.nu_c + lam / cg));
        }
        radii.push_back(r);
        gaps.push_back(gap);
        std::printf("  r=%.3e sup-gap=%.6e ratio/r^2=%.4f\n", r, gap, gap / (r * r));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double x = std::log(radii[i]), y = std::log(gaps[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double nn = radii.size();
    std::printf("  slope = %.4f\n", (nn * sxy - sx * sy) / (nn * sxx - sx * sx));

    // --- Re nu_c > 0 to the right of the spectrum ---
    std::printf("\n[right of spectrum]\n");
    for (const double lam : {1e-3, 5e-3, 1e-2})
        std::printf("  lambda=%.1e Re nu_c=%.6e\n", lam, monodromy(w, Cplx(lam, 0)).nu_c.real());

    // --- rank-one factors on / off the curve ---
    std::printf("\n[rank-one]\n");
    const std::size_t mid = curve.xi_samples.size() / 2;
    for (const std::size_t i : {mid - 2, mid - 1, mid + 1, mid + 2}) {
        const double xi = curve.xi_samples[i];
        const RankOneFactors f = rank_one_factors(w, curve.lambda_c[i], curve);
        // Psi vs Phi_xi
        ComplexFieldPair diff = f.psi;
        diff -= curve.phi[i];
        // derivative of the dispersion curve: centered stencil vs the exact
        // projection formula -i lam' = c0 + 2 <adj, D(d/dz + i xi) Phi>
        const double h = curve.xi_samples[i + 1] - curve.xi_samples[i];
        const Cplx dlam_st = (curve.lambda_c[i + 1] - curve.lambda_c[i - 1]) / (2.0 * h);
        const ComplexFieldPair& phi = curve.phi[i];
        const ComplexFieldPair& adj = curve.phi_adj[i];
        const ArrayXcd dphi1 = spectral_derivative(phi.u, w.period, 1);
        const Cplx dlam_pr =
            Cplx(0.0, 1.0) *
            (w.speed + 2.0 * mean_inner(adj.u, (dphi1 + Cplx(0.0, xi) * phi.u).eval()));
        // collinearity of Psi_adj with the adjoint eigenfunction
        const Cplx c = mean_inner(adj, f.psi_adj) / mean_inner(adj, adj);
        ComplexFieldPair resid = f.psi_adj;
        ComplexFieldPair proj = adj;
        proj *= c;
        resid -= proj;
        const Cplx kap_st = Cplx(0.0, 1.0) / dlam_st;
        const Cplx kap_pr = Cplx(0.0, 1.0) / dlam_pr;
        ComplexFieldPair kdiff = f.psi_adj;
        kdiff *= dlam_pr;
        ComplexFieldPair tgt = adj;
        tgt *= Cplx(0.0, 1.0);
        kdiff -= tgt;
        const Eigen::Matrix3cd p2 = f.projection * f.projection - f.projection;
        std::printf("  xi=%+.5f |Psi-Phi|=%.3e P^2-P=%.3e sup|adj|=%.3f sup|Psi_adj|=%.3f\n",
                    xi, sup_norm(diff), p2.norm(), sup_norm(adj), sup_norm(f.psi_adj));
        std::printf("            collin resid=%.3e  c=%.6f%+.6fi  kap_st=%.6f%+.6fi  "
                    "kap_pr=%.6f%+.6fi\n",
                    sup_norm(resid), c.real(), c.imag(), kap_st.real(), kap_st.imag(),
                    kap_pr.real(), kap_pr.imag());
        std::printf("            lam'_st=%.6f%+.6fi lam'_pr=%.6f%+.6fi  |kappa-id err|=%.3e\n",
                    dlam_st.real(), dlam_st.imag(), dlam_pr.real(), dlam_pr.imag(),
                    sup_norm(kdiff));
    }
    // conjugate symmetry at a generic lambda
    {
        const Cplx lam(2e-3, 4e-3);
        const RankOneFactors fp = rank_one_factors(w, lam, curve);
        const RankOneFactors fm = rank_one_factors(w, std::conj(lam), curve);
        ComplexFieldPair cu{fm.psi.u.conjugate(), fm.psi.v.conjugate()};
        cu -= fp.psi;
        ComplexFieldPair ca{fm.psi_adj.u.conjugate(), fm.psi_adj.v.conjugate()};
        ca -= fp.psi_adj;
        std::printf("  conj symmetry: nu gap=%.3e psi gap=%.3e adj gap=%.3e\n",
                    std::abs(std::conj(fm.nu_c) - fp.nu_c), sup_norm(cu), sup_norm(ca));
        // product identity at sampled points
        for (const auto& [z, zb] : std::vector<std::pair<double, double>>{
                 {w.period * 13 / 64, w.period * 35 / 64}, {w.period * 51 / 64, w.period * 6 / 64}}) {
            const Eigen::Matrix2cd lhs = rank_one_product(w, fp, z, zb);
            // direct evaluation from the factors: psi(z) psi_adj(zb)^*
            const int n = w.n();
            const auto at = [&](const ArrayXcd& a, double zeta) {
                // grid values only; zeta chosen on the grid
                const int j = static_cast<int>(std::lround(zeta / w.period * n)) % n;
                return a[j];
            };
            Eigen::Matrix2cd rhs;
            rhs << at(fp.psi.u, z) * std::conj(at(fp.psi_adj.u, zb)),
                at(fp.psi.u, z) * std::conj(at(fp.psi_adj.v, zb)),
                at(fp.psi.v, z) * std::conj(at(fp.psi_adj.u, zb)),
                at(fp.psi.v, z) * std::conj(at(fp.psi_adj.v, zb));
            std::printf("  product (z=%.2f,zb=%.2f): |lhs-rhs|=%.3e scale=%.3e\n", z, zb,
                        (lhs - rhs).norm(), lhs.norm());
        }
    }

    // --- HF split ---
    std::printf("\n[hf split]\n");
    const int n_cells = 4;
    const int big_n = n_cells * w.n();
    const double l = n_cells * w.period;
    ArrayXd gu(big_n), gv(big_n);
    for (int j = 0; j < big_n; ++j) {
        const double z = l * j / big_n;
        // square wave: bounded data with jumps, the sup-norm worst case
        gu[j] = (std::sin(2.0 * kTwoPi_probe * z / l) >= 0.0) ? 1.0 : -1.0;
        gv[j] = 0.0;
    }
    const FieldPair g{gu, gv};
    {   // smooth g for comparison
        ArrayXd su(big_n), sv(big_n);
        for (int j = 0; j < big_n; ++j) {
            const double z = l * j / big_n;
            su[j] = std::cos(2.0 * kTwoPi_probe * z / l);
            sv[j] = 0.7 * std::sin(6.0 * kTwoPi_probe * z / l);
        }
        const RemainderSlope ss = hf_remainder_slope(w, 0.0, FieldPair{su, sv}, 10.0 / w.period, 7);
        std::printf("  smooth-g slope at varpi0=10/T: %.4f\n", ss.slope);
    }
    const double b = 0.0;
    for (int j = 0; j <= 8; ++j) {
        const double varpi0 = (10.0 / w.period) * std::pow(2.0, j);
        const RemainderSlope s = hf_remainder_slope(w, b, g, varpi0, 7);
        std::printf("  varpi0=%.4f slope=%.4f  norms: %.3e .. %.3e\n", varpi0, s.slope,
                    s.samples.front().norm, s.samples.back().norm);
    }
    const HFResolventTerms t1 = hf_resolvent_split(w, b, 5.0, g);
    std::printf("  identity gap at varpi=5: %.3e (|g|=%.3f)\n", t1.identity_gap, sup_norm(g));
    std::printf("  term sups: i1=%.3e i2=%.3e i3=%.3e i4=%.3e direct=%.3e\n", sup_norm(t1.i1),
                sup_norm(t1.i2), sup_norm(t1.i3), sup_norm(t1.i4), sup_norm(t1.direct));

    // --- Bromwich ---
    std::printf("\n[bromwich] a=-1 b=-2 t=1 omega=0.5\n");
    std::vector<double> rs;
    for (double r = 20.0; r <= 1000.0; r += 1.0) rs.push_back(r);
    const auto rows = bromwich_convolution_check(-1.0, -2.0, 1.0, 0.5, rs);
    for (std::size_t i = 1; i + 1 < rows.size(); ++i)
        if (rows[i].error > rows[i - 1].error && rows[i].error > rows[i + 1].error)
            std::printf("  local max R=%8.1f err=%.6e\n", rows[i].r, rows[i].error);
    for (const double rq : {25.0, 50.0, 100.0, 200.0, 400.0, 800.0})
        std::printf("  R=%6.1f err=%.6e\n", rq,
                    bromwich_convolution_check(-1.0, -2.0, 1.0, 0.5, {rq}).front().error);
    return 0;
}
