#pragma once

// Matrix-level checks of the defining relations, the ladder identities, the
// Casimir element and norm positivity.

#include <string>
#include <vector>

#include "qosc/linalg.hpp"
#include "qosc/repbuild.hpp"
#include "qosc/report.hpp"

namespace qosc {

namespace detail {

/// For generic windows only columns e_1..e_{d-2} carry valid relations.
inline Matrix interior_columns(const Matrix& defect, const Rep& rep)
{
    if (!rep.window) return defect;
    return defect.middleCols(1, defect.cols() - 2);
}

} // namespace detail

/// [N+1]_q - [N]_q as a diagonal matrix.
inline Matrix bracket_step_matrix(const Rep& rep)
{
    const QParams& p = rep.params;
    return diag_apply(rep.Nmat, [&](cplx nu) { return bracket_step(nu, p); });
}

/// [N + shift]_q as a diagonal matrix.
inline Matrix qnum_matrix(const Rep& rep, double shift = 0.0)
{
    const QParams& p = rep.params;
    return diag_apply(rep.Nmat, [&](cplx nu) { return p.qnum(nu + shift); });
}

inline std::vector<CheckReport> check_defining_relations(const Rep& rep, double tol = kDefaultTol)
{
    const double na = max_abs(rep.A);
    const double nb = max_abs(rep.Abar);
    const double nn = max_abs(rep.Nmat);

    const Matrix d1 = commutator(rep.A, rep.Abar) - bracket_step_matrix(rep);
    const Matrix d2 = commutator(rep.Nmat, rep.Abar) - rep.Abar;
    const Matrix d3 = commutator(rep.Nmat, rep.A) + rep.A;

    return {
        CheckReport::make("relation.a_abar", relative_residual(detail::interior_columns(d1, rep), {na, nb}), tol),
        CheckReport::make("relation.N_abar", relative_residual(detail::interior_columns(d2, rep), {nn, nb}), tol),
        CheckReport::make("relation.N_a", relative_residual(detail::interior_columns(d3, rep), {nn, na}), tol),
    };
}

struct CasimirResult {
    Matrix c2;
    cplx scalar;
    std::vector<CheckReport> reports;
};

/// C2 = abar a - [N]_q. Reports agreement with the second form a abar - [N+1]_q,
/// scalarity, centrality, and (for truncated reps) the value -[nu0]_q.
inline CasimirResult casimir(const Rep& rep, double tol = kDefaultTol)
{
    const Matrix ab = rep.Abar * rep.A;
    const Matrix c2 = ab - qnum_matrix(rep);
    const Matrix second = rep.A * rep.Abar - qnum_matrix(rep, 1.0);
    const double na = max_abs(rep.A), nb = max_abs(rep.Abar), nn = max_abs(rep.Nmat);

    CasimirResult out;
    out.c2 = c2;
    const Eigen::Index off = rep.window ? 1 : 0;
    out.scalar = c2(off, off);

    Matrix scalar_defect = c2 - out.scalar * identity(c2.rows());
    const double cscale = std::max(1.0, std::abs(out.scalar));
    out.reports.push_back(CheckReport::make(
        "casimir.two_forms", relative_residual(detail::interior_columns(c2 - second, rep), {na, nb}), tol));
    out.reports.push_back(CheckReport::make(
        "casimir.scalar", max_abs(detail::interior_columns(scalar_defect, rep)) / cscale, tol));

    if (!rep.window) {
        const double central = std::max({relative_residual(commutator(c2, rep.A), {max_abs(c2), na}),
                                         relative_residual(commutator(c2, rep.Abar), {max_abs(c2), nb}),
                                         relative_residual(commutator(c2, rep.Nmat), {max_abs(c2), nn})});
        out.reports.push_back(CheckReport::make("casimir.central", central, tol));
        if (rep.lambda0 == cplx(0.0, 0.0)) {
            const cplx expect = -rep.params.qnum(rep.nu0);
            out.reports.push_back(CheckReport::make(
                "casimir.lowest_weight", std::abs(out.scalar - expect) / std::max(1.0, std::abs(expect)), tol));
        }
    }
    return out;
}

/// -(-1)^l cos(eps(k+1)/2) / sin(eps): the Casimir value of a truncated |q| = 1 rep.
inline double casimir_closed_form_unimodular(const QParams& p, int k)
{
    return -parity_sign(p.l) * std::cos(p.epsilon * (k + 1) / 2.0) / std::sin(p.epsilon);
}

/// Checks a abar^n - abar^n a = [n]_{q^1/2} G_n(N) abar^{n-1} and the mirror identity
/// for abar a^n, for 1 <= n <= n_max.
inline std::vector<CheckReport> check_ladder_identities(const Rep& rep, int n_max, double tol = kDefaultTol)
{
    if (n_max < 1 || n_max > rep.k + 1) throw Error("ladder identities need 1 <= n_max <= k+1");
    const QParams& p = rep.params;
    const cplx half_sum = p.pow(0.5) + p.pow(-0.5);
    const Eigen::Index d = rep.dim();
    const double na = max_abs(rep.A), nb = max_abs(rep.Abar);

    std::vector<CheckReport> out;
    Matrix abar_pow_prev = identity(d); // abar^{n-1}
    Matrix a_pow_prev = identity(d);
    for (int n = 1; n <= n_max; ++n) {
        const Matrix abar_pow = abar_pow_prev * rep.Abar;
        const Matrix a_pow = a_pow_prev * rep.A;
        const cplx bracket = p.qnum_half(n);

        const Matrix g = diag_apply(rep.Nmat, [&](cplx nu) {
            const cplx x = nu - n / 2.0 + 1.0;
            return (p.pow(x) + p.pow(-x)) / half_sum;
        });
        const Matrix h = diag_apply(rep.Nmat, [&](cplx nu) {
            const cplx x = nu + n / 2.0;
            return (p.pow(x) + p.pow(-x)) / half_sum;
        });

        const Matrix raise = rep.A * abar_pow - abar_pow * rep.A - bracket * g * abar_pow_prev;
        const Matrix lower = rep.Abar * a_pow - a_pow * rep.Abar + bracket * h * a_pow_prev;
        // Scale by the largest of the three operand products in each identity.
        const double raise_scale = std::max(na * max_abs(abar_pow),
                                            std::abs(bracket) * max_abs(g) * max_abs(abar_pow_prev));
        const double lower_scale = std::max(nb * max_abs(a_pow),
                                            std::abs(bracket) * max_abs(h) * max_abs(a_pow_prev));
        out.push_back(CheckReport::make("ladder.raise.n=" + std::to_string(n),
                                        relative_residual(raise, {raise_scale}), tol));
        out.push_back(CheckReport::make("ladder.lower.n=" + std::to_string(n),
                                        relative_residual(lower, {lower_scale}), tol));
        abar_pow_prev = abar_pow;
        a_pow_prev = a_pow;
    }
    return out;
}

struct NormProfile {
    std::vector<double> norms; // <psi_n|psi_n>, n = 0..k
    CheckReport positivity;
};

/// Squared norms of the unnormalized ladder states as partial products. The
/// positivity report has residual = -min(norms) and tolerance 0.
inline NormProfile norm_profile(const QParams& p, int k)
{
    if (k < 0) throw Error("k must be nonnegative");
    require_parity(p);
    const double t = parity_factor(p);
    NormProfile out;
    double running = 1.0;
    out.norms.push_back(running);
    for (int m = 1; m <= k; ++m) {
        running *= t * ladder_weight(p, k, m);
        out.norms.push_back(running);
    }
    double lowest = out.norms.front();
    for (double v : out.norms) lowest = std::min(lowest, v);
    out.positivity = CheckReport::make("norm.positivity", -lowest, 0.0);
    return out;
}

} // namespace qosc
