#pragma once

// Finite-dimensional representations of the q-oscillator algebra: the normalized
// truncated irreps in both real forms and the unnormalized generic ladder window.

#include <string>
#include <vector>

#include "qosc/linalg.hpp"
#include "qosc/qcore.hpp"

namespace qosc {

inline constexpr int kDefaultKCap = 64;

/// Matrix images of a, abar, N on the basis e_0..e_{d-1}. Abar raises, A lowers.
struct Rep {
    QParams params;
    int k = 0;
    Matrix A;
    Matrix Abar;
    Matrix Nmat;
    cplx nu0;
    cplx lambda0{0.0, 0.0};
    std::vector<cplx> lambdas; // lambda_1 .. lambda_k
    bool normalized = false;
    /// Generic ladder window: relations hold on interior basis vectors only.
    bool window = false;
    /// Every squared norm is strictly positive, so the normalized basis is orthonormal
    /// for a positive-definite inner product.
    bool definite = false;

    Eigen::Index dim() const { return A.rows(); }
};

/// Lowest N-eigenvalue for which the ladder truncates after k+1 states.
inline cplx nu0(const QParams& p, int k)
{
    if (k < 0) throw Error("k must be nonnegative");
    const double re = (-k - 1) / 2.0;
    return p.mode == Mode::Unimodular ? cplx(re + p.branch_shift(), 0.0)
                                      : cplx(re, p.branch_shift());
}

/// The sign-carrying prefactor of lambda_n: (-1)^l tan(eps/2) for |q| = 1,
/// (-1)^{l+1} tanh(eps/2) for real q. Positive exactly when the parity rule holds.
inline double parity_factor(const QParams& p)
{
    if (p.mode == Mode::Unimodular) return parity_sign(p.l) * std::tan(p.epsilon / 2.0);
    return parity_sign(p.l + 1) * std::tanh(p.epsilon / 2.0);
}

inline bool parity_ok(const QParams& p) { return parity_factor(p) > 0.0; }

inline void require_parity(const QParams& p)
{
    if (!parity_ok(p))
        throw ParityViolation("branch l=" + std::to_string(p.l) +
                              " gives non-positive norms for " + p.describe());
}

/// Smallest-|l| branch satisfying the parity rule; ties go to +1.
inline int choose_branch(Mode mode, double epsilon)
{
    if (std::abs(epsilon) < kGuardBand) throw DegenerateParameter("epsilon = 0 has no branch");
    if (mode == Mode::Unimodular) {
        if (near_multiple(epsilon, std::numbers::pi))
            throw DegenerateParameter("tan(eps/2) is zero or infinite at eps = p*pi");
        return std::tan(epsilon / 2.0) > 0.0 ? 0 : 1;
    }
    return epsilon > 0.0 ? 1 : 0;
}

/// [n]_{q^{1/2}} [k+1-n]_{q^{1/2}}, real in both modes.
inline double ladder_weight(const QParams& p, int k, int n)
{
    return (p.qnum_half(n) * p.qnum_half(k + 1 - n)).real();
}

/// lambda_1..lambda_k of the truncated ladder (a|psi_0> = 0).
inline std::vector<cplx> lambda_seq(const QParams& p, int k)
{
    if (k < 0) throw Error("k must be nonnegative");
    require_parity(p);
    const double t = parity_factor(p);
    const cplx unit = p.mode == Mode::Unimodular ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    std::vector<cplx> out;
    out.reserve(std::size_t(k));
    for (int n = 1; n <= k; ++n) out.push_back(unit * t * ladder_weight(p, k, n));
    return out;
}

/// lambda_n for arbitrary lowest eigenvalues (nu0, lambda0) of N and abar a.
inline cplx lambda_generic(cplx nu0_value, cplx lambda0, int n, const QParams& p)
{
    const cplx ratio = (p.pow(nu0_value + n / 2.0) + p.pow(-nu0_value - n / 2.0)) /
                       (p.pow(0.5) + p.pow(-0.5));
    return lambda0 + p.qnum_half(n) * ratio;
}

struct BuildOptions {
    int k_cap = kDefaultKCap;
    /// When false the parity rule is not enforced and square roots of negative
    /// prefactors come out imaginary (used for negative controls).
    bool enforce_parity = true;
};

/// Normalized (k+1)-dimensional representation.
inline Rep build_rep(const QParams& p, int k, const BuildOptions& opt = {})
{
    if (k < 0) throw Error("k must be nonnegative");
    if (k > opt.k_cap)
        throw DimensionTooLarge("k=" + std::to_string(k) + " exceeds cap " + std::to_string(opt.k_cap));
    if (opt.enforce_parity) require_parity(p);

    const Eigen::Index d = k + 1;
    const cplx root_t = std::sqrt(cplx(parity_factor(p), 0.0));
    const cplx lower_unit = p.mode == Mode::Unimodular ? cplx(1.0, 0.0) : cplx(0.0, 1.0);

    Rep rep;
    rep.params = p;
    rep.k = k;
    rep.normalized = true;
    rep.nu0 = nu0(p, k);
    rep.A = Matrix::Zero(d, d);
    rep.Abar = Matrix::Zero(d, d);
    rep.Nmat = Matrix::Zero(d, d);

    bool definite = parity_factor(p) > 0.0;
    for (int n = 0; n <= k; ++n) rep.Nmat(n, n) = rep.nu0 + double(n);
    for (int n = 1; n <= k; ++n) {
        const double w = ladder_weight(p, k, n);
        definite = definite && w > 0.0;
        const cplx entry = root_t * std::sqrt(cplx(w, 0.0));
        rep.Abar(n, n - 1) = entry;
        rep.A(n - 1, n) = lower_unit * entry;
        rep.lambdas.push_back(lower_unit * parity_factor(p) * w);
    }
    rep.definite = definite;
    return rep;
}

/// Unnormalized ladder on e_0..e_{span-1} with free (nu0, lambda0): abar e_n = e_{n+1},
/// a e_n = lambda_n e_{n-1}. No truncation is imposed.
inline Rep build_generic_window(cplx nu0_value, cplx lambda0, const QParams& p, int span)
{
    if (span < 3) throw Error("generic window needs span >= 3");
    const Eigen::Index d = span;
    Rep rep;
    rep.params = p;
    rep.k = span - 1;
    rep.nu0 = nu0_value;
    rep.lambda0 = lambda0;
    rep.window = true;
    rep.A = Matrix::Zero(d, d);
    rep.Abar = Matrix::Zero(d, d);
    rep.Nmat = Matrix::Zero(d, d);
    for (int n = 0; n < span; ++n) rep.Nmat(n, n) = nu0_value + double(n);
    for (int n = 1; n < span; ++n) {
        rep.Abar(n, n - 1) = 1.0;
        const cplx lam = lambda_generic(nu0_value, lambda0, n, p);
        rep.A(n - 1, n) = lam;
        rep.lambdas.push_back(lam);
    }
    return rep;
}

struct TruncationReport {
    cplx condition_value;
    bool admissible = false;
};

/// Evaluates the highest-state condition for a given lowest eigenvalue nu0.
/// |q| = 1: cos(eps(2 nu0 + k + 1)/2) sin(eps(k+1)/2).
/// q real:  cosh(eps(mu0 + k + 1)) - cosh(eps mu0), mu0 = Re nu0, relative to
/// cosh(eps mu0); the imaginary part of nu0 must also sit on the branch value.
inline TruncationReport truncation_condition(const QParams& p, int k, cplx nu0_value)
{
    if (k < 0) throw Error("k must be nonnegative");
    constexpr double tol = 1e-10;
    const double eps = p.epsilon;
    TruncationReport r;
    if (p.mode == Mode::Unimodular) {
        r.condition_value = std::cos(eps * (2.0 * nu0_value + double(k) + 1.0) / 2.0) *
                            std::sin(eps * (k + 1) / 2.0);
        r.admissible = std::abs(r.condition_value) < tol;
    } else {
        const double mu0 = nu0_value.real();
        const double base = std::cosh(eps * mu0);
        r.condition_value = std::cosh(eps * (mu0 + k + 1)) - base;
        r.admissible = std::abs(r.condition_value) / std::max(1.0, base) < tol &&
                       std::abs(nu0_value.imag() - p.branch_shift()) < tol;
    }
    return r;
}

inline TruncationReport truncation_admissible(const QParams& p, int k)
{
    return truncation_condition(p, k, nu0(p, k));
}

} // namespace qosc
