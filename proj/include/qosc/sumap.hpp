#pragma once

// Linear map from the oscillator generators onto su_{q^{1/2}}(2) and the reference
// spin-j irreps it should land on.

#include <string>
#include <vector>

#include "qosc/algcheck.hpp"
#include "qosc/linalg.hpp"
#include "qosc/repbuild.hpp"
#include "qosc/report.hpp"

namespace qosc {

struct SuTriple {
    Matrix Jp;
    Matrix Jm;
    Matrix J0;
    cplx Q{1.0, 0.0};
    /// Branch of log Q used for non-integer powers.
    cplx log_Q{0.0, 0.0};
    double j = 0.0;
};

/// Which scalar prefactor the map uses.
enum class SuPrefactor {
    /// cot(eps/2) for |q| = 1, coth(eps/2) on both ladder operators for real q.
    Matched,
    /// Real q only: cot(eps/2) in the lowering-operator map, as it is sometimes printed.
    CircularLowering,
    /// tan in place of cot (tanh in place of coth); a negative control.
    Inverted,
};

struct SuMapOptions {
    SuPrefactor prefactor = SuPrefactor::Matched;
    /// Reject |q| = 1 parameters within the guard band of eps = p pi or (2p+1) pi/2.
    bool guard_singular = true;
};

inline bool su_map_singular(const QParams& p)
{
    if (p.mode != Mode::Unimodular) return false;
    const double pi = std::numbers::pi;
    return near_multiple(p.epsilon, pi) || near_multiple(p.epsilon - pi / 2.0, pi);
}

inline SuTriple to_su2(const Rep& rep, const SuMapOptions& opt = {})
{
    if (!rep.normalized || rep.window) throw Error("to_su2 needs a normalized truncated representation");
    const QParams& p = rep.params;
    if (opt.guard_singular && su_map_singular(p))
        throw DegenerateParameter("su(2) map is singular near eps = p pi and (2p+1) pi/2: " + p.describe());

    const double half = p.epsilon / 2.0;
    const Eigen::Index d = rep.dim();
    SuTriple t;
    t.Q = p.sqrt_q;
    t.log_Q = 0.5 * p.log_q();
    t.j = rep.k / 2.0;

    if (p.mode == Mode::Unimodular) {
        const double trig = opt.prefactor == SuPrefactor::Inverted ? std::tan(half) : 1.0 / std::tan(half);
        const cplx f = std::sqrt(cplx(parity_sign(p.l) * trig, 0.0));
        t.Jp = f * rep.Abar;
        t.Jm = f * rep.A;
        t.J0 = rep.Nmat + (0.5 - p.branch_shift()) * identity(d);
    } else {
        const double sign = parity_sign(p.l + 1);
        const double coth = 1.0 / std::tanh(half);
        const double raise = opt.prefactor == SuPrefactor::Inverted ? std::tanh(half) : coth;
        double lower = raise;
        if (opt.prefactor == SuPrefactor::CircularLowering) lower = 1.0 / std::tan(half);
        t.Jp = std::sqrt(cplx(sign * raise, 0.0)) * rep.Abar;
        t.Jm = cplx(0.0, -1.0) * std::sqrt(cplx(sign * lower, 0.0)) * rep.A;
        t.J0 = rep.Nmat + cplx(0.5, -p.branch_shift()) * identity(d);
    }
    return t;
}

/// Spin-j irrep of su_Q(2) on the basis |j,m>, m = -j..j (index n = j + m).
inline SuTriple su2_direct(double j, cplx Q, cplx log_Q)
{
    const double twoj_f = 2.0 * j;
    const long twoj = std::lround(twoj_f);
    if (twoj < 0 || std::abs(twoj_f - double(twoj)) > 1e-12) throw Error("2j must be a nonnegative integer");
    const Eigen::Index d = twoj + 1;
    auto br = [&](double x) { return qnumber_from_log(x, log_Q); };
    // Products of brackets are real for |Q| = 1 and real Q; dropping the round-off imaginary
    // part keeps sqrt of a negative product on the +i side of the cut.
    auto root = [](cplx z) {
        if (std::abs(z.imag()) <= 1e-14 * std::abs(z)) z = cplx(z.real(), 0.0);
        return std::sqrt(z);
    };

    SuTriple t;
    t.Q = Q;
    t.log_Q = log_Q;
    t.j = double(twoj) / 2.0;
    t.Jp = Matrix::Zero(d, d);
    t.Jm = Matrix::Zero(d, d);
    t.J0 = Matrix::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        const double m = double(n) - t.j;
        t.J0(n, n) = m;
        if (n + 1 < d) t.Jp(n + 1, n) = root(br(t.j - m) * br(t.j + m + 1.0));
        if (n > 0) t.Jm(n - 1, n) = root(br(t.j + m) * br(t.j - m + 1.0));
    }
    return t;
}

inline SuTriple su2_direct(double j, cplx Q) { return su2_direct(j, Q, std::log(Q)); }

inline std::vector<CheckReport> check_su2(const SuTriple& t, double tol = kDefaultTol)
{
    const Eigen::Index d = t.J0.rows();
    auto br = [&](cplx x) { return qnumber_from_log(x, t.log_Q); };
    const double np = max_abs(t.Jp), nm = max_abs(t.Jm), n0 = max_abs(t.J0);
    std::vector<CheckReport> out;

    if (!is_diagonal(t.J0)) {
        out.push_back(CheckReport::make("su2.J0_spectrum", max_abs(t.J0), tol, "J0 is not diagonal"));
        return out;
    }
    double spectrum = 0.0;
    for (Eigen::Index n = 0; n < d; ++n)
        spectrum = std::max(spectrum, std::abs(t.J0(n, n) - (double(n) - t.j)));
    out.push_back(CheckReport::make("su2.J0_spectrum", spectrum, tol));

    out.push_back(CheckReport::make("su2.J0_Jp", relative_residual(commutator(t.J0, t.Jp) - t.Jp, {n0, np}), tol));
    out.push_back(CheckReport::make("su2.J0_Jm", relative_residual(commutator(t.J0, t.Jm) + t.Jm, {n0, nm}), tol));
    const Matrix two_j0 = diag_apply(t.J0, [&](cplx m) { return br(2.0 * m); });
    out.push_back(CheckReport::make("su2.Jp_Jm", relative_residual(commutator(t.Jp, t.Jm) - two_j0, {np, nm}), tol));

    const Matrix cas = t.Jm * t.Jp + diag_apply(t.J0, [&](cplx m) { return br(m) * br(m + 1.0); });
    const cplx expect = br(t.j) * br(t.j + 1.0);
    const double scale = std::max(1.0, std::abs(expect));
    const double cas_res = max_abs(cas - expect * identity(d)) / scale;
    out.push_back(CheckReport::make("su2.casimir", cas_res, tol));
    return out;
}

/// Entrywise comparison of to_su2(rep) with the reference irrep of spin k/2.
inline CheckReport check_equivalence(const Rep& rep, double tol = kDefaultTol, const SuMapOptions& opt = {})
{
    const SuTriple mapped = to_su2(rep, opt);
    const SuTriple ref = su2_direct(mapped.j, mapped.Q, mapped.log_Q);
    auto diff = [](const Matrix& x, const Matrix& y) { return max_abs(x - y) / std::max(1.0, max_abs(y)); };
    const double res = std::max({diff(mapped.Jp, ref.Jp), diff(mapped.Jm, ref.Jm), diff(mapped.J0, ref.J0)});
    return CheckReport::make("su2.equivalence", res, tol);
}

} // namespace qosc
