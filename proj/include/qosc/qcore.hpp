#pragma once

// Deformation parameters and q-number arithmetic.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "qosc/errors.hpp"

namespace qosc {

using cplx = std::complex<double>;

inline constexpr double kGuardBand = 1e-6;
inline constexpr double kDefaultTol = 1e-10;

enum class Mode { Unimodular, RealLine };

inline std::string_view to_string(Mode m)
{
    return m == Mode::Unimodular ? "unimodular" : "realline";
}

inline Mode parse_mode(std::string_view s)
{
    if (s == "unimodular") return Mode::Unimodular;
    if (s == "realline") return Mode::RealLine;
    throw Error("unknown mode '" + std::string(s) + "' (expected unimodular|realline)");
}

inline double parity_sign(int l) { return (l % 2 == 0) ? 1.0 : -1.0; }

/// (e^{xL} - e^{-xL}) / (e^{L} - e^{-L}) with the removable singularities at
/// sinh(L) = 0 filled in by their limits.
inline cplx qnumber_from_log(cplx x, cplx log_base)
{
    const cplx den = std::sinh(log_base);
    if (std::abs(den) < 1e-14) return x * std::cosh(x * log_base) / std::cosh(log_base);
    return std::sinh(x * log_base) / den;
}

/// Deformation parameters. q = exp(i*epsilon) or q = exp(epsilon); all powers of
/// q are taken as exp(x * log_q()) with log_q() = i*epsilon or epsilon.
struct QParams {
    Mode mode = Mode::Unimodular;
    double epsilon = 0.0;
    int l = 0;
    cplx q{1.0, 0.0};
    cplx sqrt_q{1.0, 0.0};
    cplx gamma{0.0, 0.0};

    cplx log_q() const
    {
        return mode == Mode::Unimodular ? cplx(0.0, epsilon) : cplx(epsilon, 0.0);
    }

    /// q^x
    cplx pow(cplx x) const { return std::exp(x * log_q()); }
    /// [x]_q
    cplx qnum(cplx x) const { return qnumber_from_log(x, log_q()); }
    /// [x]_{q^{1/2}}
    cplx qnum_half(cplx x) const { return qnumber_from_log(x, 0.5 * log_q()); }

    /// (2l+1) pi / (2 epsilon): the shift that appears in gamma, nu0 and the su(2) map.
    double branch_shift() const
    {
        return (2.0 * l + 1.0) * std::numbers::pi / (2.0 * epsilon);
    }

    std::string describe() const
    {
        std::ostringstream os;
        os.precision(17);
        os << to_string(mode) << " eps=" << epsilon << " l=" << l;
        return os.str();
    }

    friend bool operator==(const QParams& a, const QParams& b)
    {
        return a.mode == b.mode && a.epsilon == b.epsilon && a.l == b.l;
    }
};

/// True when epsilon sits inside the guard band of some multiple of `period`.
inline bool near_multiple(double epsilon, double period, double band = kGuardBand)
{
    const double p = std::round(epsilon / period);
    return std::abs(epsilon - p * period) < band;
}

inline QParams make_params(Mode mode, double epsilon, int l)
{
    if (!std::isfinite(epsilon)) throw DegenerateParameter("epsilon must be finite");
    if (std::abs(epsilon) < kGuardBand)
        throw DegenerateParameter("epsilon = 0 (q = 1) is excluded");
    if (mode == Mode::Unimodular && near_multiple(epsilon, std::numbers::pi))
        throw DegenerateParameter("epsilon is within the guard band of a multiple of pi (q = +-1)");

    QParams p;
    p.mode = mode;
    p.epsilon = epsilon;
    p.l = l;
    p.q = p.pow(1.0);
    p.sqrt_q = p.pow(0.5);
    if (mode == Mode::Unimodular)
        p.gamma = cplx(0.5 - p.branch_shift(), 0.0);
    else
        p.gamma = cplx(0.5, -p.branch_shift());
    return p;
}

/// [x]_q using principal complex powers.
inline cplx qnumber(cplx x, cplx q)
{
    constexpr double band = 1e-7;
    if (std::abs(q - 1.0) < band || std::abs(q + 1.0) < band)
        throw DegenerateParameter("q-number undefined at q = +-1");
    const cplx num = std::pow(q, x) - std::pow(q, -x);
    return num / (q - 1.0 / q);
}

/// [nu+1]_q - [nu]_q, the right-hand side of the a/abar commutator on an N-eigenvector.
inline cplx bracket_step(cplx nu, const QParams& p)
{
    return p.qnum(nu + 1.0) - p.qnum(nu);
}

/// (q^{nu+1/2} + q^{-nu-1/2}) / (q^{1/2} + q^{-1/2}); equal to bracket_step.
inline cplx bracket_step_symmetric(cplx nu, const QParams& p)
{
    return (p.pow(nu + 0.5) + p.pow(-nu - 0.5)) / (p.pow(0.5) + p.pow(-0.5));
}

} // namespace qosc
