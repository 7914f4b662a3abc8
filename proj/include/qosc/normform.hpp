#pragma once

// Normal-ordering rewriter for the exponentiated presentation of the algebra.
//
// Elements are sums c(s) abar^i a^j with c a Laurent polynomial in s = q^{N/2}.
// Rewrite rules:
//   a abar   -> abar a + delta(s),  delta(s) = [N+1]_q - [N]_q written in s
//   a c(s)   -> c(q^{1/2} s) a
//   abar c(s) -> c(q^{-1/2} s) abar

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qosc/linalg.hpp"
#include "qosc/repbuild.hpp"
#include "qosc/report.hpp"

namespace qosc {

class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(cplx c) { add(0, c); }
    LaurentPoly(double c) : LaurentPoly(cplx(c)) {}

    static LaurentPoly monomial(int exponent, cplx c = 1.0)
    {
        LaurentPoly p;
        p.add(exponent, c);
        return p;
    }

    const std::map<int, cplx>& coefficients() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    cplx coefficient(int e) const
    {
        auto it = coeffs_.find(e);
        return it == coeffs_.end() ? cplx(0.0) : it->second;
    }

    void add(int exponent, cplx c)
    {
        if (c == cplx(0.0)) return;
        auto [it, inserted] = coeffs_.try_emplace(exponent, c);
        if (!inserted) {
            it->second += c;
            if (it->second == cplx(0.0)) coeffs_.erase(it);
        }
    }

    /// c(s) -> c(lambda s) with lambda = exp(log_lambda).
    LaurentPoly rescaled(cplx log_lambda) const
    {
        LaurentPoly out;
        for (const auto& [e, c] : coeffs_) out.add(e, c * std::exp(double(e) * log_lambda));
        return out;
    }

    double max_abs() const
    {
        double m = 0.0;
        for (const auto& [e, c] : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    LaurentPoly& operator+=(const LaurentPoly& o)
    {
        for (const auto& [e, c] : o.coeffs_) add(e, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o)
    {
        for (const auto& [e, c] : o.coeffs_) add(e, -c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
    {
        LaurentPoly out;
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_) out.add(ea + eb, ca * cb);
        return out;
    }
    friend LaurentPoly operator*(cplx k, const LaurentPoly& a)
    {
        LaurentPoly out;
        for (const auto& [e, c] : a.coeffs_) out.add(e, k * c);
        return out;
    }

private:
    std::map<int, cplx> coeffs_;
};

/// Normal-ordered element: sum over (i, j) of coeff(s) abar^i a^j.
class NCPoly {
public:
    using Key = std::pair<int, int>; // (abar power, a power)

    explicit NCPoly(const QParams& p) : params_(p) {}

    static NCPoly zero(const QParams& p) { return NCPoly(p); }
    static NCPoly term(const QParams& p, LaurentPoly c, int abar_pow, int a_pow)
    {
        NCPoly out(p);
        out.add(abar_pow, a_pow, c);
        return out;
    }
    static NCPoly scalar(const QParams& p, LaurentPoly c) { return term(p, std::move(c), 0, 0); }
    static NCPoly gen_a(const QParams& p) { return term(p, 1.0, 0, 1); }
    static NCPoly gen_abar(const QParams& p) { return term(p, 1.0, 1, 0); }
    static NCPoly gen_s(const QParams& p) { return term(p, LaurentPoly::monomial(1), 0, 0); }

    const QParams& params() const { return params_; }
    const std::map<Key, LaurentPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(int abar_pow, int a_pow, const LaurentPoly& c)
    {
        if (abar_pow < 0 || a_pow < 0) throw Error("negative ladder power");
        if (c.is_zero()) return;
        auto& slot = terms_[{abar_pow, a_pow}];
        slot += c;
        if (slot.is_zero()) terms_.erase({abar_pow, a_pow});
    }

    /// Largest coefficient magnitude over all terms.
    double max_coeff() const
    {
        double m = 0.0;
        for (const auto& [k, c] : terms_) m = std::max(m, c.max_abs());
        return m;
    }

    /// Highest abar and a degrees present.
    std::pair<int, int> degree() const
    {
        int i = 0, j = 0;
        for (const auto& [k, c] : terms_) {
            i = std::max(i, k.first);
            j = std::max(j, k.second);
        }
        return {i, j};
    }

    NCPoly& operator+=(const NCPoly& o)
    {
        require_same(o);
        for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
        return *this;
    }
    NCPoly& operator-=(const NCPoly& o)
    {
        require_same(o);
        for (const auto& [k, c] : o.terms_) add(k.first, k.second, cplx(-1.0) * c);
        return *this;
    }
    friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
    friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
    friend NCPoly operator*(cplx k, const NCPoly& a)
    {
        NCPoly out(a.params_);
        for (const auto& [key, c] : a.terms_) out.add(key.first, key.second, k * c);
        return out;
    }

    void require_same(const NCPoly& o) const
    {
        if (!(params_ == o.params_)) throw ParamMismatch("symbolic elements built from different parameters");
    }

private:
    QParams params_;
    std::map<Key, LaurentPoly> terms_;
};

/// [N + shift]_q as a Laurent polynomial in s.
inline LaurentPoly qnum_poly(const QParams& p, double shift)
{
    const cplx den = p.q - 1.0 / p.q;
    LaurentPoly out;
    out.add(2, p.pow(shift) / den);
    out.add(-2, -p.pow(-shift) / den);
    return out;
}

/// delta(s) = [N+1]_q - [N]_q.
inline LaurentPoly delta_poly(const QParams& p) { return qnum_poly(p, 1.0) - qnum_poly(p, 0.0); }

/// Product engine. Holds a cache of normal forms of a abar^i; one instance per parameter set.
class NormalOrderer {
public:
    explicit NormalOrderer(const QParams& p, cplx delta_tamper = 0.0)
        : params_(p), delta_(delta_poly(p) + LaurentPoly(delta_tamper))
    {
    }

    const QParams& params() const { return params_; }

    /// abar * x
    NCPoly left_mul_abar(const NCPoly& x) const
    {
        NCPoly out(params_);
        const cplx shift = -0.5 * params_.log_q(); // s -> q^{-1/2} s
        for (const auto& [k, c] : x.terms()) out.add(k.first + 1, k.second, c.rescaled(shift));
        return out;
    }

    /// a * x
    NCPoly left_mul_a(const NCPoly& x) const
    {
        NCPoly out(params_);
        const cplx shift = 0.5 * params_.log_q(); // s -> q^{1/2} s
        for (const auto& [k, c] : x.terms()) {
            const LaurentPoly moved = c.rescaled(shift);
            for (const auto& [mk, mc] : a_times_abar_pow(k.first).terms())
                out.add(mk.first, mk.second + k.second, moved * mc);
        }
        return out;
    }

    NCPoly product(const NCPoly& p, const NCPoly& r) const
    {
        p.require_same(r);
        if (!(p.params() == params_)) throw ParamMismatch("orderer built for different parameters");
        NCPoly out(params_);
        for (const auto& [k, c] : p.terms()) {
            NCPoly y = r;
            for (int n = 0; n < k.second; ++n) y = left_mul_a(y);
            for (int n = 0; n < k.first; ++n) y = left_mul_abar(y);
            NCPoly scaled(params_);
            for (const auto& [yk, yc] : y.terms()) scaled.add(yk.first, yk.second, c * yc);
            out += scaled;
        }
        return out;
    }

    NCPoly commutator(const NCPoly& x, const NCPoly& y) const { return product(x, y) - product(y, x); }

private:
    /// Normal form of a abar^i = abar (a abar^{i-1}) + delta(s) abar^{i-1}.
    const NCPoly& a_times_abar_pow(int i) const
    {
        while (int(cache_.size()) <= i) {
            const int m = int(cache_.size());
            if (m == 0) {
                cache_.push_back(NCPoly::gen_a(params_));
            } else {
                NCPoly next = left_mul_abar(cache_[std::size_t(m - 1)]);
                next.add(m - 1, 0, delta_);
                cache_.push_back(std::move(next));
            }
        }
        return cache_[std::size_t(i)];
    }

    QParams params_;
    LaurentPoly delta_;
    mutable std::vector<NCPoly> cache_;
};

inline NCPoly nf_product(const NCPoly& p, const NCPoly& r, const QParams& params)
{
    return NormalOrderer(params).product(p, r);
}

/// abar^n as a single normal-ordered term.
inline NCPoly abar_pow(const QParams& p, int n) { return NCPoly::term(p, 1.0, n, 0); }
inline NCPoly a_pow(const QParams& p, int n) { return NCPoly::term(p, 1.0, 0, n); }

/// C2 = abar a - [N]_q.
inline NCPoly casimir_element(const QParams& p)
{
    NCPoly c = NCPoly::term(p, 1.0, 1, 1);
    c.add(0, 0, cplx(-1.0) * qnum_poly(p, 0.0));
    return c;
}

/// Defect of a abar^n - abar^n a - [n]_{q^1/2} (q^{N-n/2+1} + q^{-(N-n/2+1)})/(q^1/2 + q^-1/2) abar^{n-1}.
inline NCPoly raise_identity_defect(const NormalOrderer& ord, int n)
{
    const QParams& p = ord.params();
    const NCPoly a = NCPoly::gen_a(p);
    const NCPoly an = abar_pow(p, n);
    const cplx factor = p.qnum_half(n) / (p.pow(0.5) + p.pow(-0.5));
    LaurentPoly g;
    g.add(2, factor * p.pow(1.0 - n / 2.0));
    g.add(-2, factor * p.pow(n / 2.0 - 1.0));
    NCPoly d = ord.product(a, an) - ord.product(an, a);
    d -= NCPoly::term(p, g, n - 1, 0);
    return d;
}

/// Defect of abar a^n - a^n abar + [n]_{q^1/2} (q^{N+n/2} + q^{-(N+n/2)})/(q^1/2 + q^-1/2) a^{n-1}.
inline NCPoly lower_identity_defect(const NormalOrderer& ord, int n)
{
    const QParams& p = ord.params();
    const NCPoly b = NCPoly::gen_abar(p);
    const NCPoly an = a_pow(p, n);
    const cplx factor = p.qnum_half(n) / (p.pow(0.5) + p.pow(-0.5));
    LaurentPoly h;
    h.add(2, factor * p.pow(n / 2.0));
    h.add(-2, factor * p.pow(-n / 2.0));
    NCPoly d = ord.product(b, an) - ord.product(an, b);
    d += NCPoly::term(p, h, 0, n - 1);
    return d;
}

inline constexpr double kSymbolicTol = 1e-12;

/// Symbolic check of both ladder identities for 1 <= n <= n_max, plus centrality of C2
/// against a, abar and s. `delta_tamper` perturbs the rewrite rule (negative control).
inline std::vector<CheckReport> check_identities_symbolic(const QParams& p, int n_max,
                                                          double tol = kSymbolicTol,
                                                          cplx delta_tamper = 0.0)
{
    if (n_max < 1) throw Error("n_max must be at least 1");
    const NormalOrderer ord(p, delta_tamper);
    std::vector<CheckReport> out;
    // Residuals are relative to the largest coefficient of a abar^n (resp. a^n abar), which
    // grows like q^{n/2} for real q.
    for (int n = 1; n <= n_max; ++n) {
        const double raise_scale =
            std::max(1.0, ord.product(NCPoly::gen_a(p), abar_pow(p, n)).max_coeff());
        const double lower_scale =
            std::max(1.0, ord.product(a_pow(p, n), NCPoly::gen_abar(p)).max_coeff());
        out.push_back(CheckReport::make("symbolic.raise.n=" + std::to_string(n),
                                        raise_identity_defect(ord, n).max_coeff() / raise_scale, tol));
        out.push_back(CheckReport::make("symbolic.lower.n=" + std::to_string(n),
                                        lower_identity_defect(ord, n).max_coeff() / lower_scale, tol));
    }
    const NCPoly c2 = casimir_element(p);
    const std::pair<const char*, NCPoly> gens[] = {
        {"symbolic.central.a", NCPoly::gen_a(p)},
        {"symbolic.central.abar", NCPoly::gen_abar(p)},
        {"symbolic.central.s", NCPoly::gen_s(p)},
    };
    for (const auto& [name, g] : gens)
        out.push_back(CheckReport::make(name, ord.commutator(c2, g).max_coeff(), tol));
    return out;
}

/// Substitutes the representation: s -> diag(q^{nu/2}), abar^i a^j -> Abar^i A^j.
inline Matrix evaluate(const NCPoly& poly, const Rep& rep)
{
    if (!(poly.params() == rep.params)) throw ParamMismatch("element and representation use different parameters");
    const Eigen::Index d = rep.dim();
    const cplx half_log = 0.5 * rep.params.log_q();
    Matrix out = Matrix::Zero(d, d);

    std::vector<Matrix> abar_pows{identity(d)};
    std::vector<Matrix> a_pows{identity(d)};
    for (const auto& [key, coeff] : poly.terms()) {
        while (int(abar_pows.size()) <= key.first) abar_pows.push_back(abar_pows.back() * rep.Abar);
        while (int(a_pows.size()) <= key.second) a_pows.push_back(a_pows.back() * rep.A);
        Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(d);
        for (Eigen::Index n = 0; n < d; ++n)
            for (const auto& [e, c] : coeff.coefficients())
                diag(n) += c * std::exp(double(e) * half_log * rep.Nmat(n, n));
        out += diag.asDiagonal() * (abar_pows[std::size_t(key.first)] * a_pows[std::size_t(key.second)]);
    }
    return out;
}

inline std::string to_string(const LaurentPoly& c)
{
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (const auto& [e, v] : c.coefficients()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i)";
        if (e != 0) os << "*s^" << e;
    }
    if (first) os << "0";
    return os.str();
}

/// Text rendering, one term per line: [coefficient] abar^i a^j.
inline std::string to_string(const NCPoly& p)
{
    if (p.is_zero()) return "0\n";
    std::ostringstream os;
    for (const auto& [k, c] : p.terms()) {
        os << "[" << to_string(c) << "]";
        if (k.first) os << " abar^" << k.first;
        if (k.second) os << " a^" << k.second;
        os << "\n";
    }
    return os.str();
}

} // namespace qosc
