#pragma once

// Coproduct, counit and antipode realized on tensor products of a representation,
// plus involutions and their Hopf *-compatibility checks.

#include <array>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "qosc/algcheck.hpp"
#include "qosc/linalg.hpp"
#include "qosc/repbuild.hpp"
#include "qosc/report.hpp"

namespace qosc {

enum class Gen { a, abar, N };

inline constexpr std::array<Gen, 3> kGenerators{Gen::a, Gen::abar, Gen::N};

inline std::string_view to_string(Gen g)
{
    switch (g) {
    case Gen::a: return "a";
    case Gen::abar: return "abar";
    case Gen::N: return "N";
    }
    return "?";
}

/// A tensor factor, tagged so the Hopf maps can act on it by type.
/// QPow stands for the group-like element q^{power (N + gamma)}.
struct Factor {
    enum class Kind { A, Abar, N, Identity, QPow };
    Kind kind = Kind::Identity;
    double power = 0.0;

    static Factor of(Gen g)
    {
        switch (g) {
        case Gen::a: return {Kind::A};
        case Gen::abar: return {Kind::Abar};
        case Gen::N: return {Kind::N};
        }
        return {};
    }
    static Factor qpow(double c) { return {Kind::QPow, c}; }
    static Factor unit() { return {Kind::Identity}; }
};

/// q^{c(x + gamma)} for a scalar x.
inline cplx qpow_value(const QParams& p, double c, cplx x) { return p.pow(c * (x + p.gamma)); }

inline Matrix realize_factor(const Rep& rep, const Factor& f)
{
    switch (f.kind) {
    case Factor::Kind::A: return rep.A;
    case Factor::Kind::Abar: return rep.Abar;
    case Factor::Kind::N: return rep.Nmat;
    case Factor::Kind::Identity: return identity(rep.dim());
    case Factor::Kind::QPow:
        return diag_apply(rep.Nmat, [&](cplx nu) { return qpow_value(rep.params, f.power, nu); });
    }
    return {};
}

inline Matrix realize_generator(const Rep& rep, Gen g) { return realize_factor(rep, Factor::of(g)); }

/// Finite sum of coeff * (left (x) right). The Kronecker realization is computed once
/// on first request and shared between copies.
class TensorSum {
public:
    struct Term {
        cplx coeff;
        Factor left_tag;
        Factor right_tag;
        Matrix left;
        Matrix right;
    };

    TensorSum() = default;
    explicit TensorSum(std::vector<Term> terms) : terms_(std::move(terms)) {}

    const std::vector<Term>& terms() const { return terms_; }

    const Matrix& realized() const
    {
        std::call_once(cache_->once, [this] {
            if (terms_.empty()) return;
            const auto& t0 = terms_.front();
            Matrix acc = Matrix::Zero(t0.left.rows() * t0.right.rows(), t0.left.cols() * t0.right.cols());
            for (const auto& t : terms_) acc += t.coeff * kron(t.left, t.right);
            cache_->value = std::move(acc);
        });
        return cache_->value;
    }

    /// The opposite coproduct: every term with its two slots exchanged.
    TensorSum swapped() const
    {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) out.push_back({t.coeff, t.right_tag, t.left_tag, t.right, t.left});
        return TensorSum(std::move(out));
    }

private:
    struct Cache {
        std::once_flag once;
        Matrix value;
    };
    std::vector<Term> terms_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline TensorSum::Term make_term(const Rep& rep, cplx c, Factor l, Factor r)
{
    return {c, l, r, realize_factor(rep, l), realize_factor(rep, r)};
}

/// Delta(a) = a (x) Q + Q^{-1} (x) a with Q = q^{(N+gamma)/2}; same shape for abar;
/// Delta(N) = N (x) 1 + 1 (x) N + gamma 1 (x) 1.
inline TensorSum coproduct(const Rep& rep, Gen g)
{
    if (g == Gen::N) {
        return TensorSum({make_term(rep, 1.0, Factor::of(Gen::N), Factor::unit()),
                          make_term(rep, 1.0, Factor::unit(), Factor::of(Gen::N)),
                          make_term(rep, rep.params.gamma, Factor::unit(), Factor::unit())});
    }
    return TensorSum({make_term(rep, 1.0, Factor::of(g), Factor::qpow(0.5)),
                      make_term(rep, 1.0, Factor::qpow(-0.5), Factor::of(g))});
}

/// Delta applied to one tagged factor, realized on C^d (x) C^d. Group-like factors
/// are exponentiated from the realized Delta(N) rather than assumed to split.
inline Matrix realize_coproduct_of(const Rep& rep, const Factor& f)
{
    switch (f.kind) {
    case Factor::Kind::A: return coproduct(rep, Gen::a).realized();
    case Factor::Kind::Abar: return coproduct(rep, Gen::abar).realized();
    case Factor::Kind::N: return coproduct(rep, Gen::N).realized();
    case Factor::Kind::Identity: return identity(rep.dim() * rep.dim());
    case Factor::Kind::QPow: {
        const Matrix dn = coproduct(rep, Gen::N).realized();
        return diag_apply(dn, [&](cplx x) { return qpow_value(rep.params, f.power, x); });
    }
    }
    return {};
}

/// Counit on a tagged factor: eps(a) = eps(abar) = 0, eps(N) = -gamma, eps(q^{c(N+gamma)}) = 1.
inline cplx counit_of(const QParams& p, const Factor& f)
{
    switch (f.kind) {
    case Factor::Kind::A:
    case Factor::Kind::Abar: return 0.0;
    case Factor::Kind::N: return -p.gamma;
    case Factor::Kind::Identity:
    case Factor::Kind::QPow: return 1.0;
    }
    return 0.0;
}

inline cplx counit(const QParams& p, Gen g) { return counit_of(p, Factor::of(g)); }

/// Antipode on a tagged factor, realized in the representation.
inline Matrix antipode_of(const Rep& rep, const Factor& f)
{
    const QParams& p = rep.params;
    switch (f.kind) {
    case Factor::Kind::A: return -p.pow(-0.5) * rep.A;
    case Factor::Kind::Abar: return -p.pow(0.5) * rep.Abar;
    case Factor::Kind::N: return -rep.Nmat - 2.0 * p.gamma * identity(rep.dim());
    case Factor::Kind::Identity: return identity(rep.dim());
    case Factor::Kind::QPow: return realize_factor(rep, Factor::qpow(-f.power));
    }
    return {};
}

struct HopfOptions {
    /// Coassociativity works on d^3 x d^3 matrices; d above this cap is refused.
    int coassoc_max_dim = 9;
};

inline std::vector<CheckReport> check_hopf_axioms(const Rep& rep, double tol = kDefaultTol,
                                                  const HopfOptions& opt = {})
{
    const Eigen::Index d = rep.dim();
    if (d > opt.coassoc_max_dim)
        throw DimensionTooLarge("coassociativity needs d^3 = " + std::to_string(d * d * d) +
                                "; cap is d <= " + std::to_string(opt.coassoc_max_dim));
    const QParams& p = rep.params;
    std::vector<CheckReport> out;

    const TensorSum da = coproduct(rep, Gen::a);
    const TensorSum db = coproduct(rep, Gen::abar);
    const TensorSum dn = coproduct(rep, Gen::N);
    const Matrix& ra = da.realized();
    const Matrix& rb = db.realized();
    const Matrix& rn = dn.realized();
    {
        const Matrix step = diag_apply(rn, [&](cplx x) { return bracket_step(x, p); });
        const double na = max_abs(ra), nb = max_abs(rb), nn = max_abs(rn);
        out.push_back(CheckReport::make("hopf.homomorphism.a_abar",
                                        relative_residual(commutator(ra, rb) - step, {na, nb}), tol));
        out.push_back(CheckReport::make("hopf.homomorphism.N_abar",
                                        relative_residual(commutator(rn, rb) - rb, {nn, nb}), tol));
        out.push_back(CheckReport::make("hopf.homomorphism.N_a",
                                        relative_residual(commutator(rn, ra) + ra, {nn, na}), tol));
    }

    {
        const Matrix dq = realize_coproduct_of(rep, Factor::qpow(0.5));
        const Matrix q = realize_factor(rep, Factor::qpow(0.5));
        out.push_back(CheckReport::make("hopf.grouplike", relative_residual(dq - kron(q, q), {max_abs(q)}), tol));
    }

    for (Gen g : kGenerators) {
        const TensorSum delta = coproduct(rep, g);
        const Matrix x = realize_generator(rep, g);
        const Matrix id = identity(d);

        Matrix lhs = Matrix::Zero(d * d * d, d * d * d);
        Matrix rhs = lhs;
        Matrix counit_left = Matrix::Zero(d, d);
        Matrix counit_right = counit_left;
        Matrix anti_left = counit_left;
        Matrix anti_right = counit_left;
        for (const auto& t : delta.terms()) {
            lhs += t.coeff * kron(realize_coproduct_of(rep, t.left_tag), t.right);
            rhs += t.coeff * kron(t.left, realize_coproduct_of(rep, t.right_tag));
            counit_left += t.coeff * counit_of(p, t.left_tag) * t.right;
            counit_right += t.coeff * counit_of(p, t.right_tag) * t.left;
            anti_left += t.coeff * antipode_of(rep, t.left_tag) * t.right;
            anti_right += t.coeff * t.left * antipode_of(rep, t.right_tag);
        }
        const std::string gname(to_string(g));
        const double scale = max_abs(delta.realized());
        out.push_back(CheckReport::make("hopf.coassoc." + gname, relative_residual(lhs - rhs, {scale, scale}), tol));

        const double counit_res = std::max(relative_residual(counit_left - x, {max_abs(x)}),
                                           relative_residual(counit_right - x, {max_abs(x)}));
        out.push_back(CheckReport::make("hopf.counit." + gname, counit_res, tol));

        const Matrix target = counit(p, g) * id;
        const double anti_res = std::max(relative_residual(anti_left - target, {scale}),
                                         relative_residual(anti_right - target, {scale}));
        out.push_back(CheckReport::make("hopf.antipode." + gname, anti_res, tol));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Involutions

enum class Flavor { Standard, NonStandard };

inline std::string_view to_string(Flavor f) { return f == Flavor::Standard ? "standard" : "nonstandard"; }

/// a+ = alpha abar, abar+ = beta a, N+ = N + eta.
struct InvolutionSpec {
    cplx alpha{1.0, 0.0};
    cplx beta{1.0, 0.0};
    cplx eta{0.0, 0.0};
    Flavor flavor = Flavor::NonStandard;
    std::string label;
};

/// Validates involutivity (conj(alpha) beta = 1) and that eta is imaginary.
inline InvolutionSpec make_involution(cplx alpha, cplx beta, cplx eta, Flavor flavor, std::string label)
{
    constexpr double tol = 1e-12;
    if (std::abs(alpha * std::conj(beta) - 1.0) > tol)
        throw Error("involution is not involutive: alpha * conj(beta) != 1");
    if (std::abs(eta.real()) > tol * std::max(1.0, std::abs(eta)))
        throw Error("involution shift eta must be purely imaginary");
    return {alpha, beta, eta, flavor, std::move(label)};
}

enum class InvolutionKind { Canonical, RealFormMinus, RealFormPlus };

inline InvolutionSpec involution(InvolutionKind kind, const QParams& p)
{
    if (kind == InvolutionKind::Canonical) return make_involution(1.0, 1.0, 0.0, Flavor::NonStandard, "canonical");
    if (p.mode != Mode::RealLine)
        throw ModeMismatch("the +-i real-form involutions require real q");
    const cplx eta(0.0, -2.0 * p.branch_shift());
    const cplx i(0.0, 1.0);
    if (kind == InvolutionKind::RealFormMinus)
        return make_involution(-i, -i, eta, Flavor::Standard, "real-minus");
    return make_involution(i, i, eta, Flavor::Standard, "real-plus");
}

namespace detail {

/// c_a a + c_abar abar + c_N N + c_1 1, enough to track S and + on generators.
struct LinearElement {
    cplx a, abar, n, one;

    LinearElement operator-(const LinearElement& o) const
    {
        return {a - o.a, abar - o.abar, n - o.n, one - o.one};
    }
    double max_coeff() const
    {
        return std::max({std::abs(a), std::abs(abar), std::abs(n), std::abs(one)});
    }
    static LinearElement of(Gen g)
    {
        switch (g) {
        case Gen::a: return {1.0, 0.0, 0.0, 0.0};
        case Gen::abar: return {0.0, 1.0, 0.0, 0.0};
        case Gen::N: return {0.0, 0.0, 1.0, 0.0};
        }
        return {};
    }
};

inline LinearElement antipode(const QParams& p, const LinearElement& x)
{
    return {-p.pow(-0.5) * x.a, -p.pow(0.5) * x.abar, -x.n, x.one - 2.0 * p.gamma * x.n};
}

inline LinearElement star(const InvolutionSpec& inv, const LinearElement& x)
{
    return {std::conj(x.abar) * inv.beta, std::conj(x.a) * inv.alpha, std::conj(x.n),
            std::conj(x.one) + std::conj(x.n) * inv.eta};
}

} // namespace detail

/// Image of x+ for a generator x, realized in the representation.
inline Matrix realize_star_image(const Rep& rep, const InvolutionSpec& inv, Gen g)
{
    switch (g) {
    case Gen::a: return inv.alpha * rep.Abar;
    case Gen::abar: return inv.beta * rep.A;
    case Gen::N: return rep.Nmat + inv.eta * identity(rep.dim());
    }
    return {};
}

/// Delta(x+) as a realized matrix.
inline Matrix realize_coproduct_of_star(const Rep& rep, const InvolutionSpec& inv, Gen g)
{
    const Eigen::Index d = rep.dim();
    switch (g) {
    case Gen::a: return inv.alpha * coproduct(rep, Gen::abar).realized();
    case Gen::abar: return inv.beta * coproduct(rep, Gen::a).realized();
    case Gen::N: return coproduct(rep, Gen::N).realized() + inv.eta * identity(d * d);
    }
    return {};
}

/// Hopf *-compatibility of an involution on a representation. The involution is
/// realized as the adjoint for the hermitian form diag(signature) (identity when empty).
/// Reports: star.algebra, star.matrix.{a,abar,N}, star.coproduct, star.counit, star.antipode.
inline std::vector<CheckReport> check_star_structure(const Rep& rep, const InvolutionSpec& inv,
                                                     double tol = kDefaultTol,
                                                     std::span<const int> signature = {})
{
    const QParams& p = rep.params;
    const Eigen::Index d = rep.dim();
    if (!signature.empty() && Eigen::Index(signature.size()) != d)
        throw Error("signature length does not match the representation dimension");
    std::vector<CheckReport> out;

    // Conjugated relations: [abar+, a+] = [N+ + 1]_{conj q} - [N+]_{conj q}, [abar+, N+] = abar+,
    // [a+, N+] = -a+.
    {
        const Matrix ap = realize_star_image(rep, inv, Gen::a);
        const Matrix bp = realize_star_image(rep, inv, Gen::abar);
        const Matrix np = realize_star_image(rep, inv, Gen::N);
        const cplx log_conj = std::conj(p.log_q());
        const Matrix rhs = diag_apply(np, [&](cplx x) {
            return qnumber_from_log(x + 1.0, log_conj) - qnumber_from_log(x, log_conj);
        });
        const double na = max_abs(ap), nb = max_abs(bp), nn = max_abs(np);
        const double res = std::max({relative_residual(commutator(bp, ap) - rhs, {na, nb}),
                                     relative_residual(commutator(bp, np) - bp, {nb, nn}),
                                     relative_residual(commutator(ap, np) + ap, {na, nn})});
        out.push_back(CheckReport::make("star.algebra", res, tol));
    }

    for (Gen g : kGenerators) {
        const Matrix x = realize_generator(rep, g);
        const Matrix img = realize_star_image(rep, inv, g);
        const Matrix defect = metric_adjoint(x, signature) - img;
        out.push_back(CheckReport::make("star.matrix." + std::string(to_string(g)),
                                        relative_residual(defect, {max_abs(x)}), tol));
    }

    {
        const std::vector<int> sig2 = kron_signature(signature, signature);
        const Matrix swap = swap_operator(d);
        double worst = 0.0;
        std::ostringstream detail;
        detail.precision(6);
        for (Gen g : kGenerators) {
            const Matrix delta = coproduct(rep, g).realized();
            const Matrix lhs = metric_adjoint(delta, sig2);
            Matrix rhs = realize_coproduct_of_star(rep, inv, g);
            if (inv.flavor == Flavor::NonStandard) rhs = swap * rhs * swap;
            const double r = relative_residual(lhs - rhs, {max_abs(delta)});
            worst = std::max(worst, r);
            detail << to_string(g) << "=" << r << (g == Gen::N ? "" : " ");
        }
        out.push_back(CheckReport::make("star.coproduct", worst, tol, detail.str()));
    }

    {
        double worst = 0.0;
        for (Gen g : kGenerators) {
            const auto xp = detail::star(inv, detail::LinearElement::of(g));
            const cplx eps_star = xp.a * counit(p, Gen::a) + xp.abar * counit(p, Gen::abar) +
                                  xp.n * counit(p, Gen::N) + xp.one;
            worst = std::max(worst, std::abs(eps_star - std::conj(counit(p, g))));
        }
        out.push_back(CheckReport::make("star.counit", worst / std::max(1.0, std::abs(p.gamma)), tol));
    }

    {
        double worst = 0.0;
        for (Gen g : kGenerators) {
            const auto x = detail::LinearElement::of(g);
            detail::LinearElement defect;
            if (inv.flavor == Flavor::Standard) {
                defect = detail::star(inv, detail::antipode(p, detail::star(inv, detail::antipode(p, x)))) - x;
            } else {
                defect = detail::antipode(p, detail::star(inv, x)) - detail::star(inv, detail::antipode(p, x));
            }
            worst = std::max(worst, defect.max_coeff());
        }
        out.push_back(CheckReport::make("star.antipode", worst / std::max(1.0, std::abs(p.gamma)), tol,
                                        "coefficient-level on generators"));
    }
    return out;
}

struct DerivedInvolution {
    InvolutionSpec spec;
    /// Signs of the hermitian form in which the involution is the matrix adjoint.
    std::vector<int> signature;
    std::vector<CheckReport> reports;

    bool positive_definite() const
    {
        return std::all_of(signature.begin(), signature.end(), [](int s) { return s > 0; });
    }
};

/// Solves adjoint(A) = alpha Abar, adjoint(Abar) = beta A, adjoint(N) = N + eta for a
/// real-q representation, where the adjoint is taken for a diagonal form with entries
/// +-1 (unit-length basis vectors). Each candidate is re-verified with check_star_structure
/// in the standard flavor; survivors are returned ordered by Im(alpha).
inline std::vector<DerivedInvolution> derive_involutions(const Rep& rep, double tol = kDefaultTol)
{
    if (rep.params.mode != Mode::RealLine) throw ModeMismatch("involution recovery needs real q");
    const int k = rep.k;
    const Eigen::Index d = rep.dim();
    const cplx i(0.0, 1.0);

    cplx eta = 0.0;
    for (Eigen::Index n = 0; n < d; ++n) eta += std::conj(rep.Nmat(n, n)) - rep.Nmat(n, n);
    eta /= double(d);
    eta = cplx(0.0, eta.imag());

    struct Candidate {
        cplx alpha, beta;
        std::vector<int> signature;
    };
    std::vector<Candidate> candidates;

    if (k == 0) {
        for (cplx a : {-i, i}) candidates.push_back({a, a, {1}});
    } else {
        std::vector<cplx> ratio(std::size_t(k) + 1);
        for (int n = 1; n <= k; ++n) {
            const cplx lo = rep.Abar(n, n - 1);
            if (std::abs(lo) < 1e-300) throw NoSolution("zero ladder entry; alpha is not determined");
            ratio[std::size_t(n)] = std::conj(rep.A(n - 1, n)) / lo;
        }
        for (int first : {+1, -1}) {
            const cplx alpha = ratio[1] * double(first);
            std::vector<int> sig{1};
            bool ok = true;
            cplx beta_sum = 0.0;
            for (int n = 1; n <= k && ok; ++n) {
                const cplx s = alpha / ratio[std::size_t(n)];
                if (std::abs(s.imag()) > tol || std::abs(std::abs(s.real()) - 1.0) > tol) {
                    ok = false;
                    break;
                }
                const int sn = s.real() > 0 ? 1 : -1;
                sig.push_back(sig.back() * sn);
                beta_sum += double(sn) * std::conj(rep.Abar(n, n - 1)) / rep.A(n - 1, n);
            }
            if (ok) candidates.push_back({alpha, beta_sum / double(k), std::move(sig)});
        }
    }

    std::vector<DerivedInvolution> out;
    for (auto& c : candidates) {
        InvolutionSpec spec;
        try {
            spec = make_involution(c.alpha, c.beta, eta, Flavor::Standard, "derived");
        } catch (const Error&) {
            continue;
        }
        auto reports = check_star_structure(rep, spec, tol, c.signature);
        if (all_pass(reports)) out.push_back({std::move(spec), std::move(c.signature), std::move(reports)});
    }
    if (out.empty()) throw NoSolution("no involution satisfies the star constraints on this representation");
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.spec.alpha.imag() < y.spec.alpha.imag(); });
    return out;
}

} // namespace qosc
