// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of
// failing criteria (0 when all pass).

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "qosc/commands.hpp"
#include "random_ncpoly.hpp"

using namespace qosc;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& why)
    {
        if (!ok && pass) detail << "first failure: " << why << "; ";
        pass = pass && ok;
    }
};

QParams auto_params(Mode m, double eps) { return make_params(m, eps, choose_branch(m, eps)); }

const std::vector<double> kUnimodularDichotomyGrid{pi / 5, 0.9, -0.9, 2.0};
const std::vector<double> kRealGrid{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};

void criterion_relations(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double eps : {pi / 5, 0.9, 2.0})
        for (int k = 0; k <= 6; ++k)
            worst = std::max(worst, max_residual(check_defining_relations(build_rep(auto_params(Mode::Unimodular, eps), k))));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(worst < 1e-12, "relation residual");
    o.require(secs < 1.0, "runtime");
    o.detail << "max residual " << worst << ", " << secs << " s for 21 reps";
}

void criterion_star_realization(Outcome& o)
{
    double worst = 0.0;
    int definite = 0, indefinite = 0;
    for (double eps : kUnimodularDichotomyGrid)
        for (int k = 0; k <= 6; ++k) {
            const Rep rep = build_rep(auto_params(Mode::Unimodular, eps), k);
            std::vector<int> sig;
            if (rep.definite) {
                ++definite;
            } else {
                // Indefinite norms: the adjoint is taken in the form diag(norm signs).
                ++indefinite;
                sig = norm_signature(rep);
            }
            const double r = std::max(max_abs(metric_adjoint(rep.A, sig) - rep.Abar),
                                      max_abs(metric_adjoint(rep.Nmat, sig) - rep.Nmat));
            worst = std::max(worst, r);
        }
    const cplx i(0.0, 1.0);
    for (double eps : kRealGrid)
        for (int k = 0; k <= 6; ++k) {
            const Rep rep = build_rep(auto_params(Mode::RealLine, eps), k);
            o.require(rep.definite, "real-q rep with indefinite norms");
            const cplx shift(0.0, -(2.0 * rep.params.l + 1.0) * pi / eps);
            const double r = std::max(max_abs(rep.A.adjoint() + i * rep.Abar),
                                      max_abs(rep.Nmat.adjoint() - rep.Nmat - shift * identity(rep.dim())));
            worst = std::max(worst, r);
        }
    o.require(worst < 1e-13, "adjoint residual");
    o.detail << "max residual " << worst << " (|q|=1: " << definite << " definite reps in the Hilbert form, "
             << indefinite << " indefinite reps in their norm-sign form; real q: all definite)";
}

void criterion_casimir(Outcome& o)
{
    double worst_scalar = 0.0, worst_value = 0.0;
    for (Mode m : {Mode::Unimodular, Mode::RealLine})
        for (double eps : m == Mode::Unimodular ? kUnimodularDichotomyGrid : kRealGrid)
            for (int k = 0; k <= 6; ++k) {
                const QParams p = auto_params(m, eps);
                const Rep rep = build_rep(p, k);
                const CasimirResult c = casimir(rep);
                for (const auto& r : c.reports)
                    if (r.name == "casimir.scalar" || r.name == "casimir.two_forms" || r.name == "casimir.central")
                        worst_scalar = std::max(worst_scalar, r.residual);
                const cplx lowest = -p.qnum(rep.nu0);
                worst_value = std::max(worst_value, std::abs(c.scalar - lowest) / std::max(1.0, std::abs(lowest)));
                if (m == Mode::Unimodular) {
                    const double closed = casimir_closed_form_unimodular(p, k);
                    worst_value = std::max(worst_value, std::abs(c.scalar - closed) / std::max(1.0, std::abs(closed)));
                }
            }
    const cplx anchor = casimir(build_rep(make_params(Mode::Unimodular, pi / 5, 0), 0)).scalar;
    o.require(worst_scalar < 1e-11, "scalarity");
    o.require(worst_value < 1e-11, "closed form");
    o.require(std::abs(anchor - (-1.6180340)) < 1e-7, "anchor");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10f", anchor.real());
    o.detail << "scalar residual " << worst_scalar << ", value residual " << worst_value << ", anchor " << buf;
}

void criterion_ladder(Outcome& o)
{
    double worst_matrix = 0.0;
    for (Mode m : {Mode::Unimodular, Mode::RealLine})
        for (double eps : m == Mode::Unimodular ? kUnimodularDichotomyGrid : kRealGrid)
            for (int k = 1; k <= 6; ++k)
                worst_matrix = std::max(worst_matrix,
                                        max_residual(check_ladder_identities(build_rep(auto_params(m, eps), k), k)));
    double worst_symbolic = 0.0;
    for (Mode m : {Mode::Unimodular, Mode::RealLine})
        for (double eps : {0.9, -0.9, 0.3}) {
            const NormalOrderer ord(auto_params(m, eps));
            for (int n = 1; n <= 8; ++n)
                worst_symbolic = std::max({worst_symbolic, raise_identity_defect(ord, n).max_coeff(),
                                           lower_identity_defect(ord, n).max_coeff()});
        }
    o.require(worst_matrix < 1e-11, "matrix ladder residual");
    o.require(worst_symbolic < 1e-12, "symbolic coefficient");
    o.detail << "matrix residual " << worst_matrix << ", largest symbolic defect coefficient " << worst_symbolic;
}

void criterion_hopf(Outcome& o)
{
    double worst = 0.0;
    for (Mode m : {Mode::Unimodular, Mode::RealLine})
        for (double eps : m == Mode::Unimodular ? kUnimodularDichotomyGrid : kRealGrid)
            for (int k = 0; k <= 3; ++k)
                worst = std::max(worst, max_residual(check_hopf_axioms(build_rep(auto_params(m, eps), k))));
    o.require(worst < 1e-10, "hopf residual");
    o.detail << "max residual " << worst << " (k <= 3, d^3 <= 64)";
}

void criterion_dichotomy(Outcome& o)
{
    double nonstandard = 0.0, standard_min = 1e300;
    for (double eps : kUnimodularDichotomyGrid)
        for (int k = 1; k <= 3; ++k) {
            const Rep rep = build_rep(auto_params(Mode::Unimodular, eps), k);
            InvolutionSpec inv = involution(InvolutionKind::Canonical, rep.params);
            nonstandard = std::max(nonstandard, find_report(check_star_structure(rep, inv), "star.coproduct")->residual);
            inv.flavor = Flavor::Standard;
            standard_min = std::min(standard_min, find_report(check_star_structure(rep, inv), "star.coproduct")->residual);
        }
    double real_form = 0.0, n_star_min = 1e300;
    for (double eps : kRealGrid)
        for (int k = 0; k <= 3; ++k) {
            const Rep rep = build_rep(auto_params(Mode::RealLine, eps), k);
            real_form = std::max(real_form,
                                 max_residual(check_star_structure(rep, involution(InvolutionKind::RealFormMinus, rep.params))));
            InvolutionSpec canon = involution(InvolutionKind::Canonical, rep.params);
            for (Flavor f : {Flavor::NonStandard, Flavor::Standard}) {
                canon.flavor = f;
                n_star_min = std::min(n_star_min, find_report(check_star_structure(rep, canon), "star.matrix.N")->residual);
            }
        }
    o.require(nonstandard < 1e-10, "non-standard coproduct at |q|=1");
    o.require(standard_min > 1e-2, "standard coproduct at |q|=1 should fail");
    o.require(real_form < 1e-10, "real form at real q");
    o.require(n_star_min > 1e-2, "canonical N-star at real q should fail");

    // The verify command must encode all four arms as expectations and exit 0.
    int verify_fail = 0;
    for (double eps : kUnimodularDichotomyGrid)
        for (int k = 1; k <= 3; ++k) {
            RunConfig cfg;
            cfg.mode = Mode::Unimodular;
            cfg.epsilon = eps;
            cfg.k_lo = cfg.k_hi = k;
            cfg.checks = {"star:canonical7"};
            verify_fail += cmd_verify(cfg).exit_code != 0;
        }
    for (double eps : kRealGrid) {
        RunConfig cfg;
        cfg.mode = Mode::RealLine;
        cfg.epsilon = eps;
        cfg.k_lo = cfg.k_hi = 3;
        cfg.checks = {"star:canonical7", "star:eq13"};
        verify_fail += cmd_verify(cfg).exit_code != 0;
    }
    // An arm that does not match its expectation must flip the exit code.
    RunConfig wrong;
    wrong.mode = Mode::RealLine;
    wrong.epsilon = 1.0;
    wrong.k_lo = wrong.k_hi = 2;
    wrong.checks = {"algebra"};
    wrong.involution = involution(InvolutionKind::Canonical, make_params(Mode::RealLine, 1.0, 1));
    wrong.involution->flavor = Flavor::Standard;
    const int wrong_code = cmd_verify(wrong).exit_code;
    o.require(verify_fail == 0, "verify exit code on the dichotomy grid");
    o.require(wrong_code == 1, "verify must exit 1 when an arm is violated");
    o.detail << "|q|=1 non-standard " << nonstandard << ", standard >= " << standard_min << "; real q real-form "
             << real_form << ", canonical N-star >= " << n_star_min << "; verify failures " << verify_fail
             << ", negative control exit " << wrong_code;
}

void criterion_involutions(Outcome& o)
{
    double worst = 0.0;
    int points = 0;
    const cplx i(0.0, 1.0);
    for (double eps : kRealGrid)
        for (int k = 0; k <= 6; ++k) {
            const Rep rep = build_rep(auto_params(Mode::RealLine, eps), k);
            const auto found = derive_involutions(rep);
            ++points;
            if (found.size() != 2) {
                o.require(false, "expected exactly two involutions");
                continue;
            }
            const cplx eta(0.0, -(2.0 * rep.params.l + 1.0) * pi / eps);
            worst = std::max({worst, std::abs(found[0].spec.alpha + i), std::abs(found[1].spec.alpha - i),
                              std::abs(found[0].spec.eta - eta) / std::abs(eta),
                              std::abs(found[1].spec.eta - eta) / std::abs(eta), max_residual(found[0].reports),
                              max_residual(found[1].reports)});
        }
    o.require(worst < 1e-10, "involution residual");
    o.detail << points << " reps, alpha in {-i, +i} with eta = -i(2l+1)pi/eps; max residual " << worst;
}

void criterion_su2(Outcome& o)
{
    double worst = 0.0;
    for (Mode m : {Mode::Unimodular, Mode::RealLine})
        for (double eps : m == Mode::Unimodular ? std::vector<double>{pi / 5, 0.9, -0.9, 2.0, 2.5} : kRealGrid)
            for (int k = 0; k <= 6; ++k) {
                const Rep rep = build_rep(auto_params(m, eps), k);
                worst = std::max({worst, check_equivalence(rep).residual, max_residual(check_su2(to_su2(rep)))});
            }
    int rejected = 0, probes = 0;
    for (double eps : {pi / 2, -pi / 2, 3 * pi / 2, pi / 2 + 5e-7, pi, 2 * pi, -pi}) {
        RunConfig cfg;
        cfg.mode = Mode::Unimodular;
        cfg.epsilon = eps;
        cfg.k_lo = cfg.k_hi = 2;
        cfg.checks = {"suq2"};
        ++probes;
        rejected += cmd_verify(cfg).exit_code == 2;
    }
    o.require(worst < 1e-10, "equivalence residual");
    o.require(rejected == probes, "guard-band rejection");
    o.detail << "max residual " << worst << " (k <= 6, both modes); " << rejected << "/" << probes
             << " guard-band points rejected with exit 2";
}

void criterion_positivity(Outcome& o)
{
    double lowest = 1e300;
    int reps = 0;
    const std::vector<double> uni{-0.5, -0.25, -0.1, 0.1, 0.25, 0.5};
    const std::vector<double> real{-3.0, -2.0, -0.5, -0.1, 0.1, 0.5, 2.0, 3.0};
    for (Mode m : {Mode::Unimodular, Mode::RealLine})
        for (double eps : m == Mode::Unimodular ? uni : real)
            for (int k = 0; k <= 12; ++k) {
                const NormProfile prof = norm_profile(auto_params(m, eps), k);
                for (double v : prof.norms) lowest = std::min(lowest, v);
                ++reps;
            }
    int violations = 0;
    for (Mode m : {Mode::Unimodular, Mode::RealLine})
        for (double eps : {-0.5, 0.5}) {
            const int wrong_l = choose_branch(m, eps) + 1;
            try {
                norm_profile(make_params(m, eps, wrong_l), 2);
            } catch (const ParityViolation&) {
                ++violations;
            }
        }
    o.require(lowest > 0.0, "non-positive norm");
    o.require(violations == 4, "parity negative control");
    o.detail << reps << " profiles, smallest norm " << lowest << "; " << violations
             << "/4 wrong-parity controls raised ParityViolation (|q|=1 grid kept inside |eps| <= 0.5)";
}

void criterion_cross_layer(Outcome& o)
{
    std::mt19937 rng(1234567);
    double worst = 0.0;
    int pairs = 0;
    for (Mode m : {Mode::Unimodular, Mode::RealLine}) {
        const QParams p = auto_params(m, m == Mode::Unimodular ? 0.45 : 0.9);
        const NormalOrderer ord(p);
        for (int t = 0; t < 50; ++t, ++pairs) {
            const NCPoly x = testing::random_ncpoly(p, rng);
            const NCPoly y = testing::random_ncpoly(p, rng);
            const Rep rep = build_rep(p, t % 7);
            const Matrix ex = evaluate(x, rep), ey = evaluate(y, rep);
            const double scale = std::max(1.0, max_abs(ex) * max_abs(ey));
            worst = std::max(worst, max_abs(evaluate(ord.product(x, y), rep) - ex * ey) / scale);
        }
    }
    o.require(worst < 1e-11, "homomorphism residual");
    o.detail << pairs << " random pairs (degree <= 3, k <= 6), max residual " << worst;
}

void criterion_determinism(Outcome& o)
{
    int mismatches = 0;
    const std::pair<Mode, double> points[] = {{Mode::Unimodular, pi / 5}, {Mode::RealLine, 1.0}, {Mode::RealLine, -0.6}};
    for (const auto& [m, eps] : points) {
        RunConfig cfg;
        cfg.mode = m;
        cfg.epsilon = eps;
        cfg.k_lo = cfg.k_hi = 3;
        const std::string first = cmd_verify(cfg).out;
        for (int rep = 0; rep < 3; ++rep) mismatches += cmd_verify(cfg).out != first;
    }
    RunConfig sweep;
    sweep.mode = Mode::RealLine;
    sweep.grid = EpsGrid{-1.0, 1.0, 0.25};
    sweep.k_lo = 0;
    sweep.k_hi = 3;
    sweep.format = Format::csv;
    const std::string first_sweep = cmd_sweep(sweep).out;
    mismatches += cmd_sweep(sweep).out != first_sweep;
    o.require(mismatches == 0, "byte mismatch");
    o.detail << "9 repeated verify runs and 1 repeated sweep, " << mismatches << " byte mismatches";
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
        {"defining relations", criterion_relations},
        {"star realization", criterion_star_realization},
        {"Casimir", criterion_casimir},
        {"ladder identities", criterion_ladder},
        {"Hopf axioms", criterion_hopf},
        {"real-form dichotomy", criterion_dichotomy},
        {"involution recovery", criterion_involutions},
        {"su_q(2) equivalence", criterion_su2},
        {"positivity", criterion_positivity},
        {"cross-layer homomorphism", criterion_cross_layer},
        {"determinism", criterion_determinism},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        o.detail.precision(3);
        try {
            run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        failures += !o.pass;
        std::printf("[%s] criterion %2d [PRIMARY] %s: %s\n", o.pass ? "PASS" : "FAIL", index, name,
                    o.detail.str().c_str());
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures;
}
