#include <gtest/gtest.h>

#include <numbers>

#include "qosc/algcheck.hpp"

using namespace qosc;
using std::numbers::pi;

namespace {

Rep rep_for(Mode m, double eps, int k) { return build_rep(make_params(m, eps, choose_branch(m, eps)), k); }

} // namespace

TEST(DefiningRelations, WorkedExampleColumnByColumn)
{
    const Rep rep = build_rep(make_params(Mode::Unimodular, pi / 2, 0), 1);
    const Matrix c = commutator(rep.A, rep.Abar);
    EXPECT_NEAR(std::abs(c(0, 0) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(c(1, 1) + 1.0), 0.0, 1e-14);
    for (const auto& r : check_defining_relations(rep)) EXPECT_LT(r.residual, 1e-13) << r.name;
}

TEST(DefiningRelations, SingletForcesZeroStep)
{
    // [A, Abar] = 0 on a singlet, so [nu0+1] - [nu0] must vanish.
    for (Mode m : {Mode::Unimodular, Mode::RealLine}) {
        const Rep rep = rep_for(m, 0.7, 0);
        EXPECT_NEAR(std::abs(bracket_step(rep.nu0, rep.params)), 0.0, 1e-13);
        EXPECT_TRUE(all_pass(check_defining_relations(rep)));
    }
}

TEST(DefiningRelations, PerturbationIsDetected)
{
    Rep rep = rep_for(Mode::Unimodular, 0.9, 3);
    rep.Abar(2, 1) += 1e-3;
    const auto reports = check_defining_relations(rep);
    const CheckReport* r = find_report(reports, "relation.a_abar");
    ASSERT_NE(r, nullptr);
    EXPECT_FALSE(r->pass);
    EXPECT_GT(r->residual, 1e-4);
    EXPECT_LT(r->residual, 1e-2);
}

TEST(DefiningRelations, BothModesSmallK)
{
    for (Mode m : {Mode::Unimodular, Mode::RealLine})
        for (double eps : {-0.4, 0.3, 0.9})
            for (int k = 0; k <= 6; ++k)
                for (const auto& r : check_defining_relations(rep_for(m, eps, k)))
                    EXPECT_LT(r.residual, 1e-12) << to_string(m) << " eps=" << eps << " k=" << k << " " << r.name;
}

TEST(DefiningRelations, GenericWindowInterior)
{
    for (Mode m : {Mode::Unimodular, Mode::RealLine}) {
        const QParams p = make_params(m, 0.8, choose_branch(m, 0.8));
        const Rep w = build_generic_window(cplx(0.37, 0.2), cplx(1.5, -0.3), p, 6);
        for (const auto& r : check_defining_relations(w)) EXPECT_LT(r.residual, 1e-12) << r.name;
        const CasimirResult c = casimir(w);
        for (const auto& r : c.reports) EXPECT_LT(r.residual, 1e-12) << r.name;
    }
}

TEST(Casimir, GoldenRatioAnchor)
{
    const CasimirResult c = casimir(build_rep(make_params(Mode::Unimodular, pi / 5, 0), 0));
    EXPECT_NEAR(c.scalar.real(), -(1.0 + std::sqrt(5.0)) / 2.0, 1e-12);
    EXPECT_NEAR(c.scalar.real(), -1.6180340, 1e-7);
    EXPECT_NEAR(c.scalar.imag(), 0.0, 1e-14);
}

TEST(Casimir, VanishesAtThirdTurn)
{
    const CasimirResult c = casimir(build_rep(make_params(Mode::Unimodular, pi / 3, 0), 2));
    EXPECT_NEAR(std::abs(c.scalar), 0.0, 1e-13);
}

TEST(Casimir, ClosedFormAndLowestWeight)
{
    for (double eps : {pi / 5, 0.9, 2.0, -0.9})
        for (int k = 0; k <= 6; ++k) {
            const Rep rep = rep_for(Mode::Unimodular, eps, k);
            const CasimirResult c = casimir(rep);
            EXPECT_TRUE(all_pass(c.reports)) << "eps=" << eps << " k=" << k;
            EXPECT_NEAR(std::abs(c.scalar - casimir_closed_form_unimodular(rep.params, k)), 0.0, 1e-11);
        }
    for (int k = 0; k <= 6; ++k) {
        const CasimirResult c = casimir(rep_for(Mode::RealLine, 1.0, k));
        EXPECT_TRUE(all_pass(c.reports)) << "k=" << k;
    }
}

TEST(Ladder, UnimodularK5)
{
    const auto reports = check_ladder_identities(rep_for(Mode::Unimodular, 0.9, 5), 5, 1e-11);
    EXPECT_EQ(reports.size(), 10u);
    EXPECT_TRUE(all_pass(reports));
}

TEST(Ladder, BothModesUpToTop)
{
    for (Mode m : {Mode::Unimodular, Mode::RealLine})
        for (double eps : {-1.0, 0.4, 1.3})
            for (int k = 0; k <= 6; ++k) {
                const auto reports = check_ladder_identities(rep_for(m, eps, k), k + 1, 1e-11);
                EXPECT_TRUE(all_pass(reports)) << to_string(m) << " eps=" << eps << " k=" << k
                                               << " max=" << max_residual(reports);
            }
}

TEST(Ladder, RangeIsValidated)
{
    const Rep rep = rep_for(Mode::Unimodular, 0.9, 2);
    EXPECT_THROW(check_ladder_identities(rep, 0), Error);
    EXPECT_THROW(check_ladder_identities(rep, 4), Error);
}

TEST(Ladder, DetectsAWrongEntry)
{
    Rep rep = rep_for(Mode::RealLine, 0.9, 4);
    rep.A(1, 2) *= 1.01;
    EXPECT_FALSE(all_pass(check_ladder_identities(rep, 4)));
}

TEST(NormProfile, HandValues)
{
    const auto a = norm_profile(make_params(Mode::Unimodular, pi / 2, 0), 1);
    ASSERT_EQ(a.norms.size(), 2u);
    EXPECT_NEAR(a.norms[0], 1.0, 1e-15);
    EXPECT_NEAR(a.norms[1], 1.0, 1e-14);
    EXPECT_TRUE(a.positivity.pass);

    const auto b = norm_profile(make_params(Mode::RealLine, 1.0, 1), 1);
    EXPECT_NEAR(b.norms[1], std::tanh(0.5), 1e-14);
    EXPECT_NEAR(b.norms[1], 0.462117, 1e-6);

    EXPECT_THROW(norm_profile(make_params(Mode::Unimodular, pi / 5, 1), 1), ParityViolation);
}

TEST(NormProfile, PositivityFailsOutsideTheWindow)
{
    const auto prof = norm_profile(make_params(Mode::Unimodular, 2.0, 0), 4);
    EXPECT_FALSE(prof.positivity.pass);
    EXPECT_GT(prof.positivity.residual, 0.0);
}
