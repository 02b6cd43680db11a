#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "subconv/errors.hpp"
#include "subconv/folding.hpp"
#include "subconv/models.hpp"

using namespace subconv;

namespace {

PlanarSystem aj(double s = 0.8, double t = 1, double r = 2, double lambda = 2) {
    return make_adult_juvenile(ParameterSequence::constant(s), ParameterSequence::constant(t),
                               ParameterSequence::constant(r), lambda);
}

PlanarSystem toy(PlanarMap f, PlanarMap g) {
    PlanarSystem sys;
    sys.id = "toy";
    sys.f = std::move(f);
    sys.g = std::move(g);
    return sys;
}

}  // namespace

// --- solve_sigma ---------------------------------------------------------------

TEST(SolveSigma, Multiplicative) {
    auto sys = toy([](std::size_t, double, double v) { return 0.8 * v; },
                   [](std::size_t, double u, double) { return u; });
    sys.sigma.kind = SigmaKind::Multiplicative;
    sys.sigma.rho = [](std::size_t, double) { return 0.8; };
    sys.sigma.phi_inverse = [](std::size_t, double w) { return w; };
    EXPECT_DOUBLE_EQ(solve_sigma(sys, 0, 5.0, 0.8), 1.0);
}

TEST(SolveSigma, Additive) {
    auto sys = toy([](std::size_t, double u, double v) { return u + v; },
                   [](std::size_t, double u, double) { return u; });
    sys.sigma.kind = SigmaKind::Additive;
    sys.sigma.rho = [](std::size_t, double u) { return u; };
    sys.sigma.phi_inverse = [](std::size_t, double w) { return w; };
    EXPECT_EQ(solve_sigma(sys, 0, 2.0, 5.0), 3.0);
    // w below the range of f(2, .) on v >= 0
    EXPECT_THROW((void)solve_sigma(sys, 0, 2.0, 1.0), Error);
}

TEST(SolveSigma, AdultJuvenileRecoversJuveniles) {
    const auto sys = aj();
    const auto o = iterate_system(sys, {1.0, 0.6}, 30);
    for (std::size_t n = 0; n + 1 < o.length(); ++n) {
        EXPECT_NEAR(solve_sigma(sys, n, o.x[n], o.x[n + 1]), o.y[n], 1e-12 * std::max(1.0, o.y[n]));
    }
}

TEST(SolveSigma, MissingForm) {
    EXPECT_THROW((void)solve_sigma(make_competition(CompetitionParams{}, false), 0, 1.0, 1.0),
                 MissingSolvabilityForm);
    EXPECT_THROW((void)fold_planar(make_competition(CompetitionParams{}, false)), MissingSolvabilityForm);
}

TEST(SolveSigma, InversionProperty) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 5.0), v(0.0, 5.0);
    const auto sys = make_adult_juvenile(ParameterSequence::periodic({0.4, 0.9}),
                                         ParameterSequence::constant(1.3),
                                         ParameterSequence::periodic({1.0, 2.5, 0.5}), 2.5);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t n = static_cast<std::size_t>(i % 6);
        const double uu = u(rng);
        const double w = sys.f(n, uu, v(rng));
        const double back = sys.f(n, uu, solve_sigma(sys, n, uu, w));
        EXPECT_LE(std::abs(back - w), 1e-9 * std::max(std::abs(w), 1e-300));
    }
}

// --- fold_planar ---------------------------------------------------------------------

TEST(FoldPlanar, AdultJuvenileMatchesHandFold) {
    const auto sys = aj();
    const auto eq = fold_planar(sys);
    EXPECT_EQ(eq.order, 2u);
    EXPECT_EQ(eq.dominant_lag, 2u);
    const auto x1 = fold_initial(sys, {1.0, 1.0});
    EXPECT_EQ(x1[0], 1.0);
    EXPECT_EQ(x1[1], 0.8);
    const std::vector<double> h{0.8, 1.0};
    EXPECT_NEAR(evaluate_map(eq, 2, h), 0.8, 1e-15);

    const std::vector<double> init{x1[0], x1[1]};
    const auto folded = iterate(eq, init, 60);
    const auto ref = oracle::adult_juvenile_folded(0.8, 1, 2, 2, 1.0, 1.0, 61);
    for (std::size_t n = 0; n < folded.length(); ++n) {
        EXPECT_NEAR(folded[n], ref[n], 1e-12 * std::max(1e-300, std::abs(ref[n]))) << n;
    }
}

TEST(FoldPlanar, ZeroDataStaysZero) {
    const auto eq = fold_planar(aj());
    const std::vector<double> zero{0.0, 0.0};
    for (double x : iterate(eq, zero, 20).terms) EXPECT_EQ(x, 0.0);
}

// --- iterate_system --------------------------------------------------------------------

TEST(IterateSystem, AdultJuvenileExample) {
    const auto o = iterate_system(aj(), {1.0, 1.0}, 2);
    ASSERT_EQ(o.length(), 3u);
    EXPECT_EQ(o.x[1], 0.8);
    EXPECT_EQ(o.y[1], 1.0);
    EXPECT_EQ(o.x[2], 0.8);
    EXPECT_NEAR(o.y[2], 0.64 * std::exp(0.2), 1e-15);
    EXPECT_NEAR(o.y[2], 0.7817, 1e-4);
    const auto [ox, oy] = oracle::adult_juvenile(0.8, 1, 2, 2, 1.0, 1.0, 2);
    EXPECT_EQ(o.x, ox);
    EXPECT_EQ(o.y, oy);
}

TEST(IterateSystem, CompetitionExample) {
    const auto o = iterate_system(make_competition(CompetitionParams{}, false), {0.5, 0.5}, 1);
    EXPECT_NEAR(o.x[1], 0.25 / 1.25, 1e-15);
}

TEST(IterateSystem, DomainAndNonFinite) {
    EXPECT_THROW((void)iterate_system(aj(), {-1.0, 1.0}, 3), DomainError);
    auto blow = toy([](std::size_t, double u, double) { return u * u * 1e200; },
                    [](std::size_t, double, double v) { return v; });
    const auto o = iterate_system(blow, {10.0, 1.0}, 10);
    EXPECT_EQ(o.status, IterationStatus::NonFinite);
    EXPECT_FALSE(o.diagnostic.empty());
    auto negative = toy([](std::size_t, double u, double) { return u - 1.0; },
                        [](std::size_t, double, double v) { return v; });
    EXPECT_THROW((void)iterate_system(negative, {1.5, 1.0}, 5), DomainError);
}

// --- fold consistency ---------------------------------------------------------------------

TEST(FoldConsistency, AdultJuvenileExample) {
    const auto c = check_fold_consistency(aj(), {1.0, 1.0}, 100, 1e-9);
    EXPECT_TRUE(c.pass) << c.diagnostic;
    EXPECT_EQ(c.compared, 101u);
    EXPECT_LE(c.max_x_deviation, 1e-9);
    EXPECT_LE(c.max_y_deviation, 1e-9);
    EXPECT_FALSE(c.first_divergent);
}

TEST(FoldConsistency, ZeroStepsTriviallyPass) {
    EXPECT_TRUE(check_fold_consistency(aj(), {0.3, 2.0}, 0, 1e-9).pass);
    EXPECT_TRUE(check_fold_consistency(make_3d_example(ThreeDParams{}), {1, 1, 1}, 0, 1e-9).pass);
}

TEST(FoldConsistency, RandomInitialPointsForEverySystemWithSigma) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> pos(0.01, 3.0);
    const std::vector<PlanarSystem> systems{
        aj(), aj(0.5, 2.0, 1.0, 1.5),
        make_adult_juvenile(ParameterSequence::periodic({0.6, 0.95}), ParameterSequence::constant(0.5),
                            ParameterSequence::periodic({1.5, 2.5}), 3.0)};
    for (const auto& sys : systems) {
        for (int i = 0; i < 20; ++i) {
            const std::array<double, 2> init{pos(rng), pos(rng)};
            const auto c = check_fold_consistency(sys, init, 100, 1e-9);
            EXPECT_TRUE(c.pass) << init[0] << "," << init[1] << ": " << c.diagnostic;
        }
    }
}

TEST(FoldConsistency, ThreeDMatchesDirectOrbit) {
    ThreeDParams p;
    p.a = ParameterSequence::constant(1.2);
    p.p = ParameterSequence::constant(0.3);
    p.b = 0.2;
    p.c = 0.7;
    p.d = 0.1;
    p.q = 0.5;
    p.r = 0.4;
    p.s = 0.8;
    const auto m = make_3d_example(p);
    const auto c = check_fold_consistency(m, {1.0, 1.0, 1.0}, 50, 1e-9);
    EXPECT_TRUE(c.pass) << c.diagnostic;
    const auto ref = oracle::threed_x({1.2, 0.3, 0.2, 0.7, 0.1, 0.5, 0.4, 0.8}, 1.0, 1.0, 1.0, 50);
    const auto o = iterate_system(m, {1.0, 1.0, 1.0}, 50);
    for (std::size_t n = 0; n < ref.size(); ++n) EXPECT_NEAR(o.x[n], ref[n], 1e-12 * ref[n]) << n;
}

TEST(RelativeDeviation, Basics) {
    EXPECT_EQ(relative_deviation(1.0, 1.0), 0.0);
    EXPECT_EQ(relative_deviation(0.0, 1e-200), 0.0);
    EXPECT_DOUBLE_EQ(relative_deviation(1.0, 2.0), 0.5);
}

// --- H5 / H6 ------------------------------------------------------------------------------

TEST(CheckH5, AdultJuvenileTangentAtOne) {
    const auto v = check_H5(aj(1.0, 1.0, 1.0, 2.0));
    ASSERT_TRUE(v.applicable) << v.reason;
    EXPECT_NEAR(v.threshold.alpha, 1.0, 1e-6);
    EXPECT_TRUE(v.threshold.tangent);
}

TEST(CheckH5, HalvingEnvelopeHasInfiniteThreshold) {
    auto sys = toy([](std::size_t, double, double v) { return v / 2; },
                   [](std::size_t, double u, double) { return u; });
    sys.h5_f_bar = [](double u) { return u / 2; };
    sys.h5_g_bar = [](double u) { return u; };
    const auto v = check_H5(sys);
    EXPECT_TRUE(v.applicable);
    EXPECT_EQ(v.threshold.alpha, kInf);
}

TEST(CheckH5, UnswappedCompetitionFails) {
    const auto v = check_H5(make_competition(CompetitionParams{}, false));
    EXPECT_FALSE(v.applicable);
    EXPECT_FALSE(v.reason.empty());
}

TEST(CheckH5, EnvelopeCounterexampleIsReported) {
    auto sys = toy([](std::size_t, double, double v) { return v; },
                   [](std::size_t, double u, double) { return u; });
    sys.h5_f_bar = [](double u) { return u / 2; };
    sys.h5_g_bar = [](double u) { return u; };
    EXPECT_FALSE(check_H5(sys).applicable);
}

TEST(CheckH5, MissingEnvelopeThrowsWhenNotRefutable) {
    auto sys = toy([](std::size_t, double, double v) { return v / 2; },
                   [](std::size_t, double u, double) { return u; });
    EXPECT_THROW((void)check_H5(sys), MissingEnvelope);
    // f grows with u2, so no envelope in u1 alone can exist
    EXPECT_FALSE(check_H6(sys).applicable);
    auto own = toy([](std::size_t, double u, double) { return u / 2; },
                   [](std::size_t, double u, double) { return u; });
    EXPECT_THROW((void)check_H6(own), MissingEnvelope);
}

TEST(CheckH6, CompetitionExamples) {
    CompetitionParams cp;
    cp.r1 = ParameterSequence::constant(3.0);
    cp.a1 = ParameterSequence::constant(2.0);
    const auto v = check_H6(make_competition(cp, false));
    ASSERT_TRUE(v.applicable) << v.reason;
    EXPECT_NEAR(v.threshold.alpha, 1.0, 1e-11);

    const auto g = check_H6(make_competition(CompetitionParams{}, false));
    ASSERT_TRUE(g.applicable);
    EXPECT_EQ(g.threshold.alpha, kInf);
}

TEST(CheckH6, AdultJuvenileFails) {
    const auto v = check_H6(aj());
    EXPECT_FALSE(v.applicable);
}

// --- predictions on orbits -------------------------------------------------------------------

TEST(SameParityPrediction, OddEntryGivesOddXAndEvenY) {
    const auto sys = aj();
    const auto h5 = check_H5(sys);
    ASSERT_TRUE(h5.applicable);
    const auto orbit = iterate_system(sys, {1.0, 0.01}, 200);
    const auto rep = apply_corollary_syst(sys, orbit, h5);
    ASSERT_TRUE(rep.crossing_index);
    EXPECT_EQ(*rep.crossing_index, 1u);
    EXPECT_EQ(rep.stride, 2u);
    const auto* px = rep.find(1, "x");
    ASSERT_NE(px, nullptr);
    EXPECT_EQ(px->verdict, Verdict::ConvergingToZero);
    EXPECT_EQ(px->monotone.status, MonotoneCheck::Status::Verified);
    EXPECT_TRUE(px->chain.holds);
    const auto* py = rep.find(0, "y");
    ASSERT_NE(py, nullptr);
    EXPECT_EQ(py->n0 % 2, 0u);
    EXPECT_EQ(py->verdict, Verdict::ConvergingToZero);
    for (const auto& p : rep.predictions) EXPECT_NE(p.verdict, Verdict::Violated);
}

TEST(SameParityPrediction, ParityAndMonotonicityProperty) {
    const auto sys = aj();
    const auto h5 = check_H5(sys);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> pos(0.0, 4.0);
    for (int i = 0; i < 40; ++i) {
        const auto orbit = iterate_system(sys, {pos(rng), pos(rng)}, 150);
        const auto rep = apply_corollary_syst(sys, orbit, h5);
        if (!rep.crossing_index) continue;
        const std::size_t n0 = *rep.crossing_index;
        const auto* px = rep.find(n0 % 2, "x");
        ASSERT_NE(px, nullptr);
        EXPECT_EQ(px->n0 % 2, n0 % 2);
        for (std::size_t n = n0; n + 2 < orbit.length(); n += 2) {
            if (orbit.x[n] == 0.0) break;
            EXPECT_LT(orbit.x[n + 2], orbit.x[n]) << n;
        }
        EXPECT_FALSE(rep.any_violated());
    }
}

TEST(SameParityPrediction, OriginAndNeverEntering) {
    const auto sys = aj();
    const auto h5 = check_H5(sys);
    const auto zero = apply_corollary_syst(sys, iterate_system(sys, {0.0, 0.0}, 10), h5);
    ASSERT_TRUE(zero.crossing_index);
    EXPECT_EQ(*zero.crossing_index, 0u);

    // positive equilibrium-like orbit that stays far above the threshold
    const auto far = iterate_system(sys, {5.0, 5.0}, 0);
    const auto rep = apply_corollary_syst(sys, far, h5);
    EXPECT_FALSE(rep.crossing_index);
    EXPECT_TRUE(rep.predictions.empty());
}

TEST(SameParityPrediction, RequiresApplicableH5) {
    const auto sys = aj();
    EnvelopeVerdict bad;
    EXPECT_THROW((void)apply_corollary_syst(sys, iterate_system(sys, {1, 1}, 5), bad), CriterionInapplicable);
    EXPECT_THROW((void)apply_corollary_syst0(sys, iterate_system(sys, {1, 1}, 5), bad), CriterionInapplicable);
}

TEST(WholeTailPrediction, CompetitionBelowThreshold) {
    CompetitionParams cp;
    cp.r1 = ParameterSequence::constant(3.0);
    cp.a1 = ParameterSequence::constant(2.0);
    const auto sys = make_competition(cp, false);
    const auto h6 = check_H6(sys);
    const auto orbit = iterate_system(sys, {0.5, 0.5}, 200);
    const auto rep = apply_corollary_syst0(sys, orbit, h6);
    ASSERT_TRUE(rep.crossing_index);
    EXPECT_EQ(*rep.crossing_index, 0u);
    ASSERT_TRUE(rep.full_convergence_from);
    EXPECT_EQ(*rep.full_convergence_from, 0u);
    EXPECT_FALSE(rep.any_violated());
}

TEST(WholeTailPrediction, TailDecreasesFromCrossing) {
    const auto sys = make_competition(CompetitionParams{}, false);
    const auto h6 = check_H6(sys);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(0.0, 10.0);
    for (int i = 0; i < 30; ++i) {
        const auto orbit = iterate_system(sys, {pos(rng), pos(rng)}, 200);
        const auto rep = apply_corollary_syst0(sys, orbit, h6);
        ASSERT_TRUE(rep.crossing_index);
        for (std::size_t n = *rep.crossing_index; n + 1 < orbit.length(); ++n) {
            if (orbit.x[n] == 0.0) break;
            EXPECT_LT(orbit.x[n + 1], orbit.x[n]);
        }
        EXPECT_FALSE(rep.any_violated());
    }
    const auto z = apply_corollary_syst0(sys, iterate_system(sys, {0.0, 1.0}, 20), h6);
    for (const auto& p : z.predictions) EXPECT_NE(p.verdict, Verdict::Violated);
}
