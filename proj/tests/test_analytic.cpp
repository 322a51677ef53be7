#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "qoct/analytic.hpp"

using namespace qoct;
using analytic::Regime;
using analytic::Transcription;

namespace {

double sup_relative(const TermSeries& a, const TermSeries& b, Term which) {
    double peak = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        peak = std::max(peak, std::abs(select(a.values[i], which)));
        worst = std::max(worst, std::abs(select(a.values[i], which) - select(b.values[i], which)));
    }
    return peak == 0.0 ? worst : worst / peak;
}

} // namespace

TEST(Analytic, DegenerateAtZeroDelay) {
    const double R = 0.36, r = 0.6;
    const auto t = analytic::terms(Regime::degenerate, 12.0, fixtures::degenerate(), fixtures::mirror(R, 12.0));
    EXPECT_DOUBLE_EQ(t.constant, (1 + R) * (1 + R));
    EXPECT_DOUBLE_EQ(t.hom, 2 * R);
    EXPECT_NEAR(t.single_photon, 4 * r * (1 + R), 1e-15);
    EXPECT_DOUBLE_EQ(t.pump, 2 * R);
}

TEST(Analytic, DetunedTermsCarryBeatNotes) {
    const double W = 0.3, u = 1.7;
    const auto spec = fixtures::detuned(W);
    const auto h = fixtures::mirror(0.5, 0.0);
    const auto deg = analytic::terms(Regime::degenerate, -u, fixtures::degenerate(), h);
    const auto det = analytic::terms(Regime::detuned, -u, spec, h);
    EXPECT_NEAR(det.hom, deg.hom * std::cos(2 * W * u), 1e-15);
    EXPECT_NEAR(det.single_photon, deg.single_photon * std::cos(W * u), 1e-15);
    EXPECT_EQ(det.pump, deg.pump);
}

TEST(Analytic, HomWidthGrowsWithDispersionByTheCancellationFactor) {
    const double D = 0.2, d = 0.01;
    const double kappa = 1.0 / (d * D); // delta Delta kappa = 1
    const auto spec = fixtures::degenerate(d, D);
    const auto h = fixtures::mirror(0.5, 0.0, kappa);
    const double sigma = std::sqrt(2.0) / D;
    const double at_zero = analytic::terms(Regime::degenerate_dispersive_exact, 0.0, spec, h).hom;
    const double at_sigma = analytic::terms(Regime::degenerate_dispersive_exact, -sigma, spec, h).hom;
    EXPECT_NEAR(at_sigma / at_zero, std::exp(-0.5), 1e-14);
    EXPECT_NEAR(at_zero, 2 * 0.5 / std::sqrt(2.0), 1e-15);
}

TEST(Analytic, DetunedSimplifiedSinglePhotonHasTwoLobes) {
    const double D = 0.2, W = 0.15, kappa = 2000.0;
    const auto spec = fixtures::detuned(W, 1e-5, D);
    const auto h = fixtures::mirror(0.5, 0.0, kappa);
    const double r = std::sqrt(0.5);
    const double scale = 2.0 * std::numbers::sqrt2 * r * 1.5 / (D * std::sqrt(kappa));
    // Divide out the carrier where it is far from a node and compare with the lobe model.
    for (double u = -3000.0; u <= 3000.0; u += 37.0) {
        const double carrier = std::cos(fixtures::omega0 * u - u * u / (4 * kappa) + std::numbers::pi / 4);
        if (std::abs(carrier) < 0.3) continue;
        const double m1 = analytic::terms(Regime::detuned_dispersive_simplified, -u, spec, h).single_photon;
        const double s = kappa * D;
        const double lobes = std::exp(-std::pow(u - 2 * kappa * W, 2) / (2 * s * s)) +
                             std::exp(-std::pow(u + 2 * kappa * W, 2) / (2 * s * s));
        EXPECT_NEAR(m1 / carrier, scale * lobes, 1e-12 * scale);
    }
}

TEST(Analytic, DetunedRegimeWithZeroDetuningEqualsDegenerate) {
    const auto spec = fixtures::degenerate(0.01, 0.25);
    const auto h = fixtures::mirror(0.7, 20.0);
    const TauGrid grid = TauGrid::centered(20.0, 60.0, 0.05);
    const auto a = analytic::evaluate_terms(Regime::degenerate, grid, spec, h);
    const auto b = analytic::evaluate_terms(Regime::detuned, grid, spec, h);
    for (Term t : {Term::constant, Term::hom, Term::single_photon, Term::pump}) EXPECT_EQ(sup_relative(a, b, t), 0.0);
}

TEST(Analytic, ExactDispersiveFormsReduceWithoutDispersion) {
    const auto h = fixtures::mirror(0.7, 20.0);
    const TauGrid grid = TauGrid::centered(20.0, 60.0, 0.05);
    const auto deg = fixtures::degenerate(0.01, 0.25);
    const auto det = fixtures::detuned(0.4, 0.01, 0.25);
    const auto a = analytic::evaluate_terms(Regime::degenerate, grid, deg, h);
    const auto b = analytic::evaluate_terms(Regime::degenerate_dispersive_exact, grid, deg, h);
    const auto c = analytic::evaluate_terms(Regime::detuned, grid, det, h);
    const auto d = analytic::evaluate_terms(Regime::detuned_dispersive_exact, grid, det, h);
    for (Term t : {Term::constant, Term::hom, Term::single_photon, Term::pump}) {
        EXPECT_LT(sup_relative(a, b, t), 1e-14) << term_name(t);
        EXPECT_LT(sup_relative(c, d, t), 1e-14) << term_name(t);
    }
}

TEST(Analytic, DetunedExactWithZeroDetuningEqualsDegenerateExact) {
    const auto spec = fixtures::degenerate(0.02, 0.25);
    const auto h = fixtures::mirror(0.4, 0.0, 60.0);
    const TauGrid grid = TauGrid::centered(0.0, 100.0, 0.1);
    const auto a = analytic::evaluate_terms(Regime::degenerate_dispersive_exact, grid, spec, h);
    const auto b = analytic::evaluate_terms(Regime::detuned_dispersive_exact, grid, spec, h);
    for (Term t : {Term::constant, Term::hom, Term::single_photon, Term::pump}) EXPECT_EQ(sup_relative(a, b, t), 0.0);
}

TEST(Analytic, SimplifiedFormsTrackExactFormsInsideTheirRegime) {
    const double D = 0.2, d = 1e-5, kappa = 2600.0;
    const auto h = fixtures::mirror(0.5, 0.0, kappa);
    const TauGrid grid = TauGrid::centered(0.0, 6.0 * kappa * D + 2.0 * kappa * 0.1, 0.02);
    for (double W : {0.0, 0.1}) {
        const BiphotonSpectrum spec{fixtures::omega0, d, D, W};
        const auto g = analytic::regime_guards(spec, h);
        ASSERT_LT(g.cancellation, 1e-4);
        ASSERT_LT(g.narrowband, 1e-3);
        ASSERT_GT(g.significance, 100.0);
        const Regime exact = W == 0.0 ? Regime::degenerate_dispersive_exact : Regime::detuned_dispersive_exact;
        const Regime simple = W == 0.0 ? Regime::degenerate_dispersive_simplified : Regime::detuned_dispersive_simplified;
        EXPECT_TRUE(analytic::regime_warnings(simple, spec, h).empty());
        const auto a = analytic::evaluate_terms(exact, grid, spec, h);
        const auto b = analytic::evaluate_terms(simple, grid, spec, h);
        for (Term t : {Term::constant, Term::hom, Term::single_photon, Term::pump})
            EXPECT_LT(sup_relative(a, b, t), 0.02) << term_name(t) << " Omega=" << W;
    }
}

TEST(Analytic, DispersionLowersTheTimeDomainPeaks) {
    const double D = 0.2, kappa = 2500.0;
    const auto spec = fixtures::degenerate(1e-5, D);
    const auto flat = analytic::terms(Regime::degenerate, 0.0, spec, fixtures::mirror(0.5, 0.0));
    const auto disp = analytic::terms(Regime::degenerate_dispersive_simplified, 0.0, spec, fixtures::mirror(0.5, 0.0, kappa));
    // M_2 drops by Delta sqrt(kappa); the M_1 envelope by Delta sqrt(kappa / 2).
    const double quarter = std::cos(std::numbers::pi / 4);
    EXPECT_NEAR(flat.pump / (disp.pump / quarter), D * std::sqrt(kappa), 1e-9);
    EXPECT_NEAR(flat.single_photon / (disp.single_photon / quarter), D * std::sqrt(kappa / 2), 1e-9);
}

TEST(Analytic, PublishedTranscriptionDiffersFromTheKernelIntegral) {
    const auto spec = fixtures::degenerate(0.01, 0.25);
    const auto h = fixtures::mirror(0.5, 0.0, 0.0);
    for (double tau : {-3.0, -0.4, 0.0, 2.2}) {
        const auto c = analytic::terms(Regime::degenerate_dispersive_exact, tau, spec, h, Transcription::corrected);
        const auto p = analytic::terms(Regime::degenerate_dispersive_exact, tau, spec, h, Transcription::published);
        EXPECT_DOUBLE_EQ(p.hom, c.hom);
        EXPECT_DOUBLE_EQ(p.single_photon, -c.single_photon);
        EXPECT_TRUE(std::isfinite(p.pump));
    }
    const auto broad = fixtures::degenerate(0.2, 0.25);
    const auto disp = fixtures::mirror(0.5, 0.0, 20.0);
    const auto c = analytic::terms(Regime::degenerate_dispersive_exact, -1.0, broad, disp, Transcription::corrected);
    const auto p = analytic::terms(Regime::degenerate_dispersive_exact, -1.0, broad, disp, Transcription::published);
    EXPECT_GT(std::abs(p.pump - c.pump), 1e-2 * std::abs(c.pump));
}

TEST(Analytic, PublishedDetunedSimplifiedPumpUsesSquaredReflectivity) {
    const auto spec = fixtures::detuned(0.1, 1e-5, 0.2);
    const auto h = fixtures::mirror(0.5, 0.0, 2500.0);
    const auto c = analytic::terms(Regime::detuned_dispersive_simplified, -3.0, spec, h, Transcription::corrected);
    const auto p = analytic::terms(Regime::detuned_dispersive_simplified, -3.0, spec, h, Transcription::published);
    EXPECT_NEAR(p.pump, 0.5 * c.pump, 1e-15);
}

TEST(Analytic, SpectralLayoutDegenerate) {
    const auto spec = fixtures::degenerate(0.001, 0.2);
    const auto peaks = analytic::spectral_layout(Regime::degenerate, spec, fixtures::mirror(0.5));
    ASSERT_EQ(peaks.size(), 3u);
    EXPECT_EQ(peaks[0].term, Term::hom);
    EXPECT_EQ(peaks[0].center, 0.0);
    EXPECT_EQ(peaks[0].std, 0.2);
    EXPECT_EQ(peaks[1].center, fixtures::omega0);
    EXPECT_NEAR(peaks[1].std, 0.1, 1e-5);
    EXPECT_EQ(peaks[2].center, 2 * fixtures::omega0);
    EXPECT_EQ(peaks[2].std, 0.001);
}

TEST(Analytic, SpectralLayoutDetuned) {
    const auto peaks = analytic::spectral_layout(Regime::detuned, fixtures::detuned(0.3), fixtures::mirror(0.5));
    ASSERT_EQ(peaks.size(), 4u);
    EXPECT_DOUBLE_EQ(peaks[0].center, 0.6);
    EXPECT_DOUBLE_EQ(peaks[1].center, fixtures::omega0 - 0.3);
    EXPECT_DOUBLE_EQ(peaks[2].center, fixtures::omega0 + 0.3);
}

TEST(Analytic, Separability) {
    EXPECT_TRUE(analytic::separable(fixtures::degenerate(0.001, 0.2)));
    EXPECT_FALSE(analytic::separable(fixtures::degenerate(0.001, 1.6)));
    EXPECT_FALSE(analytic::separable(fixtures::detuned(0.7, 0.001, 0.2)));
}

TEST(Analytic, CaseMismatch) {
    EXPECT_THROW(analytic::terms(Regime::degenerate, 0.0, fixtures::detuned(0.1), fixtures::mirror(0.5)), CaseMismatch);
    EXPECT_THROW(analytic::terms(Regime::detuned, 0.0, fixtures::detuned(0.1), fixtures::mirror(0.5, 0.0, 10.0)),
                 CaseMismatch);
    EXPECT_THROW(analytic::terms(Regime::degenerate_dispersive_simplified, 0.0, fixtures::degenerate(),
                                 fixtures::mirror(0.5, 0.0, -10.0)),
                 CaseMismatch);
    const SampleResponse shifted{0.5, 0.0, 10.0, fixtures::omega0 + 0.1};
    EXPECT_THROW(analytic::terms(Regime::degenerate_dispersive_exact, 0.0, fixtures::degenerate(), shifted), CaseMismatch);
}

TEST(Analytic, OutOfRegimeIsAWarning) {
    const auto spec = fixtures::degenerate(0.01, 0.2);
    const auto h = fixtures::mirror(0.5, 0.0, 50.0);
    const auto w = analytic::regime_warnings(Regime::degenerate_dispersive_simplified, spec, h);
    EXPECT_EQ(w.size(), 3u);
    EXPECT_NO_THROW(analytic::terms(Regime::degenerate_dispersive_simplified, 0.0, spec, h));
    EXPECT_TRUE(analytic::regime_warnings(Regime::degenerate_dispersive_exact, spec, h).empty());
    analytic::GuardThresholds loose{1.0, 1.0, 1.0};
    EXPECT_TRUE(analytic::regime_warnings(Regime::degenerate_dispersive_simplified, spec, h, loose).empty());
}

TEST(Analytic, RegimeNamesRoundTrip) {
    for (Regime r : {Regime::degenerate, Regime::detuned, Regime::degenerate_dispersive_exact,
                     Regime::degenerate_dispersive_simplified, Regime::detuned_dispersive_exact,
                     Regime::detuned_dispersive_simplified})
        EXPECT_EQ(analytic::parse_regime(analytic::regime_name(r)), r);
    EXPECT_THROW(analytic::parse_regime("case7"), InvalidArgument);
}
