#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "qoct/spectra.hpp"

using namespace qoct;
using std::numbers::pi;

TEST(Spectra, PeakDensity) {
    const auto s = fixtures::degenerate(0.01, 0.2);
    EXPECT_DOUBLE_EQ(density(s, s.omega0, s.omega0), 1.0 / (pi * 0.01 * 0.2));
}

TEST(Spectra, OneSigmaPairOfPhaseMatchingFactor) {
    const auto s = fixtures::degenerate(0.01, 0.2);
    const double half = 0.5 * 0.2 * std::sqrt(2.0);
    EXPECT_NEAR(density(s, s.omega0 + half, s.omega0 - half), std::exp(-1.0) / (pi * 0.01 * 0.2), 1e-12);
}

TEST(Spectra, DetunedDensityAtLobeCenter) {
    const double W = 0.15;
    const auto s = fixtures::detuned(W, 0.01, 0.2);
    // Direct re-evaluation of the two-lobe formula.
    const double expected = (1.0 + std::exp(-8.0 * W * W / (0.2 * 0.2))) / (2.0 * pi * 0.01 * 0.2);
    EXPECT_NEAR(density(s, s.omega0 + W, s.omega0 - W), expected, 1e-13 * expected);
}

TEST(Spectra, DegenerateIsTheZeroDetuningLimit) {
    const auto s = fixtures::degenerate(0.03, 0.25);
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double sum = fixtures::uniform(rng, -0.2, 0.2);
        const double diff = fixtures::uniform(rng, -2.0, 2.0);
        worst = std::max(worst, std::abs(detail::two_lobe_density(s, sum, diff) - detail::one_lobe_density(s, sum, diff)));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Spectra, SymmetricUnderExchange) {
    std::mt19937_64 rng(11);
    const BiphotonSpectrum specs[] = {fixtures::degenerate(0.002, 0.3), fixtures::detuned(0.4, 0.05, 0.1)};
    for (const auto& s : specs) {
        double worst = 0.0;
        for (int i = 0; i < 500000; ++i) {
            const double w1 = s.omega0 + fixtures::uniform(rng, -1.5, 1.5);
            const double w2 = s.omega0 + fixtures::uniform(rng, -1.5, 1.5);
            worst = std::max(worst, std::abs(density(s, w1, w2) - density(s, w2, w1)));
        }
        EXPECT_EQ(worst, 0.0);
    }
}

TEST(Spectra, NormalizesToOne) {
    EXPECT_NEAR(normalization(fixtures::degenerate(0.001, 0.2)).value, 1.0, 1e-6);
    EXPECT_NEAR(normalization(fixtures::detuned(0.3, 0.001, 0.2)).value, 1.0, 1e-6);
    EXPECT_NEAR(normalization(fixtures::degenerate(0.2, 0.2)).value, 1.0, 1e-6);
}

TEST(Spectra, NormalizesToOneForRandomParameters) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 20; ++i) {
        const double D = fixtures::uniform(rng, 0.05, 0.5);
        const double d = D * fixtures::log_uniform(rng, 1e-3, 1.0);
        const double W = D * fixtures::uniform(rng, 0.0, 5.0);
        const BiphotonSpectrum s{fixtures::omega0, d, D, W};
        const auto r = normalization(s);
        EXPECT_NEAR(r.value, 1.0, 1e-6) << "delta=" << d << " Delta=" << D << " Omega=" << W;
    }
}

TEST(Spectra, CombinedVariance) {
    const auto s = fixtures::degenerate(0.3, 0.4);
    EXPECT_DOUBLE_EQ(s.combined_variance(), 0.25);
}

TEST(Spectra, RejectsInvalidParameters) {
    EXPECT_THROW((BiphotonSpectrum{1.0, 0.0, 0.1, 0.0}).validate(), InvalidArgument);
    EXPECT_THROW((BiphotonSpectrum{1.0, 0.1, -0.1, 0.0}).validate(), InvalidArgument);
    EXPECT_THROW((BiphotonSpectrum{1.0, 0.1, 0.1, -0.2}).validate(), InvalidArgument);
    EXPECT_THROW((BiphotonSpectrum{0.0, 0.1, 0.1, 0.0}).validate(), InvalidArgument);
    EXPECT_THROW(normalization(BiphotonSpectrum{1.0, 0.1, 0.0, 0.0}), InvalidArgument);
}
