#include <gtest/gtest.h>

#include <complex>

#include "qoct/faddeeva.hpp"

using cd = std::complex<double>;

namespace {

struct Reference {
    cd z;
    cd w;
    cd erf;
};

// 30-digit references from mpmath: w = exp(-z^2) erfc(-iz).
const Reference kReferences[] = {
    {{0.1, 0.2}, {0.80256668732089966, 0.080028603551524777}, {0.1170214863039043, 0.22638445718145092}},
    {{1.5, -0.7}, {-0.38170225411016374, 0.58786826970853465}, {1.0404046154368714, -0.033625498125576172}},
    {{-3, 4}, {0.090933904194765342, -0.065592330527914278}, {120.18699139507944, -27.750337293623902}},
    {{10, 0.5}, {0.0028569536993223132, 0.056560328935308771}, {1.0, -1.7073129028413725e-36}},
    {{0.3, -2.0}, {35.910867305370005, 93.047173088223205}, {14.02821898511046, -9.1551462040302196}},
    {{6.2, 7.1}, {0.045264548106098946, 0.039085894522435955}, {-5709.230523879148, 7542.3679642323463}},
    {{-0.02, 0.01}, {0.98842444689538191, -0.022166197685834157}, {-0.022566830660422789, 0.011279654743319019}},
    {{25, -3}, {-0.0026758871263701768, 0.022263806885610942}, {1.0, 1.6127915173261023e-36}},
};

} // namespace

TEST(Faddeeva, MatchesHighPrecisionReference) {
    for (const auto& ref : kReferences) {
        const cd w = qoct::special::faddeeva(ref.z);
        EXPECT_LT(std::abs(w - ref.w), 1e-13 * std::abs(ref.w)) << ref.z;
    }
}

TEST(Faddeeva, ErfMatchesHighPrecisionReference) {
    for (const auto& ref : kReferences) {
        const cd e = qoct::special::erf(ref.z);
        EXPECT_LT(std::abs(e - ref.erf), 1e-12 * std::abs(ref.erf)) << ref.z;
    }
}

TEST(Faddeeva, ErfAgreesWithRealErfOnTheRealAxis) {
    for (double x = -5.0; x <= 5.0; x += 0.37)
        EXPECT_NEAR(qoct::special::erf(cd{x, 0.0}).real(), std::erf(x), 1e-15 + 1e-14 * std::abs(std::erf(x)));
}

TEST(Faddeeva, ErfIsOdd) {
    const cd z{0.7, -1.3};
    EXPECT_LT(std::abs(qoct::special::erf(-z) + qoct::special::erf(z)), 1e-15);
}

TEST(Faddeeva, AtZeroIsOne) { EXPECT_EQ(qoct::special::faddeeva(cd{0.0, 0.0}), cd(1.0, 0.0)); }
