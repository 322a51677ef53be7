#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "qoct/analytic.hpp"
#include "qoct/dsp.hpp"
#include "qoct/engine.hpp"
#include "qoct/io.hpp"
#include "qoct/synthetic.hpp"

using namespace qoct;
namespace fs = std::filesystem;

namespace {

class IoTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qoct_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path path(const std::string& name) const { return dir_ / name; }

    void write_text(const std::string& name, const std::string& text) const {
        std::ofstream out(path(name));
        out << text;
    }

    fs::path dir_;
};

Interferogram small_case1() {
    const auto spec = fixtures::degenerate(0.01, 0.2);
    const auto h = fixtures::mirror(0.5, 3.0);
    const TauGrid g = TauGrid::centered(3.0, 40.0, engine::max_tau_step(spec));
    return analytic::interferogram(analytic::Regime::degenerate, g, spec, h);
}

} // namespace

TEST_F(IoTest, InterferogramRoundTripIsExact) {
    const Interferogram ig = small_case1();
    io::write_interferogram(path("ig.csv"), ig);
    const Interferogram back = io::read_interferogram(path("ig.csv"));
    ASSERT_EQ(back.size(), ig.size());
    EXPECT_EQ(back.label, ig.label);
    EXPECT_EQ(back.tau_start, ig.tau_start);
    EXPECT_NEAR(back.tau_step, ig.tau_step, 1e-15 * ig.tau_step);
    for (std::size_t i = 0; i < ig.size(); ++i) EXPECT_EQ(back.values[i], ig.values[i]);
}

TEST_F(IoTest, HeaderAndCommentsAreTolerated) {
    write_text("a.csv", "# measured on bench\n\ntau_fs, value\n-1.0, 0.25\r\n0.0,+0.5\n1.0,0.75\n");
    const Interferogram ig = io::read_interferogram(path("a.csv"));
    EXPECT_EQ(ig.size(), 3u);
    EXPECT_DOUBLE_EQ(ig.tau_step, 1.0);
    EXPECT_DOUBLE_EQ(ig.values[1], 0.5);
}

TEST_F(IoTest, MalformedFilesRaiseIoError) {
    EXPECT_THROW(io::read_interferogram(path("missing.csv")), IoError);
    write_text("bad.csv", "tau_fs,value\n0,1\n1,abc\n");
    EXPECT_THROW(io::read_interferogram(path("bad.csv")), IoError);
    write_text("short.csv", "tau_fs,value\n0,1\n1\n");
    EXPECT_THROW(io::read_interferogram(path("short.csv")), IoError);
    write_text("cols.csv", "delay,value\n0,1\n1,2\n");
    EXPECT_THROW(io::read_interferogram(path("cols.csv")), IoError);
    write_text("empty.csv", "");
    EXPECT_THROW(io::read_interferogram(path("empty.csv")), IoError);
    write_text("one.csv", "tau_fs,value\n0,1\n");
    EXPECT_THROW(io::read_interferogram(path("one.csv")), IoError);
}

TEST_F(IoTest, NonUniformGridIsAGridMismatch) {
    write_text("nu.csv", "tau_fs,value\n0,1\n1,2\n2.5,3\n");
    EXPECT_THROW(io::read_interferogram(path("nu.csv")), GridMismatch);
}

TEST_F(IoTest, WritingToMissingDirectoryFails) {
    EXPECT_THROW(io::write_interferogram(path("no/such/dir/x.csv"), small_case1()), IoError);
}

TEST_F(IoTest, SpectrumRoundTripKeepsGridAndMetadata) {
    const auto s = dsp::fft_spectrum(small_case1(), {2});
    io::write_spectrum(path("s.csv"), s);
    const auto back = io::read_spectrum(path("s.csv"));
    ASSERT_EQ(back.size(), s.size());
    EXPECT_TRUE(back.same_grid(s));
    EXPECT_EQ(back.zero_pad_factor, 2);
    EXPECT_EQ(back.source_size, s.source_size);
    EXPECT_EQ(back.tau_step, s.tau_step);
    EXPECT_NEAR(back.omega_step, s.omega_step, 1e-14 * s.omega_step);
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(back.values[k], s.values[k]);
    const auto t = io::read_table(path("s.csv"));
    EXPECT_EQ(t.columns.size(), 5u);
    EXPECT_NEAR(t.rows[7][1], units::rad_per_fs_to_thz(t.rows[7][0]), 1e-12);
}

TEST_F(IoTest, EfficiencyCurveRoundTrip) {
    const auto eta = synthetic::visible_detector();
    io::write_efficiency(path("vis.csv"), eta);
    const auto back = io::read_efficiency(path("vis.csv"));
    EXPECT_EQ(back.label(), "vis");
    ASSERT_EQ(back.omega().size(), eta.omega().size());
    for (double w = eta.omega_min(); w < eta.omega_max(); w += 0.01) EXPECT_NEAR(back(w), eta(w), 1e-12);
}

TEST_F(IoTest, EfficiencyFileValidation) {
    write_text("e.csv", "wavelength_nm,efficiency\n500,0.5\n600,1.2\n");
    EXPECT_THROW(io::read_efficiency(path("e.csv")), IoError);
    write_text("f.csv", "wavelength_nm,eff\n500,0.5\n600,0.2\n");
    EXPECT_THROW(io::read_efficiency(path("f.csv")), IoError);
}

TEST_F(IoTest, TermSeriesColumns) {
    const auto spec = fixtures::degenerate(0.01, 0.2);
    const auto h = fixtures::mirror(0.5);
    const TauGrid g = TauGrid::centered(0.0, 5.0, engine::max_tau_step(spec));
    const auto s = analytic::evaluate_terms(analytic::Regime::degenerate, g, spec, h);
    io::write_terms(path("terms.csv"), s);
    const auto t = io::read_table(path("terms.csv"));
    ASSERT_EQ(t.rows.size(), g.count);
    const auto m = t.values("M");
    const auto total = s.total();
    for (std::size_t i = 0; i < g.count; ++i) EXPECT_EQ(m[i], total.values[i]);
}

TEST(IoFormat, NumbersRoundTrip) {
    for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 1.7976931348623157e308}) {
        std::istringstream in("x\n" + io::format_number(v) + "\n");
        EXPECT_EQ(io::parse_table(in).rows[0][0], v);
    }
}
