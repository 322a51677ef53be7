#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "criteria.hpp"
#include "qoct/analytic.hpp"
#include "qoct/bandwidth.hpp"
#include "qoct/dsp.hpp"
#include "qoct/engine.hpp"
#include "qoct/fit.hpp"
#include "qoct/io.hpp"
#include "qoct/source.hpp"
#include "qoct/units.hpp"

namespace qoct::cli {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

ordered_json frequency(double rad_per_fs) {
    return {{"rad_per_fs", rad_per_fs}, {"THz", units::rad_per_fs_to_thz(rad_per_fs)}};
}

ordered_json spectrum_json(const BiphotonSpectrum& s) {
    return {{"omega0", frequency(s.omega0)},
            {"center_wavelength_nm", units::rad_per_fs_to_wavelength_nm(s.omega0)},
            {"pump_std", frequency(s.pump_std)},
            {"phase_matching_std", frequency(s.phase_matching_std)},
            {"detuning", frequency(s.detuning)}};
}

ordered_json sample_json(const SampleResponse& h) {
    return {{"reflectivity", h.reflectivity()},
            {"group_delay_fs", h.group_delay},
            {"mirror_position_um", units::delay_fs_to_mirror_um(h.group_delay)},
            {"dispersion_fs2", h.dispersion}};
}

ordered_json grid_json(const TauGrid& g) {
    return {{"start_fs", g.start}, {"step_fs", g.step}, {"count", g.count}};
}

ordered_json fit_json(const dsp::GaussianPeakFit& f) {
    return {{"center", f.center},
            {"std", f.std},
            {"fwhm", f.fwhm()},
            {"amplitude", f.amplitude},
            {"relative_residual", f.relative_residual()},
            {"gaussian_shape", dsp::gaussian_shape(f)},
            {"iterations", f.iterations}};
}

void write_json(const fs::path& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void prepare_output(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

double sup_abs(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double sup_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

// Gaussian fit of |X| over lo <= omega <= hi.
dsp::GaussianPeakFit spectral_fit(const dsp::ComplexSpectrum& s, double lo, double hi) {
    std::vector<double> x, y;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double w = s.omega_at(k);
        if (w < lo || w > hi) continue;
        x.push_back(w);
        y.push_back(std::abs(s.values[k]));
    }
    return dsp::fit_gaussian(x, y);
}

ordered_json spectral_fit_json(const dsp::GaussianPeakFit& f) {
    return {{"center", frequency(f.center)},
            {"std", frequency(f.std)},
            {"fwhm", frequency(f.fwhm())},
            {"integral_bandwidth",
             frequency(dsp::bandwidth_convert(f.std, dsp::BandwidthMeasure::std, dsp::BandwidthMeasure::integral))},
            {"relative_residual", f.relative_residual()},
            {"gaussian_shape", dsp::gaussian_shape(f)}};
}

} // namespace

void simulate(const RunConfig& cfg, std::ostream& log) {
    const auto& spec = cfg.spectrum;
    const auto& h = cfg.sample;
    const TauGrid grid = cfg.grid.resolve(spec, h);
    engine::check_nyquist(grid, spec);
    prepare_output(cfg.output_dir);

    ordered_json meta;
    meta["command"] = "simulate";
    meta["spectrum"] = spectrum_json(spec);
    meta["sample"] = sample_json(h);
    meta["grid"] = grid_json(grid);
    const auto guards = analytic::regime_guards(spec, h);
    meta["regime_guards"] = {{"cancellation", guards.cancellation},
                             {"narrowband", guards.narrowband},
                             {"significance", guards.significance}};
    meta["transcription"] = cfg.simulate.transcription == analytic::Transcription::corrected ? "corrected" : "published";
    ordered_json warnings = ordered_json::array();
    ordered_json files = ordered_json::array();

    std::vector<std::pair<std::string, Interferogram>> totals;
    for (const auto& name : cfg.simulate.cases) {
        TermSeries series;
        if (name == "oracle") {
            log << "oracle quadrature on " << grid.count << " delays\n";
            engine::Options eo;
            eo.rel_tol = cfg.simulate.rel_tol;
            eo.abs_tol = cfg.simulate.abs_tol;
            eo.threads = static_cast<int>(cfg.threads);
            series = engine::evaluate_terms(grid, spec, h, eo);
        } else {
            const auto regime = analytic::parse_regime(name);
            for (auto& w : analytic::regime_warnings(regime, spec, h)) warnings.push_back(name + ": " + w);
            log << "closed form " << name << " on " << grid.count << " delays\n";
            series = analytic::evaluate_terms(regime, grid, spec, h, cfg.simulate.transcription);
        }
        auto total = series.total(name);
        io::write_interferogram(cfg.output_dir / (name + ".csv"), total);
        files.push_back(name + ".csv");
        if (cfg.simulate.write_terms) {
            io::write_terms(cfg.output_dir / (name + "_terms.csv"), series);
            files.push_back(name + "_terms.csv");
        }
        totals.emplace_back(name, std::move(total));
    }

    auto oracle = std::find_if(totals.begin(), totals.end(), [](const auto& t) { return t.first == "oracle"; });
    if (oracle != totals.end()) {
        ordered_json dev = ordered_json::object();
        const double scale = sup_abs(oracle->second.values);
        for (const auto& [name, ig] : totals) {
            if (name == "oracle") continue;
            const double d = sup_abs(ig.values, oracle->second.values);
            dev[name] = {{"sup_abs", d}, {"sup_relative", scale > 0.0 ? d / scale : 0.0}};
        }
        meta["oracle_deviation"] = dev;
    }

    if (cfg.simulate.degrade_vis) {
        const auto vis = cfg.simulate.degrade_vis->load("vis");
        const auto ir = cfg.simulate.degrade_ir->load("ir");
        const auto& truth = totals.front().second;
        io::write_interferogram(cfg.output_dir / "vis_vis.csv", dsp::degrade(truth, vis, ir, cfg.zones, dsp::Channel::vis_vis));
        io::write_interferogram(cfg.output_dir / "ir_vis.csv", dsp::degrade(truth, vis, ir, cfg.zones, dsp::Channel::ir_vis));
        io::write_efficiency(cfg.output_dir / "vis_efficiency.csv", vis);
        io::write_efficiency(cfg.output_dir / "ir_efficiency.csv", ir);
        for (const char* f : {"vis_vis.csv", "ir_vis.csv", "vis_efficiency.csv", "ir_efficiency.csv"}) files.push_back(f);
        meta["degraded_from"] = totals.front().first;
    }

    meta["warnings"] = warnings;
    meta["files"] = files;
    write_json(cfg.output_dir / "metadata.json", meta);
    for (const auto& w : warnings) log << "warning: " << w.get<std::string>() << '\n';
    log << "wrote " << files.size() + 1 << " files to " << cfg.output_dir.string() << '\n';
}

void analyze(const RunConfig& cfg, std::ostream& log) {
    const auto vv = io::read_interferogram(cfg.analyze.vis_vis);
    const auto iv = io::read_interferogram(cfg.analyze.ir_vis);
    if (vv.size() != iv.size() || std::abs(vv.tau_start - iv.tau_start) > 1e-9 * std::max(1.0, vv.tau_step) ||
        std::abs(vv.tau_step - iv.tau_step) > 1e-9 * vv.tau_step)
        throw GridMismatch("VIS-VIS and IR-VIS interferograms are on different delay grids");
    const auto eta_vis = cfg.analyze.vis_efficiency.load("vis");
    const auto eta_ir = cfg.analyze.ir_efficiency.load("ir");
    prepare_output(cfg.output_dir);

    const dsp::FftOptions fo{cfg.zero_pad, dsp::Window::none};
    const auto sv = dsp::fft_spectrum(vv, fo);
    const auto si = dsp::fft_spectrum(iv, fo);
    io::write_spectrum(cfg.output_dir / "spectrum_vis_vis.csv", sv);
    io::write_spectrum(cfg.output_dir / "spectrum_ir_vis.csv", si);

    const auto c0 = dsp::correct_and_combine(sv, si, eta_vis, eta_ir, cfg.zones, Term::hom);
    const auto c1 = dsp::correct_and_combine(sv, si, eta_vis, eta_ir, cfg.zones, Term::single_photon);
    io::write_spectrum(cfg.output_dir / "spectrum_M0.csv", c0);
    io::write_spectrum(cfg.output_dir / "spectrum_M1.csv", c1);

    const auto m0 = dsp::extract_term(c0);
    const auto m1 = dsp::extract_term(c1, dsp::Baseline::none);
    const auto m1_env = dsp::envelope(m1);
    io::write_interferogram(cfg.output_dir / "M0.csv", m0);
    io::write_interferogram(cfg.output_dir / "M1.csv", m1);
    io::write_interferogram(cfg.output_dir / "M1_envelope.csv", m1_env);

    ordered_json report;
    ordered_json warnings = ordered_json::array();
    report["command"] = "analyze";
    report["inputs"] = {{"vis_vis", cfg.analyze.vis_vis.filename().string()},
                        {"ir_vis", cfg.analyze.ir_vis.filename().string()},
                        {"vis_efficiency", eta_vis.label()},
                        {"ir_efficiency", eta_ir.label()}};
    report["grid"] = grid_json({vv.tau_start, vv.tau_step, vv.size()});
    report["zero_pad_factor"] = cfg.zero_pad;
    report["zones"] = {{"omega_p", frequency(cfg.zones.omega_p)}, {"delta_c", frequency(cfg.zones.delta_c)}};

    const auto f0 = dsp::fit_gaussian(m0);
    const auto f1 = dsp::fit_gaussian(m1_env);
    report["M0"] = fit_json(f0);
    report["M0"]["fwhm_displacement_um"] = dsp::displacement_fwhm(f0.fwhm());
    report["M1_envelope"] = fit_json(f1);
    report["M1_envelope"]["fwhm_displacement_um"] = dsp::displacement_fwhm(f1.fwhm());
    report["fwhm_ratio_M0_to_M1"] = f0.fwhm() / f1.fwhm();
    if (!dsp::gaussian_shape(f1)) warnings.push_back("M1 envelope is not a single Gaussian (two-lobe or distorted)");

    const auto b1 = dsp::zone_boundaries(cfg.zones, Term::single_photon);
    const auto s1 = spectral_fit(c1, b1.front(), b1.back());
    report["M1_spectrum"] = spectral_fit_json(s1);

    // The pump-interference peak near omega_p sets the path-jitter broadening.
    ordered_json corrected = nullptr;
    ordered_json pump_peak = nullptr;
    double resolution_fwhm = s1.fwhm();
    try {
        const auto s2 = spectral_fit(sv, 0.75 * cfg.zones.omega_p, 1.25 * cfg.zones.omega_p);
        pump_peak = spectral_fit_json(s2);
        const double c = dsp::broadening_correction(s1.fwhm(), s2.fwhm());
        corrected = frequency(c);
        resolution_fwhm = c;
    } catch (const Error& e) {
        warnings.push_back(std::string("no broadening correction: ") + e.what());
    }
    report["M2_spectrum"] = pump_peak;
    report["M1_spectrum"]["corrected_fwhm"] = corrected;
    report["axial_resolution_um"] = {{"from_spectrum", dsp::axial_resolution(resolution_fwhm)},
                                     {"from_M0_displacement", dsp::displacement_fwhm(f0.fwhm())}};
    report["warnings"] = warnings;
    write_json(cfg.output_dir / "report.json", report);
    for (const auto& w : warnings) log << "warning: " << w.get<std::string>() << '\n';
    log << "M0 FWHM " << f0.fwhm() << " fs, M1 envelope FWHM " << f1.fwhm() << " fs\n";
}

void source(const RunConfig& cfg, std::ostream& log) {
    const auto& sc = cfg.source;
    dsp::ComplexSpectrum m1;
    double omega_p = cfg.zones.omega_p;
    if (sc.m1_spectrum) {
        m1 = io::read_spectrum(*sc.m1_spectrum);
    } else if (cfg.have_spectrum) {
        // Gaussian M1 peaks predicted by the spectral layout.
        const auto& spec = cfg.spectrum;
        omega_p = 2.0 * spec.omega0;
        const auto layout = analytic::spectral_layout(analytic::Regime::detuned, spec, SampleResponse{});
        m1.label = "M1";
        m1.omega_step = 1e-3;
        m1.omega_start = 0.0;
        m1.values.assign(static_cast<std::size_t>(std::ceil(omega_p / m1.omega_step)) + 1, {0.0, 0.0});
        for (const auto& p : layout) {
            if (p.term != Term::single_photon) continue;
            for (std::size_t k = 0; k < m1.size(); ++k) {
                const double x = (m1.omega_at(k) - p.center) / p.std;
                m1.values[k] += std::exp(-0.5 * x * x);
            }
        }
    } else {
        throw ConfigError("config: source.m1_spectrum or a spectrum section is required in source mode");
    }
    const auto eta = sc.vis_efficiency.load("vis");
    prepare_output(cfg.output_dir);

    const double generated_per_mw = source::estimate_generated_rate(m1, eta, sc.detected_rate, sc.pump_power, omega_p);
    const double b_rad = sc.bandwidth_thz ? units::thz_to_rad_per_fs(*sc.bandwidth_thz) : source::bandwidth_from_waist(sc.waist);
    const double b_thz = units::rad_per_fs_to_thz(b_rad);
    const double s0 = source::spectral_coincidence_efficiency(generated_per_mw, b_thz);

    source::SourceParams params = sc.crystal.value_or(source::reference_design());
    params.waist = sc.waist;
    params.pump_power = sc.pump_power;
    const auto model = source::spectral_rate_S0(params, sc.thresholds);

    ordered_json report;
    report["S0_per_THz_mW"] = s0;
    report["B_THz"] = b_thz;
    report["R_cps"] = generated_per_mw * sc.pump_power;
    report["validity_warnings"] = model.warnings;
    report["R_generated_per_mW"] = generated_per_mw;
    report["detected_rate_cps"] = sc.detected_rate;
    report["pump_power_mW"] = sc.pump_power;
    report["bandwidth"] = {
        {"integral", frequency(b_rad)},
        {"fwhm", frequency(dsp::bandwidth_convert(b_rad, dsp::BandwidthMeasure::integral, dsp::BandwidthMeasure::fwhm))},
        {"source", sc.bandwidth_thz ? "config" : "waist"},
        {"waist_um", sc.waist}};
    report["model"] = {{"S0_per_THz_mW", model.per_thz_per_mw},
                       {"S0_per_rad_per_fs", model.per_rad_per_fs},
                       {"R_cps", source::pair_rate(model.per_thz, b_thz)},
                       {"d_eff_pm_per_V", params.d_eff},
                       {"n_p", params.n_p},
                       {"n_s", params.n_s},
                       {"n_i", params.n_i},
                       {"walkoff_deg", params.walkoff * 180.0 / std::numbers::pi},
                       {"effective_length_um", params.effective_length()},
                       {"crystal_length_um", params.crystal_length}};
    report["units"] = {{"S0", "cps per ordinary THz per mW"}, {"B", "ordinary THz unless labelled rad_per_fs"}};
    write_json(cfg.output_dir / "source_report.json", report);
    for (const auto& w : model.warnings) log << "warning: " << w << '\n';
    log << "R_generated/P " << generated_per_mw << " cps/mW, S0/P " << s0 << " cps/(THz mW)\n";
}

int selftest(unsigned threads, std::ostream& out) {
    acceptance::RunOptions opt;
    opt.threads = threads;
    return acceptance::run(out, opt);
}

} // namespace qoct::cli
