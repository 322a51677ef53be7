#include "config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "qoct/engine.hpp"
#include "qoct/io.hpp"
#include "qoct/synthetic.hpp"
#include "qoct/units.hpp"

namespace qoct::cli {

namespace {

/// A YAML mapping together with its dotted path, so every error names the key.
class Section {
public:
    Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        if (node_ && !node_.IsNull() && !node_.IsMap()) fail("", "must be a mapping");
    }

    explicit operator bool() const { return node_ && node_.IsMap(); }

    bool has(const std::string& key) const {
        if (!*this) return false;
        const YAML::Node n = node_[key];
        return n && !n.IsNull();
    }

    Section section(const std::string& key) {
        used_.insert(key);
        return {has(key) ? node_[key] : YAML::Node(), name(key)};
    }

    double number(const std::string& key) {
        used_.insert(key);
        if (!has(key)) fail(key, "is required");
        try {
            const double v = node_[key].as<double>();
            if (!std::isfinite(v)) fail(key, "must be finite");
            return v;
        } catch (const YAML::Exception&) {
            fail(key, "must be a number");
        }
    }

    double number(const std::string& key, double fallback) { return has(key) ? number(key) : (used_.insert(key), fallback); }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) {
            used_.insert(key);
            return std::nullopt;
        }
        return number(key);
    }

    std::string text(const std::string& key) {
        used_.insert(key);
        if (!has(key)) fail(key, "is required");
        if (!node_[key].IsScalar()) fail(key, "must be a string");
        return node_[key].as<std::string>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        return has(key) ? text(key) : (used_.insert(key), fallback);
    }

    bool flag(const std::string& key, bool fallback) {
        used_.insert(key);
        if (!has(key)) return fallback;
        try {
            return node_[key].as<bool>();
        } catch (const YAML::Exception&) {
            fail(key, "must be true or false");
        }
    }

    std::vector<std::string> list(const std::string& key, std::vector<std::string> fallback) {
        used_.insert(key);
        if (!has(key)) return fallback;
        const YAML::Node n = node_[key];
        if (n.IsScalar()) return {n.as<std::string>()};
        if (!n.IsSequence()) fail(key, "must be a string or a list of strings");
        std::vector<std::string> out;
        for (const auto& item : n) out.push_back(item.as<std::string>());
        if (out.empty()) fail(key, "must not be empty");
        return out;
    }

    std::size_t count(const std::string& key) {
        const double v = number(key);
        if (!(v >= 1.0) || v != std::floor(v)) fail(key, "must be a positive integer");
        return static_cast<std::size_t>(v);
    }

    /// Frequency given as `<base>_rad_per_fs` or `<base>_THz` (ordinary frequency).
    std::optional<double> frequency(const std::string& base) {
        const bool rad = has(base + "_rad_per_fs");
        const bool thz = has(base + "_THz");
        if (rad && thz) fail(base + "_rad_per_fs", "conflicts with " + name(base + "_THz"));
        if (rad) return number(base + "_rad_per_fs");
        if (thz) return units::thz_to_rad_per_fs(number(base + "_THz"));
        used_.insert(base + "_rad_per_fs");
        used_.insert(base + "_THz");
        return std::nullopt;
    }

    double required_frequency(const std::string& base) {
        auto v = frequency(base);
        if (!v) fail(base + "_rad_per_fs", "is required (or " + name(base + "_THz") + ")");
        return *v;
    }

    void positive(const std::string& key, double v) const {
        if (!(v > 0.0)) fail(key, "must be > 0");
    }

    /// Rejects keys that were never read; typos in unit suffixes are the usual cause.
    void reject_unknown() const {
        if (!*this) return;
        for (const auto& kv : node_) {
            const std::string key = kv.first.as<std::string>();
            if (!used_.count(key)) fail(key, "is not a recognized key");
        }
    }

    std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError("config: " + (key.empty() ? path_ : name(key)) + " " + what);
    }

private:
    YAML::Node node_;
    std::string path_;
    std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

EfficiencySpec efficiency_spec(Section& s, const std::string& key, const std::filesystem::path& base,
                               std::optional<std::string> fallback = std::nullopt) {
    const std::string v = fallback ? s.text(key, *fallback) : s.text(key);
    EfficiencySpec e;
    if (v == "unit") e.kind = EfficiencySpec::Kind::unit;
    else if (v == "synthetic_visible") e.kind = EfficiencySpec::Kind::synthetic_visible;
    else if (v == "synthetic_infrared") e.kind = EfficiencySpec::Kind::synthetic_infrared;
    else {
        e.kind = EfficiencySpec::Kind::file;
        e.path = resolve(base, v);
        if (!std::filesystem::exists(e.path))
            throw IoError("config: " + s.name(key) + " refers to missing file '" + e.path.string() + "'");
    }
    return e;
}

double omega0_of(Section& s) {
    const bool direct = s.has("omega0_rad_per_fs");
    const bool center = s.has("center_wavelength_nm");
    const bool pump = s.has("pump_wavelength_nm");
    if (int(direct) + int(center) + int(pump) != 1)
        s.fail("omega0_rad_per_fs", "or exactly one of center_wavelength_nm / pump_wavelength_nm is required");
    if (direct) {
        const double w = s.number("omega0_rad_per_fs");
        s.positive("omega0_rad_per_fs", w);
        return w;
    }
    const std::string key = center ? "center_wavelength_nm" : "pump_wavelength_nm";
    const double nm = s.number(key);
    s.positive(key, nm);
    s.number(center ? "pump_wavelength_nm" : "center_wavelength_nm", 0.0);
    s.number("omega0_rad_per_fs", 0.0);
    return units::wavelength_nm_to_rad_per_fs(nm) * (center ? 1.0 : 0.5);
}

BiphotonSpectrum parse_spectrum(Section s) {
    BiphotonSpectrum spec;
    spec.omega0 = omega0_of(s);
    spec.pump_std = s.required_frequency("pump_std");
    s.positive("pump_std_rad_per_fs", spec.pump_std);
    spec.phase_matching_std = s.required_frequency("phase_matching_std");
    s.positive("phase_matching_std_rad_per_fs", spec.phase_matching_std);
    spec.detuning = s.frequency("detuning").value_or(0.0);
    if (spec.detuning < 0.0) s.fail("detuning_rad_per_fs", "must be >= 0");
    s.reject_unknown();
    try {
        spec.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: spectrum: ") + e.what());
    }
    return spec;
}

SampleResponse parse_sample(Section s, double omega0) {
    const double R = s.number("reflectivity");
    if (!(R >= 0.0 && R <= 1.0)) s.fail("reflectivity", "must lie in [0, 1]");
    double delay = 0.0;
    if (s.has("group_delay_fs") && s.has("mirror_position_um")) s.fail("group_delay_fs", "conflicts with mirror_position_um");
    if (s.has("mirror_position_um")) delay = units::mirror_um_to_delay_fs(s.number("mirror_position_um"));
    else delay = s.number("group_delay_fs", 0.0);
    s.number("mirror_position_um", 0.0);

    SampleResponse out;
    Section layer = s.section("layer");
    if (layer) {
        if (s.has("dispersion_fs2")) s.fail("dispersion_fs2", "conflicts with layer");
        MaterialLayer m;
        m.thickness = layer.number("thickness_um");
        layer.positive("thickness_um", m.thickness);
        m.index = layer.number("index");
        if (!(m.index >= 1.0)) layer.fail("index", "must be >= 1");
        m.index_slope = layer.number("index_slope_fs", 0.0);
        layer.reject_unknown();
        out = from_material(m, std::sqrt(R), omega0);
        out.group_delay += delay;
    } else {
        out = SampleResponse::from_reflectivity(R, delay, s.number("dispersion_fs2", 0.0), omega0);
    }
    s.reject_unknown();
    return out;
}

GridSpec parse_grid(Section s) {
    GridSpec g;
    if (!s) return g;
    const bool start = s.has("start_fs");
    const bool center = s.has("center_fs") || s.has("half_width_fs");
    if (start && center) s.fail("start_fs", "conflicts with center_fs/half_width_fs");
    if (start) {
        g.kind = GridSpec::Kind::explicit_start;
        g.start = s.number("start_fs");
        g.step = s.number("step_fs");
        s.positive("step_fs", g.step);
        g.count = s.count("count");
    } else if (center) {
        g.kind = GridSpec::Kind::centered;
        g.center = s.number("center_fs", 0.0);
        g.half_width = s.number("half_width_fs");
        s.positive("half_width_fs", g.half_width);
        g.step = s.number("step_fs", 0.0);
        if (g.step < 0.0) s.fail("step_fs", "must be > 0");
    } else {
        s.number("step_fs", 0.0);
    }
    s.reject_unknown();
    return g;
}

dsp::ZoneConfig parse_zones(Section s) {
    const double pump_nm = s.number("pump_wavelength_nm", 405.0);
    s.positive("pump_wavelength_nm", pump_nm);
    const double cut_nm = s.number("cut_wavelength_nm", 1000.0);
    s.positive("cut_wavelength_nm", cut_nm);
    std::optional<double> right = s.frequency("zone5_right");
    if (s.has("zone5_right_wavelength_nm")) {
        if (right) s.fail("zone5_right_wavelength_nm", "conflicts with zone5_right_rad_per_fs/THz");
        right = units::wavelength_nm_to_rad_per_fs(s.number("zone5_right_wavelength_nm"));
    }
    s.number("zone5_right_wavelength_nm", 0.0);
    s.reject_unknown();
    try {
        return dsp::ZoneConfig::from_wavelengths(pump_nm, cut_nm, right);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: zones: ") + e.what());
    }
}

SimulateSpec parse_simulate(Section s, const std::filesystem::path& base) {
    SimulateSpec out;
    out.cases = s.list("cases", {"oracle"});
    for (const auto& c : out.cases) {
        if (c == "oracle") continue;
        try {
            (void)analytic::parse_regime(c);
        } catch (const InvalidArgument&) {
            s.fail("cases", "entry '" + c + "' is neither 'oracle' nor a regime name");
        }
    }
    const std::string tr = s.text("transcription", "corrected");
    if (tr == "corrected") out.transcription = analytic::Transcription::corrected;
    else if (tr == "published") out.transcription = analytic::Transcription::published;
    else s.fail("transcription", "must be 'corrected' or 'published'");
    out.rel_tol = s.number("rel_tol", out.rel_tol);
    s.positive("rel_tol", out.rel_tol);
    out.abs_tol = s.number("abs_tol", out.abs_tol);
    s.positive("abs_tol", out.abs_tol);
    out.write_terms = s.flag("write_terms", true);
    Section d = s.section("degrade");
    if (d) {
        out.degrade_vis = efficiency_spec(d, "vis_efficiency", base);
        out.degrade_ir = efficiency_spec(d, "ir_efficiency", base);
        d.reject_unknown();
    }
    s.reject_unknown();
    return out;
}

AnalyzeSpec parse_analyze(Section s, const std::filesystem::path& base) {
    if (!s) throw ConfigError("config: analyze is required in analyze mode");
    AnalyzeSpec out;
    auto input = [&](const std::string& key) {
        const auto p = resolve(base, s.text(key));
        if (!std::filesystem::exists(p))
            throw IoError("config: " + s.name(key) + " refers to missing file '" + p.string() + "'");
        return p;
    };
    out.vis_vis = input("vis_vis");
    out.ir_vis = input("ir_vis");
    out.vis_efficiency = efficiency_spec(s, "vis_efficiency", base);
    out.ir_efficiency = efficiency_spec(s, "ir_efficiency", base);
    s.reject_unknown();
    return out;
}

SourceSpec parse_source(Section s, const std::filesystem::path& base) {
    if (!s) throw ConfigError("config: source is required in source mode");
    SourceSpec out;
    if (s.has("m1_spectrum")) {
        const auto p = resolve(base, s.text("m1_spectrum"));
        if (!std::filesystem::exists(p))
            throw IoError("config: " + s.name("m1_spectrum") + " refers to missing file '" + p.string() + "'");
        out.m1_spectrum = p;
    } else {
        s.text("m1_spectrum", "");
    }
    out.vis_efficiency = efficiency_spec(s, "vis_efficiency", base, "unit");
    out.detected_rate = s.number("detected_rate_cps");
    if (out.detected_rate < 0.0) s.fail("detected_rate_cps", "must be >= 0");
    out.pump_power = s.number("pump_power_mW");
    s.positive("pump_power_mW", out.pump_power);
    out.waist = s.number("waist_um", out.waist);
    s.positive("waist_um", out.waist);
    out.bandwidth_thz = s.optional_number("bandwidth_THz");
    if (out.bandwidth_thz) s.positive("bandwidth_THz", *out.bandwidth_thz);
    out.thresholds.overlap_factor = s.number("overlap_factor", out.thresholds.overlap_factor);
    s.positive("overlap_factor", out.thresholds.overlap_factor);
    out.thresholds.waist_factor = s.number("waist_factor", out.thresholds.waist_factor);
    s.positive("waist_factor", out.thresholds.waist_factor);

    Section c = s.section("crystal");
    if (c) {
        source::SourceParams p = source::reference_design();
        p.d_eff = c.number("d_eff_pm_per_V", p.d_eff);
        p.n_p = c.number("n_p", p.n_p);
        p.n_s = c.number("n_s", p.n_s);
        p.n_i = c.number("n_i", p.n_i);
        p.walkoff = c.number("walkoff_deg", p.walkoff * 180.0 / std::numbers::pi) * std::numbers::pi / 180.0;
        p.crystal_length = c.number("length_um", p.crystal_length);
        p.pump_wavelength = c.number("pump_wavelength_nm", p.pump_wavelength);
        p.omega_s = units::wavelength_nm_to_rad_per_fs(c.number("signal_wavelength_nm", 2.0 * p.pump_wavelength));
        p.omega_i = units::wavelength_nm_to_rad_per_fs(c.number("idler_wavelength_nm", 2.0 * p.pump_wavelength));
        p.pump_power = out.pump_power;
        p.waist = out.waist;
        c.reject_unknown();
        try {
            p.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("config: crystal: ") + e.what());
        }
        out.crystal = p;
    }
    s.reject_unknown();
    return out;
}

} // namespace

EfficiencyCurve EfficiencySpec::load(const std::string& label) const {
    switch (kind) {
    case Kind::unit: return EfficiencyCurve::constant(1.0, 1e-3, 50.0, label);
    case Kind::synthetic_visible: return synthetic::visible_detector();
    case Kind::synthetic_infrared: return synthetic::infrared_detector();
    case Kind::file: break;
    }
    return io::read_efficiency(path, label);
}

TauGrid GridSpec::resolve(const BiphotonSpectrum& spec, const SampleResponse& sample) const {
    const double dt = step > 0.0 ? step : engine::max_tau_step(spec);
    switch (kind) {
    case Kind::automatic: {
        TauGrid g = engine::default_tau_grid(spec, sample);
        if (step > 0.0) g = TauGrid::centered(sample.group_delay, 0.5 * g.step * static_cast<double>(g.count - 1), dt);
        return g;
    }
    case Kind::explicit_start: return {start, dt, count};
    case Kind::centered: return TauGrid::centered(center, half_width, dt);
    }
    return {};
}

const char* mode_name(Mode m) {
    switch (m) {
    case Mode::simulate: return "simulate";
    case Mode::analyze: return "analyze";
    case Mode::source: return "source";
    case Mode::selftest: return "selftest";
    }
    return "?";
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir, std::optional<Mode> expected) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: YAML syntax error: ") + e.what());
    }
    if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    Section top(root, "");

    RunConfig cfg;
    cfg.config_dir = base_dir;
    const std::string mode = top.text("mode", expected ? mode_name(*expected) : "simulate");
    if (mode == "simulate") cfg.mode = Mode::simulate;
    else if (mode == "analyze") cfg.mode = Mode::analyze;
    else if (mode == "source") cfg.mode = Mode::source;
    else if (mode == "selftest") cfg.mode = Mode::selftest;
    else top.fail("mode", "must be one of simulate, analyze, source, selftest");
    if (expected && cfg.mode != *expected)
        top.fail("mode", std::string("is '") + mode + "' but the command is '" + mode_name(*expected) + "'");

    cfg.output_dir = resolve(base_dir, top.text("output_dir", "qoct_out"));
    const double threads = top.number("threads", 1.0);
    if (!(threads >= 1.0) || threads != std::floor(threads)) top.fail("threads", "must be a positive integer");
    cfg.threads = static_cast<unsigned>(threads);
    const double pad = top.number("zero_pad", 4.0);
    if (!(pad >= 1.0) || pad != std::floor(pad)) top.fail("zero_pad", "must be a positive integer");
    cfg.zero_pad = static_cast<int>(pad);

    Section spectrum = top.section("spectrum");
    if (spectrum) {
        cfg.spectrum = parse_spectrum(spectrum);
        cfg.have_spectrum = true;
    } else if (cfg.mode == Mode::simulate) {
        top.fail("spectrum", "is required in simulate mode");
    }
    Section sample = top.section("sample");
    if (sample) {
        cfg.sample = parse_sample(sample, cfg.spectrum.omega0);
    } else if (cfg.mode == Mode::simulate) {
        top.fail("sample", "is required in simulate mode");
    }
    cfg.grid = parse_grid(top.section("grid"));
    cfg.zones = parse_zones(top.section("zones"));

    Section sim = top.section("simulate");
    Section ana = top.section("analyze");
    Section src = top.section("source");
    if (cfg.mode == Mode::simulate) cfg.simulate = parse_simulate(sim, base_dir);
    if (cfg.mode == Mode::analyze) cfg.analyze = parse_analyze(ana, base_dir);
    if (cfg.mode == Mode::source) cfg.source = parse_source(src, base_dir);
    top.reject_unknown();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<Mode> expected) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."), expected);
}

} // namespace qoct::cli
