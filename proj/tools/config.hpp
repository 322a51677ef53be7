#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qoct/analytic.hpp"
#include "qoct/dsp.hpp"
#include "qoct/efficiency.hpp"
#include "qoct/interferogram.hpp"
#include "qoct/samples.hpp"
#include "qoct/source.hpp"
#include "qoct/spectra.hpp"

namespace qoct::cli {

/// Invalid or incomplete configuration; the message names the offending key.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

enum class Mode { simulate, analyze, source, selftest };

/// Where an efficiency curve comes from: a CSV file, unit efficiency, or one
/// of the built-in synthetic detectors.
struct EfficiencySpec {
    enum class Kind { file, unit, synthetic_visible, synthetic_infrared } kind = Kind::unit;
    std::filesystem::path path;

    EfficiencyCurve load(const std::string& label) const;
};

struct GridSpec {
    enum class Kind { automatic, explicit_start, centered } kind = Kind::automatic;
    double start = 0.0; // fs
    double center = 0.0;
    double half_width = 0.0;
    double step = 0.0;
    std::size_t count = 0;

    TauGrid resolve(const BiphotonSpectrum& spec, const SampleResponse& sample) const;
};

struct SimulateSpec {
    std::vector<std::string> cases{"oracle"}; // regime names or "oracle"
    analytic::Transcription transcription = analytic::Transcription::corrected;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    bool write_terms = true;
    std::optional<EfficiencySpec> degrade_vis;
    std::optional<EfficiencySpec> degrade_ir;
};

struct AnalyzeSpec {
    std::filesystem::path vis_vis;
    std::filesystem::path ir_vis;
    EfficiencySpec vis_efficiency;
    EfficiencySpec ir_efficiency;
};

struct SourceSpec {
    std::optional<std::filesystem::path> m1_spectrum;
    EfficiencySpec vis_efficiency;
    double detected_rate = 0.0; // cps
    double pump_power = 1.0;    // mW
    double waist = 5.7;         // um
    std::optional<double> bandwidth_thz; // integral bandwidth, ordinary THz
    std::optional<source::SourceParams> crystal;
    source::ValidityThresholds thresholds;
};

struct RunConfig {
    Mode mode = Mode::simulate;
    std::filesystem::path config_dir;
    std::filesystem::path output_dir = "qoct_out";
    unsigned threads = 1;
    int zero_pad = 4;

    BiphotonSpectrum spectrum;
    bool have_spectrum = false;
    SampleResponse sample;
    GridSpec grid;
    dsp::ZoneConfig zones;

    SimulateSpec simulate;
    AnalyzeSpec analyze;
    SourceSpec source;
};

const char* mode_name(Mode m);

/// Parses a YAML run configuration. Relative paths are resolved against the
/// directory of the file. Every parameter is validated before returning.
/// `expected`, when given, is the subcommand; a conflicting `mode` key is an error.
RunConfig load_config(const std::filesystem::path& path, std::optional<Mode> expected = std::nullopt);
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                       std::optional<Mode> expected = std::nullopt);

} // namespace qoct::cli
