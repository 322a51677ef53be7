#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <yaml-cpp/exceptions.h>

#include "commands.hpp"
#include "config.hpp"

namespace {

enum Exit : int { ok = 0, selftest_failed = 1, config_error = 2, no_convergence = 3, io_error = 4 };

struct Flags {
    std::string config;
    std::string out;
    unsigned threads = 0;
    int zero_pad = 0;
};

void add_flags(CLI::App* cmd, Flags& f, bool needs_config) {
    auto* c = cmd->add_option("--config", f.config, "YAML run configuration")->check(CLI::ExistingFile);
    if (needs_config) c->required();
    cmd->add_option("--out", f.out, "output directory (overrides output_dir)");
    cmd->add_option("--threads", f.threads, "worker threads for delay-parallel work")->check(CLI::PositiveNumber);
    cmd->add_option("--zero-pad", f.zero_pad, "FFT zero-padding factor")->check(CLI::PositiveNumber);
}

qoct::cli::RunConfig configure(const Flags& f, qoct::cli::Mode mode) {
    auto cfg = qoct::cli::load_config(f.config, mode);
    if (!f.out.empty()) cfg.output_dir = f.out;
    if (f.threads > 0) cfg.threads = f.threads;
    if (f.zero_pad > 0) cfg.zero_pad = f.zero_pad;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qoct: two-photon Michelson interferogram simulation and analysis"};
    app.require_subcommand(1);
    Flags flags;
    auto* sim = app.add_subcommand("simulate", "compute interferograms from closed forms and/or quadrature");
    auto* ana = app.add_subcommand("analyze", "separate, correct and fit measured VIS-VIS / IR-VIS interferograms");
    auto* src = app.add_subcommand("source", "estimate generation rate and spectral coincidence efficiency");
    auto* self = app.add_subcommand("selftest", "run the acceptance criteria");
    add_flags(sim, flags, true);
    add_flags(ana, flags, true);
    add_flags(src, flags, true);
    add_flags(self, flags, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::config_error;
    }

    using qoct::cli::Mode;
    try {
        if (sim->parsed()) qoct::cli::simulate(configure(flags, Mode::simulate), std::cerr);
        else if (ana->parsed()) qoct::cli::analyze(configure(flags, Mode::analyze), std::cerr);
        else if (src->parsed()) qoct::cli::source(configure(flags, Mode::source), std::cerr);
        else {
            unsigned threads = flags.threads;
            if (threads == 0 && !flags.config.empty()) threads = configure(flags, Mode::selftest).threads;
            if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
            return qoct::cli::selftest(threads, std::cout) == 0 ? Exit::ok : Exit::selftest_failed;
        }
    } catch (const qoct::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::no_convergence;
    } catch (const qoct::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::io_error;
    } catch (const qoct::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::config_error;
    } catch (const YAML::Exception& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return Exit::config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return Exit::ok;
}
