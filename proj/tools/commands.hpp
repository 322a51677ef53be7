#pragma once

#include <ostream>

#include "config.hpp"

namespace qoct::cli {

/// Each command writes its files under cfg.output_dir and reports progress on `log`.
void simulate(const RunConfig& cfg, std::ostream& log);
void analyze(const RunConfig& cfg, std::ostream& log);
void source(const RunConfig& cfg, std::ostream& log);
/// Returns the number of failed acceptance criteria.
int selftest(unsigned threads, std::ostream& out);

} // namespace qoct::cli
