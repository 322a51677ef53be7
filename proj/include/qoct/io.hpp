#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qoct/dsp.hpp"
#include "qoct/efficiency.hpp"
#include "qoct/errors.hpp"
#include "qoct/interferogram.hpp"
#include "qoct/units.hpp"

/// Plain CSV formats. Lines starting with '#' carry `key=value` metadata; the
/// first other line is a header; numbers are written with 17 significant digits
/// so a write/read cycle is exact.
namespace qoct::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline double parse_double(std::string_view s, const std::string& where) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw IoError(where + ": cannot parse '" + std::string(s) + "' as a number");
    return v;
}

} // namespace detail

struct Table {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t j = 0; j < columns.size(); ++j)
            if (columns[j] == name) return j;
        throw IoError("missing column '" + std::string(name) + "'");
    }

    std::vector<double> values(std::string_view name) const {
        const std::size_t j = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[j]);
        return out;
    }

    double meta_number(const std::string& key, double fallback) const {
        auto it = meta.find(key);
        if (it == meta.end()) return fallback;
        return detail::parse_double(it->second, "metadata '" + key + "'");
    }
};

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline Table parse_table(std::istream& in, const std::string& name = "<stream>") {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view s = detail::trim(line);
        if (s.empty()) continue;
        if (s.front() == '#') {
            const std::string_view body = detail::trim(s.substr(1));
            const std::size_t eq = body.find('=');
            if (eq != std::string_view::npos)
                t.meta[std::string(detail::trim(body.substr(0, eq)))] = std::string(detail::trim(body.substr(eq + 1)));
            continue;
        }
        const auto fields = detail::split(s);
        if (t.columns.empty()) {
            for (auto f : fields) t.columns.emplace_back(f);
            continue;
        }
        const std::string where = name + ":" + std::to_string(lineno);
        if (fields.size() != t.columns.size())
            throw IoError(where + ": expected " + std::to_string(t.columns.size()) + " fields, found " +
                          std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) row.push_back(detail::parse_double(f, where));
        t.rows.push_back(std::move(row));
    }
    if (t.columns.empty()) throw IoError(name + ": no header line");
    return t;
}

inline Table read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return parse_table(in, path.string());
}

inline void write_table(std::ostream& out, const Table& t) {
    for (const auto& [k, v] : t.meta) out << "# " << k << '=' << v << '\n';
    for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << t.columns[j];
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << format_number(r[j]);
        out << '\n';
    }
}

inline void write_table(const std::filesystem::path& path, const Table& t) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_table(out, t);
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

// --- interferograms: tau_fs,value ---

inline Table to_table(const Interferogram& ig) {
    Table t;
    if (!ig.label.empty()) t.meta["label"] = ig.label;
    t.columns = {"tau_fs", "value"};
    t.rows.reserve(ig.size());
    for (std::size_t i = 0; i < ig.size(); ++i) t.rows.push_back({ig.tau_at(i), ig.values[i]});
    return t;
}

inline Interferogram interferogram_from_table(const Table& t) {
    const auto tau = t.values("tau_fs");
    const auto val = t.values("value");
    auto it = t.meta.find("label");
    try {
        return Interferogram::from_samples(tau, val, it == t.meta.end() ? std::string{} : it->second);
    } catch (const GridMismatch&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw IoError(e.what());
    }
}

inline void write_interferogram(const std::filesystem::path& path, const Interferogram& ig) {
    write_table(path, to_table(ig));
}

inline Interferogram read_interferogram(const std::filesystem::path& path) {
    return interferogram_from_table(read_table(path));
}

/// Term-resolved series: tau_fs,Mc,M0,M1,M2,M.
inline void write_terms(const std::filesystem::path& path, const TermSeries& s) {
    Table t;
    t.columns = {"tau_fs", "Mc", "M0", "M1", "M2", "M"};
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const TermValues& v = s.values[i];
        t.rows.push_back({s.grid.at(i), v.constant, v.hom, v.single_photon, v.pump, v.total()});
    }
    write_table(path, t);
}

// --- efficiency curves: wavelength_nm,efficiency ---

inline EfficiencyCurve read_efficiency(const std::filesystem::path& path, std::string label = {}) {
    const Table t = read_table(path);
    try {
        return EfficiencyCurve::from_wavelengths(t.values("wavelength_nm"), t.values("efficiency"),
                                                 label.empty() ? path.stem().string() : std::move(label));
    } catch (const InvalidArgument& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

inline void write_efficiency(const std::filesystem::path& path, const EfficiencyCurve& eta) {
    Table t;
    t.columns = {"wavelength_nm", "efficiency"};
    const auto& w = eta.omega();
    const auto& e = eta.eta();
    for (std::size_t k = w.size(); k-- > 0;) t.rows.push_back({units::rad_per_fs_to_wavelength_nm(w[k]), e[k]});
    write_table(path, t);
}

// --- spectra: omega_rad_per_fs,freq_THz,re,im,abs ---

inline Table to_table(const dsp::ComplexSpectrum& s) {
    Table t;
    if (!s.label.empty()) t.meta["label"] = s.label;
    t.meta["zero_pad_factor"] = std::to_string(s.zero_pad_factor);
    t.meta["source_size"] = std::to_string(s.source_size);
    t.meta["tau_start_fs"] = format_number(s.tau_start);
    t.meta["tau_step_fs"] = format_number(s.tau_step);
    t.columns = {"omega_rad_per_fs", "freq_THz", "re", "im", "abs"};
    t.rows.reserve(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double w = s.omega_at(k);
        t.rows.push_back({w, units::rad_per_fs_to_thz(w), s.values[k].real(), s.values[k].imag(), std::abs(s.values[k])});
    }
    return t;
}

inline dsp::ComplexSpectrum spectrum_from_table(const Table& t) {
    const auto w = t.values("omega_rad_per_fs");
    const auto re = t.values("re");
    const auto im = t.values("im");
    if (w.size() < 2) throw IoError("spectrum needs at least two bins");
    dsp::ComplexSpectrum s;
    s.omega_start = w.front();
    s.omega_step = (w.back() - w.front()) / static_cast<double>(w.size() - 1);
    if (!(s.omega_step > 0.0)) throw IoError("spectrum frequencies must increase");
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (std::abs(w[k] - s.omega_at(k)) > 1e-6 * s.omega_step) throw IoError("spectrum grid is not uniform");
        s.values.emplace_back(re[k], im[k]);
    }
    auto it = t.meta.find("label");
    if (it != t.meta.end()) s.label = it->second;
    s.zero_pad_factor = static_cast<int>(t.meta_number("zero_pad_factor", 1.0));
    s.source_size = static_cast<std::size_t>(t.meta_number("source_size", static_cast<double>(w.size())));
    s.tau_start = t.meta_number("tau_start_fs", 0.0);
    s.tau_step = t.meta_number("tau_step_fs", 0.0);
    return s;
}

inline void write_spectrum(const std::filesystem::path& path, const dsp::ComplexSpectrum& s) {
    write_table(path, to_table(s));
}

inline dsp::ComplexSpectrum read_spectrum(const std::filesystem::path& path) {
    return spectrum_from_table(read_table(path));
}

} // namespace qoct::io
