#include "phiotdr/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "phiotdr/errors.hpp"

namespace phiotdr {

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& value, const std::string& key,
                    const std::string& context) {
    if (value == "inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(context + ": value of '" + key + "' is not a number: " + value);
    }
}

long long parse_int(const std::string& value, const std::string& key,
                    const std::string& context) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(context + ": value of '" + key + "' is not an integer: " + value);
    }
}

std::uint64_t parse_u64(const std::string& value, const std::string& key,
                        const std::string& context) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(context + ": value of '" + key + "' is not an unsigned integer: " +
                          value);
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

// "lin:<start>:<stop>:<count>" (inclusive ends) or a comma list of values
std::vector<double> parse_grid(const std::string& value, const std::string& key,
                               const std::string& context) {
    std::vector<double> grid;
    if (value.rfind("lin:", 0) == 0) {
        const auto parts = split(value.substr(4), ':');
        if (parts.size() != 3)
            throw ConfigError(context + ": '" + key + "' expects lin:start:stop:count");
        const double a = parse_double(parts[0], key, context);
        const double b = parse_double(parts[1], key, context);
        const long long n = parse_int(parts[2], key, context);
        if (n < 2) throw ConfigError(context + ": grid needs at least 2 points");
        for (long long i = 0; i < n; ++i) grid.push_back(a + (b - a) * i / double(n - 1));
    } else {
        for (const auto& item : split(value, ','))
            grid.push_back(parse_double(item, key, context));
        if (grid.empty()) throw ConfigError(context + ": empty grid for '" + key + "'");
    }
    return grid;
}

std::string fmt(double v) {
    if (v == std::numeric_limits<double>::infinity()) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void apply_config_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& context) {
    try {
        if (key == "name") cfg.name = value;
        else if (key == "length_m") cfg.fiber.length_m = parse_double(value, key, context);
        else if (key == "segment_length_m")
            cfg.fiber.segment_length_m = parse_double(value, key, context);
        else if (key == "alpha_db_per_km")
            cfg.fiber.alpha_db_per_km = parse_double(value, key, context);
        else if (key == "scatterers_per_segment")
            cfg.fiber.scatterers_per_segment = static_cast<int>(parse_int(value, key, context));
        else if (key == "group_index") cfg.fiber.group_index = parse_double(value, key, context);
        else if (key == "linewidth_hz") cfg.noise.linewidth_hz = parse_double(value, key, context);
        else if (key == "dt_s") cfg.noise.dt_s = parse_double(value, key, context);
        else if (key == "n_samples")
            cfg.noise.n_samples = static_cast<int>(parse_int(value, key, context));
        else if (key == "snr_db") cfg.noise.snr_db = parse_double(value, key, context);
        else if (key == "theta_jitter")
            cfg.noise.theta_jitter_rad_per_sqrt_s = parse_double(value, key, context);
        else if (key == "schemes") {
            cfg.schemes.clear();
            for (const auto& s : split(value, ',')) cfg.schemes.push_back(scheme_from_name(s));
        } else if (key == "sweep") cfg.sweep = sweep_from_name(value);
        else if (key == "sweep_grid") cfg.sweep_grid = parse_grid(value, key, context);
        else if (key == "n_fibers") cfg.n_fibers = static_cast<int>(parse_int(value, key, context));
        else if (key == "master_seed") cfg.master_seed = parse_u64(value, key, context);
        else if (key == "diff_mode") cfg.diff_mode = diff_mode_from_name(value);
        else if (key == "theta_cap") cfg.preset.theta_cap = parse_double(value, key, context);
        else if (key == "beta") cfg.preset.beta = parse_double(value, key, context);
        else if (key == "gamma") cfg.preset.gamma = parse_double(value, key, context);
        else if (key == "theta_mis") cfg.preset.theta_mis = parse_double(value, key, context);
        else if (key == "simo_column")
            cfg.simo_column = static_cast<int>(parse_int(value, key, context));
        else
            throw ConfigError(context + ": unknown key '" + key + "'");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(context + ": '" + key + "': " + e.what());
    }
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string context = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos)
            throw ConfigError(context + ": expected key = value, got '" + line + "'");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), context);
    }
    finalize_config(cfg);
    return cfg;
}

void finalize_config(ScenarioConfig& cfg) {
    if (cfg.sweep_grid.empty()) {
        if (cfg.sweep == SweepKind::ThetaMis)
            for (int i = 0; i < 64; ++i) cfg.sweep_grid.push_back(-M_PI + 2.0 * M_PI * i / 64.0);
        else if (cfg.sweep == SweepKind::ThetaCap)
            for (int i = 0; i < 64; ++i) cfg.sweep_grid.push_back(M_PI / 2.0 * i / 63.0);
    }
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
}

std::string manifest_text(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "# resolved scenario configuration (tool version " << kToolVersion << ")\n";
    out << "name = " << cfg.name << "\n";
    out << "sweep = " << sweep_name(cfg.sweep) << "\n";
    out << "length_m = " << fmt(cfg.fiber.length_m) << "\n";
    out << "segment_length_m = " << fmt(cfg.fiber.segment_length_m) << "\n";
    out << "alpha_db_per_km = " << fmt(cfg.fiber.alpha_db_per_km) << "\n";
    out << "scatterers_per_segment = " << cfg.fiber.scatterers_per_segment << "\n";
    out << "group_index = " << fmt(cfg.fiber.group_index) << "\n";
    out << "linewidth_hz = " << fmt(cfg.noise.linewidth_hz) << "\n";
    out << "dt_s = " << fmt(cfg.noise.dt_s) << "\n";
    out << "n_samples = " << cfg.noise.n_samples << "\n";
    out << "snr_db = " << fmt(cfg.noise.snr_db) << "\n";
    out << "theta_jitter = " << fmt(cfg.noise.theta_jitter_rad_per_sqrt_s) << "\n";
    out << "schemes = ";
    for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
        out << (i ? "," : "") << scheme_name(cfg.schemes[i]);
    out << "\n";
    if (!cfg.sweep_grid.empty()) {
        out << "sweep_grid = ";
        for (std::size_t i = 0; i < cfg.sweep_grid.size(); ++i)
            out << (i ? "," : "") << fmt(cfg.sweep_grid[i]);
        out << "\n";
    }
    out << "n_fibers = " << cfg.n_fibers << "\n";
    out << "master_seed = " << cfg.master_seed << "\n";
    out << "diff_mode = " << diff_mode_name(cfg.diff_mode) << "\n";
    out << "theta_cap = " << fmt(cfg.preset.theta_cap) << "\n";
    out << "beta = " << fmt(cfg.preset.beta) << "\n";
    out << "gamma = " << fmt(cfg.preset.gamma) << "\n";
    out << "theta_mis = " << fmt(cfg.preset.theta_mis) << "\n";
    out << "simo_column = " << cfg.simo_column << "\n";
    return out.str();
}

void write_manifest(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << manifest_text(cfg);
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace phiotdr
