#include "nlvortex/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nlv {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse number '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse integer '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': cannot parse boolean '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt17(v[i]);
    }
    return s;
}

}  // namespace

void RunConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
    };
    positive(pump_width, "pump.width");
    positive(phasematch_width, "phasematch.width");
    positive(grid_half_span, "grid.half_span");
    positive(f1_mm, "optics.f1_mm");
    positive(f2_mm, "optics.f2_mm");
    positive(f3_mm, "optics.f3_mm");
    positive(f4_mm, "optics.f4_mm");
    positive(slit_width_um, "optics.slit_width_um");
    positive(slit_separation_um, "optics.slit_separation_um");
    positive(reference_waist_mm, "units.reference_waist_mm");
    positive(wavelength_nm, "units.wavelength_nm");
    positive(fringe_scan_periods, "fringes.scan_periods");
    if (grid_samples < 2) throw ConfigError("grid.samples must be at least 2");
    if (fringe_screen_samples < 16) throw ConfigError("fringes.screen_samples must be >= 16");
    if (aperture_rho_um < 0.0 || aperture_q_um < 0.0)
        throw ConfigError("aperture widths must be nonnegative");
    if (detector1_positions_mm.empty())
        throw ConfigError("detectors.positions_mm must not be empty");
    if (noise_events > 0 && !noise_seed_set)
        throw ConfigError("noise.seed is required when noise.events > 0");
    slit_geometry_dimensionless().validate();
}

BiphotonState RunConfig::state() const {
    return BiphotonState{PumpSpec{pump_mode, pump_width}, PhaseMatchSpec{phasematch_width}};
}

SlitGeometry RunConfig::slit_geometry_dimensionless() const {
    // slit-plane lengths in reference-waist units
    return SlitGeometry{slit_width_um * 1e-3 / reference_waist_mm,
                        slit_separation_um * 1e-3 / reference_waist_mm};
}

OpticalChannel RunConfig::photon1_channel() const {
    return OpticalChannel{{ImagingStage{imaging_magnification(), true}}};
}

OpticalChannel RunConfig::photon2_fringe_channel() const {
    return OpticalChannel{{FourierStage{fourier_scale(f2_mm)},
                           MaskStage{slit_geometry_dimensionless()},
                           FourierStage{fourier_scale(f3_mm)}}};
}

std::string RunConfig::canonical_text() const {
    std::ostringstream os;
    os << "detectors.aperture_q_um=" << fmt17(aperture_q_um) << "\n";
    os << "detectors.aperture_rho_um=" << fmt17(aperture_rho_um) << "\n";
    os << "detectors.positions_mm=" << fmt_list(detector1_positions_mm) << "\n";
    os << "fringes.scan_periods=" << fmt17(fringe_scan_periods) << "\n";
    os << "fringes.screen_samples=" << fringe_screen_samples << "\n";
    os << "grid.half_span=" << fmt17(grid_half_span) << "\n";
    os << "grid.samples=" << grid_samples << "\n";
    os << "noise.events=" << noise_events << "\n";
    os << "noise.seed=" << (noise_seed_set ? std::to_string(noise_seed) : "unset") << "\n";
    os << "optics.f1_mm=" << fmt17(f1_mm) << "\n";
    os << "optics.f2_mm=" << fmt17(f2_mm) << "\n";
    os << "optics.f3_mm=" << fmt17(f3_mm) << "\n";
    os << "optics.f4_mm=" << fmt17(f4_mm) << "\n";
    os << "optics.slit_separation_um=" << fmt17(slit_separation_um) << "\n";
    os << "optics.slit_width_um=" << fmt17(slit_width_um) << "\n";
    os << "output.dir=" << output_dir << "\n";
    os << "output.pgm=" << (write_pgm ? "true" : "false") << "\n";
    os << "phasematch.width=" << fmt17(phasematch_width) << "\n";
    os << "pump.mode=" << (pump_mode == PumpMode::Hg10 ? "hg10" : "gauss") << "\n";
    os << "pump.width=" << fmt17(pump_width) << "\n";
    os << "units.reference_waist_mm=" << fmt17(reference_waist_mm) << "\n";
    os << "units.wavelength_nm=" << fmt17(wavelength_nm) << "\n";
    return os.str();
}

std::string RunConfig::config_hash() const {
    // FNV-1a 64
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : canonical_text()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void RunConfig::apply_override(const std::string& dotted_key, const std::string& value) {
    const std::string k = trim(dotted_key);
    const std::string v = trim(value);
    if (k == "pump.mode") {
        if (v == "hg10")
            pump_mode = PumpMode::Hg10;
        else if (v == "gauss")
            pump_mode = PumpMode::Gauss;
        else
            throw ConfigError("pump.mode must be 'hg10' or 'gauss', got '" + v + "'");
    } else if (k == "pump.width") {
        pump_width = parse_double(k, v);
    } else if (k == "phasematch.width") {
        phasematch_width = parse_double(k, v);
    } else if (k == "grid.samples") {
        grid_samples = static_cast<std::size_t>(parse_u64(k, v));
    } else if (k == "grid.half_span") {
        grid_half_span = parse_double(k, v);
    } else if (k == "optics.f1_mm") {
        f1_mm = parse_double(k, v);
    } else if (k == "optics.f2_mm") {
        f2_mm = parse_double(k, v);
    } else if (k == "optics.f3_mm") {
        f3_mm = parse_double(k, v);
    } else if (k == "optics.f4_mm") {
        f4_mm = parse_double(k, v);
    } else if (k == "optics.slit_width_um") {
        slit_width_um = parse_double(k, v);
    } else if (k == "optics.slit_separation_um") {
        slit_separation_um = parse_double(k, v);
    } else if (k == "detectors.positions_mm") {
        detector1_positions_mm = parse_list(k, v);
    } else if (k == "detectors.aperture_rho_um") {
        aperture_rho_um = parse_double(k, v);
    } else if (k == "detectors.aperture_q_um") {
        aperture_q_um = parse_double(k, v);
    } else if (k == "units.reference_waist_mm") {
        reference_waist_mm = parse_double(k, v);
    } else if (k == "units.wavelength_nm") {
        wavelength_nm = parse_double(k, v);
    } else if (k == "fringes.screen_samples") {
        fringe_screen_samples = static_cast<std::size_t>(parse_u64(k, v));
    } else if (k == "fringes.scan_periods") {
        fringe_scan_periods = parse_double(k, v);
    } else if (k == "noise.events") {
        noise_events = parse_u64(k, v);
    } else if (k == "noise.seed") {
        noise_seed = parse_u64(k, v);
        noise_seed_set = true;
    } else if (k == "output.dir") {
        output_dir = v;
    } else if (k == "output.pgm") {
        write_pgm = parse_bool(k, v);
    } else {
        throw ConfigError("unknown config key '" + k + "'");
    }
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": key outside of a [section]");
        cfg.apply_override(section + "." + key, value);
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

}  // namespace nlv
