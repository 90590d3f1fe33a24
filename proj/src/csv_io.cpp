#include "nlvortex/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nlv {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file '" + path + "'");
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open input file '" + path + "'");
    return f;
}

std::string rep_name(Representation r) {
    return r == Representation::Position ? "position" : "wavevector";
}

Representation rep_from(const std::string& s) {
    if (s == "position") return Representation::Position;
    if (s == "wavevector") return Representation::Wavevector;
    throw ConfigError("bad representation '" + s + "' in file");
}

void write_axis_line(std::ofstream& f, const char* name, const MapAxisInfo& ax) {
    f << "# " << name << " = photon:" << ax.photon << " rep:" << rep_name(ax.rep)
      << " min:" << format_double(ax.axis.min) << " max:" << format_double(ax.axis.max)
      << " count:" << ax.axis.count << "\n";
}

MapAxisInfo parse_axis_line(const std::string& body) {
    MapAxisInfo ax;
    std::istringstream is(body);
    std::string tok;
    while (is >> tok) {
        const auto c = tok.find(':');
        if (c == std::string::npos) throw ConfigError("malformed axis line in file");
        const std::string k = tok.substr(0, c), v = tok.substr(c + 1);
        if (k == "photon")
            ax.photon = std::stoi(v);
        else if (k == "rep")
            ax.rep = rep_from(v);
        else if (k == "min")
            ax.axis.min = std::stod(v);
        else if (k == "max")
            ax.axis.max = std::stod(v);
        else if (k == "count")
            ax.axis.count = static_cast<std::size_t>(std::stoull(v));
    }
    ax.axis.validate();
    return ax;
}

void write_meta(std::ofstream& f, const std::map<std::string, std::string>& meta) {
    for (const auto& [k, v] : meta) f << "# " << k << " = " << v << "\n";
}

// Split a '#' header line into key and value around the first " = ".
bool parse_header(const std::string& line, std::string& key, std::string& value) {
    if (line.empty() || line[0] != '#') return false;
    std::string body = line.substr(1);
    if (!body.empty() && body[0] == ' ') body.erase(0, 1);
    const auto eq = body.find(" = ");
    if (eq == std::string::npos) return false;
    key = body.substr(0, eq);
    value = body.substr(eq + 3);
    if (!value.empty() && value.back() == '\r') value.pop_back();
    return true;
}

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> out;
    const char* p = line.c_str();
    char* end = nullptr;
    while (*p) {
        const double v = std::strtod(p, &end);
        if (end == p) break;
        out.push_back(v);
        p = end;
        if (*p == ',') ++p;
    }
    return out;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_map_csv(const std::string& path, const CoincidenceMap& map) {
    std::ofstream f = open_out(path);
    f << "# nlvortex-map\n";
    write_axis_line(f, "axis1", map.axis1);
    write_axis_line(f, "axis2", map.axis2);
    write_meta(f, map.meta);
    const std::size_t n1 = map.axis1.axis.count, n2 = map.axis2.axis.count;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            if (j) f << ',';
            f << format_double(map.at(i, j));
        }
        f << '\n';
    }
}

CoincidenceMap read_map_csv(const std::string& path) {
    std::ifstream f = open_in(path);
    CoincidenceMap map;
    std::string line;
    bool have1 = false, have2 = false;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string k, v;
            if (!parse_header(line, k, v)) continue;
            if (k == "axis1") {
                map.axis1 = parse_axis_line(v);
                have1 = true;
            } else if (k == "axis2") {
                map.axis2 = parse_axis_line(v);
                have2 = true;
            } else {
                map.meta[k] = v;
            }
            continue;
        }
        const std::vector<double> row = parse_row(line);
        map.values.insert(map.values.end(), row.begin(), row.end());
    }
    if (!have1 || !have2) throw ConfigError("map file missing axis metadata: " + path);
    if (map.values.size() != map.axis1.axis.count * map.axis2.axis.count)
        throw ConfigError("map file has wrong cell count: " + path);
    return map;
}

void write_counts_csv(const std::string& path, const CountMap& counts) {
    std::ofstream f = open_out(path);
    f << "# nlvortex-counts\n";
    write_axis_line(f, "axis1", counts.axis1);
    write_axis_line(f, "axis2", counts.axis2);
    write_meta(f, counts.meta);
    const std::size_t n1 = counts.axis1.axis.count, n2 = counts.axis2.axis.count;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            if (j) f << ',';
            f << counts.counts[i * n2 + j];
        }
        f << '\n';
    }
}

void write_field_csv(const std::string& path, const FieldGrid& field) {
    field.validate();
    std::ofstream f = open_out(path);
    f << "# nlvortex-field\n";
    f << "# dims = " << field.dim() << "\n";
    for (std::size_t d = 0; d < field.dim(); ++d) {
        const Axis& a = field.axes[d];
        f << "# axis" << d + 1 << " = min:" << format_double(a.min)
          << " max:" << format_double(a.max) << " count:" << a.count << "\n";
    }
    f << "# columns = re,im pairs along last axis\n";
    write_meta(f, field.meta);
    const std::size_t n2 = field.dim() == 2 ? field.axes[1].count : field.axes[0].count;
    const std::size_t n1 = field.dim() == 2 ? field.axes[0].count : 1;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            if (j) f << ',';
            const cplx v = field.values[i * n2 + j];
            f << format_double(v.real()) << ',' << format_double(v.imag());
        }
        f << '\n';
    }
}

FieldGrid read_field_csv(const std::string& path) {
    std::ifstream f = open_in(path);
    FieldGrid g;
    std::string line;
    std::vector<double> flat;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string k, v;
            if (!parse_header(line, k, v)) continue;
            if (k == "axis1" || k == "axis2") {
                Axis ax;
                std::istringstream is(v);
                std::string tok;
                while (is >> tok) {
                    const auto c = tok.find(':');
                    const std::string kk = tok.substr(0, c), vv = tok.substr(c + 1);
                    if (kk == "min")
                        ax.min = std::stod(vv);
                    else if (kk == "max")
                        ax.max = std::stod(vv);
                    else if (kk == "count")
                        ax.count = static_cast<std::size_t>(std::stoull(vv));
                }
                g.axes.push_back(ax);
            } else if (k != "dims" && k != "columns") {
                g.meta[k] = v;
            }
            continue;
        }
        const std::vector<double> row = parse_row(line);
        flat.insert(flat.end(), row.begin(), row.end());
    }
    g.values.reserve(flat.size() / 2);
    for (std::size_t i = 0; i + 1 < flat.size(); i += 2) g.values.emplace_back(flat[i], flat[i + 1]);
    g.validate();
    return g;
}

void write_scan_csv(const std::string& path, const FringeScan& scan) {
    std::ofstream f = open_out(path);
    f << "# nlvortex-scan\n";
    f << "# detector1_position = " << format_double(scan.detector1_position) << "\n";
    if (scan.fit) {
        f << "# fit_period = " << format_double(scan.fit->period) << "\n";
        f << "# fit_phase = " << format_double(scan.fit->phase) << "\n";
        f << "# fit_visibility = " << format_double(scan.fit->visibility) << "\n";
        f << "# fit_env_center = " << format_double(scan.fit->env_center) << "\n";
        f << "# fit_env_width = " << format_double(scan.fit->env_width) << "\n";
        f << "# fit_amplitude = " << format_double(scan.fit->amplitude) << "\n";
        f << "# fit_rms_residual = " << format_double(scan.fit->rms_residual) << "\n";
        f << "# fit_reliable = " << (scan.fit->reliable ? "true" : "false") << "\n";
    }
    write_meta(f, scan.meta);
    for (std::size_t i = 0; i < scan.positions.size(); ++i)
        f << format_double(scan.positions[i]) << ',' << format_double(scan.intensities[i])
          << '\n';
}

FringeScan read_scan_csv(const std::string& path) {
    std::ifstream f = open_in(path);
    FringeScan scan;
    FringeFit fit;
    bool has_fit = false;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string k, v;
            if (!parse_header(line, k, v)) continue;
            if (k == "detector1_position")
                scan.detector1_position = std::stod(v);
            else if (k == "fit_period") {
                fit.period = std::stod(v);
                has_fit = true;
            } else if (k == "fit_phase")
                fit.phase = std::stod(v);
            else if (k == "fit_visibility")
                fit.visibility = std::stod(v);
            else if (k == "fit_env_center")
                fit.env_center = std::stod(v);
            else if (k == "fit_env_width")
                fit.env_width = std::stod(v);
            else if (k == "fit_amplitude")
                fit.amplitude = std::stod(v);
            else if (k == "fit_rms_residual")
                fit.rms_residual = std::stod(v);
            else if (k == "fit_reliable")
                fit.reliable = (v == "true");
            else
                scan.meta[k] = v;
            continue;
        }
        const std::vector<double> row = parse_row(line);
        if (row.size() == 2) {
            scan.positions.push_back(row[0]);
            scan.intensities.push_back(row[1]);
        }
    }
    if (has_fit) scan.fit = fit;
    return scan;
}

void write_pgm16(const std::string& path, const std::vector<double>& values,
                 std::size_t rows, std::size_t cols) {
    if (values.size() != rows * cols) throw ConfigError("pgm: value count mismatch");
    double vmax = 0.0;
    for (const double v : values) vmax = std::max(vmax, v);
    std::ofstream f = open_out(path);
    f << "P5\n" << cols << " " << rows << "\n65535\n";
    for (const double v : values) {
        const double t = vmax > 0.0 ? std::max(0.0, v) / vmax : 0.0;
        const auto g = static_cast<unsigned>(std::lround(t * 65535.0));
        f.put(static_cast<char>((g >> 8) & 0xff));
        f.put(static_cast<char>(g & 0xff));
    }
}

}  // namespace nlv
