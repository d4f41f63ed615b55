#include "phiotdr/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "phiotdr/errors.hpp"

namespace phiotdr {

namespace {

constexpr const char* kCoefNames[4] = {"xx", "xy", "yx", "yy"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty() && item.back() == '\r') item.pop_back();
        out.push_back(item);
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

Complex& coef_ref(JonesMatrix& m, int c) {
    switch (c) {
        case 0: return m.xx;
        case 1: return m.xy;
        case 2: return m.yx;
    }
    return m.yy;
}

Complex coef_get(const JonesMatrix& m, int c) {
    switch (c) {
        case 0: return m.xx;
        case 1: return m.xy;
        case 2: return m.yx;
    }
    return m.yy;
}

}  // namespace

MeasuredSeries ingest_measured(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open measured data file: " + path);

    std::string header;
    if (!std::getline(in, header)) throw DataError(path + ": empty file");
    const auto cols = split_csv_line(header);
    if (cols.size() < 2 || cols[0] != "segment_index" || cols[1] != "time_index")
        throw DataError(path + ": header must start with segment_index,time_index");

    // map remaining columns onto coefficient (index, re/im) slots
    struct Slot {
        int coef;
        bool imag;
    };
    std::vector<Slot> slots;
    std::array<int, 4> have_re{0, 0, 0, 0}, have_im{0, 0, 0, 0};
    for (std::size_t c = 2; c < cols.size(); ++c) {
        const std::string& name = cols[c];
        bool matched = false;
        for (int k = 0; k < 4; ++k) {
            const std::string base = std::string("h_") + kCoefNames[k];
            if (name == base + "_re") {
                slots.push_back({k, false});
                ++have_re[k];
                matched = true;
            } else if (name == base + "_im") {
                slots.push_back({k, true});
                ++have_im[k];
                matched = true;
            }
        }
        if (!matched) throw DataError(path + ": unrecognized column '" + name + "'");
    }
    MeasuredSeries series;
    bool any = false;
    for (int k = 0; k < 4; ++k) {
        if (have_re[k] > 1 || have_im[k] > 1)
            throw DataError(path + ": duplicate column for coefficient " + kCoefNames[k]);
        if (have_re[k] != have_im[k])
            throw DataError(path + ": coefficient " + kCoefNames[k] +
                            " needs both _re and _im columns");
        series.present[k] = have_re[k] == 1;
        any = any || series.present[k];
    }
    if (!any) throw DataError(path + ": no channel coefficient columns");

    struct Record {
        long long seg, t;
        JonesMatrix value;
    };
    std::vector<Record> records;
    std::set<std::pair<long long, long long>> seen;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const auto cells = split_csv_line(line);
        const std::string context = path + ":" + std::to_string(lineno);
        if (cells.size() != cols.size())
            throw DataError(context + ": expected " + std::to_string(cols.size()) +
                            " cells, got " + std::to_string(cells.size()));
        Record rec{};
        try {
            std::size_t pos = 0;
            rec.seg = std::stoll(cells[0], &pos);
            if (pos != cells[0].size()) throw std::invalid_argument("trailing characters");
            rec.t = std::stoll(cells[1], &pos);
            if (pos != cells[1].size()) throw std::invalid_argument("trailing characters");
            for (std::size_t c = 0; c < slots.size(); ++c) {
                const double v = std::stod(cells[c + 2], &pos);
                if (pos != cells[c + 2].size()) throw std::invalid_argument("trailing characters");
                Complex& dst = coef_ref(rec.value, slots[c].coef);
                dst = slots[c].imag ? Complex{dst.real(), v} : Complex{v, dst.imag()};
            }
        } catch (const std::exception&) {
            throw DataError(context + ": malformed numeric cell");
        }
        if (rec.seg < 0 || rec.t < 0)
            throw DataError(context + ": negative segment or time index");
        if (!seen.insert({rec.seg, rec.t}).second)
            throw DataError(context + ": duplicate (segment " + std::to_string(rec.seg) +
                            ", time " + std::to_string(rec.t) + ")");
        records.push_back(rec);
    }
    if (records.empty()) throw DataError(path + ": no data rows");

    long long max_seg = 0, max_t = 0;
    for (const auto& r : records) {
        max_seg = std::max(max_seg, r.seg);
        max_t = std::max(max_t, r.t);
    }
    series.n_segments = static_cast<int>(max_seg + 1);
    series.n_samples = static_cast<int>(max_t + 1);
    const std::size_t expected =
        static_cast<std::size_t>(series.n_segments) * series.n_samples;
    if (records.size() != expected) {
        // report which segments have holes so the producer can be debugged
        std::map<long long, long long> counts;
        for (const auto& r : records) ++counts[r.seg];
        std::string bad;
        int listed = 0;
        for (long long s = 0; s < max_seg + 1 && listed < 8; ++s)
            if (counts[s] != max_t + 1) {
                bad += (listed ? "," : "") + std::to_string(s);
                ++listed;
            }
        throw DataError(path + ": ragged time axis, incomplete segments: " + bad);
    }

    series.values.assign(expected, JonesMatrix{});
    for (const auto& r : records)
        series.values[static_cast<std::size_t>(r.seg) * series.n_samples + r.t] = r.value;
    return series;
}

PhaseTrace estimate_from_measured(const MeasuredSeries& series, ProbeScheme scheme,
                                  double dt_s, int simo_column) {
    auto need = [&](int c) {
        if (!series.present[c])
            throw DataError(std::string("measured data lacks coefficient ") + kCoefNames[c] +
                            " required by scheme " + scheme_name(scheme));
    };
    switch (scheme) {
        case ProbeScheme::Siso: need(0); break;
        case ProbeScheme::Simo:
            if (simo_column == 2) { need(1); need(3); }
            else { need(0); need(2); }
            break;
        case ProbeScheme::Mimo:
            for (int c = 0; c < 4; ++c) need(c);
            break;
    }

    PhaseTrace tr;
    tr.scheme = scheme;
    tr.n_segments = series.n_segments;
    tr.n_samples = series.n_samples;
    tr.dt_s = dt_s;
    tr.values.assign(series.values.size(), 0.0);
    tr.flags.assign(series.values.size(), 0);
    tr.unreliable.assign(static_cast<std::size_t>(series.n_segments), 0);

    std::vector<double> row(static_cast<std::size_t>(series.n_samples));
    for (int i = 0; i < series.n_segments; ++i) {
        int flagged = 0;
        for (int t = 0; t < series.n_samples; ++t) {
            const JonesMatrix& h = series.at(i, t);
            PhaseSample sample;
            switch (scheme) {
                case ProbeScheme::Mimo: sample = phase_mimo(h); break;
                case ProbeScheme::Simo:
                    sample = simo_column == 2 ? phase_simo(h.xy, h.yy) : phase_simo(h.xx, h.yx);
                    break;
                case ProbeScheme::Siso: sample = phase_siso(h.xx); break;
            }
            row[t] = sample.value;
            if (sample.faded) {
                tr.flags[static_cast<std::size_t>(i) * series.n_samples + t] = 1;
                ++flagged;
            }
        }
        const std::vector<double> unwrapped = unwrap(row, phase_modulus(scheme));
        for (int t = 0; t < series.n_samples; ++t) tr.at(i, t) = unwrapped[t];
        if (2 * flagged > series.n_samples) tr.unreliable[i] = 1;
    }
    return tr;
}

void write_measured_csv(const ObservationSet& obs, const std::string& path,
                        const std::array<bool, 4>& coefficients) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "segment_index,time_index";
    for (int k = 0; k < 4; ++k)
        if (coefficients[k]) out << ",h_" << kCoefNames[k] << "_re,h_" << kCoefNames[k] << "_im";
    out << "\n";
    for (int i = 0; i < obs.n_segments; ++i)
        for (int t = 0; t < obs.n_samples; ++t) {
            const JonesMatrix& h = obs.values[static_cast<std::size_t>(i) * obs.n_samples + t];
            out << i << ',' << t;
            for (int k = 0; k < 4; ++k)
                if (coefficients[k]) {
                    const Complex c = coef_get(h, k);
                    out << ',' << fmt(c.real()) << ',' << fmt(c.imag());
                }
            out << '\n';
        }
    if (!out) throw IoError("write failed: " + path);
}

void write_table_csv(const ResultTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

namespace {

constexpr int kPlotW = 720, kPlotH = 440;
constexpr int kMarginL = 70, kMarginR = 130, kMarginT = 40, kMarginB = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double plot_w = kPlotW - kMarginL - kMarginR;
    const double plot_h = kPlotH - kMarginT - kMarginB;
    auto px = [&](double x) { return kMarginL + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kMarginT + (1.0 - (y - ymin) / (ymax - ymin)) * plot_h; };

    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    char buf[256];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlotW << "\" height=\""
        << kPlotH << "\" viewBox=\"0 0 " << kPlotW << " " << kPlotH << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%d\" y=\"%d\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"#444\"/>\n",
                  kMarginL, kMarginT, plot_w, plot_h);
    out << buf;
    out << "<text x=\"" << kPlotW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << xml_escape(title) << "</text>\n";
    out << "<text x=\"" << kMarginL + plot_w / 2 << "\" y=\"" << kPlotH - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << kMarginT + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 18 " << kMarginT + plot_h / 2 << ")\">"
        << xml_escape(y_label) << "</text>\n";

    // axis ticks
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\" "
                      "font-family=\"sans-serif\" font-size=\"10\">%.4g</text>\n",
                      px(xv), kPlotH - kMarginB + 16, xv);
        out << buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\" "
                      "font-family=\"sans-serif\" font-size=\"10\">%.4g</text>\n",
                      kMarginL - 6, py(yv) + 3, yv);
        out << buf;
    }

    int color = 0;
    for (const auto& s : series) {
        const char* stroke = kPalette[color % 6];
        out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.3\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
            out << buf;
        }
        out << "\"/>\n";
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"%s\" "
                      "stroke-width=\"2\"/>\n",
                      kPlotW - kMarginR + 10, kMarginT + 14 + 18 * color,
                      kPlotW - kMarginR + 34, kMarginT + 14 + 18 * color, stroke);
        out << buf;
        out << "<text x=\"" << kPlotW - kMarginR + 40 << "\" y=\"" << kMarginT + 18 + 18 * color
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.label)
            << "</text>\n";
        ++color;
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path);
}

void preflight_output_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
    const fs::path probe = fs::path(dir) / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw IoError("output directory not writable: " + dir);
        out << "ok";
        if (!out) throw IoError("output directory not writable: " + dir);
    }
    fs::remove(probe, ec);
}

namespace {

// Builds plot series from a long-format table: x is the first column, y is
// the last numeric column; a "scheme" column, when present, splits series.
std::vector<PlotSeries> table_to_series(const ResultTable& table) {
    int scheme_col = -1;
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        if (table.columns[c] == "scheme") scheme_col = static_cast<int>(c);
    int y_col = static_cast<int>(table.columns.size()) - 1;
    if (table.columns[y_col] == "unreliable") --y_col;

    std::vector<PlotSeries> series;
    auto find_or_add = [&](const std::string& label) -> PlotSeries& {
        for (auto& s : series)
            if (s.label == label) return s;
        series.push_back({label, {}, {}});
        return series.back();
    };
    for (const auto& row : table.rows) {
        const std::string label = scheme_col >= 0 ? row[scheme_col] : table.columns[y_col];
        PlotSeries& s = find_or_add(label);
        s.x.push_back(std::strtod(row[0].c_str(), nullptr));
        s.y.push_back(std::strtod(row[y_col].c_str(), nullptr));
    }
    return series;
}

std::string plot_y_label(const ResultTable& table) {
    int y_col = static_cast<int>(table.columns.size()) - 1;
    if (table.columns[y_col] == "unreliable") --y_col;
    return table.columns[y_col] + " [rad]";
}

}  // namespace

std::vector<std::string> emit_outputs(const ScenarioResult& result, const ScenarioConfig& cfg,
                                      const std::string& out_dir, bool no_plots) {
    namespace fs = std::filesystem;
    preflight_output_dir(out_dir);
    std::vector<std::string> written;

    const fs::path dir(out_dir);
    const std::string manifest = (dir / (cfg.name + "_manifest.cfg")).string();
    write_manifest(cfg, manifest);
    written.push_back(manifest);

    for (const auto& table : result.tables) {
        const std::string csv = (dir / (cfg.name + "_" + table.name + ".csv")).string();
        write_table_csv(table, csv);
        written.push_back(csv);
        if (!no_plots && !table.rows.empty()) {
            const std::string svg = (dir / (cfg.name + "_" + table.name + ".svg")).string();
            write_svg_plot(svg, table.name, table.columns[0], plot_y_label(table),
                           table_to_series(table));
            written.push_back(svg);
        }
    }
    return written;
}

}  // namespace phiotdr
