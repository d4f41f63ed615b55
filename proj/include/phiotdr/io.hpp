#ifndef PHIOTDR_IO_HPP
#define PHIOTDR_IO_HPP

#include <array>
#include <string>
#include <vector>

#include "phiotdr/config.hpp"
#include "phiotdr/estimators.hpp"
#include "phiotdr/experiments.hpp"

namespace phiotdr {

// Externally measured (or exported) per-segment channel-estimate series.
// Coefficient order: xx, xy, yx, yy.
struct MeasuredSeries {
    int n_segments = 0;
    int n_samples = 0;
    std::array<bool, 4> present{false, false, false, false};
    std::vector<JonesMatrix> values;  // absent coefficients left at zero

    const JonesMatrix& at(int seg, int t) const {
        return values[static_cast<std::size_t>(seg) * n_samples + t];
    }
};

// CSV with header segment_index,time_index,then h_<c>_re,h_<c>_im pairs for
// any subset of coefficients.  Rejects duplicate (segment, time) pairs and
// ragged time axes.
MeasuredSeries ingest_measured(const std::string& path);

// Which coefficients a scheme needs: SISO h_xx, SIMO one column, MIMO all.
// Throws DataError when the series lacks them.
PhaseTrace estimate_from_measured(const MeasuredSeries& series, ProbeScheme scheme,
                                  double dt_s, int simo_column = 1);

void write_measured_csv(const ObservationSet& obs, const std::string& path,
                        const std::array<bool, 4>& coefficients = {true, true, true, true});

void write_table_csv(const ResultTable& table, const std::string& path);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

// Fails early (before any simulation) when the directory is not writable.
void preflight_output_dir(const std::string& dir);

// CSV per table, manifest, and one plot per table unless no_plots.
// Returns the list of files written.
std::vector<std::string> emit_outputs(const ScenarioResult& result, const ScenarioConfig& cfg,
                                      const std::string& out_dir, bool no_plots);

}  // namespace phiotdr

#endif
