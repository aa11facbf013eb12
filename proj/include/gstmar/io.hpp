#ifndef GSTMAR_IO_HPP
#define GSTMAR_IO_HPP

#include <string>

#include "gstmar/diagnostics.hpp"
#include "gstmar/linalg.hpp"
#include "gstmar/simulation.hpp"

namespace gstmar {

// Monthly time series: ISO year-month dates with strictly increasing,
// gap-free monthly spacing.
struct SeriesFile {
    std::vector<std::string> dates; // "YYYY-MM"
    Vector values;
};

// Reads a (date,value) or (date,a,b) CSV; in the two-series form the
// value is the spread a - b. A header row is detected and skipped.
SeriesFile load_series_csv(const std::string& path);

// Aligns two single-series files on their overlapping monthly range and
// returns the spread a - b, optionally clipped to [first, last] months
// (inclusive, "YYYY-MM"; empty = no clip).
SeriesFile ingest_spread(const SeriesFile& a, const SeriesFile& b,
                         const std::string& first = "", const std::string& last = "");

void save_series_csv(const SeriesFile& series, const std::string& path);

// FNV-1a over the formatted observations; stored in model metadata so a
// model file can be matched to the data it was fitted on.
std::string data_hash(const Vector& values);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

std::string fit_report_to_json(const FitReport& report);

// GaConfig from a JSON config file; unknown keys are rejected.
GaConfig ga_config_from_json(const std::string& text);

// Tidy plot-data CSV with columns panel,x,y,band_lo,band_hi covering the
// residual series, normal QQ points, the two ACF panels and the mixing
// weight series.
std::string diagnostics_csv(const GStmarModel& model, const Vector& series,
                            int acf_lags);

std::string simulation_csv(const SimulationResult& result);
std::string forecast_csv(const ForecastResult& result);

} // namespace gstmar

#endif
