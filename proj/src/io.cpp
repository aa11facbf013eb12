#include "gstmar/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gstmar/error.hpp"

namespace gstmar {

namespace {

struct YearMonth {
    int year = 0;
    int month = 0;
    bool operator==(const YearMonth&) const = default;
};

YearMonth parse_month(const std::string& token, int line_no) {
    // Accepts YYYY-MM and YYYY-MM-DD.
    if (token.size() < 7 || token[4] != '-' ||
        !std::isdigit(static_cast<unsigned char>(token[0]))) {
        std::ostringstream msg;
        msg << "line " << line_no << ": cannot parse month from '" << token << "'";
        throw IngestError(msg.str());
    }
    YearMonth ym;
    ym.year = std::stoi(token.substr(0, 4));
    ym.month = std::stoi(token.substr(5, 2));
    if (ym.month < 1 || ym.month > 12) {
        std::ostringstream msg;
        msg << "line " << line_no << ": month out of range in '" << token << "'";
        throw IngestError(msg.str());
    }
    return ym;
}

YearMonth next_month(YearMonth ym) {
    if (++ym.month > 12) {
        ym.month = 1;
        ++ym.year;
    }
    return ym;
}

std::string format_month(const YearMonth& ym) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02d", ym.year, ym.month);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim
        std::size_t b = field.find_first_not_of(" \t\r");
        std::size_t e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return fields;
}

void check_monthly(const std::vector<std::string>& dates) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        const YearMonth prev = parse_month(dates[i - 1], static_cast<int>(i));
        const YearMonth cur = parse_month(dates[i], static_cast<int>(i + 1));
        if (!(next_month(prev) == cur)) {
            std::ostringstream msg;
            msg << "gap or misordering between " << dates[i - 1] << " and " << dates[i]
                << "; expected " << format_month(next_month(prev));
            throw IngestError(msg.str());
        }
    }
}

} // namespace

SeriesFile load_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path + "'");
    SeriesFile series;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv_line(line);
        if (fields.empty()) continue;
        if (line_no == 1 && !fields[0].empty() &&
            !std::isdigit(static_cast<unsigned char>(fields[0][0])))
            continue; // header
        if (fields.size() < 2) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected date,value";
            throw IngestError(msg.str());
        }
        const YearMonth ym = parse_month(fields[0], line_no);
        double value;
        try {
            if (fields.size() >= 3 && !fields[2].empty())
                value = std::stod(fields[1]) - std::stod(fields[2]);
            else
                value = std::stod(fields[1]);
        } catch (const std::exception&) {
            std::ostringstream msg;
            msg << "line " << line_no << ": cannot parse numeric value";
            throw IngestError(msg.str());
        }
        if (!std::isfinite(value)) {
            std::ostringstream msg;
            msg << "line " << line_no << ": non-finite value";
            throw IngestError(msg.str());
        }
        series.dates.push_back(format_month(ym));
        series.values.push_back(value);
    }
    if (series.values.empty()) throw IngestError("no observations in '" + path + "'");
    check_monthly(series.dates);
    return series;
}

SeriesFile ingest_spread(const SeriesFile& a, const SeriesFile& b,
                         const std::string& first, const std::string& last) {
    SeriesFile out;
    std::size_t ia = 0, ib = 0;
    // advance to a common start
    while (ia < a.dates.size() && ib < b.dates.size() && a.dates[ia] != b.dates[ib]) {
        if (a.dates[ia] < b.dates[ib]) ++ia;
        else ++ib;
    }
    while (ia < a.dates.size() && ib < b.dates.size()) {
        if (a.dates[ia] != b.dates[ib]) {
            std::ostringstream msg;
            msg << "series misalignment at " << a.dates[ia] << " vs " << b.dates[ib];
            throw IngestError(msg.str());
        }
        const std::string& d = a.dates[ia];
        const bool in_window = (first.empty() || d >= first) && (last.empty() || d <= last);
        if (in_window) {
            out.dates.push_back(d);
            out.values.push_back(a.values[ia] - b.values[ib]);
        }
        ++ia;
        ++ib;
    }
    if (out.values.empty()) throw IngestError("no overlapping observations in window");
    check_monthly(out.dates);
    return out;
}

void save_series_csv(const SeriesFile& series, const std::string& path) {
    std::ofstream outf(path);
    if (!outf) throw IngestError("cannot write '" + path + "'");
    outf << "date,value\n";
    char buf[64];
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", series.values[i]);
        outf << series.dates[i] << ',' << buf << '\n';
    }
}

std::string data_hash(const Vector& values) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[64];
    for (double v : values) {
        const int len = std::snprintf(buf, sizeof buf, "%.12g;", v);
        for (int i = 0; i < len; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IngestError("cannot write '" + path + "'");
    out << text;
}

std::string fit_report_to_json(const FitReport& report) {
    nlohmann::json doc;
    doc["loglik"] = report.loglik;
    doc["mode"] = report.mode;
    doc["n_params"] = report.n_params;
    doc["n_obs"] = report.n_obs;
    doc["aic"] = report.ic.aic;
    doc["hqic"] = report.ic.hqic;
    doc["bic"] = report.ic.bic;
    doc["acf_resid"] = report.acf_resid;
    doc["acf_sq_resid"] = report.acf_sq_resid;
    doc["acf_band"] = report.acf_band;
    doc["normality"] = {{"skewness", report.normality.skewness},
                        {"excess_kurtosis", report.normality.excess_kurtosis},
                        {"jarque_bera", report.normality.jarque_bera},
                        {"jb_pvalue", report.normality.jb_pvalue}};
    doc["large_dof_flags"] = report.large_dof_flags;
    doc["caveat"] = report.caveat;
    return doc.dump(2);
}

GaConfig ga_config_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IngestError(std::string("config parse error: ") + e.what());
    }
    GaConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "population_size") cfg.population_size = value.get<int>();
        else if (key == "generations") cfg.generations = value.get<int>();
        else if (key == "min_crossover_rate") cfg.min_crossover_rate = value.get<double>();
        else if (key == "smart_mutation_start") cfg.smart_mutation_start = value.get<int>();
        else if (key == "redundancy_threshold") cfg.redundancy_threshold = value.get<double>();
        else if (key == "boundary_mutation_prob") cfg.boundary_mutation_prob = value.get<double>();
        else if (key == "fitness_inheritance_prob") cfg.fitness_inheritance_prob = value.get<double>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "verbose") cfg.verbose = value.get<bool>();
        else throw IngestError("unknown config key '" + key + "'");
    }
    return cfg;
}

namespace {

void csv_row(std::ostream& os, const std::string& panel, double x, double y,
             double band_lo, double band_hi, bool has_band) {
    char buf[160];
    if (has_band)
        std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g,%.10g\n", panel.c_str(), x,
                      y, band_lo, band_hi);
    else
        std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,,\n", panel.c_str(), x, y);
    os << buf;
}

} // namespace

std::string diagnostics_csv(const GStmarModel& model, const Vector& series,
                            int acf_lags) {
    const QuantileResiduals qr = quantile_residuals(model, series);
    const AcfResult acf = residual_acf(qr.values, acf_lags);
    Vector squared(qr.values.size());
    for (std::size_t i = 0; i < squared.size(); ++i)
        squared[i] = qr.values[i] * qr.values[i];
    const AcfResult acf_sq = residual_acf(squared, acf_lags);
    const Matrix weights = mixing_weight_series(model, series);

    std::ostringstream os;
    os << "panel,x,y,band_lo,band_hi\n";
    for (std::size_t t = 0; t < qr.values.size(); ++t)
        csv_row(os, "residuals", static_cast<double>(t + 1), qr.values[t], 0, 0, false);

    // Normal QQ: empirical quantiles against theoretical ones.
    Vector sorted = qr.values;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double theo = norm_quantile((i + 0.5) / n);
        csv_row(os, "qq", theo, sorted[i], 0, 0, false);
    }

    for (int lag = 1; lag <= acf_lags; ++lag) {
        csv_row(os, "acf", lag, acf.acf[lag - 1], -acf.band, acf.band, true);
        csv_row(os, "acf_sq", lag, acf_sq.acf[lag - 1], -acf_sq.band, acf_sq.band, true);
    }

    for (std::size_t t = 0; t < weights.rows(); ++t)
        for (std::size_t m = 0; m < weights.cols(); ++m)
            csv_row(os, "weight_" + std::to_string(m + 1), static_cast<double>(t + 1),
                    weights(t, m), 0, 0, false);
    return os.str();
}

std::string simulation_csv(const SimulationResult& result) {
    std::ostringstream os;
    const std::size_t m_total =
        result.paths.empty() ? 0 : result.paths[0].weights.cols();
    os << "path,t,y,regime";
    for (std::size_t m = 0; m < m_total; ++m) os << ",w" << (m + 1);
    os << '\n';
    char buf[64];
    for (std::size_t k = 0; k < result.paths.size(); ++k) {
        const auto& path = result.paths[k];
        for (std::size_t t = 0; t < path.y.size(); ++t) {
            os << k << ',' << t << ',';
            std::snprintf(buf, sizeof buf, "%.12g", path.y[t]);
            os << buf << ',' << (path.regime[t] + 1);
            for (std::size_t m = 0; m < m_total; ++m) {
                std::snprintf(buf, sizeof buf, "%.6g", path.weights(t, m));
                os << ',' << buf;
            }
            os << '\n';
        }
    }
    return os.str();
}

std::string forecast_csv(const ForecastResult& result) {
    std::ostringstream os;
    os << "horizon,mean";
    for (double q : result.quantile_levels) {
        char buf[32];
        std::snprintf(buf, sizeof buf, ",q%g", q);
        os << buf;
    }
    os << '\n';
    char buf[64];
    for (std::size_t h = 0; h < result.horizons_mean.size(); ++h) {
        os << (h + 1);
        std::snprintf(buf, sizeof buf, ",%.12g", result.horizons_mean[h]);
        os << buf;
        for (std::size_t qi = 0; qi < result.quantile_levels.size(); ++qi) {
            std::snprintf(buf, sizeof buf, ",%.12g", result.quantiles(h, qi));
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

} // namespace gstmar
