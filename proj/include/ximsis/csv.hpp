#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ximsis/experiment.hpp"
#include "ximsis/matrix.hpp"
#include "ximsis/screening.hpp"
#include "ximsis/survival.hpp"

namespace ximsis {

// All numeric output uses 17 significant digits so write/read round-trips
// are lossless for doubles.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, delim)) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == delim) fields.emplace_back();
    return fields;
}

inline bool is_missing(const std::string& s) { return s.empty() || s == "NA"; }

inline double parse_number(const std::string& s, std::size_t row, const std::string& col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("non-numeric value '" + s + "' in column '" + col + "' row " +
                                 std::to_string(row));
    }
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw std::runtime_error("empty file '" + path + "'");
    return lines;
}

inline char detect_delimiter(const std::string& header) {
    return header.find('\t') != std::string::npos ? '\t' : ',';
}

} // namespace detail

// A delimited survival table: designated time/status columns plus numeric
// feature columns. Missing feature cells (empty or NA) become NaN; time and
// status must be complete.
struct RawTable {
    std::string time_name;
    std::string status_name;
    std::vector<std::string> feature_names;
    Matrix features; // NaN = missing
    std::vector<double> y;
    std::vector<std::uint8_t> delta;
    std::size_t missing_cells = 0;

    SurvivalResponse response() const { return {y, delta}; }
};

inline RawTable load_survival_csv(const std::string& path, const std::string& time_col,
                                  const std::string& status_col) {
    const std::vector<std::string> lines = detail::read_lines(path);
    const char delim = detail::detect_delimiter(lines[0]);
    const std::vector<std::string> header = detail::split_line(lines[0], delim);

    std::ptrdiff_t time_idx = -1, status_idx = -1;
    std::vector<std::size_t> feature_idx;
    RawTable table;
    table.time_name = time_col;
    table.status_name = status_col;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == time_col) time_idx = static_cast<std::ptrdiff_t>(c);
        else if (header[c] == status_col) status_idx = static_cast<std::ptrdiff_t>(c);
        else {
            feature_idx.push_back(c);
            table.feature_names.push_back(header[c]);
        }
    }
    if (time_idx < 0) throw std::runtime_error("time column '" + time_col + "' not found");
    if (status_idx < 0) throw std::runtime_error("status column '" + status_col + "' not found");
    if (feature_idx.empty()) throw std::runtime_error("no feature columns");

    const std::size_t n = lines.size() - 1;
    if (n == 0) throw std::runtime_error("no data rows");
    table.features = Matrix(n, feature_idx.size());
    table.y.resize(n);
    table.delta.resize(n);

    for (std::size_t r = 0; r < n; ++r) {
        const std::vector<std::string> fields = detail::split_line(lines[r + 1], delim);
        if (fields.size() != header.size())
            throw std::runtime_error("row " + std::to_string(r + 1) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(header.size()));
        const std::string& tfield = fields[static_cast<std::size_t>(time_idx)];
        if (detail::is_missing(tfield))
            throw std::runtime_error("missing value in time column, row " + std::to_string(r + 1));
        table.y[r] = detail::parse_number(tfield, r + 1, time_col);
        if (!(table.y[r] > 0.0))
            throw std::runtime_error("nonpositive time in row " + std::to_string(r + 1));

        const std::string& sfield = fields[static_cast<std::size_t>(status_idx)];
        if (detail::is_missing(sfield))
            throw std::runtime_error("missing value in status column, row " + std::to_string(r + 1));
        const double sval = detail::parse_number(sfield, r + 1, status_col);
        if (sval != 0.0 && sval != 1.0) throw std::runtime_error("status must be 0/1");
        table.delta[r] = sval == 1.0 ? 1 : 0;

        for (std::size_t k = 0; k < feature_idx.size(); ++k) {
            const std::string& f = fields[feature_idx[k]];
            if (detail::is_missing(f)) {
                table.features(r, k) = std::numeric_limits<double>::quiet_NaN();
                ++table.missing_cells;
            } else {
                table.features(r, k) = detail::parse_number(f, r + 1, table.feature_names[k]);
            }
        }
    }
    return table;
}

// Plain numeric table (all columns features); used by the standalone impute
// command when no time/status columns are designated.
struct NumericTable {
    std::vector<std::string> names;
    Matrix values;
    std::size_t missing_cells = 0;
};

inline NumericTable load_numeric_csv(const std::string& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    const char delim = detail::detect_delimiter(lines[0]);
    NumericTable table;
    table.names = detail::split_line(lines[0], delim);
    const std::size_t n = lines.size() - 1;
    if (n == 0) throw std::runtime_error("no data rows");
    table.values = Matrix(n, table.names.size());
    for (std::size_t r = 0; r < n; ++r) {
        const std::vector<std::string> fields = detail::split_line(lines[r + 1], delim);
        if (fields.size() != table.names.size())
            throw std::runtime_error("row " + std::to_string(r + 1) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(table.names.size()));
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (detail::is_missing(fields[k])) {
                table.values(r, k) = std::numeric_limits<double>::quiet_NaN();
                ++table.missing_cells;
            } else {
                table.values(r, k) = detail::parse_number(fields[k], r + 1, table.names[k]);
            }
        }
    }
    return table;
}

// Weighted K-nearest-neighbor imputation. For a missing cell (i, k) the
// candidates are rows with feature k observed; distance to row i is the
// Euclidean distance over coordinates observed in both rows, normalized by
// the number of shared coordinates. The K nearest candidates contribute
// inverse-distance weights; exact matches (distance 0) take over entirely.
inline Matrix knn_impute(const Matrix& features, std::int32_t k_neighbors) {
    if (k_neighbors < 1) throw std::invalid_argument("neighbor count must be positive");
    const std::size_t n = features.rows();
    const std::size_t p = features.cols();

    std::vector<std::vector<std::uint8_t>> observed(n, std::vector<std::uint8_t>(p));
    for (std::size_t i = 0; i < n; ++i) {
        bool any = false;
        for (std::size_t j = 0; j < p; ++j) {
            observed[i][j] = !std::isnan(features(i, j));
            any = any || observed[i][j];
        }
        if (!any)
            throw std::runtime_error("row " + std::to_string(i + 1) + " has no observed features");
    }

    Matrix out = features;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < p; ++k) {
            if (observed[i][k]) continue;
            std::vector<std::pair<double, std::size_t>> candidates;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || !observed[j][k]) continue;
                double dist2 = 0.0;
                std::size_t shared = 0;
                for (std::size_t l = 0; l < p; ++l) {
                    if (!observed[i][l] || !observed[j][l]) continue;
                    const double diff = features(i, l) - features(j, l);
                    dist2 += diff * diff;
                    ++shared;
                }
                if (shared == 0) continue;
                candidates.emplace_back(std::sqrt(dist2 / static_cast<double>(shared)), j);
            }
            if (candidates.empty())
                throw std::runtime_error("no candidate neighbor for cell (" +
                                         std::to_string(i + 1) + "," + std::to_string(k + 1) + ")");
            std::sort(candidates.begin(), candidates.end());
            if (candidates.size() > static_cast<std::size_t>(k_neighbors))
                candidates.resize(static_cast<std::size_t>(k_neighbors));

            double zero_sum = 0.0;
            std::size_t zero_count = 0;
            for (const auto& [dist, j] : candidates) {
                if (dist == 0.0) {
                    zero_sum += features(j, k);
                    ++zero_count;
                }
            }
            if (zero_count > 0) {
                out(i, k) = zero_sum / static_cast<double>(zero_count);
            } else {
                double wsum = 0.0, acc = 0.0;
                for (const auto& [dist, j] : candidates) {
                    const double w = 1.0 / dist;
                    wsum += w;
                    acc += w * features(j, k);
                }
                out(i, k) = acc / wsum;
            }
        }
    }
    return out;
}

// Writes a survival table back out (time and status first, then features).
inline void write_survival_csv(std::ostream& os, const RawTable& table) {
    os << table.time_name << ',' << table.status_name;
    for (const std::string& name : table.feature_names) os << ',' << name;
    os << '\n';
    for (std::size_t r = 0; r < table.y.size(); ++r) {
        os << format_double(table.y[r]) << ',' << static_cast<int>(table.delta[r]);
        for (std::size_t k = 0; k < table.features.cols(); ++k) {
            const double v = table.features(r, k);
            os << ',';
            if (std::isnan(v)) os << "NA";
            else os << format_double(v);
        }
        os << '\n';
    }
}

inline void write_numeric_csv(std::ostream& os, const NumericTable& table) {
    for (std::size_t c = 0; c < table.names.size(); ++c)
        os << (c ? "," : "") << table.names[c];
    os << '\n';
    for (std::size_t r = 0; r < table.values.rows(); ++r) {
        for (std::size_t c = 0; c < table.values.cols(); ++c) {
            const double v = table.values(r, c);
            if (c) os << ',';
            if (std::isnan(v)) os << "NA";
            else os << format_double(v);
        }
        os << '\n';
    }
}

// Newline-separated numeric vector (the xi command's input format).
inline std::vector<double> load_vector(const std::string& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    std::vector<double> values;
    values.reserve(lines.size());
    for (std::size_t r = 0; r < lines.size(); ++r)
        values.push_back(detail::parse_number(lines[r], r + 1, "value"));
    return values;
}

// --- ranked feature list ----------------------------------------------------

inline void write_screening_csv(std::ostream& os, const ScreeningResult& result,
                                const std::vector<std::string>& feature_names) {
    os << "rank,feature,omega\n";
    for (std::size_t r = 0; r < result.order.size(); ++r) {
        const std::int32_t k = result.order[r];
        const std::string name = feature_names.empty() ? "x" + std::to_string(k + 1)
                                                       : feature_names[static_cast<std::size_t>(k)];
        os << (r + 1) << ',' << name << ',' << format_double(result.omega[k]) << '\n';
    }
}

struct RankedFeature {
    std::size_t rank;
    std::string feature;
    double omega;
};

inline std::vector<RankedFeature> read_screening_csv(const std::string& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    if (lines[0] != "rank,feature,omega") throw std::runtime_error("unexpected header");
    std::vector<RankedFeature> rows;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = detail::split_line(lines[r], ',');
        if (fields.size() != 3) throw std::runtime_error("malformed row " + std::to_string(r));
        rows.push_back({static_cast<std::size_t>(std::stoull(fields[0])), fields[1],
                        detail::parse_number(fields[2], r, "omega")});
    }
    return rows;
}

// --- experiment report ------------------------------------------------------
//
// CSV schema (one row per variant x model size):
//   variant,m,d,s_q05,s_q25,s_q50,s_q75,s_q95,iqr,p_a,realized_cr,
//   seconds_per_rep,p_<j>... (one column per active feature, 1-based label)

inline void write_report_csv(std::ostream& os, const ExperimentReport& report) {
    os << "variant,m,d,s_q05,s_q25,s_q50,s_q75,s_q95,iqr,p_a,realized_cr,seconds_per_rep";
    for (std::int32_t a : report.active) os << ",p_" << (a + 1);
    os << '\n';
    for (const ReportRow& row : report.rows) {
        os << row.variant << ',' << row.m_used << ',' << row.d << ',' << format_double(row.s_q05)
           << ',' << format_double(row.s_q25) << ',' << format_double(row.s_q50) << ','
           << format_double(row.s_q75) << ',' << format_double(row.s_q95) << ','
           << format_double(row.iqr) << ',' << format_double(row.p_a) << ','
           << format_double(row.realized_cr) << ',' << format_double(row.seconds_per_rep);
        for (double pj : row.p_j) os << ',' << format_double(pj);
        os << '\n';
    }
}

inline ExperimentReport read_report_csv(const std::string& path,
                                        const ExperimentReport& shell = {}) {
    const std::vector<std::string> lines = detail::read_lines(path);
    const auto header = detail::split_line(lines[0], ',');
    if (header.size() < 12 || header[0] != "variant") throw std::runtime_error("unexpected header");
    ExperimentReport report = shell;
    report.active.clear();
    for (std::size_t c = 12; c < header.size(); ++c) {
        if (header[c].rfind("p_", 0) != 0) throw std::runtime_error("unexpected header");
        report.active.push_back(static_cast<std::int32_t>(std::stol(header[c].substr(2))) - 1);
    }
    report.rows.clear();
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto f = detail::split_line(lines[r], ',');
        if (f.size() != header.size()) throw std::runtime_error("malformed row " + std::to_string(r));
        ReportRow row;
        row.variant = f[0];
        row.m_used = static_cast<std::int32_t>(std::stol(f[1]));
        row.d = static_cast<std::int32_t>(std::stol(f[2]));
        row.s_q05 = detail::parse_number(f[3], r, "s_q05");
        row.s_q25 = detail::parse_number(f[4], r, "s_q25");
        row.s_q50 = detail::parse_number(f[5], r, "s_q50");
        row.s_q75 = detail::parse_number(f[6], r, "s_q75");
        row.s_q95 = detail::parse_number(f[7], r, "s_q95");
        row.iqr = detail::parse_number(f[8], r, "iqr");
        row.p_a = detail::parse_number(f[9], r, "p_a");
        row.realized_cr = detail::parse_number(f[10], r, "realized_cr");
        row.seconds_per_rep = detail::parse_number(f[11], r, "seconds_per_rep");
        for (std::size_t c = 12; c < f.size(); ++c)
            row.p_j.push_back(detail::parse_number(f[c], r, header[c]));
        report.rows.push_back(std::move(row));
    }
    return report;
}

// Human-readable table mirroring the benchmark layout.
inline void write_report_text(std::ostream& os, const ExperimentReport& report) {
    os << "model=" << report.model << " n=" << report.n << " p=" << report.p
       << " reps=" << report.n_reps << " target_cr=" << report.target_cr
       << " c_upper=" << format_double(report.c_upper) << '\n';
    os << "active (1-based):";
    for (std::int32_t a : report.active) os << ' ' << (a + 1);
    os << "\n\n";
    os << "variant     M    d     S(5%)   S(25%)  S(50%)  S(75%)  S(95%)  IQR     P_a";
    for (std::int32_t a : report.active) os << "     P_" << (a + 1);
    os << '\n';
    for (const ReportRow& row : report.rows) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%-10s %4d %5d %8.0f %8.0f %7.0f %7.0f %7.0f %6.0f  %6.3f",
                      row.variant.c_str(), row.m_used, row.d, row.s_q05, row.s_q25, row.s_q50,
                      row.s_q75, row.s_q95, row.iqr, row.p_a);
        os << buf;
        for (double pj : row.p_j) {
            std::snprintf(buf, sizeof(buf), "  %6.3f", pj);
            os << buf;
        }
        os << '\n';
    }
}

} // namespace ximsis
