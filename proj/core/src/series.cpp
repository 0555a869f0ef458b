#include "glyco/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include "glyco/csv.hpp"
#include "glyco/error.hpp"

namespace glyco {

namespace {

constexpr std::string_view kHeader = "patient_id,timestamp_min,glucose_mgdl";

struct Row {
    double t;
    double v;
    std::size_t line;
};

}  // namespace

void GlucoseSeries::validate() const {
    if (timestamps.size() != values.size()) {
        throw DataError("series " + patient_id + ": timestamp/value length mismatch");
    }
    if (values.empty()) {
        throw DataError("series " + patient_id + ": no readings");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] <= 0.0 || values[i] > kMaxGlucose) {
            throw DataError("series " + patient_id + ": glucose " + csv::format_double(values[i]) +
                            " outside (0, 500]");
        }
        if (!std::isfinite(timestamps[i]) || (i > 0 && timestamps[i] <= timestamps[i - 1])) {
            throw DataError("series " + patient_id + ": timestamps not strictly increasing at index " +
                            std::to_string(i));
        }
    }
}

std::vector<GlucoseSeries> load_series(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<std::string> order;
    std::map<std::string, std::vector<Row>, std::less<>> rows;

    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = csv::split(line);
        if (fields.size() == 1 && fields[0].empty()) {
            continue;
        }
        if (!have_header) {
            std::string joined;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                joined += (i ? "," : "") + std::string(fields[i]);
            }
            if (joined != kHeader) {
                throw ParseError(line_no, "expected header '" + std::string(kHeader) + "'");
            }
            have_header = true;
            continue;
        }
        if (fields.size() != 3) {
            throw ParseError(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
        }
        if (fields[0].empty()) {
            throw ParseError(line_no, "empty patient_id");
        }
        double t = 0.0;
        double v = 0.0;
        if (!csv::parse_double(fields[1], t)) {
            throw ParseError(line_no, "bad timestamp '" + std::string(fields[1]) + "'");
        }
        if (!csv::parse_double(fields[2], v)) {
            throw ParseError(line_no, "bad glucose value '" + std::string(fields[2]) + "'");
        }
        if (v <= 0.0 || v > kMaxGlucose) {
            throw DataError("line " + std::to_string(line_no) + ": glucose " + std::string(fields[2]) +
                            " outside (0, 500]");
        }
        auto it = rows.find(fields[0]);
        if (it == rows.end()) {
            order.emplace_back(fields[0]);
            it = rows.emplace(std::string(fields[0]), std::vector<Row>{}).first;
        }
        it->second.push_back({t, v, line_no});
    }

    std::vector<GlucoseSeries> out;
    out.reserve(order.size());
    for (const auto& id : order) {
        auto& r = rows.find(id)->second;
        std::stable_sort(r.begin(), r.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
        GlucoseSeries s;
        s.patient_id = id;
        s.timestamps.reserve(r.size());
        s.values.reserve(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i > 0 && r[i].t == r[i - 1].t) {
                throw DataError("line " + std::to_string(r[i].line) + ": duplicate timestamp " +
                                csv::format_double(r[i].t) + " for patient " + id);
            }
            s.timestamps.push_back(r[i].t);
            s.values.push_back(r[i].v);
        }
        s.validate();
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<GlucoseSeries> load_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return load_series(in);
}

void write_series(std::ostream& out, std::span<const GlucoseSeries> series) {
    out << kHeader << '\n';
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            out << s.patient_id << ',' << csv::format_double(s.timestamps[i]) << ','
                << csv::format_double(s.values[i]) << '\n';
        }
    }
}

void write_series(const std::filesystem::path& path, std::span<const GlucoseSeries> series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    write_series(out, series);
    if (!out) {
        throw DataError("error writing " + path.string());
    }
}

}  // namespace glyco
