#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace glyco {

inline constexpr double kMaxGlucose = 500.0;

/// Timestamped blood-glucose readings of one patient.
/// Timestamps are minutes since the start of the series, values mg/dL.
struct GlucoseSeries {
    std::string patient_id;
    std::vector<double> timestamps;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }

    /// Throws DataError unless timestamps are strictly increasing, lengths
    /// match, and every value is finite and in (0, 500].
    void validate() const;
};

/// Reads `patient_id,timestamp_min,glucose_mgdl` CSV (header required).
/// One series per patient in order of first appearance, sorted by timestamp.
/// Throws ParseError (with line number) on malformed rows and DataError on
/// out-of-range glucose or duplicate (patient, timestamp) pairs.
std::vector<GlucoseSeries> load_series(std::istream& in);
std::vector<GlucoseSeries> load_series(const std::filesystem::path& path);

void write_series(std::ostream& out, std::span<const GlucoseSeries> series);
void write_series(const std::filesystem::path& path, std::span<const GlucoseSeries> series);

}  // namespace glyco
