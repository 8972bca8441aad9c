// report.hpp - CSV emission with an embedded, replayable run record

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nmcorr/measure.hpp"

namespace nmcorr::cli {

struct RunRecord {
    std::string command_line;
    ParameterRecord params;
    UnitConversion units;
    double tau_max{200.0};
    std::size_t points{2000};
    bool nprime{false};
    std::string route;
    double wall_time_s{0.0};
    std::string timestamp;

    /// Flags that reproduce this run when passed to `nmcorr curve`.
    std::string replay_flags() const;
    /// Comment lines (without the column header), each starting with "# ".
    std::vector<std::string> header_lines() const;
};

inline constexpr const char* kCsvHeader = "# tau*omega0,re_gE,im_gE,re_gM,im_gM,N";

/// %.9g with negative zero printed as 0.
std::string format_value(double x);

/// Header comments, column header, then one row per tau sample.  Throws
/// NumericalError if any value is not finite.
void write_curve_csv(std::ostream& os, const MeasureCurve& curve, const RunRecord& rec);

/// The flags stored on the "# record:" line of a CSV written by write_curve_csv.
std::vector<std::string> read_record_flags(const std::string& path);

std::string iso_timestamp();

}  // namespace nmcorr::cli
