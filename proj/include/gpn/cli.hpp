#pragma once

#include <iosfwd>
#include <string>

#include "gpn/dataset.hpp"

namespace gpn::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;   // format / option / file problems
inline constexpr int kExitDataError = 3;    // unsorted, duplicate, constant y
inline constexpr int kExitNumericError = 4; // AllInfeasible

/// 17 significant digits: doubles survive a write/read round trip.
std::string format_double(double v);

/// Reads an `x,y` CSV (header required). Throws CsvFormatError with the
/// offending line number, UnsortedPoints, or DuplicatePoints.
Dataset load_csv(std::istream& in);
Dataset load_csv_file(const std::string& path);

/// Full command-line front end; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace gpn::cli
