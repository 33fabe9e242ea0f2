#pragma once

// Report rows and their serializations. The CSV body (everything after the
// first line) depends only on the rows; the first line carries the schema id
// and the generation time.

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wolffkit::report {

inline constexpr std::string_view kSchema = "wolffkit-report v1";

enum class Outcome { pass, fail, warn };
std::string_view to_string(Outcome o);

struct Row {
    std::string id;
    std::string operation;
    std::string digest;  ///< of the instance inputs
    double value = 0.0;
    std::string status;
    double error = 0.0;
    std::string expected;
    Outcome outcome = Outcome::pass;
    std::string detail;  ///< key=value pairs separated by ';'
    double seconds = 0.0;  ///< wall time, summary only
};

/// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

/// FNV-1a 64-bit hash as 16 hex digits.
std::string digest(std::string_view text);

std::string csv_body(const std::vector<Row>& rows);
std::string csv_document(const std::vector<Row>& rows, const std::string& timestamp);
nlohmann::json rows_json(const std::vector<Row>& rows);

std::string utc_timestamp();

}  // namespace wolffkit::report
