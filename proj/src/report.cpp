#include "wolffkit/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>

namespace wolffkit::report {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

nlohmann::json json_number(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);
}

}  // namespace

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::pass: return "pass";
        case Outcome::fail: return "fail";
        case Outcome::warn: return "warn";
    }
    return "fail";
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string digest(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string csv_body(const std::vector<Row>& rows) {
    std::string out = "id,operation,inputs_digest,value,status,error,expected,outcome,detail\n";
    for (const auto& r : rows) {
        out += csv_field(r.id) + ',' + csv_field(r.operation) + ',' + r.digest + ',' + format_number(r.value) + ',' +
               csv_field(r.status) + ',' + format_number(r.error) + ',' + csv_field(r.expected) + ',' +
               std::string(to_string(r.outcome)) + ',' + csv_field(r.detail) + '\n';
    }
    return out;
}

std::string csv_document(const std::vector<Row>& rows, const std::string& timestamp) {
    return "# " + std::string(kSchema) + " generated " + timestamp + "\n" + csv_body(rows);
}

nlohmann::json rows_json(const std::vector<Row>& rows) {
    auto out = nlohmann::json::array();
    for (const auto& r : rows) {
        out.push_back({{"id", r.id},
                       {"operation", r.operation},
                       {"inputs_digest", r.digest},
                       {"value", json_number(r.value)},
                       {"status", r.status},
                       {"error", json_number(r.error)},
                       {"expected", r.expected},
                       {"outcome", std::string(to_string(r.outcome))},
                       {"detail", r.detail}});
    }
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

}  // namespace wolffkit::report
