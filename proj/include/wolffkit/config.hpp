#pragma once

// JSON run configurations: loading with line:col diagnostics, typed access
// addressed by JSON pointer, and builders for N-functions, measures and step
// functions.

#include "wolffkit/measure.hpp"
#include "wolffkit/orlicz.hpp"
#include "wolffkit/rearrangement.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace wolffkit::config {

using Json = nlohmann::json;

class Document {
public:
    /// Throws ConfigError for unreadable files and JSON syntax errors.
    static Document load(const std::filesystem::path& path);
    static Document parse(const std::string& text, const std::string& label,
                          std::filesystem::path base_dir = std::filesystem::current_path());

    const Json& root() const { return root_; }
    const std::string& label() const { return label_; }
    const std::filesystem::path& base_dir() const { return base_dir_; }
    /// "label:line:col" of the value at `pointer`, or of its nearest located ancestor.
    std::string locate(const std::string& pointer) const;

private:
    Json root_;
    std::string label_;
    std::filesystem::path base_dir_;
    std::map<std::string, std::pair<int, int>> positions_;
};

class Node {
public:
    Node(const Document& doc, const Json& value, std::string pointer)
        : doc_(&doc), value_(&value), pointer_(std::move(pointer)) {}

    const Json& json() const { return *value_; }
    const std::string& pointer() const { return pointer_; }
    const Document& document() const { return *doc_; }

    bool has(const std::string& key) const;
    Node at(const std::string& key) const;
    Node at(std::size_t index) const;
    std::vector<Node> items() const;  ///< elements of an array

    double number() const;
    double positive() const;
    int integer() const;
    std::string string() const;
    bool boolean() const;
    std::vector<double> numbers() const;

    double number_or(const std::string& key, double fallback) const;
    int integer_or(const std::string& key, int fallback) const;
    std::string string_or(const std::string& key, const std::string& fallback) const;

    [[noreturn]] void fail(const std::string& what) const;

private:
    const Document* doc_;
    const Json* value_;
    std::string pointer_;
};

/// {"kind": "power", "p"} | {"kind": "zygmund", "p", "alpha"} |
/// {"kind": "product", "factors": [a, b]} | {"kind": "composition", "outer", "inner"} |
/// {"kind": "table", "points": [[t, G, g], ...]}
NFunction build_nfunction(const Node& node);

/// Measures by "kind": zero, dirac, atoms, uniform_ball, uniform_annulus,
/// radial, morrey (uses `f`), grid (discretized radial measure).
std::shared_ptr<RadonMeasure> build_measure(const Node& node, const AmbientSpace& space, const NFunction& f);

/// {"steps": [[value, measure], ...]} or {"csv": "file"} with an optional
/// "tail": {"tail": "power", "exponent": e, "span": s}.
SampledFunction build_sampled_function(const Node& node);

}  // namespace wolffkit::config
