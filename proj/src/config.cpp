#include "wolffkit/config.hpp"

#include "wolffkit/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wolffkit::config {

namespace {

std::string escape_token(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

// Records the line:col where every value starts, keyed by JSON pointer. Runs
// only on text nlohmann has already accepted, so it skips validation.
class PositionScanner {
public:
    PositionScanner(const std::string& text, std::map<std::string, std::pair<int, int>>& out) : s_(text), out_(out) {}

    void run() { value(""); }

private:
    void advance() {
        if (s_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) advance();
    }

    std::string string_token() {
        advance();
        std::string out;
        while (i_ < s_.size() && s_[i_] != '"') {
            if (s_[i_] == '\\') {
                advance();
                const char e = s_[i_];
                if (e == 'u') {
                    for (int k = 0; k < 4; ++k) advance();
                    out += '?';
                } else {
                    out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
                }
                advance();
                continue;
            }
            out += s_[i_];
            advance();
        }
        advance();
        return out;
    }

    void value(const std::string& pointer) {
        skip_ws();
        if (i_ >= s_.size()) return;
        out_[pointer] = {line_, col_};
        const char c = s_[i_];
        if (c == '{') {
            advance();
            skip_ws();
            if (s_[i_] == '}') {
                advance();
                return;
            }
            while (true) {
                skip_ws();
                const std::string key = string_token();
                skip_ws();
                advance();  // ':'
                value(pointer + "/" + escape_token(key));
                skip_ws();
                const char sep = s_[i_];
                advance();
                if (sep != ',') return;
            }
        }
        if (c == '[') {
            advance();
            skip_ws();
            if (s_[i_] == ']') {
                advance();
                return;
            }
            for (std::size_t k = 0;; ++k) {
                value(pointer + "/" + std::to_string(k));
                skip_ws();
                const char sep = s_[i_];
                advance();
                if (sep != ',') return;
            }
        }
        if (c == '"') {
            string_token();
            return;
        }
        while (i_ < s_.size() && std::string_view(",]} \t\r\n").find(s_[i_]) == std::string_view::npos) advance();
    }

    const std::string& s_;
    std::map<std::string, std::pair<int, int>>& out_;
    std::size_t i_ = 0;
    int line_ = 1, col_ = 1;
};

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::string type_name(const Json& j) { return j.type_name(); }

Point build_point(const Node& node, const AmbientSpace& space) {
    const auto coords = node.numbers();
    if (static_cast<int>(coords.size()) != space.n)
        node.fail("expected a point with " + std::to_string(space.n) + " coordinates, got " +
                  std::to_string(coords.size()));
    return coords;
}

Point point_or_origin(const Node& node, const std::string& key, const AmbientSpace& space) {
    if (node.has(key)) return build_point(node.at(key), space);
    return Point(static_cast<std::size_t>(space.n), 0.0);
}

Node resolve_reference(const Node& node, const std::string& table) {
    if (!node.json().is_string()) return node;
    const std::string name = node.string();
    const Node root(node.document(), node.document().root(), "");
    if (!root.has(table) || !root.at(table).json().contains(name))
        node.fail("unknown " + table + " entry '" + name + "'");
    return root.at(table).at(name);
}

std::shared_ptr<const RadialProfile> build_profile(const Node& node) {
    const std::string kind = node.at("kind").string();
    if (kind == "uniform") return std::make_shared<UniformProfile>(node.at("value").number());
    if (kind == "annulus") return std::make_shared<AnnulusProfile>(node.at("value").number(), node.at("inner").number());
    if (kind == "power")
        return std::make_shared<PowerProfile>(node.at("coefficient").number(), node.at("exponent").number());
    if (kind == "step") return std::make_shared<StepProfile>(node.at("radii").numbers(), node.at("values").numbers());
    node.at("kind").fail("unknown profile kind '" + kind + "' (uniform, annulus, power, step)");
}

std::vector<StepPiece> read_step_csv(const Node& node, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) node.fail("cannot read step table " + path.string());
    std::vector<StepPiece> out;
    std::string line;
    int number = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        double v = 0, m = 0;
        bool ok = comma != std::string::npos;
        if (ok) {
            const auto a = std::from_chars(line.data(), line.data() + comma, v);
            const auto b = std::from_chars(line.data() + comma + 1, line.data() + line.size(), m);
            ok = a.ec == std::errc() && b.ec == std::errc() && a.ptr == line.data() + comma &&
                 b.ptr == line.data() + line.size();
        }
        if (!ok) {
            if (header_allowed) {
                header_allowed = false;
                continue;
            }
            throw ConfigError(path.string() + ":" + std::to_string(number), "expected 'value,measure', got '" + line + "'");
        }
        header_allowed = false;
        out.push_back({v, m});
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- document

Document Document::parse(const std::string& text, const std::string& label, std::filesystem::path base_dir) {
    Document doc;
    doc.label_ = label;
    doc.base_dir_ = std::move(base_dir);
    try {
        doc.root_ = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string what = e.what();
        if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
        throw ConfigError(label + ":" + std::to_string(line) + ":" + std::to_string(col), what);
    }
    PositionScanner(text, doc.positions_).run();
    return doc;
}

Document Document::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    auto base = path.parent_path();
    if (base.empty()) base = std::filesystem::current_path();
    return parse(ss.str(), path.string(), base);
}

std::string Document::locate(const std::string& pointer) const {
    std::string p = pointer;
    while (true) {
        if (const auto it = positions_.find(p); it != positions_.end())
            return label_ + ":" + std::to_string(it->second.first) + ":" + std::to_string(it->second.second);
        if (p.empty()) return label_;
        p = p.substr(0, p.rfind('/'));
    }
}

// ---------------------------------------------------------------- nodes

void Node::fail(const std::string& what) const {
    throw ConfigError(doc_->locate(pointer_) + " (" + (pointer_.empty() ? "/" : pointer_) + ")", what);
}

bool Node::has(const std::string& key) const { return value_->is_object() && value_->contains(key); }

Node Node::at(const std::string& key) const {
    if (!value_->is_object()) fail("expected an object, got " + type_name(*value_));
    const auto it = value_->find(key);
    if (it == value_->end()) fail("missing required key '" + key + "'");
    return Node(*doc_, *it, pointer_ + "/" + escape_token(key));
}

Node Node::at(std::size_t index) const {
    if (!value_->is_array()) fail("expected an array, got " + type_name(*value_));
    if (index >= value_->size()) fail("index " + std::to_string(index) + " out of range");
    return Node(*doc_, (*value_)[index], pointer_ + "/" + std::to_string(index));
}

std::vector<Node> Node::items() const {
    if (!value_->is_array()) fail("expected an array, got " + type_name(*value_));
    std::vector<Node> out;
    for (std::size_t i = 0; i < value_->size(); ++i) out.push_back(at(i));
    return out;
}

double Node::number() const {
    if (!value_->is_number()) fail("expected a number, got " + type_name(*value_));
    const double v = value_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
}

double Node::positive() const {
    const double v = number();
    if (!(v > 0)) fail("expected a number > 0");
    return v;
}

int Node::integer() const {
    if (!value_->is_number_integer()) fail("expected an integer, got " + type_name(*value_));
    return value_->get<int>();
}

std::string Node::string() const {
    if (!value_->is_string()) fail("expected a string, got " + type_name(*value_));
    return value_->get<std::string>();
}

bool Node::boolean() const {
    if (!value_->is_boolean()) fail("expected true or false, got " + type_name(*value_));
    return value_->get<bool>();
}

std::vector<double> Node::numbers() const {
    if (value_->is_number()) return {number()};
    std::vector<double> out;
    for (const auto& item : items()) out.push_back(item.number());
    return out;
}

double Node::number_or(const std::string& key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
}

int Node::integer_or(const std::string& key, int fallback) const { return has(key) ? at(key).integer() : fallback; }

std::string Node::string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? at(key).string() : fallback;
}

// ---------------------------------------------------------------- builders

NFunction build_nfunction(const Node& raw) {
    const Node node = resolve_reference(raw, "nfunctions");
    const std::string kind = node.at("kind").string();
    try {
        if (kind == "power") return NFunction::power(node.at("p").number());
        if (kind == "zygmund") return NFunction::zygmund(node.at("p").number(), node.at("alpha").number());
        if (kind == "product") {
            const Node factors = node.at("factors");
            if (factors.json().size() != 2) factors.fail("a product needs exactly two factors");
            return NFunction::product(build_nfunction(factors.at(0)), build_nfunction(factors.at(1)));
        }
        if (kind == "composition")
            return NFunction::composition(build_nfunction(node.at("outer")), build_nfunction(node.at("inner")));
        if (kind == "table") {
            std::vector<TablePoint> points;
            for (const auto& p : node.at("points").items()) {
                const auto v = p.numbers();
                if (v.size() != 3) p.fail("table points are [t, G, g]");
                points.push_back({v[0], v[1], v[2]});
            }
            return NFunction::table(std::move(points));
        }
    } catch (const DomainError& e) {
        node.fail(e.what());
    } catch (const StructuralError& e) {
        node.fail(e.what());
    }
    node.at("kind").fail("unknown N-function kind '" + kind + "' (power, zygmund, product, composition, table)");
}

std::shared_ptr<RadonMeasure> build_measure(const Node& raw, const AmbientSpace& space, const NFunction& f) {
    const Node node = resolve_reference(raw, "measures");
    const std::string kind = node.at("kind").string();
    try {
        if (kind == "zero") return zero_measure(space);
        if (kind == "dirac") return dirac(space, point_or_origin(node, "at", space), node.number_or("mass", 1.0));
        if (kind == "atoms") {
            std::vector<Atom> atoms;
            for (const auto& a : node.at("atoms").items())
                atoms.push_back({build_point(a.at("at"), space), a.at("mass").number()});
            return std::make_shared<AtomSum>(space, std::move(atoms));
        }
        if (kind == "uniform_ball")
            return uniform_ball(space, node.at("radius").positive(), node.number_or("mass", 1.0));
        if (kind == "uniform_annulus")
            return uniform_annulus(space, node.at("inner").number(), node.at("outer").number(),
                                   node.number_or("mass", 1.0));
        if (kind == "radial")
            return std::make_shared<RadialDensity>(space, point_or_origin(node, "center", space),
                                                   build_profile(node.at("profile")), node.at("outer").positive());
        if (kind == "morrey")
            return construct_morrey_measure(f, node.at("theta").number(), space, node.number_or("outer", 1.0));
        if (kind == "grid") {
            const auto inner = build_measure(node.at("of"), space, f);
            const auto radial = std::dynamic_pointer_cast<RadialDensity>(inner);
            if (!radial) node.at("of").fail("grid discretization needs a radial density");
            return discretize(*radial, node.at("h").positive());
        }
    } catch (const DomainError& e) {
        node.fail(e.what());
    } catch (const StructuralError& e) {
        node.fail(e.what());
    }
    node.at("kind").fail("unknown measure kind '" + kind +
                         "' (zero, dirac, atoms, uniform_ball, uniform_annulus, radial, morrey, grid)");
}

SampledFunction build_sampled_function(const Node& node) {
    std::vector<StepPiece> pieces;
    if (node.has("steps")) {
        for (const auto& row : node.at("steps").items()) {
            const auto v = row.numbers();
            if (v.size() != 2) row.fail("steps are [value, measure]");
            pieces.push_back({v[0], v[1]});
        }
    } else if (node.has("csv")) {
        pieces = read_step_csv(node.at("csv"), node.document().base_dir() / node.at("csv").string());
    } else {
        node.fail("a step function needs 'steps' or 'csv'");
    }
    try {
        if (!node.has("tail")) return SampledFunction(std::move(pieces));
        const Node tail = node.at("tail");
        const std::string kind = tail.string_or("tail", "power");
        if (kind != "power") tail.at("tail").fail("only power tails are supported");
        const double exponent = tail.at("exponent").number();
        if (tail.has("span")) return SampledFunction(std::move(pieces), PowerTail{exponent, tail.at("span").positive()});
        return SampledFunction::with_power_tail(std::move(pieces), exponent);
    } catch (const DomainError& e) {
        node.fail(e.what());
    }
}

}  // namespace wolffkit::config
