#include "wolffkit/commands.hpp"

#include "wolffkit/errors.hpp"
#include "wolffkit/parallel.hpp"
#include "wolffkit/radial.hpp"
#include "wolffkit/rearrangement.hpp"
#include "wolffkit/wolff.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <limits>

namespace wolffkit::cli {

namespace {

using config::Node;
using report::Outcome;
using report::Row;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Row make_row(std::string id, std::string operation, std::string digest, double value, std::string status,
             double error, std::string expected) {
    Row r;
    r.id = std::move(id);
    r.operation = std::move(operation);
    r.digest = std::move(digest);
    r.value = value;
    r.status = std::move(status);
    r.error = error;
    r.expected = std::move(expected);
    return r;
}

std::string num(double x) { return report::format_number(x); }

std::string point_text(const Point& p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.size(); ++i) out += (i ? " " : "") + num(p[i]);
    return out + ")";
}

struct Task {
    std::string id, operation, digest;
    std::function<std::vector<Row>()> run;
};

struct Context {
    const config::Document& doc;
    Node root;
    RunSettings settings;
    mutable std::set<std::string> ids;
};

// Shared fields of an instance: id, ambient space, N-function, and a digest
// over the instance with every named reference expanded.
struct Instance {
    std::string id;
    std::string digest;
    AmbientSpace space{3};
    std::optional<NFunction> f;
    double tol = 1e-9;  ///< run tolerance unless the instance sets "tol"
};

std::string numbered(const std::string& section, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "-%03zu", index);
    return section + buf;
}

config::Json expanded(const Node& node, const Node& root) {
    config::Json out = node.json();
    for (const auto& [key, table] : {std::pair{"measure", "measures"}, std::pair{"nfunction", "nfunctions"}}) {
        if (out.contains(key) && out[key].is_string() && root.has(table) && root.at(table).json().contains(out[key]))
            out[key] = root.at(table).json()[out[key].get<std::string>()];
    }
    return out;
}

Instance instance(const Context& ctx, const Node& item, const std::string& section, std::size_t index,
                  bool needs_f = true) {
    Instance in;
    in.id = item.has("id") ? item.at("id").string() : numbered(section, index);
    if (!ctx.ids.insert(in.id).second) (item.has("id") ? item.at("id") : item).fail("duplicate instance id '" + in.id + "'");
    const Node n_node = item.has("n") ? item.at("n") : ctx.root.has("n") ? ctx.root.at("n") : item.at("n");
    const int n = n_node.integer();
    if (n < 1 || n > 16) n_node.fail("dimension must lie in 1..16");
    in.space = AmbientSpace(n);
    if (needs_f) {
        const Node f_node = item.has("nfunction") ? item.at("nfunction") : ctx.root.has("nfunction")
                                                                                ? ctx.root.at("nfunction")
                                                                                : item.at("nfunction");
        in.f = config::build_nfunction(f_node);
    }
    config::Json keyed = expanded(item, ctx.root);
    if (!keyed.contains("n")) keyed["n"] = n;
    if (needs_f && !keyed.contains("nfunction") && ctx.root.has("nfunction")) keyed["nfunction"] = ctx.root.json()["nfunction"];
    in.tol = item.has("tol") ? item.at("tol").positive() : ctx.settings.tol;
    in.digest = report::digest(keyed.dump() + "|tol=" + num(in.tol));
    return in;
}

std::string expectation(const Node& item, const std::string& fallback, std::initializer_list<const char*> allowed) {
    const std::string e = item.string_or("expect", fallback);
    for (const char* a : allowed)
        if (e == a) return e;
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    item.at("expect").fail("expect must be one of " + list);
}

std::shared_ptr<RadonMeasure> measure_of(const Node& item, const Instance& in) {
    return config::build_measure(item.at("measure"), in.space, *in.f);
}

std::vector<Point> points_of(const Node& node, const AmbientSpace& space) {
    std::vector<Point> out;
    auto one = [&](const Node& p) {
        const auto v = p.numbers();
        if (static_cast<int>(v.size()) != space.n)
            p.fail("expected a point with " + std::to_string(space.n) + " coordinates");
        out.push_back(v);
    };
    if (!node.json().is_array() || node.json().empty()) node.fail("expected a point or a list of points");
    if (node.json()[0].is_array()) {
        for (const auto& p : node.items()) one(p);
    } else {
        one(node);
    }
    return out;
}

std::vector<double> positives(const Node& node) {
    auto v = node.numbers();
    if (v.empty()) node.fail("expected at least one value");
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!(v[i] > 0)) (node.json().is_array() ? node.at(i) : node).fail("expected a number > 0");
    return v;
}

// expected value check shared by potentials and energies
struct ValueCheck {
    std::optional<double> value;
    double tol = 0.0;
};

ValueCheck value_check(const Node& item) {
    ValueCheck c;
    if (item.has("value")) {
        c.value = item.at("value").number();
        c.tol = item.has("value_tol") ? item.at("value_tol").positive() : 1e-8 * std::max(1.0, std::abs(*c.value));
    }
    return c;
}

Outcome wolff_outcome(const WolffResult& w, const std::string& expect, const ValueCheck& check, std::string& note) {
    if (std::string(to_string(w.status)) != expect) {
        note = "status " + std::string(to_string(w.status)) + (w.diagnostic.empty() ? "" : " (" + w.diagnostic + ")");
        return Outcome::fail;
    }
    if (check.value && w.status == Status::converged && std::abs(w.value - *check.value) > check.tol) {
        note = "value differs from " + num(*check.value) + " by more than " + num(check.tol);
        return Outcome::fail;
    }
    return Outcome::pass;
}

WolffOptions wolff_options(double tol) {
    WolffOptions o;
    o.tol = tol;
    o.jobs = 1;
    return o;
}

// ---------------------------------------------------------------- potential

std::vector<Task> potential_tasks(const Context& ctx, const Node& section) {
    std::vector<Task> tasks;
    for (const auto& item : section.items()) {
        const auto index = tasks.size();
        auto in = instance(ctx, item, "potential", index);
        auto m = measure_of(item, in);
        const auto points = points_of(item.at("x0"), in.space);
        const auto radii = positives(item.at("R"));
        const std::string expect = expectation(item, "converged", {"converged", "diverges"});
        const auto check = value_check(item);
        const auto opts = wolff_options(in.tol);
        tasks.push_back({in.id, "wolff_potential", in.digest, [=] {
                             std::vector<Row> rows;
                             for (const auto& x : points) {
                                 for (double R : radii) {
                                     const auto w = wolff_potential(*m, *in.f, x, R, opts);
                                     Row row = make_row(in.id, "wolff_potential", in.digest, w.value, std::string(to_string(w.status)),
                                             w.error, expect);
                                     std::string note;
                                     row.outcome = wolff_outcome(w, expect, check, note);
                                     row.detail = "x0=" + point_text(x) + ";R=" + num(R) + ";panels=" + std::to_string(w.panels);
                                     if (!note.empty()) row.detail += ";note=" + note;
                                     rows.push_back(std::move(row));
                                 }
                             }
                             return rows;
                         }});
    }
    return tasks;
}

// ---------------------------------------------------------------- oracle

std::shared_ptr<RadonMeasure> radial_measure(const Node& item, const Instance& in, double outer) {
    auto m = measure_of(item, in);
    if (!m->radial_about_origin()) item.at("measure").fail("the radial oracle needs a measure radial about the origin");
    const double total = m->total_mass();
    if (std::abs(total - m->radial_mass(outer)) > 1e-12 * std::max(total, 1e-300))
        item.at("measure").fail("measure is not carried by B(0, R_out)");
    return m;
}

std::vector<Task> oracle_tasks(const Context& ctx, const Node& section) {
    std::vector<Task> tasks;
    for (const auto& item : section.items()) {
        auto in = instance(ctx, item, "oracle", tasks.size());
        const double outer = item.at("R_out").positive();
        auto m = radial_measure(item, in, outer);
        std::vector<double> radii;
        if (item.has("evaluate")) {
            radii = item.at("evaluate").numbers();
            for (double r : radii)
                if (!(r >= 0)) item.at("evaluate").fail("radii must be >= 0");
        }
        std::vector<double> expected_u;
        if (item.has("expect_u")) {
            expected_u = item.at("expect_u").numbers();
            if (expected_u.size() != radii.size()) item.at("expect_u").fail("expect_u needs one value per evaluate radius");
        }
        const double u_tol = item.has("u_rel_tol") ? item.at("u_rel_tol").positive() : 1e-7;
        std::optional<std::string> expect_center;
        if (item.has("expect_center")) {
            expect_center = item.at("expect_center").string();
            if (*expect_center != "converged" && *expect_center != "diverges")
                item.at("expect_center").fail("expect_center must be converged or diverges");
        }
        std::optional<double> weak_tol;
        if (item.has("weak_form_tol")) weak_tol = item.at("weak_form_tol").positive();
        struct Fit {
            double lo, hi;
            bool log_term;
            std::optional<double> exponent, log_exponent;
            double tol;
        };
        std::optional<Fit> fit;
        if (item.has("fit")) {
            const Node f = item.at("fit");
            fit = Fit{f.number_or("lo", 1e-4), f.number_or("hi", 1e-2),
                      f.has("log_term") && f.at("log_term").boolean(), std::nullopt, std::nullopt,
                      f.number_or("tol", 0.05)};
            if (!(fit->lo > 0 && fit->hi > fit->lo && fit->hi < outer)) f.fail("fit range needs 0 < lo < hi < R_out");
            if (f.has("exponent")) fit->exponent = f.at("exponent").number();
            if (f.has("log_exponent")) fit->log_exponent = f.at("log_exponent").number();
        }
        const bool int_div = item.has("int_div") && item.at("int_div").boolean();
        std::optional<std::string> expect_int_div;
        if (item.has("expect_int_div")) {
            expect_int_div = item.at("expect_int_div").string();
            if (*expect_int_div != "bounded" && *expect_int_div != "unbounded")
                item.at("expect_int_div").fail("expect_int_div must be bounded or unbounded");
        }
        RadialOptions ropts;
        ropts.tol = std::min(1e-10, in.tol);

        tasks.push_back({in.id, "radial_solution", in.digest, [=] {
                             std::vector<Row> rows;
                             const auto sol = solve_radial(*in.f, m, outer, ropts);
                             auto row = [&](std::string op, double value, std::string status, double error) {
                                 return make_row(in.id, std::move(op), in.digest, value, std::move(status), error, "");
                             };

                             const auto& c = sol.center();
                             Row center = row("u_center", c.value, std::string(to_string(c.status)), c.error);
                             if (expect_center) {
                                 center.expected = *expect_center;
                                 if (center.status != *expect_center) center.outcome = Outcome::fail;
                             } else if (c.status == Status::undecided) {
                                 center.outcome = Outcome::warn;
                             }
                             center.detail = c.diagnostic.empty() ? "" : "note=" + c.diagnostic;
                             rows.push_back(center);

                             for (std::size_t i = 0; i < radii.size(); ++i) {
                                 const auto u = sol.value_estimate(radii[i]);
                                 Row r = row("u", u.value, std::isfinite(u.value) ? "converged" : "diverges", u.error);
                                 r.detail = "r=" + num(radii[i]);
                                 if (!expected_u.empty()) {
                                     r.expected = num(expected_u[i]);
                                     const double rel = std::abs(u.value / expected_u[i] - 1);
                                     r.detail += ";rel_error=" + num(rel);
                                     if (!(rel <= u_tol)) r.outcome = Outcome::fail;
                                 }
                                 rows.push_back(r);
                             }

                             if (weak_tol) {
                                 const auto wf = verify_weak_form(sol, *weak_tol);
                                 Row r = row("weak_form", wf.max_residual, wf.passed ? "satisfied" : "violated", 0.0);
                                 r.expected = "satisfied";
                                 r.outcome = wf.passed ? Outcome::pass : Outcome::fail;
                                 r.detail = "tol=" + num(*weak_tol) + ";bumps=" + std::to_string(wf.residuals.size()) +
                                            ";worst=[" + num(wf.worst_bump.lo) + " " + num(wf.worst_bump.hi) + "]";
                                 rows.push_back(r);
                             }

                             if (fit) {
                                 const auto a = fit_asymptotics(sol, fit->lo, fit->hi, fit->log_term);
                                 Row r = row("fit_asymptotics", a.exponent, "converged", a.rms);
                                 r.detail = "lo=" + num(fit->lo) + ";hi=" + num(fit->hi);
                                 if (a.log_exponent) r.detail += ";log_exponent=" + num(*a.log_exponent);
                                 bool ok = true;
                                 if (fit->exponent) {
                                     r.expected = num(*fit->exponent);
                                     ok = ok && std::abs(a.exponent - *fit->exponent) <= fit->tol;
                                 }
                                 if (fit->log_exponent && a.log_exponent) {
                                     r.detail += ";expected_log_exponent=" + num(*fit->log_exponent);
                                     ok = ok && std::abs(*a.log_exponent - *fit->log_exponent) <= 0.2;
                                 }
                                 r.outcome = ok ? Outcome::pass : Outcome::fail;
                                 rows.push_back(r);
                             }

                             if (int_div) {
                                 const auto d = check_int_div(*in.f, in.space.n);
                                 Row r = row("int_div", d.bounded ? 1.0 : 0.0, d.bounded ? "bounded" : "unbounded", 0.0);
                                 r.detail = "near_zero=" + std::string(quad::to_string(d.near_zero.verdict)) +
                                            ";at_infinity=" + std::string(quad::to_string(d.at_infinity.verdict));
                                 if (expect_int_div) r.expected = *expect_int_div;
                                 if (!d.consistent || (expect_int_div && r.status != *expect_int_div)) r.outcome = Outcome::fail;
                                 rows.push_back(r);
                             }
                             return rows;
                         }});
    }
    return tasks;
}

// ---------------------------------------------------------------- verify-bounds

std::pair<double, double> bracket(const Node& node) {
    const auto v = node.numbers();
    if (v.size() != 2 || !(v[0] >= 0 && v[1] >= v[0])) node.fail("a bracket is [lo, hi] with 0 <= lo <= hi");
    return {v[0], v[1]};
}

struct BoundLimits {
    std::pair<double, double> low{0.02, 50}, up{0.02, 50};
    double spread = 10.0;
};

// ratios of one instance, filled by its task and aggregated after the run
struct InstanceRatios {
    using Cell = std::tuple<std::string, double, double>;  // ratio name, probe, R
    std::string family;
    std::vector<double> low, up;
    std::map<Cell, double> cells;
};

bool within(double v, std::pair<double, double> b) { return v >= b.first && v <= b.second; }

std::vector<Task> bound_tasks(const Context& ctx, const Node& list, const BoundLimits& limits,
                              const std::shared_ptr<std::vector<InstanceRatios>>& ratios) {
    std::vector<Task> tasks;
    for (const auto& item : list.items()) {
        auto in = instance(ctx, item, "bound", tasks.size());
        const double outer = item.at("R_out").positive();
        auto m = radial_measure(item, in, outer);
        const auto probes = item.at("probes").numbers();
        for (double p : probes)
            if (!(p >= 0 && p < outer)) item.at("probes").fail("probes must lie in [0, R_out)");
        const auto radii = positives(item.at("R_sweep"));
        const auto opts = wolff_options(in.tol);
        RadialOptions ropts;
        ropts.tol = std::min(1e-10, in.tol);
        const std::size_t slot = ratios->size();
        ratios->emplace_back().family = item.string_or("family", "");
        tasks.push_back({in.id, "two_sided_bound", in.digest, [=] {
                             const auto sol = solve_radial(*in.f, m, outer, ropts);
                             const auto rep = verify_two_sided_bound(sol, probes, radii, opts);
                             auto& mine = (*ratios)[slot];
                             std::vector<Row> rows;
                             for (const auto& b : rep.rows) {
                                 const bool vacuous = b.ratio_up && *b.ratio_up == 0.0;
                                 Row r = make_row(in.id, "two_sided_bound", in.digest, b.ratio_up.value_or(kNaN),
                                       b.skipped ? "skipped" : std::string(to_string(b.wolff.status)), b.wolff.error,
                                       "[" + num(limits.up.first) + " " + num(limits.up.second) + "]");
                                 r.detail = "probe=" + num(b.probe) + ";R=" + num(b.R) + ";u=" + num(b.u) +
                                            ";inf=" + num(b.inf_u) + ";W=" + num(b.wolff.value) +
                                            ";ratio_low=" + (b.ratio_low ? num(*b.ratio_low) : "vacuous");
                                 if (b.skipped) {
                                     r.detail += ";reason=" + b.reason;
                                     r.outcome = std::isfinite(b.u) ? Outcome::fail : Outcome::warn;
                                 } else if (vacuous) {
                                     r.detail += ";note=u vanishes, bound holds trivially";
                                 } else {
                                     if (b.ratio_up) {
                                         mine.up.push_back(*b.ratio_up);
                                         mine.cells[{"ratio_up", b.probe, b.R}] = *b.ratio_up;
                                     }
                                     if (b.ratio_low) {
                                         mine.low.push_back(*b.ratio_low);
                                         mine.cells[{"ratio_low", b.probe, b.R}] = *b.ratio_low;
                                     }
                                     const bool ok = (!b.ratio_up || within(*b.ratio_up, limits.up)) &&
                                                     (!b.ratio_low || within(*b.ratio_low, limits.low));
                                     r.outcome = ok ? Outcome::pass : Outcome::fail;
                                 }
                                 rows.push_back(std::move(r));
                             }
                             return rows;
                         }});
    }
    return tasks;
}

// Suite bracket rows and, for instances tagged with a family, the spread
// max/min of all their ratios.
std::vector<Row> bracket_rows(const std::vector<InstanceRatios>& ratios, const BoundLimits& limits,
                              const std::string& digest) {
    std::vector<Row> rows;
    auto extent = [](const std::vector<double>& v) {
        return v.empty() ? std::pair{kNaN, kNaN} : std::pair{*std::min_element(v.begin(), v.end()),
                                                             *std::max_element(v.begin(), v.end())};
    };
    for (const auto& [name, pick, lim] :
         {std::tuple{"ratio_low", &InstanceRatios::low, limits.low}, std::tuple{"ratio_up", &InstanceRatios::up, limits.up}}) {
        std::vector<double> all;
        for (const auto& r : ratios) all.insert(all.end(), (r.*pick).begin(), (r.*pick).end());
        const auto [lo, hi] = extent(all);
        Row r = make_row("bracket", std::string(name), digest, lo, all.empty() ? "vacuous" : "converged", 0.0,
              "[" + num(lim.first) + " " + num(lim.second) + "]");
        r.detail = "min=" + num(lo) + ";max=" + num(hi) + ";count=" + std::to_string(all.size());
        if (!all.empty() && !(within(lo, lim) && within(hi, lim))) r.outcome = Outcome::fail;
        rows.push_back(std::move(r));
    }
    // family spread: for each (ratio, probe, R) cell, max/min over the
    // family's instances; the row reports the worst cell
    std::map<std::string, std::map<InstanceRatios::Cell, std::vector<double>>> families;
    for (const auto& r : ratios) {
        if (r.family.empty()) continue;
        auto& cells = families[r.family];
        for (const auto& [cell, v] : r.cells) cells[cell].push_back(v);
    }
    for (const auto& [family, cells] : families) {
        double spread = kNaN;
        std::string worst;
        std::size_t compared = 0;
        for (const auto& [cell, v] : cells) {
            if (v.size() < 2) continue;
            ++compared;
            const auto [lo, hi] = extent(v);
            if (std::isnan(spread) || hi / lo > spread) {
                spread = hi / lo;
                worst = std::get<0>(cell) + " probe=" + num(std::get<1>(cell)) + " R=" + num(std::get<2>(cell));
            }
        }
        Row r = make_row("family:" + family, "ratio_spread", digest, spread, compared ? "converged" : "vacuous", 0.0,
                         "<= " + num(limits.spread));
        r.detail = "cells=" + std::to_string(compared) + (compared ? ";worst=" + worst : "");
        if (compared && !(spread <= limits.spread)) r.outcome = Outcome::fail;
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------- criteria

Row verdict_row(const Instance& in, const std::string& op, const CriterionReport& c, const std::string& expect) {
    Row r = make_row(in.id, op, in.digest, c.value, std::string(to_string(c.verdict)), 0.0, expect);
    r.outcome = r.status == expect ? Outcome::pass : Outcome::fail;
    r.detail = "witness=" + num(c.witness);
    if (!c.diagnostic.empty()) r.detail += ";note=" + c.diagnostic;
    return r;
}

double theta_of(const Node& item) {
    const double theta = item.at("theta").number();
    if (!(theta > 0 && theta < 1)) item.at("theta").fail("theta must lie in (0, 1)");
    return theta;
}

double bound_of(const Node& item) { return item.has("bound") ? item.at("bound").positive() : kInf; }

Task criterion_task(const Context& ctx, const Node& item, std::size_t index) {
    const std::string criterion = item.at("criterion").string();
    if (criterion == "lorentz" || criterion == "marcinkiewicz") {
        auto in = instance(ctx, item, criterion, index);
        const auto fn = config::build_sampled_function(item.at("function"));
        const std::string expect = expectation(item, "satisfied", {"satisfied", "violated"});
        if (criterion == "lorentz")
            return {in.id, "lorentz_functional", in.digest, [=] {
                        return std::vector<Row>{verdict_row(in, "lorentz_functional",
                                                            lorentz_G_functional(fn, *in.f, in.space.n, in.tol), expect)};
                    }};
        const double theta = theta_of(item);
        return {in.id, "marcinkiewicz_check", in.digest, [=] {
                    return std::vector<Row>{verdict_row(in, "marcinkiewicz_check",
                                                        marcinkiewicz_check(fn, *in.f, in.space.n, theta), expect)};
                }};
    }
    if (criterion == "morrey") {
        auto in = instance(ctx, item, criterion, index);
        auto m = measure_of(item, in);
        const double theta = theta_of(item);
        std::vector<Point> centers = {Point(static_cast<std::size_t>(in.space.n), 0.0)};
        if (item.has("centers")) centers = points_of(item.at("centers"), in.space);
        std::vector<BallSample> samples;
        for (double r : positives(item.at("radii"))) {
            if (!(r < 1)) item.at("radii").fail("Morrey radii must be < 1");
            for (const auto& c : centers) samples.push_back({c, r});
        }
        const double bound = bound_of(item);
        const std::string expect = expectation(item, "satisfied", {"satisfied", "violated"});
        return {in.id, "morrey_density_check", in.digest, [=] {
                    return std::vector<Row>{verdict_row(in, "morrey_density_check",
                                                        morrey_density_check(*m, *in.f, theta, samples, bound), expect)};
                }};
    }
    if (criterion == "hoelder") {
        auto in = instance(ctx, item, criterion, index);
        const double outer = item.at("R_out").positive();
        auto m = radial_measure(item, in, outer);
        const double theta = theta_of(item);
        std::vector<std::pair<double, double>> balls;
        if (item.has("balls")) {
            for (const auto& b : item.at("balls").items()) {
                const auto v = b.numbers();
                if (v.size() != 2 || !(v[0] >= 0) || !(v[1] > 0)) b.fail("balls are [center >= 0, r > 0]");
                balls.push_back({v[0], v[1]});
            }
        } else {
            for (double r : positives(item.at("radii"))) balls.push_back({0.0, r});
        }
        const double bound = bound_of(item);
        const double spread_limit = item.number_or("spread_limit", kInf);
        const std::string expect = expectation(item, "satisfied", {"satisfied", "violated"});
        RadialOptions ropts;
        ropts.tol = std::min(1e-10, in.tol);
        return {in.id, "hoelder_sup_inf_check", in.digest, [=] {
                    const auto sol = solve_radial(*in.f, m, outer, ropts);
                    const auto rep = hoelder_sup_inf_check(sol, theta, balls, bound);
                    Row r = verdict_row(in, "hoelder_sup_inf_check", rep.summary, expect);
                    r.detail += ";spread=" + num(rep.spread);
                    if (std::isfinite(spread_limit) && rep.spread > spread_limit) {
                        r.outcome = Outcome::fail;
                        r.detail += ";note=spread above " + num(spread_limit);
                    }
                    return std::vector<Row>{r};
                }};
    }
    if (criterion == "hedberg_wolff") {
        auto in = instance(ctx, item, criterion, index);
        auto m = measure_of(item, in);
        const double R = item.at("R").positive();
        const std::string expect = expectation(item, "converged", {"converged", "diverges"});
        const auto check = value_check(item);
        return {in.id, "hedberg_wolff_energy", in.digest, [=] {
                    const auto w = hedberg_wolff_energy(*m, *in.f, R, wolff_options(in.tol));
                    Row r = make_row(in.id, "hedberg_wolff_energy", in.digest, w.value, std::string(to_string(w.status)), w.error,
                          expect);
                    std::string note;
                    r.outcome = wolff_outcome(w, expect, check, note);
                    r.detail = "R=" + num(R) + (note.empty() ? "" : ";note=" + note);
                    return std::vector<Row>{r};
                }};
    }
    if (criterion == "int_div") {
        auto in = instance(ctx, item, criterion, index);
        const std::string expect = expectation(item, "bounded", {"bounded", "unbounded"});
        return {in.id, "int_div", in.digest, [=] {
                    const auto d = check_int_div(*in.f, in.space.n);
                    Row r = make_row(in.id, "int_div", in.digest, d.bounded ? 1.0 : 0.0, d.bounded ? "bounded" : "unbounded", 0.0,
                          expect);
                    r.outcome = d.consistent && r.status == expect ? Outcome::pass : Outcome::fail;
                    r.detail = "near_zero=" + std::string(quad::to_string(d.near_zero.verdict)) +
                               ";at_infinity=" + std::string(quad::to_string(d.at_infinity.verdict));
                    if (!d.consistent) r.detail += ";note=" + d.diagnostic;
                    return std::vector<Row>{r};
                }};
    }
    item.at("criterion").fail("unknown criterion '" + criterion +
                              "' (lorentz, marcinkiewicz, morrey, hoelder, hedberg_wolff, int_div)");
}

std::vector<Task> criteria_tasks(const Context& ctx, const Node& section) {
    std::vector<Task> tasks;
    for (const auto& item : section.items()) tasks.push_back(criterion_task(ctx, item, tasks.size()));
    return tasks;
}

std::vector<Task> energy_tasks(const Context& ctx, const Node& section) {
    std::vector<Task> tasks;
    for (const auto& item : section.items()) {
        auto in = instance(ctx, item, "energy", tasks.size());
        auto m = measure_of(item, in);
        const auto radii = positives(item.at("R"));
        const std::string expect = expectation(item, "converged", {"converged", "diverges"});
        const auto check = value_check(item);
        const auto opts = wolff_options(in.tol);
        tasks.push_back({in.id, "hedberg_wolff_energy", in.digest, [=] {
                             std::vector<Row> rows;
                             for (double R : radii) {
                                 const auto w = hedberg_wolff_energy(*m, *in.f, R, opts);
                                 Row r = make_row(in.id, "hedberg_wolff_energy", in.digest, w.value,
                                       std::string(to_string(w.status)), w.error, expect);
                                 std::string note;
                                 r.outcome = wolff_outcome(w, expect, check, note);
                                 r.detail = "R=" + num(R) + (note.empty() ? "" : ";note=" + note);
                                 rows.push_back(std::move(r));
                             }
                             return rows;
                         }});
    }
    return tasks;
}

// Rows are merged by instance id, so the order is independent of scheduling.
std::vector<Row> execute(std::vector<Task>& tasks, int jobs) {
    std::stable_sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) { return a.id < b.id; });
    auto per_task = parallel_map(tasks.size(), jobs, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        std::vector<Row> rows;
        try {
            rows = tasks[i].run();
        } catch (const std::exception& e) {
            Row r = make_row(tasks[i].id, tasks[i].operation, tasks[i].digest, kNaN, "error", kNaN, "");
            r.outcome = Outcome::fail;
            r.detail = std::string("note=") + e.what();
            rows = {r};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (auto& r : rows) r.seconds = seconds / static_cast<double>(rows.size());
        return rows;
    });
    std::vector<Row> out;
    for (auto& rows : per_task)
        for (auto& r : rows) out.push_back(std::move(r));
    return out;
}

}  // namespace

RunSettings resolve_settings(const config::Document& doc, std::optional<double> tol_flag, std::optional<int> jobs_flag,
                             const char* env_tol) {
    RunSettings s;
    const Node root(doc, doc.root(), "");
    if (!doc.root().is_object()) root.fail("a run configuration must be a JSON object");
    if (tol_flag) {
        if (!(*tol_flag > 0) || !std::isfinite(*tol_flag)) throw ConfigError("--tol", "tolerance must be > 0");
        s.tol = *tol_flag;
    } else if (root.has("tol")) {
        s.tol = root.at("tol").positive();
    } else if (env_tol && *env_tol) {
        const std::string_view text(env_tol);
        double v = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !(v > 0) || !std::isfinite(v))
            throw ConfigError("WOLFFKIT_TOL", "expected a number > 0, got '" + std::string(text) + "'");
        s.tol = v;
    }
    if (jobs_flag) {
        if (*jobs_flag < 1) throw ConfigError("--jobs", "jobs must be >= 1");
        s.jobs = *jobs_flag;
    } else if (root.has("jobs")) {
        s.jobs = root.at("jobs").integer();
        if (s.jobs < 1) root.at("jobs").fail("jobs must be >= 1");
    }
    return s;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"potential", "oracle", "verify-bounds", "criteria", "hedberg-wolff"};
    return names;
}

std::string section_name(std::string_view command) {
    std::string out(command);
    std::replace(out.begin(), out.end(), '-', '_');
    return out;
}

PreparedCommand prepare_command(std::string_view command, const config::Document& doc, const RunSettings& settings,
                                bool allow_missing) {
    PreparedCommand prepared;
    prepared.command = std::string(command);
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), prepared.command) == names.end())
        throw ConfigError("", "unknown command '" + prepared.command + "'");
    const Node root(doc, doc.root(), "");
    const std::string key = section_name(command);
    if (!root.has(key)) {
        if (!allow_missing) root.fail("no '" + key + "' section for command " + prepared.command);
        prepared.present = false;
        prepared.run = [name = prepared.command] { return CommandResult{name, {}, 0, 0, 0}; };
        return prepared;
    }
    const Context ctx{doc, root, settings, {}};
    const Node section = root.at(key);
    const bool bounds = command == "verify-bounds";
    const Node list = bounds && section.json().is_object() ? section.at("instances") : section;
    if (!list.json().is_array()) list.fail("expected a list of instances");

    auto tasks = std::make_shared<std::vector<Task>>();
    BoundLimits limits;
    auto ratios = std::make_shared<std::vector<InstanceRatios>>();
    if (command == "potential") {
        *tasks = potential_tasks(ctx, list);
    } else if (command == "oracle") {
        *tasks = oracle_tasks(ctx, list);
    } else if (bounds) {
        if (section.json().is_object() && section.has("limits")) {
            const Node l = section.at("limits");
            if (l.has("low")) limits.low = bracket(l.at("low"));
            if (l.has("up")) limits.up = bracket(l.at("up"));
            if (l.has("spread")) limits.spread = l.at("spread").positive();
        }
        *tasks = bound_tasks(ctx, list, limits, ratios);
    } else if (command == "criteria") {
        *tasks = criteria_tasks(ctx, list);
    } else {
        *tasks = energy_tasks(ctx, list);
    }
    const std::string bracket_digest = report::digest(section.json().dump() + "|tol=" + num(settings.tol));

    prepared.run = [=, name = prepared.command, jobs = settings.jobs] {
        CommandResult result;
        result.command = name;
        result.rows = execute(*tasks, jobs);
        if (bounds) {
            auto summary = bracket_rows(*ratios, limits, bracket_digest);
            result.rows.insert(result.rows.end(), summary.begin(), summary.end());
        }
        for (const auto& r : result.rows) {
            if (r.outcome == Outcome::fail) ++result.failures;
            if (r.outcome == Outcome::warn) ++result.warnings;
        }
        result.exit_code = result.failures > 0 ? 1 : 0;
        return result;
    };
    return prepared;
}

CommandResult run_command(std::string_view command, const config::Document& doc, const RunSettings& settings,
                          bool allow_missing) {
    return prepare_command(command, doc, settings, allow_missing).run();
}

}  // namespace wolffkit::cli
