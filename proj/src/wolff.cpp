#include "wolffkit/wolff.hpp"

#include "wolffkit/errors.hpp"
#include "wolffkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wolffkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Outer quadrature of the energy over a radial density: panels per piece are
// doubled from 2 up to this cap.
constexpr int kMaxEnergyPanels = 32;

Status combine(Status a, Status b) {
    if (a == Status::diverges || b == Status::diverges) return Status::diverges;
    if (a == Status::undecided || b == Status::undecided) return Status::undecided;
    return Status::converged;
}

}  // namespace

std::vector<double> DyadicLadder::radii() const {
    std::vector<double> out;
    for (int k = 0; k <= depth; ++k) out.push_back(std::ldexp(R, 1 - k));
    return out;
}

WolffResult wolff_potential(const RadonMeasure& m, const NFunction& f, const Point& x0, double R,
                            const WolffOptions& options) {
    if (!(R > 0) || !std::isfinite(R)) throw DomainError("Wolff potential needs a radius R > 0");
    if (!(options.tol > 0)) throw DomainError("tolerance must be > 0");
    const int n = m.dimension();
    const std::vector<double> jumps = m.singular_radii(x0);
    bool pieces_converged = true;

    auto integrand = [&](double r) { return f.inverse_derivative(m.ball_mass(x0, r) / std::pow(r, n - 1)); };
    auto panel = [&](int k) {
        const double hi = std::ldexp(R, 1 - k);
        const double lo = std::ldexp(R, -k);
        std::vector<double> cuts = {lo};
        for (double j : jumps)
            if (j > lo && j < hi) cuts.push_back(j);
        cuts.push_back(hi);
        const auto q = quad::adaptive_pieces(integrand, cuts, 1e-2 * options.tol * (hi - lo) / R,
                                             1e-2 * options.tol, options.max_intervals_per_piece);
        pieces_converged = pieces_converged && q.converged;
        return quad::PanelValue{q.value, q.error, m.ball_mass(x0, lo) == 0.0};
    };

    quad::SeriesOptions so;
    so.tol = options.tol;
    so.divergence_threshold = options.divergence_threshold;
    so.nondecreasing_run = options.nondecreasing_run;
    so.max_panels = options.max_panels;
    const auto series = quad::sum_dyadic_panels(panel, so);

    WolffResult out;
    out.value = series.value;
    out.error = series.error;
    out.status = series.status;
    out.panels = series.panels;
    out.diagnostic = series.diagnostic;
    if (out.status == Status::converged && out.error > options.tol * std::max(1.0, std::abs(out.value))) {
        out.status = Status::undecided;
        out.diagnostic = pieces_converged ? "error estimate above tolerance"
                                          : "panel quadrature did not converge within the interval budget";
    }
    return out;
}

double dyadic_wolff(const RadonMeasure& m, const NFunction& f, const Point& x0, double R, int depth) {
    if (!(R > 0)) throw DomainError("dyadic Wolff sum needs R > 0");
    if (depth < 1) throw DomainError("dyadic Wolff sum needs depth >= 1");
    const int n = m.dimension();
    double sum = 0.0;
    for (int k = 1; k <= depth; ++k) {
        const double Rk = std::ldexp(R, 1 - k);
        try {
            sum += 0.5 * Rk * f.inverse_derivative(m.ball_mass(x0, Rk) / std::pow(Rk, n - 1));
        } catch (const OverflowError&) {
            return kInf;
        }
    }
    return sum;
}

namespace {

WolffResult reduce_weighted(const std::vector<WolffResult>& values, const std::vector<double>& weights) {
    WolffResult out;
    out.status = Status::converged;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& w = values[i];
        out.panels += w.panels;
        if (w.status != Status::converged && out.diagnostic.empty())
            out.diagnostic = "node " + std::to_string(i) + ": " + std::string(to_string(w.status)) +
                             (w.diagnostic.empty() ? "" : " (" + w.diagnostic + ")");
        out.status = combine(out.status, w.status);
        if (w.status == Status::diverges) continue;
        out.value += weights[i] * w.value;
        out.error += weights[i] * w.error;
    }
    if (out.status == Status::diverges) {
        out.value = kInf;
        out.error = kInf;
    }
    return out;
}

WolffResult radial_energy(const RadialDensity& m, const NFunction& f, double R, const WolffOptions& options) {
    WolffOptions inner = options;
    inner.tol = 0.1 * options.tol;
    inner.jobs = 1;
    const int n = m.dimension();
    const double sphere = m.space().sphere;
    const double outer = m.outer();

    // W(center + s e1, R) loses smoothness where s +- R meets a jump radius
    std::vector<double> cuts = {0.0, outer};
    auto add = [&](double s) {
        if (s > 0 && s < outer) cuts.push_back(s);
    };
    add(R);
    for (double b : m.jump_radii()) {
        add(b);
        add(b - R);
        add(b + R);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto point_at = [&](double s) {
        Point x = m.center();
        x[0] += s;
        return x;
    };

    WolffResult out;
    for (int panels = 2; panels <= kMaxEnergyPanels; panels *= 2) {
        std::vector<double> nodes, kronrod, gauss;
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            const double a = cuts[p], b = cuts[p + 1];
            const double h = std::numbers::pi / panels;
            for (int j = 0; j < panels; ++j) {
                // s = a + (b-a)(1 - cos phi)/2 clusters nodes at the piece ends
                const auto rule = quad::gk15_rule(j * h, (j + 1) * h);
                for (int i = 0; i < 15; ++i) {
                    const double phi = rule.nodes[i];
                    const double s = a + 0.5 * (b - a) * (1.0 - std::cos(phi));
                    const double dmass = sphere * std::pow(s, n - 1) * m.density(s) * 0.5 * (b - a) * std::sin(phi);
                    nodes.push_back(s);
                    kronrod.push_back(rule.kronrod[i] * dmass);
                    gauss.push_back(rule.gauss[i] * dmass);
                }
            }
        }
        auto values = parallel_map(nodes.size(), options.jobs,
                                   [&](std::size_t i) { return wolff_potential(m, f, point_at(nodes[i]), R, inner); });
        out = reduce_weighted(values, kronrod);
        if (out.status == Status::diverges) return out;
        double coarse = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) coarse += gauss[i] * values[i].value;
        const double outer_error = std::abs(out.value - coarse);
        out.error += outer_error;
        if (out.status == Status::converged && out.error <= options.tol * std::max(1.0, std::abs(out.value))) return out;
    }
    if (out.status == Status::converged) {
        out.status = Status::undecided;
        out.diagnostic = "outer quadrature error " + std::to_string(out.error) + " above tolerance with " +
                         std::to_string(kMaxEnergyPanels) + " panels per piece";
    }
    return out;
}

}  // namespace

WolffResult hedberg_wolff_energy(const RadonMeasure& m, const NFunction& f, double R, const WolffOptions& options) {
    if (auto atoms = dynamic_cast<const AtomSum*>(&m)) {
        const auto& list = atoms->atoms();
        auto values = parallel_map(list.size(), options.jobs,
                                   [&](std::size_t i) { return wolff_potential(m, f, list[i].center, R, options); });
        std::vector<double> weights;
        for (const auto& a : list) weights.push_back(a.mass);
        return reduce_weighted(values, weights);
    }
    if (auto grid = dynamic_cast<const GridDensity*>(&m)) {
        const auto& cells = grid->cells();
        auto values = parallel_map(cells.size(), options.jobs, [&](std::size_t i) {
            return wolff_potential(m, f, grid->cell_center(cells[i]), R, options);
        });
        std::vector<double> weights;
        for (const auto& c : cells) weights.push_back(grid->cell_mass(c));
        return reduce_weighted(values, weights);
    }
    if (auto radial = dynamic_cast<const RadialDensity*>(&m)) return radial_energy(*radial, f, R, options);
    throw DomainError("energy not available for measure kind " + m.kind());
}

ScanResult continuity_scan(const RadonMeasure& m, const NFunction& f, const std::vector<Point>& points, double r,
                           const WolffOptions& options) {
    ScanResult out;
    WolffOptions inner = options;
    inner.jobs = 1;
    out.samples = parallel_map(points.size(), options.jobs,
                               [&](std::size_t i) { return wolff_potential(m, f, points[i], r, inner); });
    double best = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& s = out.samples[i];
        if (s.status == Status::diverges) {
            out.value = kInf;
            out.witness = points[i];
            out.status = Status::diverges;
            return out;
        }
        out.status = combine(out.status, s.status);
        if (s.value > best) {
            best = s.value;
            out.witness = points[i];
        }
    }
    out.value = std::max(best, 0.0);
    return out;
}

std::vector<Point> box_grid(const Point& lo, const Point& hi, int per_axis) {
    if (lo.size() != hi.size() || lo.empty()) throw DomainError("box corners must have the same dimension");
    if (per_axis < 1) throw DomainError("box grid needs at least one point per axis");
    const std::size_t n = lo.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(per_axis);
    std::vector<Point> out;
    out.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Point p(n);
        std::size_t code = flat;
        for (std::size_t i = 0; i < n; ++i) {
            const int j = static_cast<int>(code % static_cast<std::size_t>(per_axis));
            code /= static_cast<std::size_t>(per_axis);
            p[i] = per_axis == 1 ? 0.5 * (lo[i] + hi[i]) : lo[i] + (hi[i] - lo[i]) * j / (per_axis - 1);
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace wolffkit
