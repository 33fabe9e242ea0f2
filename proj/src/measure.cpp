#include "wolffkit/measure.hpp"

#include "wolffkit/errors.hpp"
#include "wolffkit/quadrature.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace wolffkit {

namespace {

constexpr int kOverlapPanels = 64;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Fraction of the sphere |y - c| = s lying in the ball |y - x| <= r, where
// |x - c| = d, as a function of x = (1 - tau)/2 with tau the cosine of the cap
// half-angle.
double cap_fraction(int n, double x) {
    x = std::clamp(x, 0.0, 1.0);
    if (n == 2) return 2.0 / std::numbers::pi * std::asin(std::sqrt(x));
    if (n == 3) return x;
    const double half = 0.5 * (n - 1);
    return boost::math::ibeta(half, half, x);
}

}  // namespace

AmbientSpace::AmbientSpace(int dimension) : n(dimension) {
    if (dimension < 2) throw DomainError("dimension must be >= 2, got " + std::to_string(dimension));
    omega = std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
    sphere = n * omega;
}

double distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double norm(const Point& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

void RadonMeasure::check_query(const Point& x, double r) const {
    if (r < 0 || std::isnan(r)) throw DomainError("ball radius must be >= 0, got " + fmt(r));
    if (static_cast<int>(x.size()) != dimension())
        throw DomainError("query point has " + std::to_string(x.size()) + " coordinates, measure lives in R^" +
                          std::to_string(dimension()));
}

double RadonMeasure::radial_mass(double r) const {
    if (!radial_about_origin()) throw DomainError(kind() + " measure is not radial about the origin");
    return ball_mass(Point(static_cast<std::size_t>(dimension()), 0.0), r);
}

// ---------------------------------------------------------------- atoms

AtomSum::AtomSum(AmbientSpace space, std::vector<Atom> atoms) : RadonMeasure(space), atoms_(std::move(atoms)) {
    for (const auto& a : atoms_) {
        if (static_cast<int>(a.center.size()) != space.n)
            throw DomainError("atom center dimension does not match n = " + std::to_string(space.n));
        if (!(a.mass > 0) || !std::isfinite(a.mass)) throw DomainError("atom masses must be positive and finite");
        total_ += a.mass;
    }
}

MassEstimate AtomSum::ball_mass_estimate(const Point& x, double r) const {
    check_query(x, r);
    double m = 0.0;
    for (const auto& a : atoms_)
        if (distance(a.center, x) <= r) m += a.mass;
    return {m, 0.0};
}

std::vector<double> AtomSum::singular_radii(const Point& x) const {
    std::vector<double> out;
    for (const auto& a : atoms_) out.push_back(distance(a.center, x));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool AtomSum::radial_about_origin() const {
    return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return norm(a.center) == 0.0; });
}

// ---------------------------------------------------------------- profiles

UniformProfile::UniformProfile(double value) : value_(value) {
    if (!(value >= 0) || !std::isfinite(value)) throw DomainError("uniform density must be >= 0");
}

std::optional<double> UniformProfile::cumulative(double r, const AmbientSpace& sp) const {
    return value_ * sp.omega * std::pow(r, sp.n);
}

AnnulusProfile::AnnulusProfile(double value, double inner) : value_(value), inner_(inner) {
    if (!(value >= 0) || !std::isfinite(value)) throw DomainError("annulus density must be >= 0");
    if (!(inner >= 0)) throw DomainError("annulus inner radius must be >= 0");
}

std::optional<double> AnnulusProfile::cumulative(double r, const AmbientSpace& sp) const {
    if (r <= inner_) return 0.0;
    return value_ * sp.omega * (std::pow(r, sp.n) - std::pow(inner_, sp.n));
}

PowerProfile::PowerProfile(double coefficient, double exponent) : coefficient_(coefficient), exponent_(exponent) {
    if (!(coefficient >= 0) || !std::isfinite(coefficient)) throw DomainError("power density coefficient must be >= 0");
    if (!std::isfinite(exponent)) throw DomainError("power density exponent must be finite");
}

double PowerProfile::density(double s) const {
    if (s <= 0) return exponent_ < 0 ? std::numeric_limits<double>::infinity() : (exponent_ == 0 ? coefficient_ : 0.0);
    return coefficient_ * std::pow(s, exponent_);
}

std::optional<double> PowerProfile::cumulative(double r, const AmbientSpace& sp) const {
    const double k = sp.n + exponent_;
    if (k <= 0) throw DomainError("power density s^" + fmt(exponent_) + " is not integrable at 0 in R^" + std::to_string(sp.n));
    return sp.sphere * coefficient_ * std::pow(r, k) / k;
}

StepProfile::StepProfile(std::vector<double> radii, std::vector<double> values)
    : radii_(std::move(radii)), values_(std::move(values)) {
    if (radii_.empty() || radii_.size() != values_.size())
        throw DomainError("step density needs matching, nonempty radii and values");
    for (std::size_t i = 0; i < radii_.size(); ++i) {
        if (!(values_[i] >= 0) || !std::isfinite(values_[i])) throw DomainError("step density values must be >= 0");
        if (!(radii_[i] > (i ? radii_[i - 1] : 0.0))) throw DomainError("step density radii must increase from 0");
    }
}

double StepProfile::density(double s) const {
    auto it = std::upper_bound(radii_.begin(), radii_.end(), s);
    if (it == radii_.end()) return 0.0;
    return values_[static_cast<std::size_t>(it - radii_.begin())];
}

std::vector<double> StepProfile::breakpoints() const { return {radii_.begin(), radii_.end() - 1}; }

std::optional<double> StepProfile::cumulative(double r, const AmbientSpace& sp) const {
    double m = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < radii_.size() && prev < r; ++i) {
        const double hi = std::min(r, radii_[i]);
        m += values_[i] * sp.omega * (std::pow(hi, sp.n) - std::pow(prev, sp.n));
        prev = radii_[i];
    }
    return m;
}

FunctionProfile::FunctionProfile(std::function<double(double)> rho, std::vector<double> breakpoints, std::string label)
    : rho_(std::move(rho)), breaks_(std::move(breakpoints)), label_(std::move(label)) {
    std::sort(breaks_.begin(), breaks_.end());
}

// ---------------------------------------------------------------- radial density

RadialDensity::RadialDensity(AmbientSpace space, Point center, std::shared_ptr<const RadialProfile> profile,
                             double outer)
    : RadonMeasure(space), center_(std::move(center)), profile_(std::move(profile)), outer_(outer) {
    if (static_cast<int>(center_.size()) != space.n)
        throw DomainError("radial density center dimension does not match n = " + std::to_string(space.n));
    if (!(outer > 0) || !std::isfinite(outer)) throw DomainError("radial density needs a finite outer radius > 0");
    for (double s : log_grid(1e-6 * outer, outer, 2001)) {
        const double rho = profile_->density(s);
        if (!(rho >= 0)) throw StructuralError(profile_->name() + " density is negative or NaN at s = " + fmt(s));
    }
    total_ = center_mass(outer_);
    if (!std::isfinite(total_)) throw DomainError(profile_->name() + " density has infinite mass");
}

std::vector<double> RadialDensity::jump_radii() const {
    std::vector<double> out;
    for (double b : profile_->breakpoints())
        if (b > 0 && b < outer_) out.push_back(b);
    out.push_back(outer_);
    std::sort(out.begin(), out.end());
    return out;
}

double RadialDensity::center_mass(double r) const {
    r = std::min(r, outer_);
    if (r <= 0) return 0.0;
    if (auto closed = profile_->cumulative(r, space())) return *closed;
    return center_mass_quadrature(r);
}

double RadialDensity::center_mass_quadrature(double r) const {
    const int n = dimension();
    const double sphere = space().sphere;
    auto f = [&](double s) { return sphere * std::pow(s, n - 1) * profile_->density(s); };
    std::vector<double> cuts = {0.0};
    for (double b : jump_radii())
        if (b < r) cuts.push_back(b);
    cuts.push_back(r);

    // first piece: geometric panels towards the possibly singular origin
    const double first = cuts[1];
    double total = 0.0;
    int small = 0;
    double hi = first;
    for (int k = 0; k < 1100 && small < 3; ++k) {
        const double lo = 0.5 * hi;
        const double c = quad::adaptive(f, lo, hi, 0.0, 1e-13, 50).value;
        total += c;
        small = (c <= 1e-17 * total) ? small + 1 : 0;
        hi = lo;
    }
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i)
        total += quad::adaptive(f, cuts[i], cuts[i + 1], 0.0, 1e-13, 200).value;
    return total;
}

MassEstimate RadialDensity::ball_mass_estimate(const Point& x, double r) const {
    check_query(x, r);
    const double d = distance(x, center_);
    if (d == 0.0) return {center_mass(r), 0.0};

    MassEstimate est;
    if (r >= d) est.value = center_mass(r - d);
    const double lower = std::abs(r - d);
    const double upper = std::min(d + r, outer_);
    if (!(upper > lower)) return est;

    const int n = dimension();
    const double sphere = space().sphere;
    std::vector<double> cuts = {lower};
    for (double b : jump_radii())
        if (b > lower && b < upper) cuts.push_back(b);
    cuts.push_back(upper);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const double a_minus_d = (i == 0) ? (r < d ? -r : r - 2.0 * d) : a - d;
        // s = a + (b - a)(1 - cos phi)/2 clusters nodes at both ends, where the
        // cap fraction has square-root behaviour
        auto integrand = [&](double phi) {
            const double step = 0.5 * (b - a) * (1.0 - std::cos(phi));
            const double s = a + step;
            if (s <= 0) return 0.0;
            // (1 - tau)/2 = (r^2 - (s-d)^2) / (4 s d), with s - d formed without
            // cancellation so tiny balls far from the center stay accurate
            const double offset = a_minus_d + step;
            const double x = (r - offset) * (r + offset) / (4.0 * s * d);
            return sphere * std::pow(s, n - 1) * profile_->density(s) * cap_fraction(n, x) * 0.5 * (b - a) *
                   std::sin(phi);
        };
        const auto piece = quad::composite_gk15(integrand, 0.0, std::numbers::pi, kOverlapPanels);
        est.value += piece.value;
        est.error += piece.error;
    }
    est.value = std::min(est.value, total_);
    return est;
}

std::vector<double> RadialDensity::singular_radii(const Point& x) const {
    const double d = distance(x, center_);
    std::vector<double> out;
    if (d > 0) out.push_back(d);
    for (double b : jump_radii()) {
        out.push_back(std::abs(d - b));
        out.push_back(d + b);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool RadialDensity::radial_about_origin() const { return norm(center_) == 0.0; }

// ---------------------------------------------------------------- grid density

GridDensity::GridDensity(AmbientSpace space, Point origin, double h, std::vector<Cell> cells)
    : RadonMeasure(space), origin_(std::move(origin)), h_(h), cells_(std::move(cells)) {
    if (static_cast<int>(origin_.size()) != space.n) throw DomainError("grid origin dimension does not match n");
    if (!(h > 0) || !std::isfinite(h)) throw DomainError("grid spacing must be > 0");
    for (const auto& c : cells_) {
        if (static_cast<int>(c.index.size()) != space.n) throw DomainError("grid cell index dimension does not match n");
        if (!(c.value >= 0) || !std::isfinite(c.value)) throw DomainError("grid cell values must be >= 0");
        total_ += cell_mass(c);
    }
}

Point GridDensity::cell_center(const Cell& c) const {
    Point p(origin_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = origin_[i] + h_ * (static_cast<double>(c.index[i]) + 0.5);
    return p;
}

double GridDensity::cell_mass(const Cell& c) const { return c.value * std::pow(h_, dimension()); }

MassEstimate GridDensity::ball_mass_estimate(const Point& x, double r) const {
    check_query(x, r);
    const int n = dimension();
    const int per_axis = 4;
    const int samples = static_cast<int>(std::pow(per_axis, n));
    const double r2 = r * r;
    MassEstimate est;
    std::vector<double> lo(n);
    for (const auto& c : cells_) {
        double dmin2 = 0.0, dmax2 = 0.0;
        for (int i = 0; i < n; ++i) {
            lo[i] = origin_[i] + h_ * static_cast<double>(c.index[i]);
            const double hi = lo[i] + h_;
            const double below = lo[i] - x[i], above = x[i] - hi;
            const double gap = std::max({below, above, 0.0});
            dmin2 += gap * gap;
            const double far = std::max(std::abs(x[i] - lo[i]), std::abs(x[i] - hi));
            dmax2 += far * far;
        }
        const double mass = cell_mass(c);
        if (dmax2 <= r2) {
            est.value += mass;
            continue;
        }
        if (dmin2 > r2) continue;
        int inside = 0;
        for (int s = 0; s < samples; ++s) {
            int code = s;
            double q = 0.0;
            for (int i = 0; i < n; ++i) {
                const double y = lo[i] + h_ * ((code % per_axis) + 0.5) / per_axis - x[i];
                q += y * y;
                code /= per_axis;
            }
            if (q <= r2) ++inside;
        }
        est.value += mass * inside / samples;
        est.error += mass / samples;
    }
    return est;
}

// ---------------------------------------------------------------- constructors

std::shared_ptr<AtomSum> dirac(const AmbientSpace& space, Point at, double mass) {
    return std::make_shared<AtomSum>(space, std::vector<Atom>{{std::move(at), mass}});
}

std::shared_ptr<AtomSum> zero_measure(const AmbientSpace& space) {
    return std::make_shared<AtomSum>(space, std::vector<Atom>{});
}

std::shared_ptr<RadialDensity> uniform_ball(const AmbientSpace& space, double radius, double mass) {
    const double rho = mass / (space.omega * std::pow(radius, space.n));
    return std::make_shared<RadialDensity>(space, Point(static_cast<std::size_t>(space.n), 0.0),
                                           std::make_shared<UniformProfile>(rho), radius);
}

std::shared_ptr<RadialDensity> uniform_annulus(const AmbientSpace& space, double inner, double outer, double mass) {
    if (!(outer > inner)) throw DomainError("annulus needs outer > inner");
    const double rho = mass / (space.omega * (std::pow(outer, space.n) - std::pow(inner, space.n)));
    return std::make_shared<RadialDensity>(space, Point(static_cast<std::size_t>(space.n), 0.0),
                                           std::make_shared<AnnulusProfile>(rho, inner), outer);
}

double morrey_target_mass(const NFunction& f, double theta, int n, double r) {
    if (r <= 0) return 0.0;
    return std::pow(r, n - 1) * f.derivative(std::pow(r, theta - 1.0));
}

std::shared_ptr<RadialDensity> construct_morrey_measure(const NFunction& f, double theta, const AmbientSpace& space,
                                                        double outer) {
    if (!(theta > 0 && theta < 1)) throw DomainError("theta must lie in (0, 1), got " + fmt(theta));
    const int n = space.n;
    const double sphere = space.sphere;
    auto rho = [f, theta, n, sphere](double s) {
        if (s <= 0) return std::numeric_limits<double>::infinity();
        const double h = 1e-5 * s;
        const double dm = (morrey_target_mass(f, theta, n, s + h) - morrey_target_mass(f, theta, n, s - h)) / (2 * h);
        return dm / (sphere * std::pow(s, n - 1));
    };
    auto profile = std::make_shared<FunctionProfile>(rho, std::vector<double>{}, "morrey(theta=" + fmt(theta) + ")");
    return std::make_shared<RadialDensity>(space, Point(static_cast<std::size_t>(n), 0.0), profile, outer);
}

std::shared_ptr<GridDensity> discretize(const RadialDensity& m, double h) {
    const int n = m.dimension();
    const auto& c = m.center();
    const double R = m.outer();
    const long cells_per_axis = static_cast<long>(std::ceil(2.0 * R / h));
    Point origin(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) origin[i] = c[i] - R;
    const int per_axis = 4;
    const int samples = static_cast<int>(std::pow(per_axis, n));

    std::vector<GridDensity::Cell> cells;
    std::vector<long> index(static_cast<std::size_t>(n), 0);
    const long total = static_cast<long>(std::pow(cells_per_axis, n));
    for (long flat = 0; flat < total; ++flat) {
        long code = flat;
        for (int i = 0; i < n; ++i) {
            index[i] = code % cells_per_axis;
            code /= cells_per_axis;
        }
        double sum = 0.0;
        for (int s = 0; s < samples; ++s) {
            int sc = s;
            double q = 0.0;
            for (int i = 0; i < n; ++i) {
                const double y = origin[i] + h * (static_cast<double>(index[i]) + ((sc % per_axis) + 0.5) / per_axis) - c[i];
                q += y * y;
                sc /= per_axis;
            }
            sum += m.density(std::sqrt(q));
        }
        if (sum > 0) cells.push_back({index, sum / samples});
    }
    return std::make_shared<GridDensity>(m.space(), origin, h, std::move(cells));
}

}  // namespace wolffkit
