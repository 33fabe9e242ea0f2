#include "wolffkit/orlicz.hpp"

#include "wolffkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace wolffkit {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kGridMin = 1e-8;
constexpr double kGridMax = 1e8;
constexpr int kGridPoints = 4096;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

// Golden-section search for the extremum of `f` in log t between two grid
// neighbours; sign = +1 maximizes, -1 minimizes.
template <class Fn>
double refine_extremum(const Fn& f, double t_lo, double t_hi, double sign) {
    double a = std::log(t_lo), b = std::log(t_hi);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 80; ++it) {
        const double c = b - ratio * (b - a);
        const double d = a + ratio * (b - a);
        if (sign * f(std::exp(c)) > sign * f(std::exp(d))) b = d;
        else a = c;
    }
    return f(std::exp(0.5 * (a + b)));
}

class PowerModel final : public NFunction::Model {
public:
    explicit PowerModel(double p) : p_(p) {}
    double G(double t) const override { return std::pow(t, p_); }
    double g(double t) const override { return p_ * std::pow(t, p_ - 1.0); }
    std::optional<double> inverse_g(double y) const override {
        return std::pow(y / p_, 1.0 / (p_ - 1.0));
    }
    std::optional<IndexReport> closed_indices() const override {
        IndexReport r;
        r.lower = r.upper = p_;
        r.points = 0;
        r.delta2 = true;
        r.nabla2 = p_ > 1.0;
        return r;
    }
    std::optional<double> power_exponent() const override { return p_; }
    std::string name() const override { return "power(p=" + fmt(p_) + ")"; }

private:
    double p_;
};

class ZygmundModel final : public NFunction::Model {
public:
    ZygmundModel(double p, double alpha) : p_(p), alpha_(alpha) {}
    double G(double t) const override {
        return std::pow(t, p_) * std::pow(std::log(std::numbers::e + t), alpha_);
    }
    double g(double t) const override {
        const double shifted = std::numbers::e + t;
        const double L = std::log(shifted);
        return std::pow(t, p_ - 1.0) * std::pow(L, alpha_ - 1.0) * (p_ * L + alpha_ * t / shifted);
    }
    std::optional<IndexReport> closed_indices() const override {
        // t g/G = p + alpha h(t), h(t) = t / ((e+t) log(e+t)); h -> 0 at both ends
        auto h = [](double t) {
            const double shifted = std::numbers::e + t;
            return t / (shifted * std::log(shifted));
        };
        const std::vector<double> grid = log_grid(kGridMin, kGridMax, kGridPoints);
        std::size_t best = 0;
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (h(grid[i]) > h(grid[best])) best = i;
        const double hmax = std::max(
            h(grid[best]),
            refine_extremum(h, grid[best == 0 ? 0 : best - 1], grid[std::min(best + 1, grid.size() - 1)], 1.0));
        IndexReport r;
        r.lower = alpha_ >= 0 ? p_ : p_ + alpha_ * hmax;
        r.upper = alpha_ >= 0 ? p_ + alpha_ * hmax : p_;
        r.delta2 = true;
        r.nabla2 = r.lower > 1.0;
        return r;
    }
    std::string name() const override {
        return "zygmund(p=" + fmt(p_) + ",alpha=" + fmt(alpha_) + ")";
    }

private:
    double p_;
    double alpha_;
};

class ProductModel final : public NFunction::Model {
public:
    ProductModel(NFunction a, NFunction b) : a_(std::move(a)), b_(std::move(b)) {}
    double G(double t) const override { return a_.value(t) * b_.value(t); }
    double g(double t) const override {
        return a_.derivative(t) * b_.value(t) + a_.value(t) * b_.derivative(t);
    }
    std::optional<double> power_exponent() const override {
        auto pa = a_.power_exponent();
        auto pb = b_.power_exponent();
        if (pa && pb) return *pa + *pb;
        return std::nullopt;
    }
    double t_min() const override { return std::max(a_.model().t_min(), b_.model().t_min()); }
    double t_max() const override { return std::min(a_.model().t_max(), b_.model().t_max()); }
    std::string name() const override { return "product(" + a_.name() + "," + b_.name() + ")"; }

private:
    NFunction a_, b_;
};

class CompositionModel final : public NFunction::Model {
public:
    CompositionModel(NFunction outer, NFunction inner) : outer_(std::move(outer)), inner_(std::move(inner)) {}
    double G(double t) const override { return outer_.value(inner_.value(t)); }
    double g(double t) const override {
        return outer_.derivative(inner_.value(t)) * inner_.derivative(t);
    }
    std::optional<double> power_exponent() const override {
        auto po = outer_.power_exponent();
        auto pi = inner_.power_exponent();
        if (po && pi) return *po * *pi;
        return std::nullopt;
    }
    double t_min() const override { return inner_.model().t_min(); }
    double t_max() const override { return inner_.model().t_max(); }
    std::string name() const override {
        return "composition(" + outer_.name() + "," + inner_.name() + ")";
    }

private:
    NFunction outer_, inner_;
};

// Monotone cubic Hermite interpolation of log G against log t. The node slopes
// are the elasticities t g / G, limited (Fritsch-Carlson) so the interpolant
// stays increasing.
class TableModel final : public NFunction::Model {
public:
    explicit TableModel(std::vector<TablePoint> pts) : pts_(std::move(pts)) {
        const std::size_t m = pts_.size();
        x_.resize(m);
        y_.resize(m);
        d_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            x_[i] = std::log(pts_[i].t);
            y_[i] = std::log(pts_[i].G);
            d_[i] = pts_[i].t * pts_[i].g / pts_[i].G;
        }
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double delta = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
            const double a = d_[i] / delta;
            const double b = d_[i + 1] / delta;
            const double norm = a * a + b * b;
            if (norm > 9.0) {
                const double tau = 3.0 / std::sqrt(norm);
                d_[i] = std::min(d_[i], tau * a * delta);
                d_[i + 1] = std::min(d_[i + 1], tau * b * delta);
            }
        }
    }
    double G(double t) const override {
        if (t == pts_.front().t) return pts_.front().G;
        if (t == pts_.back().t) return pts_.back().G;
        return std::exp(eval(std::log(t)).first);
    }
    double g(double t) const override {
        if (t == pts_.front().t) return pts_.front().g;
        if (t == pts_.back().t) return pts_.back().g;
        auto [logG, slope] = eval(std::log(t));
        return std::exp(logG) / t * slope;
    }
    double t_min() const override { return pts_.front().t; }
    double t_max() const override { return pts_.back().t; }
    std::string name() const override { return "table(" + std::to_string(pts_.size()) + " points)"; }

private:
    std::pair<double, double> eval(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - x_.begin()) - 1));
        i = std::min(i, x_.size() - 2);
        const double h = x_[i + 1] - x_[i];
        const double s = (x - x_[i]) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
        const double value = h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
        const double dh00 = (6 * s2 - 6 * s) / h, dh10 = 3 * s2 - 4 * s + 1;
        const double dh01 = (-6 * s2 + 6 * s) / h, dh11 = 3 * s2 - 2 * s;
        const double slope = dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
        return {value, slope};
    }

    std::vector<TablePoint> pts_;
    std::vector<double> x_, y_, d_;
};

void validate_table(const std::vector<TablePoint>& pts) {
    if (pts.size() < 2) throw StructuralError("N-function table needs at least two points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& q = pts[i];
        if (!(q.t > 0) || !(q.G > 0) || !(q.g > 0) || !std::isfinite(q.t) || !std::isfinite(q.G) ||
            !std::isfinite(q.g))
            throw StructuralError("N-function table row " + std::to_string(i) +
                                  ": t, G and g must be positive and finite");
        if (q.t * q.g <= q.G)
            throw StructuralError("N-function table row " + std::to_string(i) +
                                  ": t g(t) <= G(t), growth index would not exceed 1");
        if (i == 0) continue;
        const auto& prev = pts[i - 1];
        if (!(q.t > prev.t)) throw StructuralError("N-function table: t not strictly increasing at row " + std::to_string(i));
        if (!(q.G > prev.G)) throw StructuralError("N-function table: G not increasing at row " + std::to_string(i));
        if (q.g < prev.g) throw StructuralError("N-function table: g decreasing at row " + std::to_string(i));
        const double secant = (q.G - prev.G) / (q.t - prev.t);
        const double slack = 1e-9 * secant;
        if (secant < prev.g - slack || secant > q.g + slack)
            throw StructuralError("N-function table: G not convex between rows " + std::to_string(i - 1) +
                                  " and " + std::to_string(i));
    }
}

IndexReport grid_indices(const NFunction::Model& model) {
    IndexReport r;
    r.t_min = std::max(kGridMin, model.t_min());
    r.t_max = std::min(kGridMax, model.t_max());
    r.points = kGridPoints;
    const auto grid = log_grid(r.t_min, r.t_max, kGridPoints);
    auto ratio = [&](double t) { return t * model.g(t) / model.G(t); };
    std::size_t imin = 0, imax = 0;
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = ratio(grid[i]);
        if (!std::isfinite(values[i])) {
            r.lower = values[i];
            r.upper = std::numeric_limits<double>::infinity();
            r.delta2 = false;
            return r;
        }
        if (values[i] < values[imin]) imin = i;
        if (values[i] > values[imax]) imax = i;
    }
    r.lower = values[imin];
    r.upper = values[imax];
    // an interior extremum lies between the neighbouring nodes; refine it so the
    // reported index bounds t g/G everywhere, not just on the nodes
    const std::size_t last = grid.size() - 1;
    if (imax > 0 && imax < last)
        r.upper = std::max(r.upper, refine_extremum(ratio, grid[imax - 1], grid[imax + 1], 1.0));
    if (imin > 0 && imin < last)
        r.lower = std::min(r.lower, refine_extremum(ratio, grid[imin - 1], grid[imin + 1], -1.0));
    r.delta2 = std::isfinite(r.upper);
    r.nabla2 = r.lower > 1.0;
    return r;
}

}  // namespace

double NFunction::Model::t_max() const { return std::numeric_limits<double>::infinity(); }

NFunction::NFunction(std::shared_ptr<const Model> model) : model_(std::move(model)) {
    auto closed = model_->closed_indices();
    indices_ = closed ? *closed : grid_indices(*model_);
    if (!indices_.delta2 || !indices_.nabla2)
        throw StructuralError(model_->name() + " has growth indices [" + fmt(indices_.lower) + ", " +
                              fmt(indices_.upper) + "], need 1 < i_G <= s_G < inf");
}

NFunction NFunction::power(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("power exponent must be > 1, got " + fmt(p));
    return NFunction(std::make_shared<PowerModel>(p));
}

NFunction NFunction::zygmund(double p, double alpha) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("zygmund exponent p must be > 1, got " + fmt(p));
    if (!std::isfinite(alpha)) throw DomainError("zygmund log exponent must be finite");
    return NFunction(std::make_shared<ZygmundModel>(p, alpha));
}

NFunction NFunction::product(const NFunction& a, const NFunction& b) {
    return NFunction(std::make_shared<ProductModel>(a, b));
}

NFunction NFunction::composition(const NFunction& outer, const NFunction& inner) {
    return NFunction(std::make_shared<CompositionModel>(outer, inner));
}

NFunction NFunction::table(std::vector<TablePoint> points) {
    validate_table(points);
    return NFunction(std::make_shared<TableModel>(std::move(points)));
}

double NFunction::value(double t) const {
    if (t < 0 || std::isnan(t)) throw DomainError("G(t) needs t >= 0, got " + fmt(t));
    if (t < kTiny) return 0.0;
    if (t < model_->t_min() || t > model_->t_max())
        throw ExtrapolationError("t = " + fmt(t) + " outside [" + fmt(model_->t_min()) + ", " +
                                 fmt(model_->t_max()) + "] of " + model_->name());
    return model_->G(t);
}

double NFunction::derivative(double t) const {
    if (t < 0 || std::isnan(t)) throw DomainError("g(t) needs t >= 0, got " + fmt(t));
    if (t < kTiny) return 0.0;
    if (t < model_->t_min() || t > model_->t_max())
        throw ExtrapolationError("t = " + fmt(t) + " outside [" + fmt(model_->t_min()) + ", " +
                                 fmt(model_->t_max()) + "] of " + model_->name());
    return model_->g(t);
}

double NFunction::inverse_derivative(double y) const {
    if (y < 0 || std::isnan(y)) throw DomainError("g^{-1}(y) needs y >= 0, got " + fmt(y));
    if (y < kTiny) return 0.0;
    if (auto closed = model_->inverse_g(y)) {
        if (!std::isfinite(*closed))
            throw OverflowError("g^{-1}(" + fmt(y) + ") overflows for " + model_->name());
        return *closed;
    }
    const Model& m = *model_;
    double lo, hi;
    if (m.t_min() > 0 || std::isfinite(m.t_max())) {
        lo = m.t_min();
        hi = m.t_max();
        if (y < m.g(lo) || y > m.g(hi))
            throw ExtrapolationError("g^{-1}(" + fmt(y) + ") outside the range of " + m.name());
    } else {
        hi = 1.0;
        if (m.g(hi) < y) {
            while (m.g(hi) < y) {
                hi *= 2.0;
                if (hi > 1e300)
                    throw OverflowError("g^{-1}(" + fmt(y) + "): bracket exceeded 1e300 for " + m.name());
            }
        } else {
            while (hi > kTiny && m.g(0.5 * hi) >= y) hi *= 0.5;
            if (hi <= kTiny) return 0.0;
        }
        lo = 0.5 * hi;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (m.g(mid) < y) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double NFunction::conjugate(double s) const {
    if (s < 0 || std::isnan(s)) throw DomainError("conjugate needs s >= 0, got " + fmt(s));
    if (s < kTiny) return 0.0;
    const double t = inverse_derivative(s);
    return std::max(0.0, s * t - value(t));
}

double NFunction::young_gap(double t, double s) const { return value(t) + conjugate(s) - t * s; }

double NFunction::inverse_doubling_constant() const {
    return std::pow(2.0, 1.0 / (indices_.lower - 1.0));
}

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> out;
    if (count <= 0) return out;
    if (count == 1) return {lo};
    out.reserve(static_cast<std::size_t>(count));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < count; ++i) out.push_back(std::exp(a + (b - a) * i / (count - 1)));
    out.front() = lo;
    out.back() = hi;
    return out;
}

EquivalenceReport check_equivalences(const NFunction& f, const std::vector<double>& grid) {
    EquivalenceReport rep;
    auto init = [](RatioBracket& b) {
        b.min = std::numeric_limits<double>::infinity();
        b.max = -std::numeric_limits<double>::infinity();
    };
    init(rep.index_ratio);
    init(rep.conjugate_ratio);
    init(rep.inverse_ratio);
    auto update = [&](RatioBracket& b, double value, double t, const char* what) {
        if (value < b.min) { b.min = value; b.argmin = t; }
        if (value > b.max) { b.max = value; b.argmax = t; }
        if (rep.ok && (!std::isfinite(value) || value < 1e-12 || value > 1e12)) {
            rep.ok = false;
            rep.failure = std::string(what) + " = " + fmt(value) + " at t = " + fmt(t);
        }
    };
    for (double t : grid) {
        if (!(t > 0)) throw DomainError("equivalence grid must lie in (0, inf)");
        const double G = f.value(t);
        const double g = f.derivative(t);
        update(rep.index_ratio, t * g / G, t, "t g(t)/G(t)");
        update(rep.conjugate_ratio, f.conjugate(g) / G, t, "G~(g(t))/G(t)");
        double inv;
        try {
            inv = f.inverse_derivative(2.0 * g) / t;
        } catch (const std::out_of_range&) {
            continue;  // 2 g(t) beyond a table's range
        }
        update(rep.inverse_ratio, inv, t, "g^{-1}(2g(t))/t");
    }
    return rep;
}

}  // namespace wolffkit
