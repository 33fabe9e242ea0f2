#include "wolffkit/radial.hpp"

#include "wolffkit/errors.hpp"
#include "wolffkit/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wolffkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

std::vector<double> cuts_between(double lo, double hi, const std::vector<double>& breaks) {
    std::vector<double> cuts = {lo};
    for (double b : breaks)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    return cuts;
}

}  // namespace

RadialSolution::RadialSolution(NFunction f, std::shared_ptr<const RadonMeasure> m, double outer, RadialOptions options)
    : f_(std::move(f)), m_(std::move(m)), outer_(outer), options_(options) {
    if (!m_) throw DomainError("radial solve needs a measure");
    if (!(outer_ > 0) || !std::isfinite(outer_)) throw DomainError("outer radius must be > 0");
    if (!(options_.tol > 0)) throw DomainError("tolerance must be > 0");
    if (!m_->radial_about_origin())
        throw DomainError("radial solve needs a measure radial about the origin, got " + m_->kind());
    const double total = m_->total_mass();
    if (std::abs(total - enclosed_mass(outer_)) > 1e-12 * std::max(total, 1e-300))
        throw DomainError("measure is not carried by B(0, " + fmt(outer_) + ")");

    for (double b : m_->singular_radii(Point(static_cast<std::size_t>(dimension()), 0.0)))
        if (b > 0 && b < outer_) breaks_.push_back(b);
    std::sort(breaks_.begin(), breaks_.end());
    breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());

    auto panel = [&](int k) {
        const double lo = std::ldexp(outer_, -k);
        const double hi = 2 * lo;
        const auto cuts = cuts_between(lo, hi, breaks_);
        const auto q = quad::adaptive_pieces([&](double s) { return slope(s); }, cuts, 1e-300, 1e-2 * options_.tol,
                                             options_.max_intervals_per_piece);
        return quad::PanelValue{q.value, q.error, enclosed_mass(lo) == 0.0};
    };
    quad::SeriesOptions so;
    so.tol = options_.tol;
    const auto series = quad::sum_dyadic_panels(panel, so);
    center_.value = series.status == Status::diverges ? kInf : series.value;
    center_.status = series.status;
    center_.error = series.error;
    center_.diagnostic = series.diagnostic;
}

double RadialSolution::enclosed_mass(double r) const { return m_->radial_mass(r); }

double RadialSolution::slope(double r) const {
    if (!(r > 0)) throw DomainError("slope needs r > 0");
    const int n = dimension();
    return f_.inverse_derivative(enclosed_mass(r) / (m_->space().sphere * std::pow(r, n - 1)));
}

quad::Estimate RadialSolution::value_estimate(double r) const {
    if (!(r >= 0)) throw DomainError("u is defined for r >= 0");
    if (r >= outer_) return {0.0, 0.0};
    if (r == 0.0) return {center_.value, center_.error};
    // dyadic cuts anchored at R_out: pieces stay within a factor 2 of their
    // left end and are shared by every r below them
    std::vector<double> cuts = {r};
    for (double s = 0.5 * outer_; s > r; s *= 0.5) cuts.push_back(s);
    for (double b : breaks_)
        if (b > r) cuts.push_back(b);
    cuts.push_back(outer_);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const auto q = quad::adaptive_pieces([&](double s) { return slope(s); }, cuts, 1e-300, 1e-2 * options_.tol,
                                         options_.max_intervals_per_piece);
    return {q.value, q.error};
}

double RadialSolution::value(double r) const { return value_estimate(r).value; }

RadialSolution solve_radial(const NFunction& f, std::shared_ptr<const RadonMeasure> m, double outer,
                            const RadialOptions& options) {
    return RadialSolution(f, std::move(m), outer, options);
}

// ---------------------------------------------------------------- weak form

double Bump::value(double r) const {
    const double t = (2 * r - lo - hi) / (hi - lo);
    if (std::abs(t) >= 1) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

double Bump::derivative(double r) const {
    const double t = (2 * r - lo - hi) / (hi - lo);
    if (std::abs(t) >= 1) return 0.0;
    const double q = 1.0 - t * t;
    return std::exp(-1.0 / q) * (-2.0 * t / (q * q)) * 2.0 / (hi - lo);
}

std::vector<Bump> bump_family(double outer, int count) {
    if (count < 1) throw DomainError("bump family needs at least one bump");
    if (count == 1) return {{0.25 * outer, 0.75 * outer}};
    std::vector<Bump> out;
    for (int i = 0; i < count; ++i) {
        const double lo = outer * 0.005 * std::pow(180.0, static_cast<double>(i) / (count - 1));
        out.push_back({lo, std::min(2 * lo, 0.99 * outer)});
    }
    return out;
}

WeakFormReport verify_weak_form(const RadialSolution& sol, double tol, int count) {
    if (!(tol > 0)) throw DomainError("tolerance must be > 0");
    const auto& m = sol.measure();
    const auto& f = sol.nfunction();
    const int n = sol.dimension();
    const double sphere = m.space().sphere;
    const double qtol = 1e-3 * tol;

    WeakFormReport out;
    const auto bumps = bump_family(sol.outer(), count);
    for (std::size_t i = 0; i < bumps.size(); ++i) {
        const Bump& phi = bumps[i];
        const auto cuts = cuts_between(phi.lo, phi.hi, sol.breakpoints());
        const double flux = quad::adaptive_pieces(
                                [&](double r) {
                                    return f.derivative(sol.slope(r)) * phi.derivative(r) * sphere * std::pow(r, n - 1);
                                },
                                cuts, qtol, qtol)
                                .value;

        double load = 0.0;
        if (auto density = dynamic_cast<const RadialDensity*>(&m)) {
            load = quad::adaptive_pieces(
                       [&](double s) { return phi.value(s) * density->density(s) * sphere * std::pow(s, n - 1); },
                       cuts_between(phi.lo, phi.hi, density->jump_radii()), qtol, qtol)
                       .value;
        } else if (auto atoms = dynamic_cast<const AtomSum*>(&m)) {
            for (const auto& a : atoms->atoms()) load += phi.value(norm(a.center)) * a.mass;
        } else {
            // Stieltjes integral against r -> mu(B(0, r)), by parts
            load = -quad::adaptive_pieces([&](double r) { return phi.derivative(r) * sol.enclosed_mass(r); }, cuts,
                                          qtol, qtol)
                        .value;
        }

        const double residual = std::abs(-flux - load);
        out.residuals.push_back(residual);
        if (out.worst < 0 || residual > out.max_residual) {
            out.max_residual = residual;
            out.worst = static_cast<int>(i);
            out.worst_bump = phi;
        }
        if (residual > tol * (1 + load) && out.passed) {
            out.passed = false;
            out.diagnostic = "bump on [" + fmt(phi.lo) + ", " + fmt(phi.hi) + "]: residual " + fmt(residual) +
                             " exceeds " + fmt(tol * (1 + load));
        }
    }
    if (!out.passed && out.worst >= 0)
        out.diagnostic += "; worst bump [" + fmt(out.worst_bump.lo) + ", " + fmt(out.worst_bump.hi) + "]";
    return out;
}

// ---------------------------------------------------------------- two-sided bound

BoundReport verify_two_sided_bound(const RadialSolution& sol, const std::vector<double>& probes,
                                   const std::vector<double>& radii, const WolffOptions& options) {
    struct Job {
        double probe, R;
    };
    std::vector<Job> jobs;
    for (double x : probes) {
        if (!(x >= 0)) throw DomainError("probe radii must be >= 0");
        for (double R : radii) {
            if (!(R > 0)) throw DomainError("bound radii must be > 0");
            jobs.push_back({x, R});
        }
    }
    WolffOptions inner = options;
    inner.jobs = 1;
    const int n = sol.dimension();

    BoundReport out;
    out.rows = parallel_map(jobs.size(), options.jobs, [&](std::size_t i) {
        BoundRow row;
        row.probe = jobs[i].probe;
        row.R = jobs[i].R;
        row.u = sol.value(row.probe);
        if (!std::isfinite(row.u)) {
            row.skipped = true;
            row.reason = "u diverges at the probe";
            return row;
        }
        row.inf_u = sol.value(std::min(row.probe + row.R, sol.outer()));
        Point x(static_cast<std::size_t>(n), 0.0);
        x[0] = row.probe;
        row.wolff = wolff_potential(sol.measure(), sol.nfunction(), x, row.R, inner);
        if (row.wolff.status == Status::undecided) {
            row.skipped = true;
            row.reason = "Wolff potential undecided: " + row.wolff.diagnostic;
            return row;
        }
        const double w = row.wolff.value;
        row.ratio_up = row.u / (row.inf_u + w + row.R);
        if (w > row.R) row.ratio_low = row.u / (w - row.R);
        return row;
    });

    bool first_low = true, first_up = true;
    for (const auto& row : out.rows) {
        if (row.skipped) {
            ++out.skipped;
            continue;
        }
        if (row.ratio_low) {
            const double v = *row.ratio_low;
            out.low_min = first_low ? v : std::min(out.low_min, v);
            out.low_max = first_low ? v : std::max(out.low_max, v);
            first_low = false;
            ++out.low_count;
        }
        if (row.ratio_up) {
            const double v = *row.ratio_up;
            out.up_min = first_up ? v : std::min(out.up_min, v);
            out.up_max = first_up ? v : std::max(out.up_max, v);
            first_up = false;
            ++out.up_count;
        }
    }
    return out;
}

// ---------------------------------------------------------------- asymptotics

double fundamental_exponent(int n, double p) { return -(n - p) / (p - 1); }

AsymptoticFit fit_asymptotics(const RadialSolution& sol, double lo, double hi, bool log_term, int samples) {
    if (sol.center().status != Status::diverges)
        throw DomainError("asymptotic fit needs a profile diverging at the origin (u(0) is " +
                          std::string(to_string(sol.center().status)) + ")");
    if (!(lo > 0 && hi > lo)) throw DomainError("fit range must satisfy 0 < lo < hi");
    const int cols = log_term ? 3 : 2;
    if (samples < cols + 1) throw DomainError("too few samples for the fit");

    Eigen::MatrixXd A(samples, cols);
    Eigen::VectorXd b(samples);
    for (int i = 0; i < samples; ++i) {
        const double r = lo * std::pow(hi / lo, static_cast<double>(i) / (samples - 1));
        const double u = sol.value(r);
        if (!(u > 0) || !std::isfinite(u)) throw DomainError("u must be positive and finite on the fit range");
        A(i, 0) = 1.0;
        A(i, 1) = std::log(r);
        if (log_term) A(i, 2) = std::log(std::log(std::exp(1.0) + 1.0 / r));
        b(i) = std::log(u);
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);

    AsymptoticFit out;
    out.log_constant = c(0);
    out.exponent = c(1);
    if (log_term) out.log_exponent = c(2);
    out.rms = std::sqrt((A * c - b).squaredNorm() / samples);
    out.samples = samples;
    return out;
}

// ---------------------------------------------------------------- int_0 g^{-1}(s^{1-n}) ds

IntDivReport check_int_div(const NFunction& f, int n, int depth) {
    if (n < 2) throw DomainError("finiteness test needs n >= 2");
    const double dual = static_cast<double>(n) / (n - 1);

    IntDivReport out;
    out.near_zero = quad::classify_dyadic_tail(
        [&](int k) {
            const double hi = std::ldexp(1.0, -k);
            return quad::composite_gk15([&](double s) { return f.inverse_derivative(std::pow(s, 1 - n)); }, 0.5 * hi,
                                        hi, 2)
                .value;
        },
        depth);
    out.at_infinity = quad::classify_dyadic_tail(
        [&](int k) {
            const double lo = std::ldexp(1.0, k);
            try {
                return quad::composite_gk15([&](double t) { return f.conjugate(t) / std::pow(t, 1 + dual); }, lo,
                                            2 * lo, 2)
                    .value;
            } catch (const ExtrapolationError&) {
                return kInf;
            }
        },
        depth);
    out.bounded = out.near_zero.verdict == quad::TailVerdict::converges;
    out.consistent = out.near_zero.verdict == out.at_infinity.verdict &&
                     out.near_zero.verdict != quad::TailVerdict::undecided;
    if (!out.consistent)
        out.diagnostic = "near-zero test: " + std::string(to_string(out.near_zero.verdict)) +
                         ", conjugate test at infinity: " + std::string(to_string(out.at_infinity.verdict));
    return out;
}

}  // namespace wolffkit
