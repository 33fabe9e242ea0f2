#pragma once

// One-dimensional integration shared by the potential, the radial oracle and the
// rearrangement functionals: Gauss–Kronrod panels, adaptive bisection, and the
// geometric (dyadic) series driver that decides convergence or divergence of
// integrals with a singular end point.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace wolffkit {

enum class Status { converged, diverges, undecided };

std::string_view to_string(Status s);

namespace quad {

using Integrand = std::function<double(double)>;

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// 7-point Gauss / 15-point Kronrod pair on [a, b]; error is QUADPACK's
/// scaled |K15 - G7| estimate.
Estimate gauss_kronrod15(const Integrand& f, double a, double b);

/// Nodes and weights of the GK15 pair on [a, b]; `gauss` is zero at the
/// Kronrod-only nodes. For callers that evaluate the nodes themselves (in parallel).
struct Rule15 {
    std::array<double, 15> nodes;
    std::array<double, 15> kronrod;
    std::array<double, 15> gauss;
};
Rule15 gk15_rule(double a, double b);

/// Sum of `panels` equal-width GK15 panels on [a, b].
Estimate composite_gk15(const Integrand& f, double a, double b, int panels);

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    bool converged = false;
};

/// Globally adaptive GK15: bisects the interval with the largest error until
/// error <= max(abs_tol, rel_tol*|value|) or `max_intervals` is reached.
AdaptiveResult adaptive(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                        int max_intervals = 200);

/// Runs `adaptive` on each piece [cuts[i], cuts[i+1]] and sums. `cuts` must be sorted.
AdaptiveResult adaptive_pieces(const Integrand& f, std::span<const double> cuts, double abs_tol,
                               double rel_tol, int max_intervals_per_piece = 200);

/// One term of a dyadic series. `rest_vanishes` tells the driver that every
/// deeper panel is exactly zero (e.g. the ball around x0 no longer sees the measure).
struct PanelValue {
    double value = 0.0;
    double error = 0.0;
    bool rest_vanishes = false;
};

struct SeriesOptions {
    double tol = 1e-9;                    ///< absolute below 1, relative above
    double divergence_threshold = 1e12;
    int nondecreasing_run = 64;
    int max_panels = 400;
};

struct SeriesResult {
    double value = 0.0;
    double error = 0.0;
    Status status = Status::undecided;
    int panels = 0;
    std::string diagnostic;
};

/// Sums panel(1), panel(2), ... where panel k covers a geometrically shrinking
/// interval towards the singular end point.
///
/// converged: the last three contributions are each below tol*max(1, total) and
///            the geometric tail extrapolation keeps the error within that budget,
///            or a panel reports `rest_vanishes`.
/// diverges:  `nondecreasing_run` consecutive non-decreasing contributions with
///            total above the threshold, or such a run when the panel budget
///            (or the floating-point range) is exhausted.
/// undecided: anything else.
SeriesResult sum_dyadic_panels(const std::function<PanelValue(int)>& panel,
                               const SeriesOptions& options = {});

enum class TailVerdict { converges, diverges, undecided };

std::string_view to_string(TailVerdict v);

struct TailClassification {
    TailVerdict verdict = TailVerdict::undecided;
    /// mean log2 ratio of consecutive contributions over the last window;
    /// > 0 means geometric growth (power-type divergence)
    double growth_rate = 0.0;
    /// exponent gamma in c_k ~ k^{-gamma}, only meaningful when growth_rate ~ 0
    double log_decay = 0.0;
    int panels = 0;
};

/// Asymptotic classification of a series sum_k c_k of nonnegative dyadic panel
/// contributions (c_k for k = 0..depth-1). Power-type behaviour shows up as a
/// constant ratio 2^{growth_rate}; when the ratio tends to 1 the contributions
/// are regularly varying in k and the series converges iff they decay faster
/// than 1/k.
TailClassification classify_dyadic_tail(const std::function<double(int)>& contribution,
                                        int depth = 160);

}  // namespace quad
}  // namespace wolffkit
