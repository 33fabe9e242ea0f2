#pragma once

// W(x0, R) = int_0^R g^{-1}( mu(B(x0, r)) / r^{n-1} ) dr, its dyadic surrogate,
// the energy int W(x, R) dmu(x), and sup-scans of W over sample points.

#include "wolffkit/measure.hpp"
#include "wolffkit/orlicz.hpp"
#include "wolffkit/quadrature.hpp"

#include <string>
#include <vector>

namespace wolffkit {

struct WolffOptions {
    double tol = 1e-9;
    double divergence_threshold = 1e12;
    int nondecreasing_run = 64;
    int max_panels = 400;
    int max_intervals_per_piece = 200;
    int jobs = 1;  ///< worker threads for energy nodes and scan points
};

struct WolffResult {
    double value = 0.0;  ///< +inf when status == diverges
    Status status = Status::undecided;
    double error = 0.0;
    int panels = 0;
    std::string diagnostic;
};

struct DyadicLadder {
    double R;
    int depth;
    /// R_k = 2^{1-k} R for k = 0..depth
    std::vector<double> radii() const;
};

WolffResult wolff_potential(const RadonMeasure& m, const NFunction& f, const Point& x0, double R,
                            const WolffOptions& options = {});

/// sum_{k=1}^{K} (R_k - R_{k+1}) g^{-1}( mu(B(x0, R_k)) / R_k^{n-1} ); +inf if
/// g^{-1} overflows.
double dyadic_wolff(const RadonMeasure& m, const NFunction& f, const Point& x0, double R, int depth);

/// int W(x, R) dmu(x): exact sum over atoms, adaptive radial quadrature for
/// radial densities, cell-center rule for grid densities.
WolffResult hedberg_wolff_energy(const RadonMeasure& m, const NFunction& f, double R,
                                 const WolffOptions& options = {});

struct ScanResult {
    double value = 0.0;  ///< max of W over the samples, +inf if any diverges
    Point witness;       ///< sample attaining the max (first in sample order)
    Status status = Status::converged;
    std::vector<WolffResult> samples;
};

ScanResult continuity_scan(const RadonMeasure& m, const NFunction& f, const std::vector<Point>& points, double r,
                           const WolffOptions& options = {});

/// Tensor grid with `per_axis` points per coordinate over the box [lo, hi].
std::vector<Point> box_grid(const Point& lo, const Point& hi, int per_axis);

}  // namespace wolffkit
