#pragma once

// Exact radial solutions of -div(g(|Du|) Du/|Du|) = mu in B(0, R_out) with
// u(R_out) = 0, for measures radial about the origin:
//
//   v(r) = -u'(r) = g^{-1}( mu(B(0, r)) / (|S^{n-1}| r^{n-1}) ),   u(r) = int_r^{R_out} v.
//
// Plus the checks built on them: the radial weak form, the two-sided Wolff
// bound, power-law fits at the pole and the finiteness test for int_0 g^{-1}(s^{1-n}).

#include "wolffkit/measure.hpp"
#include "wolffkit/orlicz.hpp"
#include "wolffkit/quadrature.hpp"
#include "wolffkit/wolff.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wolffkit {

struct RadialOptions {
    double tol = 1e-10;  ///< relative accuracy of u
    int max_intervals_per_piece = 200;
};

struct CenterValue {
    double value = 0.0;  ///< u(0); +inf when the profile diverges at the pole
    Status status = Status::undecided;
    double error = 0.0;
    std::string diagnostic;
};

class RadialSolution {
public:
    RadialSolution(NFunction f, std::shared_ptr<const RadonMeasure> m, double outer, RadialOptions options = {});

    const NFunction& nfunction() const { return f_; }
    const RadonMeasure& measure() const { return *m_; }
    std::shared_ptr<const RadonMeasure> measure_ptr() const { return m_; }
    double outer() const { return outer_; }
    int dimension() const { return m_->dimension(); }

    /// mu(B(0, r))
    double enclosed_mass(double r) const;
    /// v(r) = -u'(r) for r > 0
    double slope(double r) const;
    /// u(r) for r >= 0: 0 beyond R_out, center().value at r = 0.
    double value(double r) const;
    quad::Estimate value_estimate(double r) const;
    const CenterValue& center() const { return center_; }
    /// jump radii of r -> mu(B(0, r)) inside (0, R_out)
    const std::vector<double>& breakpoints() const { return breaks_; }

private:
    NFunction f_;
    std::shared_ptr<const RadonMeasure> m_;
    double outer_;
    RadialOptions options_;
    std::vector<double> breaks_;
    CenterValue center_;
};

/// Throws DomainError unless `m` is radial about 0 and carried by B(0, outer).
RadialSolution solve_radial(const NFunction& f, std::shared_ptr<const RadonMeasure> m, double outer,
                            const RadialOptions& options = {});

struct Bump {
    double lo, hi;  ///< support [lo, hi]
    double value(double r) const;
    double derivative(double r) const;
};

/// `count` smooth bumps with supports spread geometrically over (0, outer).
std::vector<Bump> bump_family(double outer, int count = 20);

struct WeakFormReport {
    std::vector<double> residuals;
    double max_residual = 0.0;
    int worst = -1;
    Bump worst_bump{0, 0};
    bool passed = true;
    std::string diagnostic;
};

/// |-int g(v) phi' |S^{n-1}| r^{n-1} dr - int phi dmu| for each bump, compared
/// with tol * (1 + int phi dmu).
WeakFormReport verify_weak_form(const RadialSolution& sol, double tol, int count = 20);

struct BoundRow {
    double probe = 0.0;  ///< radial coordinate of x = probe * e1
    double R = 0.0;
    double u = 0.0;
    double inf_u = 0.0;  ///< inf over B(x, R) = u(probe + R)
    WolffResult wolff;
    std::optional<double> ratio_low;  ///< u / (W - R), only when W > R
    std::optional<double> ratio_up;   ///< u / (inf + W + R)
    bool skipped = false;
    std::string reason;
};

struct BoundReport {
    std::vector<BoundRow> rows;
    double low_min = 0.0, low_max = 0.0;  ///< over rows with ratio_low
    double up_min = 0.0, up_max = 0.0;    ///< over rows with ratio_up
    int low_count = 0, up_count = 0, skipped = 0;
};

BoundReport verify_two_sided_bound(const RadialSolution& sol, const std::vector<double>& probes,
                                   const std::vector<double>& radii, const WolffOptions& options = {});

struct AsymptoticFit {
    double exponent = 0.0;
    std::optional<double> log_exponent;  ///< coefficient of log log(e + 1/r)
    double log_constant = 0.0;
    double rms = 0.0;  ///< residual of the fit in log u
    int samples = 0;
};

/// Least squares of log u(r) on log r (and log log(e + 1/r) when `log_term`)
/// over log-spaced r in [lo, hi]. DomainError unless u diverges at 0.
AsymptoticFit fit_asymptotics(const RadialSolution& sol, double lo = 1e-4, double hi = 1e-2, bool log_term = false,
                              int samples = 41);

/// -(n - p) / (p - 1): the power of r in the fundamental solution for p < n.
double fundamental_exponent(int n, double p);

struct IntDivReport {
    bool bounded = false;  ///< int_0 g^{-1}(s^{1-n}) ds < inf
    bool consistent = false;
    quad::TailClassification near_zero;    ///< panels of g^{-1}(s^{1-n}) on [2^{-k-1}, 2^{-k}]
    quad::TailClassification at_infinity;  ///< panels of G~(t)/t^{1+n'} on [2^k, 2^{k+1}]
    std::string diagnostic;
};

IntDivReport check_int_div(const NFunction& f, int n, int depth = 160);

}  // namespace wolffkit
