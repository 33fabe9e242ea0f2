#pragma once

// Decreasing rearrangement f* and maximal rearrangement f** of nonnegative
// simple functions, and the criteria expressed through them: the Orlicz-Lorentz
// integral, the Marcinkiewicz-type sup, the Morrey density constant and the
// Hoelder oscillation ratio of radial solutions.

#include "wolffkit/measure.hpp"
#include "wolffkit/orlicz.hpp"
#include "wolffkit/radial.hpp"

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wolffkit {

struct StepPiece {
    double value;    ///< >= 0
    double measure;  ///< > 0, measure of the set where f takes `value`
};

/// Unbounded part of f on a set of measure `span`: f*(t) = top * (t/span)^exponent
/// for t < span, where top is the largest step value; -1 < exponent < 0.
struct PowerTail {
    double exponent;
    double span;
};

class SampledFunction {
public:
    explicit SampledFunction(std::vector<StepPiece> pieces, std::optional<PowerTail> tail = std::nullopt);
    /// Tail whose span is the measure of the largest-valued piece.
    static SampledFunction with_power_tail(std::vector<StepPiece> pieces, double exponent);

    const std::vector<StepPiece>& pieces() const { return pieces_; }
    const std::optional<PowerTail>& tail() const { return tail_; }
    double total_measure() const;
    /// |{f > lambda}| computed from the pieces directly
    double level_set_measure(double lambda) const;
    double integral() const;

private:
    std::vector<StepPiece> pieces_;
    std::optional<PowerTail> tail_;
};

class RearrangementProfile {
public:
    explicit RearrangementProfile(const SampledFunction& f);

    double star(double t) const;         ///< f*(t), right-continuous
    double double_star(double t) const;  ///< f**(t), f**(0) = f*(0)
    double integral_to(double t) const;  ///< int_0^t f*
    /// |{t : f*(t) > lambda}|
    double level_set_measure(double lambda) const;
    double total_measure() const { return total_; }
    /// right ends of the steps of f*, increasing; the tail (if any) ends at the first
    const std::vector<double>& breakpoints() const { return ends_; }
    const std::optional<PowerTail>& tail() const { return tail_; }
    double top() const { return top_; }

private:
    std::vector<double> ends_;    ///< cumulative measure at the end of each step
    std::vector<double> values_;  ///< step values, nonincreasing
    std::vector<double> mass_;    ///< int_0^{ends_[i]} f*
    std::optional<PowerTail> tail_;
    double top_ = 0.0;
    double head_ = 0.0;  ///< measure taken by the tail
    double head_mass_ = 0.0;
    double total_ = 0.0;
};

RearrangementProfile rearrange(const SampledFunction& f);

enum class Verdict { satisfied, violated, undecided };
std::string_view to_string(Verdict v);

struct CriterionReport {
    double value = 0.0;  ///< functional value or sup constant, +inf allowed
    Verdict verdict = Verdict::undecided;
    double witness = 0.0;  ///< parameter where the extremum is attained
    std::string diagnostic;
};

/// int_0^T t^{1/n} g^{-1}(t^{1/n} f**(t)) dt/t with T the total measure;
/// satisfied iff finite.
CriterionReport lorentz_G_functional(const SampledFunction& f, const NFunction& F, int n, double tol = 1e-9);

/// psi^{-1}(1/s) = s^{-1/n} g(s^{(theta-1)/n})
double marcinkiewicz_gauge(const NFunction& F, int n, double theta, double s);

/// sup over the step breakpoints s of f**(s) / psi^{-1}(1/s), and over the
/// tail towards 0 when present; satisfied iff finite.
CriterionReport marcinkiewicz_check(const SampledFunction& f, const NFunction& F, int n, double theta);

struct BallSample {
    Point x;
    double r;
};

/// max over samples of mu(B(x, r)) / (r^{n-1} g(r^{theta-1})); satisfied iff
/// finite and <= bound.
CriterionReport morrey_density_check(const RadonMeasure& m, const NFunction& F, double theta,
                                     const std::vector<BallSample>& samples,
                                     double bound = std::numeric_limits<double>::infinity());

struct OscillationRow {
    double center = 0.0;  ///< radial coordinate of the ball center
    double r = 0.0;
    double sup = 0.0, inf = 0.0;
    double ratio = 0.0;  ///< (sup - inf) / r^theta, +inf when u is unbounded on the ball
};

struct OscillationReport {
    CriterionReport summary;  ///< max ratio, witness = r of the max
    std::vector<OscillationRow> rows;
    double spread = 0.0;  ///< max/min of the finite positive ratios
};

/// Balls B(center e1, r): sup u = u(max(0, center - r)), inf u = u(center + r).
/// satisfied iff the max ratio is finite and <= bound.
OscillationReport hoelder_sup_inf_check(const RadialSolution& sol, double theta,
                                        const std::vector<std::pair<double, double>>& balls,
                                        double bound = std::numeric_limits<double>::infinity());

}  // namespace wolffkit
