#pragma once

// N-functions G with derivative g = G', the inverse g^{-1}, the Young
// conjugate and the growth indices i_G = inf t g/G, s_G = sup t g/G.

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wolffkit {

struct IndexReport {
    double lower = 0.0;   ///< i_G
    double upper = 0.0;   ///< s_G
    double t_min = 1e-8;
    double t_max = 1e8;
    int points = 4096;    ///< 0 when a closed form was used
    bool delta2 = false;  ///< s_G finite
    bool nabla2 = false;  ///< i_G > 1
};

struct TablePoint {
    double t;
    double G;
    double g;
};

class NFunction {
public:
    /// Family implementation. Subclasses only need G and g; the rest has
    /// generic fallbacks.
    class Model {
    public:
        virtual ~Model() = default;
        virtual double G(double t) const = 0;
        virtual double g(double t) const = 0;
        /// closed-form g^{-1} if the family has one
        virtual std::optional<double> inverse_g(double) const { return std::nullopt; }
        /// closed-form index report if available
        virtual std::optional<IndexReport> closed_indices() const { return std::nullopt; }
        virtual std::optional<double> power_exponent() const { return std::nullopt; }
        /// admissible t range; evaluations outside (except t = 0) are extrapolation errors
        virtual double t_min() const { return 0.0; }
        virtual double t_max() const;
        virtual std::string name() const = 0;
    };

    static NFunction power(double p);
    static NFunction zygmund(double p, double alpha);
    static NFunction product(const NFunction& a, const NFunction& b);
    static NFunction composition(const NFunction& outer, const NFunction& inner);
    /// Points sorted by t; validated for positivity, monotonicity and convexity.
    static NFunction table(std::vector<TablePoint> points);

    double value(double t) const;               ///< G(t)
    double derivative(double t) const;          ///< g(t)
    double inverse_derivative(double y) const;  ///< g^{-1}(y)
    double conjugate(double s) const;           ///< G~(s) = s t* - G(t*), t* = g^{-1}(s)
    double young_gap(double t, double s) const; ///< G(t) + G~(s) - t s

    const IndexReport& indices() const { return indices_; }
    /// c with g^{-1}(2y) <= c g^{-1}(y), namely 2^{1/(i_G - 1)}
    double inverse_doubling_constant() const;
    std::optional<double> power_exponent() const { return model_->power_exponent(); }
    std::string name() const { return model_->name(); }
    const Model& model() const { return *model_; }

private:
    explicit NFunction(std::shared_ptr<const Model> model);

    std::shared_ptr<const Model> model_;
    IndexReport indices_;
};

struct RatioBracket {
    double min = 0.0;
    double max = 0.0;
    double argmin = 0.0;
    double argmax = 0.0;
};

struct EquivalenceReport {
    RatioBracket index_ratio;      ///< t g(t) / G(t)
    RatioBracket conjugate_ratio;  ///< G~(g(t)) / G(t)
    RatioBracket inverse_ratio;    ///< g^{-1}(2 g(t)) / t
    bool ok = true;
    std::string failure;
};

/// Evaluates the three equivalence ratios over `grid` (all points > 0); a ratio
/// escaping [1e-12, 1e12] or turning non-finite marks the report as failed.
EquivalenceReport check_equivalences(const NFunction& f, const std::vector<double>& grid);

/// `count` points spaced evenly in log t over [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace wolffkit
