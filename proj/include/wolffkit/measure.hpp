#pragma once

// Nonnegative finite measures on R^n answering ball-mass queries mu(B(x, r))
// for closed balls. Atoms are exact; densities are exact at their own center
// and carry an error estimate elsewhere.

#include "wolffkit/orlicz.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wolffkit {

struct AmbientSpace {
    int n = 3;
    double omega = 0.0;   ///< volume of the unit ball
    double sphere = 0.0;  ///< n * omega, area of the unit sphere

    explicit AmbientSpace(int dimension);
};

using Point = std::vector<double>;

double distance(const Point& a, const Point& b);
double norm(const Point& a);

struct MassEstimate {
    double value = 0.0;
    double error = 0.0;
};

class RadonMeasure {
public:
    explicit RadonMeasure(AmbientSpace space) : space_(space) {}
    virtual ~RadonMeasure() = default;

    const AmbientSpace& space() const { return space_; }
    int dimension() const { return space_.n; }
    virtual double total_mass() const = 0;

    /// mu(closed ball B(x, r)) with an error estimate (0 where exact).
    virtual MassEstimate ball_mass_estimate(const Point& x, double r) const = 0;
    double ball_mass(const Point& x, double r) const { return ball_mass_estimate(x, r).value; }

    /// Radii at which r -> mu(B(x, r)) jumps or loses smoothness; used as
    /// quadrature breakpoints.
    virtual std::vector<double> singular_radii(const Point& x) const = 0;

    /// True when every ball mass about the origin depends on r only and the
    /// measure is rotation invariant about 0.
    virtual bool radial_about_origin() const { return false; }

    /// Mass of B(0, r) for radial measures; radial_about_origin() must hold.
    double radial_mass(double r) const;

    virtual std::string kind() const = 0;

protected:
    void check_query(const Point& x, double r) const;

private:
    AmbientSpace space_;
};

struct Atom {
    Point center;
    double mass;
};

class AtomSum final : public RadonMeasure {
public:
    AtomSum(AmbientSpace space, std::vector<Atom> atoms);
    double total_mass() const override { return total_; }
    MassEstimate ball_mass_estimate(const Point& x, double r) const override;
    std::vector<double> singular_radii(const Point& x) const override;
    bool radial_about_origin() const override;
    std::string kind() const override { return "atoms"; }
    const std::vector<Atom>& atoms() const { return atoms_; }

private:
    std::vector<Atom> atoms_;
    double total_ = 0.0;
};

/// Density rho(s) >= 0 as a function of the distance s to the center.
class RadialProfile {
public:
    virtual ~RadialProfile() = default;
    virtual double density(double s) const = 0;
    /// Radii in (0, outer) where rho jumps or is not smooth.
    virtual std::vector<double> breakpoints() const { return {}; }
    /// Closed form of int_0^r |S^{n-1}| s^{n-1} rho(s) ds when one exists.
    virtual std::optional<double> cumulative(double, const AmbientSpace&) const { return std::nullopt; }
    virtual std::string name() const = 0;
};

class UniformProfile final : public RadialProfile {
public:
    explicit UniformProfile(double value);
    double density(double) const override { return value_; }
    std::optional<double> cumulative(double r, const AmbientSpace& sp) const override;
    std::string name() const override { return "uniform"; }

private:
    double value_;
};

/// value on [inner, outer), zero inside.
class AnnulusProfile final : public RadialProfile {
public:
    AnnulusProfile(double value, double inner);
    double density(double s) const override { return s >= inner_ ? value_ : 0.0; }
    std::vector<double> breakpoints() const override { return {inner_}; }
    std::optional<double> cumulative(double r, const AmbientSpace& sp) const override;
    std::string name() const override { return "annulus"; }

private:
    double value_, inner_;
};

/// coefficient * s^exponent, exponent > -n.
class PowerProfile final : public RadialProfile {
public:
    PowerProfile(double coefficient, double exponent);
    double density(double s) const override;
    std::optional<double> cumulative(double r, const AmbientSpace& sp) const override;
    std::string name() const override { return "power"; }
    double exponent() const { return exponent_; }

private:
    double coefficient_, exponent_;
};

/// Piecewise constant: values[i] on [radii[i-1], radii[i]) with radii[-1] = 0.
class StepProfile final : public RadialProfile {
public:
    StepProfile(std::vector<double> radii, std::vector<double> values);
    double density(double s) const override;
    std::vector<double> breakpoints() const override;
    std::optional<double> cumulative(double r, const AmbientSpace& sp) const override;
    std::string name() const override { return "table"; }

private:
    std::vector<double> radii_, values_;
};

class FunctionProfile final : public RadialProfile {
public:
    FunctionProfile(std::function<double(double)> rho, std::vector<double> breakpoints, std::string label);
    double density(double s) const override { return rho_(s); }
    std::vector<double> breakpoints() const override { return breaks_; }
    std::string name() const override { return label_; }

private:
    std::function<double(double)> rho_;
    std::vector<double> breaks_;
    std::string label_;
};

class RadialDensity final : public RadonMeasure {
public:
    /// Density `profile` around `center`, cut off at `outer`. The profile is
    /// sampled at construction and rejected if negative anywhere on the grid.
    RadialDensity(AmbientSpace space, Point center, std::shared_ptr<const RadialProfile> profile, double outer);

    double total_mass() const override { return total_; }
    MassEstimate ball_mass_estimate(const Point& x, double r) const override;
    std::vector<double> singular_radii(const Point& x) const override;
    bool radial_about_origin() const override;
    std::string kind() const override { return "radial:" + profile_->name(); }

    /// Exact mass of B(center, r).
    double center_mass(double r) const;
    double density(double s) const { return s <= outer_ ? profile_->density(s) : 0.0; }
    const Point& center() const { return center_; }
    double outer() const { return outer_; }
    const RadialProfile& profile() const { return *profile_; }
    /// breakpoints of the profile plus the outer radius, sorted
    std::vector<double> jump_radii() const;

private:
    double center_mass_quadrature(double r) const;

    Point center_;
    std::shared_ptr<const RadialProfile> profile_;
    double outer_;
    double total_ = 0.0;
};

/// Cell values on an axis-aligned grid of cubes with side h; cell with index
/// vector i covers origin + h * [i, i + 1).
class GridDensity final : public RadonMeasure {
public:
    struct Cell {
        std::vector<long> index;
        double value;
    };

    GridDensity(AmbientSpace space, Point origin, double h, std::vector<Cell> cells);
    double total_mass() const override { return total_; }
    MassEstimate ball_mass_estimate(const Point& x, double r) const override;
    std::vector<double> singular_radii(const Point&) const override { return {}; }
    std::string kind() const override { return "grid"; }

    const std::vector<Cell>& cells() const { return cells_; }
    double h() const { return h_; }
    Point cell_center(const Cell& c) const;
    double cell_mass(const Cell& c) const;

private:
    Point origin_;
    double h_;
    std::vector<Cell> cells_;
    double total_ = 0.0;
};

std::shared_ptr<AtomSum> dirac(const AmbientSpace& space, Point at, double mass = 1.0);
std::shared_ptr<AtomSum> zero_measure(const AmbientSpace& space);
/// Uniform density on B(0, radius) with the given total mass.
std::shared_ptr<RadialDensity> uniform_ball(const AmbientSpace& space, double radius, double mass);
/// Uniform density on the annulus inner <= |x| <= outer with the given total mass.
std::shared_ptr<RadialDensity> uniform_annulus(const AmbientSpace& space, double inner, double outer, double mass);

/// r^{n-1} g(r^{theta-1}), the mass profile of the Morrey-type density condition.
double morrey_target_mass(const NFunction& f, double theta, int n, double r);

/// Radial measure about 0 whose ball masses reproduce morrey_target_mass on
/// (0, outer], via the finite-difference density of the target.
std::shared_ptr<RadialDensity> construct_morrey_measure(const NFunction& f, double theta,
                                                        const AmbientSpace& space, double outer = 1.0);

/// Cell-average discretization of a radial density on a grid of side h
/// covering its support (cell values from 4^n-point sampling).
std::shared_ptr<GridDensity> discretize(const RadialDensity& m, double h);

}  // namespace wolffkit
