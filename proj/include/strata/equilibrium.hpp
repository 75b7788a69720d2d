#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "strata/grid.hpp"

namespace strata {

// Barotropic pressure law P(t), strictly increasing on t > 0.
struct PressureLaw {
    std::function<double(double)> value;
    std::function<double(double)> slope;
    bool polytropic = false;
    double K = 1.0;
    double alpha = 1.0;

    static PressureLaw make_polytropic(double K, double alpha);
    static PressureLaw custom(std::function<double(double)> value,
                              std::function<double(double)> slope);
};

// Density-dependent viscosity coefficients (shear mu, bulk lambda) and their
// slopes, needed when the stress tensor is linearized in the density.
struct ViscosityLaw {
    std::function<double(double)> mu;
    std::function<double(double)> mu_slope;
    std::function<double(double)> lambda;
    std::function<double(double)> lambda_slope;

    static ViscosityLaw constant(double mu, double lambda);
};

struct PhysicalParams {
    int n = 2;                    // ambient dimension
    double depth = 1.0;           // b
    double gravity = 1.0;         // g
    double surface_tension = 0.0; // sigma >= 0
    double external_pressure = 1.0;
    PressureLaw pressure = PressureLaw::make_polytropic(1.0, 1.0);
    ViscosityLaw viscosity = ViscosityLaw::constant(1.0, 1.0);

    // mu > 0 everywhere; lambda > 0 if n == 2 (>= 0 otherwise); surface
    // tension positive when n >= 3
    bool admissible(std::string* why = nullptr) const;
};

struct CompatibilityReport {
    bool ok = false;
    bool pressure_attains_external = false;
    bool integral_divergent = false;
    double integral_margin = 0.0;  // +inf when divergent
    double reference_density = 0.0;  // P^{-1}(P_ext) when attained
};

// Checks that the external pressure is attained by the law and that the
// enthalpy integral clears the g*b threshold (divergence counts as clearing
// it).  Throws ConstitutiveError if sampled P is not strictly increasing.
CompatibilityReport check_compatibility(const PhysicalParams& params);

// Stratified hydrostatic background: enthalpy, its inverse, and the density
// profile sampled on the vertical grid.
class EquilibriumProfile {
  public:
    const PhysicalParams& params() const { return params_; }
    double h_min() const { return h_min_; }  // may be -inf
    double h_max() const { return h_max_; }  // may be +inf
    double guard_low() const { return guard_low_; }
    double guard_high() const { return guard_high_; }

    double enthalpy(double density) const;
    double inverse_enthalpy(double h) const;        // throws outside (h_min, h_max)
    double inverse_enthalpy_slope(double h) const;  // (H^{-1})'(h) = s / P'(s)

    double density(double y) const;  // H^{-1}(-g y)
    const std::vector<double>& density_nodes() const { return rho_; }
    const std::vector<double>& density_slope_nodes() const { return drho_; }
    const std::vector<double>& nodes() const { return nodes_; }

  private:
    friend EquilibriumProfile build_profile(const PhysicalParams&, const Grid&);
    PhysicalParams params_;
    double h_min_ = 0.0, h_max_ = 0.0;
    double guard_low_ = 0.0, guard_high_ = 0.0;
    double s_ref_ = 1.0;  // P^{-1}(P_ext)
    std::vector<double> nodes_, rho_, drho_;
};

// Requires check_compatibility(params).ok; throws ConstitutiveError otherwise.
EquilibriumProfile build_profile(const PhysicalParams& params, const Grid& grid);

double enthalpy_eval(const EquilibriumProfile& p, double density);
double inverse_enthalpy_eval(const EquilibriumProfile& p, double h);

}  // namespace strata
