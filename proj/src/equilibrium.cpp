#include "strata/equilibrium.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

#include "strata/errors.hpp"

namespace strata {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Integrand = std::function<double(double)>;

double adaptive_integral(const Integrand& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 12, 1e-13);
}

// P^{-1} by bisection + Newton polish on a fixed bracket
double invert_pressure(const PressureLaw& law, double target) {
    double lo = 1e-10, hi = 1e10;
    if (law.value(lo) >= target || law.value(hi) <= target)
        throw ConstitutiveError("pressure law does not attain the external pressure");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (law.value(mid) < target ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        const double dp = law.slope(s);
        if (dp <= 0.0) break;
        s -= (law.value(s) - target) / dp;
        s = std::clamp(s, lo, hi);
    }
    return s;
}

void check_monotone(const PressureLaw& law) {
    double prev = law.value(1e-8);
    for (double t = 1e-6; t <= 1e8; t *= 10.0) {
        const double cur = law.value(t);
        if (cur <= prev) throw ConstitutiveError("pressure law samples are not increasing");
        prev = cur;
    }
}

}  // namespace

PressureLaw PressureLaw::make_polytropic(double K, double alpha) {
    if (K <= 0.0 || alpha < 1.0)
        throw ConstitutiveError("polytropic law needs K > 0 and alpha >= 1");
    PressureLaw law;
    law.polytropic = true;
    law.K = K;
    law.alpha = alpha;
    law.value = [K, alpha](double t) { return K * std::pow(t, alpha); };
    law.slope = [K, alpha](double t) { return K * alpha * std::pow(t, alpha - 1.0); };
    return law;
}

PressureLaw PressureLaw::custom(std::function<double(double)> value,
                                std::function<double(double)> slope) {
    PressureLaw law;
    law.value = std::move(value);
    law.slope = std::move(slope);
    return law;
}

ViscosityLaw ViscosityLaw::constant(double mu, double lambda) {
    ViscosityLaw v;
    v.mu = [mu](double) { return mu; };
    v.mu_slope = [](double) { return 0.0; };
    v.lambda = [lambda](double) { return lambda; };
    v.lambda_slope = [](double) { return 0.0; };
    return v;
}

bool PhysicalParams::admissible(std::string* why) const {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    for (double t = 0.05; t <= 20.0; t *= 2.0) {
        if (viscosity.mu(t) <= 0.0) return fail("shear viscosity must be positive");
        const double lam = viscosity.lambda(t);
        if (n == 2 && lam <= 0.0) return fail("bulk viscosity must be positive when n = 2");
        if (n >= 3 && lam < 0.0) return fail("bulk viscosity must be nonnegative");
    }
    if (n >= 3 && surface_tension <= 0.0) return fail("surface tension must be positive when n >= 3");
    if (surface_tension < 0.0) return fail("surface tension must be nonnegative");
    if (depth <= 0.0 || gravity <= 0.0) return fail("depth and gravity must be positive");
    return true;
}

CompatibilityReport check_compatibility(const PhysicalParams& params) {
    check_monotone(params.pressure);
    CompatibilityReport rep;
    const PressureLaw& law = params.pressure;

    const double p_lo = law.value(1e-10);
    const double p_hi = law.value(1e10);
    rep.pressure_attains_external =
        params.external_pressure > p_lo && params.external_pressure < p_hi;
    if (!rep.pressure_attains_external) return rep;

    const double s0 = invert_pressure(law, params.external_pressure);
    rep.reference_density = s0;

    // partial integrals of t^{-1} P'(t) over decades up to 1e6; a divergent
    // tail shows up as non-shrinking decade increments
    const Integrand f = [&law](double t) { return law.slope(t) / t; };
    double total = 0.0, prev_inc = -1.0;
    bool divergent = false;
    double lo = s0;
    for (double hi = s0 * 10.0; lo < 1e6; lo = hi, hi *= 10.0) {
        const double inc = adaptive_integral(f, lo, std::min(hi, 1e6 * 10.0));
        total += inc;
        if (prev_inc >= 0.0 && inc >= 0.9 * prev_inc) divergent = true;
        prev_inc = inc;
    }
    rep.integral_divergent = divergent;
    rep.integral_margin = divergent ? kInf : total - params.gravity * params.depth;
    rep.ok = divergent || total > params.gravity * params.depth;
    return rep;
}

double EquilibriumProfile::enthalpy(double density) const {
    if (density <= 0.0) throw VacuumError("enthalpy: density must be positive");
    const PressureLaw& law = params_.pressure;
    const double gb = params_.gravity * params_.depth;
    if (law.polytropic) {
        if (law.alpha == 1.0) return -gb + law.K * std::log(density / s_ref_);
        const double a = law.alpha;
        return -gb + law.K * a / (a - 1.0) *
                         (std::pow(density, a - 1.0) - std::pow(s_ref_, a - 1.0));
    }
    const Integrand f = [&law](double t) { return law.slope(t) / t; };
    return -gb + adaptive_integral(f, s_ref_, density);
}

double EquilibriumProfile::inverse_enthalpy(double h) const {
    if (!(h > h_min_ && h < h_max_))
        throw VacuumError("inverse enthalpy: argument outside (H_min, H_max)");
    const PressureLaw& law = params_.pressure;
    const double gb = params_.gravity * params_.depth;
    if (law.polytropic) {
        if (law.alpha == 1.0) return s_ref_ * std::exp((h + gb) / law.K);
        const double a = law.alpha;
        const double base = std::pow(s_ref_, a - 1.0) + (a - 1.0) / (law.K * a) * (h + gb);
        return std::pow(base, 1.0 / (a - 1.0));
    }
    // bracketed Newton with bisection fallback, tolerance 1e-12 absolute in h
    double lo = s_ref_, hi = s_ref_;
    while (enthalpy(lo) > h) lo *= 0.5;
    while (enthalpy(hi) < h) hi *= 2.0;
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double val = enthalpy(s);
        if (std::abs(val - h) < 1e-12) return s;
        (val < h ? lo : hi) = s;
        const double slope = params_.pressure.slope(s) / s;  // H'
        double next = s - (val - h) / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
    }
    throw SolveError("inverse enthalpy: root finder did not converge");
}

double EquilibriumProfile::inverse_enthalpy_slope(double h) const {
    const double s = inverse_enthalpy(h);
    return s / params_.pressure.slope(s);
}

double EquilibriumProfile::density(double y) const {
    return inverse_enthalpy(-params_.gravity * y);
}

EquilibriumProfile build_profile(const PhysicalParams& params, const Grid& grid) {
    const CompatibilityReport rep = check_compatibility(params);
    if (!rep.ok) throw ConstitutiveError("equilibrium compatibility conditions fail");

    EquilibriumProfile prof;
    prof.params_ = params;
    prof.s_ref_ = rep.reference_density;

    const PressureLaw& law = params.pressure;
    const double gb = params.gravity * params.depth;
    if (law.polytropic) {
        if (law.alpha == 1.0) {
            prof.h_min_ = -kInf;
            prof.h_max_ = kInf;
        } else {
            const double a = law.alpha;
            prof.h_min_ = -gb - law.K * a / (a - 1.0) * std::pow(prof.s_ref_, a - 1.0);
            prof.h_max_ = kInf;
        }
    } else {
        const Integrand f = [&law](double t) { return law.slope(t) / t; };
        // lower end: integral of t^{-1} P' down to 0 (may diverge)
        double head = 0.0;
        bool head_divergent = false;
        double prev_inc = -1.0;
        double hi = prof.s_ref_;
        for (int d = 0; d < 14; ++d) {
            const double lo = hi / 10.0;
            const double inc = adaptive_integral(f, lo, hi);
            head += inc;
            if (prev_inc >= 0.0 && inc >= 0.9 * prev_inc) head_divergent = true;
            prev_inc = inc;
            hi = lo;
        }
        prof.h_min_ = head_divergent ? -kInf : -gb - head;
        // H_max = -g b + full tail integral = the compatibility margin
        prof.h_max_ = rep.integral_divergent ? kInf : rep.integral_margin;
    }

    // vacuum guard margin: one percent of the image span, with g*b as the
    // scale when the span is unbounded
    const double span = (std::isfinite(prof.h_min_) && std::isfinite(prof.h_max_))
                            ? prof.h_max_ - prof.h_min_
                            : gb;
    const double delta = 0.01 * span;
    prof.guard_low_ = std::isfinite(prof.h_min_) ? prof.h_min_ + delta : -kInf;
    prof.guard_high_ = std::isfinite(prof.h_max_) ? prof.h_max_ - delta : kInf;

    prof.nodes_ = grid.vertical().nodes();
    prof.rho_.resize(prof.nodes_.size());
    prof.drho_.resize(prof.nodes_.size());
    for (std::size_t j = 0; j < prof.nodes_.size(); ++j) {
        const double rho = prof.inverse_enthalpy(-params.gravity * prof.nodes_[j]);
        prof.rho_[j] = rho;
        prof.drho_[j] = -params.gravity * rho / law.slope(rho);
    }
    return prof;
}

double enthalpy_eval(const EquilibriumProfile& p, double density) { return p.enthalpy(density); }
double inverse_enthalpy_eval(const EquilibriumProfile& p, double h) {
    return p.inverse_enthalpy(h);
}

}  // namespace strata
