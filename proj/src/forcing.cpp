#include "strata/forcing.hpp"

#include <cmath>

namespace strata {

namespace {

double wrap_to_period(double dx, double period) {
    return dx - period * std::round(dx / period);
}

EvalField gaussian_bump(double period, double cx, double cy, double width, double amplitude) {
    EvalField f;
    f.trivial = amplitude == 0.0;
    const double inv_w2 = 1.0 / (width * width);
    f.value = [=](double x, double y) {
        const double dx = wrap_to_period(x - cx, period);
        const double dy = y - cy;
        return amplitude * std::exp(-0.5 * (dx * dx + dy * dy) * inv_w2);
    };
    f.ddx = [=](double x, double y) {
        const double dx = wrap_to_period(x - cx, period);
        const double dy = y - cy;
        return -amplitude * dx * inv_w2 * std::exp(-0.5 * (dx * dx + dy * dy) * inv_w2);
    };
    f.ddy = [=](double x, double y) {
        const double dx = wrap_to_period(x - cx, period);
        const double dy = y - cy;
        return -amplitude * dy * inv_w2 * std::exp(-0.5 * (dx * dx + dy * dy) * inv_w2);
    };
    return f;
}

}  // namespace

EvalField EvalField::zero() {
    EvalField f;
    f.value = [](double, double) { return 0.0; };
    f.ddx = f.value;
    f.ddy = f.value;
    f.trivial = true;
    return f;
}

bool Forcing::trivial_data() const {
    for (const auto& row : stress)
        for (const auto& c : row)
            if (!c.trivial) return false;
    for (const auto& c : specific_force)
        if (!c.trivial) return false;
    for (const auto& c : bulk_force)
        if (!c.trivial) return false;
    return true;
}

Forcing Forcing::zero(double gamma) {
    Forcing f;
    f.gamma = gamma;
    for (auto& row : f.stress)
        for (auto& c : row) c = EvalField::zero();
    for (auto& c : f.specific_force) c = EvalField::zero();
    for (auto& c : f.bulk_force) c = EvalField::zero();
    f.descriptor.kind = "zero";
    return f;
}

Forcing Forcing::gaussian_pressure(double gamma, double period, double cx, double cy,
                                   double width, double amplitude) {
    Forcing f = Forcing::zero(gamma);
    EvalField phi = gaussian_bump(period, cx, cy, width, amplitude);
    for (int i = 0; i < 2; ++i) {
        f.stress[i][i].value = [phi](double x, double y) { return -phi.value(x, y); };
        f.stress[i][i].ddx = [phi](double x, double y) { return -phi.ddx(x, y); };
        f.stress[i][i].ddy = [phi](double x, double y) { return -phi.ddy(x, y); };
        f.stress[i][i].trivial = phi.trivial;
    }
    f.descriptor = {"gaussian-pressure", cx, cy, width, amplitude};
    return f;
}

Forcing Forcing::shifted(double dx, double period) const {
    if (descriptor.kind == "gaussian-pressure") {
        Forcing f = gaussian_pressure(gamma, period, descriptor.cx + dx, descriptor.cy,
                                      descriptor.width, descriptor.amplitude);
        return f;
    }
    Forcing f = *this;
    auto shift = [dx](const EvalField& c) {
        EvalField out;
        out.trivial = c.trivial;
        out.value = [c, dx](double x, double y) { return c.value(x - dx, y); };
        out.ddx = [c, dx](double x, double y) { return c.ddx(x - dx, y); };
        out.ddy = [c, dx](double x, double y) { return c.ddy(x - dx, y); };
        return out;
    };
    for (auto& row : f.stress)
        for (auto& c : row) c = shift(c);
    for (auto& c : f.specific_force) c = shift(c);
    for (auto& c : f.bulk_force) c = shift(c);
    return f;
}

}  // namespace strata
