#include "strata/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace strata {

Chebyshev::Chebyshev(std::size_t count, double height) : height_(height) {
    if (count < 2) throw std::invalid_argument("chebyshev: need at least 2 nodes");
    const std::size_t n = count - 1;
    const double pi = std::numbers::pi;

    nodes_.resize(count);
    for (std::size_t j = 0; j < count; ++j)
        nodes_[j] = 0.5 * height * (1.0 - std::cos(pi * static_cast<double>(j) / n));

    // barycentric weights for Chebyshev-Lobatto points
    bary_.assign(count, 1.0);
    for (std::size_t j = 0; j < count; ++j) {
        bary_[j] = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == n) bary_[j] *= 0.5;
    }

    diff_.assign(count * count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        double diag = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            if (i == j) continue;
            const double d = bary_[j] / (bary_[i] * (nodes_[i] - nodes_[j]));
            diff_[i * count + j] = d;
            diag -= d;
        }
        diff_[i * count + i] = diag;
    }

    // Clenshaw-Curtis weights via cosine sums (count is small; O(n^2) is fine)
    weights_.assign(count, 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
        double w = 1.0;
        for (std::size_t m = 1; m <= n / 2; ++m) {
            const double bm = (2 * m == n) ? 1.0 : 2.0;
            w -= bm * std::cos(2.0 * m * pi * j / n) / (4.0 * m * m - 1.0);
        }
        w *= 2.0 / n;
        if (j == 0 || j == n) w *= 0.5;
        weights_[j] = w * 0.5 * height;
    }
}

void Chebyshev::differentiate(const double* in, double* out) const {
    const std::size_t m = count();
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        const double* row = diff_.data() + i * m;
        for (std::size_t j = 0; j < m; ++j) acc += row[j] * in[j];
        out[i] = acc;
    }
}

double Chebyshev::integrate(const double* values) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < count(); ++j) acc += weights_[j] * values[j];
    return acc;
}

double Chebyshev::interpolate(const double* values, double y) const {
    const std::size_t m = count();
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double dy = y - nodes_[j];
        if (std::abs(dy) < 1e-14) return values[j];
        const double c = bary_[j] / dy;
        num += c * values[j];
        den += c;
    }
    return num / den;
}

}  // namespace strata
