#include "ffst/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ffst {

double wrap_phase(double x) {
    double r = std::fmod(x + pi, two_pi);
    if (r < 0) r += two_pi;
    r -= pi;
    if (r >= pi) r -= two_pi;
    return r;
}

std::vector<double> unwrap(std::span<const double> phases) {
    std::vector<double> out(phases.begin(), phases.end());
    for (std::size_t k = 1; k < out.size(); ++k) {
        double d = wrap_phase(phases[k] - phases[k - 1]);
        out[k] = out[k - 1] + d;
    }
    return out;
}

double trapezoid(std::span<const double> y, double h) {
    if (y.size() < 2) return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t k = 1; k + 1 < y.size(); ++k) s += y[k];
    return s * h;
}

std::vector<double> cumulative_trapezoid(std::span<const double> y, double h) {
    std::vector<double> out(y.size(), 0.0);
    for (std::size_t k = 1; k < y.size(); ++k) out[k] = out[k - 1] + 0.5 * h * (y[k - 1] + y[k]);
    return out;
}

std::vector<double> derivative(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    if (n == 2) {
        d[0] = d[1] = (y[1] - y[0]) / h;
        return d;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (y[k + 1] - y[k - 1]) / (2 * h);
    d[0] = (-3 * y[0] + 4 * y[1] - y[2]) / (2 * h);
    d[n - 1] = (3 * y[n - 1] - 4 * y[n - 2] + y[n - 3]) / (2 * h);
    return d;
}

double cubic_through(const double* xs, const double* ys, double x) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        double w = 1.0;
        for (int j = 0; j < 4; ++j)
            if (j != i) w *= (x - xs[j]) / (xs[i] - xs[j]);
        s += w * ys[i];
    }
    return s;
}

double interpolate_uniform(std::span<const double> y, double x0, double h, double x) {
    const std::size_t n = y.size();
    if (n == 0) throw std::invalid_argument("interpolate_uniform: empty");
    if (n == 1) return y[0];
    double u = (x - x0) / h;
    auto k = static_cast<long>(std::floor(u));
    k = std::clamp<long>(k, 0, static_cast<long>(n) - 2);
    double frac = u - static_cast<double>(k);
    if (frac == 0.0) return y[static_cast<std::size_t>(k)];
    if (n < 4) return y[k] + frac * (y[k + 1] - y[k]);
    long s = std::clamp<long>(k - 1, 0, static_cast<long>(n) - 4);
    double xs[4], ys[4];
    for (int i = 0; i < 4; ++i) {
        xs[i] = static_cast<double>(s + i);
        ys[i] = y[static_cast<std::size_t>(s + i)];
    }
    return cubic_through(xs, ys, u);
}

double midpoint_value(std::span<const double> y, std::size_t k) {
    const std::size_t n = y.size();
    if (n < 4) return 0.5 * (y[k] + y[k + 1]);
    if (k == 0) return (5 * y[0] + 15 * y[1] - 5 * y[2] + y[3]) / 16;
    if (k + 2 >= n) return (y[n - 4] - 5 * y[n - 3] + 15 * y[n - 2] + 5 * y[n - 1]) / 16;
    return (-y[k - 1] + 9 * y[k] + 9 * y[k + 1] - y[k + 2]) / 16;
}

std::vector<double> pchip_resample(std::span<const double> y, double x0, double h,
                                   double x0_out, double h_out, std::size_t n_out) {
    const std::size_t n = y.size();
    if (n < 2) throw std::invalid_argument("pchip_resample: need two samples");
    std::vector<double> delta(n - 1), m(n);
    for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y[k + 1] - y[k]) / h;
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0) {
            m[k] = 0;
        } else {
            m[k] = 2.0 / (1.0 / delta[k - 1] + 1.0 / delta[k]);
        }
    }
    std::vector<double> out(n_out);
    for (std::size_t j = 0; j < n_out; ++j) {
        double x = x0_out + h_out * static_cast<double>(j);
        double u = (x - x0) / h;
        auto k = static_cast<long>(std::floor(u));
        k = std::clamp<long>(k, 0, static_cast<long>(n) - 2);
        double s = u - static_cast<double>(k);
        double s2 = s * s, s3 = s2 * s;
        auto i = static_cast<std::size_t>(k);
        out[j] = (2 * s3 - 3 * s2 + 1) * y[i] + (s3 - 2 * s2 + s) * h * m[i] +
                 (-2 * s3 + 3 * s2) * y[i + 1] + (s3 - s2) * h * m[i + 1];
    }
    return out;
}

}  // namespace ffst
