#include "ffst/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ffst {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             std::vector<double> steps, const NelderMeadOptions& opt) {
    const std::size_t n = x0.size();
    if (steps.size() != n) throw std::invalid_argument("nelder_mead: step count mismatch");
    NelderMeadResult res;

    auto to_x = [&](const std::vector<double>& u) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = x0[i] + steps[i] * u[i];
        return x;
    };
    auto eval = [&](const std::vector<double>& u) {
        ++res.evaluations;
        auto x = to_x(u);
        return f(x);
    };

    if (n == 0) {
        res.value = f(x0);
        res.evaluations = 1;
        res.converged = true;
        res.best_history.push_back(res.value);
        return res;
    }

    std::vector<std::vector<double>> s(n + 1, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) s[i + 1][i] = 1.0;
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) v[i] = eval(s[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<std::vector<double>> s2(n + 1);
        std::vector<double> v2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            s2[i] = s[order[i]];
            v2[i] = v[order[i]];
        }
        s = std::move(s2);
        v = std::move(v2);
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j) d = std::max(d, std::abs(s[i][j] - s[0][j]));
        return d;
    };

    sort_simplex();
    res.best_history.push_back(v[0]);
    while (res.evaluations < opt.max_evaluations) {
        if (diameter() < opt.tolerance) {
            res.converged = true;
            break;
        }
        ++res.iterations;
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) c[j] += s[i][j] / static_cast<double>(n);
        auto along = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = c[j] + t * (s[n][j] - c[j]);
            return p;
        };
        auto xr = along(-1.0);
        double fr = eval(xr);
        if (fr < v[0]) {
            auto xe = along(-2.0);
            double fe = eval(xe);
            if (fe < fr) {
                s[n] = xe;
                v[n] = fe;
            } else {
                s[n] = xr;
                v[n] = fr;
            }
        } else if (fr < v[n - 1]) {
            s[n] = xr;
            v[n] = fr;
        } else {
            bool outside = fr < v[n];
            auto xc = along(outside ? -0.5 : 0.5);
            double fc = eval(xc);
            if (fc < (outside ? fr : v[n])) {
                s[n] = xc;
                v[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) s[i][j] = s[0][j] + 0.5 * (s[i][j] - s[0][j]);
                    v[i] = eval(s[i]);
                }
            }
        }
        sort_simplex();
        res.best_history.push_back(v[0]);
    }
    res.x = to_x(s[0]);
    res.value = v[0];
    return res;
}

}  // namespace ffst
