#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ffst {

struct NelderMeadOptions {
    std::size_t max_evaluations = 2000;
    double tolerance = 1e-6;  // simplex diameter in scaled coordinates
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> best_history;  // best value after each iteration
};

// minimizes f over x = x0 + steps * u; deterministic initial simplex u = 0, e_i
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             std::vector<double> steps, const NelderMeadOptions& opt = {});

}  // namespace ffst
