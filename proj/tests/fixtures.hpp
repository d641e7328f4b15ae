#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "gld/dataset.hpp"

namespace fixture {

// X ~ N(0,1), Y = r(t) X + sqrt(1 - r(t)^2) e, extra independent N(0,1) columns appended
inline gld::Dataset correlated_pair(std::size_t n, const std::function<double(std::size_t)>& r, std::uint64_t seed,
                                    int extra = 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    auto d = gld::Dataset::with_vars(2 + extra, n);
    for (std::size_t t = 0; t < n; ++t) {
        const double rho = r(t);
        const double x = nd(rng);
        d.cols[0][t] = x;
        d.cols[1][t] = rho * x + std::sqrt(1.0 - rho * rho) * nd(rng);
        for (int k = 0; k < extra; ++k) d.cols[2 + k][t] = nd(rng);
    }
    return d;
}

// alternating runs of length ell: first run uses r_on, then r_off
inline std::function<double(std::size_t)> two_regimes(double r_on, double r_off, std::size_t ell) {
    return [=](std::size_t t) { return (t / ell) % 2 == 0 ? r_on : r_off; };
}

inline std::function<double(std::size_t)> constant(double r) {
    return [=](std::size_t) { return r; };
}

}  // namespace fixture
