#pragma once

#include <vector>

#include "zzbwave/errors.hpp"

namespace zzbwave {

// Uniform lag grid on [0, eps_max] with n samples, x_0 = 0 and x_{n-1} = eps_max exactly.
struct Grid {
    int n = 0;
    double eps_max = 0.0;
    double dx = 0.0;
    std::vector<double> x;

    Grid() = default;

    Grid(int n_, double eps_max_) : n(n_), eps_max(eps_max_) {
        if (n < 2) throw ArgumentError("Grid: need n >= 2");
        if (!(eps_max > 0.0)) throw ArgumentError("Grid: need eps_max > 0");
        dx = eps_max / static_cast<double>(n - 1);
        x.resize(n);
        for (int i = 0; i < n; ++i)
            x[i] = eps_max * (static_cast<double>(i) / static_cast<double>(n - 1));
    }

    bool operator==(const Grid& o) const {
        return n == o.n && eps_max == o.eps_max;
    }
};

} // namespace zzbwave
