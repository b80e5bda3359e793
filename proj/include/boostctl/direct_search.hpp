#pragma once

// Nelder-Mead simplex minimization in two dimensions.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace boostctl {

struct SimplexOptions {
    double initial_step = 0.5;
    double x_tol = 1e-10;
    double f_tol = 1e-13;
    int max_iterations = 2000;
};

struct SimplexResult {
    std::array<double, 2> x{};
    double value = 0.0;
    int iterations = 0;
};

using Objective2 = std::function<double(const std::array<double, 2>&)>;

inline SimplexResult nelder_mead(const Objective2& f, std::array<double, 2> start,
                                 const SimplexOptions& opt = {}) {
    using Point = std::array<double, 2>;
    struct Vertex {
        Point x;
        double fx;
    };

    std::array<Vertex, 3> s{};
    s[0] = {start, f(start)};
    for (int i = 0; i < 2; ++i) {
        Point p = start;
        p[i] += opt.initial_step;
        s[i + 1] = {p, f(p)};
    }

    auto lerp = [](const Point& a, const Point& b, double t) {
        return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
    };

    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        std::sort(s.begin(), s.end(), [](const Vertex& u, const Vertex& v) { return u.fx < v.fx; });

        const double spread = std::max(std::abs(s[1].x[0] - s[0].x[0]) + std::abs(s[1].x[1] - s[0].x[1]),
                                       std::abs(s[2].x[0] - s[0].x[0]) + std::abs(s[2].x[1] - s[0].x[1]));
        if (spread < opt.x_tol && std::abs(s[2].fx - s[0].fx) <= opt.f_tol * (1.0 + std::abs(s[0].fx))) {
            break;
        }

        const Point centroid{0.5 * (s[0].x[0] + s[1].x[0]), 0.5 * (s[0].x[1] + s[1].x[1])};
        const Point xr = lerp(centroid, s[2].x, -1.0);
        const double fr = f(xr);

        if (fr < s[0].fx) {
            const Point xe = lerp(centroid, s[2].x, -2.0);
            const double fe = f(xe);
            s[2] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
            continue;
        }
        if (fr < s[1].fx) {
            s[2] = {xr, fr};
            continue;
        }
        const bool outside = fr < s[2].fx;
        const Point xc = outside ? lerp(centroid, s[2].x, -0.5) : lerp(centroid, s[2].x, 0.5);
        const double fc = f(xc);
        if (fc < std::min(fr, s[2].fx)) {
            s[2] = {xc, fc};
            continue;
        }
        // Shrink towards the best vertex.
        for (int i = 1; i < 3; ++i) {
            s[i].x = lerp(s[0].x, s[i].x, 0.5);
            s[i].fx = f(s[i].x);
        }
    }

    const auto best = std::min_element(s.begin(), s.end(), [](const Vertex& u, const Vertex& v) { return u.fx < v.fx; });
    return {best->x, best->fx, it};
}

}  // namespace boostctl
