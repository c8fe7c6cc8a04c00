#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sqbound/errors.hpp"

namespace sqbound {

// Accuracy control for the improper-integral evaluations.
struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double tail_eps = 1e-16;   // truncation threshold for improper tails
    int max_refinements = 30;  // bisection depth cap per panel

    void validate() const {
        require(rel_tol > 0, "rel_tol > 0 violated");
        require(abs_tol > 0, "abs_tol > 0 violated");
        require(tail_eps > 0, "tail_eps > 0 violated");
        require(max_refinements >= 1, "max_refinements >= 1 violated");
    }
};

struct QuadResult {
    double value = 0.0;
    double err = 0.0;       // accumulated error estimate
    int max_depth = 0;      // deepest refinement level used
    bool converged = true;  // false if some panel hit the depth cap unconverged
};

namespace detail {

template <class F>
double simpson(const F& f, double a, double fa, double b, double fb, double c, double fc) {
    return (b - a) * (fa + 4.0 * fc + fb) / 6.0;
}

template <class F>
void adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb, double c,
                          double fc, double whole, double eps, int depth, int max_depth,
                          QuadResult& out) {
    const double lm = 0.5 * (a + c);
    const double rm = 0.5 * (c + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, c, fc, lm, flm);
    const double right = simpson(f, c, fc, b, fb, rm, frm);
    const double diff = left + right - whole;

    if (std::abs(diff) <= 15.0 * eps || depth >= max_depth) {
        out.value += left + right + diff / 15.0;
        out.err += std::abs(diff) / 15.0;
        out.max_depth = std::max(out.max_depth, depth);
        if (std::abs(diff) > 15.0 * eps) out.converged = false;
        return;
    }
    adaptive_simpson_rec(f, a, fa, c, fc, lm, flm, left, 0.5 * eps, depth + 1, max_depth, out);
    adaptive_simpson_rec(f, c, fc, b, fb, rm, frm, right, 0.5 * eps, depth + 1, max_depth, out);
}

} // namespace detail

// Adaptive Simpson on [a, b]. `eps` is an absolute target for the panel.
template <class F>
QuadResult adaptive_simpson(const F& f, double a, double b, double eps, int max_depth) {
    QuadResult out;
    if (a == b) return out;
    const double fa = f(a);
    const double fb = f(b);
    const double c = 0.5 * (a + b);
    const double fc = f(c);
    const double whole = detail::simpson(f, a, fa, b, fb, c, fc);
    detail::adaptive_simpson_rec(f, a, fa, b, fb, c, fc, whole, eps, 0, max_depth, out);
    return out;
}

// Integrates over consecutive panels [pts[0], pts[1]], [pts[1], pts[2]], ...
// with a combined absolute/relative stopping target. The scale for the
// relative target comes from a coarse pre-pass so the refinement budget is
// never driven by an unreachable absolute tolerance.
template <class F>
QuadResult integrate_panels(const F& f, const std::vector<double>& pts, double rel_tol,
                            double abs_tol, int max_depth) {
    QuadResult total;
    if (pts.size() < 2) return total;
    const std::size_t n = pts.size() - 1;

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = pts[i], b = pts[i + 1];
        const double c = 0.5 * (a + b);
        scale += std::abs(detail::simpson(f, a, f(a), b, f(b), c, f(c)));
    }

    double target = std::max(abs_tol, rel_tol * scale);
    for (int attempt = 0; attempt < 3; ++attempt) {
        total = QuadResult{};
        const double eps = target / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            QuadResult r = adaptive_simpson(f, pts[i], pts[i + 1], eps, max_depth);
            total.value += r.value;
            total.err += r.err;
            total.max_depth = std::max(total.max_depth, r.max_depth);
            total.converged = total.converged && r.converged;
        }
        const double want = std::max(abs_tol, rel_tol * std::abs(total.value));
        if (total.err <= want) {
            total.converged = true;
            break;
        }
        target = want / 8.0;
    }
    return total;
}

} // namespace sqbound
