#pragma once

// Solvers for the exponent pair: p_of_c(c) is the minimal positive root of
// p -> psi_p(c); c_of_p(p) is the largest real zero of x -> psi_p(x). Both
// scan for a sign change in 0.25 steps and then bisect. The inverse pair is
// consistent: c_of_p(p_of_c(c)) == c up to the solver tolerance.

#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include "sqbound/errors.hpp"
#include "sqbound/special_fn.hpp"

namespace sqbound {

struct ExponentSolveResult {
    double value = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

namespace detail {

inline ExponentSolveResult bisect_root(const std::function<double(double)>& f, double lo,
                                       double flo, double hi, double fhi, double tol) {
    ExponentSolveResult out;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    int it = 0;
    while (hi - lo > tol && it < 200) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        ++it;
        if (fmid == 0.0) {
            lo = mid - 0.25 * tol;
            hi = mid + 0.25 * tol;
            flo = fhi = fmid;
            break;
        }
        if ((flo > 0.0) == (fmid > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    out.value = 0.5 * (lo + hi);
    out.residual = std::abs(f(out.value));
    out.iterations = it;
    // keep the reported bracket strictly around the value
    out.bracket_lo = std::min(out.bracket_lo, out.value - 0.25 * tol);
    out.bracket_hi = std::max(out.bracket_hi, out.value + 0.25 * tol);
    return out;
}

} // namespace detail

// Minimal positive root of p -> psi_p(c). Scans upward from tol in steps of
// 0.25 (psi_0 == 1, so the scan starts positive) and bisects on the first
// sign change. An exact zero at a scan node is returned as-is.
inline ExponentSolveResult p_of_c(double c, double tol = 1e-10,
                                  const QuadratureConfig& cfg = {}) {
    require(std::isfinite(c), "p_of_c requires finite c");
    require(tol > 0.0, "tol > 0 violated");
    constexpr double kPMax = 64.0;
    const auto f = [&](double p) { return eval_psi(p, c, cfg).value; };

    double lo = tol;
    double flo = f(lo);
    if (flo == 0.0)
        return {lo, 0.0, lo + 0.25 * tol, 0.0, 0};
    for (double hi = 0.25; hi <= kPMax; hi += 0.25) {
        const double fhi = f(hi);
        if (fhi == 0.0) {
            ExponentSolveResult out;
            out.value = hi;
            out.bracket_lo = hi - 0.25 * tol;
            out.bracket_hi = hi + 0.25 * tol;
            out.residual = 0.0;
            out.iterations = 0;
            return out;
        }
        if ((flo > 0.0) != (fhi > 0.0))
            return detail::bisect_root(f, lo, flo, hi, fhi, tol);
        lo = hi;
        flo = fhi;
    }
    throw bracket_error(detail::msg("p_of_c: no sign change of psi_p(", c, ") for p in (0, ",
                                    kPMax, "]; last value ", flo,
                                    " — c outside the supported range"));
}

// Largest zero of x -> psi_p(x). Scans downward from 2 sqrt(p) + 4 (where
// psi_p ~ x^p > 0) in steps of 0.25 and bisects on the first sign change.
inline ExponentSolveResult c_of_p(double p, double tol = 1e-10,
                                  const QuadratureConfig& cfg = {}) {
    require(std::isfinite(p), "c_of_p requires finite p");
    require(tol > 0.0, "tol > 0 violated");
    require(p > 0.0, "p > 0 violated: psi_p has no real roots for p < 0");
    const double x_hi = 2.0 * std::sqrt(p) + 4.0;
    const double x_lo = -(2.0 * std::sqrt(std::abs(p)) + 8.0);
    const auto f = [&](double x) { return eval_psi(p, x, cfg).value; };

    double hi = x_hi;
    double fhi = f(hi);
    for (double lo = hi - 0.25; lo >= x_lo - 0.25; lo -= 0.25) {
        const double flo = f(lo);
        if (flo == 0.0) {
            ExponentSolveResult out;
            out.value = lo;
            out.bracket_lo = lo - 0.25 * tol;
            out.bracket_hi = lo + 0.25 * tol;
            out.residual = 0.0;
            out.iterations = 0;
            return out;
        }
        if ((flo > 0.0) != (fhi > 0.0)) {
            ExponentSolveResult r = detail::bisect_root(f, lo, flo, hi, fhi, tol);
            return r;
        }
        hi = lo;
        fhi = flo;
    }
    throw bracket_error(detail::msg("c_of_p: no sign change of psi_", p, " above x = ", x_lo));
}

namespace detail {

// Small process-wide memo; concurrent lookups are serialized, and repeated
// solves are deterministic so overwriting races would be harmless anyway.
class ExponentCache {
public:
    static ExponentCache& instance() {
        static ExponentCache c;
        return c;
    }

    double p_of_c(double c, double tol) {
        return lookup(pc_, c, tol, [&] { return sqbound::p_of_c(c, tol).value; });
    }

    double c_of_p(double p, double tol) {
        return lookup(cp_, p, tol, [&] { return sqbound::c_of_p(p, tol).value; });
    }

private:
    using Key = std::pair<double, double>;

    template <class F>
    double lookup(std::map<Key, double>& m, double a, double tol, F&& solve) {
        {
            std::lock_guard<std::mutex> g(mu_);
            auto it = m.find({a, tol});
            if (it != m.end()) return it->second;
        }
        const double v = solve();
        std::lock_guard<std::mutex> g(mu_);
        m.emplace(Key{a, tol}, v);
        return v;
    }

    std::mutex mu_;
    std::map<Key, double> pc_, cp_;
};

} // namespace detail

inline double p_of_c_cached(double c, double tol = 1e-10) {
    return detail::ExponentCache::instance().p_of_c(c, tol);
}

inline double c_of_p_cached(double p, double tol = 1e-10) {
    return detail::ExponentCache::instance().c_of_p(p, tol);
}

// V_p clipped to zero below the curve x = c(p) sqrt(t).
inline double eval_V_clipped(double p, SpaceTimePoint pt, const QuadratureConfig& cfg = {}) {
    require(pt.t >= 0.0, "t >= 0 violated");
    require(p > 0.0, "clipping requires p > 0 so that c(p) exists");
    const double cp = c_of_p_cached(p);
    if (pt.x < cp * std::sqrt(pt.t)) return 0.0;
    if (pt.t == 0.0) return pt.x > 0.0 ? std::pow(pt.x, p) : 0.0;
    return eval_V(p, pt, cfg);
}

// Clipped evaluator bound to one exponent: the hot path used by the drift
// and harmonic-function machinery.
class ClippedV {
public:
    ClippedV(double p, double clip_coeff, QuadratureConfig cfg = {}, double hi = 40.0)
        : v_(PsiFun(p, cfg, hi)), clip_(clip_coeff) {}

    static ClippedV for_exponent(double p, QuadratureConfig cfg = {}, double hi = 40.0) {
        return ClippedV(p, c_of_p_cached(p), cfg, hi);
    }

    double p() const { return v_.p(); }
    double clip_coeff() const { return clip_; }

    double operator()(double x, double t) const {
        if (t == 0.0) return x > 0.0 ? std::pow(x, v_.p()) : 0.0;
        if (x < clip_ * std::sqrt(t)) return 0.0;
        return v_(x, t);
    }

    // unclipped value, for callers that already know x is above the curve
    double unclipped(double x, double t) const { return t == 0.0 ? std::pow(x, v_.p()) : v_(x, t); }

private:
    SpaceTimeV v_;
    double clip_;
};

} // namespace sqbound
