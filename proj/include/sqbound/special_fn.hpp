#pragma once

// Evaluation of the exponentially scaled parabolic cylinder function
//
//     psi_p(x) = exp(x^2/4) D_p(x)
//
// and of the space-time function V_p(x,t) = t^{p/2} psi_p(x/sqrt(t)).
// At nonnegative integer p, psi_p coincides with the probabilists' Hermite
// polynomial He_p. For p < 0 it has the integral representation
//
//     psi_p(x) = (1/Gamma(-p)) Int_0^inf exp(-x s - s^2/2) s^{-p-1} ds,
//
// which is strictly positive. All other exponents are reached through the
// three-term recurrence psi_p = x psi_{p-1} + (1-p) psi_{p-2}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "sqbound/errors.hpp"
#include "sqbound/interp.hpp"
#include "sqbound/quadrature.hpp"

namespace sqbound {

struct SpaceTimePoint {
    double x = 0.0;
    double t = 0.0;
};

struct PsiValue {
    double value = 0.0;
    double est_error = 0.0;
};

namespace detail {

constexpr double kIntegerSnap = 1e-12;

inline bool is_nonneg_integer(double p, long& n_out) {
    const double r = std::nearbyint(p);
    if (r >= 0.0 && std::abs(p - r) < kIntegerSnap) {
        n_out = static_cast<long>(r);
        return true;
    }
    return false;
}

// He_n via the stable upward recurrence He_{k+1} = x He_k - k He_{k-1}.
inline PsiValue hermite_he(long n, double x) {
    double prev = 1.0, cur = x;
    double magmax = std::max(1.0, std::abs(x));
    if (n == 0) return {1.0, 0.0};
    for (long k = 1; k < n; ++k) {
        const double next = x * cur - static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
        magmax = std::max(magmax, std::abs(cur));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    return {cur, 4.0 * eps * static_cast<double>(n) * magmax};
}

// Integral representation for q < 0. The integral is split at s = 1; on
// (0,1) the substitution s = u^{1/(-q)} turns s^{-q-1} ds into a constant
// multiple of du, removing the endpoint singularity. On (1,inf) the
// integrand is truncated once it falls below tail_eps relative to its peak.
inline PsiValue psi_negative(double q, double x, const QuadratureConfig& cfg) {
    const double mq = -q; // > 0
    const double alpha = 1.0 / mq;
    const double gam = std::tgamma(mq);

    const auto inner = [x](double s) { return std::exp(-x * s - 0.5 * s * s); };

    // (0,1): alpha * Int_0^1 exp(-x u^alpha - u^{2 alpha}/2) du
    const auto f1 = [x, alpha](double u) {
        const double s = std::pow(u, alpha);
        return std::exp(-x * s - 0.5 * s * s);
    };
    QuadResult r1 = integrate_panels(f1, {0.0, 0.5, 1.0}, cfg.rel_tol, cfg.tail_eps,
                                     cfg.max_refinements);
    r1.value *= alpha;
    r1.err *= alpha;

    // (1,inf): locate the peak of exp(-xs - s^2/2) s^{-q-1}, then scan for
    // the truncation point.
    const double e = mq - 1.0; // exponent of s in the integrand
    double speak = 1.0;
    if (x < 0.0 || e > 0.0) {
        // stationary point of -xs - s^2/2 + e log s
        const double disc = x * x + 4.0 * std::max(e, 0.0);
        speak = std::max(1.0, 0.5 * (-x + std::sqrt(disc)));
    }
    const auto g = [&](double s) { return inner(s) * std::pow(s, e); };
    const double gpeak = std::max(g(1.0), g(speak));
    double scut = std::max(1.0, speak);
    const double floor_val = cfg.tail_eps * (1.0 + gpeak);
    while (g(scut) >= floor_val && scut < speak + 80.0) scut += 0.5;

    std::vector<double> pts{1.0};
    if (speak > 1.0 && speak < scut) pts.push_back(speak);
    pts.push_back(scut);
    QuadResult r2{};
    if (scut > 1.0) r2 = integrate_panels(g, pts, cfg.rel_tol, cfg.tail_eps, cfg.max_refinements);
    const double trunc = g(scut) * std::max(1.0, 1.0 / std::max(1.0, scut + x));

    PsiValue out;
    out.value = (r1.value + r2.value) / gam;
    out.est_error = (r1.err + r2.err + trunc) / gam;

    const double want = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
    if (out.est_error > 100.0 * want && !(r1.converged && r2.converged))
        throw quadrature_error(out.est_error, want,
                               detail::msg("psi quadrature did not converge: achieved ",
                                           out.est_error, " wanted ", want, " at p=", q,
                                           " x=", x));
    return out;
}

// Kummer confluent series M(a;b;w) = 1F1, for w >= 0.
inline double kummer_m(double a, double b, double w) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 700; ++k) {
        term *= (a + (k - 1)) / (b + (k - 1)) * w / static_cast<double>(k);
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum) && static_cast<double>(k) > w) break;
    }
    return sum;
}

// psi_q through the confluent-hypergeometric form of D_q. Used for the base
// exponents at x < 0, where psi grows like exp(x^2/2) and the integral route
// would leave too little absolute accuracy for the upward recurrence. Both
// gamma arguments stay inside (0, 1.5] for q in [-2, 0), away from poles.
inline PsiValue psi_kummer_base(double q, double x) {
    const double w = 0.5 * x * x;
    const double a_part = kummer_m(-0.5 * q, 0.5, w) / std::tgamma(0.5 * (1.0 - q));
    const double b_part =
        kummer_m(0.5 * (1.0 - q), 1.5, w) * x * std::sqrt(2.0) / std::tgamma(-0.5 * q);
    const double scale = std::exp2(0.5 * q) * std::sqrt(M_PI);
    const double v = scale * (a_part - b_part);
    const double eps = std::numeric_limits<double>::epsilon();
    const double est = 64.0 * eps * scale * (std::abs(a_part) + std::abs(b_part));
    return {v, est};
}

// Base evaluation for the recurrence route: integral representation for
// x >= 0 (no cancellation there), confluent series for x < 0.
inline PsiValue psi_base(double q, double x, const QuadratureConfig& cfg) {
    return x < 0.0 ? psi_kummer_base(q, x) : psi_negative(q, x, cfg);
}

// Reduction step count for non-integer p > 0: p - k lands in [-2,-1).
inline int base_shift(double p) { return static_cast<int>(std::floor(p)) + 2; }

// Climb the recurrence from the two base values at exponents q0, q0+1.
inline PsiValue psi_climb(double q0, double x, int k, const PsiValue& v0, const PsiValue& v1) {
    double a = v0.value, b = v1.value;
    double ea = v0.est_error, eb = v1.est_error;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int j = 2; j <= k; ++j) {
        const double q = q0 + static_cast<double>(j);
        const double c = x * b + (1.0 - q) * a;
        const double ec = std::abs(x) * eb + std::abs(1.0 - q) * ea + 2.0 * eps * std::abs(c);
        a = b;
        b = c;
        ea = eb;
        eb = ec;
    }
    return {b, eb};
}

inline PsiValue psi_noninteger(double p, double x, const QuadratureConfig& cfg) {
    if (p < 0.0) return psi_negative(p, x, cfg);
    const int k = base_shift(p);
    const double q0 = p - static_cast<double>(k); // in [-2,-1)
    const PsiValue v0 = psi_base(q0, x, cfg);
    const PsiValue v1 = psi_base(q0 + 1.0, x, cfg);
    return psi_climb(q0, x, k, v0, v1);
}

} // namespace detail

// psi_p(x) to the tolerances in cfg. Routes: nonnegative integer p -> Hermite
// recurrence; p < 0 -> integral representation; other p -> two base values in
// [-2,0) plus the upward recurrence.
inline PsiValue eval_psi(double p, double x, const QuadratureConfig& cfg = {}) {
    require(std::isfinite(p) && std::isfinite(x), "eval_psi requires finite p, x");
    cfg.validate();
    long n = 0;
    if (detail::is_nonneg_integer(p, n)) return detail::hermite_he(n, x);
    return detail::psi_noninteger(p, x, cfg);
}

// Test hook: forces the quadrature-plus-recurrence route even where the
// Hermite shortcut would apply.
inline PsiValue eval_psi_by_recurrence(double p, double x, const QuadratureConfig& cfg = {}) {
    require(std::isfinite(p) && std::isfinite(x), "eval_psi requires finite p, x");
    cfg.validate();
    return detail::psi_noninteger(p, x, cfg);
}

// V_p(x,t) = t^{p/2} psi_p(x/sqrt(t)) for t > 0, and x^p at t = 0 (x > 0).
inline double eval_V(double p, SpaceTimePoint pt, const QuadratureConfig& cfg = {}) {
    require(std::isfinite(p) && std::isfinite(pt.x) && std::isfinite(pt.t),
            "eval_V requires finite arguments");
    require(pt.t >= 0.0, "t >= 0 violated");
    double v;
    if (pt.t == 0.0) {
        require(pt.x > 0.0, "t = 0 requires x > 0");
        v = std::pow(pt.x, p);
    } else {
        const double u = pt.x / std::sqrt(pt.t);
        const PsiValue psi = eval_psi(p, u, cfg);
        v = std::pow(pt.t, 0.5 * p) * psi.value;
    }
    if (!std::isfinite(v))
        throw overflow_error(p, pt.x, pt.t,
                             detail::msg("V_p out of range at p=", p, " x=", pt.x, " t=", pt.t));
    return v;
}

// dV/dx = p V_{p-1}
inline double dV_dx(double p, SpaceTimePoint pt, const QuadratureConfig& cfg = {}) {
    require(pt.t > 0.0, "t > 0 violated");
    return p * eval_V(p - 1.0, pt, cfg);
}

// dV/dt = -p(p-1)/2 V_{p-2}
inline double dV_dt(double p, SpaceTimePoint pt, const QuadratureConfig& cfg = {}) {
    require(pt.t > 0.0, "t > 0 violated");
    return -0.5 * p * (p - 1.0) * eval_V(p - 2.0, pt, cfg);
}

namespace detail {

// psi_q sampled onto two stitched splines: fine spacing where curvature is
// large, coarse spacing on the flat polynomial-like tail.
class PsiTable {
public:
    PsiTable() = default;

    PsiTable(double q, double lo, double mid, double hi, const QuadratureConfig& cfg) {
        const double h_dense = 0.005, h_coarse = 0.05;
        mid_ = mid;
        const auto sample = [&](double a, double h, double b) {
            std::vector<double> ys;
            const int n = static_cast<int>(std::ceil((b - a) / h - 1e-9));
            ys.reserve(static_cast<std::size_t>(n) + 1);
            for (int i = 0; i <= n; ++i) ys.push_back(psi_base(q, a + h * i, cfg).value);
            return CubicSpline(a, h, std::move(ys));
        };
        dense_ = sample(lo, h_dense, mid);
        coarse_ = sample(mid, h_coarse, hi + h_coarse);
    }

    double operator()(double u) const { return u < mid_ ? dense_(u) : coarse_(u); }

private:
    double mid_ = 0.0;
    CubicSpline dense_, coarse_;
};

} // namespace detail

// Reusable psi_p evaluator for a fixed exponent. Non-integer exponents get
// spline tables of the base values on [lo, hi]; outside the table the
// evaluator falls back to the one-shot quadrature route. Immutable after
// construction, so shareable across threads.
class PsiFun {
public:
    explicit PsiFun(double p, QuadratureConfig cfg = {}, double hi = 40.0, double lo = -12.0)
        : p_(p), cfg_(cfg) {
        require(std::isfinite(p), "PsiFun requires finite p");
        cfg_.validate();
        long n = 0;
        if (detail::is_nonneg_integer(p, n)) {
            integer_ = true;
            n_ = n;
            return;
        }
        if (p < 0.0) {
            q0_ = p;
            k_ = 0;
        } else {
            k_ = detail::base_shift(p);
            q0_ = p - static_cast<double>(k_);
        }
        lo_ = lo;
        hi_ = std::max(hi, lo + 4.0);
        const double mid = std::clamp(8.0, lo_ + 2.0, hi_);
        table0_ = detail::PsiTable(q0_, lo_, mid, hi_, cfg_);
        if (k_ > 0) table1_ = detail::PsiTable(q0_ + 1.0, lo_, mid, hi_, cfg_);
    }

    double p() const { return p_; }

    double operator()(double u) const {
        if (integer_) return detail::hermite_he(n_, u).value;
        if (u >= lo_ && u <= hi_) {
            const double v0 = table0_(u);
            if (k_ == 0) return v0;
            const double v1 = table1_(u);
            return detail::psi_climb(q0_, u, k_, {v0, 0.0}, {v1, 0.0}).value;
        }
        return detail::psi_noninteger(p_, u, cfg_).value;
    }

private:
    double p_ = 0.0;
    QuadratureConfig cfg_;
    bool integer_ = false;
    long n_ = 0;
    int k_ = 0;
    double q0_ = 0.0;
    double lo_ = -12.0, hi_ = 40.0;
    detail::PsiTable table0_, table1_;
};

// V_p through a PsiFun; the fast path for estimators that evaluate V at one
// fixed exponent millions of times.
class SpaceTimeV {
public:
    explicit SpaceTimeV(PsiFun psi) : psi_(std::move(psi)) {}

    double p() const { return psi_.p(); }

    // t > 0 fast path
    double operator()(double x, double t) const {
        return std::pow(t, 0.5 * psi_.p()) * psi_(x / std::sqrt(t));
    }

    double at(SpaceTimePoint pt) const {
        if (pt.t == 0.0) {
            require(pt.x > 0.0, "t = 0 requires x > 0");
            return std::pow(pt.x, psi_.p());
        }
        return (*this)(pt.x, pt.t);
    }

private:
    PsiFun psi_;
};

} // namespace sqbound
