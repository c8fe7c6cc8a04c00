#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sqbound/errors.hpp"

namespace sqbound {

// Cubic spline on a uniform grid with not-a-knot ends. Evaluation is O(1).
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(double x0, double h, std::vector<double> y) : x0_(x0), h_(h), y_(std::move(y)) {
        require(h_ > 0, "spline step h > 0 violated");
        require(y_.size() >= 4, "spline needs >= 4 nodes");
        build();
    }

    double lo() const { return x0_; }
    double hi() const { return x0_ + h_ * static_cast<double>(y_.size() - 1); }
    bool contains(double x) const { return x >= lo() && x <= hi(); }

    double operator()(double x) const {
        const auto n = y_.size();
        double u = (x - x0_) / h_;
        std::size_t i = static_cast<std::size_t>(u);
        if (u < 0) i = 0;
        if (i > n - 2) i = n - 2;
        const double t = x - (x0_ + h_ * static_cast<double>(i));
        return y_[i] + t * (b_[i] + t * (c_[i] + t * d_[i]));
    }

private:
    void build() {
        const std::size_t n = y_.size();
        const double h2 = h_ * h_;
        std::vector<double> m(n, 0.0); // second derivatives
        std::vector<double> r(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i)
            r[i] = 6.0 * (y_[i - 1] - 2.0 * y_[i] + y_[i + 1]) / h2;

        // Not-a-knot: m0 = 2 m1 - m2 and m_{n-1} = 2 m_{n-2} - m_{n-3};
        // substituting into the first/last interior rows decouples m1, m_{n-2}.
        m[1] = r[1] / 6.0;
        m[n - 2] = r[n - 2] / 6.0;
        if (n > 4) {
            const std::size_t k = n - 4; // unknowns m2..m_{n-3}
            std::vector<double> diag(k, 4.0), rhs(k);
            for (std::size_t j = 0; j < k; ++j) rhs[j] = r[j + 2];
            rhs[0] -= m[1];
            rhs[k - 1] -= m[n - 2];
            for (std::size_t j = 1; j < k; ++j) { // Thomas sweep, sub/super = 1
                const double w = 1.0 / diag[j - 1];
                diag[j] -= w;
                rhs[j] -= w * rhs[j - 1];
            }
            m[k + 1] = rhs[k - 1] / diag[k - 1];
            for (std::size_t j = k - 1; j-- > 0;) m[j + 2] = (rhs[j] - m[j + 3]) / diag[j];
        }
        m[0] = 2.0 * m[1] - m[2];
        m[n - 1] = 2.0 * m[n - 2] - m[n - 3];

        b_.resize(n - 1);
        c_.resize(n - 1);
        d_.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            b_[i] = (y_[i + 1] - y_[i]) / h_ - h_ * (2.0 * m[i] + m[i + 1]) / 6.0;
            c_[i] = 0.5 * m[i];
            d_[i] = (m[i + 1] - m[i]) / (6.0 * h_);
        }
    }

    double x0_ = 0.0;
    double h_ = 1.0;
    std::vector<double> y_, b_, c_, d_;
};

} // namespace sqbound
