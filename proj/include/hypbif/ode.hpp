#pragma once

#include "hypbif/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hypbif {

// Dormand-Prince 5(4) with embedded error control. Integrates in either direction.
template <int Dim>
class DormandPrince {
public:
    using State = Eigen::Matrix<double, Dim, 1>;

    DormandPrince(double rel_tol, double abs_tol) : rtol_(rel_tol), atol_(abs_tol) {}

    // Advance y from t0 to t1; h carries the step-size guess between calls.
    template <class Rhs>
    void advance(const Rhs& f, double t0, double t1, State& y, double& h, long max_steps = 1000000) const
    {
        const double dir = t1 > t0 ? 1.0 : -1.0;
        double t = t0;
        if (!(std::abs(h) > 0.0))
            h = 1e-3 * std::abs(t1 - t0);
        h = std::abs(h);
        State k1 = f(t, y);
        for (long step = 0; step < max_steps; ++step) {
            const double left = std::abs(t1 - t);
            if (left <= 1e-14 * std::max(1.0, std::abs(t1)))
                return;
            const bool last = h >= left;
            const double hs = dir * (last ? left : h);
            State k2 = f(t + hs * (1.0 / 5), y + hs * (1.0 / 5) * k1);
            State k3 = f(t + hs * (3.0 / 10), y + hs * ((3.0 / 40) * k1 + (9.0 / 40) * k2));
            State k4 = f(t + hs * (4.0 / 5),
                         y + hs * ((44.0 / 45) * k1 - (56.0 / 15) * k2 + (32.0 / 9) * k3));
            State k5 = f(t + hs * (8.0 / 9),
                         y + hs * ((19372.0 / 6561) * k1 - (25360.0 / 2187) * k2
                                   + (64448.0 / 6561) * k3 - (212.0 / 729) * k4));
            State k6 = f(t + hs,
                         y + hs * ((9017.0 / 3168) * k1 - (355.0 / 33) * k2 + (46732.0 / 5247) * k3
                                   + (49.0 / 176) * k4 - (5103.0 / 18656) * k5));
            State y5 = y + hs * ((35.0 / 384) * k1 + (500.0 / 1113) * k3 + (125.0 / 192) * k4
                                 - (2187.0 / 6784) * k5 + (11.0 / 84) * k6);
            State k7 = f(t + hs, y5);
            State err = hs * ((71.0 / 57600) * k1 - (71.0 / 16695) * k3 + (71.0 / 1920) * k4
                              - (17253.0 / 339200) * k5 + (22.0 / 525) * k6 - (1.0 / 40) * k7);
            double e = 0.0;
            for (int i = 0; i < y.size(); ++i) {
                const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y5[i]));
                e = std::max(e, std::abs(err[i]) / sc);
            }
            if (!std::isfinite(e))
                e = 1e10;
            if (e <= 1.0) {
                t = last ? t1 : t + hs;
                y = y5;
                k1 = k7;
                if (last)
                    return;
                h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(e, 1e-10), -0.2)));
            } else {
                h *= std::max(0.1, 0.9 * std::pow(e, -0.2));
                if (h < 1e-15 * std::max(1.0, std::abs(t)))
                    throw Error(ErrorKind::Convergence, "ODE step size underflow");
            }
        }
        throw Error(ErrorKind::Convergence, "ODE step limit exceeded");
    }

private:
    double rtol_;
    double atol_;
};

}  // namespace hypbif
