#ifndef WH_MODFREQ_HPP
#define WH_MODFREQ_HPP

#include <cmath>
#include <stdexcept>

namespace wh
{
    namespace detail
    {
        inline double factorial(int k)
        {
            double f = 1.0;
            for (int i = 2; i <= k; ++i)
                f *= i;
            return f;
        }

        // p(x) = sum_{j=1}^m (-1)^{j+1} x^j / (2 (2j)!) - s
        inline double freq_poly(double x, int m, double s)
        {
            double v = -s, xp = 1.0;
            for (int j = 1; j <= m; ++j)
            {
                xp *= x;
                v += ((j % 2 == 1) ? 1.0 : -1.0) * xp / (2.0 * factorial(2 * j));
            }
            return v;
        }

        inline double freq_poly_deriv(double x, int m)
        {
            double v = 0.0, xp = 1.0;
            for (int j = 1; j <= m; ++j)
            {
                v += ((j % 2 == 1) ? 1.0 : -1.0) * j * xp / (2.0 * factorial(2 * j));
                xp *= x;
            }
            return v;
        }
    } // namespace detail

    struct ModFreqResult
    {
        double value = 0.0;    // the modified frequency
        double residual = 0.0; // root-finder residual of the defining relation
        double bound = 0.0;    // a-priori error bound |value - input frequency|
    };

    /// frequency omega_tilde such that a mode evolved at omega_tilde by the
    /// order-2m scheme is filtered exactly like the continuous mode omega:
    /// solves sum_{j<=m} (-1)^{j+1} x^j / (2(2j)!) = sin^2(omega dt / 2) for
    /// x = (dt * omega_tilde)^2 in (0, 4)
    inline ModFreqResult modified_frequency(double omega, double dt, int m)
    {
        if (!(omega > 0.0) || !(dt > 0.0) || m < 1)
            throw std::invalid_argument("modified_frequency: need omega > 0, dt > 0, m >= 1");
        const double s = std::sin(0.5 * omega * dt);
        const double s2 = s * s;

        double lo = 0.0, hi = 4.0;
        if (detail::freq_poly(hi, m, s2) <= 0.0)
            throw std::invalid_argument("modified_frequency: omega * dt too large, no root in (0, 4)");

        // bisect to a short bracket, then polish with Newton; the derivative is
        // bounded below by 1/10 on [0, 4] so Newton stays in the bracket
        while (hi - lo > 1e-2)
        {
            const double mid = 0.5 * (lo + hi);
            if (detail::freq_poly(mid, m, s2) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 60; ++it)
        {
            const double p = detail::freq_poly(x, m, s2);
            if (std::abs(p) < 1e-17)
                break;
            x -= p / detail::freq_poly_deriv(x, m);
            if (x < 0.0)
                x = 0.0;
            if (x > 4.0)
                x = 4.0;
        }

        ModFreqResult r;
        r.value = std::sqrt(x) / dt;
        r.residual = std::abs(detail::freq_poly(x, m, s2));
        r.bound = 5.0 / detail::factorial(2 * m + 2) * std::pow(dt, 2 * m) * std::pow(omega, 2 * m + 1);
        return r;
    }

    /// forcing frequency omega_bar whose discrete mode aligns with the
    /// continuous omega under the order-2m scheme:
    /// omega_bar = (2/dt) asin(sqrt(sum_{k<=m} (-1)^{k+1} (dt omega)^{2k} / (2(2k)!)))
    inline ModFreqResult corrected_frequency(double omega, double dt, int m)
    {
        if (!(omega > 0.0) || !(dt > 0.0) || m < 1)
            throw std::invalid_argument("corrected_frequency: need omega > 0, dt > 0, m >= 1");
        const double x = dt * omega * dt * omega;
        const double rhs = detail::freq_poly(x, m, 0.0);
        if (!(rhs > 0.0) || rhs > 1.0)
            throw std::invalid_argument("corrected_frequency: omega * dt outside the resolvable range");

        ModFreqResult r;
        r.value = 2.0 / dt * std::asin(std::sqrt(rhs));
        const double v = 0.5 * r.value * dt;
        r.residual = std::abs(std::sin(v) * std::sin(v) - rhs);
        r.bound = 5.0 / detail::factorial(2 * m + 2) * std::pow(dt, 2 * m) * std::pow(omega, 2 * m + 1);
        return r;
    }

    /// frequency of the discrete free oscillation of a spatial mode lambda
    /// under the order-2m scheme (same map as corrected_frequency, applied to
    /// the spatial eigenfrequency)
    inline ModFreqResult lambda_tilde(double lambda, double dt, int m)
    {
        return corrected_frequency(lambda, dt, m);
    }
} // namespace wh

#endif
