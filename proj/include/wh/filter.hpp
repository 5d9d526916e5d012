#ifndef WH_FILTER_HPP
#define WH_FILTER_HPP

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "timestep.hpp"

namespace wh
{
    namespace detail
    {
        /// sin(x)/x with a series fallback near the removable singularity
        inline double sin_over(double x)
        {
            if (std::abs(x) < 1e-3)
            {
                const double x2 = x * x;
                // six terms of the sinc series; far more than needed at 1e-3
                return 1.0 + x2 * (-1.0 / 6.0 +
                       x2 * (1.0 / 120.0 +
                       x2 * (-1.0 / 5040.0 +
                       x2 * (1.0 / 362880.0 +
                       x2 * (-1.0 / 39916800.0 + x2 / 6227020800.0)))));
            }
            return std::sin(x) / x;
        }
    } // namespace detail

    /// real part of the filter transfer function at frequency ratio r = lambda/omega:
    /// beta(r) = (1 + 3 r^2) sin(2 pi r) / (4 pi r (r^2 - 1));
    /// the removable singularities at r = 0 and r = 1 are evaluated through
    /// factored sinc forms (beta(0) = -1/2, beta(1) = 1)
    inline double beta_bar(double r)
    {
        if (std::abs(r) < 0.5)
        {
            // sin(2 pi r) / r smooth through r = 0
            return (1.0 + 3.0 * r * r) * 2.0 * M_PI * detail::sin_over(2.0 * M_PI * r) /
                   (4.0 * M_PI * (r * r - 1.0));
        }
        // sin(2 pi r) = sin(2 pi (r - 1)); factor out (r - 1)
        const double d = r - 1.0;
        return (1.0 + 3.0 * r * r) * 2.0 * M_PI * detail::sin_over(2.0 * M_PI * d) /
               (4.0 * M_PI * r * (r + 1.0));
    }

    /// imaginary part of the transfer function (scaled velocity coupling):
    /// gamma(r) = (1 + 3 r^2) sin^2(pi r) / (2 pi r (r^2 - 1)), gamma(0) = gamma(1) = 0
    inline double gamma_bar(double r)
    {
        const double s = detail::sin_over(M_PI * r);
        if (std::abs(r) < 0.5)
        {
            // sin^2(pi r)/r = pi^2 r sinc^2(pi r)
            return (1.0 + 3.0 * r * r) * M_PI * M_PI * r * s * s / (2.0 * M_PI * (r * r - 1.0));
        }
        const double d = r - 1.0;
        const double sd = detail::sin_over(M_PI * d);
        // sin^2(pi r) = sin^2(pi d); factor out one power of d = r - 1
        return (1.0 + 3.0 * r * r) * M_PI * M_PI * d * sd * sd / (2.0 * M_PI * r * (r + 1.0));
    }

    /// |mu(r)| = |beta(r) + i gamma(r)|, the modal contraction factor of the
    /// two-component iteration
    inline double mu_bar_abs(double r)
    {
        return std::hypot(beta_bar(r), gamma_bar(r));
    }

    /// constants of the quadratic contraction estimates near resonance
    struct FilterConstants
    {
        static constexpr double b0_pair = 3.0 / (2.0 * M_PI);
        static constexpr double b1_pair = M_PI * M_PI / 6.0 - 0.25;
        static constexpr double b0_scalar = 3.0 / (4.0 * M_PI);
        static constexpr double b1_scalar = 2.0 * M_PI * M_PI / 3.0 - 0.25;
        // cubic remainder bounds of the local expansions around r = 1
        static constexpr double remainder_pair =
            25.0 * M_PI * M_PI * M_PI * M_PI / 4.0 *
            (36.0 + 20.0 * M_PI + 250.0 * M_PI * M_PI + 75.0 * M_PI * M_PI * M_PI);
        static constexpr double remainder_scalar = 10.0 * M_PI * M_PI * M_PI / 9.0;
    };

    struct BoundViolation
    {
        double r;
        double value;
        double bound;
        std::string which;
    };

    struct BoundReport
    {
        int checked = 0;
        std::vector<BoundViolation> violations;
        bool ok() const { return violations.empty(); }
    };

    /// verify the proved envelopes of beta and |mu| on a grid of ratios r >= 0:
    ///   |mu(1 + d)| <= 1 - (15/32) d^2            for |d| <= 1/2
    ///   |mu(r)|     <= 7 / (3 pi)                 for |d| >= 1/2
    ///   |mu(r)|     <= (3 / (2 pi)) / (r - 1)     for r > 1
    ///   0 <= beta(1 + d) <= 1 - d^2 / 2           for |d| <= 1/2
    ///   |beta(r)|   <= 1/2                        for |d| >= 1/2
    ///   |beta(r)|   <= (3 / (4 pi)) / (r - 1)     for r > 1
    inline BoundReport check_filter_bounds(std::span<const double> r_grid, double slack = 1e-12)
    {
        BoundReport rep;
        for (double r : r_grid)
        {
            if (r < 0.0)
                throw std::invalid_argument("check_filter_bounds: ratios must be nonnegative");
            ++rep.checked;
            const double d = r - 1.0;
            const double mu = mu_bar_abs(r);
            const double be = beta_bar(r);

            auto check = [&](double value, double bound, const char* which) {
                if (value > bound + slack)
                    rep.violations.push_back({r, value, bound, which});
            };

            if (std::abs(d) <= 0.5)
            {
                check(mu, 1.0 - 15.0 / 32.0 * d * d, "mu_near");
                check(-be, 0.0, "beta_nonneg");
                check(be, 1.0 - 0.5 * d * d, "beta_near");
            }
            else
            {
                check(mu, 7.0 / (3.0 * M_PI), "mu_far");
                check(std::abs(be), 0.5, "beta_far");
            }
            if (r > 1.0)
            {
                check(mu, 3.0 / (2.0 * M_PI) / d, "mu_tail");
                check(std::abs(be), 3.0 / (4.0 * M_PI) / d, "beta_tail");
            }
        }
        return rep;
    }

    /// trapezoid-rule counterpart of beta at a discrete modal frequency:
    /// beta_h(lt) = (2 dt / T) sum_n eta_n (cos(omega t_n) - 1/4) cos(lt t_n)
    inline double discrete_beta(double lambda_tilde_val, double omega, const StepPlan& plan)
    {
        double s = 0.0;
        for (int n = 0; n <= plan.M; ++n)
        {
            const double t = n * plan.dt;
            const double eta = (n == 0 || n == plan.M) ? 0.5 : 1.0;
            s += eta * (std::cos(omega * t) - 0.25) * std::cos(lambda_tilde_val * t);
        }
        return 2.0 * plan.dt / plan.T * s;
    }

    /// trapezoid-rule counterpart of gamma (sine quadrature of the same kernel)
    inline double discrete_gamma(double lambda_tilde_val, double omega, const StepPlan& plan)
    {
        double s = 0.0;
        for (int n = 0; n <= plan.M; ++n)
        {
            const double t = n * plan.dt;
            const double eta = (n == 0 || n == plan.M) ? 0.5 : 1.0;
            s += eta * (std::cos(omega * t) - 0.25) * std::sin(lambda_tilde_val * t);
        }
        return 2.0 * plan.dt / plan.T * s;
    }

    /// precomputed trapezoid weights sigma_n of the time filter
    /// (2/T)(cos(omega t) - 1/4); in corrected mode each weight additionally
    /// carries the factor cos(omega t_n) / cos(omega_bar t_n), which together
    /// with forcing at omega_bar makes the converged iterate solve the discrete
    /// Helmholtz problem exactly
    struct FilterKernel
    {
        std::vector<double> sigma; // size M + 1
        double dt = 0.0;
        int M = 0;

        static FilterKernel standard(double omega, const StepPlan& plan)
        {
            FilterKernel k;
            k.dt = plan.dt;
            k.M = plan.M;
            k.sigma.resize(plan.M + 1);
            for (int n = 0; n <= plan.M; ++n)
            {
                const double t = n * plan.dt;
                const double eta = (n == 0 || n == plan.M) ? 0.5 : 1.0;
                k.sigma[n] = 2.0 * plan.dt / plan.T * eta * (std::cos(omega * t) - 0.25);
            }
            return k;
        }

        static FilterKernel corrected(double omega, double omega_bar, const StepPlan& plan,
                                      double guard = 1e-6)
        {
            FilterKernel k = standard(omega, plan);
            for (int n = 0; n <= plan.M; ++n)
            {
                const double t = n * plan.dt;
                const double cb = std::cos(omega_bar * t);
                if (std::abs(cb) < guard)
                    throw std::runtime_error(
                        "FilterKernel: corrected quadrature hit a near-zero of cos(omega_bar t_n) at node " +
                        std::to_string(n) + "; choose a different step count");
                k.sigma[n] *= std::cos(omega * t) / cb;
            }
            return k;
        }
    };

    /// exact quadratures of the complex exponential filter against the damped
    /// homogeneous oscillations:
    ///   beta_hat(alpha)  = (1/T) int_0^T e^{(i omega - eta/2) t} cos(alpha t) dt
    ///   gamma_hat(alpha) = (1/T) int_0^T e^{(i omega - eta/2) t} sin(alpha t) dt
    inline std::pair<std::complex<double>, std::complex<double>>
    damped_filter_values(double alpha, double omega, double eta)
    {
        using cplx = std::complex<double>;
        const double T = 2.0 * M_PI / omega;
        const cplx z(-0.5 * eta, omega);
        const cplx den = z * z + alpha * alpha;
        const cplx ezT = std::exp(z * T);
        const double ca = std::cos(alpha * T), sa = std::sin(alpha * T);

        // antiderivatives e^{zt}(z cos + alpha sin)/(z^2+a^2), e^{zt}(z sin - alpha cos)/(z^2+a^2)
        const cplx bh = (ezT * (z * ca + alpha * sa) - z) / den / T;
        const cplx gh = (ezT * (z * sa - alpha * ca) + alpha) / den / T;
        return {bh, gh};
    }

    /// contraction bound of the damped iteration: 2 (1 - e^{-eta T / 2}) / (eta T) < 1
    inline double damped_rate_bound(double omega, double eta)
    {
        if (!(eta > 0.0) || !(omega > 0.0))
            throw std::invalid_argument("damped_rate_bound: need omega > 0 and eta > 0");
        const double x = eta * 2.0 * M_PI / omega;
        return 2.0 * (1.0 - std::exp(-0.5 * x)) / x;
    }
} // namespace wh

#endif
