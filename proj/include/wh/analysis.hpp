#ifndef WH_ANALYSIS_HPP
#define WH_ANALYSIS_HPP

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "waveholtz.hpp"

namespace wh
{
    /// initial data concentrating energy on the modes nearest the driving
    /// frequency: v0 = sin(omega x) - (sin((omega + 2 pi) x) + sin((omega - 2 pi) x)) / 2,
    /// v1 = -v0'; this is the worst case for the filtered propagator with open walls
    inline std::pair<std::vector<double>, std::vector<double>>
    adversarial_initial_data(const Grid1D& g, double omega)
    {
        const double op = omega + 2.0 * M_PI;
        const double om = omega - 2.0 * M_PI;
        std::vector<double> v0(g.n_nodes), v1(g.n_nodes);
        for (int i = 0; i < g.n_nodes; ++i)
        {
            const double x = g.node(i);
            v0[i] = std::sin(omega * x) - 0.5 * (std::sin(op * x) + std::sin(om * x));
            v1[i] = -(omega * std::cos(omega * x) -
                      0.5 * (op * std::cos(op * x) + om * std::cos(om * x)));
        }
        return {std::move(v0), std::move(v1)};
    }

    /// lower estimate of the operator norm of S from a single probe direction
    inline double operator_norm_estimate(const WaveHoltzProblem& p, const IterateVec& z0)
    {
        const double nz = z0.norm();
        if (!(nz > 0.0))
            throw std::invalid_argument("operator_norm_estimate: probe must be nonzero");
        return apply_S(p, z0).norm() / nz;
    }

    struct RateFit
    {
        double slope = 0.0;
        double rms_residual = 0.0; // scatter of the points around the fitted line
    };

    /// least-squares slope of log(error) against log(scale); the standard
    /// convergence-order estimate over a refinement sequence
    inline RateFit fit_order(std::span<const double> scales, std::span<const double> errors)
    {
        if (scales.size() != errors.size() || scales.size() < 2)
            throw std::invalid_argument("fit_order: need matching lists with at least two points");
        const int n = (int)scales.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::vector<double> xs(n), ys(n);
        for (int i = 0; i < n; ++i)
        {
            if (!(scales[i] > 0.0) || !(errors[i] > 0.0))
                throw std::invalid_argument("fit_order: scales and errors must be positive");
            xs[i] = std::log(scales[i]);
            ys[i] = std::log(errors[i]);
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        RateFit fit;
        fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double icpt = (sy - fit.slope * sx) / n;
        double rr = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double d = ys[i] - (icpt + fit.slope * xs[i]);
            rr += d * d;
        }
        fit.rms_residual = std::sqrt(rr / n);
        return fit;
    }

    /// exact single-mode solution of w'' + eta w' + lambda^2 w = -f e^{-i omega t}
    /// with w(0) = v0, w'(0) = v1, written with alpha = sqrt(4 lambda^2 - eta^2)/2:
    /// the forced part relaxes to u e^{-i omega t} with u = f / (omega^2 + i eta omega - lambda^2)
    struct DampedModeOracle
    {
        double lambda, omega, eta;
        std::complex<double> f;
        std::complex<double> v0, v1;

        std::complex<double> u() const
        {
            const std::complex<double> den(omega * omega - lambda * lambda, eta * omega);
            return f / den;
        }

        std::complex<double> value(double t) const
        {
            using cplx = std::complex<double>;
            if (!(4.0 * lambda * lambda > eta * eta))
                throw std::invalid_argument("DampedModeOracle: underdamped modes only (eta < 2 lambda)");
            const double alpha = 0.5 * std::sqrt(4.0 * lambda * lambda - eta * eta);
            const double e = std::exp(-0.5 * eta * t);
            const double ca = std::cos(alpha * t), sa = std::sin(alpha * t);
            const cplx eiw = std::exp(cplx(0.0, -omega * t));

            const cplx forced = u() * (eiw - e * (ca + cplx(eta, -2.0 * omega) / (2.0 * alpha) * sa));
            const cplx free = e * (v0 * (ca + eta / (2.0 * alpha) * sa) + v1 * sa / alpha);
            return forced + free;
        }

        std::complex<double> derivative(double t) const
        {
            using cplx = std::complex<double>;
            if (!(4.0 * lambda * lambda > eta * eta))
                throw std::invalid_argument("DampedModeOracle: underdamped modes only (eta < 2 lambda)");
            const double alpha = 0.5 * std::sqrt(4.0 * lambda * lambda - eta * eta);
            const double e = std::exp(-0.5 * eta * t);
            const double ca = std::cos(alpha * t), sa = std::sin(alpha * t);
            const cplx eiw = std::exp(cplx(0.0, -omega * t));
            const cplx q = cplx(eta, -2.0 * omega) / (2.0 * alpha);

            // d/dt [e^{-eta t/2}(A cos + B sin)] = e^{-eta t/2}[(alpha B - eta A/2) cos - (alpha A + eta B/2) sin]
            auto envelope_dt = [&](cplx A, cplx B) {
                return e * ((alpha * B - 0.5 * eta * A) * ca - (alpha * A + 0.5 * eta * B) * sa);
            };

            const cplx forced = u() * (cplx(0.0, -omega) * eiw - envelope_dt(1.0, q));
            const cplx free = envelope_dt(v0, v0 * eta / (2.0 * alpha) + v1 / alpha);
            return forced + free;
        }
    };
} // namespace wh

#endif
