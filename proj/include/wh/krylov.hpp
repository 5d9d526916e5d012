#ifndef WH_KRYLOV_HPP
#define WH_KRYLOV_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "eig.hpp"

namespace wh
{
    struct KrylovConfig
    {
        double tol = 1e-10; // relative residual target
        int max_iter = 200;
        double breakdown_tol = 1e-14;
    };

    struct KrylovReport
    {
        bool converged = false;
        int iterations = 0;
        std::vector<double> residuals;        // relative residual history
        double true_residual = 0.0;           // |b - A x| / |b| at exit
        std::vector<double> eigen_estimates;  // Ritz values of the Lanczos tridiagonal (CG only)
    };

    namespace detail
    {
        inline double dot(std::span<const double> a, std::span<const double> b)
        {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i)
                s += a[i] * b[i];
            return s;
        }

        inline double nrm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }
    } // namespace detail

    /// conjugate gradients for a symmetric positive definite matrix-free
    /// operator; the alpha/beta recurrences additionally assemble the Lanczos
    /// tridiagonal whose Ritz values estimate the operator spectrum
    template <class Op>
    KrylovReport cg_solve(Op&& A, std::span<const double> b, std::vector<double>& x,
                          const KrylovConfig& cfg = {})
    {
        const int n = (int)b.size();
        x.assign(n, 0.0);
        std::vector<double> r(b.begin(), b.end());
        std::vector<double> p(r), Ap(n);

        KrylovReport rep;
        const double bnorm = detail::nrm2(b);
        if (bnorm == 0.0)
        {
            rep.converged = true;
            return rep;
        }

        std::vector<double> alphas, betas;
        double rr = detail::dot(r, r);
        rep.residuals.push_back(1.0);

        for (int it = 1; it <= cfg.max_iter; ++it)
        {
            A(p, Ap);
            const double pAp = detail::dot(p, Ap);
            if (!(pAp > 0.0))
                throw std::runtime_error("cg_solve: operator is not positive definite on the Krylov space");
            const double alpha = rr / pAp;
            for (int i = 0; i < n; ++i)
            {
                x[i] += alpha * p[i];
                r[i] -= alpha * Ap[i];
            }
            const double rr_new = detail::dot(r, r);
            const double beta = rr_new / rr;
            alphas.push_back(alpha);
            betas.push_back(beta);
            rr = rr_new;
            for (int i = 0; i < n; ++i)
                p[i] = r[i] + beta * p[i];

            rep.iterations = it;
            rep.residuals.push_back(std::sqrt(rr) / bnorm);
            if (rep.residuals.back() <= cfg.tol)
            {
                rep.converged = true;
                break;
            }
        }

        // Lanczos tridiagonal from the CG coefficients
        const int k = (int)alphas.size();
        if (k > 0)
        {
            std::vector<double> T(std::size_t(k) * k, 0.0);
            for (int i = 0; i < k; ++i)
            {
                double d = 1.0 / alphas[i];
                if (i > 0)
                    d += betas[i - 1] / alphas[i - 1];
                T[std::size_t(i) * k + i] = d;
                if (i + 1 < k)
                {
                    const double e = std::sqrt(betas[i]) / alphas[i];
                    T[std::size_t(i) * k + i + 1] = e;
                    T[std::size_t(i + 1) * k + i] = e;
                }
            }
            std::vector<double> vecs;
            jacobi_eigensystem(T, k, rep.eigen_estimates, vecs);
        }

        std::vector<double> Ax(n);
        A(x, Ax);
        double s = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double d = b[i] - Ax[i];
            s += d * d;
        }
        rep.true_residual = std::sqrt(s) / bnorm;
        return rep;
    }

    /// full GMRES (no restart), modified Gram-Schmidt with one
    /// re-orthogonalization pass, Givens rotations for the least-squares update
    template <class Op>
    KrylovReport gmres_solve(Op&& A, std::span<const double> b, std::vector<double>& x,
                             const KrylovConfig& cfg = {})
    {
        const int n = (int)b.size();
        x.assign(n, 0.0);

        KrylovReport rep;
        const double bnorm = detail::nrm2(b);
        if (bnorm == 0.0)
        {
            rep.converged = true;
            return rep;
        }

        const int mmax = std::min(cfg.max_iter, n);
        std::vector<std::vector<double>> V;
        V.reserve(mmax + 1);
        std::vector<double> H(std::size_t(mmax + 1) * mmax, 0.0); // column-major (m+1) x m
        auto h = [&](int i, int j) -> double& { return H[std::size_t(j) * (mmax + 1) + i]; };

        std::vector<double> cs(mmax), sn(mmax), g(mmax + 1, 0.0);

        V.emplace_back(b.begin(), b.end());
        for (double& v : V[0])
            v /= bnorm;
        g[0] = bnorm;
        rep.residuals.push_back(1.0);

        int k = 0;
        std::vector<double> w(n);
        for (; k < mmax; ++k)
        {
            A(V[k], w);

            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i <= k; ++i)
                {
                    const double hik = detail::dot(w, V[i]);
                    if (pass == 0)
                        h(i, k) = hik;
                    else
                        h(i, k) += hik;
                    for (int j = 0; j < n; ++j)
                        w[j] -= hik * V[i][j];
                }
            const double hk1 = detail::nrm2(w);
            h(k + 1, k) = hk1;

            for (int i = 0; i < k; ++i)
            {
                const double t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
                h(i + 1, k) = -sn[i] * h(i, k) + cs[i] * h(i + 1, k);
                h(i, k) = t;
            }
            const double denom = std::hypot(h(k, k), h(k + 1, k));
            cs[k] = h(k, k) / denom;
            sn[k] = h(k + 1, k) / denom;
            h(k, k) = denom;
            h(k + 1, k) = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];

            rep.iterations = k + 1;
            rep.residuals.push_back(std::abs(g[k + 1]) / bnorm);

            const bool done = rep.residuals.back() <= cfg.tol;
            const bool breakdown = hk1 <= cfg.breakdown_tol * bnorm;
            if (done || breakdown)
            {
                rep.converged = done || breakdown; // lucky breakdown means the exact solution is in the space
                ++k;
                break;
            }
            V.emplace_back(w);
            for (double& v : V.back())
                v /= hk1;
        }

        // back-substitute and assemble x
        std::vector<double> y(k, 0.0);
        for (int i = k - 1; i >= 0; --i)
        {
            double s = g[i];
            for (int j = i + 1; j < k; ++j)
                s -= h(i, j) * y[j];
            y[i] = s / h(i, i);
        }
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < n; ++j)
                x[j] += y[i] * V[i][j];

        std::vector<double> Ax(n);
        A(x, Ax);
        double s = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double d = b[i] - Ax[i];
            s += d * d;
        }
        rep.true_residual = std::sqrt(s) / bnorm;
        return rep;
    }
} // namespace wh

#endif
