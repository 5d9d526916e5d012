#ifndef WH_EIG_HPP
#define WH_EIG_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "laplacian.hpp"

namespace wh
{
    /// dense symmetric eigendecomposition (cyclic Jacobi); A is n x n row-major
    /// and is destroyed. On return eigvals is ascending and column j of V
    /// (row-major n x n) is the eigenvector for eigvals[j].
    inline void jacobi_eigensystem(std::vector<double>& A, int n, std::vector<double>& eigvals,
                                   std::vector<double>& V)
    {
        V.assign(std::size_t(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            V[std::size_t(i) * n + i] = 1.0;

        auto at = [&](int i, int j) -> double& { return A[std::size_t(i) * n + j]; };

        for (int sweep = 0; sweep < 100; ++sweep)
        {
            double off = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    off += at(i, j) * at(i, j);
            if (off < 1e-300 || std::sqrt(off) < 1e-15 * std::max(1.0, std::abs(at(0, 0))))
                break;

            for (int p = 0; p < n - 1; ++p)
            {
                for (int q = p + 1; q < n; ++q)
                {
                    const double apq = at(p, q);
                    if (apq == 0.0)
                        continue;
                    const double app = at(p, p), aqq = at(q, q);
                    const double tau = (aqq - app) / (2.0 * apq);
                    const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                                  : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                    const double cth = 1.0 / std::sqrt(1.0 + t * t);
                    const double sth = t * cth;

                    for (int k = 0; k < n; ++k)
                    {
                        const double akp = at(k, p), akq = at(k, q);
                        at(k, p) = cth * akp - sth * akq;
                        at(k, q) = sth * akp + cth * akq;
                    }
                    for (int k = 0; k < n; ++k)
                    {
                        const double apk = at(p, k), aqk = at(q, k);
                        at(p, k) = cth * apk - sth * aqk;
                        at(q, k) = sth * apk + cth * aqk;
                    }
                    for (int k = 0; k < n; ++k)
                    {
                        const double vkp = V[std::size_t(k) * n + p], vkq = V[std::size_t(k) * n + q];
                        V[std::size_t(k) * n + p] = cth * vkp - sth * vkq;
                        V[std::size_t(k) * n + q] = sth * vkp + cth * vkq;
                    }
                }
            }
        }

        eigvals.resize(n);
        for (int i = 0; i < n; ++i)
            eigvals[i] = at(i, i);

        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int i, int j) { return eigvals[i] < eigvals[j]; });

        std::vector<double> ev(n), Vs(std::size_t(n) * n);
        for (int j = 0; j < n; ++j)
        {
            ev[j] = eigvals[order[j]];
            for (int i = 0; i < n; ++i)
                Vs[std::size_t(i) * n + j] = V[std::size_t(i) * n + order[j]];
        }
        eigvals.swap(ev);
        V.swap(Vs);
    }

    struct EigenDecomp
    {
        int n = 0;
        std::vector<double> lambda2; // ascending eigenvalues of L (squares of the modal frequencies)
        std::vector<double> vectors; // row-major n x n, column j is the j-th eigenvector

        std::vector<double> mode(int j) const
        {
            std::vector<double> v(n);
            for (int i = 0; i < n; ++i)
                v[i] = vectors[std::size_t(i) * n + j];
            return v;
        }
    };

    /// assemble the operator densely and diagonalize it; intended for modest
    /// problem sizes where an exact reference spectrum is wanted
    inline EigenDecomp eig_small(const DiscreteLaplacian& L, int max_dofs = 1024)
    {
        const int n = L.dofs();
        if (n > max_dofs)
            throw std::invalid_argument("eig_small: operator too large for a dense eigensolve");

        std::vector<double> A(std::size_t(n) * n, 0.0);
        std::vector<double> e(n, 0.0), col(n);
        for (int j = 0; j < n; ++j)
        {
            e[j] = 1.0;
            L.apply(e, col);
            e[j] = 0.0;
            for (int i = 0; i < n; ++i)
                A[std::size_t(i) * n + j] = col[i];
        }

        // the stencil must be exactly symmetric before we hand it to Jacobi
        double scale = 0.0, asym = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
            {
                scale = std::max(scale, std::abs(A[std::size_t(i) * n + j]));
                asym = std::max(asym, std::abs(A[std::size_t(i) * n + j] - A[std::size_t(j) * n + i]));
            }
        if (asym > 1e-12 * std::max(1.0, scale))
            throw std::runtime_error("eig_small: assembled operator is not symmetric");

        EigenDecomp d;
        d.n = n;
        jacobi_eigensystem(A, n, d.lambda2, d.vectors);
        return d;
    }
} // namespace wh

#endif
