#ifndef WH_DIRECT_HPP
#define WH_DIRECT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "laplacian.hpp"

namespace wh
{
    struct resonance_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    /// complex banded LU with partial pivoting (LAPACK-style band storage)
    class BandedLU
    {
    public:
        using cplx = std::complex<double>;

        BandedLU(int n, int kl, int ku) : n_(n), kl_(kl), ku_(ku), rows_(2 * kl + ku + 1)
        {
            band_.assign(std::size_t(rows_) * n_, cplx(0.0));
            piv_.resize(n_);
        }

        cplx& at(int i, int j) { return band_[std::size_t(j) * rows_ + (kl_ + ku_ + i - j)]; }

        void factor(double pivot_tol = 1e-12)
        {
            double scale = 0.0;
            for (const cplx& v : band_)
                scale = std::max(scale, std::abs(v));
            if (scale == 0.0)
                throw resonance_error("BandedLU: zero matrix");

            for (int k = 0; k < n_; ++k)
            {
                int p = k;
                double best = std::abs(at(k, k));
                for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i)
                    if (std::abs(at(i, k)) > best)
                    {
                        best = std::abs(at(i, k));
                        p = i;
                    }
                if (best < pivot_tol * scale)
                    throw resonance_error(
                        "BandedLU: matrix is numerically singular; the shifted frequency sits at or "
                        "near a resonance of the discrete operator");
                piv_[k] = p;
                const int jmax = std::min(n_ - 1, k + ku_ + kl_);
                if (p != k)
                    for (int j = k; j <= jmax; ++j)
                        std::swap(at(k, j), at(p, j));
                for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i)
                {
                    const cplx m = at(i, k) / at(k, k);
                    at(i, k) = m;
                    for (int j = k + 1; j <= jmax; ++j)
                        at(i, j) -= m * at(k, j);
                }
            }
        }

        void solve(std::vector<cplx>& x) const
        {
            for (int k = 0; k < n_; ++k)
            {
                if (piv_[k] != k)
                    std::swap(x[k], x[piv_[k]]);
                for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i)
                    x[i] -= band_[std::size_t(k) * rows_ + (kl_ + ku_ + i - k)] * x[k];
            }
            for (int k = n_ - 1; k >= 0; --k)
            {
                for (int j = k + 1; j <= std::min(n_ - 1, k + ku_ + kl_); ++j)
                    x[k] -= band_[std::size_t(j) * rows_ + (kl_ + ku_ + k - j)] * x[j];
                x[k] /= band_[std::size_t(k) * rows_ + (kl_ + ku_)];
            }
        }

    private:
        int n_, kl_, ku_, rows_;
        std::vector<cplx> band_;
        std::vector<int> piv_;
    };

    /// factor and solve ((omega_eff^2 + i eta omega_eff) I - L) u = f for the
    /// discrete Helmholtz solution; the operator band is extracted by probing
    /// with unit vectors, so any Dirichlet/Neumann build works
    inline std::vector<std::complex<double>>
    direct_helmholtz_solve(const DiscreteLaplacian& L, double omega_eff, double eta,
                           std::span<const double> f_re, std::span<const double> f_im = {},
                           int max_dofs = 4096)
    {
        using cplx = std::complex<double>;
        const int n = L.dofs();
        if (n > max_dofs)
            throw std::invalid_argument("direct_helmholtz_solve: problem too large for the banded factorization");
        if ((int)f_re.size() != n || (!f_im.empty() && (int)f_im.size() != n))
            throw std::invalid_argument("direct_helmholtz_solve: right-hand side does not match the operator");

        const int bw = (L.dim == 1) ? 1 : L.nxd;
        BandedLU lu(n, bw, bw);

        const cplx shift(omega_eff * omega_eff, eta * omega_eff);
        std::vector<double> e(n, 0.0), col(n);
        for (int j = 0; j < n; ++j)
        {
            e[j] = 1.0;
            L.apply(e, col);
            e[j] = 0.0;
            for (int i = std::max(0, j - bw); i <= std::min(n - 1, j + bw); ++i)
                lu.at(i, j) = (i == j ? shift : cplx(0.0)) - col[i];
        }
        lu.factor();

        std::vector<cplx> u(n);
        for (int i = 0; i < n; ++i)
            u[i] = cplx(f_re[i], f_im.empty() ? 0.0 : f_im[i]);
        lu.solve(u);
        return u;
    }
} // namespace wh

#endif
