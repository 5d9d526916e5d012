#ifndef WH_LAPLACIAN_HPP
#define WH_LAPLACIAN_HPP

#include <span>
#include <vector>

#include "boundary.hpp"
#include "grid.hpp"

namespace wh
{
    /// Matrix-free conservative finite-difference discretization of the
    /// operator -div(c^2 grad), symmetric positive semi-definite.
    ///
    /// Dirichlet sides eliminate their boundary nodes from the unknowns;
    /// Neumann sides keep the boundary node and use the symmetric half-stencil
    /// boundary row (the mirrored-ghost closure scaled to preserve symmetry),
    /// which leaves constants in the kernel.
    class DiscreteLaplacian
    {
    public:
        int dim = 1;

        // 1D: dofs n, interface coefficients a[0..n] (c^2 at cell midpoints,
        // zero where a Neumann side drops the outside interface)
        int n = 0;
        double h = 0.0;
        std::vector<double> a;

        // 2D: dof extents nxd x nyd (x fastest); ax sized (nxd+1)*nyd, ay sized nxd*(nyd+1)
        int nxd = 0, nyd = 0;
        double hx = 0.0, hy = 0.0;
        std::vector<double> ax, ay;

        // node-index offset of dof (0,0) in the originating grid
        int off_x = 0, off_y = 0;

        int dofs() const { return dim == 1 ? n : nxd * nyd; }

        void apply(std::span<const double> x, std::span<double> y) const
        {
            if (dim == 1)
            {
                const double ih2 = 1.0 / (h * h);
                for (int i = 0; i < n; ++i)
                {
                    double v = (a[i] + a[i + 1]) * x[i];
                    if (i > 0)
                        v -= a[i] * x[i - 1];
                    if (i + 1 < n)
                        v -= a[i + 1] * x[i + 1];
                    y[i] = v * ih2;
                }
            }
            else
            {
                const double ihx2 = 1.0 / (hx * hx);
                const double ihy2 = 1.0 / (hy * hy);
                for (int j = 0; j < nyd; ++j)
                {
                    for (int i = 0; i < nxd; ++i)
                    {
                        const int id = j * nxd + i;
                        const double axl = ax[std::size_t(j) * (nxd + 1) + i];
                        const double axr = ax[std::size_t(j) * (nxd + 1) + i + 1];
                        const double ayb = ay[std::size_t(j) * nxd + i];
                        const double ayt = ay[std::size_t(j + 1) * nxd + i];

                        double v = ((axl + axr) * ihx2 + (ayb + ayt) * ihy2) * x[id];
                        if (i > 0)
                            v -= axl * ihx2 * x[id - 1];
                        if (i + 1 < nxd)
                            v -= axr * ihx2 * x[id + 1];
                        if (j > 0)
                            v -= ayb * ihy2 * x[id - nxd];
                        if (j + 1 < nyd)
                            v -= ayt * ihy2 * x[id + nxd];
                        y[id] = v;
                    }
                }
            }
        }

        /// Gershgorin upper bound on the largest eigenvalue lambda_N^2
        double gershgorin_bound() const
        {
            double bound = 0.0;
            if (dim == 1)
            {
                const double ih2 = 1.0 / (h * h);
                for (int i = 0; i < n; ++i)
                    bound = std::max(bound, 2.0 * (a[i] + a[i + 1]) * ih2);
            }
            else
            {
                const double ihx2 = 1.0 / (hx * hx);
                const double ihy2 = 1.0 / (hy * hy);
                for (int j = 0; j < nyd; ++j)
                    for (int i = 0; i < nxd; ++i)
                    {
                        const double row =
                            2.0 * (ax[std::size_t(j) * (nxd + 1) + i] + ax[std::size_t(j) * (nxd + 1) + i + 1]) * ihx2 +
                            2.0 * (ay[std::size_t(j) * nxd + i] + ay[std::size_t(j + 1) * nxd + i]) * ihy2;
                        bound = std::max(bound, row);
                    }
            }
            return bound;
        }
    };

    inline DiscreteLaplacian build_laplacian_1d(const Grid1D& g, const WaveSpeedField& c,
                                                const BoundarySpec& bc)
    {
        bc.validate();
        if (bc.n_sides != 2)
            throw std::invalid_argument("build_laplacian_1d: expected a 1D boundary spec");
        for (int s = 0; s < 2; ++s)
            if (bc.side[s].type == BcType::Impedance)
                throw std::invalid_argument(
                    "build_laplacian_1d: impedance sides are handled by problem extension, not by the stencil");
        if ((int)c.c.size() != g.n_nodes)
            throw std::invalid_argument("build_laplacian_1d: wave speed field does not match grid");

        const bool dl = bc.side[0].type == BcType::Dirichlet;
        const bool dr = bc.side[1].type == BcType::Dirichlet;
        const int i0 = dl ? 1 : 0;
        const int i1 = g.n_nodes - 1 - (dr ? 1 : 0);

        DiscreteLaplacian L;
        L.dim = 1;
        L.h = g.h;
        L.n = i1 - i0 + 1;
        L.off_x = i0;
        L.a.assign(L.n + 1, 0.0);
        for (int k = 0; k <= L.n; ++k)
        {
            const int mid = i0 + k - 1; // interface between nodes mid and mid+1
            if (mid < 0 || mid + 1 > g.n_nodes - 1)
                continue; // outside interface dropped on a Neumann side
            L.a[k] = c.c_mid[mid] * c.c_mid[mid];
        }
        return L;
    }

    inline DiscreteLaplacian build_laplacian_2d(const Grid2D& g, const WaveSpeedField2D& c,
                                                const BoundarySpec& bc)
    {
        bc.validate();
        if (bc.n_sides != 4)
            throw std::invalid_argument("build_laplacian_2d: expected a 2D boundary spec");
        for (int s = 0; s < 4; ++s)
            if (bc.side[s].type == BcType::Impedance)
                throw std::invalid_argument("build_laplacian_2d: impedance sides are not supported by the stencil");
        if ((int)c.c.size() != g.nx * g.ny)
            throw std::invalid_argument("build_laplacian_2d: wave speed field does not match grid");

        const bool dl = bc.side[0].type == BcType::Dirichlet;
        const bool dr = bc.side[1].type == BcType::Dirichlet;
        const bool db = bc.side[2].type == BcType::Dirichlet;
        const bool dt = bc.side[3].type == BcType::Dirichlet;

        DiscreteLaplacian L;
        L.dim = 2;
        L.hx = g.hx;
        L.hy = g.hy;
        L.off_x = dl ? 1 : 0;
        L.off_y = db ? 1 : 0;
        L.nxd = g.nx - L.off_x - (dr ? 1 : 0);
        L.nyd = g.ny - L.off_y - (dt ? 1 : 0);

        auto cn = [&](int ix, int iy) { return c.c[std::size_t(iy) * g.nx + ix]; };

        L.ax.assign(std::size_t(L.nxd + 1) * L.nyd, 0.0);
        for (int j = 0; j < L.nyd; ++j)
            for (int k = 0; k <= L.nxd; ++k)
            {
                const int ix = L.off_x + k - 1; // interface between node columns ix, ix+1
                if (ix < 0 || ix + 1 > g.nx - 1)
                    continue;
                const double cm = 0.5 * (cn(ix, L.off_y + j) + cn(ix + 1, L.off_y + j));
                L.ax[std::size_t(j) * (L.nxd + 1) + k] = cm * cm;
            }

        L.ay.assign(std::size_t(L.nxd) * (L.nyd + 1), 0.0);
        for (int k = 0; k <= L.nyd; ++k)
            for (int i = 0; i < L.nxd; ++i)
            {
                const int iy = L.off_y + k - 1;
                if (iy < 0 || iy + 1 > g.ny - 1)
                    continue;
                const double cm = 0.5 * (cn(L.off_x + i, iy) + cn(L.off_x + i, iy + 1));
                L.ay[std::size_t(k) * L.nxd + i] = cm * cm;
            }
        return L;
    }
} // namespace wh

#endif
