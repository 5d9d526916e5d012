#ifndef WH_GRID_HPP
#define WH_GRID_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace wh
{
    /// uniform 1D node grid on [a, b] with n_nodes points (h = (b-a)/(n_nodes-1))
    struct Grid1D
    {
        double a;
        double b;
        int n_nodes;
        double h;

        Grid1D(double a_, double b_, int n) : a(a_), b(b_), n_nodes(n), h((b_ - a_) / (n - 1))
        {
            if (n < 3)
                throw std::invalid_argument("Grid1D: need at least 3 nodes");
            if (!(b_ > a_))
                throw std::invalid_argument("Grid1D: empty interval");
        }

        double node(int i) const { return a + i * h; }
    };

    /// uniform tensor-product grid on [ax, bx] x [ay, by]
    struct Grid2D
    {
        double ax, bx, ay, by;
        int nx, ny;
        double hx, hy;

        Grid2D(double ax_, double bx_, double ay_, double by_, int nx_, int ny_)
            : ax(ax_), bx(bx_), ay(ay_), by(by_), nx(nx_), ny(ny_),
              hx((bx_ - ax_) / (nx_ - 1)), hy((by_ - ay_) / (ny_ - 1))
        {
            if (nx_ < 3 || ny_ < 3)
                throw std::invalid_argument("Grid2D: need at least 3 nodes per direction");
            if (!(bx_ > ax_) || !(by_ > ay_))
                throw std::invalid_argument("Grid2D: empty box");
        }

        double node_x(int i) const { return ax + i * hx; }
        double node_y(int j) const { return ay + j * hy; }
    };

    /// nodal wave speed samples c(x_i) > 0 on a 1D grid, plus the midpoint
    /// values c_{i+1/2} = (c_i + c_{i+1})/2 used by the conservative stencil
    struct WaveSpeedField
    {
        std::vector<double> c;     // size n_nodes
        std::vector<double> c_mid; // size n_nodes - 1

        static WaveSpeedField constant(const Grid1D& g, double c0)
        {
            return from_function(g, [c0](double) { return c0; });
        }

        static WaveSpeedField from_function(const Grid1D& g, const std::function<double(double)>& f)
        {
            WaveSpeedField w;
            w.c.resize(g.n_nodes);
            for (int i = 0; i < g.n_nodes; ++i)
                w.c[i] = f(g.node(i));
            w.finalize();
            return w;
        }

        static WaveSpeedField from_samples(std::vector<double> samples)
        {
            WaveSpeedField w;
            w.c = std::move(samples);
            w.finalize();
            return w;
        }

        void finalize()
        {
            c_mid.resize(c.size() - 1);
            for (std::size_t i = 0; i + 1 < c.size(); ++i)
            {
                if (!(c[i] > 0.0))
                    throw std::invalid_argument("WaveSpeedField: wave speed must be positive");
                c_mid[i] = 0.5 * (c[i] + c[i + 1]);
            }
            if (!(c.back() > 0.0))
                throw std::invalid_argument("WaveSpeedField: wave speed must be positive");
        }
    };

    /// nodal wave speed on a 2D grid, row-major with x fastest
    struct WaveSpeedField2D
    {
        std::vector<double> c; // size nx * ny

        static WaveSpeedField2D constant(const Grid2D& g, double c0)
        {
            WaveSpeedField2D w;
            w.c.assign(std::size_t(g.nx) * g.ny, c0);
            if (!(c0 > 0.0))
                throw std::invalid_argument("WaveSpeedField2D: wave speed must be positive");
            return w;
        }

        static WaveSpeedField2D from_function(const Grid2D& g,
                                              const std::function<double(double, double)>& f)
        {
            WaveSpeedField2D w;
            w.c.resize(std::size_t(g.nx) * g.ny);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                {
                    double v = f(g.node_x(i), g.node_y(j));
                    if (!(v > 0.0))
                        throw std::invalid_argument("WaveSpeedField2D: wave speed must be positive");
                    w.c[std::size_t(j) * g.nx + i] = v;
                }
            return w;
        }
    };
} // namespace wh

#endif
