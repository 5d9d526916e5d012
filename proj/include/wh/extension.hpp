#ifndef WH_EXTENSION_HPP
#define WH_EXTENSION_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "boundary.hpp"
#include "grid.hpp"

namespace wh
{
    /// an impedance problem on [a, b] rewritten as an energy-conserving Neumann
    /// problem on a widened interval: outside [a, b] the wave speed becomes
    /// (alpha/beta) c so that outgoing waves keep leaving at the impedance rate,
    /// and the interval is wide enough that nothing re-enters within one period
    struct ExtendedProblem
    {
        Grid1D grid{0.0, 1.0, 3};
        WaveSpeedField c;
        BoundarySpec bc; // Neumann on both sides
        std::vector<double> v0, v1, f;
        int i0 = 0;     // node offset of the original left endpoint
        int n_orig = 0; // node count of the original grid
    };

    inline ExtendedProblem extend_problem(const Grid1D& g, const WaveSpeedField& c,
                                          const BoundarySpec& bc, std::span<const double> v0,
                                          std::span<const double> v1, std::span<const double> f,
                                          double T, int margin_cells = 2)
    {
        bc.validate();
        if (bc.n_sides != 2 || bc.side[0].type != BcType::Impedance ||
            bc.side[1].type != BcType::Impedance)
            throw std::invalid_argument("extend_problem: both sides must be impedance");
        if ((int)v0.size() != g.n_nodes || (int)v1.size() != g.n_nodes || (int)f.size() != g.n_nodes)
            throw std::invalid_argument("extend_problem: data does not match grid");

        // the splice assumes the medium is already uniform at the walls
        auto near_const = [&](int i1, int i2) {
            const double ref = c.c[i1];
            for (int i = i1; i != i2; i += (i2 > i1 ? 1 : -1))
                if (std::abs(c.c[i] - ref) > 1e-12 * std::abs(ref))
                    return false;
            return true;
        };
        if (!near_const(0, std::min(3, g.n_nodes - 1)) ||
            !near_const(g.n_nodes - 1, std::max(g.n_nodes - 4, 0)))
            throw std::invalid_argument("extend_problem: wave speed must be constant near the endpoints");

        const double ga = bc.side[0].alpha / bc.side[0].beta;
        const double gb = bc.side[1].alpha / bc.side[1].beta;
        const double ca_ext = ga * c.c.front();
        const double cb_ext = gb * c.c.back();

        // width must exceed half a period of travel at the local speed
        const double wa = 0.5 * T * std::max(ca_ext, c.c.front());
        const double wb = 0.5 * T * std::max(cb_ext, c.c.back());
        const int na = (int)std::floor(wa / g.h) + 1 + margin_cells;
        const int nb = (int)std::floor(wb / g.h) + 1 + margin_cells;

        ExtendedProblem ep{Grid1D(g.a - na * g.h, g.b + nb * g.h, g.n_nodes + na + nb),
                           WaveSpeedField{},
                           BoundarySpec::neumann_1d(),
                           {},
                           {},
                           {},
                           na,
                           g.n_nodes};

        std::vector<double> cs(ep.grid.n_nodes);
        for (int i = 0; i < na; ++i)
            cs[i] = ca_ext;
        for (int i = 0; i < g.n_nodes; ++i)
            cs[na + i] = c.c[i];
        for (int i = na + g.n_nodes; i < ep.grid.n_nodes; ++i)
            cs[i] = cb_ext;
        ep.c = WaveSpeedField::from_samples(std::move(cs));

        ep.v0.assign(ep.grid.n_nodes, 0.0);
        ep.v1.assign(ep.grid.n_nodes, 0.0);
        ep.f.assign(ep.grid.n_nodes, 0.0);
        for (int i = 0; i < na; ++i)
            ep.v0[i] = v0.front(); // constant extension keeps the initial state continuous
        for (int i = 0; i < g.n_nodes; ++i)
        {
            ep.v0[na + i] = v0[i];
            ep.v1[na + i] = v1[i];
            ep.f[na + i] = f[i];
        }
        for (int i = na + g.n_nodes; i < ep.grid.n_nodes; ++i)
            ep.v0[i] = v0.back();
        return ep;
    }

    /// pull a field on the extended grid back to the original nodes
    inline std::vector<double> restrict_field(const ExtendedProblem& ep, std::span<const double> u)
    {
        if ((int)u.size() != ep.grid.n_nodes)
            throw std::invalid_argument("restrict_field: field does not match the extended grid");
        return std::vector<double>(u.begin() + ep.i0, u.begin() + ep.i0 + ep.n_orig);
    }
} // namespace wh

#endif
