#ifndef WH_BOUNDARY_HPP
#define WH_BOUNDARY_HPP

#include <cmath>
#include <stdexcept>

namespace wh
{
    enum class BcType
    {
        Dirichlet,
        Neumann,
        Impedance
    };

    /// one boundary side; impedance sides carry the condition
    /// i*alpha*omega*u + beta*c*du/dn = 0 with alpha^2 + beta^2 = 1
    struct SideBc
    {
        BcType type = BcType::Dirichlet;
        double alpha = 0.0;
        double beta = 0.0;
    };

    /// per-side boundary conditions; sides are ordered {left, right} in 1D and
    /// {left, right, bottom, top} in 2D
    struct BoundarySpec
    {
        SideBc side[4];
        int n_sides = 2;

        static BoundarySpec dirichlet_1d()
        {
            BoundarySpec bc;
            bc.side[0] = {BcType::Dirichlet};
            bc.side[1] = {BcType::Dirichlet};
            return bc;
        }

        static BoundarySpec neumann_1d()
        {
            BoundarySpec bc;
            bc.side[0] = {BcType::Neumann};
            bc.side[1] = {BcType::Neumann};
            return bc;
        }

        static BoundarySpec mixed_1d(BcType left, BcType right)
        {
            BoundarySpec bc;
            bc.side[0] = {left};
            bc.side[1] = {right};
            return bc;
        }

        static BoundarySpec impedance_1d(double alpha, double beta)
        {
            BoundarySpec bc;
            bc.side[0] = {BcType::Impedance, alpha, beta};
            bc.side[1] = {BcType::Impedance, alpha, beta};
            bc.validate();
            return bc;
        }

        static BoundarySpec uniform_2d(BcType t)
        {
            BoundarySpec bc;
            bc.n_sides = 4;
            for (int s = 0; s < 4; ++s)
                bc.side[s] = {t};
            return bc;
        }

        void validate() const
        {
            for (int s = 0; s < n_sides; ++s)
            {
                if (side[s].type == BcType::Impedance)
                {
                    const double a = side[s].alpha, b = side[s].beta;
                    if (std::abs(a * a + b * b - 1.0) > 1e-12)
                        throw std::invalid_argument("BoundarySpec: impedance needs alpha^2 + beta^2 = 1");
                    if (a == 0.0 || b == 0.0)
                        throw std::invalid_argument("BoundarySpec: impedance needs alpha != 0 and beta != 0");
                }
            }
        }

        bool has_impedance() const
        {
            for (int s = 0; s < n_sides; ++s)
                if (side[s].type == BcType::Impedance)
                    return true;
            return false;
        }
    };
} // namespace wh

#endif
