#ifndef WH_WAVEHOLTZ_HPP
#define WH_WAVEHOLTZ_HPP

#include <cmath>
#include <complex>
#include <cstring>
#include <span>
#include <stdexcept>
#include <vector>

#include "extension.hpp"
#include "filter.hpp"
#include "laplacian.hpp"
#include "modfreq.hpp"
#include "timestep.hpp"

namespace wh
{
    enum class IterationMode
    {
        Simplified, // scalar iterate, two-step scheme of order 2m, optional corrected quadrature
        General,    // (w, w_t) pair, fourth-order Runge-Kutta
        Damped,     // complex pair via two real evolutions and the exponential filter
        Impedance   // impedance walls through the Neumann extension (or the direct closure)
    };

    /// iteration state; layout is comps contiguous blocks of n values:
    ///   Simplified: [v]
    ///   General/Impedance: [v, v'] with fixed point (Re u, omega Im u)
    ///   Damped: [Re v0, Im v0, Re v1, Im v1] with fixed point (u, -i omega u)
    struct IterateVec
    {
        std::vector<double> data;
        int n = 0;
        int comps = 1;

        static IterateVec zeros(int n, int comps)
        {
            IterateVec v;
            v.n = n;
            v.comps = comps;
            v.data.assign(std::size_t(n) * comps, 0.0);
            return v;
        }

        std::span<double> comp(int k) { return {data.data() + std::size_t(k) * n, (std::size_t)n}; }
        std::span<const double> comp(int k) const
        {
            return {data.data() + std::size_t(k) * n, (std::size_t)n};
        }

        double norm() const
        {
            double s = 0.0;
            for (double x : data)
                s += x * x;
            return std::sqrt(s);
        }
    };

    inline double dist(const IterateVec& a, const IterateVec& b)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < a.data.size(); ++i)
        {
            const double d = a.data[i] - b.data[i];
            s += d * d;
        }
        return std::sqrt(s);
    }

    struct WaveHoltzProblem
    {
        IterationMode mode = IterationMode::Simplified;
        double omega = 0.0;
        double eta = 0.0;
        int m = 1;
        bool corrected = false;
        StepPlan plan;

        DiscreteLaplacian L; // Simplified / General / Damped

        std::vector<double> fR, fI;

        // impedance data
        Grid1D grid{0.0, 1.0, 3};
        WaveSpeedField c;
        BoundarySpec bc;
        bool use_extension = true;
        int margin_cells = 2;
        ExtendedProblem ep;          // precomputed widened problem
        DiscreteLaplacian L_ext;     // Neumann operator on the widened grid

        int dofs() const
        {
            if (mode == IterationMode::Impedance)
                return grid.n_nodes;
            return L.dofs();
        }

        int comps() const
        {
            switch (mode)
            {
            case IterationMode::Simplified:
                return 1;
            case IterationMode::Damped:
                return 4;
            default:
                return 2;
            }
        }

        IterateVec zero_iterate() const { return IterateVec::zeros(dofs(), comps()); }
    };

    inline WaveHoltzProblem make_simplified(const DiscreteLaplacian& L, double omega,
                                            std::vector<double> f, const StepPlan& plan, int m = 1,
                                            bool corrected = false)
    {
        WaveHoltzProblem p;
        p.mode = IterationMode::Simplified;
        p.L = L;
        p.omega = omega;
        p.fR = std::move(f);
        p.plan = plan;
        p.m = m;
        p.corrected = corrected;
        if ((int)p.fR.size() != L.dofs())
            throw std::invalid_argument("make_simplified: forcing does not match the operator");
        return p;
    }

    inline WaveHoltzProblem make_general(const DiscreteLaplacian& L, double omega,
                                         std::vector<double> fR, std::vector<double> fI,
                                         const StepPlan& plan)
    {
        WaveHoltzProblem p;
        p.mode = IterationMode::General;
        p.L = L;
        p.omega = omega;
        p.fR = std::move(fR);
        p.fI = std::move(fI);
        p.plan = plan;
        if ((int)p.fR.size() != L.dofs() || (!p.fI.empty() && (int)p.fI.size() != L.dofs()))
            throw std::invalid_argument("make_general: forcing does not match the operator");
        return p;
    }

    inline WaveHoltzProblem make_damped(const DiscreteLaplacian& L, double omega, double eta,
                                        std::vector<double> fR, std::vector<double> fI,
                                        const StepPlan& plan)
    {
        WaveHoltzProblem p = make_general(L, omega, std::move(fR), std::move(fI), plan);
        p.mode = IterationMode::Damped;
        p.eta = eta;
        if (!(eta > 0.0))
            throw std::invalid_argument("make_damped: need eta > 0");
        return p;
    }

    inline WaveHoltzProblem make_impedance(const Grid1D& g, const WaveSpeedField& c,
                                           const BoundarySpec& bc, double omega,
                                           std::vector<double> fR, std::vector<double> fI,
                                           double cfl_fraction = 0.9, bool use_extension = true,
                                           int margin_cells = 2)
    {
        WaveHoltzProblem p;
        p.mode = IterationMode::Impedance;
        p.grid = g;
        p.c = c;
        p.bc = bc;
        p.omega = omega;
        p.fR = std::move(fR);
        p.fI = std::move(fI);
        p.use_extension = use_extension;
        p.margin_cells = margin_cells;
        if ((int)p.fR.size() != g.n_nodes || (!p.fI.empty() && (int)p.fI.size() != g.n_nodes))
            throw std::invalid_argument("make_impedance: forcing does not match the grid");

        const double T = 2.0 * M_PI / omega;
        std::vector<double> zero(g.n_nodes, 0.0);
        std::vector<double> fI_full = p.fI.empty() ? zero : p.fI;
        p.ep = extend_problem(g, c, bc, zero, zero, p.fR, T, margin_cells);
        // the imaginary forcing rides along on the same widened grid
        {
            ExtendedProblem epi = extend_problem(g, c, bc, zero, zero, fI_full, T, margin_cells);
            p.ep.v1 = std::move(epi.f); // stash extended Im f; v1 slot is otherwise unused here
        }
        p.L_ext = build_laplacian_1d(p.ep.grid, p.ep.c, p.ep.bc);

        // time step: use the widened operator in extension mode (it has the
        // larger exterior wave speed), the sharper of the two otherwise
        StepPlan pe = stable_dt(p.L_ext, omega, cfl_fraction);
        p.plan = pe;
        return p;
    }

    namespace detail
    {
        template <class Op>
        void run_simplified(const WaveHoltzProblem& p, const Op& L, std::span<const double> f,
                            std::span<const double> v, std::span<double> acc)
        {
            double omega_force = p.omega;
            FilterKernel kernel = FilterKernel::standard(p.omega, p.plan);
            if (p.corrected)
            {
                const double ob = corrected_frequency(p.omega, p.plan.dt, p.m).value;
                kernel = FilterKernel::corrected(p.omega, ob, p.plan);
                omega_force = ob;
            }

            MEStepper<Op> st(L, f, p.omega, omega_force, p.m, p.plan.dt);
            std::vector<double> w(v.begin(), v.end());
            std::vector<double> wprev = st.back_step(w);

            const int n = L.dofs();
            for (int i = 0; i < n; ++i)
                acc[i] = kernel.sigma[0] * w[i];
            for (int nn = 1; nn <= p.plan.M; ++nn)
            {
                st.step(wprev, w, (nn - 1) * p.plan.dt);
                const double s = kernel.sigma[nn];
                for (int i = 0; i < n; ++i)
                    acc[i] += s * w[i];
                if (nn % 64 == 0)
                    check_finite(w, nn);
            }
            check_finite(acc, p.plan.M);
        }

        template <class System>
        void run_pair(const WaveHoltzProblem& p, const System& sys, std::span<const double> v0,
                      std::span<const double> v1, std::span<double> acc0, std::span<double> acc1)
        {
            const FilterKernel kernel = FilterKernel::standard(p.omega, p.plan);
            const int n = sys.dofs();

            FirstOrderState y{std::vector<double>(v0.begin(), v0.end()),
                              std::vector<double>(v1.begin(), v1.end())};
            std::vector<FirstOrderState> work;

            for (int i = 0; i < n; ++i)
            {
                acc0[i] = kernel.sigma[0] * y.w[i];
                acc1[i] = kernel.sigma[0] * y.wt[i];
            }
            for (int nn = 1; nn <= p.plan.M; ++nn)
            {
                first_order_step(y, sys, (nn - 1) * p.plan.dt, p.plan.dt, work);
                const double s = kernel.sigma[nn];
                for (int i = 0; i < n; ++i)
                {
                    acc0[i] += s * y.w[i];
                    acc1[i] += s * y.wt[i];
                }
                if (nn % 64 == 0)
                    check_finite(y.w, nn);
            }
            check_finite(acc0, p.plan.M);
            check_finite(acc1, p.plan.M);
        }

        /// evolve one real damped field and accumulate both exponential-filter
        /// quadratures (cos and sin) of (w, w_t)
        template <class System>
        void run_damped_leg(const WaveHoltzProblem& p, const System& sys, std::span<const double> v0,
                            std::span<const double> v1, std::span<double> acc_c0,
                            std::span<double> acc_s0, std::span<double> acc_c1,
                            std::span<double> acc_s1)
        {
            const int n = sys.dofs();
            const double wT = p.plan.dt / p.plan.T;

            FirstOrderState y{std::vector<double>(v0.begin(), v0.end()),
                              std::vector<double>(v1.begin(), v1.end())};
            std::vector<FirstOrderState> work;

            auto accumulate = [&](int nn) {
                const double t = nn * p.plan.dt;
                const double etaw = (nn == 0 || nn == p.plan.M) ? 0.5 : 1.0;
                const double cw = wT * etaw * std::cos(p.omega * t);
                const double sw = wT * etaw * std::sin(p.omega * t);
                for (int i = 0; i < n; ++i)
                {
                    acc_c0[i] += cw * y.w[i];
                    acc_s0[i] += sw * y.w[i];
                    acc_c1[i] += cw * y.wt[i];
                    acc_s1[i] += sw * y.wt[i];
                }
            };

            accumulate(0);
            for (int nn = 1; nn <= p.plan.M; ++nn)
            {
                first_order_step(y, sys, (nn - 1) * p.plan.dt, p.plan.dt, work);
                accumulate(nn);
                if (nn % 64 == 0)
                    check_finite(y.w, nn);
            }
        }
    } // namespace detail

    /// one application of the time-filtered evolution operator Pi; with
    /// with_forcing = false this is the linear part S
    inline IterateVec apply_pi(const WaveHoltzProblem& p, const IterateVec& v,
                               bool with_forcing = true)
    {
        if (v.n != p.dofs() || v.comps != p.comps())
            throw std::invalid_argument("apply_pi: iterate does not match the problem");

        IterateVec out = p.zero_iterate();
        static const std::vector<double> empty;

        switch (p.mode)
        {
        case IterationMode::Simplified:
        {
            std::vector<double> zero;
            std::span<const double> f(p.fR);
            if (!with_forcing)
            {
                zero.assign(p.dofs(), 0.0);
                f = zero;
            }
            detail::run_simplified(p, p.L, f, v.comp(0), out.comp(0));
            break;
        }
        case IterationMode::General:
        {
            FirstOrderSystem<DiscreteLaplacian> sys{&p.L, 0.0, p.omega,
                                                    with_forcing ? std::span<const double>(p.fR)
                                                                 : std::span<const double>(),
                                                    with_forcing ? std::span<const double>(p.fI)
                                                                 : std::span<const double>()};
            detail::run_pair(p, sys, v.comp(0), v.comp(1), out.comp(0), out.comp(1));
            break;
        }
        case IterationMode::Damped:
        {
            const int n = p.dofs();
            std::vector<double> negfR(n, 0.0), fI_full(n, 0.0);
            if (with_forcing)
            {
                for (int i = 0; i < n; ++i)
                    negfR[i] = -p.fR[i];
                if (!p.fI.empty())
                    fI_full = p.fI;
            }

            // real part forced by Re{f e^{-i omega t}}, imaginary part by Im{...}
            FirstOrderSystem<DiscreteLaplacian> sysR{&p.L, p.eta, p.omega,
                                                     with_forcing ? std::span<const double>(p.fR)
                                                                  : std::span<const double>(),
                                                     with_forcing ? std::span<const double>(fI_full)
                                                                  : std::span<const double>()};
            FirstOrderSystem<DiscreteLaplacian> sysI{&p.L, p.eta, p.omega,
                                                     with_forcing ? std::span<const double>(fI_full)
                                                                  : std::span<const double>(),
                                                     with_forcing ? std::span<const double>(negfR)
                                                                  : std::span<const double>()};

            std::vector<double> cR0(n, 0.0), sR0(n, 0.0), cR1(n, 0.0), sR1(n, 0.0);
            std::vector<double> cI0(n, 0.0), sI0(n, 0.0), cI1(n, 0.0), sI1(n, 0.0);
            detail::run_damped_leg(p, sysR, v.comp(0), v.comp(2), cR0, sR0, cR1, sR1);
            detail::run_damped_leg(p, sysI, v.comp(1), v.comp(3), cI0, sI0, cI1, sI1);

            // (1/T) int e^{i omega t} (w_R + i w_I) dt, for the state and its velocity
            auto o0R = out.comp(0);
            auto o0I = out.comp(1);
            auto o1R = out.comp(2);
            auto o1I = out.comp(3);
            for (int i = 0; i < n; ++i)
            {
                o0R[i] = cR0[i] - sI0[i];
                o0I[i] = cI0[i] + sR0[i];
                o1R[i] = cR1[i] - sI1[i];
                o1I[i] = cI1[i] + sR1[i];
            }
            check_finite(out.data, p.plan.M);
            break;
        }
        case IterationMode::Impedance:
        {
            if (p.use_extension)
            {
                const int ne = p.ep.grid.n_nodes;
                std::vector<double> v0e(ne, 0.0), v1e(ne, 0.0);
                auto v0 = v.comp(0);
                auto v1 = v.comp(1);
                for (int i = 0; i < p.ep.i0; ++i)
                    v0e[i] = v0.front();
                for (int i = 0; i < p.ep.n_orig; ++i)
                {
                    v0e[p.ep.i0 + i] = v0[i];
                    v1e[p.ep.i0 + i] = v1[i];
                }
                for (int i = p.ep.i0 + p.ep.n_orig; i < ne; ++i)
                    v0e[i] = v0.back();

                FirstOrderSystem<DiscreteLaplacian> sys{
                    &p.L_ext, 0.0, p.omega,
                    with_forcing ? std::span<const double>(p.ep.f) : std::span<const double>(),
                    with_forcing ? std::span<const double>(p.ep.v1) : std::span<const double>()};

                std::vector<double> a0(ne, 0.0), a1(ne, 0.0);
                detail::run_pair(p, sys, v0e, v1e, a0, a1);
                auto r0 = restrict_field(p.ep, a0);
                auto r1 = restrict_field(p.ep, a1);
                std::copy(r0.begin(), r0.end(), out.comp(0).begin());
                std::copy(r1.begin(), r1.end(), out.comp(1).begin());
            }
            else
            {
                ImpedanceFirstOrderSystem sys(p.grid, p.c, p.bc);
                sys.omega = p.omega;
                if (with_forcing)
                {
                    sys.fc = p.fR;
                    if (!p.fI.empty())
                        sys.fs = p.fI;
                }
                detail::run_pair(p, sys, v.comp(0), v.comp(1), out.comp(0), out.comp(1));
            }
            break;
        }
        }
        return out;
    }

    inline IterateVec apply_S(const WaveHoltzProblem& p, const IterateVec& v)
    {
        return apply_pi(p, v, false);
    }

    /// right-hand side of the affine form: b = Pi(0)
    inline IterateVec compute_rhs(const WaveHoltzProblem& p)
    {
        return apply_pi(p, p.zero_iterate(), true);
    }

    /// A v = (I - S) v, the matrix-free operator handed to Krylov solvers
    inline IterateVec apply_A(const WaveHoltzProblem& p, const IterateVec& v)
    {
        IterateVec Sv = apply_S(p, v);
        IterateVec out = v;
        for (std::size_t i = 0; i < out.data.size(); ++i)
            out.data[i] -= Sv.data[i];
        return out;
    }

    struct IterationLog
    {
        std::vector<double> residuals; // successive-difference norms
        bool converged = false;
        int iterations = 0;
        double rate = 0.0; // geometric tail fit of the residuals
    };

    struct FixedPointResult
    {
        IterateVec v;
        IterationLog log;
    };

    inline double tail_rate(const std::vector<double>& resid, int window = 10)
    {
        const int k = std::min<int>(window, (int)resid.size());
        if (k < 2)
            return 0.0;
        // least-squares slope of log(residual) over the tail
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int i = (int)resid.size() - k; i < (int)resid.size(); ++i)
        {
            if (!(resid[i] > 0.0))
                continue;
            const double x = i, y = std::log(resid[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++cnt;
        }
        if (cnt < 2)
            return 0.0;
        return std::exp((cnt * sxy - sx * sy) / (cnt * sxx - sx * sx));
    }

    inline FixedPointResult fixed_point_solve(const WaveHoltzProblem& p, double tol = 1e-13,
                                              int max_iter = 1000)
    {
        FixedPointResult r;
        r.v = p.zero_iterate();
        for (int it = 1; it <= max_iter; ++it)
        {
            IterateVec next = apply_pi(p, r.v, true);
            const double d = dist(next, r.v);
            if (!std::isfinite(d)) // norm overflow: the evolution is running away
                throw instability_error(it);
            r.log.residuals.push_back(d);
            r.v = std::move(next);
            r.log.iterations = it;
            if (d <= tol * std::max(r.v.norm(), 1e-300))
            {
                r.log.converged = true;
                break;
            }
        }
        r.log.rate = tail_rate(r.log.residuals);
        return r;
    }

    /// complex Helmholtz solution recovered from a converged iterate
    inline std::vector<std::complex<double>> reconstruct_solution(const WaveHoltzProblem& p,
                                                                  const IterateVec& v)
    {
        const int n = p.dofs();
        std::vector<std::complex<double>> u(n);
        switch (p.mode)
        {
        case IterationMode::Simplified:
            for (int i = 0; i < n; ++i)
                u[i] = v.comp(0)[i];
            break;
        case IterationMode::Damped:
            for (int i = 0; i < n; ++i)
                u[i] = {v.comp(0)[i], v.comp(1)[i]};
            break;
        default: // (Re u, omega Im u) pair
            for (int i = 0; i < n; ++i)
                u[i] = {v.comp(0)[i], v.comp(1)[i] / p.omega};
            break;
        }
        return u;
    }
} // namespace wh

#endif
