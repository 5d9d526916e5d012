#ifndef WH_TIMESTEP_HPP
#define WH_TIMESTEP_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "laplacian.hpp"
#include "modfreq.hpp"

namespace wh
{
    struct instability_error : std::runtime_error
    {
        int step;
        explicit instability_error(int step_)
            : std::runtime_error("time stepping produced a non-finite value at step " + std::to_string(step_)),
              step(step_)
        {
        }
    };

    /// one period T = 2 pi / omega resolved with M uniform steps, dt = T / M
    struct StepPlan
    {
        double T = 0.0;
        double dt = 0.0;
        int M = 0;
        bool dt_omega_ok = true; // dt * omega <= 1, needed by the sharp filter estimates
    };

    inline StepPlan plan_period(double omega, double dt_target);

    /// pick dt below the stability limit 2 / (lambda_N + 2 omega / pi), using
    /// the Gershgorin bound for lambda_N, then round M up so dt divides T exactly
    template <class Op>
    StepPlan stable_dt(const Op& L, double omega, double cfl_fraction = 0.9)
    {
        if (!(omega > 0.0) || !(cfl_fraction > 0.0) || cfl_fraction > 1.0)
            throw std::invalid_argument("stable_dt: need omega > 0 and cfl_fraction in (0, 1]");
        const double lamN = std::sqrt(L.gershgorin_bound());
        const double dt_max = 2.0 / (lamN + 2.0 * omega / M_PI);
        return plan_period(omega, cfl_fraction * dt_max);
    }

    inline StepPlan plan_period(double omega, double dt_target)
    {
        StepPlan p;
        p.T = 2.0 * M_PI / omega;
        p.M = std::max(3, (int)std::ceil(p.T / dt_target - 1e-12));
        p.dt = p.T / p.M;
        p.dt_omega_ok = p.dt * omega <= 1.0 + 1e-12;
        return p;
    }

    /// starting value w^{-1} for the two-step scheme of order 2m:
    /// w^{-1} = v + sum_{k=1}^m ((-1)^k dt^{2k} / (2k)!) [L^k v + sum_{l=0}^{k-1} omega^{2(k-l-1)} L^l f]
    template <class Op>
    std::vector<double> me_initial_back_step(std::span<const double> v, std::span<const double> f,
                                             double omega, int m, double dt, const Op& L)
    {
        const int n = L.dofs();
        std::vector<double> w(v.begin(), v.end());
        std::vector<double> Lkv(v.begin(), v.end());
        std::vector<double> S(f.begin(), f.end());   // S_k = sum_{l=0}^{k-1} omega^{2(k-l-1)} L^l f
        std::vector<double> Lkf(f.begin(), f.end());
        std::vector<double> tmp(n);

        double dt2k = 1.0;
        for (int k = 1; k <= m; ++k)
        {
            dt2k *= dt * dt;
            const double ck = ((k % 2 == 0) ? 1.0 : -1.0) * dt2k / detail::factorial(2 * k);

            L.apply(Lkv, tmp);
            Lkv.swap(tmp);
            for (int i = 0; i < n; ++i)
                w[i] += ck * (Lkv[i] + S[i]);

            if (k < m)
            {
                // S_{k+1} = omega^2 S_k + L^k f
                L.apply(Lkf, tmp);
                Lkf.swap(tmp);
                for (int i = 0; i < n; ++i)
                    S[i] = omega * omega * S[i] + Lkf[i];
            }
        }
        return w;
    }

    /// modified-equation two-step scheme of order 2m for w_tt = -L w - f cos(omega_force t).
    /// Per step:
    ///   w^{n+1} = 2 w^n - w^{n-1} + sum_k c_k L^k w^n + cos(omega_force t_n) g,
    ///   c_k = 2 (-1)^k dt^{2k} / (2k)!,
    ///   g   = sum_k c_k sum_{l=0}^{k-1} omega^{2(k-l-1)} L^l f
    /// with the Helmholtz omega in the correction coefficients even when the
    /// forcing oscillates at a corrected frequency.
    template <class Op>
    class MEStepper
    {
    public:
        MEStepper(const Op& L, std::span<const double> f, double omega, double omega_force, int m,
                  double dt)
            : L_(&L), m_(m), dt_(dt), omega_force_(omega_force), n_(L.dofs()), tmp_(L.dofs()),
              tmp2_(L.dofs())
        {
            if (m < 1)
                throw std::invalid_argument("MEStepper: need m >= 1");
            ck_.resize(m + 1, 0.0);
            double dt2k = 1.0;
            for (int k = 1; k <= m; ++k)
            {
                dt2k *= dt * dt;
                ck_[k] = 2.0 * ((k % 2 == 0) ? 1.0 : -1.0) * dt2k / detail::factorial(2 * k);
            }

            g_.assign(n_, 0.0);
            has_forcing_ = false;
            for (double v : f)
                if (v != 0.0)
                    has_forcing_ = true;
            if (has_forcing_)
            {
                // chain S_k = sum_{l=0}^{k-1} omega^{2(k-l-1)} L^l f, S_1 = f,
                // S_{k+1} = omega^2 S_k + L^k f
                std::vector<double> S(f.begin(), f.end());
                std::vector<double> Lkf(f.begin(), f.end());
                for (int k = 1; k <= m; ++k)
                {
                    for (int i = 0; i < n_; ++i)
                        g_[i] += ck_[k] * S[i];
                    if (k < m)
                    {
                        L_->apply(Lkf, tmp_);
                        Lkf.swap(tmp_);
                        for (int i = 0; i < n_; ++i)
                            S[i] = omega * omega * S[i] + Lkf[i];
                    }
                }
            }
        }

        /// w^{-1} consistent with w(0) = v (uses the same coefficient tables:
        /// the back step is v + (sum_k c_k L^k v + g) / 2)
        std::vector<double> back_step(std::span<const double> v) const
        {
            std::vector<double> w(v.begin(), v.end());
            std::vector<double> Lkv(v.begin(), v.end());
            for (int k = 1; k <= m_; ++k)
            {
                L_->apply(Lkv, tmp_);
                Lkv.swap(tmp_);
                for (int i = 0; i < n_; ++i)
                    w[i] += 0.5 * ck_[k] * Lkv[i];
            }
            for (int i = 0; i < n_; ++i)
                w[i] += 0.5 * g_[i];
            return w;
        }

        /// advance (w^{n-1}, w^n) -> (w^n, w^{n+1}) in place, given t_n
        void step(std::vector<double>& w_prev, std::vector<double>& w, double t_n) const
        {
            const double cf = has_forcing_ ? std::cos(omega_force_ * t_n) : 0.0;
            for (int i = 0; i < n_; ++i)
                w_prev[i] = 2.0 * w[i] - w_prev[i] + cf * g_[i];
            std::copy(w.begin(), w.end(), tmp2_.begin());
            for (int k = 1; k <= m_; ++k)
            {
                L_->apply(tmp2_, tmp_);
                tmp2_.swap(tmp_);
                for (int i = 0; i < n_; ++i)
                    w_prev[i] += ck_[k] * tmp2_[i];
            }
            w.swap(w_prev);
        }

        int dofs() const { return n_; }

    private:
        const Op* L_;
        int m_;
        double dt_;
        double omega_force_;
        int n_;
        bool has_forcing_ = false;
        std::vector<double> ck_;
        std::vector<double> g_;
        mutable std::vector<double> tmp_, tmp2_;
    };

    /// first-order-form state (w, w_t) for the fourth-order Runge-Kutta path
    struct FirstOrderState
    {
        std::vector<double> w;
        std::vector<double> wt;
    };

    /// w_tt + eta w_t = -L w - (fc cos(omega t) + fs sin(omega t)) on the dofs
    /// of a Dirichlet/Neumann operator
    template <class Op>
    struct FirstOrderSystem
    {
        const Op* L;
        double eta = 0.0;
        double omega = 0.0;
        std::span<const double> fc; // may be empty
        std::span<const double> fs; // may be empty

        int dofs() const { return L->dofs(); }

        void rhs(double t, const FirstOrderState& y, FirstOrderState& dy) const
        {
            const int n = dofs();
            std::copy(y.wt.begin(), y.wt.end(), dy.w.begin());
            L->apply(y.w, dy.wt);
            for (int i = 0; i < n; ++i)
                dy.wt[i] = -dy.wt[i] - eta * y.wt[i];
            if (!fc.empty())
            {
                const double cf = std::cos(omega * t);
                for (int i = 0; i < n; ++i)
                    dy.wt[i] -= cf * fc[i];
            }
            if (!fs.empty())
            {
                const double sf = std::sin(omega * t);
                for (int i = 0; i < n; ++i)
                    dy.wt[i] -= sf * fs[i];
            }
        }
    };

    /// 1D wave equation in first-order form on all grid nodes with impedance
    /// sides closed characteristically: the boundary rows of the w_t equation
    /// use w_tt = +-(beta/alpha) c (w_t)_x with one-sided second-order
    /// differences, which is the time derivative of the boundary condition
    /// alpha w_t -+ beta c w_x = 0
    struct ImpedanceFirstOrderSystem
    {
        const Grid1D* grid;
        const WaveSpeedField* c;
        BoundarySpec bc;
        double eta = 0.0;
        double omega = 0.0;
        std::span<const double> fc;
        std::span<const double> fs;
        std::vector<double> a; // interior interface coefficients c_{i+1/2}^2

        ImpedanceFirstOrderSystem(const Grid1D& g, const WaveSpeedField& cs, const BoundarySpec& bc_)
            : grid(&g), c(&cs), bc(bc_)
        {
            bc.validate();
            if (bc.side[0].type != BcType::Impedance || bc.side[1].type != BcType::Impedance)
                throw std::invalid_argument("ImpedanceFirstOrderSystem: both sides must be impedance");
            a.resize(g.n_nodes - 1);
            for (int i = 0; i + 1 < g.n_nodes; ++i)
                a[i] = cs.c_mid[i] * cs.c_mid[i];
        }

        int dofs() const { return grid->n_nodes; }

        void rhs(double t, const FirstOrderState& y, FirstOrderState& dy) const
        {
            const int n = grid->n_nodes;
            const double ih2 = 1.0 / (grid->h * grid->h);
            std::copy(y.wt.begin(), y.wt.end(), dy.w.begin());
            for (int i = 1; i + 1 < n; ++i)
                dy.wt[i] = -(-a[i - 1] * y.w[i - 1] + (a[i - 1] + a[i]) * y.w[i] - a[i] * y.w[i + 1]) * ih2 -
                           eta * y.wt[i];
            if (!fc.empty())
            {
                const double cf = std::cos(omega * t);
                for (int i = 1; i + 1 < n; ++i)
                    dy.wt[i] -= cf * fc[i];
            }
            if (!fs.empty())
            {
                const double sf = std::sin(omega * t);
                for (int i = 1; i + 1 < n; ++i)
                    dy.wt[i] -= sf * fs[i];
            }

            const double i2h = 1.0 / (2.0 * grid->h);
            const double kl = bc.side[0].beta / bc.side[0].alpha * c->c.front();
            const double kr = bc.side[1].beta / bc.side[1].alpha * c->c.back();
            dy.wt[0] = kl * (-3.0 * y.wt[0] + 4.0 * y.wt[1] - y.wt[2]) * i2h;
            dy.wt[n - 1] = -kr * (3.0 * y.wt[n - 1] - 4.0 * y.wt[n - 2] + y.wt[n - 3]) * i2h;
        }
    };

    /// classical fourth-order Runge-Kutta step for any system exposing
    /// rhs(t, state, dstate)
    template <class System>
    void first_order_step(FirstOrderState& y, const System& sys, double t, double dt,
                          std::vector<FirstOrderState>& work)
    {
        const int n = sys.dofs();
        if ((int)work.size() != 5)
        {
            work.assign(5, FirstOrderState{std::vector<double>(n), std::vector<double>(n)});
        }
        FirstOrderState& k1 = work[0];
        FirstOrderState& k2 = work[1];
        FirstOrderState& k3 = work[2];
        FirstOrderState& k4 = work[3];
        FirstOrderState& ys = work[4];

        sys.rhs(t, y, k1);
        for (int i = 0; i < n; ++i)
        {
            ys.w[i] = y.w[i] + 0.5 * dt * k1.w[i];
            ys.wt[i] = y.wt[i] + 0.5 * dt * k1.wt[i];
        }
        sys.rhs(t + 0.5 * dt, ys, k2);
        for (int i = 0; i < n; ++i)
        {
            ys.w[i] = y.w[i] + 0.5 * dt * k2.w[i];
            ys.wt[i] = y.wt[i] + 0.5 * dt * k2.wt[i];
        }
        sys.rhs(t + 0.5 * dt, ys, k3);
        for (int i = 0; i < n; ++i)
        {
            ys.w[i] = y.w[i] + dt * k3.w[i];
            ys.wt[i] = y.wt[i] + dt * k3.wt[i];
        }
        sys.rhs(t + dt, ys, k4);
        for (int i = 0; i < n; ++i)
        {
            y.w[i] += dt / 6.0 * (k1.w[i] + 2.0 * k2.w[i] + 2.0 * k3.w[i] + k4.w[i]);
            y.wt[i] += dt / 6.0 * (k1.wt[i] + 2.0 * k2.wt[i] + 2.0 * k3.wt[i] + k4.wt[i]);
        }
    }

    inline void check_finite(std::span<const double> v, int step)
    {
        for (double x : v)
            if (!std::isfinite(x))
                throw instability_error(step);
    }
} // namespace wh

#endif
