#include <gtest/gtest.h>

#include <complex>

#include "wh/filter.hpp"

namespace
{
    // independent quadrature reference: (1/pi) int_0^{2pi} (cos t - 1/4) trig(r t) dt
    // by composite Simpson (the transfer functions at omega = 1)
    double simpson_filter(double r, bool cosine, int panels = 20000)
    {
        const double T = 2.0 * M_PI;
        const double h = T / panels;
        auto f = [&](double t) {
            const double k = std::cos(t) - 0.25;
            return k * (cosine ? std::cos(r * t) : std::sin(r * t));
        };
        double s = f(0.0) + f(T);
        for (int i = 1; i < panels; ++i)
            s += (i % 2 ? 4.0 : 2.0) * f(i * h);
        return s * h / 3.0 / M_PI;
    }
} // namespace

TEST(FilterTransfer, SpecialValues)
{
    EXPECT_NEAR(wh::beta_bar(1.0), 1.0, 1e-14);
    EXPECT_NEAR(wh::beta_bar(0.0), -0.5, 1e-14);
    EXPECT_NEAR(wh::gamma_bar(0.0), 0.0, 1e-14);
    EXPECT_NEAR(wh::gamma_bar(1.0), 0.0, 1e-14);

    const double mu_half_sq = wh::mu_bar_abs(0.5) * wh::mu_bar_abs(0.5);
    EXPECT_NEAR(mu_half_sq, 49.0 / (9.0 * M_PI * M_PI), 1e-12);

    const double mu_3half_sq = wh::mu_bar_abs(1.5) * wh::mu_bar_abs(1.5);
    EXPECT_LE(mu_3half_sq, 0.44);
}

TEST(FilterTransfer, MatchesQuadratureIncludingBranchSeams)
{
    for (double r : {1e-8, 1e-5, 1e-3, 0.1, 0.4999999, 0.5, 0.5000001, 0.9, 0.999999, 1.0,
                     1.000001, 1.3, 2.0, 5.75, 17.2})
    {
        EXPECT_NEAR(wh::beta_bar(r), simpson_filter(r, true), 1e-9) << "r = " << r;
        EXPECT_NEAR(wh::gamma_bar(r), simpson_filter(r, false), 1e-9) << "r = " << r;
    }
}

TEST(FilterTransfer, EnvelopeBoundsOnDenseGrid)
{
    std::vector<double> grid(20001);
    for (int i = 0; i <= 20000; ++i)
        grid[i] = 20.0 * i / 20000.0;
    auto rep = wh::check_filter_bounds(grid);
    EXPECT_EQ(rep.checked, 20001);
    EXPECT_TRUE(rep.ok()) << (rep.violations.empty()
                                  ? ""
                                  : rep.violations.front().which + " at r = " +
                                        std::to_string(rep.violations.front().r));

    EXPECT_THROW(wh::check_filter_bounds(std::vector<double>{-0.1}), std::invalid_argument);
}

TEST(FilterTransfer, LocalExpansionNearResonance)
{
    // |mu(1 + d)| = 1 - b1 d^2 + O(d^3), with the proved cubic remainder
    for (double d : {-0.05, -0.01, -1e-3, 1e-3, 0.01, 0.05})
    {
        const double mu = wh::mu_bar_abs(1.0 + d);
        const double expansion = 1.0 - wh::FilterConstants::b1_pair * d * d;
        EXPECT_LE(std::abs(mu - expansion),
                  wh::FilterConstants::remainder_pair * std::abs(d * d * d) + 1e-13);
    }
    // the quadratic coefficient itself
    const double d = 1e-3;
    EXPECT_NEAR((1.0 - wh::mu_bar_abs(1.0 + d)) / (d * d), wh::FilterConstants::b1_pair,
                0.05 * wh::FilterConstants::b1_pair);
    EXPECT_NEAR((1.0 - wh::beta_bar(1.0 + d)) / (d * d), wh::FilterConstants::b1_scalar,
                0.05 * wh::FilterConstants::b1_scalar);
}

TEST(DiscreteFilter, TrapezoidIsExactOnThePeriodicModes)
{
    const double omega = 3.0;
    wh::StepPlan plan = wh::plan_period(omega, 2.0 * M_PI / omega / 64.0);

    // filtering the driven oscillation cos(omega t) returns exactly 1,
    // and the sine quadrature of it vanishes
    EXPECT_NEAR(wh::discrete_beta(omega, omega, plan), 1.0, 1e-12);
    EXPECT_NEAR(wh::discrete_gamma(omega, omega, plan), 0.0, 1e-12);

    // kernel weights sum to the filtered constant: -1/2
    auto k = wh::FilterKernel::standard(omega, plan);
    double s = 0.0;
    for (double v : k.sigma)
        s += v;
    EXPECT_NEAR(s, -0.5, 1e-12);
}

TEST(DiscreteFilter, ApproachesTheContinuousTransferFunction)
{
    const double omega = 3.0;
    wh::StepPlan plan = wh::plan_period(omega, 2.0 * M_PI / omega / 4000.0);
    for (double r : {0.2, 0.8, 1.1, 2.7})
        EXPECT_NEAR(wh::discrete_beta(r * omega, omega, plan), wh::beta_bar(r), 1e-5) << r;
}

TEST(DiscreteFilter, CorrectedKernelGuardsAgainstVanishingCosine)
{
    // a quarter-period node lands within 1e-6 of the zero of cos(omega_bar t)
    const double omega = 1.0;
    wh::StepPlan plan;
    plan.T = 2.0 * M_PI;
    plan.M = 1652;
    plan.dt = plan.T / plan.M;
    const double omega_bar = wh::corrected_frequency(omega, plan.dt, 1).value;
    EXPECT_THROW(wh::FilterKernel::corrected(omega, omega_bar, plan), std::runtime_error);

    // a step count away from the quarter-period node is fine
    plan.M = 1650;
    plan.dt = plan.T / plan.M;
    const double ob2 = wh::corrected_frequency(omega, plan.dt, 1).value;
    EXPECT_NO_THROW(wh::FilterKernel::corrected(omega, ob2, plan));
}

TEST(DampedFilter, MatchesComplexQuadrature)
{
    using cplx = std::complex<double>;
    const double omega = 4.0, eta = 1.3, alpha = 3.7;
    const double T = 2.0 * M_PI / omega;

    const int panels = 40000;
    const double h = T / panels;
    cplx bq = 0.0, gq = 0.0;
    for (int i = 0; i <= panels; ++i)
    {
        const double t = i * h;
        const double wgt = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const cplx e = std::exp(cplx(-0.5 * eta * t, omega * t));
        bq += wgt * e * std::cos(alpha * t);
        gq += wgt * e * std::sin(alpha * t);
    }
    bq *= h / 3.0 / T;
    gq *= h / 3.0 / T;

    auto [bh, gh] = wh::damped_filter_values(alpha, omega, eta);
    EXPECT_NEAR(std::abs(bh - bq), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(gh - gq), 0.0, 1e-10);
}

TEST(DampedFilter, RateBoundBehaviour)
{
    const double omega = 10.0;
    double prev = 1.0;
    for (double eta : {omega / 8.0, omega / 4.0, omega / 2.0, omega})
    {
        const double b = wh::damped_rate_bound(omega, eta);
        EXPECT_GT(b, 0.0);
        EXPECT_LT(b, 1.0);
        EXPECT_LT(b, prev); // stronger damping contracts faster
        prev = b;
    }
    // eta = c omega makes the bound frequency independent
    EXPECT_NEAR(wh::damped_rate_bound(10.0, 5.0), wh::damped_rate_bound(40.0, 20.0), 1e-13);
    EXPECT_THROW(wh::damped_rate_bound(10.0, 0.0), std::invalid_argument);
}
