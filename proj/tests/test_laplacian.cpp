#include <gtest/gtest.h>

#include "wh/eig.hpp"
#include "wh/laplacian.hpp"

#include "test_helpers.hpp"

namespace
{
    std::vector<double> dense(const wh::DiscreteLaplacian& L)
    {
        const int n = L.dofs();
        std::vector<double> A(std::size_t(n) * n), e(n, 0.0), col(n);
        for (int j = 0; j < n; ++j)
        {
            e[j] = 1.0;
            L.apply(e, col);
            e[j] = 0.0;
            for (int i = 0; i < n; ++i)
                A[std::size_t(i) * n + j] = col[i];
        }
        return A;
    }
} // namespace

TEST(Laplacian1D, DirichletConstantCoefficientRow)
{
    // interior row of the constant-c stencil is c^2 (-1, 2, -1)/h^2
    wh::Grid1D g(0.0, 1.0, 11);
    auto c = wh::WaveSpeedField::constant(g, 2.0);
    auto L = wh::build_laplacian_1d(g, c, wh::BoundarySpec::dirichlet_1d());
    ASSERT_EQ(L.dofs(), 9);

    std::vector<double> x(9, 0.0), y(9);
    x[4] = 1.0;
    L.apply(x, y);
    const double ih2 = 1.0 / (g.h * g.h);
    EXPECT_NEAR(y[4], 2.0 * 4.0 * ih2, 1e-9);
    EXPECT_NEAR(y[3], -4.0 * ih2, 1e-9);
    EXPECT_NEAR(y[5], -4.0 * ih2, 1e-9);
    EXPECT_NEAR(y[2], 0.0, 1e-12);
}

TEST(Laplacian1D, SymmetricForVariableCoefficients)
{
    wh::Grid1D g(0.0, 2.0, 41);
    auto c = wh::WaveSpeedField::from_function(g, [](double x) { return 1.0 + 0.5 * std::sin(3.0 * x); });

    for (auto bcpair : {std::pair{wh::BcType::Dirichlet, wh::BcType::Dirichlet},
                        std::pair{wh::BcType::Neumann, wh::BcType::Neumann},
                        std::pair{wh::BcType::Dirichlet, wh::BcType::Neumann}})
    {
        auto L = wh::build_laplacian_1d(g, c, wh::BoundarySpec::mixed_1d(bcpair.first, bcpair.second));
        auto A = dense(L);
        const int n = L.dofs();
        double asym = 0.0, scale = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                asym = std::max(asym, std::abs(A[i * n + j] - A[j * n + i]));
                scale = std::max(scale, std::abs(A[i * n + j]));
            }
        EXPECT_LE(asym, 1e-12 * scale);
    }
}

TEST(Laplacian1D, PositiveSemiDefiniteAndNeumannKernel)
{
    wh::Grid1D g(0.0, 1.0, 33);
    auto c = wh::WaveSpeedField::from_function(g, [](double x) { return 1.0 + x; });

    auto Ld = wh::build_laplacian_1d(g, c, wh::BoundarySpec::dirichlet_1d());
    auto Ln = wh::build_laplacian_1d(g, c, wh::BoundarySpec::neumann_1d());

    for (unsigned seed : {1u, 2u, 3u, 4u, 5u})
    {
        auto x = wht::random_vector(Ld.dofs(), seed);
        std::vector<double> y(Ld.dofs());
        Ld.apply(x, y);
        double q = 0.0;
        for (int i = 0; i < Ld.dofs(); ++i)
            q += x[i] * y[i];
        EXPECT_GT(q, 0.0);
    }

    // constants are in the Neumann kernel
    std::vector<double> ones(Ln.dofs(), 1.0), y(Ln.dofs());
    Ln.apply(ones, y);
    EXPECT_LE(wht::l2(y), 1e-11);
}

TEST(Laplacian1D, DirichletAnalyticEigenvalues)
{
    // constant-c Dirichlet eigenvalues are (2c/h)^2 sin^2(j pi h / 2) on the unit interval
    wh::Grid1D g(0.0, 1.0, 33);
    const double cc = 1.5;
    auto c = wh::WaveSpeedField::constant(g, cc);
    auto L = wh::build_laplacian_1d(g, c, wh::BoundarySpec::dirichlet_1d());
    auto d = wh::eig_small(L);

    const int n = L.dofs();
    for (int j = 1; j <= n; ++j)
    {
        const double s = std::sin(0.5 * j * M_PI * g.h);
        const double lam2 = 4.0 * cc * cc / (g.h * g.h) * s * s;
        EXPECT_NEAR(d.lambda2[j - 1], lam2, 1e-8 * lam2);
    }
}

TEST(Laplacian1D, ConsistencyOrderTwo)
{
    // stencil error against -(c^2 u')' for smooth u and c shrinks at h^2
    auto u = [](double x) { return std::sin(2.0 * x) + 0.25 * std::cos(5.0 * x); };
    auto lu = [](double x) {
        // -(c^2 u')' with c = 1 + x/2: c^2 u'' + 2 c c' u', c' = 1/2
        const double c = 1.0 + 0.5 * x;
        const double up = 2.0 * std::cos(2.0 * x) - 1.25 * std::sin(5.0 * x);
        const double upp = -4.0 * std::sin(2.0 * x) - 6.25 * std::cos(5.0 * x);
        return -(c * c * upp + c * up);
    };

    double prev = 0.0;
    for (int k = 0; k < 3; ++k)
    {
        const int n = 41 << k;
        wh::Grid1D g(0.2, 1.2, n);
        auto c = wh::WaveSpeedField::from_function(g, [](double x) { return 1.0 + 0.5 * x; });
        auto L = wh::build_laplacian_1d(g, c, wh::BoundarySpec::dirichlet_1d());

        std::vector<double> x(L.dofs()), y(L.dofs());
        for (int i = 0; i < L.dofs(); ++i)
            x[i] = u(g.node(i + 1));
        L.apply(x, y);

        double err = 0.0;
        // skip the rows touching the (inhomogeneous Dirichlet) boundary
        for (int i = 1; i + 1 < L.dofs(); ++i)
            err = std::max(err, std::abs(y[i] - lu(g.node(i + 1))));
        if (k > 0)
            EXPECT_NEAR(prev / err, 4.0, 0.5);
        prev = err;
    }
}

TEST(Laplacian2D, SymmetryKernelAndGershgorin)
{
    wh::Grid2D g(0.0, 1.0, 0.0, 2.0, 9, 11);
    auto c = wh::WaveSpeedField2D::from_function(g, [](double x, double y) { return 1.0 + 0.3 * x + 0.2 * y; });

    for (auto t : {wh::BcType::Dirichlet, wh::BcType::Neumann})
    {
        auto L = wh::build_laplacian_2d(g, c, wh::BoundarySpec::uniform_2d(t));
        auto A = dense(L);
        const int n = L.dofs();
        double asym = 0.0, scale = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                asym = std::max(asym, std::abs(A[i * n + j] - A[j * n + i]));
                scale = std::max(scale, std::abs(A[i * n + j]));
            }
        EXPECT_LE(asym, 1e-12 * scale);

        auto d = wh::eig_small(L);
        EXPECT_GE(d.lambda2.front(), -1e-10 * d.lambda2.back());
        EXPECT_LE(d.lambda2.back(), L.gershgorin_bound() * (1.0 + 1e-12));
        if (t == wh::BcType::Neumann)
            EXPECT_LE(std::abs(d.lambda2.front()), 1e-9);
    }
}

TEST(Laplacian2D, DirichletAnalyticEigenvaluesConstantC)
{
    // unit square, c = 1: lambda_{jk}^2 = (2/h)^2 (sin^2(j pi h/2) + sin^2(k pi h/2))
    wh::Grid2D g(0.0, 1.0, 0.0, 1.0, 9, 9);
    auto c = wh::WaveSpeedField2D::constant(g, 1.0);
    auto L = wh::build_laplacian_2d(g, c, wh::BoundarySpec::uniform_2d(wh::BcType::Dirichlet));
    auto d = wh::eig_small(L);

    std::vector<double> expect;
    const double h = g.hx;
    for (int j = 1; j <= 8 - 1; ++j)
        for (int k = 1; k <= 8 - 1; ++k)
        {
            const double sj = std::sin(0.5 * j * M_PI * h), sk = std::sin(0.5 * k * M_PI * h);
            expect.push_back(4.0 / (h * h) * (sj * sj + sk * sk));
        }
    std::sort(expect.begin(), expect.end());
    ASSERT_EQ((int)expect.size(), L.dofs());
    for (int i = 0; i < L.dofs(); ++i)
        EXPECT_NEAR(d.lambda2[i], expect[i], 1e-8 * expect[i]);
}

TEST(Laplacian, RejectsImpedanceSides)
{
    wh::Grid1D g(0.0, 1.0, 9);
    auto c = wh::WaveSpeedField::constant(g, 1.0);
    EXPECT_THROW(wh::build_laplacian_1d(g, c, wh::BoundarySpec::impedance_1d(M_SQRT1_2, M_SQRT1_2)),
                 std::invalid_argument);
}
