#include "tal/kernel.hpp"
#include "tal/velocity.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tal;

namespace {

// Exact integral of l0^a l1^b l2^c l3^d over a tet, as a fraction of its
// volume: a! b! c! d! 3! / (a + b + c + d + 3)!
double barycentric_moment(int a, int b, int c, int d)
{
    auto fact = [](int n) {
        double f = 1.0;
        for (int k = 2; k <= n; ++k)
            f *= k;
        return f;
    };
    return fact(a) * fact(b) * fact(c) * fact(d) * 6.0 / fact(a + b + c + d + 3);
}

std::array<Vec3, 4> random_tet(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (;;) {
        std::array<Vec3, 4> x;
        for (auto& p : x)
            for (double& v : p)
                v = d(rng);
        const ElementGeometry g = [&] {
            try {
                return element_geometry(x);
            } catch (const DegenerateElementError&) {
                return ElementGeometry{};
            }
        }();
        if (g.volume > 1e-3) {
            // element_geometry accepts either orientation; keep the positive one
            Vec3 e1, e2, e3;
            for (int i = 0; i < 3; ++i) {
                e1[i] = x[1][i] - x[0][i];
                e2[i] = x[2][i] - x[0][i];
                e3[i] = x[3][i] - x[0][i];
            }
            const double det = e1[0] * (e2[1] * e3[2] - e2[2] * e3[1]) - e1[1] * (e2[0] * e3[2] - e2[2] * e3[0]) +
                               e1[2] * (e2[0] * e3[1] - e2[1] * e3[0]);
            if (det < 0)
                std::swap(x[1], x[2]);
            return x;
        }
    }
}

double max_abs(const Mat3& m)
{
    double v = 0.0;
    for (const auto& r : m)
        for (double x : r)
            v = std::max(v, std::abs(x));
    return v;
}

} // namespace

TEST_CASE("quadrature rule structure")
{
    const QuadratureRule q = quadrature_tet4();
    double wsum = 0.0;
    for (int g = 0; g < 4; ++g) {
        double s = 0.0;
        for (double l : q.points[g])
            s += l;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
        wsum += q.weights[g];
    }
    CHECK(wsum == doctest::Approx(1.0));
    CHECK(kQuadA == doctest::Approx((5.0 + 3.0 * std::sqrt(5.0)) / 20.0).epsilon(1e-16));
    CHECK(kQuadB == doctest::Approx((5.0 - std::sqrt(5.0)) / 20.0).epsilon(1e-16));
}

TEST_CASE("quadrature integrates every barycentric monomial of degree <= 2 exactly")
{
    const QuadratureRule q = quadrature_tet4();
    int checked = 0;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; a + b <= 2; ++b)
            for (int c = 0; a + b + c <= 2; ++c)
                for (int d = 0; a + b + c + d <= 2; ++d) {
                    double sum = 0.0;
                    for (int g = 0; g < 4; ++g) {
                        const auto& l = q.points[g];
                        sum += q.weights[g] * std::pow(l[0], a) * std::pow(l[1], b) * std::pow(l[2], c) *
                               std::pow(l[3], d);
                    }
                    CAPTURE(a);
                    CAPTURE(b);
                    CAPTURE(c);
                    CAPTURE(d);
                    CHECK(std::abs(sum - barycentric_moment(a, b, c, d)) < 1e-15);
                    ++checked;
                }
    CHECK(checked == 15);
    // and it is not exact at degree 3
    double cubic = 0.0;
    for (int g = 0; g < 4; ++g)
        cubic += q.weights[g] * std::pow(q.points[g][0], 3);
    CHECK(std::abs(cubic - barycentric_moment(3, 0, 0, 0)) > 1e-6);
}

TEST_CASE("velocity gradient is exact for affine fields")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = random_tet(rng);
        Mat3 a; // u_j = c_j + sum_i a[i][j] x_i  =>  du_j/dx_i = a[i][j]
        Vec3 c;
        for (auto& r : a)
            for (double& v : r)
                v = d(rng);
        for (double& v : c)
            v = d(rng);
        std::array<Vec3, 4> u;
        for (int n = 0; n < 4; ++n)
            for (int j = 0; j < 3; ++j)
                u[n][j] = c[j] + a[0][j] * x[n][0] + a[1][j] * x[n][1] + a[2][j] * x[n][2];
        const Mat3 g = velocity_gradient(element_geometry(x), u);
        Mat3 diff;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                diff[i][j] = g[i][j] - a[i][j];
        CHECK(max_abs(diff) <= 1e-12 * max_abs(a));
    }
}

TEST_CASE("velocity gradient of a constant field is exactly zero")
{
    const std::array<Vec3, 4> x{Vec3{0.1, -0.2, 0.3}, Vec3{1.3, 0.1, 0.2}, Vec3{0.2, 1.1, 0.4}, Vec3{0.3, 0.2, 1.5}};
    const Vec3 c{0.123456789, -9.87654321, 3.3333333};
    const Mat3 g = velocity_gradient(element_geometry(x), {c, c, c, c});
    CHECK(max_abs(g) == 0.0);
}

TEST_CASE("Vreman viscosity")
{
    SUBCASE("zero for quiescent flow")
    {
        CHECK(vreman_viscosity(Mat3{}, 0.1, 0.07) == 0.0);
    }
    SUBCASE("zero for pure shear in any direction")
    {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j)
                    continue;
                Mat3 g{};
                g[i][j] = 3.7;
                CHECK(vreman_viscosity(g, 0.2, 0.07) == 0.0);
            }
    }
    SUBCASE("zero for any rank-one gradient")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        for (int trial = 0; trial < 1000; ++trial) {
            Vec3 p, q;
            for (int k = 0; k < 3; ++k) {
                p[k] = d(rng);
                q[k] = d(rng);
            }
            Mat3 g;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    g[i][j] = p[i] * q[j];
            CHECK(vreman_viscosity(g, 0.3, 0.07) == 0.0);
        }
    }
    SUBCASE("closed form for a diagonal gradient")
    {
        // G = diag(a, b, c): B_beta = d^4 (a^2 b^2 + a^2 c^2 + b^2 c^2), alpha:alpha = a^2 + b^2 + c^2
        const double a = 1.5, b = -0.5, c = 2.0, delta = 0.4, cv = 0.07;
        Mat3 g{};
        g[0][0] = a;
        g[1][1] = b;
        g[2][2] = c;
        const double bb = std::pow(delta, 4) * (a * a * b * b + a * a * c * c + b * b * c * c);
        const double expected = cv * std::sqrt(bb / (a * a + b * b + c * c));
        CHECK(vreman_viscosity(g, delta, cv) == doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("scales with the constant and with delta^2")
    {
        Mat3 g{{{0.3, -1.2, 0.5}, {0.8, 0.1, -0.4}, {-0.6, 0.9, 0.2}}};
        const double v = vreman_viscosity(g, 0.1, 0.07);
        CHECK(v > 0.0);
        CHECK(vreman_viscosity(g, 0.1, 0.14) == doctest::Approx(2.0 * v));
        CHECK(vreman_viscosity(g, 0.2, 0.07) == doctest::Approx(4.0 * v));
        CHECK(vreman_viscosity(g, 0.1, 0.0) == 0.0);
    }
    SUBCASE("non-negative on random gradients")
    {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> d(-10.0, 10.0);
        for (int trial = 0; trial < 20000; ++trial) {
            Mat3 g;
            for (auto& r : g)
                for (double& v : r)
                    v = d(rng);
            const double v = vreman_viscosity(g, 0.05, 0.07);
            REQUIRE(std::isfinite(v));
            REQUIRE(v >= 0.0);
        }
    }
}

TEST_CASE("filter width is the edge scale of the tet")
{
    CHECK(filter_width(1.0 / 6.0, FilterWidthRule::cbrt_volume) == doctest::Approx(1.0));
    CHECK(filter_width(8.0 / 6.0, FilterWidthRule::cbrt_volume) == doctest::Approx(2.0));
}

TEST_CASE("element RHS against exact symbolic integration")
{
    // Values from tests/oracles/element_rhs_oracle.py (exact integrals, no quadrature).
    const QuadratureRule q = quadrature_tet4();
    SUBCASE("reference tet, u = (x, 0, 0), no eddy viscosity")
    {
        const std::array<Vec3, 4> x{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
        std::array<Vec3, 4> u{};
        for (int n = 0; n < 4; ++n)
            u[n] = {x[n][0], 0.0, 0.0};
        PhysParams p;
        p.rho = 1.0;
        p.mu = 1.0;
        p.c_vreman = 0.0;
        const LocalRhs r = element_rhs(element_geometry(x), u, p, q);
        const double expected[4] = {19.0 / 120.0, -11.0 / 60.0, -1.0 / 120.0, -1.0 / 120.0};
        for (int a = 0; a < 4; ++a) {
            CHECK(r[a][0] == doctest::Approx(expected[a]).epsilon(1e-14));
            CHECK(r[a][1] == 0.0);
            CHECK(r[a][2] == 0.0);
        }
    }
    SUBCASE("general tet, affine field, Vreman active")
    {
        const std::array<Vec3, 4> x{Vec3{0.1, -0.2, 0.3}, Vec3{1.3, 0.1, 0.2}, Vec3{0.2, 1.1, 0.4},
                                    Vec3{0.3, 0.2, 1.5}};
        std::array<Vec3, 4> u;
        for (int n = 0; n < 4; ++n) {
            const double X = x[n][0], Y = x[n][1], Z = x[n][2];
            u[n] = {0.5 + 2 * X - Y + 0.3 * Z, -1 + 0.5 * X + Y - 2 * Z, 0.25 + X + 0.7 * Y - 3 * Z};
        }
        PhysParams p;
        p.rho = 1.2;
        p.mu = 1e-3;
        p.c_vreman = 0.07;
        const ElementGeometry geom = element_geometry(x);
        CHECK(geom.volume == doctest::Approx(0.30266666666666666667).epsilon(1e-14));
        const double nut = vreman_viscosity(velocity_gradient(geom, u), filter_width(geom.volume, p.filter_width_rule),
                                            p.c_vreman);
        CHECK(nut == doctest::Approx(0.20777283822760359720).epsilon(1e-13));
        const double expected[4][3] = {
            {-0.29248518880343674439, -0.051723888911903135250, -0.25597133295114712725},
            {-0.55188755427566402489, -0.078036557743406124717, -0.28034620439871538468},
            {-0.20368881493112089675, -0.12847459205559351082, -0.26892696297553666065},
            {-0.42762004198977833397, -0.0078089612890972292096, -0.19764149967460082741},
        };
        const LocalRhs r = element_rhs(geom, u, p, q);
        for (int a = 0; a < 4; ++a)
            for (int i = 0; i < 3; ++i)
                CHECK(r[a][i] == doctest::Approx(expected[a][i]).epsilon(1e-13));
    }
}

TEST_CASE("element RHS properties")
{
    const QuadratureRule q = quadrature_tet4();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const PhysParams p;
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_tet(rng);
        const ElementGeometry geom = element_geometry(x);
        std::array<Vec3, 4> u;
        for (auto& v : u)
            for (double& c : v)
                c = d(rng);
        const LocalRhs r = element_rhs(geom, u, p, q);

        // the diffusive part sums to zero over the nodes (sum_a grad N_a = 0), so the
        // node sum equals minus the integral of rho (u.grad)u
        const Mat3 g = velocity_gradient(geom, u);
        Vec3 ubar{0, 0, 0};
        for (const Vec3& v : u)
            for (int k = 0; k < 3; ++k)
                ubar[k] += 0.25 * v[k];
        for (int i = 0; i < 3; ++i) {
            double sum = 0.0;
            for (int a = 0; a < 4; ++a)
                sum += r[a][i];
            const double conv = -p.rho * geom.volume * (ubar[0] * g[0][i] + ubar[1] * g[1][i] + ubar[2] * g[2][i]);
            CHECK(sum == doctest::Approx(conv).epsilon(1e-12).scale(1.0));
        }

        // a constant field gives an exactly zero contribution
        const LocalRhs zero = element_rhs(geom, {u[0], u[0], u[0], u[0]}, p, q);
        for (const Vec3& v : zero)
            for (double c : v)
                CHECK(c == 0.0);
    }
}

TEST_CASE("reference assembly")
{
    const Mesh m = generate_box_mesh(3, 3, 3, {1, 1, 1});
    const PhysParams p;
    SUBCASE("constant field gives zero RHS")
    {
        const GlobalRhs r = assemble_reference(m, make_velocity(m, parse_init("constant:1,-2,0.5")), p);
        for (const Vec3& v : r.values)
            for (double c : v)
                CHECK(c == 0.0);
    }
    SUBCASE("global sum of the RHS equals minus the convective integral")
    {
        const NodalVelocity u = make_velocity(m, parse_init("random:4"));
        const GlobalRhs r = assemble_reference(m, u, p);
        Vec3 total{0, 0, 0}, conv{0, 0, 0};
        for (const Vec3& v : r.values)
            for (int i = 0; i < 3; ++i)
                total[i] += v[i];
        for (ElemIndex e = 0; e < m.n_elems(); ++e) {
            const ElementGeometry geom = element_geometry(m, e);
            std::array<Vec3, 4> ue;
            for (int a = 0; a < 4; ++a)
                ue[a] = u.values[m.elems[e][a]];
            const Mat3 g = velocity_gradient(geom, ue);
            Vec3 ubar{0, 0, 0};
            for (const Vec3& v : ue)
                for (int k = 0; k < 3; ++k)
                    ubar[k] += 0.25 * v[k];
            for (int i = 0; i < 3; ++i)
                conv[i] -= p.rho * geom.volume * (ubar[0] * g[0][i] + ubar[1] * g[1][i] + ubar[2] * g[2][i]);
        }
        for (int i = 0; i < 3; ++i)
            CHECK(total[i] == doctest::Approx(conv[i]).epsilon(1e-10).scale(1.0));
    }
    SUBCASE("input validation")
    {
        NodalVelocity u = make_velocity(m, parse_init("zero"));
        u.values.pop_back();
        CHECK_THROWS_AS(assemble_reference(m, u, p), InvalidArgument);
        u = make_velocity(m, parse_init("zero"));
        u.values[3][1] = NAN;
        CHECK_THROWS_AS(assemble_reference(m, u, p), ValidationError);
        PhysParams bad;
        bad.rho = 0.0;
        CHECK_THROWS_AS(assemble_reference(m, make_velocity(m, parse_init("zero")), bad), InvalidArgument);
        bad = PhysParams{};
        bad.mu = -1.0;
        CHECK_THROWS_AS(validate(bad), InvalidArgument);
    }
}

TEST_CASE("velocity initializers")
{
    const Mesh m = generate_box_mesh(2, 2, 2, {2, 1, 1});
    SUBCASE("parse and print")
    {
        CHECK(parse_init("zero").kind == InitKind::zero);
        CHECK(parse_init("constant:1,2,3").constant == Vec3{1, 2, 3});
        CHECK(parse_init("constant:1:2:3").constant == Vec3{1, 2, 3});
        CHECK(parse_init("shear:2.5").gamma == 2.5);
        CHECK(parse_init("shear").gamma == 1.0);
        CHECK(parse_init("taylor-green").kind == InitKind::taylor_green);
        CHECK(parse_init("random:9").seed == 9);
        CHECK(parse_init("random", 42).seed == 42);
        CHECK(parse_init("random:9").to_string() == "random:9");
        CHECK(parse_init(parse_init("constant:0.1,2,3").to_string()).constant == Vec3{0.1, 2, 3});
    }
    SUBCASE("bad specs")
    {
        CHECK_THROWS_AS(parse_init("vortex"), InvalidArgument);
        CHECK_THROWS_AS(parse_init("constant:1,2"), InvalidArgument);
        CHECK_THROWS_AS(parse_init("shear:abc"), InvalidArgument);
        CHECK_THROWS_AS(parse_init("constant:1,inf,2"), InvalidArgument);
    }
    SUBCASE("fields")
    {
        const NodalVelocity s = make_velocity(m, parse_init("shear:3"));
        for (std::size_t n = 0; n < m.n_nodes(); ++n)
            CHECK(s.values[n] == Vec3{3.0 * m.coords[n][1], 0.0, 0.0});
        const NodalVelocity tg = make_velocity(m, parse_init("taylor-green"));
        CHECK(std::abs(tg.values[0][0]) < 1e-15); // sin 0
        const NodalVelocity r1 = make_velocity(m, parse_init("random:7"));
        const NodalVelocity r2 = make_velocity(m, parse_init("random:7"));
        const NodalVelocity r3 = make_velocity(m, parse_init("random:8"));
        CHECK(r1.values == r2.values);
        CHECK(r1.values != r3.values);
        for (const Vec3& v : r1.values)
            for (double c : v) {
                CHECK(c >= -1.0);
                CHECK(c < 1.0);
            }
    }
}

TEST_CASE("quadrature on the reference tet")
{
    const QuadratureRule q = quadrature_tet4();
    const double vol = 1.0 / 6.0;
    double one = 0.0, xy = 0.0;
    for (int g = 0; g < 4; ++g) {
        // on the reference tet x = l1, y = l2
        one += q.weights[g] * vol;
        xy += q.weights[g] * vol * q.points[g][1] * q.points[g][2];
    }
    CHECK(one == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(xy == doctest::Approx(1.0 / 120.0).epsilon(1e-14));
    CHECK(q.weights[0] + q.weights[1] + q.weights[2] + q.weights[3] == 1.0);
}

TEST_CASE("velocity gradient examples on the reference tet")
{
    const std::array<Vec3, 4> x{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    const ElementGeometry geom = element_geometry(x);
    std::array<Vec3, 4> u{};
    for (int n = 0; n < 4; ++n)
        u[n] = {x[n][0], 0.0, 0.0};
    Mat3 g = velocity_gradient(geom, u);
    Mat3 expected{};
    expected[0][0] = 1.0;
    CHECK(g == expected);
    for (int n = 0; n < 4; ++n)
        u[n] = {2.0 * x[n][1], 0.0, 0.0};
    g = velocity_gradient(geom, u);
    expected = Mat3{};
    expected[1][0] = 2.0;
    CHECK(g == expected);
}

TEST_CASE("Vreman on the identity gradient")
{
    Mat3 g{};
    g[0][0] = g[1][1] = g[2][2] = 1.0;
    CHECK(vreman_viscosity(g, 1.0, 0.07) == doctest::Approx(0.07).epsilon(1e-15));
}

TEST_CASE("Vreman vanishes on the orthogonal rank-one family")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        Vec3 a, b;
        for (int k = 0; k < 3; ++k) {
            a[k] = d(rng);
            b[k] = d(rng);
        }
        const double aa = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
        const double ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        for (int k = 0; k < 3; ++k)
            b[k] -= ab / aa * a[k];
        Mat3 g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                g[i][j] = a[i] * b[j];
        REQUIRE(vreman_viscosity(g, 0.2, 0.07) == 0.0);
    }
}

TEST_CASE("element RHS on the reference tet splits into convection and diffusion")
{
    const std::array<Vec3, 4> x{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    const ElementGeometry geom = element_geometry(x);
    std::array<Vec3, 4> u{};
    for (int n = 0; n < 4; ++n)
        u[n] = {x[n][0], 0.0, 0.0};
    PhysParams p;
    p.rho = 1.0;
    p.mu = 1.0;
    p.c_vreman = 0.0;
    const LocalRhs r = element_rhs(geom, u, p, quadrature_tet4());
    // (u.grad)u_0 = x, so convection is -int N_a x: 1/60 on the x node's own
    // shape function (a = 1) and 1/120 on the others
    const double conv[4] = {-1.0 / 120.0, -1.0 / 60.0, -1.0 / 120.0, -1.0 / 120.0};
    for (int a = 0; a < 4; ++a)
        CHECK(r[a][0] == doctest::Approx(conv[a] - geom.volume * geom.grad_n[a][0]).epsilon(1e-14));

    const LocalRhs zero = element_rhs(geom, std::array<Vec3, 4>{}, p, quadrature_tet4());
    for (const Vec3& v : zero)
        CHECK(v == Vec3{0, 0, 0});
}

TEST_CASE("assembly of tiny meshes")
{
    const PhysParams p;
    SUBCASE("single element: global RHS is the local RHS")
    {
        Mesh m;
        m.coords = {Vec3{0.1, -0.2, 0.3}, Vec3{1.3, 0.1, 0.2}, Vec3{0.2, 1.1, 0.4}, Vec3{0.3, 0.2, 1.5}};
        m.elems = {Tet{0, 1, 2, 3}};
        const NodalVelocity u = make_velocity(m, parse_init("random:2"));
        const GlobalRhs g = assemble_reference(m, u, p);
        const LocalRhs l = element_rhs(element_geometry(m, 0), {u.values[0], u.values[1], u.values[2], u.values[3]},
                                       p, quadrature_tet4());
        for (int a = 0; a < 4; ++a)
            CHECK(g.values[a] == l[a]);
    }
    SUBCASE("two face-sharing elements, constant field")
    {
        Mesh m;
        m.coords = {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{1, 1, 1}};
        m.elems = {Tet{0, 1, 2, 3}, Tet{1, 4, 2, 3}};
        validate_mesh(m);
        const GlobalRhs g = assemble_reference(m, make_velocity(m, parse_init("constant:3,2,1")), p);
        for (const Vec3& v : g.values)
            CHECK(v == Vec3{0, 0, 0});
    }
    SUBCASE("zero velocity")
    {
        const Mesh m = generate_box_mesh(2, 2, 2, {1, 1, 1});
        for (const Vec3& v : assemble_reference(m, make_velocity(m, parse_init("zero")), p).values)
            CHECK(v == Vec3{0, 0, 0});
    }
}

TEST_CASE("translation invariance")
{
    Mesh m = generate_box_mesh(3, 2, 2, {1, 1, 1});
    const NodalVelocity u = make_velocity(m, parse_init("random:6"));
    const PhysParams p;
    const GlobalRhs a = assemble_reference(m, u, p);
    for (Vec3& x : m.coords) {
        x[0] += 3.25;
        x[1] -= 1.5;
        x[2] += 0.75;
    }
    const GlobalRhs b = assemble_reference(m, u, p);
    double diff = 0.0, ref = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
        for (int i = 0; i < 3; ++i) {
            diff = std::max(diff, std::abs(a.values[n][i] - b.values[n][i]));
            ref = std::max(ref, std::abs(a.values[n][i]));
        }
    CHECK(diff <= 1e-12 * ref);
}
