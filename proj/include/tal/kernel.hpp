#pragma once

#include "tal/common.hpp"
#include "tal/mesh.hpp"

#include <cmath>
#include <vector>

namespace tal {

enum class FilterWidthRule {
    cbrt_volume, ///< delta = (6 * volume)^(1/3), the edge scale of the tet
};

struct PhysParams {
    double rho = 1.0;      ///< density, kg/m^3
    double mu = 1.0e-3;    ///< molecular dynamic viscosity, Pa s
    double c_vreman = 0.07;
    FilterWidthRule filter_width_rule = FilterWidthRule::cbrt_volume;
};

/// Throws InvalidArgument unless rho > 0, mu >= 0, c_vreman >= 0.
void validate(const PhysParams& p);

/// Symmetric 4-point rule on the tetrahedron. Points are barycentric
/// coordinates, weights are fractions of the element volume.
struct QuadratureRule {
    std::array<std::array<double, 4>, 4> points{};
    std::array<double, 4> weights{};
};

inline constexpr double kQuadA = 0.58541019662496845446; // (5 + 3 sqrt 5) / 20
inline constexpr double kQuadB = 0.13819660112501051518; // (5 - sqrt 5) / 20

QuadratureRule quadrature_tet4();

struct NodalVelocity {
    std::vector<Vec3> values;
};

using LocalRhs = std::array<Vec3, 4>;

struct GlobalRhs {
    std::vector<Vec3> values;

    explicit GlobalRhs(std::size_t n_nodes = 0) : values(n_nodes, Vec3{0.0, 0.0, 0.0}) {}
    std::size_t size() const noexcept { return values.size(); }
    double* data() noexcept { return values.empty() ? nullptr : values.front().data(); }
    const double* data() const noexcept { return values.empty() ? nullptr : values.front().data(); }
};

/// Below this alpha:alpha the flow is treated as quiescent and nu_t = 0.
inline constexpr double kVremanDenomEpsilon = 1e-30;
/// B_beta values below this fraction of trace(beta)^2 are rounding noise of
/// the 2x2 minors and are clamped to zero, so rank-1 gradients give nu_t = 0.
inline constexpr double kVremanCancellationFloor = 1e-14;

/// Vreman eddy viscosity (m^2/s) from G[i][j] = du_j/dx_i.
template <class Real>
Real vreman_viscosity(const Mat3T<Real>& g, const Real& delta, double c)
{
    using std::sqrt;
    const Real d2 = delta * delta;
    Mat3T<Real> b{};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            b[i][j] = d2 * (g[0][i] * g[0][j] + g[1][i] * g[1][j] + g[2][i] * g[2][j]);
    const Real bb = (b[0][0] * b[1][1] - b[0][1] * b[0][1]) + (b[0][0] * b[2][2] - b[0][2] * b[0][2]) +
                    (b[1][1] * b[2][2] - b[1][2] * b[1][2]);
    Real aa = g[0][0] * g[0][0];
    for (int k = 1; k < 9; ++k)
        aa = aa + g[k / 3][k % 3] * g[k / 3][k % 3];
    if (aa <= Real(kVremanDenomEpsilon))
        return Real(0.0);
    const Real tr = b[0][0] + b[1][1] + b[2][2];
    if (bb <= kVremanCancellationFloor * tr * tr)
        return Real(0.0);
    return c * sqrt(bb / aa);
}

/// Flops of one vreman_viscosity call on the non-trivial path.
inline constexpr int kVremanFlops = 1 + 6 * 6 + 11 + 17 + 4 + 3;

inline double vreman_viscosity(const Mat3& g, double delta, double c)
{
    return vreman_viscosity<double>(g, delta, c);
}

/// G[i][j] = sum_a grad_n[a][i] * u[a][j], evaluated in the equivalent
/// difference form sum_{a>0} grad_n[a][i] * (u[a][j] - u[0][j]) so that
/// constant fields give an exactly zero gradient.
Mat3 velocity_gradient(const ElementGeometry& geom, const std::array<Vec3, 4>& u_elem);

/// Filter width for the element according to the rule.
double filter_width(double volume, FilterWidthRule rule);

/// LocalRhs[a][i] = -rho int N_a (u.grad)u_i - (mu + rho nu_t) int grad N_a . grad u_i
LocalRhs element_rhs(const ElementGeometry& geom, const std::array<Vec3, 4>& u_elem, const PhysParams& params,
                     const QuadratureRule& quad);

/// Throws InvalidArgument on a length mismatch and ValidationError on
/// non-finite entries.
void validate_velocity(const Mesh& mesh, const NodalVelocity& u);

/// Sequential scalar assembly in element-index order. This is the
/// correctness oracle for the optimized variants.
GlobalRhs assemble_reference(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params);

} // namespace tal
