#include "tal/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tal {

namespace {

// Kuhn split of the unit cell. Corners are numbered by bits (x=1, y=2, z=4).
// Tet p walks from corner 0 to corner 7 along the axis permutation p; odd
// permutations have nodes 1 and 2 swapped so every tet is positively oriented.
constexpr std::array<std::array<int, 4>, 6> kHexSplit{{
    {0, 1, 3, 7}, // x y z
    {0, 5, 1, 7}, // x z y
    {0, 3, 2, 7}, // y x z
    {0, 2, 6, 7}, // y z x
    {0, 4, 5, 7}, // z x y
    {0, 6, 4, 7}, // z y x
}};

double signed_volume(const std::array<Vec3, 4>& x)
{
    Mat3 e{};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            e[j][i] = x[j + 1][i] - x[0][i];
    const double det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
                       e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
                       e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
    return det / 6.0;
}

std::array<Vec3, 4> element_nodes(const Mesh& mesh, ElemIndex elem)
{
    const Tet& t = mesh.elems[elem];
    return {mesh.coords[t[0]], mesh.coords[t[1]], mesh.coords[t[2]], mesh.coords[t[3]]};
}

} // namespace

Mesh generate_box_mesh(int nx, int ny, int nz, const Vec3& extents)
{
    if (nx < 1 || ny < 1 || nz < 1)
        throw InvalidArgument("generate_box_mesh: cell counts must be >= 1");
    for (double e : extents)
        if (!(e > 0.0) || !std::isfinite(e))
            throw InvalidArgument("generate_box_mesh: extents must be finite and > 0");

    const std::size_t px = nx + 1, py = ny + 1, pz = nz + 1;
    if (px * py * pz > std::numeric_limits<NodeIndex>::max() ||
        6 * std::size_t(nx) * ny * nz > std::numeric_limits<ElemIndex>::max())
        throw InvalidArgument("generate_box_mesh: mesh too large for 32-bit indices");

    Mesh mesh;
    mesh.coords.reserve(px * py * pz);
    const Vec3 h{extents[0] / nx, extents[1] / ny, extents[2] / nz};
    for (std::size_t k = 0; k < pz; ++k)
        for (std::size_t j = 0; j < py; ++j)
            for (std::size_t i = 0; i < px; ++i)
                mesh.coords.push_back({i * h[0], j * h[1], k * h[2]});

    auto node = [&](std::size_t i, std::size_t j, std::size_t k) {
        return static_cast<NodeIndex>(i + px * (j + py * k));
    };

    mesh.elems.reserve(6 * std::size_t(nx) * ny * nz);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                std::array<NodeIndex, 8> corner{};
                for (int c = 0; c < 8; ++c)
                    corner[c] = node(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                for (const auto& tet : kHexSplit)
                    mesh.elems.push_back({corner[tet[0]], corner[tet[1]], corner[tet[2]], corner[tet[3]]});
            }
    return mesh;
}

double signed_volume(const Mesh& mesh, ElemIndex elem)
{
    return signed_volume(element_nodes(mesh, elem));
}

ElementGeometry element_geometry(const std::array<Vec3, 4>& x)
{
    // Rows of the edge matrix are x_{j+1} - x_0. Barycentric gradient j+1 is
    // column j of its inverse, i.e. cofactor row j divided by the determinant.
    Mat3 e{};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            e[j][i] = x[j + 1][i] - x[0][i];

    Mat3 cof{};
    for (int j = 0; j < 3; ++j) {
        const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
        for (int i = 0; i < 3; ++i) {
            const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
            cof[j][i] = e[j1][i1] * e[j2][i2] - e[j1][i2] * e[j2][i1];
        }
    }
    const double det = e[0][0] * cof[0][0] + e[0][1] * cof[0][1] + e[0][2] * cof[0][2];

    ElementGeometry g;
    g.volume = std::abs(det) / 6.0;
    if (!(g.volume > kVolumeEpsilon))
        throw DegenerateElementError(0, det / 6.0);

    const double rdet = 1.0 / det;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            g.grad_n[j + 1][i] = cof[j][i] * rdet;
    for (int i = 0; i < 3; ++i)
        g.grad_n[0][i] = -(g.grad_n[1][i] + g.grad_n[2][i] + g.grad_n[3][i]);
    return g;
}

ElementGeometry element_geometry(const Mesh& mesh, ElemIndex elem)
{
    if (elem >= mesh.n_elems())
        throw InvalidArgument("element_geometry: element index out of range");
    try {
        return element_geometry(element_nodes(mesh, elem));
    } catch (const DegenerateElementError& e) {
        throw DegenerateElementError(elem, e.volume());
    }
}

Mesh color_elements(Mesh mesh)
{
    const std::size_t n_nodes = mesh.n_nodes();
    const std::size_t n_elems = mesh.n_elems();

    // node -> elements adjacency (CSR)
    std::vector<std::size_t> offset(n_nodes + 1, 0);
    for (const Tet& t : mesh.elems)
        for (NodeIndex n : t)
            ++offset[n + 1];
    for (std::size_t n = 0; n < n_nodes; ++n)
        offset[n + 1] += offset[n];
    std::vector<ElemIndex> adj(offset.back());
    {
        std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
        for (ElemIndex e = 0; e < n_elems; ++e)
            for (NodeIndex n : mesh.elems[e])
                adj[fill[n]++] = e;
    }

    constexpr std::uint32_t kUncolored = std::numeric_limits<std::uint32_t>::max();
    mesh.colors.assign(n_elems, kUncolored);
    mesh.n_colors = 0;
    // forbidden[c] == e + 1 marks color c as taken by a neighbour of e
    std::vector<std::size_t> forbidden;
    for (ElemIndex e = 0; e < n_elems; ++e) {
        for (NodeIndex n : mesh.elems[e])
            for (std::size_t k = offset[n]; k < offset[n + 1]; ++k) {
                const std::uint32_t c = mesh.colors[adj[k]];
                if (c != kUncolored)
                    forbidden[c] = e + 1;
            }
        std::uint32_t c = 0;
        while (c < forbidden.size() && forbidden[c] == e + 1)
            ++c;
        if (c == forbidden.size())
            forbidden.push_back(0);
        mesh.colors[e] = c;
        mesh.n_colors = std::max(mesh.n_colors, c + 1);
    }
    return mesh;
}

ColorClasses color_classes(const Mesh& mesh)
{
    if (!mesh.has_colors())
        throw InvalidArgument("color_classes: mesh is not colored");
    ColorClasses cc;
    cc.offsets.assign(mesh.n_colors + 1, 0);
    for (std::uint32_t c : mesh.colors)
        ++cc.offsets[c + 1];
    for (std::size_t c = 0; c < mesh.n_colors; ++c)
        cc.offsets[c + 1] += cc.offsets[c];
    cc.elems.resize(mesh.n_elems());
    std::vector<std::size_t> fill(cc.offsets.begin(), cc.offsets.end() - 1);
    for (ElemIndex e = 0; e < mesh.n_elems(); ++e)
        cc.elems[fill[mesh.colors[e]]++] = e;
    return cc;
}

void validate_mesh(const Mesh& mesh)
{
    const std::size_t n_nodes = mesh.n_nodes();
    for (const Vec3& x : mesh.coords)
        for (double v : x)
            if (!std::isfinite(v))
                throw ValidationError("mesh has non-finite node coordinates");
    for (ElemIndex e = 0; e < mesh.n_elems(); ++e) {
        for (NodeIndex n : mesh.elems[e])
            if (n >= n_nodes) {
                std::ostringstream os;
                os << "element " << e << " references node " << n << " but the mesh has " << n_nodes
                   << " nodes";
                throw ValidationError(os.str());
            }
        const double v = signed_volume(mesh, e);
        if (!(v > kVolumeEpsilon)) {
            std::ostringstream os;
            os << "element " << e << " has non-positive volume " << v;
            throw ValidationError(os.str());
        }
    }
    if (!mesh.colors.empty()) {
        if (mesh.colors.size() != mesh.n_elems())
            throw ValidationError("color array length does not match element count");
        for (std::uint32_t c : mesh.colors)
            if (c >= mesh.n_colors)
                throw ValidationError("color " + std::to_string(c) + " out of range (n_colors " +
                                      std::to_string(mesh.n_colors) + ")");
        // owner[n] = last element of the current color touching node n
        const ColorClasses cc = color_classes(mesh);
        std::vector<std::int64_t> owner(n_nodes, -1);
        for (std::size_t c = 0; c < cc.size(); ++c)
            for (ElemIndex e : cc[c])
                for (NodeIndex n : mesh.elems[e]) {
                    if (owner[n] >= 0 && mesh.colors[owner[n]] == c) {
                        std::ostringstream os;
                        os << "elements " << owner[n] << " and " << e << " share node " << n
                           << " but both have color " << c;
                        throw ValidationError(os.str());
                    }
                    owner[n] = e;
                }
    }
}

MeshStats mesh_stats(const Mesh& mesh)
{
    MeshStats s;
    s.n_nodes = mesh.n_nodes();
    s.n_elems = mesh.n_elems();
    s.n_colors = mesh.n_colors;
    if (mesh.n_elems() == 0)
        return s;
    s.min_volume = std::numeric_limits<double>::infinity();
    s.max_volume = -s.min_volume;
    for (ElemIndex e = 0; e < mesh.n_elems(); ++e) {
        const double v = signed_volume(mesh, e);
        s.total_volume += v;
        s.min_volume = std::min(s.min_volume, v);
        s.max_volume = std::max(s.max_volume, v);
    }
    return s;
}

} // namespace tal
