#pragma once

#include "tal/common.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace tal {

using Tet = std::array<NodeIndex, 4>;

/// Linear tetrahedral mesh. Immutable once built; safe to share across threads.
///
/// Element node ordering is positively oriented: the signed volume
/// det[x1-x0, x2-x0, x3-x0] / 6 of every element is > 0.
struct Mesh {
    std::vector<Vec3> coords;
    std::vector<Tet> elems;
    /// Per-element color, empty when the mesh has not been colored.
    std::vector<std::uint32_t> colors;
    std::uint32_t n_colors = 0;

    std::size_t n_nodes() const noexcept { return coords.size(); }
    std::size_t n_elems() const noexcept { return elems.size(); }
    bool has_colors() const noexcept { return !colors.empty() || elems.empty(); }

    friend bool operator==(const Mesh&, const Mesh&) = default;
};

/// Constant shape-function gradients and volume of one linear tet.
struct ElementGeometry {
    std::array<Vec3, 4> grad_n{};
    double volume = 0.0;
};

struct MeshStats {
    std::size_t n_nodes = 0;
    std::size_t n_elems = 0;
    double total_volume = 0.0;
    double min_volume = 0.0;
    double max_volume = 0.0;
    std::uint32_t n_colors = 0;
};

/// Elements with |volume| at or below this are rejected as degenerate.
inline constexpr double kVolumeEpsilon = 1e-300;

/// Structured nx*ny*nz grid on [0,X]x[0,Y]x[0,Z]. Each hex is cut into six
/// tetrahedra that all share the main diagonal from corner (0,0,0) to corner
/// (1,1,1) of the cell (Kuhn split, one tet per axis permutation). Because
/// every cell uses the same diagonal direction the split is conforming.
/// Node (i,j,k) has index i + (nx+1)*(j + (ny+1)*k).
Mesh generate_box_mesh(int nx, int ny, int nz, const Vec3& extents);

double signed_volume(const Mesh& mesh, ElemIndex elem);
ElementGeometry element_geometry(const Mesh& mesh, ElemIndex elem);
ElementGeometry element_geometry(const std::array<Vec3, 4>& nodes);

/// Greedy coloring in element-index order: each element gets the smallest
/// color not used by an element sharing one of its nodes.
Mesh color_elements(Mesh mesh);

/// Element ids grouped by color; offsets has n_colors + 1 entries.
struct ColorClasses {
    std::vector<ElemIndex> elems;
    std::vector<std::size_t> offsets;

    std::size_t size() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
    std::span<const ElemIndex> operator[](std::size_t c) const
    {
        return {elems.data() + offsets[c], offsets[c + 1] - offsets[c]};
    }
};
ColorClasses color_classes(const Mesh& mesh);

/// Throws ValidationError on out-of-range indices, non-positive volumes or
/// an invalid coloring.
void validate_mesh(const Mesh& mesh);

MeshStats mesh_stats(const Mesh& mesh);

/// Text format:
///   nodes <n>
///   x y z            (n lines)
///   elems <m>
///   i0 i1 i2 i3      (m lines, zero-based)
/// Tokens are whitespace separated; '#' starts a comment.
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
void write_mesh(const Mesh& mesh, std::ostream& out);

/// Inverted elements are re-oriented (nodes 1 and 2 swapped) and reported on
/// std::cerr; the count is returned through n_reoriented when given.
Mesh load_mesh(const std::filesystem::path& path, std::size_t* n_reoriented = nullptr);
Mesh read_mesh(std::istream& in, const std::string& source, std::size_t* n_reoriented = nullptr);

} // namespace tal
