#include "tal/variants.hpp"

#include "baseline_kernel.hpp"
#include "driver.hpp"
#include "privatized_kernel.hpp"
#include "restructured_kernel.hpp"

#include <chrono>
#include <sstream>

namespace tal {

namespace detail {

ElementType tet4_element_type()
{
    const QuadratureRule q = quadrature_tet4();
    ElementType et;
    et.pnode = 4;
    et.pgaus = 4;
    et.shape.resize(16);
    et.deriv.resize(48);
    et.weight.resize(4);
    // N_0 = 1 - xi - eta - zeta, N_j = xi_j
    constexpr double kDeriv[4][3] = {{-1, -1, -1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int g = 0; g < 4; ++g) {
        for (int a = 0; a < 4; ++a) {
            et.shape[g * 4 + a] = q.points[g][a];
            for (int j = 0; j < 3; ++j)
                et.deriv[(g * 4 + a) * 3 + j] = kDeriv[a][j];
        }
        et.weight[g] = q.weights[g] / 6.0;
    }
    return et;
}

std::vector<ArraySpec> baseline_arrays(int pnode, int pgaus)
{
    const std::size_t n = pnode, g = pgaus, d = 3;
    return {
        {"elcod", n * d},       {"elvel", n * d},     {"elunk", n * d},         {"gpjac", g * d * d},
        {"gpdet", g},           {"gpinv", g * d * d}, {"gpvol", g},             {"gpcar", g * n * d},
        {"gpvel", g * d},       {"gpgve", g * d * d}, {"elvol", 1},             {"elfil", 1},
        {"gpnut", g},           {"gpmut", g},         {"elmat", n * d * n * d}, {"gpadv", g * n},
        {"factr", 1},           {"elrhs", n * d},
    };
}

std::vector<ArraySpec> restructured_arrays()
{
    return {
        {"elcod", 12}, {"elvel", 12}, {"eljac", 9}, {"elcof", 9},  {"eldet", 1},  {"gpcar", 12},
        {"gpvol", 1},  {"gpgve", 9},  {"gpmue", 1}, {"gpvel", 12}, {"gpadv", 12}, {"elrhs", 12},
    };
}

namespace {

// Per-element gather loads: connectivity plus node coordinates and velocities.
constexpr std::uint64_t gather_loads(std::uint64_t n, std::uint64_t velocity_copies)
{
    return n + n * 3 + velocity_copies * n * 3;
}

// Scatter: read the local RHS from its chunk array (if any), then
// read-modify-write the global entry.
constexpr std::uint64_t scatter_ops(std::uint64_t n, bool from_array)
{
    return (from_array ? n * 3 : 0) + 2 * n * 3;
}

constexpr std::uint64_t baseline_flops(std::uint64_t n, std::uint64_t g)
{
    constexpr std::uint64_t d = 3;
    return 2 * g * n * d * d      // Jacobian
           + 14 * g               // determinant
           + 4 * d * d * g        // inverse
           + g                    // Gauss-point volume
           + 2 * g * n * d * d    // Cartesian derivatives
           + 2 * g * d * n        // Gauss-point velocity
           + 2 * g * d * d * n    // Gauss-point velocity gradient
           + g + 2                // element volume, filter width
           + g * kVremanFlops     // eddy viscosity per Gauss point
           + 2 * g                // effective viscosity
           + 2 * g * n * d        // u . grad N_b
           + g * n * n * (3 + d)  // convection into the elemental matrix
           + g * n * n * (3 * d + 2) // diffusion into the elemental matrix
           + 2 * (n * d) * (n * d);  // elemental matrix times unknowns
}

constexpr std::uint64_t baseline_array_accesses(std::uint64_t n, std::uint64_t g)
{
    constexpr std::uint64_t d = 3;
    return 3 * n * d                          // gather into elcod, elvel, elunk
           + g * d * d + 3 * g * n * d * d    // Jacobian
           + 16 * g + 6 * g * d * d + 2 * g   // determinant, inverse, volume
           + g * n * d + 3 * g * n * d * d    // Cartesian derivatives
           + g * d + 3 * g * d * n            // Gauss-point velocity
           + g * d * d + 4 * g * d * d * n    // velocity gradient
           + 1 + 3 * g + 2                    // element volume, filter width
           + 11 * g + 2 * g                   // eddy and effective viscosity
           + (n * d) * (n * d)                // zero elemental matrix
           + g * n + 4 * g * n * d            // u . grad N_b
           + (3 + 3 * d) * g * n * n          // convection
           + (5 + 7 * d) * g * n * n          // diffusion
           + n * d + 4 * (n * d) * (n * d);   // elemental matrix times unknowns
}

constexpr std::uint64_t kRestructuredFlops = 9 + 27 + 5 + 20 + 72 + (4 + kVremanFlops) + 72 + 60 + 12 * 18;
constexpr std::uint64_t kRestructuredArrayAccesses = 24 + 27 + 45 + 7 + 33 + 90 + 11 + 72 + 84 + 180;
constexpr std::uint64_t kPrivatizedFlops =
    9 + 27 + 5 + 1 + 1 + 9 + 9 + 9 + 45 + 2 + kVremanFlops + 2 + 9 + 36 + 60 + 9 + 2 + 1 + 12 * 12;

} // namespace

std::uint64_t counted_array_accesses(VariantId id)
{
    switch (id) {
    case VariantId::B:
        return baseline_array_accesses(4, 4);
    case VariantId::RS:
        return kRestructuredArrayAccesses;
    case VariantId::RSP:
        return 0;
    }
    return 0;
}

} // namespace detail

std::string_view variant_name(VariantId id)
{
    switch (id) {
    case VariantId::B:
        return "b";
    case VariantId::RS:
        return "rs";
    case VariantId::RSP:
        return "rsp";
    }
    return "?";
}

std::string_view variant_label(VariantId id)
{
    switch (id) {
    case VariantId::B:
        return "B";
    case VariantId::RS:
        return "RS";
    case VariantId::RSP:
        return "RSP";
    }
    return "?";
}

std::optional<VariantId> parse_variant(std::string_view name)
{
    for (VariantId id : kAllVariants)
        if (name == variant_name(id) || name == variant_label(id))
            return id;
    return std::nullopt;
}

void validate(const RunConfig& cfg)
{
    if (cfg.vector_dim < 1)
        throw InvalidArgument("vector_dim must be >= 1");
    if (cfg.n_threads < 1)
        throw InvalidArgument("n_threads must be >= 1");
    if (cfg.reps < 1)
        throw InvalidArgument("reps must be >= 1");
}

VariantDescription describe(VariantId id)
{
    using namespace detail;
    VariantDescription d;
    d.id = id;
    d.name = std::string(variant_label(id));
    switch (id) {
    case VariantId::B:
        d.arrays = baseline_arrays(4, 4);
        d.intermediate_doubles_per_elem = total_doubles(d.arrays);
        d.flops_per_elem = baseline_flops(4, 4);
        d.loadstore_per_elem = gather_loads(4, 2) + baseline_array_accesses(4, 4) + scatter_ops(4, true);
        d.flop_formula = "2gnd^2 + 14g + 4gd^2 + g + 2gnd^2 + 2gdn + 2gd^2n + g + 2 + g*V + 2g + 2gnd"
                         " + gn^2(3+d) + gn^2(3d+2) + 2(nd)^2 with n=4 nodes, g=4 Gauss points, d=3,"
                         " V=72 Flop per Vreman evaluation";
        d.loadstore_formula = "gather 7n + array accesses (see baseline_array_accesses) + scatter 9n";
        break;
    case VariantId::RS:
        d.arrays = restructured_arrays();
        d.intermediate_doubles_per_elem = total_doubles(d.arrays);
        d.flops_per_elem = kRestructuredFlops;
        d.loadstore_per_elem = gather_loads(4, 1) + kRestructuredArrayAccesses + scatter_ops(4, true);
        d.flop_formula = "edges 9 + cofactors 27 + det 5 + gradients 20 + grad u 72 + (4 + V) viscosity"
                         " + Gauss velocity 72 + advection 60 + 12 RHS entries x 18";
        d.loadstore_formula = "gather 28 + 573 chunk-array accesses + scatter 36";
        break;
    case VariantId::RSP:
        d.intermediate_doubles_per_elem = kPrivateDoubles;
        d.flops_per_elem = kPrivatizedFlops;
        d.loadstore_per_elem = gather_loads(4, 1) + scatter_ops(4, false);
        d.flop_formula = "geometry 61 + grad u 54 + (4 + V) viscosity + Gauss velocity 45 + advection 69"
                         " + 3 + 12 RHS entries x 12";
        d.loadstore_formula = "gather 28 + scatter 24 (intermediates in registers)";
        break;
    }
    return d;
}

CounterLedger make_ledger(VariantId id, const RunConfig& cfg)
{
    const VariantDescription d = describe(id);
    CounterLedger l;
    l.flops_per_elem = d.flops_per_elem;
    l.loadstore_per_elem = d.loadstore_per_elem;
    l.intermediate_doubles_per_elem = d.intermediate_doubles_per_elem;
    l.intermediate_arrays = d.arrays.size();
    // coordinates + velocities (4 nodes x 3 x 8 B each), 4 x 4 B connectivity,
    // RHS read + write (4 x 3 x 8 B each way)
    l.bytes_dram_est = 96 + 96 + 16 + 192;
    if (id == VariantId::B) {
        const std::uint64_t footprint = d.intermediate_doubles_per_elem * 8;
        if (footprint * cfg.vector_dim > cfg.cache_capacity_bytes)
            l.bytes_dram_est += 2 * footprint;
    }
    return l;
}

namespace {

using detail::ChunkContext;

struct BaselineProcessor {
    const ChunkContext* ctx;
    detail::BaselineWorkspace<double> w;

    void process(std::span<const ElemIndex> chunk, double* rhs)
    {
        detail::baseline_chunk(*ctx, chunk, w);
        // separate scalar scatter loop
        for (std::size_t iv = 0; iv < chunk.size(); ++iv) {
            const Tet& t = ctx->mesh->elems[chunk[iv]];
            for (int a = 0; a < 4; ++a)
                for (int i = 0; i < 3; ++i)
                    rhs[3 * std::size_t(t[a]) + i] += w.elrhs(a * 3 + i, iv);
        }
    }
};

struct RestructuredProcessor {
    const ChunkContext* ctx;
    detail::RestructuredWorkspace<double> w;

    void process(std::span<const ElemIndex> chunk, double* rhs)
    {
        detail::restructured_chunk(*ctx, chunk, w);
        for (std::size_t iv = 0; iv < chunk.size(); ++iv) {
            const Tet& t = ctx->mesh->elems[chunk[iv]];
            for (int a = 0; a < 4; ++a)
                for (int i = 0; i < 3; ++i)
                    rhs[3 * std::size_t(t[a]) + i] += w.elrhs(a * 3 + i, iv);
        }
    }
};

struct PrivatizedProcessor {
    const ChunkContext* ctx;

    // flatten: inline the whole element body so the private state stays in registers
#if defined(__GNUC__)
    [[gnu::flatten]]
#endif
    void process(std::span<const ElemIndex> chunk, double* rhs) const
    {
        for (const ElemIndex e : chunk) {
            const auto local = detail::privatized_element<double>(*ctx, e);
            const Tet& t = ctx->mesh->elems[e];
            for (int a = 0; a < 4; ++a)
                for (int i = 0; i < 3; ++i)
                    rhs[3 * std::size_t(t[a]) + i] += local[a][i];
        }
    }
};

template <class MakeProcessor>
AssemblyResult timed_run(VariantId id, const Mesh& mesh, const NodalVelocity& u, const PhysParams& params,
                         const RunConfig& cfg, MakeProcessor&& make)
{
    validate(cfg);
    validate(params);
    validate_velocity(mesh, u);
    const Mesh* m = &mesh;
    Mesh colored;
    if (cfg.scatter == ScatterStrategy::colored && !mesh.has_colors()) {
        colored = color_elements(mesh);
        m = &colored;
    }
    const detail::ElementType et = detail::tet4_element_type();
    const ChunkContext ctx{m, &u, &params, &et};

    AssemblyResult r;
    const auto t0 = std::chrono::steady_clock::now();
    r.rhs = detail::run_chunked(*m, cfg, [&] { return make(ctx); });
    const auto t1 = std::chrono::steady_clock::now();
    r.wall_time = std::chrono::duration<double>(t1 - t0).count();
    r.elements_per_second = r.wall_time > 0.0 ? double(mesh.n_elems()) / r.wall_time : 0.0;
    r.ledger = make_ledger(id, cfg);
    return r;
}

} // namespace

AssemblyResult assemble_baseline(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params,
                                 const RunConfig& cfg)
{
    return timed_run(VariantId::B, mesh, u, params, cfg, [&](const ChunkContext& ctx) {
        return BaselineProcessor{&ctx, detail::BaselineWorkspace<double>(*ctx.etype, cfg.vector_dim)};
    });
}

AssemblyResult assemble_rs(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params,
                           const RunConfig& cfg)
{
    return timed_run(VariantId::RS, mesh, u, params, cfg, [&](const ChunkContext& ctx) {
        return RestructuredProcessor{&ctx, detail::RestructuredWorkspace<double>(cfg.vector_dim)};
    });
}

AssemblyResult assemble_rsp(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params,
                            const RunConfig& cfg)
{
    return timed_run(VariantId::RSP, mesh, u, params, cfg,
                     [](const ChunkContext& ctx) { return PrivatizedProcessor{&ctx}; });
}

AssemblyResult assemble(VariantId id, const Mesh& mesh, const NodalVelocity& u, const PhysParams& params,
                        const RunConfig& cfg)
{
    switch (id) {
    case VariantId::B:
        return assemble_baseline(mesh, u, params, cfg);
    case VariantId::RS:
        return assemble_rs(mesh, u, params, cfg);
    case VariantId::RSP:
        return assemble_rsp(mesh, u, params, cfg);
    }
    throw InvalidArgument("unknown variant");
}

} // namespace tal
