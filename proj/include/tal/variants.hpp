#pragma once

#include "tal/kernel.hpp"
#include "tal/mesh.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tal {

/// B: baseline, RS: restructured + specialized, RSP: RS + privatized.
enum class VariantId { B, RS, RSP };

inline constexpr std::array<VariantId, 3> kAllVariants{VariantId::B, VariantId::RS, VariantId::RSP};

std::string_view variant_name(VariantId id); ///< "b", "rs", "rsp"
std::string_view variant_label(VariantId id); ///< "B", "RS", "RSP"
std::optional<VariantId> parse_variant(std::string_view name);

enum class ScatterStrategy {
    private_accumulators, ///< per-thread GlobalRhs, merged in thread-index order
    colored,              ///< color classes in sequence, direct scatter inside a class
};

struct RunConfig {
    std::size_t vector_dim = 16; ///< elements per chunk
    int n_threads = 1;
    int reps = 5;
    ScatterStrategy scatter = ScatterStrategy::private_accumulators;
    /// Chunk intermediate footprint above which the baseline's arrays are
    /// assumed to spill to DRAM in the traffic model.
    std::size_t cache_capacity_bytes = std::size_t(1) << 20;
};

void validate(const RunConfig& cfg);

/// Static per-element operation and footprint counts of a variant.
struct CounterLedger {
    std::uint64_t flops_per_elem = 0; ///< 1 FMA = 2 Flop
    std::uint64_t loadstore_per_elem = 0;
    std::uint64_t intermediate_doubles_per_elem = 0;
    std::uint64_t intermediate_arrays = 0;
    std::uint64_t bytes_dram_est = 0; ///< model estimate, bytes per element

    friend bool operator==(const CounterLedger&, const CounterLedger&) = default;
};

struct ArraySpec {
    std::string name;
    std::size_t doubles_per_elem = 0;
};

/// Self-description consumed by the report generator.
struct VariantDescription {
    VariantId id{};
    std::string name;
    std::vector<ArraySpec> arrays; ///< heap-allocated chunk arrays
    std::size_t intermediate_doubles_per_elem = 0;
    std::uint64_t flops_per_elem = 0;
    std::uint64_t loadstore_per_elem = 0;
    std::string flop_formula;
    std::string loadstore_formula;
};

VariantDescription describe(VariantId id);

/// Input traffic (coordinates, velocities, connectivity) plus read-modify-write
/// of the scattered RHS. The baseline additionally pays a write and a read of
/// every intermediate when one chunk's intermediates exceed the cache capacity.
CounterLedger make_ledger(VariantId id, const RunConfig& cfg);

struct AssemblyResult {
    GlobalRhs rhs;
    CounterLedger ledger;
    double wall_time = 0.0; ///< seconds
    double elements_per_second = 0.0;
};

AssemblyResult assemble_baseline(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params,
                                 const RunConfig& cfg);
AssemblyResult assemble_rs(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params,
                           const RunConfig& cfg);
AssemblyResult assemble_rsp(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params,
                            const RunConfig& cfg);
AssemblyResult assemble(VariantId id, const Mesh& mesh, const NodalVelocity& u, const PhysParams& params,
                        const RunConfig& cfg);

/// Difference between a candidate RHS and the reference. The relative error
/// is max_abs / max|ref|; when the reference is identically zero the
/// magnitude scale from rhs_magnitude_scale is used instead.
struct RhsDiff {
    double max_abs = 0.0;
    double max_rel = 0.0;
    NodeIndex worst_node = 0;
    int worst_component = 0;
    std::optional<NodeIndex> nonfinite_node;
};

RhsDiff compare_rhs(const GlobalRhs& reference, const GlobalRhs& candidate, double zero_rhs_scale = 0.0);

/// max over elements of V |grad N| U (rho U + mu |grad N|): the size of the
/// individual products that make up one element contribution.
double rhs_magnitude_scale(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params);

inline constexpr double kVerifyTolerance = 1e-12;

struct VariantCheck {
    VariantId id{};
    RhsDiff diff;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VariantCheck> checks;
    double tolerance = kVerifyTolerance;
    bool pass = false;
};

/// Hook applied to a variant's RHS before comparison (fault injection).
using RhsPerturbation = std::function<void(VariantId, GlobalRhs&)>;

VerifyReport verify_variants(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params,
                             const RunConfig& cfg, std::span<const VariantId> variants = kAllVariants,
                             const RhsPerturbation& perturb = {});

} // namespace tal
