#pragma once

#include "tal/perfmodel.hpp"
#include "tal/variants.hpp"
#include "tal/velocity.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tal {

/// Where the mesh of a run came from.
struct MeshSource {
    std::optional<std::array<int, 3>> box; ///< nx, ny, nz
    Vec3 extents{1.0, 1.0, 1.0};
    std::string file; ///< set when loaded from disk

    std::string describe() const;

    friend bool operator==(const MeshSource&, const MeshSource&) = default;
};

Mesh build_mesh(const MeshSource& src);

struct BenchRecord {
    std::string variant; ///< "B", "RS", "RSP"
    MeshSource mesh;
    std::size_t n_elems = 0;
    std::size_t n_nodes = 0;
    std::string init;
    std::string scatter;
    int n_threads = 1;
    std::size_t vector_dim = 16;
    int reps = 0;
    double median_time = 0.0; ///< s
    double min_time = 0.0;
    double max_time = 0.0;
    double melems_per_s = 0.0;
    double checksum = 0.0;
    std::optional<bool> verified; ///< unset when verification was skipped
    std::optional<double> verify_max_rel;
    CounterLedger ledger;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

/// sum of entries + sum of absolute entries, in node order.
double rhs_checksum(const GlobalRhs& rhs);
std::string format_checksum(double checksum); ///< 17 significant digits

std::string to_json(const std::vector<BenchRecord>& records);
/// Parses {"records": [...]}. Throws ParseError naming source on bad input.
std::vector<BenchRecord> records_from_json(const std::string& text, const std::string& source);
std::vector<BenchRecord> load_records(const std::string& path);

struct BenchOptions {
    VariantId variant = VariantId::RSP;
    RunConfig cfg;
    PhysParams params;
    bool verify = true;
    /// Zero every timing-derived field so outputs are reproducible.
    bool stable_output = false;
    RhsPerturbation perturb;
};

/// One untimed warm-up, then cfg.reps timed runs. Verification (when
/// enabled) uses a separate run outside the timed ones.
BenchRecord run_bench(const Mesh& mesh, const MeshSource& src, const InitSpec& init, const NodalVelocity& u,
                      const BenchOptions& opts);

struct SweepSpec {
    std::vector<int> threads{1};
    std::vector<VariantId> variants{VariantId::RSP};
};

struct SweepRow {
    BenchRecord record;
    double perfect_scaling_melems_per_s = 0.0;
};

/// Rows ordered by variant then thread count. The perfect-scaling column
/// extrapolates linearly from the smallest thread count of each variant.
std::vector<SweepRow> run_sweep(const Mesh& mesh, const MeshSource& src, const InitSpec& init,
                                const NodalVelocity& u, const SweepSpec& spec, BenchOptions opts);

inline constexpr std::array<const char*, 9> kSweepColumns{
    "variant",   "threads",  "n_elems", "vector_dim", "median_s", "min_s", "max_s", "melems_per_s",
    "perfect_scaling_melems_per_s"};

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// flops and modeled DRAM bytes from the ledger, measured GFlop/s from the
/// element rate (omitted when the record carries no timing).
CodePoint code_point(const BenchRecord& r);

/// Markdown: speedup vs B, ledger comparison, roofline summary.
std::string render_report(const std::vector<BenchRecord>& records, const MachineSpec& machine);

/// Test and fault-injection hooks for the command line front-end.
struct CliHooks {
    RhsPerturbation perturb;
};

/// tet-assembly-lab entry point. args excludes the program name.
/// Returns 0 ok, 1 verification failure, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliHooks& hooks = {});

} // namespace tal
