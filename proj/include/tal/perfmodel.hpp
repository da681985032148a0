#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tal {

struct MachineSpec {
    std::string name;
    double mem_bandwidth = 0.0; ///< GB/s
    double fp_peak = 0.0;       ///< GFlop/s
    std::optional<double> power; ///< W
};

/// Throws InvalidArgument unless bandwidth and peak are > 0.
void validate(const MachineSpec& spec);

struct CodePoint {
    std::string label;
    double flops_per_elem = 0.0;
    double bytes_per_elem = 0.0; ///< at the memory level being modeled
    std::optional<double> measured_gflops;
};

void validate(const CodePoint& point);

enum class Bound { memory, compute };

std::string_view to_string(Bound b);

struct RooflineReport {
    double machine_balance = 0.0; ///< Flop/B
    double code_ai = 0.0;         ///< Flop/B
    Bound bound = Bound::memory;
    double attainable_gflops = 0.0;
    std::optional<double> utilization; ///< measured / attainable
};

double machine_balance(const MachineSpec& spec);
double code_intensity(const CodePoint& point);

/// A code exactly at the balance point counts as compute-bound.
RooflineReport classify(const MachineSpec& spec, const CodePoint& point);

/// Joules. Throws InvalidArgument on negative inputs.
double energy_estimate(double power_w, double time_s);

struct RooflineRow {
    std::string label;
    double ai = 0.0;
    double gflops = 0.0;
    std::string kind; ///< "measured", "attainable" or "roof"
};

struct RooflineDataset {
    MachineSpec machine;
    std::vector<RooflineRow> rows;
    std::vector<RooflineReport> reports; ///< one per input point, same order
};

/// Points first (measured when available, attainable otherwise), then roof
/// samples. The memory roof always includes the knee at the machine balance.
/// An extra compute roof below the peak (for instance from the instruction
/// mix) is sampled as its own "roof" series when given.
RooflineDataset roofline_dataset(const MachineSpec& spec, const std::vector<CodePoint>& points,
                                 std::optional<double> extra_roof_gflops = std::nullopt);

std::string to_csv(const RooflineDataset& data);
/// Indexed gnuplot data: block 0 holds the points, block 1 the roof, block 2
/// the optional extra roof; blocks are separated by two blank lines.
std::string to_gnuplot(const RooflineDataset& data);

/// Built-in machines: "icelake-8360y-socket", "a100-sxm4-40g".
std::optional<MachineSpec> machine_preset(std::string_view name);
std::vector<std::string> machine_preset_names();

enum class MemoryLevel { dram, l2 };

/// One column of a published counter table.
struct PaperColumn {
    std::string label;
    double flops_per_elem = 0.0;
    double loadstore_per_elem = 0.0; ///< global load/store on the GPU
    double dram_bytes_per_elem = 0.0;
    double l2_bytes_per_elem = 0.0;
    double gflops = 0.0;        ///< measured rate reported with the counters
    double time_ms = 0.0;       ///< single-socket (CPU) or kernel (GPU) time
    std::optional<double> time_full_ms; ///< all-core time where reported
};

struct PaperPreset {
    std::string name;
    std::string machine; ///< matching machine preset
    std::vector<PaperColumn> columns;
};

/// Built-in counter tables: "cpu-table1", "gpu-table2".
std::optional<PaperPreset> paper_preset(std::string_view name);
std::vector<std::string> paper_preset_names();

std::vector<CodePoint> code_points(const PaperPreset& preset, MemoryLevel level, bool with_measured = true);

} // namespace tal
