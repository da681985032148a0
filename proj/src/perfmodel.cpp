#include "tal/perfmodel.hpp"

#include "tal/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tal {

void validate(const MachineSpec& spec)
{
    if (!(spec.mem_bandwidth > 0.0) || !std::isfinite(spec.mem_bandwidth))
        throw InvalidArgument("machine '" + spec.name + "': memory bandwidth must be > 0");
    if (!(spec.fp_peak > 0.0) || !std::isfinite(spec.fp_peak))
        throw InvalidArgument("machine '" + spec.name + "': peak must be > 0");
    if (spec.power && !(*spec.power >= 0.0))
        throw InvalidArgument("machine '" + spec.name + "': power must be >= 0");
}

void validate(const CodePoint& point)
{
    if (!(point.flops_per_elem > 0.0) || !(point.bytes_per_elem > 0.0))
        throw InvalidArgument("code point '" + point.label + "': flops and bytes must be > 0");
}

std::string_view to_string(Bound b)
{
    return b == Bound::compute ? "compute" : "memory";
}

double machine_balance(const MachineSpec& spec)
{
    validate(spec);
    return spec.fp_peak / spec.mem_bandwidth;
}

double code_intensity(const CodePoint& point)
{
    validate(point);
    return point.flops_per_elem / point.bytes_per_elem;
}

RooflineReport classify(const MachineSpec& spec, const CodePoint& point)
{
    RooflineReport r;
    r.machine_balance = machine_balance(spec);
    r.code_ai = code_intensity(point);
    r.bound = r.code_ai >= r.machine_balance ? Bound::compute : Bound::memory;
    r.attainable_gflops = std::min(spec.fp_peak, r.code_ai * spec.mem_bandwidth);
    if (point.measured_gflops)
        r.utilization = *point.measured_gflops / r.attainable_gflops;
    return r;
}

double energy_estimate(double power_w, double time_s)
{
    if (!(power_w >= 0.0) || !(time_s >= 0.0))
        throw InvalidArgument("energy_estimate: power and time must be >= 0");
    return power_w * time_s;
}

namespace {

void add_roof(std::vector<RooflineRow>& rows, const std::string& label, double bandwidth, double peak,
              double ai_lo, double ai_hi)
{
    const double knee = peak / bandwidth;
    // log-spaced samples on the memory slope, the knee, then the flat part
    constexpr int kSlopeSamples = 8;
    if (ai_lo < knee) {
        const double step = std::log(knee / ai_lo) / kSlopeSamples;
        for (int k = 0; k < kSlopeSamples; ++k) {
            const double ai = ai_lo * std::exp(step * k);
            rows.push_back({label, ai, ai * bandwidth, "roof"});
        }
    }
    rows.push_back({label, knee, peak, "roof"});
    rows.push_back({label, std::max(ai_hi, knee * 2.0), peak, "roof"});
}

} // namespace

RooflineDataset roofline_dataset(const MachineSpec& spec, const std::vector<CodePoint>& points,
                                 std::optional<double> extra_roof_gflops)
{
    if (points.empty())
        throw InvalidArgument("roofline_dataset: at least one code point is required");
    if (extra_roof_gflops && !(*extra_roof_gflops > 0.0))
        throw InvalidArgument("roofline_dataset: extra roof must be > 0");
    RooflineDataset d;
    d.machine = spec;
    const double balance = machine_balance(spec);
    double ai_lo = balance, ai_hi = balance;
    for (const CodePoint& p : points) {
        const RooflineReport r = classify(spec, p);
        d.reports.push_back(r);
        ai_lo = std::min(ai_lo, r.code_ai);
        ai_hi = std::max(ai_hi, r.code_ai);
        if (p.measured_gflops)
            d.rows.push_back({p.label, r.code_ai, *p.measured_gflops, "measured"});
        else
            d.rows.push_back({p.label, r.code_ai, r.attainable_gflops, "attainable"});
    }
    ai_lo /= 2.0;
    ai_hi *= 2.0;
    add_roof(d.rows, spec.name, spec.mem_bandwidth, spec.fp_peak, ai_lo, ai_hi);
    if (extra_roof_gflops)
        add_roof(d.rows, spec.name + " extra roof", spec.mem_bandwidth, std::min(*extra_roof_gflops, spec.fp_peak),
                 ai_lo, ai_hi);
    return d;
}

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

} // namespace

std::string to_csv(const RooflineDataset& data)
{
    std::ostringstream out;
    out << "label,ai_flop_per_byte,gflops,kind\n";
    for (const RooflineRow& r : data.rows)
        out << csv_field(r.label) << ',' << fmt(r.ai) << ',' << fmt(r.gflops) << ',' << r.kind << '\n';
    return out.str();
}

std::string to_gnuplot(const RooflineDataset& data)
{
    std::ostringstream out;
    out << "# machine " << data.machine.name << ", balance " << fmt(machine_balance(data.machine)) << " Flop/B\n";
    out << "# block 0: points (ai gflops label kind)\n";
    for (const RooflineRow& r : data.rows)
        if (r.kind != "roof")
            out << fmt(r.ai) << ' ' << fmt(r.gflops) << " \"" << r.label << "\" " << r.kind << '\n';
    std::string current;
    for (const RooflineRow& r : data.rows) {
        if (r.kind != "roof")
            continue;
        if (r.label != current) {
            current = r.label;
            out << "\n\n# roof: " << current << " (ai gflops)\n";
        }
        out << fmt(r.ai) << ' ' << fmt(r.gflops) << '\n';
    }
    return out.str();
}

std::optional<MachineSpec> machine_preset(std::string_view name)
{
    // Bandwidth and peak are single-socket figures; power is the draw of a
    // whole two-socket node, which is what the all-core timings ran on.
    if (name == "icelake-8360y-socket")
        return MachineSpec{"icelake-8360y-socket", 179.0, 2705.0, 683.0};
    if (name == "a100-sxm4-40g")
        return MachineSpec{"a100-sxm4-40g", 1381.0, 9700.0, 421.0};
    return std::nullopt;
}

std::vector<std::string> machine_preset_names()
{
    return {"icelake-8360y-socket", "a100-sxm4-40g"};
}

std::optional<PaperPreset> paper_preset(std::string_view name)
{
    if (name == "cpu-table1")
        return PaperPreset{"cpu-table1",
                           "icelake-8360y-socket",
                           {
                               {"B", 6316, 6055, 261, 12716, 13.8, 44047, 785},
                               {"RS", 1760, 2516, 218, 1120, 11.9, 15429, 244},
                               {"RSP", 1249, 639, 241, 932, 14.2, 8400, 122},
                           }};
    if (name == "gpu-table2")
        return PaperPreset{"gpu-table2",
                           "a100-sxm4-40g",
                           {
                               {"B", 6293, 6218, 23331, 35507, 163, 3773, std::nullopt},
                               {"P", 6148, 483, 18721, 23837, 393, 1536, std::nullopt},
                               {"RS", 1663, 960, 1170, 3052, 829, 197, std::nullopt},
                               {"RSP", 1391, 50, 442, 1304, 2020, 68, std::nullopt},
                               {"RSPR", 1333, 71, 150, 968, 2575, 51, std::nullopt},
                           }};
    return std::nullopt;
}

std::vector<std::string> paper_preset_names()
{
    return {"cpu-table1", "gpu-table2"};
}

std::vector<CodePoint> code_points(const PaperPreset& preset, MemoryLevel level, bool with_measured)
{
    std::vector<CodePoint> pts;
    for (const PaperColumn& c : preset.columns) {
        CodePoint p;
        p.label = c.label;
        p.flops_per_elem = c.flops_per_elem;
        p.bytes_per_elem = level == MemoryLevel::dram ? c.dram_bytes_per_elem : c.l2_bytes_per_elem;
        if (level == MemoryLevel::l2)
            p.label += " (L2)";
        if (with_measured)
            p.measured_gflops = c.gflops;
        pts.push_back(p);
    }
    return pts;
}

} // namespace tal
