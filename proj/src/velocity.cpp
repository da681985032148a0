#include "tal/velocity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

namespace tal {

namespace {

std::vector<std::string> split_args(std::string_view text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',' || ch == ':') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

template <class T>
T parse_number(const std::string& s, std::string_view what)
{
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidArgument("invalid " + std::string(what) + " '" + s + "'");
    return v;
}

} // namespace

std::string InitSpec::to_string() const
{
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
    case InitKind::zero:
        return "zero";
    case InitKind::constant:
        os << "constant:" << constant[0] << "," << constant[1] << "," << constant[2];
        return os.str();
    case InitKind::shear:
        os << "shear:" << gamma;
        return os.str();
    case InitKind::taylor_green:
        return "taylor-green";
    case InitKind::random:
        os << "random:" << seed;
        return os.str();
    }
    return "zero";
}

InitSpec parse_init(std::string_view text, std::uint64_t default_seed)
{
    const std::size_t sep = text.find_first_of(":,");
    const std::string_view name = text.substr(0, sep);
    std::vector<std::string> args;
    if (sep != std::string_view::npos)
        args = split_args(text.substr(sep + 1));

    InitSpec s;
    auto want = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi)
            throw InvalidArgument("wrong number of arguments for initializer '" + std::string(name) + "'");
    };
    if (name == "zero") {
        want(0, 0);
        s.kind = InitKind::zero;
    } else if (name == "constant") {
        want(3, 3);
        s.kind = InitKind::constant;
        for (int i = 0; i < 3; ++i)
            s.constant[i] = parse_number<double>(args[i], "velocity component");
    } else if (name == "shear") {
        want(0, 1);
        s.kind = InitKind::shear;
        if (!args.empty())
            s.gamma = parse_number<double>(args[0], "shear rate");
    } else if (name == "taylor-green") {
        want(0, 0);
        s.kind = InitKind::taylor_green;
    } else if (name == "random") {
        want(0, 1);
        s.kind = InitKind::random;
        s.seed = args.empty() ? default_seed : parse_number<std::uint64_t>(args[0], "seed");
    } else {
        throw InvalidArgument("unknown initializer '" + std::string(name) + "'");
    }
    for (double v : s.constant)
        if (!std::isfinite(v))
            throw InvalidArgument("initializer arguments must be finite");
    if (!std::isfinite(s.gamma))
        throw InvalidArgument("initializer arguments must be finite");
    return s;
}

NodalVelocity make_velocity(const Mesh& mesh, const InitSpec& spec)
{
    NodalVelocity u;
    u.values.assign(mesh.n_nodes(), Vec3{0.0, 0.0, 0.0});
    switch (spec.kind) {
    case InitKind::zero:
        break;
    case InitKind::constant:
        std::fill(u.values.begin(), u.values.end(), spec.constant);
        break;
    case InitKind::shear:
        for (std::size_t n = 0; n < mesh.n_nodes(); ++n)
            u.values[n] = {spec.gamma * mesh.coords[n][1], 0.0, 0.0};
        break;
    case InitKind::taylor_green: {
        if (mesh.n_nodes() == 0)
            break;
        Vec3 lo = mesh.coords.front(), hi = mesh.coords.front();
        for (const Vec3& x : mesh.coords)
            for (int i = 0; i < 3; ++i) {
                lo[i] = std::min(lo[i], x[i]);
                hi[i] = std::max(hi[i], x[i]);
            }
        Vec3 scale{};
        for (int i = 0; i < 3; ++i)
            scale[i] = hi[i] > lo[i] ? 2.0 * std::numbers::pi / (hi[i] - lo[i]) : 0.0;
        for (std::size_t n = 0; n < mesh.n_nodes(); ++n) {
            const double X = (mesh.coords[n][0] - lo[0]) * scale[0];
            const double Y = (mesh.coords[n][1] - lo[1]) * scale[1];
            const double Z = (mesh.coords[n][2] - lo[2]) * scale[2];
            u.values[n] = {std::sin(X) * std::cos(Y) * std::cos(Z), -std::cos(X) * std::sin(Y) * std::cos(Z), 0.0};
        }
        break;
    }
    case InitKind::random: {
        // 53 high bits -> [0,1) keeps the sequence identical across standard libraries
        std::mt19937_64 rng(spec.seed);
        for (Vec3& v : u.values)
            for (double& c : v)
                c = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
        break;
    }
    }
    return u;
}

} // namespace tal
