#pragma once

// Instrumented scalar used to check the static per-element counter ledgers.
// The variant kernels are templates over their scalar type; instantiating
// them with CountedReal tallies every arithmetic operation (+ - * / unary
// minus, sqrt, cbrt each count as one Flop, so an FMA counts as two) and
// every intermediate-array access. Comparisons, abs and conversions are free.

#include <cmath>
#include <cstdint>

namespace tal {

struct OpCounts {
    std::uint64_t flops = 0;
    std::uint64_t array_accesses = 0;
};

inline thread_local OpCounts g_op_counts;

inline void reset_op_counts() noexcept { g_op_counts = {}; }

class CountedReal {
public:
    CountedReal() = default;
    CountedReal(double v) : v_(v) {} // NOLINT(google-explicit-constructor)

    double value() const noexcept { return v_; }
    explicit operator double() const noexcept { return v_; }

    friend CountedReal operator+(CountedReal a, CountedReal b) { return tick(a.v_ + b.v_); }
    friend CountedReal operator-(CountedReal a, CountedReal b) { return tick(a.v_ - b.v_); }
    friend CountedReal operator*(CountedReal a, CountedReal b) { return tick(a.v_ * b.v_); }
    friend CountedReal operator/(CountedReal a, CountedReal b) { return tick(a.v_ / b.v_); }
    friend CountedReal operator-(CountedReal a) { return tick(-a.v_); }

    CountedReal& operator+=(CountedReal b) { return *this = *this + b; }
    CountedReal& operator-=(CountedReal b) { return *this = *this - b; }
    CountedReal& operator*=(CountedReal b) { return *this = *this * b; }

    friend auto operator<=>(CountedReal a, CountedReal b) { return a.v_ <=> b.v_; }
    friend bool operator==(CountedReal a, CountedReal b) { return a.v_ == b.v_; }

    friend CountedReal sqrt(CountedReal a) { return tick(std::sqrt(a.v_)); }
    friend CountedReal cbrt(CountedReal a) { return tick(std::cbrt(a.v_)); }
    friend CountedReal abs(CountedReal a) { return CountedReal(std::abs(a.v_)); }

private:
    static CountedReal tick(double v)
    {
        ++g_op_counts.flops;
        return CountedReal(v);
    }

    double v_ = 0.0;
};

template <class Real>
inline constexpr bool is_counted_v = false;
template <>
inline constexpr bool is_counted_v<CountedReal> = true;

inline double to_double(double v) { return v; }
inline double to_double(CountedReal v) { return v.value(); }

} // namespace tal
