#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <vector>

namespace subconv {

/// Lower and upper bound of a real sequence.
struct Bounds {
    double inf = 0.0;
    double sup = 0.0;
};

/// A bounded real parameter sequence p_0, p_1, ... .
///
/// Three finite representations are supported: a constant, a periodic list,
/// and a table whose entries are followed by a fallback value for all later
/// indices. Every sequence carries declared inf/sup metadata; the stored
/// values are checked against it at construction, so any emitted value lies
/// inside the declared bounds.
class ParameterSequence {
public:
    enum class Kind { Constant, Periodic, Tabulated };

    ParameterSequence() = default;

    static ParameterSequence constant(double value);

    /// Periodic sequence; declared bounds default to the exact min/max.
    static ParameterSequence periodic(
        std::vector<double> values,
        double declared_inf = -std::numeric_limits<double>::infinity(),
        double declared_sup = std::numeric_limits<double>::infinity());

    /// Tabulated sequence, `fallback` is used for n >= values.size().
    static ParameterSequence tabulated(
        std::vector<double> values, double fallback,
        double declared_inf = -std::numeric_limits<double>::infinity(),
        double declared_sup = std::numeric_limits<double>::infinity());

    [[nodiscard]] double at(std::size_t n) const noexcept;
    [[nodiscard]] double operator[](std::size_t n) const noexcept { return at(n); }

    /// Declared bounds tightened to the exact min/max of the stored values.
    /// Throws ParameterError naming the index of a stored value outside the
    /// declared bounds.
    [[nodiscard]] Bounds bounds() const;

    [[nodiscard]] double declared_inf() const noexcept { return declared_inf_; }
    [[nodiscard]] double declared_sup() const noexcept { return declared_sup_; }

    /// Number of leading indices that exhaust every distinct value:
    /// 1 for a constant, the period, or the table size plus the fallback.
    [[nodiscard]] std::size_t sampling_span() const noexcept;

    [[nodiscard]] bool is_constant() const noexcept { return kind_ == Kind::Constant; }
    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] double fallback() const noexcept { return fallback_; }

private:
    Kind kind_ = Kind::Constant;
    std::vector<double> values_{0.0};
    double fallback_ = 0.0;
    double declared_inf_ = 0.0;
    double declared_sup_ = 0.0;
};

/// Number of step indices to sample so that every combination of values of
/// the given sequences is visited (lcm of periods plus the longest table).
[[nodiscard]] std::size_t joint_sampling_span(
    std::initializer_list<const ParameterSequence*> sequences,
    std::size_t cap = 10000);

}  // namespace subconv
