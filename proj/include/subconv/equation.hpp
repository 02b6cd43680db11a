#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace subconv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    [[nodiscard]] bool contains(double u) const noexcept { return u >= lo && u <= hi; }
};

/// Map evaluator F_n. `history[0]` is the most recent term x_{n-1},
/// `history[m-1]` the oldest x_{n-m}.
using StepMap = std::function<double(std::size_t n, std::span<const double> history)>;

/// How the bound |F_n(u)| <= g(u_k) of an equation is established.
enum class Dominance {
    Analytic,    // guaranteed by the model constructor
    Unverified,  // user-supplied equation, spot-checked at most
};

/// Non-autonomous recurrence x_n = F_n(x_{n-1}, ..., x_{n-m}) of order m
/// over a rectangular domain. Immutable after construction.
struct EquationSpec {
    std::string id;
    std::size_t order = 1;
    std::size_t dominant_lag = 1;
    std::vector<Interval> domain;  // one interval per history coordinate
    StepMap evaluator;
    Dominance dominance = Dominance::Unverified;

    /// Validates order/lag/domain and returns the equation.
    static EquationSpec make(std::string id, std::size_t order, std::size_t dominant_lag,
                             Interval coordinate_domain, StepMap evaluator,
                             Dominance dominance = Dominance::Unverified);

    /// pi_k(D): projection of the domain onto the dominant lag's axis.
    [[nodiscard]] Interval projected_domain() const { return domain.at(dominant_lag - 1); }
};

/// Outcome of generating an orbit.
enum class IterationStatus { Complete, NonFinite };

struct Trajectory {
    std::string equation_id;
    std::size_t order = 0;
    std::vector<double> initial;
    std::vector<double> terms;  // terms[0..order-1] == initial
    IterationStatus status = IterationStatus::Complete;
    std::string diagnostic;

    [[nodiscard]] std::size_t length() const noexcept { return terms.size(); }
    [[nodiscard]] double operator[](std::size_t n) const { return terms[n]; }
};

/// F_n(history). Throws DomainError if the history leaves the domain and
/// NonFiniteError (carrying n) if the value is not finite.
[[nodiscard]] double evaluate_map(const EquationSpec& eq, std::size_t n,
                                  std::span<const double> history);

/// Forward orbit of length order + steps from `initial` (x_0 .. x_{m-1}).
/// A non-finite term truncates the trajectory and sets a diagnostic; a term
/// leaving the domain throws DomainError with its index.
[[nodiscard]] Trajectory iterate(const EquationSpec& eq, std::span<const double> initial,
                                 std::size_t steps);

/// Terms at start, start+stride, start+2*stride, ... within range.
[[nodiscard]] std::vector<double> extract_subsequence(std::span<const double> terms,
                                                      std::size_t start, std::size_t stride);

/// Declared domain check for a candidate initial vector.
void check_initial(const EquationSpec& eq, std::span<const double> initial);

}  // namespace subconv
