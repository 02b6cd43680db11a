#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subconv/equation.hpp"

namespace subconv {

using ScalarMap = std::function<double(double)>;

/// The set (-alpha, alpha) intersected with pi_k(D), or a translated image.
/// Upper end is open; the lower end is closed when it comes from the domain
/// boundary (e.g. [0, alpha) for non-negative solutions).
struct ThresholdWindow {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_inclusive = false;

    [[nodiscard]] bool contains(double u) const noexcept {
        return (lo_inclusive ? u >= lo : u > lo) && u < hi;
    }
    /// Strict interior (lo, hi).
    [[nodiscard]] bool interior(double u) const noexcept { return u > lo && u < hi; }
};

/// Smallest positive root of g(u) = u. `tangent` marks a touch point where
/// g(u) - u reaches zero without changing sign.
struct Threshold {
    double alpha = kInf;
    bool tangent = false;

    [[nodiscard]] bool finite() const noexcept { return alpha < kInf; }
};

/// A scalar envelope g with |F_n(u)| <= g(u_k), plus its threshold alpha.
struct BoundingFunction {
    std::string formula;
    ScalarMap g;
    Interval domain;  // pi_k(D), where g is defined
    std::size_t dominant_lag = 1;
    Threshold threshold;
    bool informal = false;               // not derivable from |F_n| <= g(u_k)
    std::vector<double> fixed_points;    // positive solutions of g(u) = u, if known

    /// Builds the bound and computes alpha with solve_threshold on (0, search_hi].
    static BoundingFunction make(std::string formula, ScalarMap g, Interval domain,
                                 std::size_t dominant_lag, double search_hi);

    [[nodiscard]] double alpha() const noexcept { return threshold.alpha; }
    [[nodiscard]] ThresholdWindow window() const noexcept;
};

inline constexpr double kDefaultBisectionTol = 1e-12;
inline constexpr std::size_t kDefaultScanSubdivisions = 10000;
inline constexpr std::size_t kDefaultGridPoints = 10000;

/// h(u) = max{g(u), g(-u)}, using only the side that lies in the domain.
[[nodiscard]] ScalarMap symmetrize(const BoundingFunction& bound);

/// Smallest positive root of g(u) = u on (0, search_hi]: a sign-bracketing
/// scan followed by bisection, with touch-point detection between grid
/// nodes. Returns alpha = +inf when g(u) < u on the whole scan. Throws
/// CriterionInapplicable when g(u) >= u arbitrarily close to 0.
[[nodiscard]] Threshold solve_threshold(const ScalarMap& g, double search_hi,
                                        double tol = kDefaultBisectionTol,
                                        std::size_t subdivisions = kDefaultScanSubdivisions);

struct SublinearityVerdict {
    bool holds = true;
    std::optional<double> counterexample;
};

/// Grid falsification of g(u) < |u| on the window (0 excluded). Not a proof.
[[nodiscard]] SublinearityVerdict verify_sublinearity(const ScalarMap& g,
                                                      const ThresholdWindow& window,
                                                      std::size_t grid_points);

/// Grid-checks g(0) = 0, g >= 0 and sublinearity on the bound's window;
/// throws BoundValidationError on failure. Infinite windows are capped.
void validate_bound(const BoundingFunction& bound, std::size_t grid_points = kDefaultGridPoints);

/// Random spot-check of |F_n(u)| <= g(u_k) (exact comparison). Returns the
/// first offending history, if any.
[[nodiscard]] std::optional<std::vector<double>> spot_check_dominance(
    const EquationSpec& eq, const BoundingFunction& bound, std::size_t samples, double box,
    std::uint64_t seed);

struct ChainCheck {
    bool holds = true;
    std::optional<std::size_t> first_violation;  // j of the failing link
    std::size_t links_checked = 0;
    bool terminated_at_zero = false;
};

/// Checks |x_{n0+(j+1)k}| <= h(x_{n0+jk}) < |x_{n0+jk}| for every j in range.
/// An exact zero term ends the chain.
[[nodiscard]] ChainCheck check_inequality_chain(std::span<const double> terms, std::size_t n0,
                                                std::size_t stride, const ScalarMap& h);

struct SubsequencePrediction {
    std::size_t residue_class = 0;
    std::size_t n0 = 0;
    std::size_t stride = 1;
    ChainCheck chain;
};

/// First index of every residue class mod k whose term lies in the window;
/// each predicts x_{n0+jk} -> 0. Only indices n0 >= m - k are eligible, so
/// x_{n0+k} is generated by the map.
[[nodiscard]] std::vector<SubsequencePrediction> predict_subsequence_convergence(
    const EquationSpec& eq, const BoundingFunction& bound, const Trajectory& traj);

/// First n0 with k consecutive terms in the window (the whole solution then
/// tends to 0).
[[nodiscard]] std::optional<std::size_t> predict_full_convergence(const EquationSpec& eq,
                                                                  const BoundingFunction& bound,
                                                                  const Trajectory& traj);

}  // namespace subconv
