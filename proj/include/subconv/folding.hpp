#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>

#include "subconv/analysis.hpp"
#include "subconv/criteria.hpp"
#include "subconv/equation.hpp"
#include "subconv/models.hpp"
#include "subconv/systems.hpp"

namespace subconv {

/// v with f_n(u, v) = w. Throws MissingSolvabilityForm when the system has no
/// sigma, and ParameterError when w is outside the range of f_n(u, .) (the
/// forward residual exceeds 1e-9 relative).
[[nodiscard]] double solve_sigma(const PlanarSystem& sys, std::size_t n, double u, double w);

/// Second-order equation
///   x_n = f_{n-1}(x_{n-1}, g_{n-2}(x_{n-2}, sigma_{n-2}(x_{n-2}, x_{n-1})))
/// with dominant lag 2. Initial values are x_0 and x_1 = f_0(x_0, y_0).
[[nodiscard]] EquationSpec fold_planar(const PlanarSystem& sys);

/// (x_0, f_0(x_0, y_0)).
[[nodiscard]] std::array<double, 2> fold_initial(const PlanarSystem& sys,
                                                 const std::array<double, 2>& initial);

[[nodiscard]] Orbit iterate_system(const PlanarSystem& sys, const std::array<double, 2>& initial,
                                   std::size_t steps);

[[nodiscard]] ThreeDOrbit iterate_system(const ThreeDModel& model,
                                         const std::array<double, 3>& initial, std::size_t steps);

/// |a - b| / max(|a|, |b|); magnitudes below 1e-150 compare as zero since
/// products of such values underflow and carry no relative accuracy.
[[nodiscard]] double relative_deviation(double a, double b) noexcept;

struct FoldConsistency {
    bool pass = true;
    std::size_t compared = 0;
    double max_x_deviation = 0.0;
    std::optional<std::size_t> first_divergent;
    // y_n recovered from the folded x-sequence, compared with mixed
    // tolerance |dy| <= tol * max(1, |y|)
    double max_y_deviation = 0.0;
    std::optional<std::size_t> first_y_divergent;
    std::string diagnostic;
};

/// Direct orbit against the folded trajectory started from (x_0, f_0(x_0, y_0)).
[[nodiscard]] FoldConsistency check_fold_consistency(const PlanarSystem& sys,
                                                     const std::array<double, 2>& initial,
                                                     std::size_t steps, double tol);

/// Direct three-dimensional orbit against the order-3 fold from (x_0, x_1, x_2).
[[nodiscard]] FoldConsistency check_fold_consistency(const ThreeDModel& model,
                                                     const std::array<double, 3>& initial,
                                                     std::size_t steps, double tol);

struct EnvelopeVerdict {
    bool applicable = false;
    Threshold threshold;
    std::string reason;
};

inline constexpr std::size_t kDefaultEnvelopeGrid = 200;
inline constexpr double kDefaultEnvelopeSearchHi = 10.0;

/// H5: f_n(u1, u2) <= f_bar(u2), g_n(u1, u2) <= g_bar(u1) on a grid over
/// [0, search_hi]^2 and every sampled step, f_bar non-decreasing, and
/// alpha = solve_threshold(f_bar o g_bar). Without envelopes a structural
/// probe may still refute H5; otherwise MissingEnvelope is thrown.
[[nodiscard]] EnvelopeVerdict check_H5(const PlanarSystem& sys,
                                       std::size_t grid = kDefaultEnvelopeGrid,
                                       double search_hi = kDefaultEnvelopeSearchHi);

/// H6: f_n(u1, u2) <= f_bar(u1) and alpha = solve_threshold(f_bar).
[[nodiscard]] EnvelopeVerdict check_H6(const PlanarSystem& sys,
                                       std::size_t grid = kDefaultEnvelopeGrid,
                                       double search_hi = kDefaultEnvelopeSearchHi);

/// Same-parity x-subsequence from the first n0 with x_{n0} in [0, alpha)
/// converges monotonically to 0; y_{n0-1+2j} follows through sigma.
[[nodiscard]] ConvergenceReport apply_corollary_syst(const PlanarSystem& sys, const Orbit& orbit,
                                                     const EnvelopeVerdict& h5,
                                                     const AnalysisOptions& options = {});

/// Whole x-tail from the first n0 with x_{n0} in [0, alpha) decreases to 0.
[[nodiscard]] ConvergenceReport apply_corollary_syst0(const PlanarSystem& sys, const Orbit& orbit,
                                                      const EnvelopeVerdict& h6,
                                                      const AnalysisOptions& options = {});

}  // namespace subconv
