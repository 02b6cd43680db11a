#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "subconv/criteria.hpp"
#include "subconv/equation.hpp"
#include "subconv/parameter_sequence.hpp"
#include "subconv/systems.hpp"

namespace subconv {

/// An equation with the envelope used for its predictions.
struct ScalarModel {
    EquationSpec equation;
    BoundingFunction bound;
    /// Bound derivable from |F_n| <= g(u_k); equals `bound` unless that one is
    /// flagged informal.
    BoundingFunction rigorous_bound;
};

// ---------------------------------------------------------------------------
// Generalized Ricker family
//   x_n = x_{n-k}^lambda exp(a_n - b_{1,n} x_{n-1} - ... - b_{m,n} x_{n-m})
// Evaluation order: e = a_n, then e -= b_{i,n} * u_i for i = 1..m, and the
// result is pow(u_k, lambda) * exp(e).
// ---------------------------------------------------------------------------

struct RickerFamilySpec {
    double lambda = 2.0;
    std::size_t k = 1;
    std::size_t m = 1;
    ParameterSequence a = ParameterSequence::constant(0.0);
    std::vector<ParameterSequence> b;  // b[i] holds b_{i+1,n}
    /// Permit inf b_{k,n} = 0 (used by the k = 1 variant of the sp3 example).
    bool allow_zero_dominant = false;

    [[nodiscard]] double a_sup() const { return a.bounds().sup; }
    [[nodiscard]] double b_inf() const { return b.at(k - 1).bounds().inf; }
};

/// Equation on [0, inf)^m with g(u) = u^lambda exp(a_sup - b_inf u) and
/// alpha = u* computed by solve_threshold.
[[nodiscard]] ScalarModel make_generalized_ricker(const RickerFamilySpec& spec);

struct LamCondition {
    bool holds = false;
    double rhs = 0.0;
    bool equality = false;  // boundary case: the two fixed points merge
};

/// a >= (lambda - 1)(1 + ln b - ln(lambda - 1)).
[[nodiscard]] LamCondition check_lam_condition(double lambda, double a_sup, double b_inf);

struct RickerFixedPoints {
    enum class Kind { None, Tangent, Pair };
    Kind kind = Kind::None;
    double lower = 0.0;  // u*
    double upper = 0.0;  // u-bar (== lower when tangent)
};

/// Positive roots of u^lambda e^{a - b u} = u via bisection on
/// (lambda - 1) ln u = b u - a, bracketed around the peak (lambda - 1)/b.
[[nodiscard]] RickerFixedPoints ricker_fixed_points(double lambda, double a, double b);

/// x_n = x_{n-k}^{3/2} exp(1.5 - 0.7 x_{n-2} - 0.9 x_{n-3}), k in {1, 2, 3}.
/// For k = 1 `bound` is the informal envelope u^{3/2} e^{1.5 - 1.6 u} and
/// `rigorous_bound` is u^{3/2} e^{1.5}.
[[nodiscard]] ScalarModel make_sp3(int k);

// ---------------------------------------------------------------------------
// Sigmoid Beverton-Holt with delay
//   x_n = a_n (x_{n-k} - b)^p / (1 + c_n x_{n-l}^{q_n}) + b
// ---------------------------------------------------------------------------

/// p = num/den with odd den, so that negative bases have a real power:
/// (-x)^p = (-1)^num x^p.
struct RationalExponent {
    long num = 1;
    long den = 1;

    [[nodiscard]] double value() const noexcept {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    /// Real branch of base^p.
    [[nodiscard]] double apply(double base) const;
    /// Parses "3" or "2/3".
    static RationalExponent parse(const std::string& text);
};

struct SigmoidBHSpec {
    ParameterSequence a = ParameterSequence::constant(1.0);
    ParameterSequence c = ParameterSequence::constant(0.0);
    ParameterSequence q = ParameterSequence::constant(1.0);
    RationalExponent p{2, 1};
    double b = 0.0;
    std::size_t k = 1;
    std::size_t l = 1;

    [[nodiscard]] std::size_t order() const noexcept { return k > l ? k : l; }
};

[[nodiscard]] EquationSpec make_sigmoid_bh(const SigmoidBHSpec& spec);

/// The equation shifted so that the fixed point b sits at the origin, in the
/// closed form y_n = a_n y_{n-k}^p / (1 + c_n (y_{n-l} + b)^{q_n}) on
/// [-b, inf)^m.
[[nodiscard]] EquationSpec make_sigmoid_bh_translated(const SigmoidBHSpec& spec);

/// Generic translation: evaluator'(n, v) = evaluator(n, v + b) - b on the
/// shifted domain. Throws ParameterError when b is not a fixed value.
[[nodiscard]] EquationSpec translate_to_origin(const EquationSpec& eq, double fixed_point);

/// (max{0, b - alpha}, b + alpha) with alpha = a_sup^{-1/(p-1)}.
[[nodiscard]] ThresholdWindow sigmoid_bh_window(double a_sup, double p, double b);

struct SigmoidModel {
    EquationSpec equation;    // original coordinates
    EquationSpec translated;  // y = x - b
    BoundingFunction bound;   // g(u) = a_sup |u|^p on [-b, inf), translated coordinates
    ThresholdWindow window;   // original coordinates
    double fixed_point = 0.0;
};

[[nodiscard]] SigmoidModel make_sigmoid_bh_model(const SigmoidBHSpec& spec);

// ---------------------------------------------------------------------------
// Planar population systems
// ---------------------------------------------------------------------------

/// x_{n+1} = s_n y_n, y_{n+1} = x_n^lambda exp(r_n - x_n - t_n y_n).
[[nodiscard]] PlanarSystem make_adult_juvenile(const ParameterSequence& s,
                                               const ParameterSequence& t,
                                               const ParameterSequence& r, double lambda);

struct CompetitionParams {
    ParameterSequence r1 = ParameterSequence::constant(1.0);
    ParameterSequence r2 = ParameterSequence::constant(1.0);
    ParameterSequence a1 = ParameterSequence::constant(1.0);
    ParameterSequence a2 = ParameterSequence::constant(1.0);
    ParameterSequence b1 = ParameterSequence::constant(0.0);
    ParameterSequence b2 = ParameterSequence::constant(0.0);
    double delta1 = 2.0;
    double delta2 = 2.0;
    double delta3 = 1.0;
    double delta4 = 1.0;
};

/// Ricker-Beverton-Holt competition
///   x_{n+1} = r1 x^d1 / (a1 + x^d1 + b1 y^d3), y_{n+1} = r2 y^d2 / (a2 + y^d2 + b2 x^d4)
/// or, when `swapped`, the same with x_n and y_n exchanged on the right-hand
/// sides. The unswapped system carries the H6 envelope, the swapped one the
/// H5 envelopes.
[[nodiscard]] PlanarSystem make_competition(const CompetitionParams& params, bool swapped);

/// Smallest positive root of u^d1 - r1 u^(d1-1) + a1 = 0, or +inf.
[[nodiscard]] Threshold competition_threshold(double r1, double a1, double delta1);

// ---------------------------------------------------------------------------
// Three-dimensional example and its order-3 fold
//   x_n = x_{n-3}^{cr} exp(a_{n-1} + cr ln s - b x_{n-1} - (c p_{n-2} + d s) x_{n-2} - c q s x_{n-3})
// ---------------------------------------------------------------------------

struct ThreeDModel {
    ThreeDParams params;
    EquationSpec folded;
    /// Ricker envelope for the fold when cr > 1 and every coefficient is
    /// non-negative.
    std::optional<BoundingFunction> bound;
    /// The fold as a Ricker-family spec (constant a_n and p_n only).
    std::optional<RickerFamilySpec> ricker_form;

    [[nodiscard]] std::array<double, 3> step(std::size_t n, const std::array<double, 3>& state) const;
};

[[nodiscard]] ThreeDModel make_3d_example(const ThreeDParams& params);

}  // namespace subconv
