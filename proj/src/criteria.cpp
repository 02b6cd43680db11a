#include "subconv/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "subconv/errors.hpp"

namespace subconv {

namespace {

constexpr double kTouchTol = 1e-12;
constexpr double kSmallestScan = 1e-300;

double touch_tol(double u) { return kTouchTol * std::max(1.0, std::abs(u)); }

/// g(u) - u, rejecting non-finite values of g.
double gap(const ScalarMap& g, double u) {
    const double v = g(u);
    if (!std::isfinite(v)) {
        throw ParameterError("bounding function is not finite at u = " + std::to_string(u));
    }
    return v - u;
}

/// Bisection on [a, b] with gap(a) < 0 <= gap(b). Returns the last point
/// where g(u) < u still holds.
double bisect(const ScalarMap& g, double a, double b, double tol) {
    while (b - a > tol) {
        const double mid = a + 0.5 * (b - a);
        if (mid <= a || mid >= b) break;
        if (gap(g, mid) >= 0.0) {
            b = mid;
        } else {
            a = mid;
        }
    }
    return a;
}

struct Peak {
    double u;
    double gap;
};

/// Golden-section maximisation of g(u) - u on [a, b].
Peak golden_max(const ScalarMap& g, double a, double b, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = gap(g, c);
    double fd = gap(g, d);
    for (int it = 0; it < 300 && (b - a) > tol; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = gap(g, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = gap(g, d);
        }
    }
    return fc > fd ? Peak{c, fc} : Peak{d, fd};
}

/// Resolves a near-zero local maximum of g(u) - u inside [a, b], where
/// gap(a) < 0. Returns a threshold when the maximum touches or crosses zero.
std::optional<Threshold> resolve_peak(const ScalarMap& g, double a, double b, double tol) {
    const Peak peak = golden_max(g, a, b, tol);
    if (peak.gap > touch_tol(peak.u)) {
        return Threshold{bisect(g, a, peak.u, tol), false};
    }
    if (peak.gap >= -touch_tol(peak.u)) {
        return Threshold{peak.u, true};
    }
    return std::nullopt;
}

}  // namespace

ThresholdWindow BoundingFunction::window() const noexcept {
    const double a = threshold.alpha;
    ThresholdWindow w;
    w.lo = std::max(-a, domain.lo);
    w.hi = std::min(a, domain.hi);
    w.lo_inclusive = domain.lo > -a;
    return w;
}

BoundingFunction BoundingFunction::make(std::string formula, ScalarMap g, Interval domain,
                                        std::size_t dominant_lag, double search_hi) {
    BoundingFunction bound;
    bound.formula = std::move(formula);
    bound.g = std::move(g);
    bound.domain = domain;
    bound.dominant_lag = dominant_lag;
    bound.threshold = solve_threshold(bound.g, search_hi);
    return bound;
}

ScalarMap symmetrize(const BoundingFunction& bound) {
    return [g = bound.g, dom = bound.domain](double u) {
        const bool pos = dom.contains(u);
        const bool neg = dom.contains(-u);
        if (pos && neg) return std::max(g(u), g(-u));
        if (pos) return g(u);
        if (neg) return g(-u);
        return std::numeric_limits<double>::quiet_NaN();
    };
}

Threshold solve_threshold(const ScalarMap& g, double search_hi, double tol,
                          std::size_t subdivisions) {
    if (!(search_hi > 0.0) || !std::isfinite(search_hi)) {
        throw ParameterError("threshold search interval must be (0, finite positive]");
    }
    if (subdivisions < 2) {
        throw ParameterError("threshold scan needs at least 2 subdivisions");
    }
    double hi = search_hi;
    while (true) {
        const double h = hi / static_cast<double>(subdivisions);
        const double d1 = gap(g, h);
        if (d1 >= 0.0) {
            // zoom towards the origin until g(u) < u is seen
            if (h < kSmallestScan) {
                throw CriterionInapplicable(
                    "g(u) >= u arbitrarily close to 0: sublinearity fails near the origin");
            }
            hi = h;
            continue;
        }
        double prev2_u = 0.0;
        double prev2_d = std::numeric_limits<double>::quiet_NaN();
        double prev_u = h;
        double prev_d = d1;
        for (std::size_t i = 2; i <= subdivisions; ++i) {
            const double u = (i == subdivisions) ? hi : static_cast<double>(i) * h;
            const double du = gap(g, u);
            if (du >= 0.0) {
                if (du <= touch_tol(u) && gap(g, u + h) < 0.0) {
                    if (auto t = resolve_peak(g, prev_u, u + h, tol)) return *t;
                    return Threshold{u, true};
                }
                return Threshold{bisect(g, prev_u, u, tol), false};
            }
            // interior local maximum of g(u) - u at prev_u: possible touch point
            if (!std::isnan(prev2_d) && prev_d > prev2_d && prev_d >= du) {
                if (auto t = resolve_peak(g, prev2_u, u, tol)) return *t;
            }
            prev2_u = prev_u;
            prev2_d = prev_d;
            prev_u = u;
            prev_d = du;
        }
        return Threshold{kInf, false};
    }
}

SublinearityVerdict verify_sublinearity(const ScalarMap& g, const ThresholdWindow& window,
                                        std::size_t grid_points) {
    if (grid_points < 2) {
        throw ParameterError("sublinearity grid needs at least 2 points");
    }
    if (!std::isfinite(window.lo) || !std::isfinite(window.hi) || !(window.lo < window.hi)) {
        throw ParameterError("sublinearity check needs a finite non-empty window");
    }
    const double width = window.hi - window.lo;
    for (std::size_t i = 1; i <= grid_points; ++i) {
        const double u =
            window.lo + width * static_cast<double>(i) / static_cast<double>(grid_points + 1);
        if (u == 0.0) continue;
        const double v = g(u);
        if (!std::isfinite(v)) {
            throw NonFiniteError("bounding function not finite at grid point u = " +
                                     std::to_string(u),
                                 i);
        }
        if (v >= std::abs(u)) {
            return {false, u};
        }
    }
    return {true, std::nullopt};
}

void validate_bound(const BoundingFunction& bound, std::size_t grid_points) {
    constexpr double kCap = 100.0;
    if (!bound.g) {
        throw BoundValidationError("bounding function has no evaluator");
    }
    if (bound.domain.contains(0.0) && bound.g(0.0) != 0.0) {
        throw BoundValidationError("bounding function " + bound.formula + " has g(0) != 0");
    }
    ThresholdWindow w = bound.window();
    w.lo = std::max(w.lo, -kCap);
    w.hi = std::min(w.hi, kCap);
    if (!(w.lo < w.hi)) {
        throw BoundValidationError("bounding function " + bound.formula + " has an empty window");
    }
    const double width = w.hi - w.lo;
    for (std::size_t i = 1; i <= grid_points; ++i) {
        const double u =
            w.lo + width * static_cast<double>(i) / static_cast<double>(grid_points + 1);
        const double v = bound.g(u);
        if (!std::isfinite(v) || v < 0.0) {
            throw BoundValidationError("bounding function " + bound.formula +
                                       " is negative or non-finite at u = " + std::to_string(u));
        }
    }
    SublinearityVerdict verdict;
    try {
        verdict = verify_sublinearity(bound.g, w, grid_points);
    } catch (const Error& e) {
        throw BoundValidationError(e.what());
    }
    if (!verdict.holds) {
        throw BoundValidationError("g(u) < |u| fails for " + bound.formula + " at u = " +
                                   std::to_string(*verdict.counterexample));
    }
}

std::optional<std::vector<double>> spot_check_dominance(const EquationSpec& eq,
                                                        const BoundingFunction& bound,
                                                        std::size_t samples, double box,
                                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uniform_real_distribution<double>> coords;
    for (const auto& iv : eq.domain) {
        coords.emplace_back(std::max(iv.lo, -box), std::min(iv.hi, box));
    }
    std::uniform_int_distribution<std::size_t> steps(eq.order, eq.order + 999);
    std::vector<double> history(eq.order);
    const std::size_t k = eq.dominant_lag;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < eq.order; ++i) history[i] = coords[i](rng);
        const double value = eq.evaluator(steps(rng), history);
        if (!(std::abs(value) <= bound.g(history[k - 1]))) {
            return history;
        }
    }
    return std::nullopt;
}

ChainCheck check_inequality_chain(std::span<const double> terms, std::size_t n0,
                                  std::size_t stride, const ScalarMap& h) {
    if (stride == 0) {
        throw ParameterError("chain stride must be at least 1");
    }
    ChainCheck result;
    for (std::size_t j = 0; n0 + (j + 1) * stride < terms.size(); ++j) {
        const double current = terms[n0 + j * stride];
        if (current == 0.0) {
            result.terminated_at_zero = true;
            break;
        }
        const double next = terms[n0 + (j + 1) * stride];
        const double bound = h(current);
        ++result.links_checked;
        if (!(std::abs(next) <= bound && bound < std::abs(current))) {
            result.holds = false;
            result.first_violation = j;
            break;
        }
    }
    return result;
}

std::vector<SubsequencePrediction> predict_subsequence_convergence(const EquationSpec& eq,
                                                                   const BoundingFunction& bound,
                                                                   const Trajectory& traj) {
    if (bound.dominant_lag != eq.dominant_lag) {
        throw ParameterError("bounding function lag differs from the equation's dominant lag");
    }
    const std::size_t k = eq.dominant_lag;
    const ThresholdWindow window = bound.window();
    const ScalarMap h = symmetrize(bound);
    std::vector<bool> covered(k, false);
    std::size_t remaining = k;
    std::vector<SubsequencePrediction> out;
    const std::size_t first = eq.order > k ? eq.order - k : 0;
    for (std::size_t n = first; n < traj.length() && remaining > 0; ++n) {
        const std::size_t r = n % k;
        if (covered[r] || !window.contains(traj.terms[n])) continue;
        covered[r] = true;
        --remaining;
        out.push_back({r, n, k, check_inequality_chain(traj.terms, n, k, h)});
    }
    return out;
}

std::optional<std::size_t> predict_full_convergence(const EquationSpec& eq,
                                                    const BoundingFunction& bound,
                                                    const Trajectory& traj) {
    const std::size_t k = eq.dominant_lag;
    const ThresholdWindow window = bound.window();
    const std::size_t first = eq.order > k ? eq.order - k : 0;
    std::size_t run = 0;
    for (std::size_t n = first; n < traj.length(); ++n) {
        run = window.contains(traj.terms[n]) ? run + 1 : 0;
        if (run == k) return n + 1 - k;
    }
    return std::nullopt;
}

}  // namespace subconv
