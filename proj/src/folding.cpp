#include "subconv/folding.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "subconv/errors.hpp"

namespace subconv {

namespace {

constexpr double kSigmaResidualTol = 1e-9;
constexpr double kNegligible = 1e-150;

std::vector<double> uniform_grid(double hi, std::size_t points) {
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = hi * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return out;
}

EnvelopeVerdict fails(std::string reason) {
    EnvelopeVerdict v;
    v.applicable = false;
    v.reason = std::move(reason);
    return v;
}

EnvelopeVerdict threshold_of(const ScalarMap& h, double search_hi, const char* what) {
    EnvelopeVerdict v;
    try {
        v.threshold = solve_threshold(h, search_hi);
    } catch (const CriterionInapplicable& e) {
        return fails(fmt::format("{}: {}", what, e.what()));
    }
    v.applicable = true;
    return v;
}

PredictionReport x_prediction(const Orbit& orbit, std::size_t n0, std::size_t stride,
                              const ScalarMap& h, const AnalysisOptions& options) {
    PredictionReport pr;
    pr.variable = "x";
    pr.n0 = n0;
    pr.stride = stride;
    pr.residue_class = n0 % stride;
    pr.chain = check_inequality_chain(orbit.x, n0, stride, h);
    const auto subseq = extract_subsequence(orbit.x, n0, stride);
    pr.monotone = verify_monotone_to_zero(subseq, options.zero_tol);
    if (!pr.chain.holds || pr.monotone.status == MonotoneCheck::Status::Violation) {
        pr.verdict = Verdict::Violated;
    } else if (pr.monotone.status == MonotoneCheck::Status::Verified) {
        pr.verdict = Verdict::ConvergingToZero;
    }
    const std::size_t keep = std::min(options.tail_length, subseq.size());
    pr.subsequence_tail.assign(subseq.end() - static_cast<std::ptrdiff_t>(keep), subseq.end());
    return pr;
}

void add_limits(ConvergenceReport& report, const Orbit& orbit, std::size_t stride,
                const AnalysisOptions& options) {
    std::vector<double> candidates{0.0};
    candidates.insert(candidates.end(), options.extra_candidates.begin(),
                      options.extra_candidates.end());
    for (const char* var : {"x", "y"}) {
        const std::vector<double>& seq = var[0] == 'x' ? orbit.x : orbit.y;
        for (std::size_t r = 0; r < stride && r < seq.size(); ++r) {
            report.limits.push_back(
                {var, r, classify_limit(extract_subsequence(seq, r, stride), candidates,
                                        options.limit_tol)});
        }
    }
}

ConvergenceReport system_report(const PlanarSystem& sys, const Orbit& orbit,
                                const EnvelopeVerdict& verdict, std::size_t stride,
                                const char* hypothesis) {
    if (!verdict.applicable) {
        throw CriterionInapplicable(fmt::format("{} is not established for {}: {}", hypothesis,
                                                sys.id, verdict.reason));
    }
    ConvergenceReport report;
    report.equation_id = sys.id;
    report.stride = stride;
    report.threshold = verdict.threshold;
    report.window = ThresholdWindow{0.0, verdict.threshold.alpha, true};
    if (orbit.status != IterationStatus::Complete) {
        report.notes.push_back("orbit truncated: " + orbit.diagnostic);
    }
    return report;
}

}  // namespace

double solve_sigma(const PlanarSystem& sys, std::size_t n, double u, double w) {
    double v = 0.0;
    switch (sys.sigma.kind) {
        case SigmaKind::None:
            throw MissingSolvabilityForm(sys.id + " has no solvability form for f_n(u, v) = w");
        case SigmaKind::Multiplicative: {
            const double rho = sys.sigma.rho(n, u);
            if (!(rho > 0.0)) {
                throw ParameterError(fmt::format("rho_{}({}) = {} is not positive", n, u, rho));
            }
            v = sys.sigma.phi_inverse(n, w / rho);
            break;
        }
        case SigmaKind::Additive:
            v = sys.sigma.phi_inverse(n, w - sys.sigma.rho(n, u));
            break;
        case SigmaKind::Custom:
            v = sys.sigma.custom(n, u, w);
            break;
    }
    if (!std::isfinite(v) || !sys.domain_y.contains(v)) {
        throw ParameterError(fmt::format("sigma_{}({}, {}) = {} is outside the y-domain", n, u, w, v));
    }
    const double back = sys.f(n, u, v);
    const double scale = std::max({std::abs(w), std::abs(back), kNegligible});
    if (std::abs(back - w) > kSigmaResidualTol * scale) {
        throw ParameterError(fmt::format("w = {} is outside the range of f_{}({}, .) (f = {})", w,
                                         n, u, back));
    }
    return v;
}

EquationSpec fold_planar(const PlanarSystem& sys) {
    if (!sys.has_sigma()) {
        throw MissingSolvabilityForm(sys.id + " cannot be folded: no solvability form");
    }
    StepMap evaluator = [sys](std::size_t n, std::span<const double> u) {
        const double y_prev = solve_sigma(sys, n - 2, u[1], u[0]);
        return sys.f(n - 1, u[0], sys.g(n - 2, u[1], y_prev));
    };
    return EquationSpec::make(sys.id + " folded", 2, 2, sys.domain_x, std::move(evaluator),
                              Dominance::Unverified);
}

std::array<double, 2> fold_initial(const PlanarSystem& sys, const std::array<double, 2>& initial) {
    return {initial[0], sys.f(0, initial[0], initial[1])};
}

Orbit iterate_system(const PlanarSystem& sys, const std::array<double, 2>& initial,
                     std::size_t steps) {
    if (!sys.domain_x.contains(initial[0]) || !sys.domain_y.contains(initial[1])) {
        throw DomainError(fmt::format("initial point ({}, {}) outside the domain", initial[0],
                                      initial[1]),
                          0);
    }
    Orbit orbit;
    orbit.initial = initial;
    orbit.x.reserve(steps + 1);
    orbit.y.reserve(steps + 1);
    orbit.x.push_back(initial[0]);
    orbit.y.push_back(initial[1]);
    for (std::size_t n = 0; n < steps; ++n) {
        const double x = sys.f(n, orbit.x[n], orbit.y[n]);
        const double y = sys.g(n, orbit.x[n], orbit.y[n]);
        if (!std::isfinite(x) || !std::isfinite(y)) {
            orbit.status = IterationStatus::NonFinite;
            orbit.diagnostic = fmt::format("non-finite state at n = {} (x = {}, y = {})", n + 1, x, y);
            break;
        }
        if (!sys.domain_x.contains(x) || !sys.domain_y.contains(y)) {
            throw DomainError(fmt::format("({}, {}) at n = {} leaves the domain", x, y, n + 1),
                              n + 1);
        }
        orbit.x.push_back(x);
        orbit.y.push_back(y);
    }
    return orbit;
}

ThreeDOrbit iterate_system(const ThreeDModel& model, const std::array<double, 3>& initial,
                           std::size_t steps) {
    ThreeDOrbit orbit;
    orbit.initial = initial;
    orbit.x.push_back(initial[0]);
    orbit.y.push_back(initial[1]);
    orbit.z.push_back(initial[2]);
    std::array<double, 3> state = initial;
    for (std::size_t n = 0; n < steps; ++n) {
        const auto next = model.step(n, state);
        if (!std::isfinite(next[0]) || !std::isfinite(next[1]) || !std::isfinite(next[2])) {
            orbit.status = IterationStatus::NonFinite;
            orbit.diagnostic = fmt::format("non-finite state at n = {}", n + 1);
            break;
        }
        state = next;
        orbit.x.push_back(state[0]);
        orbit.y.push_back(state[1]);
        orbit.z.push_back(state[2]);
    }
    return orbit;
}

double relative_deviation(double a, double b) noexcept {
    if (a == b) return 0.0;
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale < kNegligible) return 0.0;
    return std::abs(a - b) / scale;
}

FoldConsistency check_fold_consistency(const PlanarSystem& sys,
                                       const std::array<double, 2>& initial, std::size_t steps,
                                       double tol) {
    FoldConsistency out;
    const Orbit orbit = iterate_system(sys, initial, steps);
    Trajectory folded;
    try {
        const EquationSpec eq = fold_planar(sys);
        const auto init = fold_initial(sys, initial);
        folded = iterate(eq, init, steps >= 1 ? steps - 1 : 0);
    } catch (const Error& e) {
        out.pass = false;
        out.diagnostic = fmt::format("folded iteration failed: {}", e.what());
        return out;
    }
    const std::size_t len = std::min(orbit.length(), folded.length());
    out.compared = len;
    for (std::size_t n = 0; n < len; ++n) {
        const double dev = relative_deviation(orbit.x[n], folded[n]);
        out.max_x_deviation = std::max(out.max_x_deviation, dev);
        if (dev > tol && !out.first_divergent) out.first_divergent = n;
    }
    // y_n = sigma_n(x_n, x_{n+1}) from the folded sequence
    for (std::size_t n = 0; n + 1 < len; ++n) {
        double y = 0.0;
        try {
            y = solve_sigma(sys, n, folded[n], folded[n + 1]);
        } catch (const Error& e) {
            out.pass = false;
            out.first_y_divergent = n;
            out.diagnostic = fmt::format("y recovery failed at n = {}: {}", n, e.what());
            break;
        }
        const double dev = std::abs(y - orbit.y[n]) / std::max(1.0, std::abs(orbit.y[n]));
        out.max_y_deviation = std::max(out.max_y_deviation, dev);
        if (dev > tol && !out.first_y_divergent) out.first_y_divergent = n;
    }
    if (out.first_divergent || out.first_y_divergent) out.pass = false;
    if (!out.pass && out.diagnostic.empty()) {
        out.diagnostic = fmt::format("max deviation x {:.3g}, y {:.3g}", out.max_x_deviation,
                                     out.max_y_deviation);
    }
    return out;
}

FoldConsistency check_fold_consistency(const ThreeDModel& model,
                                       const std::array<double, 3>& initial, std::size_t steps,
                                       double tol) {
    FoldConsistency out;
    const ThreeDOrbit orbit = iterate_system(model, initial, steps);
    if (orbit.length() < 3) {
        out.compared = orbit.length();
        return out;
    }
    Trajectory folded;
    try {
        const std::vector<double> init{orbit.x[0], orbit.x[1], orbit.x[2]};
        folded = iterate(model.folded, init, orbit.length() - 3);
    } catch (const Error& e) {
        out.pass = false;
        out.diagnostic = fmt::format("folded iteration failed: {}", e.what());
        return out;
    }
    const std::size_t len = std::min(orbit.length(), folded.length());
    out.compared = len;
    for (std::size_t n = 0; n < len; ++n) {
        const double dev = relative_deviation(orbit.x[n], folded[n]);
        out.max_x_deviation = std::max(out.max_x_deviation, dev);
        if (dev > tol && !out.first_divergent) out.first_divergent = n;
    }
    if (out.first_divergent) {
        out.pass = false;
        out.diagnostic = fmt::format("x diverges from n = {} (max deviation {:.3g})",
                                     *out.first_divergent, out.max_x_deviation);
    }
    return out;
}

EnvelopeVerdict check_H5(const PlanarSystem& sys, std::size_t grid, double search_hi) {
    if (grid < 2 || !(search_hi > 0.0)) throw ParameterError("envelope check needs a grid");
    const std::vector<double> pts = uniform_grid(search_hi, grid);
    const std::size_t span = std::max<std::size_t>(1, sys.sampling_span);

    if (!sys.h5_f_bar || !sys.h5_g_bar) {
        // H5 forces f_n(u1, u2) -> 0 as u2 -> 0 uniformly in u1
        constexpr double v = 1e-9;
        for (std::size_t n = 0; n < span; ++n) {
            for (double u : pts) {
                const double f = sys.f(n, u, v);
                if (f > 1e-6) {
                    return fails(fmt::format(
                        "f_{}({}, {}) = {}: f_n does not vanish with u2 uniformly in u1", n, u, v, f));
                }
            }
        }
        throw MissingEnvelope(sys.id + ": no H5 envelopes supplied");
    }
    const auto& f_bar = *sys.h5_f_bar;
    const auto& g_bar = *sys.h5_g_bar;
    for (std::size_t n = 0; n < span; ++n) {
        for (double u1 : pts) {
            const double gb = g_bar(u1);
            for (double u2 : pts) {
                const double f = sys.f(n, u1, u2);
                if (f > f_bar(u2)) {
                    return fails(fmt::format("f_{}({}, {}) = {} exceeds f_bar({}) = {}", n, u1, u2,
                                             f, u2, f_bar(u2)));
                }
                const double g = sys.g(n, u1, u2);
                if (g > gb) {
                    return fails(fmt::format("g_{}({}, {}) = {} exceeds g_bar({}) = {}", n, u1, u2,
                                             g, u1, gb));
                }
            }
        }
    }
    const std::vector<double> fine = uniform_grid(search_hi, kDefaultGridPoints);
    for (std::size_t i = 1; i < fine.size(); ++i) {
        if (f_bar(fine[i]) < f_bar(fine[i - 1])) {
            return fails(fmt::format("f_bar decreases between {} and {}", fine[i - 1], fine[i]));
        }
    }
    return threshold_of([&](double u) { return f_bar(g_bar(u)); }, search_hi, "f_bar o g_bar");
}

EnvelopeVerdict check_H6(const PlanarSystem& sys, std::size_t grid, double search_hi) {
    if (grid < 2 || !(search_hi > 0.0)) throw ParameterError("envelope check needs a grid");
    const std::vector<double> pts = uniform_grid(search_hi, grid);
    const std::size_t span = std::max<std::size_t>(1, sys.sampling_span);

    if (!sys.h6_f_bar) {
        // a sublinear f_bar(u1) forces f_n(u1, u2) < u1 near 0 for every u2
        bool refuted = true;
        std::string witness;
        for (double u1 : {1e-3, 1e-5, 1e-7, 1e-9}) {
            bool found = false;
            for (std::size_t n = 0; n < span && !found; ++n) {
                for (double u2 : pts) {
                    const double f = sys.f(n, u1, u2);
                    if (f >= u1) {
                        found = true;
                        witness = fmt::format("f_{}({}, {}) = {} >= u1", n, u1, u2, f);
                        break;
                    }
                }
            }
            refuted = refuted && found;
        }
        if (refuted) {
            return fails(witness + ": f_n is not bounded by a sublinear envelope of u1 alone");
        }
        throw MissingEnvelope(sys.id + ": no H6 envelope supplied");
    }
    const auto& f_bar = *sys.h6_f_bar;
    for (std::size_t n = 0; n < span; ++n) {
        for (double u1 : pts) {
            const double fb = f_bar(u1);
            for (double u2 : pts) {
                const double f = sys.f(n, u1, u2);
                if (f > fb) {
                    return fails(fmt::format("f_{}({}, {}) = {} exceeds f_bar({}) = {}", n, u1, u2,
                                             f, u1, fb));
                }
            }
        }
    }
    return threshold_of(f_bar, search_hi, "f_bar");
}

ConvergenceReport apply_corollary_syst(const PlanarSystem& sys, const Orbit& orbit,
                                       const EnvelopeVerdict& h5, const AnalysisOptions& options) {
    ConvergenceReport report = system_report(sys, orbit, h5, 2, "H5");
    add_limits(report, orbit, 2, options);
    std::optional<std::size_t> n0;
    for (std::size_t n = 0; n < orbit.length(); ++n) {
        if (report.window.contains(orbit.x[n])) {
            n0 = n;
            break;
        }
    }
    if (!n0) return report;
    report.crossing_index = n0;

    const auto& f_bar = *sys.h5_f_bar;
    const auto& g_bar = *sys.h5_g_bar;
    PredictionReport xp =
        x_prediction(orbit, *n0, 2, [&](double u) { return f_bar(g_bar(u)); }, options);
    report.chain_verified = xp.chain.holds;
    report.predictions.push_back(std::move(xp));

    // y_{n0-1+2j} = sigma(x_{n0-1+2j}, x_{n0+2j})
    const std::size_t y_start = *n0 >= 1 ? *n0 - 1 : *n0 + 1;
    std::vector<double> ys;
    bool via_sigma = sys.has_sigma();
    for (std::size_t n = y_start; n < orbit.length(); n += 2) {
        double y = orbit.y[n];
        if (via_sigma && n + 1 < orbit.length()) {
            try {
                y = solve_sigma(sys, n, orbit.x[n], orbit.x[n + 1]);
            } catch (const Error&) {
                via_sigma = false;
            }
        }
        ys.push_back(y);
    }
    if (!via_sigma && sys.has_sigma()) {
        report.notes.emplace_back("sigma failed on the orbit; y taken from the direct iteration");
    }
    if (!ys.empty()) {
        PredictionReport yp;
        yp.variable = "y";
        yp.n0 = y_start;
        yp.stride = 2;
        yp.residue_class = y_start % 2;
        yp.chain_checked = false;
        yp.monotone = verify_monotone_to_zero(ys, options.zero_tol);
        const std::vector<double> zero{0.0};
        if (yp.monotone.status == MonotoneCheck::Status::Verified ||
            classify_limit(ys, zero, options.zero_tol).kind == LimitClassification::Kind::Zero) {
            yp.verdict = Verdict::ConvergingToZero;
        }
        const std::size_t keep = std::min(options.tail_length, ys.size());
        yp.subsequence_tail.assign(ys.end() - static_cast<std::ptrdiff_t>(keep), ys.end());
        report.predictions.push_back(std::move(yp));
    }
    return report;
}

ConvergenceReport apply_corollary_syst0(const PlanarSystem& sys, const Orbit& orbit,
                                        const EnvelopeVerdict& h6, const AnalysisOptions& options) {
    ConvergenceReport report = system_report(sys, orbit, h6, 1, "H6");
    add_limits(report, orbit, 1, options);
    std::optional<std::size_t> n0;
    for (std::size_t n = 0; n < orbit.length(); ++n) {
        if (report.window.contains(orbit.x[n])) {
            n0 = n;
            break;
        }
    }
    if (!n0) return report;
    report.crossing_index = n0;
    report.full_convergence_from = n0;
    PredictionReport xp = x_prediction(orbit, *n0, 1, *sys.h6_f_bar, options);
    report.chain_verified = xp.chain.holds;
    report.predictions.push_back(std::move(xp));
    report.notes.emplace_back("y is not constrained by the envelope; see its limit classification");
    return report;
}

}  // namespace subconv
