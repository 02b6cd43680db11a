#include "subconv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subconv/errors.hpp"

namespace subconv {

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::ConvergingToZero: return "converging-to-zero";
        case Verdict::ConvergingToFixedPoint: return "converging-to-fixed-point";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::Violated: return "violated";
    }
    return "unknown";
}

const char* to_string(MonotoneCheck::Status s) noexcept {
    switch (s) {
        case MonotoneCheck::Status::Verified: return "verified";
        case MonotoneCheck::Status::Violation: return "violation";
        case MonotoneCheck::Status::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

const char* to_string(LimitClassification::Kind k) noexcept {
    switch (k) {
        case LimitClassification::Kind::Zero: return "zero";
        case LimitClassification::Kind::FixedPoint: return "fixed-point";
        case LimitClassification::Kind::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

bool ConvergenceReport::any_violated() const noexcept {
    return std::any_of(predictions.begin(), predictions.end(),
                       [](const PredictionReport& p) { return p.verdict == Verdict::Violated; });
}

const PredictionReport* ConvergenceReport::find(std::size_t residue_class,
                                                const std::string& variable) const noexcept {
    for (const auto& p : predictions) {
        if (p.residue_class == residue_class && p.variable == variable) return &p;
    }
    return nullptr;
}

std::optional<std::size_t> detect_crossing(std::span<const double> terms,
                                           const ThresholdWindow& window, std::size_t from_index) {
    for (std::size_t n = from_index; n < terms.size(); ++n) {
        if (window.interior(terms[n])) return n;
    }
    return std::nullopt;
}

MonotoneCheck verify_monotone_to_zero(std::span<const double> subseq, double tol) {
    if (subseq.empty()) {
        throw ParameterError("monotonicity check needs a non-empty subsequence");
    }
    MonotoneCheck out;
    for (std::size_t j = 0; j + 1 < subseq.size(); ++j) {
        const double current = std::abs(subseq[j]);
        const double next = std::abs(subseq[j + 1]);
        if (current == 0.0) {
            for (std::size_t i = j + 1; i < subseq.size(); ++i) {
                if (subseq[i] != 0.0) {
                    out.status = MonotoneCheck::Status::Violation;
                    out.violation_at = i;
                    return out;
                }
            }
            break;
        }
        if (!(next < current)) {
            out.status = MonotoneCheck::Status::Violation;
            out.violation_at = j + 1;
            return out;
        }
    }
    out.status = std::abs(subseq.back()) < tol ? MonotoneCheck::Status::Verified
                                               : MonotoneCheck::Status::Inconclusive;
    return out;
}

LimitClassification classify_limit(std::span<const double> subseq,
                                   std::span<const double> candidates, double tol) {
    LimitClassification out;
    if (subseq.empty()) return out;

    const std::size_t len = subseq.size();
    const std::size_t tail_len = std::min(len, std::max<std::size_t>(4, len / 4));
    const auto tail = subseq.subspan(len - tail_len);
    out.tail_mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail_len);
    const auto [mn, mx] = std::minmax_element(tail.begin(), tail.end());
    out.tail_width = *mx - *mn;

    const bool zero_candidate = std::find(candidates.begin(), candidates.end(), 0.0) != candidates.end();
    if (zero_candidate &&
        verify_monotone_to_zero(subseq, tol).status == MonotoneCheck::Status::Verified) {
        out.kind = LimitClassification::Kind::Zero;
        out.value = 0.0;
        return out;
    }
    if (candidates.empty() || !std::isfinite(out.tail_mean)) return out;
    const auto nearest = std::min_element(candidates.begin(), candidates.end(), [&](double a, double b) {
        return std::abs(a - out.tail_mean) < std::abs(b - out.tail_mean);
    });
    if (std::abs(*nearest - out.tail_mean) <= tol && out.tail_width <= tol) {
        out.kind = *nearest == 0.0 ? LimitClassification::Kind::Zero
                                   : LimitClassification::Kind::FixedPoint;
        out.value = *nearest;
    }
    return out;
}

ConvergenceReport build_report(const EquationSpec& eq, const BoundingFunction& bound,
                               const Trajectory& traj, const AnalysisOptions& options) {
    ConvergenceReport report;
    report.equation_id = eq.id;
    report.stride = eq.dominant_lag;
    report.window = bound.window();
    report.threshold = bound.threshold;
    report.informal_bound = bound.informal;
    if (bound.informal) {
        report.notes.emplace_back("bound " + bound.formula +
                                  " is informal: not derivable from |F_n| <= g(u_k)");
    }
    if (traj.status != IterationStatus::Complete) {
        report.notes.push_back("trajectory truncated: " + traj.diagnostic);
    }

    const std::size_t k = eq.dominant_lag;
    for (const SubsequencePrediction& pred : predict_subsequence_convergence(eq, bound, traj)) {
        PredictionReport pr;
        pr.residue_class = pred.residue_class;
        pr.n0 = pred.n0;
        pr.stride = pred.stride;
        pr.chain = pred.chain;
        const auto subseq = extract_subsequence(traj.terms, pred.n0, k);
        pr.monotone = verify_monotone_to_zero(subseq, options.zero_tol);
        if (!pr.chain.holds || pr.monotone.status == MonotoneCheck::Status::Violation) {
            pr.verdict = Verdict::Violated;
        } else if (pr.monotone.status == MonotoneCheck::Status::Verified) {
            pr.verdict = Verdict::ConvergingToZero;
        } else {
            pr.verdict = Verdict::Inconclusive;
        }
        const std::size_t keep = std::min(options.tail_length, subseq.size());
        pr.subsequence_tail.assign(subseq.end() - static_cast<std::ptrdiff_t>(keep), subseq.end());
        report.chain_verified = report.chain_verified && pr.chain.holds;
        report.predictions.push_back(std::move(pr));
    }
    for (const auto& p : report.predictions) {
        if (!report.crossing_index || p.n0 < *report.crossing_index) report.crossing_index = p.n0;
    }
    report.full_convergence_from = predict_full_convergence(eq, bound, traj);

    std::vector<double> candidates{0.0};
    candidates.insert(candidates.end(), bound.fixed_points.begin(), bound.fixed_points.end());
    candidates.insert(candidates.end(), options.extra_candidates.begin(),
                      options.extra_candidates.end());
    for (std::size_t r = 0; r < k && r < traj.length(); ++r) {
        const auto subseq = extract_subsequence(traj.terms, r, k);
        report.limits.push_back({"x", r, classify_limit(subseq, candidates, options.limit_tol)});
    }
    return report;
}

nlohmann::json json_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

nlohmann::json to_json(const ConvergenceReport& report) {
    using nlohmann::json;
    auto opt = [](const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); };
    const json window = json::array({json_number(report.window.lo), json_number(report.window.hi)});
    json predictions = json::array();
    for (const auto& p : report.predictions) {
        json tail = json::array();
        for (double v : p.subsequence_tail) tail.push_back(json_number(v));
        json entry{{"variable", p.variable},
                   {"n0", p.n0},
                   {"stride", p.stride},
                   {"residue_class", p.residue_class},
                   {"window", window},
                   {"chain_verified", p.chain_checked ? json(p.chain.holds) : json(nullptr)},
                   {"monotone", to_string(p.monotone.status)},
                   {"verdict", to_string(p.verdict)},
                   {"subsequence_tail", tail}};
        if (p.chain.first_violation) entry["chain_violation_at"] = *p.chain.first_violation;
        if (p.monotone.violation_at) entry["monotone_violation_at"] = *p.monotone.violation_at;
        predictions.push_back(std::move(entry));
    }
    json limits = json::array();
    for (const auto& l : report.limits) {
        limits.push_back({{"variable", l.variable},
                          {"residue_class", l.residue_class},
                          {"classification", to_string(l.limit.kind)},
                          {"value", json_number(l.limit.value)},
                          {"tail_mean", json_number(l.limit.tail_mean)},
                          {"tail_width", json_number(l.limit.tail_width)}});
    }
    return json{{"equation", report.equation_id},
                {"crossing_index", opt(report.crossing_index)},
                {"stride", report.stride},
                {"window", window},
                {"alpha", json_number(report.threshold.alpha)},
                {"tangent", report.threshold.tangent},
                {"informal_bound", report.informal_bound},
                {"chain_verified", report.chain_verified},
                {"full_convergence_from", opt(report.full_convergence_from)},
                {"predictions", predictions},
                {"limits", limits},
                {"notes", report.notes}};
}

}  // namespace subconv
