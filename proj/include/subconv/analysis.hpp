#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "subconv/criteria.hpp"
#include "subconv/equation.hpp"

namespace subconv {

enum class Verdict { ConvergingToZero, ConvergingToFixedPoint, Inconclusive, Violated };

[[nodiscard]] const char* to_string(Verdict v) noexcept;

struct MonotoneCheck {
    enum class Status { Verified, Violation, Inconclusive };
    Status status = Status::Inconclusive;
    std::optional<std::size_t> violation_at;  // index of the term that failed to decrease
};

[[nodiscard]] const char* to_string(MonotoneCheck::Status s) noexcept;

struct LimitClassification {
    enum class Kind { Zero, FixedPoint, Inconclusive };
    Kind kind = Kind::Inconclusive;
    double value = 0.0;       // matched candidate
    double tail_mean = 0.0;
    double tail_width = 0.0;  // max - min over the tail
};

[[nodiscard]] const char* to_string(LimitClassification::Kind k) noexcept;

/// One predicted subsequence {x_{n0 + j*stride}} and what was observed.
struct PredictionReport {
    std::string variable = "x";
    std::size_t residue_class = 0;
    std::size_t n0 = 0;
    std::size_t stride = 1;
    bool chain_checked = true;
    ChainCheck chain;
    MonotoneCheck monotone;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<double> subsequence_tail;
};

struct ResidueLimit {
    std::string variable = "x";
    std::size_t residue_class = 0;
    LimitClassification limit;
};

struct ConvergenceReport {
    std::string equation_id;
    std::optional<std::size_t> crossing_index;
    std::size_t stride = 1;
    ThresholdWindow window;
    Threshold threshold;
    bool informal_bound = false;
    std::vector<PredictionReport> predictions;
    bool chain_verified = true;
    std::optional<std::size_t> full_convergence_from;
    std::vector<ResidueLimit> limits;
    std::vector<std::string> notes;

    [[nodiscard]] bool any_violated() const noexcept;
    [[nodiscard]] const PredictionReport* find(std::size_t residue_class,
                                               const std::string& variable = "x") const noexcept;
};

struct AnalysisOptions {
    double zero_tol = 1e-10;
    double limit_tol = 1e-3;
    std::size_t tail_length = 8;
    std::vector<double> extra_candidates;
};

/// Smallest n >= from_index with terms[n] strictly inside the window.
[[nodiscard]] std::optional<std::size_t> detect_crossing(std::span<const double> terms,
                                                         const ThresholdWindow& window,
                                                         std::size_t from_index = 0);

/// Strict decrease of |s_j| at every step and |final| < tol. Once a term is
/// exactly zero every later term must be zero as well.
[[nodiscard]] MonotoneCheck verify_monotone_to_zero(std::span<const double> subseq, double tol);

/// Nearest candidate to the tail mean (last max(4, len/4) terms), accepted when
/// both the mean offset and the tail width are within tol. A subsequence that
/// verify_monotone_to_zero accepts classifies as zero when 0 is a candidate.
[[nodiscard]] LimitClassification classify_limit(std::span<const double> subseq,
                                                 std::span<const double> candidates, double tol);

/// Runs predictions, chain checks, monotonicity and limit classification for
/// every residue class modulo the dominant lag.
[[nodiscard]] ConvergenceReport build_report(const EquationSpec& eq, const BoundingFunction& bound,
                                             const Trajectory& traj,
                                             const AnalysisOptions& options = {});

[[nodiscard]] nlohmann::json to_json(const ConvergenceReport& report);

/// JSON number, or the string "inf"/"-inf" for infinities.
[[nodiscard]] nlohmann::json json_number(double v);

}  // namespace subconv
