#include "subconv/equation.hpp"

#include <cmath>
#include <utility>

#include "subconv/errors.hpp"

namespace subconv {

EquationSpec EquationSpec::make(std::string id, std::size_t order, std::size_t dominant_lag,
                                Interval coordinate_domain, StepMap evaluator,
                                Dominance dominance) {
    if (order == 0) {
        throw ParameterError("equation order must be positive");
    }
    if (dominant_lag < 1 || dominant_lag > order) {
        throw ParameterError("dominant lag " + std::to_string(dominant_lag) +
                             " must lie in 1.." + std::to_string(order));
    }
    if (!(coordinate_domain.lo <= 0.0 && coordinate_domain.hi >= 0.0)) {
        throw ParameterError("domain must contain the origin");
    }
    if (!evaluator) {
        throw ParameterError("equation needs an evaluator");
    }
    EquationSpec eq;
    eq.id = std::move(id);
    eq.order = order;
    eq.dominant_lag = dominant_lag;
    eq.domain.assign(order, coordinate_domain);
    eq.evaluator = std::move(evaluator);
    eq.dominance = dominance;
    return eq;
}

double evaluate_map(const EquationSpec& eq, std::size_t n, std::span<const double> history) {
    if (history.size() != eq.order) {
        throw ParameterError("history length " + std::to_string(history.size()) +
                             " differs from equation order " + std::to_string(eq.order));
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (!eq.domain[i].contains(history[i])) {
            throw DomainError("history coordinate u_" + std::to_string(i + 1) + " = " +
                                  std::to_string(history[i]) + " outside the domain at step " +
                                  std::to_string(n),
                              n);
        }
    }
    const double value = eq.evaluator(n, history);
    if (!std::isfinite(value)) {
        throw NonFiniteError("non-finite value of " + eq.id + " at step " + std::to_string(n), n);
    }
    return value;
}

void check_initial(const EquationSpec& eq, std::span<const double> initial) {
    if (initial.size() != eq.order) {
        throw ParameterError(eq.id + " needs " + std::to_string(eq.order) +
                             " initial values, got " + std::to_string(initial.size()));
    }
    // initial[i] = x_i ends up in history slot m-1-i at the first step
    for (std::size_t i = 0; i < initial.size(); ++i) {
        if (!std::isfinite(initial[i]) || !eq.domain[eq.order - 1 - i].contains(initial[i])) {
            throw DomainError("initial value x_" + std::to_string(i) + " outside the domain", i);
        }
    }
}

Trajectory iterate(const EquationSpec& eq, std::span<const double> initial, std::size_t steps) {
    check_initial(eq, initial);
    Trajectory traj;
    traj.equation_id = eq.id;
    traj.order = eq.order;
    traj.initial.assign(initial.begin(), initial.end());
    traj.terms.reserve(eq.order + steps);
    traj.terms.assign(initial.begin(), initial.end());

    const std::size_t m = eq.order;
    std::vector<double> history(m);
    for (std::size_t n = m; n < m + steps; ++n) {
        for (std::size_t i = 0; i < m; ++i) {
            history[i] = traj.terms[n - 1 - i];
        }
        double value = 0.0;
        try {
            value = evaluate_map(eq, n, history);
        } catch (const NonFiniteError& e) {
            traj.status = IterationStatus::NonFinite;
            traj.diagnostic = e.what();
            return traj;
        }
        if (!eq.domain.front().contains(value)) {
            throw DomainError("term x_" + std::to_string(n) + " = " + std::to_string(value) +
                                  " left the domain of " + eq.id,
                              n);
        }
        traj.terms.push_back(value);
    }
    return traj;
}

std::vector<double> extract_subsequence(std::span<const double> terms, std::size_t start,
                                        std::size_t stride) {
    if (stride == 0) {
        throw ParameterError("subsequence stride must be at least 1");
    }
    if (start >= terms.size()) {
        throw ParameterError("subsequence start " + std::to_string(start) +
                             " out of range for " + std::to_string(terms.size()) + " terms");
    }
    std::vector<double> out;
    out.reserve((terms.size() - start + stride - 1) / stride);
    for (std::size_t n = start; n < terms.size(); n += stride) {
        out.push_back(terms[n]);
    }
    return out;
}

}  // namespace subconv
