#include "subconv/parameter_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "subconv/errors.hpp"

namespace subconv {

namespace {

void check_finite(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw ParameterError("parameter sequence value at index " + std::to_string(i) +
                                 " is not finite");
        }
    }
}

}  // namespace

ParameterSequence ParameterSequence::constant(double value) {
    if (!std::isfinite(value)) {
        throw ParameterError("constant parameter must be finite");
    }
    ParameterSequence seq;
    seq.kind_ = Kind::Constant;
    seq.values_ = {value};
    seq.fallback_ = value;
    seq.declared_inf_ = value;
    seq.declared_sup_ = value;
    return seq;
}

ParameterSequence ParameterSequence::periodic(std::vector<double> values, double declared_inf,
                                              double declared_sup) {
    if (values.empty()) {
        throw ParameterError("periodic parameter sequence needs at least one value");
    }
    check_finite(values);
    ParameterSequence seq;
    seq.kind_ = Kind::Periodic;
    seq.values_ = std::move(values);
    seq.fallback_ = seq.values_.front();
    seq.declared_inf_ = declared_inf;
    seq.declared_sup_ = declared_sup;
    (void)seq.bounds();
    return seq;
}

ParameterSequence ParameterSequence::tabulated(std::vector<double> values, double fallback,
                                               double declared_inf, double declared_sup) {
    check_finite(values);
    if (!std::isfinite(fallback)) {
        throw ParameterError("tabulated fallback value must be finite");
    }
    ParameterSequence seq;
    seq.kind_ = Kind::Tabulated;
    seq.values_ = std::move(values);
    seq.fallback_ = fallback;
    seq.declared_inf_ = declared_inf;
    seq.declared_sup_ = declared_sup;
    (void)seq.bounds();
    return seq;
}

double ParameterSequence::at(std::size_t n) const noexcept {
    switch (kind_) {
        case Kind::Constant:
            return values_.front();
        case Kind::Periodic:
            return values_[n % values_.size()];
        case Kind::Tabulated:
            return n < values_.size() ? values_[n] : fallback_;
    }
    return fallback_;
}

Bounds ParameterSequence::bounds() const {
    if (kind_ == Kind::Constant) {
        return {values_.front(), values_.front()};
    }
    if (declared_inf_ > declared_sup_) {
        throw ParameterError("declared inf exceeds declared sup");
    }
    auto check = [&](double v, const std::string& where) {
        if (v < declared_inf_ || v > declared_sup_) {
            throw ParameterError("parameter value " + std::to_string(v) + " at " + where +
                                 " violates declared bounds [" + std::to_string(declared_inf_) +
                                 ", " + std::to_string(declared_sup_) + "]");
        }
    };
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        check(values_[i], "index " + std::to_string(i));
        lo = std::min(lo, values_[i]);
        hi = std::max(hi, values_[i]);
    }
    if (kind_ == Kind::Tabulated) {
        check(fallback_, "fallback");
        lo = std::min(lo, fallback_);
        hi = std::max(hi, fallback_);
    }
    return {std::max(lo, declared_inf_), std::min(hi, declared_sup_)};
}

std::size_t ParameterSequence::sampling_span() const noexcept {
    switch (kind_) {
        case Kind::Constant:
            return 1;
        case Kind::Periodic:
            return values_.size();
        case Kind::Tabulated:
            return values_.size() + 1;
    }
    return 1;
}

std::size_t joint_sampling_span(std::initializer_list<const ParameterSequence*> sequences,
                                std::size_t cap) {
    std::size_t period = 1;
    std::size_t table = 0;
    for (const auto* seq : sequences) {
        if (seq == nullptr) continue;
        if (seq->kind() == ParameterSequence::Kind::Periodic) {
            period = std::min(cap, std::lcm(period, seq->values().size()));
        } else if (seq->kind() == ParameterSequence::Kind::Tabulated) {
            table = std::max(table, seq->values().size());
        }
    }
    return std::min(cap, table + period);
}

}  // namespace subconv
