#include "subconv/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

#include "subconv/errors.hpp"

namespace subconv {

namespace {

constexpr double kFixedValueTol = 1e-9;

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

/// Bisection to full double precision on [lo, hi], phi(lo) < 0 < phi(hi)
/// or the reverse when `increasing` is false.
template <typename Fn>
double bisect_full(Fn&& phi, double lo, double hi, bool increasing) {
    for (int it = 0; it < 2000; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const bool positive = phi(mid) > 0.0;
        if (positive == increasing) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

ScalarMap ricker_envelope(double lambda, double a, double b) {
    return [lambda, a, b](double u) { return std::pow(u, lambda) * std::exp(a - b * u); };
}

std::vector<double> ricker_candidates(double lambda, double a, double b) {
    if (b <= 0.0) {
        return {std::exp(-a / (lambda - 1.0))};
    }
    const RickerFixedPoints fp = ricker_fixed_points(lambda, a, b);
    switch (fp.kind) {
        case RickerFixedPoints::Kind::Pair:
            return {fp.lower, fp.upper};
        case RickerFixedPoints::Kind::Tangent:
            return {fp.lower};
        case RickerFixedPoints::Kind::None:
            break;
    }
    return {};
}

BoundingFunction ricker_bound(double lambda, double a, double b, std::size_t k) {
    double search_hi = b > 0.0 ? 2.0 * (lambda - 1.0) / b : 2.0 * std::exp(-a / (lambda - 1.0));
    if (!std::isfinite(search_hi) || search_hi > 1e6) search_hi = 1e6;
    std::string formula = "u^" + fmt_num(lambda) + " exp(" + fmt_num(a) + " - " + fmt_num(b) + " u)";
    BoundingFunction bound = BoundingFunction::make(std::move(formula), ricker_envelope(lambda, a, b),
                                                    Interval{0.0, kInf}, k, search_hi);
    bound.fixed_points = ricker_candidates(lambda, a, b);
    return bound;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError(message);
}

}  // namespace

// ---------------------------------------------------------------------------
// Ricker family
// ---------------------------------------------------------------------------

ScalarModel make_generalized_ricker(const RickerFamilySpec& spec) {
    require(std::isfinite(spec.lambda) && spec.lambda > 1.0, "Ricker family needs lambda > 1");
    require(spec.m >= 1, "Ricker family needs order m >= 1");
    require(spec.k >= 1 && spec.k <= spec.m, "Ricker family needs 1 <= k <= m");
    require(spec.b.size() == spec.m, "Ricker family needs exactly m coefficient sequences b_i");
    for (std::size_t i = 0; i < spec.m; ++i) {
        require(spec.b[i].bounds().inf >= 0.0,
                "coefficient sequence b_" + std::to_string(i + 1) + " must be non-negative");
    }
    const double a_sup = spec.a_sup();
    const double b_inf = spec.b_inf();
    if (!spec.allow_zero_dominant) {
        require(b_inf > 0.0, "dominant coefficient b_" + std::to_string(spec.k) +
                                 " must have a positive infimum");
    }

    const double lambda = spec.lambda;
    const std::size_t k = spec.k;
    const std::size_t m = spec.m;
    StepMap evaluator = [lambda, k, m, a = spec.a, b = spec.b](std::size_t n,
                                                               std::span<const double> u) {
        double e = a.at(n);
        for (std::size_t i = 0; i < m; ++i) {
            e -= b[i].at(n) * u[i];
        }
        return std::pow(u[k - 1], lambda) * std::exp(e);
    };
    std::string id = "ricker(lambda=" + fmt_num(lambda) + ", k=" + std::to_string(k) +
                     ", m=" + std::to_string(m) + ")";
    ScalarModel model{
        EquationSpec::make(std::move(id), m, k, Interval{0.0, kInf}, std::move(evaluator),
                           Dominance::Analytic),
        ricker_bound(lambda, a_sup, b_inf, k), BoundingFunction{}};
    model.rigorous_bound = model.bound;
    return model;
}

LamCondition check_lam_condition(double lambda, double a_sup, double b_inf) {
    require(std::isfinite(lambda) && lambda > 1.0, "condition needs lambda > 1");
    require(std::isfinite(b_inf) && b_inf > 0.0, "condition needs b > 0");
    LamCondition out;
    out.rhs = (lambda - 1.0) * (1.0 + std::log(b_inf) - std::log(lambda - 1.0));
    out.equality = std::abs(a_sup - out.rhs) <= 1e-12 * std::max(1.0, std::abs(out.rhs));
    out.holds = out.equality || a_sup >= out.rhs;
    return out;
}

RickerFixedPoints ricker_fixed_points(double lambda, double a, double b) {
    const LamCondition cond = check_lam_condition(lambda, a, b);
    const double peak = (lambda - 1.0) / b;
    RickerFixedPoints out;
    if (cond.equality) {
        out.kind = RickerFixedPoints::Kind::Tangent;
        out.lower = out.upper = peak;
        return out;
    }
    if (!cond.holds) {
        return out;
    }
    // (lambda - 1) ln u - b u + a: concave, maximal at the peak
    auto phi = [&](double u) { return (lambda - 1.0) * std::log(u) - b * u + a; };
    double lo = peak;
    while (phi(lo) >= 0.0 && lo > 1e-300) lo *= 0.5;
    double hi = peak;
    while (phi(hi) >= 0.0 && hi < 1e300) hi *= 2.0;
    out.kind = RickerFixedPoints::Kind::Pair;
    out.lower = bisect_full(phi, lo, peak, true);
    out.upper = bisect_full(phi, peak, hi, false);
    return out;
}

ScalarModel make_sp3(int k) {
    require(k >= 1 && k <= 3, "sp3 lag k must be 1, 2 or 3");
    RickerFamilySpec spec;
    spec.lambda = 1.5;
    spec.k = static_cast<std::size_t>(k);
    spec.m = 3;
    spec.a = ParameterSequence::constant(1.5);
    spec.b = {ParameterSequence::constant(0.0), ParameterSequence::constant(0.7),
              ParameterSequence::constant(0.9)};
    spec.allow_zero_dominant = (k == 1);
    ScalarModel model = make_generalized_ricker(spec);
    model.equation.id = "sp3(k=" + std::to_string(k) + ")";
    if (k == 1) {
        // informal envelope: both delayed coefficients folded onto the lag-1 term
        model.bound = ricker_bound(1.5, 1.5, 0.7 + 0.9, 1);
        model.bound.informal = true;
    }
    return model;
}

// ---------------------------------------------------------------------------
// Sigmoid Beverton-Holt
// ---------------------------------------------------------------------------

double RationalExponent::apply(double base) const {
    if (base >= 0.0) {
        return std::pow(base, value());
    }
    if (den % 2 == 0) {
        throw ParameterError("negative base with even root denominator has no real power");
    }
    const double magnitude = std::pow(-base, value());
    return (std::labs(num) % 2 == 0) ? magnitude : -magnitude;
}

RationalExponent RationalExponent::parse(const std::string& text) {
    RationalExponent p;
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            p.num = std::stol(text, &used);
            p.den = 1;
            if (used != text.size()) throw ConfigError("trailing characters");
        } else {
            const std::string num = text.substr(0, slash);
            const std::string den = text.substr(slash + 1);
            p.num = std::stol(num, &used);
            if (used != num.size()) throw ConfigError("trailing characters");
            p.den = std::stol(den, &used);
            if (used != den.size()) throw ConfigError("trailing characters");
        }
    } catch (const std::exception&) {
        throw ConfigError("exponent '" + text + "' is not an integer ratio num/den");
    }
    if (p.den <= 0) {
        throw ConfigError("exponent denominator must be positive");
    }
    return p;
}

namespace {

void validate_sigmoid(const SigmoidBHSpec& spec) {
    require(spec.p.num > 0 && spec.p.den > 0 && spec.p.den % 2 == 1,
            "exponent p must be a positive ratio with odd denominator (e.g. 2g/(2d-1))");
    require(spec.a.bounds().inf > 0.0, "sigmoid BH needs a_n > 0");
    require(spec.c.bounds().inf >= 0.0, "sigmoid BH needs c_n >= 0");
    require(spec.q.bounds().inf > 0.0, "sigmoid BH needs q_n > 0");
    require(std::isfinite(spec.b) && spec.b >= 0.0, "sigmoid BH needs b >= 0");
    require(spec.k >= 1 && spec.l >= 1, "sigmoid BH lags must be positive");
}

std::string sigmoid_id(const SigmoidBHSpec& spec, const char* prefix) {
    return std::string(prefix) + "(p=" + std::to_string(spec.p.num) + "/" +
           std::to_string(spec.p.den) + ", b=" + fmt_num(spec.b) + ", k=" +
           std::to_string(spec.k) + ", l=" + std::to_string(spec.l) + ")";
}

}  // namespace

EquationSpec make_sigmoid_bh(const SigmoidBHSpec& spec) {
    validate_sigmoid(spec);
    StepMap evaluator = [spec](std::size_t n, std::span<const double> u) {
        const double num = spec.a.at(n) * spec.p.apply(u[spec.k - 1] - spec.b);
        const double den = 1.0 + spec.c.at(n) * std::pow(u[spec.l - 1], spec.q.at(n));
        return num / den + spec.b;
    };
    return EquationSpec::make(sigmoid_id(spec, "sigmoid-bh"), spec.order(), spec.k,
                              Interval{0.0, kInf}, std::move(evaluator), Dominance::Analytic);
}

EquationSpec make_sigmoid_bh_translated(const SigmoidBHSpec& spec) {
    validate_sigmoid(spec);
    StepMap evaluator = [spec](std::size_t n, std::span<const double> v) {
        const double num = spec.a.at(n) * spec.p.apply(v[spec.k - 1]);
        const double den = 1.0 + spec.c.at(n) * std::pow(v[spec.l - 1] + spec.b, spec.q.at(n));
        return num / den;
    };
    return EquationSpec::make(sigmoid_id(spec, "sigmoid-bh-translated"), spec.order(), spec.k,
                              Interval{-spec.b, kInf}, std::move(evaluator), Dominance::Analytic);
}

EquationSpec translate_to_origin(const EquationSpec& eq, double fixed_point) {
    require(std::isfinite(fixed_point), "translation needs a finite fixed point");
    const std::vector<double> constant(eq.order, fixed_point);
    for (std::size_t n = eq.order; n < eq.order + 16; ++n) {
        const double value = evaluate_map(eq, n, constant);
        if (std::abs(value - fixed_point) > kFixedValueTol * std::max(1.0, std::abs(fixed_point))) {
            throw ParameterError(fmt_num(fixed_point) + " is not a fixed value of " + eq.id +
                                 " (F_" + std::to_string(n) + " = " + fmt_num(value) + ")");
        }
    }
    EquationSpec out = eq;
    out.id = eq.id + " shifted by " + fmt_num(fixed_point);
    for (auto& iv : out.domain) {
        iv.lo -= fixed_point;
        iv.hi -= fixed_point;
    }
    out.evaluator = [inner = eq.evaluator, fixed_point](std::size_t n, std::span<const double> v) {
        thread_local std::vector<double> shifted;
        shifted.assign(v.begin(), v.end());
        for (auto& x : shifted) x += fixed_point;
        return inner(n, shifted) - fixed_point;
    };
    return out;
}

ThresholdWindow sigmoid_bh_window(double a_sup, double p, double b) {
    require(std::isfinite(a_sup) && a_sup > 0.0, "window needs a > 0");
    require(std::isfinite(p) && p > 1.0, "window needs p > 1");
    require(std::isfinite(b) && b >= 0.0, "window needs b >= 0");
    const double alpha = std::pow(a_sup, -1.0 / (p - 1.0));
    return ThresholdWindow{std::max(0.0, b - alpha), b + alpha, false};
}

SigmoidModel make_sigmoid_bh_model(const SigmoidBHSpec& spec) {
    SigmoidModel model{make_sigmoid_bh(spec), make_sigmoid_bh_translated(spec), BoundingFunction{},
                       ThresholdWindow{}, spec.b};
    const double a_sup = spec.a.bounds().sup;
    const double p = spec.p.value();
    model.window = sigmoid_bh_window(a_sup, p, spec.b);
    BoundingFunction& bound = model.bound;
    bound.formula = fmt_num(a_sup) + " |u|^" + fmt_num(p);
    bound.g = [a_sup, p](double u) { return a_sup * std::pow(std::abs(u), p); };
    bound.domain = Interval{-spec.b, kInf};
    bound.dominant_lag = spec.k;
    bound.threshold = Threshold{std::pow(a_sup, -1.0 / (p - 1.0)), false};
    return model;
}

// ---------------------------------------------------------------------------
// Planar systems
// ---------------------------------------------------------------------------

PlanarSystem make_adult_juvenile(const ParameterSequence& s, const ParameterSequence& t,
                                 const ParameterSequence& r, double lambda) {
    const Bounds sb = s.bounds();
    require(sb.inf > 0.0 && sb.sup <= 1.0, "adult-juvenile needs s_n in (0, 1]");
    require(t.bounds().inf > 0.0, "adult-juvenile needs t_n > 0");
    require(std::isfinite(lambda) && lambda > 1.0, "adult-juvenile needs lambda > 1");
    const double r_sup = r.bounds().sup;

    PlanarSystem sys;
    sys.id = "adult-juvenile(lambda=" + fmt_num(lambda) + ")";
    sys.f = [s](std::size_t n, double, double v) { return s.at(n) * v; };
    sys.g = [t, r, lambda](std::size_t n, double u, double v) {
        return std::pow(u, lambda) * std::exp((r.at(n) - u) - t.at(n) * v);
    };
    sys.sigma.kind = SigmaKind::Multiplicative;
    sys.sigma.rho = [s](std::size_t n, double) { return s.at(n); };
    sys.sigma.phi_inverse = [](std::size_t, double w) { return w; };
    sys.h5_f_bar = [](double u) { return u; };
    sys.h5_g_bar = [lambda, r_sup](double u) { return std::pow(u, lambda) * std::exp(r_sup - u); };
    sys.sampling_span = joint_sampling_span({&s, &t, &r});
    return sys;
}

PlanarSystem make_competition(const CompetitionParams& cp, bool swapped) {
    require(cp.b1.bounds().inf >= 0.0 && cp.b2.bounds().inf >= 0.0,
            "competition needs b_{1,n}, b_{2,n} >= 0");
    require(cp.a1.bounds().inf > 0.0 && cp.a2.bounds().inf > 0.0,
            "competition needs a_{1,n}, a_{2,n} > 0");
    require(cp.r1.bounds().inf > 0.0 && cp.r2.bounds().inf > 0.0,
            "competition needs r_{1,n}, r_{2,n} > 0");
    require(cp.delta3 > 0.0 && cp.delta4 > 0.0, "competition needs delta3, delta4 > 0");
    require(cp.delta1 > 1.0 && cp.delta2 > 1.0, "competition needs delta1, delta2 > 1");

    const double r1 = cp.r1.bounds().sup;
    const double a1 = cp.a1.bounds().inf;
    const double r2 = cp.r2.bounds().sup;
    const double a2 = cp.a2.bounds().inf;
    const double d1 = cp.delta1;
    const double d2 = cp.delta2;

    PlanarSystem sys;
    sys.sampling_span = joint_sampling_span({&cp.r1, &cp.r2, &cp.a1, &cp.a2, &cp.b1, &cp.b2});
    auto f_bar = [r1, a1, d1](double u) {
        const double p = std::pow(u, d1);
        return r1 * p / (a1 + p);
    };
    if (!swapped) {
        sys.id = "competition";
        sys.f = [cp](std::size_t n, double u, double v) {
            const double p = std::pow(u, cp.delta1);
            return cp.r1.at(n) * p / ((cp.a1.at(n) + p) + cp.b1.at(n) * std::pow(v, cp.delta3));
        };
        sys.g = [cp](std::size_t n, double u, double v) {
            const double p = std::pow(v, cp.delta2);
            return cp.r2.at(n) * p / ((cp.a2.at(n) + p) + cp.b2.at(n) * std::pow(u, cp.delta4));
        };
        sys.h6_f_bar = f_bar;
        if (cp.b1.bounds().inf > 0.0) {
            // b1 y^d3 = r1 x^d1 / w - a1 - x^d1
            sys.sigma.kind = SigmaKind::Custom;
            sys.sigma.custom = [cp](std::size_t n, double u, double w) {
                if (w == 0.0) return 0.0;
                const double p = std::pow(u, cp.delta1);
                const double t = ((cp.r1.at(n) * p) / w - cp.a1.at(n) - p) / cp.b1.at(n);
                return std::pow(std::max(0.0, t), 1.0 / cp.delta3);
            };
        }
    } else {
        sys.id = "competition-swapped";
        sys.f = [cp](std::size_t n, double u, double v) {
            const double p = std::pow(v, cp.delta1);
            return cp.r1.at(n) * p / ((cp.a1.at(n) + p) + cp.b1.at(n) * std::pow(u, cp.delta3));
        };
        sys.g = [cp](std::size_t n, double u, double v) {
            const double p = std::pow(u, cp.delta2);
            return cp.r2.at(n) * p / ((cp.a2.at(n) + p) + cp.b2.at(n) * std::pow(v, cp.delta4));
        };
        sys.h5_f_bar = f_bar;
        sys.h5_g_bar = [r2, a2, d2](double u) {
            const double p = std::pow(u, d2);
            return r2 * p / (a2 + p);
        };
        // y^d1 (r1 - w) = w (a1 + b1 x^d3)
        sys.sigma.kind = SigmaKind::Custom;
        sys.sigma.custom = [cp](std::size_t n, double u, double w) {
            if (w == 0.0) return 0.0;
            const double r = cp.r1.at(n);
            if (w >= r) {
                throw ParameterError("w = " + fmt_num(w) + " outside the range of f_n(u, .)");
            }
            const double base = w * (cp.a1.at(n) + cp.b1.at(n) * std::pow(u, cp.delta3)) / (r - w);
            return std::pow(base, 1.0 / cp.delta1);
        };
    }
    return sys;
}

Threshold competition_threshold(double r1, double a1, double delta1) {
    require(std::isfinite(r1) && r1 > 0.0, "competition threshold needs r1 > 0");
    require(std::isfinite(a1) && a1 > 0.0, "competition threshold needs a1 > 0");
    require(std::isfinite(delta1) && delta1 > 1.0, "competition threshold needs delta1 > 1");
    if (delta1 == 2.0) {
        const double disc = r1 * r1 - 4.0 * a1;
        if (disc < 0.0) return Threshold{kInf, false};
        // (r1 - sqrt(disc)) / 2, written without cancellation
        return Threshold{2.0 * a1 / (r1 + std::sqrt(disc)), disc == 0.0};
    }
    // every positive root of u^d1 - r1 u^(d1-1) + a1 lies below r1
    return solve_threshold(
        [r1, a1, delta1](double u) {
            const double p = std::pow(u, delta1);
            return r1 * p / (a1 + p);
        },
        r1);
}

// ---------------------------------------------------------------------------
// Three-dimensional example
// ---------------------------------------------------------------------------

std::array<double, 3> ThreeDModel::step(std::size_t n, const std::array<double, 3>& state) const {
    const auto& [x, y, z] = state;
    if (!(z > 0.0)) {
        throw DomainError("z_" + std::to_string(n) + " = " + fmt_num(z) + " <= 0: ln z undefined",
                          n);
    }
    const ThreeDParams& P = params;
    double e = P.a.at(n);
    e -= P.b * x;
    e -= P.c * y;
    e -= P.d * z;
    return {std::exp(e), P.p.at(n) * x + P.q * z - P.r * std::log(z), P.s * x};
}

ThreeDModel make_3d_example(const ThreeDParams& params) {
    require(params.b >= 0.0 && params.d >= 0.0, "three-dimensional example needs b, d >= 0");
    require(params.c > 0.0 && params.q > 0.0 && params.r > 0.0 && params.s > 0.0,
            "three-dimensional example needs c, q, r, s > 0");
    const ThreeDParams P = params;
    const double cr = P.c * P.r;
    const double shift = cr * std::log(P.s);
    const double ds = P.d * P.s;
    const double cqs = P.c * P.q * P.s;

    StepMap evaluator = [P, cr, shift, ds, cqs](std::size_t n, std::span<const double> u) {
        double e = P.a.at(n - 1) + shift;
        e -= P.b * u[0];
        e -= (P.c * P.p.at(n - 2) + ds) * u[1];
        e -= cqs * u[2];
        return std::pow(u[2], cr) * std::exp(e);
    };
    ThreeDModel model;
    model.params = P;
    model.folded = EquationSpec::make("threed-fold(cr=" + fmt_num(cr) + ")", 3, 3,
                                      Interval{0.0, kInf}, std::move(evaluator),
                                      Dominance::Analytic);
    const double mid_inf = P.c * P.p.bounds().inf + ds;
    if (cr > 1.0 && mid_inf >= 0.0) {
        model.bound = ricker_bound(cr, P.a.bounds().sup + shift, cqs, 3);
    } else {
        model.folded.dominance = Dominance::Unverified;
    }
    if (P.a.is_constant() && P.p.is_constant()) {
        RickerFamilySpec spec;
        spec.lambda = cr;
        spec.k = 3;
        spec.m = 3;
        spec.a = ParameterSequence::constant(P.a.at(0) + shift);
        spec.b = {ParameterSequence::constant(P.b),
                  ParameterSequence::constant(P.c * P.p.at(0) + ds),
                  ParameterSequence::constant(cqs)};
        model.ricker_form = spec;
    }
    return model;
}

}  // namespace subconv
