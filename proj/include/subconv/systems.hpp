#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subconv/equation.hpp"
#include "subconv/parameter_sequence.hpp"

namespace subconv {

/// f_n(u, v) or g_n(u, v) of a planar system.
using PlanarMap = std::function<double(std::size_t n, double u, double v)>;
/// A step-indexed scalar map such as rho_n(u) or phi_n^{-1}(w).
using IndexedMap = std::function<double(std::size_t n, double u)>;

/// How f_n(u, v) = w is solved for v.
///   Multiplicative: f_n = rho_n(u) phi_n(v), sigma_n = phi_n^{-1}(w / rho_n(u))
///   Additive:       f_n = rho_n(u) + phi_n(v), sigma_n = phi_n^{-1}(w - rho_n(u))
///   Custom:         sigma_n supplied directly
enum class SigmaKind { None, Multiplicative, Additive, Custom };

struct SigmaForm {
    SigmaKind kind = SigmaKind::None;
    IndexedMap rho;
    IndexedMap phi_inverse;
    PlanarMap custom;
};

/// x_{n+1} = f_n(x_n, y_n), y_{n+1} = g_n(x_n, y_n) on a subset of [0, inf)^2.
struct PlanarSystem {
    std::string id;
    PlanarMap f;
    PlanarMap g;
    SigmaForm sigma;
    // H5 envelopes: f_n(u1, u2) <= f_bar(u2), g_n(u1, u2) <= g_bar(u1)
    std::optional<std::function<double(double)>> h5_f_bar;
    std::optional<std::function<double(double)>> h5_g_bar;
    // H6 envelope: f_n(u1, u2) <= f_bar(u1)
    std::optional<std::function<double(double)>> h6_f_bar;
    Interval domain_x{0.0, kInf};
    Interval domain_y{0.0, kInf};
    std::size_t sampling_span = 1;  // step indices visiting every parameter value

    [[nodiscard]] bool has_sigma() const noexcept { return sigma.kind != SigmaKind::None; }
};

struct Orbit {
    std::array<double, 2> initial{};
    std::vector<double> x;
    std::vector<double> y;
    IterationStatus status = IterationStatus::Complete;
    std::string diagnostic;

    [[nodiscard]] std::size_t length() const noexcept { return x.size(); }
};

/// Three-dimensional system
///   x_{n+1} = exp(a_n - b x_n - c y_n - d z_n)
///   y_{n+1} = p_n x_n + q z_n - r ln z_n
///   z_{n+1} = s x_n
struct ThreeDParams {
    ParameterSequence a = ParameterSequence::constant(0.0);
    ParameterSequence p = ParameterSequence::constant(0.0);
    double b = 0.0;
    double c = 1.0;
    double d = 0.0;
    double q = 1.0;
    double r = 1.0;
    double s = 1.0;
};

struct ThreeDOrbit {
    std::array<double, 3> initial{};
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> z;
    IterationStatus status = IterationStatus::Complete;
    std::string diagnostic;

    [[nodiscard]] std::size_t length() const noexcept { return x.size(); }
};

}  // namespace subconv
