#pragma once

#include <array>
#include <span>
#include <string_view>

namespace botsim::stats {

/// T(b, d) = b0 + b1 b + b2 d + b3 b d + b4 b^2 + b5 d^2
struct QuadraticSurface {
    std::array<double, 6> beta{};

    double operator()(double b, double d) const noexcept;
    std::array<double, 2> gradient(double b, double d) const noexcept;
    /// [[2 b4, b3], [b3, 2 b5]]
    std::array<std::array<double, 2>, 2> hessian() const noexcept;
};

struct SurfacePoint {
    double b = 0.0;
    double d = 0.0;
    double t = 0.0;
};

/// Fits the six coefficients by least squares. Needs at least six points
/// and a full-rank design.
QuadraticSurface fit_quadratic_surface(std::span<const SurfacePoint> points);

enum class StationaryKind { Maximum, Minimum, Saddle, Degenerate };
std::string_view to_string(StationaryKind kind) noexcept;

struct StationaryPoint {
    double b = 0.0;
    double d = 0.0;
    double t = 0.0;
    StationaryKind kind = StationaryKind::Degenerate;
};

/// Solves grad T = 0. A (near-)singular Hessian reports Degenerate with the
/// coordinates left at zero.
StationaryPoint surface_stationary_point(const QuadraticSurface& s);

struct Box {
    double b_lo = 0.0, b_hi = 1.0;
    double d_lo = 0.0, d_hi = 1.0;
};

struct BoxExtrema {
    SurfacePoint min;
    SurfacePoint max;
};

/// Exact extrema over a closed box: corners, 1-D optima along each edge, and
/// the interior stationary point when it falls inside.
BoxExtrema surface_extrema_on_box(const QuadraticSurface& s, const Box& box);

}  // namespace botsim::stats
