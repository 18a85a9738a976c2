#include "botsim/stats/surface.hpp"

#include <cmath>
#include <vector>

#include "botsim/errors.hpp"
#include "botsim/stats/regression.hpp"

namespace botsim::stats {

double QuadraticSurface::operator()(double b, double d) const noexcept {
    return beta[0] + beta[1] * b + beta[2] * d + beta[3] * b * d + beta[4] * b * b + beta[5] * d * d;
}

std::array<double, 2> QuadraticSurface::gradient(double b, double d) const noexcept {
    return {beta[1] + beta[3] * d + 2.0 * beta[4] * b, beta[2] + beta[3] * b + 2.0 * beta[5] * d};
}

std::array<std::array<double, 2>, 2> QuadraticSurface::hessian() const noexcept {
    return {{{2.0 * beta[4], beta[3]}, {beta[3], 2.0 * beta[5]}}};
}

std::string_view to_string(StationaryKind kind) noexcept {
    switch (kind) {
        case StationaryKind::Maximum: return "max";
        case StationaryKind::Minimum: return "min";
        case StationaryKind::Saddle: return "saddle";
        case StationaryKind::Degenerate: return "degenerate";
    }
    return "degenerate";
}

QuadraticSurface fit_quadratic_surface(std::span<const SurfacePoint> points) {
    if (points.size() < 6) throw ParameterError("a quadratic surface needs at least 6 points");
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    rows.reserve(points.size());
    for (const SurfacePoint& p : points) {
        rows.push_back({p.b, p.d, p.b * p.d, p.b * p.b, p.d * p.d});
        y.push_back(p.t);
    }
    // Exactly six points leaves no residual degree of freedom, which ols_fit
    // rejects; pad with a duplicate so interpolation still works.
    if (points.size() == 6) {
        rows.push_back(rows.front());
        y.push_back(y.front());
    }
    const LinearFit fit = ols_fit(rows, y, true, {"b", "d", "b:d", "b^2", "d^2"});
    QuadraticSurface s;
    for (std::size_t i = 0; i < 6; ++i) s.beta[i] = fit.coefficients[i];
    return s;
}

StationaryPoint surface_stationary_point(const QuadraticSurface& s) {
    const double h11 = 2.0 * s.beta[4];
    const double h12 = s.beta[3];
    const double h22 = 2.0 * s.beta[5];
    const double det = h11 * h22 - h12 * h12;
    const double scale = std::max({std::abs(h11), std::abs(h12), std::abs(h22), 1e-300});
    StationaryPoint out;
    if (std::abs(det) <= 1e-12 * scale * scale) return out;
    // H x = -g0
    out.b = (-s.beta[1] * h22 + s.beta[2] * h12) / det;
    out.d = (-s.beta[2] * h11 + s.beta[1] * h12) / det;
    out.t = s(out.b, out.d);
    if (det < 0.0)
        out.kind = StationaryKind::Saddle;
    else
        out.kind = h11 < 0.0 ? StationaryKind::Maximum : StationaryKind::Minimum;
    return out;
}

BoxExtrema surface_extrema_on_box(const QuadraticSurface& s, const Box& box) {
    if (!(box.b_lo <= box.b_hi) || !(box.d_lo <= box.d_hi)) throw ParameterError("box bounds are reversed");
    std::vector<SurfacePoint> candidates;
    auto add = [&](double b, double d) { candidates.push_back({b, d, s(b, d)}); };
    for (double b : {box.b_lo, box.b_hi})
        for (double d : {box.d_lo, box.d_hi}) add(b, d);

    // Along b = const, T is quadratic in d with leading coefficient b5.
    for (double b : {box.b_lo, box.b_hi}) {
        if (s.beta[5] != 0.0) {
            const double d = -(s.beta[2] + s.beta[3] * b) / (2.0 * s.beta[5]);
            if (d > box.d_lo && d < box.d_hi) add(b, d);
        }
    }
    for (double d : {box.d_lo, box.d_hi}) {
        if (s.beta[4] != 0.0) {
            const double b = -(s.beta[1] + s.beta[3] * d) / (2.0 * s.beta[4]);
            if (b > box.b_lo && b < box.b_hi) add(b, d);
        }
    }
    const StationaryPoint sp = surface_stationary_point(s);
    if (sp.kind != StationaryKind::Degenerate && sp.b >= box.b_lo && sp.b <= box.b_hi && sp.d >= box.d_lo &&
        sp.d <= box.d_hi)
        add(sp.b, sp.d);

    BoxExtrema out{candidates.front(), candidates.front()};
    for (const SurfacePoint& c : candidates) {
        if (c.t < out.min.t) out.min = c;
        if (c.t > out.max.t) out.max = c;
    }
    return out;
}

}  // namespace botsim::stats
