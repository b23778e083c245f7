#include "nctorus/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nctorus/error.hpp"

namespace nctorus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double warp(double s) { return s - std::sin(kTwoPi * s) / kTwoPi; }
double warp_rate(double s) { return 1.0 - std::cos(kTwoPi * s); }

Parameters blend(const Parameters& a, const Parameters& b, double s) {
    Parameters out = a;
    for (const auto& [key, value] : b) {
        auto it = out.find(key);
        const double start = it == out.end() ? value : it->second;
        out[key] = (1.0 - s) * start + s * value;
    }
    return out;
}

}  // namespace

PathSegment PathSegment::linear(Parameters from, Parameters to) {
    PathSegment seg;
    seg.kind = Kind::linear;
    seg.from = std::move(from);
    seg.to = std::move(to);
    return seg;
}

PathSegment PathSegment::constant(Parameters at) {
    PathSegment seg;
    seg.kind = Kind::constant;
    seg.from = std::move(at);
    return seg;
}

PathSegment PathSegment::arc(Parameters base, std::string x, std::string y, double cx, double cy, double radius,
                             double angle_from, double angle_to) {
    PathSegment seg;
    seg.kind = Kind::arc;
    seg.from = std::move(base);
    seg.x_parameter = std::move(x);
    seg.y_parameter = std::move(y);
    seg.center_x = cx;
    seg.center_y = cy;
    seg.radius = radius;
    seg.angle_from = angle_from;
    seg.angle_to = angle_to;
    return seg;
}

Parameters PathSegment::at(double s) const {
    const double u = stationary_ends ? warp(s) : s;
    switch (kind) {
        case Kind::constant: return from;
        case Kind::linear: return blend(from, to, u);
        case Kind::arc: {
            Parameters out = from;
            const double a = angle_from + u * (angle_to - angle_from);
            out[x_parameter] = center_x + radius * std::cos(a);
            out[y_parameter] = center_y + radius * std::sin(a);
            return out;
        }
    }
    return from;
}

PathSegment PathSegment::reversed() const {
    PathSegment out = *this;
    if (kind == Kind::linear) std::swap(out.from, out.to);
    if (kind == Kind::arc) std::swap(out.angle_from, out.angle_to);
    return out;
}

AdiabaticPath::AdiabaticPath(std::shared_ptr<const ModelFamily> family, std::vector<PathSegment> segments) {
    if (!family) throw InvalidInputError("path needs a model family");
    if (segments.empty()) throw InvalidInputError("path needs at least one segment");
    for (PathSegment& seg : segments) {
        family->resolve(seg.from);
        family->resolve(seg.to);
        if (seg.kind == PathSegment::Kind::arc) {
            family->resolve({{seg.x_parameter, 0.0}, {seg.y_parameter, 0.0}});
        }
        pieces_.push_back({family, std::move(seg), false});
    }
}

AdiabaticPath AdiabaticPath::loop(std::shared_ptr<const ModelFamily> family, Parameters base, std::string x,
                                  std::string y, double cx, double cy, double radius) {
    PathSegment seg = PathSegment::arc(std::move(base), std::move(x), std::move(y), cx, cy, radius, 0.0, kTwoPi);
    seg.stationary_ends = false;
    return {std::move(family), {std::move(seg)}};
}

std::pair<const AdiabaticPath::Piece*, double> AdiabaticPath::locate(double t) const {
    const double n = static_cast<double>(pieces_.size());
    const double scaled = std::clamp(t, 0.0, 1.0) * n;
    std::size_t index = static_cast<std::size_t>(std::floor(scaled));
    if (index >= pieces_.size()) index = pieces_.size() - 1;
    return {&pieces_[index], scaled - static_cast<double>(index)};
}

HoppingTable AdiabaticPath::evaluate(const Piece& piece, const Parameters& q) const {
    HoppingTable table = piece.family->hoppings(q);
    return piece.time_reversed ? time_reverse_table(table, piece.family->symmetry) : table;
}

HoppingTable AdiabaticPath::hoppings(double t) const {
    const auto [piece, s] = locate(t);
    return evaluate(*piece, piece->segment.at(s));
}

Parameters AdiabaticPath::parameters(double t) const {
    const auto [piece, s] = locate(t);
    return piece->segment.at(s);
}

Parameters AdiabaticPath::parameter_velocity(double t) const {
    const auto [piece, s] = locate(t);
    const PathSegment& seg = piece->segment;
    const double rate = (seg.stationary_ends ? warp_rate(s) : 1.0) * static_cast<double>(pieces_.size());
    Parameters out;
    for (const auto& [key, value] : seg.at(s)) out[key] = 0.0;
    if (seg.kind == PathSegment::Kind::linear) {
        for (const auto& [key, value] : seg.to) {
            auto it = seg.from.find(key);
            out[key] = rate * (value - (it == seg.from.end() ? value : it->second));
        }
    } else if (seg.kind == PathSegment::Kind::arc) {
        const double u = seg.stationary_ends ? warp(s) : s;
        const double span = seg.angle_to - seg.angle_from;
        const double a = seg.angle_from + u * span;
        out[seg.x_parameter] = -rate * seg.radius * std::sin(a) * span;
        out[seg.y_parameter] = rate * seg.radius * std::cos(a) * span;
    }
    return out;
}

bool AdiabaticPath::closed() const { return HoppingTable::max_difference(hoppings(0.0), hoppings(1.0)) < 1e-12; }

bool AdiabaticPath::endpoint_stationary() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) {
        return p.segment.stationary_ends || p.segment.kind == PathSegment::Kind::constant;
    });
}

double AdiabaticPath::endpoint_rate() const {
    const double eps = 1e-6;
    double rate = 0.0;
    for (double t : {0.0, 1.0}) {
        const auto [piece, s] = locate(t);
        const Parameters q = piece->segment.at(s);
        const Parameters v = parameter_velocity(t);
        Parameters ahead = q;
        Parameters behind = q;
        for (const auto& [key, value] : v) {
            ahead[key] += eps * value;
            behind[key] -= eps * value;
        }
        rate = std::max(rate, HoppingTable::max_difference(evaluate(*piece, ahead), evaluate(*piece, behind)) / (2 * eps));
    }
    return rate;
}

AdiabaticPath AdiabaticPath::reversed() const {
    AdiabaticPath out;
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
        out.pieces_.push_back({it->family, it->segment.reversed(), it->time_reversed});
    }
    return out;
}

AdiabaticPath AdiabaticPath::time_reversed() const {
    AdiabaticPath out = *this;
    for (Piece& p : out.pieces_) p.time_reversed = !p.time_reversed;
    return out;
}

AdiabaticPath AdiabaticPath::concatenate(const AdiabaticPath& other) const {
    AdiabaticPath out = *this;
    out.pieces_.insert(out.pieces_.end(), other.pieces_.begin(), other.pieces_.end());
    return out;
}

std::vector<double> AdiabaticPath::sample_times(int intervals) const {
    if (intervals < 2) throw InvalidInputError("a path needs at least two time steps");
    const bool periodic = closed();
    std::vector<double> out;
    const int count = periodic ? intervals : intervals + 1;
    for (int k = 0; k < count; ++k) out.push_back(static_cast<double>(k) / intervals);
    return out;
}

HoppingTable time_reverse_table(const HoppingTable& table, const SymmetrySpec& symmetry) {
    const OrbitalMatrix& s = symmetry.spin_rotation;
    if (s.rows() != table.orbitals()) throw InvalidInputError("spin rotation does not match the orbital count");
    return table.transformed([&](const OrbitalMatrix& t) -> OrbitalMatrix { return s * t.conjugate() * s.adjoint(); });
}

}  // namespace nctorus
