#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nctorus/fixtures.hpp"

namespace nctorus {

/// One leg of an adiabatic path through the parameter space of a family.
struct PathSegment {
    enum class Kind { linear, arc, constant };

    Kind kind = Kind::constant;
    /// Parameter values at s = 0 (linear, constant) and s = 1 (linear).
    Parameters from;
    Parameters to;
    /// Arc in the (x, y) parameter plane: (x, y) = center + radius (cos a, sin a),
    /// a from angle_from to angle_to (radians); other parameters from `from`.
    std::string x_parameter;
    std::string y_parameter;
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 0.0;
    double angle_from = 0.0;
    double angle_to = 0.0;
    /// Reparameterize by s - sin(2 pi s) / (2 pi), which is stationary at
    /// both ends. Periodic single-segment loops may switch this off.
    bool stationary_ends = true;

    static PathSegment linear(Parameters from, Parameters to);
    static PathSegment constant(Parameters at);
    static PathSegment arc(Parameters base, std::string x, std::string y, double cx, double cy, double radius,
                           double angle_from, double angle_to);

    Parameters at(double s) const;
    PathSegment reversed() const;
};

/// gamma: t in [0, 1] -> Hamiltonian of a family, as a chain of equally long
/// pieces. The time-reversed image applies Theta to every sampled Hamiltonian
/// rather than to parameters.
class AdiabaticPath {
public:
    struct Piece {
        std::shared_ptr<const ModelFamily> family;
        PathSegment segment;
        bool time_reversed = false;
    };

    AdiabaticPath(std::shared_ptr<const ModelFamily> family, std::vector<PathSegment> segments);

    /// A single full-circle arc without reparameterization, sampled periodically.
    static AdiabaticPath loop(std::shared_ptr<const ModelFamily> family, Parameters base, std::string x,
                              std::string y, double cx, double cy, double radius);

    const std::vector<Piece>& pieces() const { return pieces_; }
    const ModelFamily& family() const { return *pieces_.front().family; }

    HoppingTable hoppings(double t) const;
    /// Parameters of the underlying family (before any time reversal).
    Parameters parameters(double t) const;
    /// d(parameters)/dt, exact.
    Parameters parameter_velocity(double t) const;

    /// Endpoints share the same Hamiltonian to 1e-12.
    bool closed() const;
    /// All pieces are stationary at their ends.
    bool endpoint_stationary() const;
    /// max over both endpoints of ||d_t h||_max, from the exact parameter
    /// velocity v and (h(q + eps v) - h(q - eps v)) / 2 eps.
    double endpoint_rate() const;

    /// -gamma.
    AdiabaticPath reversed() const;
    /// Theta gamma; meaningful at zero flux.
    AdiabaticPath time_reversed() const;
    /// gamma followed by other; every piece gets an equal share of the unit interval.
    AdiabaticPath concatenate(const AdiabaticPath& other) const;

    /// t_k for `intervals` steps: k = 0..intervals for open paths,
    /// k = 0..intervals-1 for closed ones.
    std::vector<double> sample_times(int intervals) const;

private:
    AdiabaticPath() = default;
    std::pair<const Piece*, double> locate(double t) const;
    HoppingTable evaluate(const Piece& piece, const Parameters& q) const;

    std::vector<Piece> pieces_;
};

/// Time reversal of a clean hopping table: t_d -> S conj(t_d) S^dagger.
HoppingTable time_reverse_table(const HoppingTable& table, const SymmetrySpec& symmetry);

}  // namespace nctorus
