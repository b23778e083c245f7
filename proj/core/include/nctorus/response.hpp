#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nctorus/disorder.hpp"
#include "nctorus/path.hpp"
#include "nctorus/spectral.hpp"

namespace nctorus {

/// Real-space value of 1/2 \oint eps T(p dp dp dp dp) for a loop with unit
/// k-space second Chern number, fixed against second_chern_4d on the clean
/// QHZ loop.
inline constexpr double kSecondChernNormalization = 1.0 / (2.0 * std::numbers::pi);
/// Real-space value of -i T(p [d_1 p, d_2 p]) for unit plaquette Chern number.
inline constexpr double kFirstChernNormalization = -1.0 / (2.0 * std::numbers::pi);

enum class Quadrature { trapezoid, simpson };

std::string to_string(Quadrature q);
Quadrature parse_quadrature(const std::string& name);

/// Everything besides the path that fixes the sampled Hamiltonians.
struct PathSettings {
    TorusGeometry geometry{{3, 3, 3}, 1};
    FluxTensor flux;
    DisorderSpec disorder;
    double fermi_level = 0.0;
    /// Number of time steps N_t.
    int intervals = 24;
    Quadrature quadrature = Quadrature::trapezoid;
    /// Finite-difference order of d_t p, 2 or 4.
    int derivative_order = 4;
    /// Smallest admissible spectral gap at any sample.
    double gap_floor = 1e-3;
    /// Largest admissible imaginary part of a real observable.
    double residue_tolerance = 1e-10;
    int workers = 1;
    SpectralOptions spectral;
};

/// Projectors of a path sampled at its quadrature nodes.
struct SampledPath {
    std::vector<double> times;
    std::vector<AlgebraElement> projectors;
    std::vector<double> gaps;
    bool closed = false;
    double step = 0.0;
    /// Spectral data of the first and last sample (open paths only).
    std::optional<SpectralData> initial;
    std::optional<SpectralData> final;
    std::optional<AlgebraElement> initial_hamiltonian;
    std::optional<AlgebraElement> final_hamiltonian;
};

/// Torus Hamiltonian of the path at time t.
AlgebraElement path_hamiltonian(const AdiabaticPath& path, const PathSettings& settings, double t);

/// Diagonalizes every sample; throws GapClosedError below the gap floor.
SampledPath sample_path(const AdiabaticPath& path, const PathSettings& settings);

/// d_t p at sample k: central differences of the given order, one-sided at
/// the ends of open paths. `stride` > 1 uses every stride-th sample only
/// (k must then be a multiple of stride).
AlgebraElement time_derivative_projector(const SampledPath& sampled, std::size_t k, int order = 4, int stride = 1);

/// Result of a real-valued trace formula.
struct TraceValue {
    double value = 0.0;
    double imaginary = 0.0;
};

/// eps T(p d_a p d_b p d_c p d_d p) over (t, 1, 2, 3) with dtp in the t slot.
TraceValue chern2_integrand(const AlgebraElement& p, const AlgebraElement& dtp);

/// sum_j T([d_t p, d_j p] [d_{j+1} p, d_{j+2} p]) from the products written out.
Complex proof_identity(const AlgebraElement& p, const AlgebraElement& dtp);

/// -i T(p [d_j p, d_k p]) / kFirstChernNormalization.
double first_chern(const AlgebraElement& p, int axis_j, int axis_k);
double first_chern_raw(const AlgebraElement& p, int axis_j, int axis_k);

/// (i/3) sum_j T(chi d_j p delta_j p) for one configuration, with d_j p from
/// resolvent_derivative_projector.
TraceValue boundary_term(const AlgebraElement& h, const SpectralData& spectrum, const ItoOptions& options = {});

struct ResponseReport {
    std::array<double, 3> delta_P{0.0, 0.0, 0.0};
    double delta_alpha_topological = 0.0;
    double delta_alpha_boundary = 0.0;
    double delta_alpha = 0.0;
    /// Topological part over a closed loop, in integer units.
    std::optional<double> chern2;
    std::vector<double> gap_profile;
    /// Same observables from every other sample (N_t / 2), for convergence.
    std::optional<std::array<double, 3>> delta_P_coarse;
    std::optional<double> delta_alpha_topological_coarse;

    // quadrature metadata
    Quadrature quadrature = Quadrature::trapezoid;
    int intervals = 0;
    int derivative_order = 4;
    bool closed = false;
    double step = 0.0;

    // diagnostics
    double max_imaginary_residue = 0.0;
    double max_proof_identity = 0.0;
    double endpoint_rate = 0.0;
    std::array<double, 2> boundary_raw{0.0, 0.0};

    double min_gap() const;
};

struct ObservableSelection {
    bool polarization = true;
    bool chern2 = true;
    bool boundary = true;
    /// Evaluate the Jacobi-type cancellation identity at every sample.
    bool proof_identity = true;
};

/// One pass over the sampled path computing the selected observables.
ResponseReport evaluate_path(const AdiabaticPath& path, const PathSettings& settings,
                             const ObservableSelection& what = {});

/// i \int dt T(p [d_t p, d_j p]).
double polarization_change(const AdiabaticPath& path, const PathSettings& settings, int axis);

/// Open, stationary path: topological and boundary parts of Delta alpha,
/// both divided by kSecondChernNormalization.
ResponseReport delta_alpha(const AdiabaticPath& path, const PathSettings& settings);

/// Closed loop: 1/2 \oint eps T(...) / kSecondChernNormalization.
ResponseReport second_chern(const AdiabaticPath& loop, const PathSettings& settings);

enum class Z2Class { integer, half_integer };
std::string to_string(Z2Class c);

struct Z2Record {
    double chern2 = 0.0;
    double delta_alpha = 0.0;
    Z2Class classification = Z2Class::integer;
    /// |2 delta_alpha - nearest integer|.
    double distance = 0.0;
    ResponseReport loop;
};

/// Builds gamma + (-Theta gamma), evaluates its second Chern number and
/// classifies Delta alpha = C2 / 2.
Z2Record z2_from_trs_pair(const AdiabaticPath& path, const PathSettings& settings,
                          double symmetry_tolerance = 1e-10);

/// Fitted normalization constant kappa = measured / expected, snapped to the
/// closest r (2 pi)^k with |k| <= 3 and denominators up to 12.
struct Calibration {
    double fitted = 0.0;
    long numerator = 0;
    long denominator = 1;
    int power = 0;
    double snapped = 0.0;
    double relative_residual = 0.0;
    /// Residual below 1e-10; finite-volume fits are flagged approximate.
    bool exact = false;
};

Calibration calibrate_normalization(double measured, double expected_integer);

}  // namespace nctorus
