#pragma once

#include <array>
#include <functional>

#include <Eigen/Dense>

#include "nctorus/hopping.hpp"

namespace nctorus {

using Momentum = std::array<double, 3>;

/// sum_d t_d e^{i k.d}.
OrbitalMatrix bloch_hamiltonian(const HoppingTable& table, const Momentum& k);

/// Projector onto the bands of h(k) below the Fermi level. Throws
/// GapClosedError when a band sits within `window` of it.
OrbitalMatrix band_projector(const HoppingTable& table, const Momentum& k, double fermi_level,
                             double window = 1e-10);

/// Sorted eigenvalues of h(2 pi m / L) over the reciprocal grid of `geometry`,
/// the spectrum of the clean zero-flux torus Hamiltonian.
Eigen::VectorXd clean_spectrum(const HoppingTable& table, const TorusGeometry& geometry);

/// Smallest distance between a conduction and a valence level on
/// `grid` points per axis (axes with extent-1 models still sampled).
double bloch_gap(const HoppingTable& table, double fermi_level, int grid);

/// Plaquette field-strength Chern number of the occupied bands in the
/// (axis_a, axis_b) momentum plane at fixed remaining momentum.
int first_chern_fhs(const HoppingTable& table, int axis_a, int axis_b, double fermi_level, int grid,
                    double k_perp = 0.0);

/// t in [0, 1] -> clean hopping table of a closed loop.
using TableLoop = std::function<HoppingTable(double)>;

/// -(1/8 pi^2) int d^4k eps tr(P dP dP dP dP) over (t, k1, k2, k3), with
/// exact momentum derivatives of P and a finite difference in t. Trapezoid
/// rule on a periodic grid.
double second_chern_4d(const TableLoop& loop, double fermi_level, int grid_t, int grid_k);

/// Charge pumped along `axis` by the closed loop: winding of the
/// occupied-band Berry phase of H(k) = bloch(-k), divided by 2 pi, averaged
/// over `grid_perp` points per transverse axis.
double berry_polarization_change(const TableLoop& loop, int axis, double fermi_level, int grid_t, int grid_k,
                                 int grid_perp = 1);

}  // namespace nctorus
