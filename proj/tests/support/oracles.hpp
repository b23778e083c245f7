#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nctorus/algebra.hpp"
#include "nctorus/hopping.hpp"

// Test-side reference computations. They share no code with the library
// beyond the element and table containers.
namespace oracle {

using nctorus::AlgebraElement;
using nctorus::Complex;
using nctorus::Coords;
using nctorus::FluxTensor;
using nctorus::HoppingTable;
using nctorus::Matrix;
using nctorus::TorusGeometry;

/// Element with independent random complex entries between sites whose
/// periodic distance is at most `range` along every axis.
AlgebraElement random_short_range(const TorusGeometry& geometry, int range, std::uint64_t seed,
                                  bool hermitian = false);

/// Random hopping table with |d_j| <= range, Hermitian closure built in.
HoppingTable random_table(int orbitals, int range, std::uint64_t seed);

/// (A B)_{xy} = sum_z A_{xz} B_{zy} by explicit loops.
Matrix brute_product(const Matrix& a, const Matrix& b);

/// x mod L represented in (-L/2, L/2].
int min_image(int x, int extent);

/// i w(y_j - x_j) f_{xy} computed from site coordinates.
Matrix derive_reference(const AlgebraElement& f, int axis);

/// Sorted eigenvalues of h(k) = sum_d t_d exp(i k.d) over k = 2 pi m / L.
std::vector<double> bloch_spectrum(const HoppingTable& table, const Coords& extents);

/// Contour integrals over a circle enclosing exactly the levels below e_F,
/// N nodes of the periodic trapezoid rule, R = (h - z)^-1:
///   d_j p     =  (1 / 2 pi i) \oint R d_j h R dz
///   delta_j p = -(1 / 2 pi i) \oint (i/2) R [d_{j+1}h R, d_{j+2}h R] dz
Matrix contour_derivative(const AlgebraElement& h, double fermi_level, int axis, int nodes);
Matrix contour_ito(const AlgebraElement& h, double fermi_level, int axis, int nodes);

/// sum over permutations s of sign(s) T(p D_s(0) D_s(1) D_s(2) D_s(3)).
Complex eps_trace(const Matrix& p, const std::array<Matrix, 4>& slots, long sites);

/// Projector onto the lower level of cos(a) sz + sin(a) sx and its derivative in a.
std::array<Matrix, 2> two_level_projector(double angle);

double relative_frobenius(const Matrix& a, const Matrix& reference);

}  // namespace oracle
