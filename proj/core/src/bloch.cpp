#include "nctorus/bloch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nctorus/error.hpp"

namespace nctorus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct BandData {
    Eigen::VectorXd energies;
    OrbitalMatrix vectors;
    long occupied = 0;
};

BandData bands(const OrbitalMatrix& h, double fermi_level, double window) {
    Eigen::SelfAdjointEigenSolver<OrbitalMatrix> solver(h);
    BandData out{solver.eigenvalues(), solver.eigenvectors(), 0};
    for (Eigen::Index n = 0; n < out.energies.size(); ++n) {
        if (std::abs(out.energies(n) - fermi_level) <= window) {
            throw GapClosedError("Bloch band at the Fermi level", out.energies(n));
        }
        if (out.energies(n) < fermi_level) ++out.occupied;
    }
    return out;
}

OrbitalMatrix bloch_derivative(const HoppingTable& table, const Momentum& k, int axis) {
    OrbitalMatrix out = OrbitalMatrix::Zero(table.orbitals(), table.orbitals());
    for (const auto& [d, t] : table.entries()) {
        const double phase = k[0] * d[0] + k[1] * d[1] + k[2] * d[2];
        out += Complex(0.0, d[static_cast<std::size_t>(axis)]) * std::polar(1.0, phase) * t;
    }
    return out;
}

// dP for the perturbation dh: sum_{o,u} |o><o|dh|u><u| / (E_o - E_u) + h.c.
OrbitalMatrix projector_derivative(const BandData& b, const OrbitalMatrix& dh) {
    const long n = b.energies.size();
    const long occ = b.occupied;
    const OrbitalMatrix rotated = b.vectors.adjoint() * dh * b.vectors;
    OrbitalMatrix m = OrbitalMatrix::Zero(n, n);
    for (long o = 0; o < occ; ++o) {
        for (long u = occ; u < n; ++u) m(o, u) = rotated(o, u) / (b.energies(o) - b.energies(u));
    }
    m += m.adjoint().eval();
    return b.vectors * m * b.vectors.adjoint();
}

double epsilon_trace(const OrbitalMatrix& p, const std::array<OrbitalMatrix, 4>& d) {
    std::array<int, 4> perm{0, 1, 2, 3};
    Complex sum = 0.0;
    do {
        int inversions = 0;
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) inversions += perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)];
        }
        const OrbitalMatrix prod = p * d[static_cast<std::size_t>(perm[0])] * d[static_cast<std::size_t>(perm[1])] *
                                   d[static_cast<std::size_t>(perm[2])] * d[static_cast<std::size_t>(perm[3])];
        sum += (inversions % 2 == 0 ? 1.0 : -1.0) * prod.trace();
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum.real();
}

Momentum grid_point(const std::array<int, 3>& m, int grid) {
    return {kTwoPi * m[0] / grid, kTwoPi * m[1] / grid, kTwoPi * m[2] / grid};
}

OrbitalMatrix occupied_frame(const OrbitalMatrix& h, double fermi_level) {
    const BandData b = bands(h, fermi_level, 1e-10);
    return b.vectors.leftCols(b.occupied);
}

}  // namespace

OrbitalMatrix bloch_hamiltonian(const HoppingTable& table, const Momentum& k) {
    // h = m + m^dagger with m = t_0 / 2 + sum over one representative per bond,
    // which is Hermitian exactly.
    OrbitalMatrix half = OrbitalMatrix::Zero(table.orbitals(), table.orbitals());
    for (const Displacement& d : table.canonical_displacements()) {
        const OrbitalMatrix& t = table.entries().at(d);
        if (d == Displacement{0, 0, 0}) {
            half += 0.5 * t;
        } else {
            half += std::polar(1.0, k[0] * d[0] + k[1] * d[1] + k[2] * d[2]) * t;
        }
    }
    return half + half.adjoint();
}

OrbitalMatrix band_projector(const HoppingTable& table, const Momentum& k, double fermi_level, double window) {
    const BandData b = bands(bloch_hamiltonian(table, k), fermi_level, window);
    const auto v = b.vectors.leftCols(b.occupied);
    return v * v.adjoint();
}

Eigen::VectorXd clean_spectrum(const HoppingTable& table, const TorusGeometry& geometry) {
    const int D = table.orbitals();
    Eigen::VectorXd out(geometry.dimension());
    long next = 0;
    for (int m3 = 0; m3 < geometry.extent(2); ++m3) {
        for (int m2 = 0; m2 < geometry.extent(1); ++m2) {
            for (int m1 = 0; m1 < geometry.extent(0); ++m1) {
                const Momentum k{kTwoPi * m1 / geometry.extent(0), kTwoPi * m2 / geometry.extent(1),
                                 kTwoPi * m3 / geometry.extent(2)};
                Eigen::SelfAdjointEigenSolver<OrbitalMatrix> solver(bloch_hamiltonian(table, k),
                                                                    Eigen::EigenvaluesOnly);
                out.segment(next, D) = solver.eigenvalues();
                next += D;
            }
        }
    }
    std::sort(out.data(), out.data() + out.size());
    return out;
}

double bloch_gap(const HoppingTable& table, double fermi_level, int grid) {
    double top = -std::numeric_limits<double>::infinity();
    double bottom = std::numeric_limits<double>::infinity();
    for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
            for (int c = 0; c < grid; ++c) {
                Eigen::SelfAdjointEigenSolver<OrbitalMatrix> solver(bloch_hamiltonian(table, grid_point({a, b, c}, grid)),
                                                                    Eigen::EigenvaluesOnly);
                for (Eigen::Index n = 0; n < solver.eigenvalues().size(); ++n) {
                    const double e = solver.eigenvalues()(n);
                    if (e < fermi_level) top = std::max(top, e);
                    else bottom = std::min(bottom, e);
                }
            }
        }
    }
    if (!std::isfinite(top) || !std::isfinite(bottom)) return 0.0;
    return std::max(0.0, bottom - top);
}

int first_chern_fhs(const HoppingTable& table, int axis_a, int axis_b, double fermi_level, int grid, double k_perp) {
    if (axis_a == axis_b) throw InvalidInputError("Chern plane needs two distinct axes");
    const int perp = 3 - axis_a - axis_b;
    std::vector<OrbitalMatrix> frames(static_cast<std::size_t>(grid) * grid);
    const auto frame = [&](int a, int b) -> const OrbitalMatrix& {
        return frames[static_cast<std::size_t>(((a % grid) * grid) + (b % grid))];
    };
    for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
            Momentum k{};
            k[static_cast<std::size_t>(axis_a)] = kTwoPi * a / grid;
            k[static_cast<std::size_t>(axis_b)] = kTwoPi * b / grid;
            k[static_cast<std::size_t>(perp)] = k_perp;
            frames[static_cast<std::size_t>(a * grid + b)] = occupied_frame(bloch_hamiltonian(table, k), fermi_level);
        }
    }
    if (frames.front().cols() == 0) return 0;
    const auto link = [](const OrbitalMatrix& u, const OrbitalMatrix& v) {
        const Complex z = (u.adjoint() * v).determinant();
        return z / std::abs(z);
    };
    double flux = 0.0;
    for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
            const Complex loop = link(frame(a, b), frame(a + 1, b)) * link(frame(a + 1, b), frame(a + 1, b + 1)) *
                                 link(frame(a + 1, b + 1), frame(a, b + 1)) * link(frame(a, b + 1), frame(a, b));
            flux += std::arg(loop);
        }
    }
    return static_cast<int>(std::lround(-flux / kTwoPi));
}

double second_chern_4d(const TableLoop& loop, double fermi_level, int grid_t, int grid_k) {
    const double tau = 1e-5;
    double sum = 0.0;
    for (int it = 0; it < grid_t; ++it) {
        const double t = static_cast<double>(it) / grid_t;
        const HoppingTable here = loop(t);
        const HoppingTable ahead = loop(std::fmod(t + tau, 1.0));
        const HoppingTable behind = loop(std::fmod(t - tau + 1.0, 1.0));
        for (int a = 0; a < grid_k; ++a) {
            for (int b = 0; b < grid_k; ++b) {
                for (int c = 0; c < grid_k; ++c) {
                    const Momentum k = grid_point({a, b, c}, grid_k);
                    const BandData band = bands(bloch_hamiltonian(here, k), fermi_level, 1e-10);
                    const auto v = band.vectors.leftCols(band.occupied);
                    const OrbitalMatrix p = v * v.adjoint();
                    const OrbitalMatrix dt_h = (bloch_hamiltonian(ahead, k) - bloch_hamiltonian(behind, k)) / (2.0 * tau);
                    const std::array<OrbitalMatrix, 4> d{projector_derivative(band, dt_h),
                                                         projector_derivative(band, bloch_derivative(here, k, 0)),
                                                         projector_derivative(band, bloch_derivative(here, k, 1)),
                                                         projector_derivative(band, bloch_derivative(here, k, 2))};
                    sum += epsilon_trace(p, d);
                }
            }
        }
    }
    const double cell = (1.0 / grid_t) * std::pow(kTwoPi / grid_k, 3);
    return -sum * cell / (8.0 * std::numbers::pi * std::numbers::pi);
}

double berry_polarization_change(const TableLoop& loop, int axis, double fermi_level, int grid_t, int grid_k,
                                 int grid_perp) {
    const int pa = (axis + 1) % 3;
    const int pb = (axis + 2) % 3;
    double total = 0.0;
    for (int ia = 0; ia < grid_perp; ++ia) {
        for (int ib = 0; ib < grid_perp; ++ib) {
            const auto berry_phase = [&](const HoppingTable& table) {
                std::vector<OrbitalMatrix> frames(static_cast<std::size_t>(grid_k));
                for (int n = 0; n < grid_k; ++n) {
                    Momentum k{};
                    k[static_cast<std::size_t>(axis)] = -kTwoPi * n / grid_k;
                    k[static_cast<std::size_t>(pa)] = -kTwoPi * ia / grid_perp;
                    k[static_cast<std::size_t>(pb)] = -kTwoPi * ib / grid_perp;
                    frames[static_cast<std::size_t>(n)] = occupied_frame(bloch_hamiltonian(table, k), fermi_level);
                }
                Complex product = 1.0;
                for (int n = 0; n < grid_k; ++n) {
                    const Complex z = (frames[static_cast<std::size_t>(n)].adjoint() *
                                       frames[static_cast<std::size_t>((n + 1) % grid_k)])
                                          .determinant();
                    product *= z / std::abs(z);
                }
                return -std::arg(product);
            };
            double previous = berry_phase(loop(0.0));
            const double start = previous;
            double winding = 0.0;
            for (int it = 1; it <= grid_t; ++it) {
                const double current = berry_phase(loop(it == grid_t ? 0.0 : static_cast<double>(it) / grid_t));
                winding += std::remainder(current - previous, kTwoPi);
                previous = current;
            }
            (void)start;
            total += winding / kTwoPi;
        }
    }
    return total / (grid_perp * grid_perp);
}

}  // namespace nctorus
