#pragma once

#include <cstdint>

#include "nctorus/geometry.hpp"

namespace nctorus {

/// Bond disorder: every bond (m, m + d) present in the hopping table carries an
/// independent omega uniform on [-1/2, 1/2], drawn from a counter-based stream
/// keyed by (master_seed, realization, bond). The amplitude on the bond becomes
/// t_d + strength * omega * 1.
struct DisorderSpec {
    double strength = 0.0;
    std::uint64_t master_seed = 0;
    std::uint64_t realization = 0;
    /// Lattice translation of the realization: the bond based at m reads the
    /// random number of the bond based at m + shift.
    Coords shift{0, 0, 0};

    bool active() const { return strength != 0.0; }

    /// Key of the random stream of this realization, shared by all its bonds.
    std::uint64_t stream_key() const;

    /// Same realization translated by `a` on top of the current shift.
    DisorderSpec translated(const Coords& a) const;

    friend bool operator==(const DisorderSpec&, const DisorderSpec&) = default;
};

/// omega for the bond based at lattice site `base` with canonical displacement `d`.
double bond_disorder(const DisorderSpec& spec, const TorusGeometry& geometry, const Coords& base, const Coords& d);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace nctorus
