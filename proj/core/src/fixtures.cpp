#include "nctorus/fixtures.hpp"

#include <cmath>

#include "nctorus/error.hpp"

namespace nctorus {

namespace {

const Complex I{0.0, 1.0};

OrbitalMatrix pauli(int which) {
    OrbitalMatrix s = OrbitalMatrix::Zero(2, 2);
    switch (which) {
        case 0: s << 1, 0, 0, 1; break;
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, -I, I, 0; break;
        default: s << 1, 0, 0, -1; break;
    }
    return s;
}

// tau (x) sigma with index 2 * tau + sigma.
OrbitalMatrix kron(const OrbitalMatrix& a, const OrbitalMatrix& b) {
    OrbitalMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

Displacement unit(int axis) {
    Displacement d{0, 0, 0};
    d[static_cast<std::size_t>(axis)] = 1;
    return d;
}

HoppingTable cubic(const Parameters& q) {
    HoppingTable t(1);
    const double hop = q.at("hop");
    for (int j = 0; j < 3; ++j) t.add(unit(j), OrbitalMatrix::Constant(1, 1, hop));
    t.add({0, 0, 0}, OrbitalMatrix::Constant(1, 1, q.at("onsite")));
    return t;
}

HoppingTable atomic(const Parameters& q) {
    HoppingTable t(2);
    t.add({0, 0, 0}, q.at("splitting") * pauli(3));
    return t;
}

// sin k1 s_x + sin k2 s_y + (m + cos k1 + cos k2) s_z per layer, with an
// optional interlayer s_z hopping.
HoppingTable stacked_chern(const Parameters& q) {
    HoppingTable t(2);
    const double hop = q.at("hop");
    for (int j = 0; j < 2; ++j) t.add(unit(j), hop * (pauli(j + 1) / (2.0 * I) + 0.5 * pauli(3)));
    if (q.at("interlayer") != 0.0) t.add(unit(2), 0.5 * q.at("interlayer") * pauli(3));
    t.add({0, 0, 0}, q.at("m") * pauli(3));
    return t;
}

OrbitalMatrix qhz_gamma(int which) {
    switch (which) {
        case 0: return kron(pauli(3), pauli(0));
        case 4: return kron(pauli(2), pauli(0));
        default: return kron(pauli(1), pauli(which));
    }
}

// hop * sum_j sin k_j G_j + (m + hop * sum_j cos k_j) G_0 + beta G_4.
HoppingTable qhz(const Parameters& q) {
    HoppingTable t(4);
    const double hop = q.at("hop");
    for (int j = 0; j < 3; ++j) t.add(unit(j), hop * (qhz_gamma(j + 1) / (2.0 * I) + 0.5 * qhz_gamma(0)));
    t.add({0, 0, 0}, q.at("m") * qhz_gamma(0) + q.at("beta") * qhz_gamma(4));
    return t;
}

// Chain along x1: intracell w + delta, intercell w, staggered potential u.
HoppingTable rice_mele(const Parameters& q) {
    HoppingTable t(2);
    const double w = q.at("w");
    t.add({0, 0, 0}, (w + q.at("delta")) * pauli(1) + q.at("u") * pauli(3));
    t.add_entry(unit(0), 0, 1, w);
    return t;
}

std::vector<ModelFamily> build_catalog() {
    std::vector<ModelFamily> out;
    out.push_back({"cubic", "single-orbital nearest-neighbour cubic lattice", 1, {{"hop", 1.0}, {"onsite", 0.0}},
                   SymmetrySpec::trivial(1), cubic});
    out.push_back({"atomic", "two decoupled levels per site, no hopping", 2, {{"splitting", 1.0}},
                   SymmetrySpec{OrbitalMatrix::Identity(2, 2), pauli(3)}, atomic});
    out.push_back({"stacked_chern", "two-band Chern insulator layers stacked along x3", 2,
                   {{"m", 1.0}, {"hop", 1.0}, {"interlayer", 0.0}}, SymmetrySpec{OrbitalMatrix::Identity(2, 2), pauli(3)},
                   stacked_chern});
    out.push_back({"qhz", "four-band lattice Dirac model; beta breaks time reversal", 4,
                   {{"m", 2.0}, {"beta", 0.0}, {"hop", 1.0}},
                   SymmetrySpec{kron(pauli(0), I * pauli(2)), kron(pauli(3), pauli(0))}, qhz});
    out.push_back({"rice_mele", "dimerized chain along x1 with staggered potential", 2,
                   {{"w", 1.0}, {"delta", 1.0}, {"u", 0.0}}, SymmetrySpec{OrbitalMatrix::Identity(2, 2), pauli(1)},
                   rice_mele});
    return out;
}

}  // namespace

Parameters ModelFamily::resolve(const Parameters& overrides) const {
    Parameters out = defaults;
    for (const auto& [key, value] : overrides) {
        auto it = out.find(key);
        if (it == out.end()) throw InvalidInputError("model '" + name + "' has no parameter '" + key + "'");
        it->second = value;
    }
    return out;
}

HoppingTable ModelFamily::hoppings(const Parameters& overrides) const { return builder(resolve(overrides)); }

const std::vector<ModelFamily>& reference_models() {
    static const std::vector<ModelFamily> catalog = build_catalog();
    return catalog;
}

const ModelFamily& reference_model(const std::string& name) {
    for (const ModelFamily& family : reference_models()) {
        if (family.name == name) return family;
    }
    throw InvalidInputError("unknown reference model '" + name + "'");
}

ModelFamily constant_family(std::string name, HoppingTable table, SymmetrySpec symmetry) {
    const int orbitals = table.orbitals();
    return {std::move(name), "fixed hopping table", orbitals, {}, std::move(symmetry),
            [table = std::move(table)](const Parameters&) { return table; }};
}

}  // namespace nctorus
