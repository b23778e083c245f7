#include "nctorus/symmetry.hpp"

#include <string>

#include "nctorus/error.hpp"

namespace nctorus {

namespace {

void require_unitary(const OrbitalMatrix& u, int orbitals, const char* what) {
    if (u.rows() != orbitals || u.cols() != orbitals) {
        throw InvalidInputError(std::string(what) + " must be " + std::to_string(orbitals) + "x" +
                                std::to_string(orbitals));
    }
    const double defect = (u * u.adjoint() - OrbitalMatrix::Identity(orbitals, orbitals)).cwiseAbs().maxCoeff();
    if (defect > 1e-12) throw InvalidInputError(std::string(what) + " is not unitary");
}

}  // namespace

SymmetrySpec SymmetrySpec::trivial(int orbitals) {
    return {OrbitalMatrix::Identity(orbitals, orbitals), OrbitalMatrix::Identity(orbitals, orbitals)};
}

void SymmetrySpec::validate(int orbitals) const {
    require_unitary(spin_rotation, orbitals, "spin rotation");
    require_unitary(inversion_orbital, orbitals, "inversion orbital action");
}

AlgebraElement time_reversal(const AlgebraElement& f, const SymmetrySpec& symmetry) {
    if (!f.flux().is_zero()) throw InvalidInputError("time reversal is only defined at zero magnetic flux");
    const int D = f.geometry().orbitals();
    symmetry.validate(D);
    const long sites = f.geometry().sites();
    const OrbitalMatrix& s = symmetry.spin_rotation;
    const OrbitalMatrix s_dag = s.adjoint();
    const Matrix conj = f.matrix().conjugate();
    if (s.isIdentity(0.0)) return f.with_matrix(conj);

    Matrix out(f.dimension(), f.dimension());
    for (long y = 0; y < sites; ++y) {
        for (long x = 0; x < sites; ++x) {
            out.block(x * D, y * D, D, D).noalias() = s * conj.block(x * D, y * D, D, D) * s_dag;
        }
    }
    return f.with_matrix(std::move(out));
}

AlgebraElement inversion(const AlgebraElement& f, const SymmetrySpec& symmetry) {
    const TorusGeometry& geom = f.geometry();
    const int D = geom.orbitals();
    symmetry.validate(D);
    const long sites = geom.sites();
    std::vector<long> mirror(static_cast<std::size_t>(sites));
    for (long s = 0; s < sites; ++s) {
        const Coords n = geom.site_coords(s);
        mirror[static_cast<std::size_t>(s)] = geom.site_index({-n[0], -n[1], -n[2]});
    }
    const OrbitalMatrix& p = symmetry.inversion_orbital;
    const OrbitalMatrix p_dag = p.adjoint();
    const Matrix& m = f.matrix();
    Matrix out(f.dimension(), f.dimension());
    for (long y = 0; y < sites; ++y) {
        const long my = mirror[static_cast<std::size_t>(y)];
        for (long x = 0; x < sites; ++x) {
            const long mx = mirror[static_cast<std::size_t>(x)];
            out.block(x * D, y * D, D, D).noalias() = p * m.block(mx * D, my * D, D, D) * p_dag;
        }
    }
    return f.with_matrix(std::move(out));
}

}  // namespace nctorus
