#include "nctorus/response.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "nctorus/error.hpp"
#include "nctorus/lattice.hpp"
#include "nctorus/parallel.hpp"

namespace nctorus {

namespace {

std::string short_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

constexpr Complex kI{0.0, 1.0};

// Per-sample scalars that are later reduced in sample order.
struct SampleValues {
    double chern = 0.0;
    double chern_coarse = 0.0;
    std::array<double, 3> polarization{0.0, 0.0, 0.0};
    std::array<double, 3> polarization_coarse{0.0, 0.0, 0.0};
    double imaginary = 0.0;
    double proof_identity = 0.0;
    bool has_coarse = false;
};

// Matrix pieces of the eps-contracted integrand that do not involve d_t p.
// The integrand is T(X_t G), linear in X_t = d_t p.
struct Chern2Kernel {
    Matrix g;
    Matrix jacobi;  // sum_j [X_j, Y_j], zero up to rounding
};

Chern2Kernel chern2_kernel(const AlgebraElement& p) {
    const std::array<Matrix, 3> x{derive(p, 0).matrix(), derive(p, 1).matrix(), derive(p, 2).matrix()};
    const long n = p.dimension();
    std::array<Matrix, 3> y;
    for (int c = 0; c < 3; ++c) {
        const Matrix& a = x[static_cast<std::size_t>(next_axis(c, 1))];
        const Matrix& b = x[static_cast<std::size_t>(next_axis(c, 2))];
        Matrix yc = a * b;
        yc.noalias() -= b * a;
        y[static_cast<std::size_t>(c)] = std::move(yc);
    }
    Matrix s = Matrix::Zero(n, n);
    Matrix s_rev = Matrix::Zero(n, n);
    Matrix m = Matrix::Zero(n, n);
    Matrix tmp(n, n);
    for (std::size_t c = 0; c < 3; ++c) {
        s.noalias() += x[c] * y[c];
        s_rev.noalias() += y[c] * x[c];
        tmp.noalias() = y[c] * p.matrix();
        m.noalias() += tmp * x[c];
    }
    Chern2Kernel out;
    out.g = s * p.matrix();
    if (p.geometry().odd_extents()) {
        // d_j p is Hermitian here, so p S = -(S p)^dagger and X p Y = -(Y p X)^dagger.
        out.g += out.g.adjoint().eval();
        out.g -= m;
        out.g -= m.adjoint();
    } else {
        out.g.noalias() -= p.matrix() * s;
        out.g -= m;
        for (std::size_t c = 0; c < 3; ++c) {
            tmp.noalias() = x[c] * p.matrix();
            out.g.noalias() += tmp * y[c];
        }
    }
    out.jacobi = std::move(s);
    out.jacobi -= s_rev;
    return out;
}

// [X_j, p] for every axis; i T(X_t K_j) is the polarization integrand.
std::array<Matrix, 3> polarization_kernels(const AlgebraElement& p) {
    std::array<Matrix, 3> out;
    for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(j)] = commutator(derive(p, j), p).matrix();
    return out;
}

Complex trace_product(const AlgebraElement& tags, const Matrix& a, const Matrix& b) {
    return (a.cwiseProduct(b.transpose())).sum() / static_cast<double>(tags.geometry().sites());
}

std::vector<double> quadrature_weights(std::size_t samples, bool closed, Quadrature rule, double step) {
    std::vector<double> w(samples, step);
    if (rule == Quadrature::simpson) {
        const std::size_t intervals = closed ? samples : samples - 1;
        if (intervals % 2 != 0) throw InvalidInputError("Simpson quadrature needs an even number of time steps");
        for (std::size_t k = 0; k < samples; ++k) w[k] = step * (k % 2 == 0 ? 2.0 / 3.0 : 4.0 / 3.0);
        if (!closed) {
            w.front() = step / 3.0;
            w.back() = step / 3.0;
        }
        return w;
    }
    if (!closed) {
        w.front() *= 0.5;
        w.back() *= 0.5;
    }
    return w;
}

}  // namespace

std::string to_string(Quadrature q) { return q == Quadrature::simpson ? "simpson" : "trapezoid"; }

Quadrature parse_quadrature(const std::string& name) {
    if (name == "trapezoid") return Quadrature::trapezoid;
    if (name == "simpson") return Quadrature::simpson;
    throw InvalidInputError("unknown quadrature '" + name + "'");
}

std::string to_string(Z2Class c) { return c == Z2Class::integer ? "integer" : "half-integer"; }

double ResponseReport::min_gap() const {
    if (gap_profile.empty()) return 0.0;
    return *std::min_element(gap_profile.begin(), gap_profile.end());
}

AlgebraElement path_hamiltonian(const AdiabaticPath& path, const PathSettings& settings, double t) {
    return build_hamiltonian({settings.geometry, path.hoppings(t), settings.flux, settings.disorder});
}

SampledPath sample_path(const AdiabaticPath& path, const PathSettings& settings) {
    SampledPath out;
    out.closed = path.closed();
    out.times = path.sample_times(settings.intervals);
    out.step = 1.0 / settings.intervals;
    const std::size_t count = out.times.size();
    std::vector<std::optional<AlgebraElement>> projectors(count);
    std::vector<std::optional<SpectralData>> ends(2);
    std::vector<std::optional<AlgebraElement>> end_h(2);
    out.gaps.assign(count, 0.0);

    parallel_for(count, settings.workers, [&](std::size_t k) {
        AlgebraElement h = path_hamiltonian(path, settings, out.times[k]);
        SpectralData spectrum = diagonalize(h, settings.fermi_level);
        const double gap = spectrum.gap();
        out.gaps[k] = gap;
        if (gap < settings.gap_floor) {
            throw GapClosedError("spectral gap " + short_number(gap) + " below the floor " +
                                     short_number(settings.gap_floor) + " at t = " + std::to_string(out.times[k]),
                                 settings.fermi_level);
        }
        projectors[k] = fermi_projector(spectrum, settings.spectral);
        if (!out.closed && (k == 0 || k + 1 == count)) {
            const std::size_t slot = k == 0 ? 0 : 1;
            ends[slot] = std::move(spectrum);
            end_h[slot] = std::move(h);
        }
    });
    for (auto& p : projectors) out.projectors.push_back(std::move(*p));
    out.initial = std::move(ends[0]);
    out.final = std::move(ends[1]);
    out.initial_hamiltonian = std::move(end_h[0]);
    out.final_hamiltonian = std::move(end_h[1]);
    return out;
}

AlgebraElement time_derivative_projector(const SampledPath& sampled, std::size_t k, int order, int stride) {
    if (order != 2 && order != 4) throw InvalidInputError("finite-difference order must be 2 or 4");
    if (stride < 1 || k % static_cast<std::size_t>(stride) != 0) {
        throw InvalidInputError("sample index is not on the strided grid");
    }
    const long n = static_cast<long>(sampled.projectors.size());
    const long s = stride;
    const double h = sampled.step * stride;
    const long j = static_cast<long>(k) / s;
    const long last = sampled.closed ? n / s : (n - 1) / s;  // number of strided intervals
    const auto& proto = sampled.projectors[k];

    const auto at = [&](long m) -> const Matrix& {
        long idx = m * s;
        if (sampled.closed) idx = ((idx % n) + n) % n;
        return sampled.projectors[static_cast<std::size_t>(idx)].matrix();
    };
    const auto combine = [&](long first, std::initializer_list<double> coeffs, double denom) {
        // The coefficients sum to zero, so differences against the centre
        // sample lose nothing and vanish exactly where p does not move.
        Matrix out = Matrix::Zero(proto.dimension(), proto.dimension());
        const Matrix& centre = proto.matrix();
        long m = first;
        for (double c : coeffs) {
            if (c != 0.0 && &at(m) != &centre) out += c * (at(m) - centre);
            ++m;
        }
        out /= denom;
        return proto.with_matrix(std::move(out));
    };

    if (order == 2) {
        if (!sampled.closed && last < 2) throw InvalidInputError("too few samples for the difference stencil");
        if (sampled.closed || (j > 0 && j < last)) return combine(j - 1, {-1.0, 0.0, 1.0}, 2.0 * h);
        if (j == 0) return combine(0, {-3.0, 4.0, -1.0}, 2.0 * h);
        return combine(last - 2, {1.0, -4.0, 3.0}, 2.0 * h);
    }
    if (sampled.closed && last < 5) throw InvalidInputError("too few samples for the difference stencil");
    if (!sampled.closed && last < 4) throw InvalidInputError("too few samples for the difference stencil");
    if (sampled.closed || (j > 1 && j < last - 1)) return combine(j - 2, {1.0, -8.0, 0.0, 8.0, -1.0}, 12.0 * h);
    if (j == 0) return combine(0, {-25.0, 48.0, -36.0, 16.0, -3.0}, 12.0 * h);
    if (j == 1) return combine(0, {-3.0, -10.0, 18.0, -6.0, 1.0}, 12.0 * h);
    if (j == last - 1) return combine(last - 4, {-1.0, 6.0, -18.0, 10.0, 3.0}, 12.0 * h);
    return combine(last - 4, {3.0, -16.0, 36.0, -48.0, 25.0}, 12.0 * h);
}

TraceValue chern2_integrand(const AlgebraElement& p, const AlgebraElement& dtp) {
    require_same_tags(p, dtp);
    const Chern2Kernel kernel = chern2_kernel(p);
    const Complex z = trace_product(p, dtp.matrix(), kernel.g);
    return {z.real(), z.imag()};
}

Complex proof_identity(const AlgebraElement& p, const AlgebraElement& dtp) {
    require_same_tags(p, dtp);
    Complex sum = 0.0;
    for (int j = 0; j < 3; ++j) {
        const AlgebraElement left = commutator(dtp, derive(p, j));
        const AlgebraElement right = commutator(derive(p, next_axis(j, 1)), derive(p, next_axis(j, 2)));
        sum += trace_product_per_volume(left, right);
    }
    return sum;
}

double first_chern_raw(const AlgebraElement& p, int axis_j, int axis_k) {
    const AlgebraElement c = commutator(derive(p, axis_j), derive(p, axis_k));
    return (-kI * trace_product_per_volume(p, c)).real();
}

double first_chern(const AlgebraElement& p, int axis_j, int axis_k) {
    return first_chern_raw(p, axis_j, axis_k) / kFirstChernNormalization;
}

TraceValue boundary_term(const AlgebraElement& h, const SpectralData& spectrum, const ItoOptions& options) {
    const AlgebraElement chi = sign_function(spectrum, options.spectral);
    const AlgebraElement p = fermi_projector(spectrum, options.spectral);
    Complex sum = 0.0;
    for (int j = 0; j < 3; ++j) {
        // d_j p through the resolvent like delta_j p: both are then purely
        // cross-gap where it matters, and the trace is real up to rounding.
        const AlgebraElement dp = resolvent_derivative_projector(h, spectrum, j, options.spectral);
        const AlgebraElement delta = ito_projector_offdiag(h, spectrum, j, options);
        const Matrix left = chi.matrix() * dp.matrix();
        sum += trace_product(p, left, delta.matrix());
    }
    const Complex z = (kI / 3.0) * sum;
    return {z.real(), z.imag()};
}

ResponseReport evaluate_path(const AdiabaticPath& path, const PathSettings& settings, const ObservableSelection& what) {
    if (settings.derivative_order != 2 && settings.derivative_order != 4) {
        throw InvalidInputError("derivative order must be 2 or 4");
    }
    const SampledPath sampled = sample_path(path, settings);
    const std::size_t count = sampled.projectors.size();
    const long intervals = settings.intervals;
    const long min_intervals = settings.derivative_order == 4 ? (sampled.closed ? 5 : 4) : 2;
    const bool coarse = intervals % 2 == 0 && intervals / 2 >= min_intervals &&
                        (settings.quadrature == Quadrature::trapezoid || (intervals / 2) % 2 == 0);

    std::vector<SampleValues> values(count);
    parallel_for(count, settings.workers, [&](std::size_t k) {
        const AlgebraElement& p = sampled.projectors[k];
        const AlgebraElement dtp = time_derivative_projector(sampled, k, settings.derivative_order);
        std::optional<AlgebraElement> dtp_coarse;
        SampleValues& v = values[k];
        if (coarse && k % 2 == 0) {
            dtp_coarse = time_derivative_projector(sampled, k, settings.derivative_order, 2);
            v.has_coarse = true;
        }
        if (what.chern2 || what.proof_identity) {
            const Chern2Kernel kernel = chern2_kernel(p);
            const Complex z = trace_product(p, dtp.matrix(), kernel.g);
            v.chern = z.real();
            v.imaginary = std::max(v.imaginary, std::abs(z.imag()));
            v.proof_identity = std::abs(trace_product(p, dtp.matrix(), kernel.jacobi));
            if (dtp_coarse) v.chern_coarse = trace_product(p, dtp_coarse->matrix(), kernel.g).real();
        }
        if (what.polarization) {
            const std::array<Matrix, 3> kernels = polarization_kernels(p);
            for (std::size_t j = 0; j < 3; ++j) {
                const Complex z = kI * trace_product(p, dtp.matrix(), kernels[j]);
                v.polarization[j] = z.real();
                v.imaginary = std::max(v.imaginary, std::abs(z.imag()));
                if (dtp_coarse) v.polarization_coarse[j] = (kI * trace_product(p, dtp_coarse->matrix(), kernels[j])).real();
            }
        }
    });

    ResponseReport report;
    report.quadrature = settings.quadrature;
    report.intervals = settings.intervals;
    report.derivative_order = settings.derivative_order;
    report.closed = sampled.closed;
    report.step = sampled.step;
    report.gap_profile = sampled.gaps;
    report.endpoint_rate = path.endpoint_rate();

    const std::vector<double> w = quadrature_weights(count, sampled.closed, settings.quadrature, sampled.step);
    double chern_integral = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        chern_integral += w[k] * values[k].chern;
        for (std::size_t j = 0; j < 3; ++j) report.delta_P[j] += w[k] * values[k].polarization[j];
        report.max_imaginary_residue = std::max(report.max_imaginary_residue, values[k].imaginary);
        report.max_proof_identity = std::max(report.max_proof_identity, values[k].proof_identity);
    }
    if (coarse) {
        const std::size_t coarse_count = sampled.closed ? count / 2 : (count - 1) / 2 + 1;
        const std::vector<double> wc =
            quadrature_weights(coarse_count, sampled.closed, settings.quadrature, 2.0 * sampled.step);
        double coarse_chern = 0.0;
        std::array<double, 3> coarse_p{0.0, 0.0, 0.0};
        for (std::size_t c = 0; c < coarse_count; ++c) {
            coarse_chern += wc[c] * values[2 * c].chern_coarse;
            for (std::size_t j = 0; j < 3; ++j) coarse_p[j] += wc[c] * values[2 * c].polarization_coarse[j];
        }
        if (what.polarization) report.delta_P_coarse = coarse_p;
        if (what.chern2) report.delta_alpha_topological_coarse = 0.5 * coarse_chern / kSecondChernNormalization;
    }
    if (what.chern2) {
        report.delta_alpha_topological = 0.5 * chern_integral / kSecondChernNormalization;
        if (sampled.closed) report.chern2 = report.delta_alpha_topological;
    }
    if (what.boundary && !sampled.closed) {
        const TraceValue initial = boundary_term(*sampled.initial_hamiltonian, *sampled.initial);
        const TraceValue final = boundary_term(*sampled.final_hamiltonian, *sampled.final);
        report.boundary_raw = {initial.value, final.value};
        report.max_imaginary_residue =
            std::max({report.max_imaginary_residue, std::abs(initial.imaginary), std::abs(final.imaginary)});
        report.delta_alpha_boundary = (final.value - initial.value) / kSecondChernNormalization;
    }
    report.delta_alpha = report.delta_alpha_topological + report.delta_alpha_boundary;
    if (report.max_imaginary_residue > settings.residue_tolerance) {
        throw ResidueError("imaginary residue " + short_number(report.max_imaginary_residue) +
                               " exceeds the tolerance " + short_number(settings.residue_tolerance),
                           report.max_imaginary_residue);
    }
    return report;
}

double polarization_change(const AdiabaticPath& path, const PathSettings& settings, int axis) {
    if (axis < 0 || axis > 2) throw InvalidInputError("axis must be 0, 1 or 2");
    const ResponseReport r = evaluate_path(path, settings, {true, false, false, true});
    return r.delta_P[static_cast<std::size_t>(axis)];
}

ResponseReport delta_alpha(const AdiabaticPath& path, const PathSettings& settings) {
    if (!path.endpoint_stationary()) throw InvalidInputError("delta_alpha needs a path that is stationary at its ends");
    if (path.closed()) {
        const bool constant = std::all_of(path.pieces().begin(), path.pieces().end(), [](const AdiabaticPath::Piece& p) {
            return p.segment.kind == PathSegment::Kind::constant;
        });
        if (!constant) throw InvalidInputError("delta_alpha expects an open path; use second_chern for loops");
        // Identical endpoints: the boundary part cancels exactly.
        return evaluate_path(path, settings, {false, true, false, true});
    }
    return evaluate_path(path, settings, {false, true, true, true});
}

ResponseReport second_chern(const AdiabaticPath& loop, const PathSettings& settings) {
    if (!loop.closed()) throw InvalidInputError("second_chern needs a closed loop");
    return evaluate_path(loop, settings, {false, true, false, true});
}

Z2Record z2_from_trs_pair(const AdiabaticPath& path, const PathSettings& settings, double symmetry_tolerance) {
    if (!settings.flux.is_zero()) throw InvalidInputError("the Z2 construction needs zero magnetic flux");
    for (double t : {0.0, 1.0}) {
        const HoppingTable h = path.hoppings(t);
        const double defect =
            HoppingTable::max_difference(h, time_reverse_table(h, path.pieces().front().family->symmetry));
        if (defect > symmetry_tolerance) {
            throw InvalidInputError("path endpoint at t = " + std::to_string(t) +
                                    " is not time-reversal symmetric (defect " + std::to_string(defect) + ")");
        }
    }
    const AdiabaticPath loop = path.concatenate(path.time_reversed().reversed());
    Z2Record out;
    out.loop = second_chern(loop, settings);
    out.chern2 = *out.loop.chern2;
    out.delta_alpha = 0.5 * out.chern2;
    const double nearest = std::round(out.chern2);
    out.distance = std::abs(out.chern2 - nearest);
    out.classification = std::fmod(std::abs(nearest), 2.0) == 1.0 ? Z2Class::half_integer : Z2Class::integer;
    return out;
}

Calibration calibrate_normalization(double measured, double expected_integer) {
    if (expected_integer == 0.0) throw InvalidInputError("calibration needs a nonzero reference integer");
    Calibration best;
    best.fitted = measured / expected_integer;
    best.relative_residual = std::numeric_limits<double>::infinity();
    const double two_pi = 2.0 * std::numbers::pi;
    for (int power = 0; power <= 3; ++power) {
        for (int sign : {1, -1}) {
            const int k = power * sign;
            if (power == 0 && sign < 0) continue;
            const double base = std::pow(two_pi, k);
            for (long q = 1; q <= 12; ++q) {
                const long num = std::lround(best.fitted / base * static_cast<double>(q));
                if (num == 0) continue;
                const double value = static_cast<double>(num) / static_cast<double>(q) * base;
                const double residual = std::abs(value - best.fitted) / std::abs(best.fitted);
                if (residual < best.relative_residual * (1.0 - 1e-9)) {
                    best.numerator = num;
                    best.denominator = q;
                    best.power = k;
                    best.snapped = value;
                    best.relative_residual = residual;
                }
            }
        }
    }
    best.exact = best.relative_residual < 1e-10;
    return best;
}

}  // namespace nctorus
