#include "nctorus/model_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "nctorus/error.hpp"

namespace nctorus {

namespace {

constexpr const char* kFormat = "nctorus-model/1";

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> fields(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("model file line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& word, int line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
    if (ec != std::errc() || ptr != word.data() + word.size()) fail(line, "'" + word + "' is not a decimal number");
    return v;
}

long to_long(const std::string& word, int line) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
    if (ec != std::errc() || ptr != word.data() + word.size()) fail(line, "'" + word + "' is not an integer");
    return v;
}

std::uint64_t to_u64(const std::string& word, int line) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
    if (ec != std::errc() || ptr != word.data() + word.size()) fail(line, "'" + word + "' is not an unsigned integer");
    return v;
}

struct MatrixEntry {
    int row, col;
    Complex value;
};

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ModelDefinition parse_model(const std::string& text) {
    ModelDefinition out;
    bool have_format = false;
    bool have_orbitals = false;
    struct Hop {
        Displacement d;
        int row, col;
        Complex value;
        int line;
    };
    std::vector<Hop> hops;
    std::vector<MatrixEntry> spin, inversion;
    bool spin_given = false, inversion_given = false;

    std::istringstream in(text);
    int line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::vector<std::string> v = fields(line.substr(eq + 1));
        const auto want = [&](std::size_t n) {
            if (v.size() != n) fail(line_no, "'" + key + "' takes " + std::to_string(n) + " value(s)");
        };
        if (key == "format") {
            want(1);
            if (v[0] != kFormat) fail(line_no, "unsupported format '" + v[0] + "'");
            have_format = true;
        } else if (key == "name") {
            want(1);
            out.name = v[0];
        } else if (key == "orbitals") {
            want(1);
            out.orbitals = static_cast<int>(to_long(v[0], line_no));
            if (out.orbitals < 1) fail(line_no, "orbitals must be positive");
            have_orbitals = true;
        } else if (key == "extents") {
            want(3);
            out.extents = Coords{static_cast<int>(to_long(v[0], line_no)), static_cast<int>(to_long(v[1], line_no)),
                                 static_cast<int>(to_long(v[2], line_no))};
        } else if (key == "hop") {
            want(7);
            hops.push_back({{static_cast<int>(to_long(v[0], line_no)), static_cast<int>(to_long(v[1], line_no)),
                             static_cast<int>(to_long(v[2], line_no))},
                            static_cast<int>(to_long(v[3], line_no)),
                            static_cast<int>(to_long(v[4], line_no)),
                            {to_double(v[5], line_no), to_double(v[6], line_no)},
                            line_no});
        } else if (key == "flux") {
            want(3);
            for (std::size_t k = 0; k < 3; ++k) out.flux_numerators[k] = to_long(v[k], line_no);
        } else if (key == "disorder.strength") {
            want(1);
            out.disorder.strength = to_double(v[0], line_no);
            if (out.disorder.strength < 0.0) fail(line_no, "disorder strength must be non-negative");
        } else if (key == "disorder.seed") {
            want(1);
            out.disorder.master_seed = to_u64(v[0], line_no);
        } else if (key == "disorder.realization") {
            want(1);
            out.disorder.realization = to_u64(v[0], line_no);
        } else if (key == "symmetry.spin_rotation" || key == "symmetry.inversion") {
            want(4);
            MatrixEntry e{static_cast<int>(to_long(v[0], line_no)), static_cast<int>(to_long(v[1], line_no)),
                          {to_double(v[2], line_no), to_double(v[3], line_no)}};
            if (key == "symmetry.spin_rotation") {
                spin.push_back(e);
                spin_given = true;
            } else {
                inversion.push_back(e);
                inversion_given = true;
            }
        } else {
            fail(line_no, "unknown key '" + key + "'");
        }
    }
    if (!have_format) throw ConfigError("model file lacks 'format = nctorus-model/1'");
    if (!have_orbitals) throw ConfigError("model file lacks 'orbitals'");

    const int D = out.orbitals;
    const auto in_range = [D](int r, int c) { return r >= 0 && r < D && c >= 0 && c < D; };
    out.hoppings = HoppingTable(D);
    for (const Hop& hop : hops) {
        if (!in_range(hop.row, hop.col)) fail(hop.line, "orbital index out of range");
        const bool onsite = hop.d == Displacement{0, 0, 0};
        if (onsite && hop.row == hop.col && hop.value.imag() != 0.0) fail(hop.line, "on-site diagonal must be real");
        out.hoppings.add_entry(hop.d, hop.row, hop.col, hop.value);
    }
    const auto assemble = [&](const std::vector<MatrixEntry>& entries, bool given) {
        OrbitalMatrix m = OrbitalMatrix::Identity(D, D);
        if (given) m.setZero();
        for (const MatrixEntry& e : entries) {
            if (!in_range(e.row, e.col)) throw ConfigError("symmetry matrix index out of range");
            m(e.row, e.col) = e.value;
        }
        return m;
    };
    out.symmetry = {assemble(spin, spin_given), assemble(inversion, inversion_given)};
    try {
        out.symmetry.validate(D);
    } catch (const InvalidInputError& e) {
        throw ConfigError(e.what());
    }
    return out;
}

ModelDefinition load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read model file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string write_model(const ModelDefinition& model) {
    std::ostringstream out;
    out << "format = " << kFormat << "\n";
    out << "name = " << model.name << "\n";
    out << "orbitals = " << model.orbitals << "\n";
    if (model.extents) out << "extents = " << (*model.extents)[0] << " " << (*model.extents)[1] << " " << (*model.extents)[2] << "\n";
    out << "flux = " << model.flux_numerators[0] << " " << model.flux_numerators[1] << " " << model.flux_numerators[2]
        << "\n";
    out << "disorder.strength = " << number(model.disorder.strength) << "\n";
    out << "disorder.seed = " << model.disorder.master_seed << "\n";
    out << "disorder.realization = " << model.disorder.realization << "\n";
    // Each bond once: the partner entries are regenerated on reading.
    for (const auto& [d, t] : model.hoppings.entries()) {
        const bool onsite = d == Displacement{0, 0, 0};
        if (!onsite && !lexicographically_positive(d)) continue;
        for (int r = 0; r < model.orbitals; ++r) {
            for (int c = onsite ? r : 0; c < model.orbitals; ++c) {
                const Complex z = t(r, c);
                if (z == Complex(0.0, 0.0)) continue;
                out << "hop = " << d[0] << " " << d[1] << " " << d[2] << " " << r << " " << c << " " << number(z.real())
                    << " " << number(z.imag()) << "\n";
            }
        }
    }
    const auto matrix = [&](const char* key, const OrbitalMatrix& m) {
        for (int r = 0; r < model.orbitals; ++r) {
            for (int c = 0; c < model.orbitals; ++c) {
                if (m(r, c) == Complex(0.0, 0.0)) continue;
                out << key << " = " << r << " " << c << " " << number(m(r, c).real()) << " " << number(m(r, c).imag()) << "\n";
            }
        }
    };
    matrix("symmetry.spin_rotation", model.symmetry.spin_rotation);
    matrix("symmetry.inversion", model.symmetry.inversion_orbital);
    return out.str();
}

}  // namespace nctorus
