#include "nctorus/disorder.hpp"

namespace nctorus {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t DisorderSpec::stream_key() const { return mix64(mix64(master_seed) ^ realization); }

DisorderSpec DisorderSpec::translated(const Coords& a) const {
    DisorderSpec out = *this;
    for (std::size_t j = 0; j < 3; ++j) out.shift[j] += a[j];
    return out;
}

double bond_disorder(const DisorderSpec& spec, const TorusGeometry& geometry, const Coords& base, const Coords& d) {
    const Coords source{base[0] + spec.shift[0], base[1] + spec.shift[1], base[2] + spec.shift[2]};
    const auto site = static_cast<std::uint64_t>(geometry.site_index(source));
    std::uint64_t code = 0;
    for (int c : d) code = (code << 12) | static_cast<std::uint64_t>(c + 2048);
    const std::uint64_t bond = (site << 36) ^ code;

    const std::uint64_t h = mix64(spec.stream_key() ^ bond);
    const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
    return unit - 0.5;
}

}  // namespace nctorus
