#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "measured_space.hpp"
#include "numeric.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace szlab {

enum class BoundedMode { None, Unit, Signed };

inline std::string bounded_mode_name(BoundedMode m) {
    switch (m) {
        case BoundedMode::Unit: return "unit";
        case BoundedMode::Signed: return "signed";
        default: return "none";
    }
}

inline BoundedMode bounded_mode_from(const std::string& s) {
    if (s == "unit") return BoundedMode::Unit;
    if (s == "signed") return BoundedMode::Signed;
    if (s == "none") return BoundedMode::None;
    throw InvalidArgument("unknown bounded mode: " + s);
}

namespace detail {

template <class S>
void check_bounds(const std::vector<S>& v, BoundedMode mode) {
    using ST = ScalarTraits<S>;
    if (mode == BoundedMode::None) return;
    const S lo = mode == BoundedMode::Unit ? ST::from_int(0) : ST::from_int(-1);
    const S hi = ST::from_int(1);
    for (const auto& x : v)
        if (x < lo || x > hi) throw InvalidArgument("kernel value escapes its bounded mode");
}

}  // namespace detail

// Dense real kernel on a product of two weighted spaces, row-major in x.
template <class S>
struct Kernel2 {
    MeasuredSpace X, Y;
    std::vector<S> v;
    BoundedMode bounded = BoundedMode::None;

    const S& at(long long x, long long y) const {
        return v[static_cast<std::size_t>(x * Y.size + y)];
    }
    S& at(long long x, long long y) { return v[static_cast<std::size_t>(x * Y.size + y)]; }
};

// Dense real kernel on a product of three weighted spaces, x-major then y.
template <class S>
struct Kernel3 {
    MeasuredSpace X, Y, Z;
    std::vector<S> v;
    BoundedMode bounded = BoundedMode::None;

    const S& at(long long x, long long y, long long z) const {
        return v[static_cast<std::size_t>((x * Y.size + y) * Z.size + z)];
    }
    S& at(long long x, long long y, long long z) {
        return v[static_cast<std::size_t>((x * Y.size + y) * Z.size + z)];
    }
};

template <class S>
Kernel2<S> make_kernel2(MeasuredSpace X, MeasuredSpace Y, std::vector<S> values,
                        BoundedMode mode = BoundedMode::None) {
    validate_space(X);
    validate_space(Y);
    if (static_cast<long long>(values.size()) != X.size * Y.size)
        throw InvalidArgument("make_kernel2: value count must be |X|*|Y|");
    detail::check_bounds(values, mode);
    return Kernel2<S>{std::move(X), std::move(Y), std::move(values), mode};
}

template <class S>
Kernel3<S> make_kernel3(MeasuredSpace X, MeasuredSpace Y, MeasuredSpace Z, std::vector<S> values,
                        BoundedMode mode = BoundedMode::None) {
    validate_space(X);
    validate_space(Y);
    validate_space(Z);
    if (static_cast<long long>(values.size()) != X.size * Y.size * Z.size)
        throw InvalidArgument("make_kernel3: value count must be |X|*|Y|*|Z|");
    detail::check_bounds(values, mode);
    return Kernel3<S>{std::move(X), std::move(Y), std::move(Z), std::move(values), mode};
}

template <class S>
Kernel2<S> constant_kernel2(long long nx, long long ny, const S& value,
                            BoundedMode mode = BoundedMode::None) {
    return make_kernel2(uniform_space(nx), uniform_space(ny),
                        std::vector<S>(static_cast<std::size_t>(nx * ny), value), mode);
}

// Uniform-space kernel with independent entries. Unit mode draws from [0,1],
// signed mode from [-1,1], none from [-2,2].
template <class S>
Kernel2<S> random_kernel2(long long nx, long long ny, BoundedMode mode, std::uint64_t seed) {
    using ST = ScalarTraits<S>;
    SplitMix64 rng(seed);
    std::vector<S> vals(static_cast<std::size_t>(nx * ny));
    for (auto& v : vals) {
        const long long q = 1LL << 20;
        const long long p = static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(q) + 1));
        switch (mode) {
            case BoundedMode::Unit: v = ST::from_ratio(p, q); break;
            case BoundedMode::Signed: v = ST::from_ratio(2 * p - q, q); break;
            default: v = ST::from_ratio(4 * p - 2 * q, q); break;
        }
    }
    return make_kernel2(uniform_space(nx), uniform_space(ny), std::move(vals), mode);
}

template <class S>
Kernel3<S> random_kernel3(long long nx, long long ny, long long nz, BoundedMode mode,
                          std::uint64_t seed) {
    using ST = ScalarTraits<S>;
    SplitMix64 rng(seed);
    std::vector<S> vals(static_cast<std::size_t>(nx * ny * nz));
    for (auto& v : vals) {
        const long long q = 1LL << 20;
        const long long p = static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(q) + 1));
        switch (mode) {
            case BoundedMode::Unit: v = ST::from_ratio(p, q); break;
            case BoundedMode::Signed: v = ST::from_ratio(2 * p - q, q); break;
            default: v = ST::from_ratio(4 * p - 2 * q, q); break;
        }
    }
    return make_kernel3(uniform_space(nx), uniform_space(ny), uniform_space(nz), std::move(vals), mode);
}

// ---------------------------------------------------------------------------
// File format: one JSON header line, then dense CSV rows. Rational cells are
// written "p/q"; float cells round-trip through max-precision decimal.
// ---------------------------------------------------------------------------

namespace detail {

template <class S>
std::string cell_to_string(const S& v);

template <>
inline std::string cell_to_string<Rat>(const Rat& v) {
    return rat_to_string(v);
}

template <>
inline std::string cell_to_string<double>(const double& v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <class S>
S cell_from_string(const std::string& s);

template <>
inline Rat cell_from_string<Rat>(const std::string& s) {
    return parse_rational(s);
}

template <>
inline double cell_from_string<double>(const std::string& s) {
    return std::stod(s);
}

inline nlohmann::json space_to_json(const MeasuredSpace& sp) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& x : sp.weights) w.push_back(rat_to_string(x));
    return w;
}

inline MeasuredSpace space_from_json(const nlohmann::json& j) {
    std::vector<Rat> w;
    for (const auto& x : j) w.push_back(parse_rational(x.get<std::string>()));
    return weighted_space(std::move(w));
}

template <class S>
void write_rows(std::ostream& os, const std::vector<S>& v, long long rows, long long cols) {
    for (long long r = 0; r < rows; ++r) {
        for (long long c = 0; c < cols; ++c) {
            if (c) os << ',';
            os << cell_to_string(v[static_cast<std::size_t>(r * cols + c)]);
        }
        os << '\n';
    }
}

template <class S>
std::vector<S> read_rows(std::istream& is, long long rows, long long cols) {
    std::vector<S> v;
    v.reserve(static_cast<std::size_t>(rows * cols));
    std::string line;
    for (long long r = 0; r < rows; ++r) {
        if (!std::getline(is, line)) throw InvalidArgument("kernel file: missing data row");
        std::stringstream ss(line);
        std::string cell;
        long long c = 0;
        while (std::getline(ss, cell, ',')) {
            v.push_back(cell_from_string<S>(cell));
            ++c;
        }
        if (c != cols) throw InvalidArgument("kernel file: wrong column count");
    }
    return v;
}

}  // namespace detail

template <class S>
void save_kernel2(const Kernel2<S>& k, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InvalidArgument("save_kernel2: cannot open " + path);
    nlohmann::ordered_json header;
    header["shape"] = {k.X.size, k.Y.size};
    header["measure"] = {{"x", detail::space_to_json(k.X)}, {"y", detail::space_to_json(k.Y)}};
    header["bounded_mode"] = bounded_mode_name(k.bounded);
    os << header.dump() << '\n';
    detail::write_rows(os, k.v, k.X.size, k.Y.size);
}

template <class S>
Kernel2<S> load_kernel2(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("load_kernel2: cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("load_kernel2: empty file");
    const auto header = nlohmann::json::parse(line);
    const long long nx = header.at("shape").at(0).get<long long>();
    const long long ny = header.at("shape").at(1).get<long long>();
    auto X = detail::space_from_json(header.at("measure").at("x"));
    auto Y = detail::space_from_json(header.at("measure").at("y"));
    if (X.size != nx || Y.size != ny) throw InvalidArgument("load_kernel2: shape/measure mismatch");
    auto values = detail::read_rows<S>(is, nx, ny);
    return make_kernel2(std::move(X), std::move(Y), std::move(values),
                        bounded_mode_from(header.at("bounded_mode").get<std::string>()));
}

template <class S>
void save_kernel3(const Kernel3<S>& k, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InvalidArgument("save_kernel3: cannot open " + path);
    nlohmann::ordered_json header;
    header["shape"] = {k.X.size, k.Y.size, k.Z.size};
    header["measure"] = {{"x", detail::space_to_json(k.X)},
                         {"y", detail::space_to_json(k.Y)},
                         {"z", detail::space_to_json(k.Z)}};
    header["bounded_mode"] = bounded_mode_name(k.bounded);
    os << header.dump() << '\n';
    detail::write_rows(os, k.v, k.X.size * k.Y.size, k.Z.size);
}

template <class S>
Kernel3<S> load_kernel3(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("load_kernel3: cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("load_kernel3: empty file");
    const auto header = nlohmann::json::parse(line);
    const long long nx = header.at("shape").at(0).get<long long>();
    const long long ny = header.at("shape").at(1).get<long long>();
    const long long nz = header.at("shape").at(2).get<long long>();
    auto X = detail::space_from_json(header.at("measure").at("x"));
    auto Y = detail::space_from_json(header.at("measure").at("y"));
    auto Z = detail::space_from_json(header.at("measure").at("z"));
    if (X.size != nx || Y.size != ny || Z.size != nz)
        throw InvalidArgument("load_kernel3: shape/measure mismatch");
    auto values = detail::read_rows<S>(is, nx * ny, nz);
    return make_kernel3(std::move(X), std::move(Y), std::move(Z), std::move(values),
                        bounded_mode_from(header.at("bounded_mode").get<std::string>()));
}

}  // namespace szlab
