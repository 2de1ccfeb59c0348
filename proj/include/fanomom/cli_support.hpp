#pragma once

#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fanomom/dh_measure.hpp"
#include "fanomom/errors.hpp"
#include "fanomom/io.hpp"
#include "fanomom/radial_model.hpp"
#include "fanomom/rational.hpp"

namespace fanomom {

/// A "lo:hi:count" sweep specification.
struct GridSpec {
    double lo;
    double hi;
    int count;

    std::vector<double> values() const {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(count));
        if (count == 1) {
            out.push_back(lo);
            return out;
        }
        for (int i = 0; i < count; ++i)
            out.push_back(lo + (hi - lo) * i / (count - 1));
        return out;
    }
};

/// Parses "lo:hi:count" (e.g. "1.5:1.99:25").  count >= 1, hi >= lo, both
/// finite; a single-point grid must have hi == lo.
inline GridSpec parse_grid(const std::string& text) {
    const auto bad = [&](const std::string& why) {
        return Error(ErrorCode::BadInput,
                     "malformed grid '" + text + "': " + why +
                         " (want lo:hi:count)");
    };
    const std::vector<std::string> parts = split_fields(text, ':');
    if (parts.size() != 3) throw bad("expected two ':' separators");
    GridSpec g{};
    try {
        g.lo = parse_double(parts[0]);
        g.hi = parse_double(parts[1]);
    } catch (const Error&) {
        throw bad("endpoints must be numbers");
    }
    char* end = nullptr;
    const long c = std::strtol(parts[2].c_str(), &end, 10);
    if (parts[2].empty() || end != parts[2].c_str() + parts[2].size())
        throw bad("count must be an integer");
    if (c < 1 || c > 1000000) throw bad("count out of range");
    g.count = static_cast<int>(c);
    if (!(g.hi >= g.lo)) throw bad("hi must be >= lo");
    if (g.count == 1 && g.hi != g.lo) throw bad("single-point grid needs hi == lo");
    return g;
}

/// Parses "1,2,4,8" into doubles.
inline std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& f : split_fields(text, ','))
        out.push_back(parse_double(f));
    if (out.empty())
        throw Error(ErrorCode::BadInput, "empty list: '" + text + "'");
    return out;
}

/// Writes a potential as "s,phi,phi_prime" rows after the caller's comment
/// lines and a geometry comment; lossless at 17 significant digits.
inline void write_potential_csv(std::ostream& os, const RadialPotential& u,
                                const std::vector<std::string>& comments = {}) {
    for (const std::string& c : comments) os << "# " << c << "\n";
    const ModelGeometry& g = u.geometry();
    os << "# geometry=" << (g.kind() == ModelKind::Ball ? "Ball" : "Proj")
       << " n=" << g.dim() << "\n";
    os << "s,phi,phi_prime\n";
    const auto& s = g.grid();
    const auto& phi = u.phi_samples();
    const auto& phip = u.phi_prime_samples();
    for (std::size_t i = 0; i < s.size(); ++i)
        os << fmt17(s[i]) << "," << fmt17(phi[i]) << "," << fmt17(phip[i])
           << "\n";
}

/// Reads the write_potential_csv format: the geometry comment fixes the model
/// and dimension, the s column fixes the window and segment count, and the
/// reconstructed grid must reproduce the s column to 1e-9.
inline RadialPotential read_potential_csv(std::istream& is) {
    std::string line;
    ModelKind kind = ModelKind::Ball;
    int n = 0;
    bool have_geometry = false, have_header = false;
    std::vector<double> s, phi, phip;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# geometry=";
            if (line.rfind(tag, 0) == 0) {
                const std::vector<std::string> f =
                    split_fields(line.substr(tag.size()), ' ');
                if (f.size() != 2 || f[1].rfind("n=", 0) != 0)
                    throw Error(ErrorCode::BadInput,
                                "potential csv: bad geometry comment");
                if (f[0] == "Ball")
                    kind = ModelKind::Ball;
                else if (f[0] == "Proj")
                    kind = ModelKind::Proj;
                else
                    throw Error(ErrorCode::BadInput,
                                "potential csv: unknown geometry '" + f[0] + "'");
                n = static_cast<int>(parse_double(f[1].substr(2)));
                have_geometry = true;
            }
            continue;
        }
        if (!have_header) {
            if (line != "s,phi,phi_prime")
                throw Error(ErrorCode::BadInput,
                            "potential csv: expected header 's,phi,phi_prime'");
            have_header = true;
            continue;
        }
        const std::vector<std::string> f = split_fields(line);
        if (f.size() != 3)
            throw Error(ErrorCode::BadInput,
                        "potential csv: expected three fields per row");
        s.push_back(parse_double(f[0]));
        phi.push_back(parse_double(f[1]));
        phip.push_back(parse_double(f[2]));
    }
    if (!have_geometry)
        throw Error(ErrorCode::BadInput,
                    "potential csv: missing '# geometry=...' comment");
    if (s.size() < 2)
        throw Error(ErrorCode::BadInput, "potential csv: need >= 2 rows");
    const int segments = static_cast<int>(s.size()) - 1;
    ModelGeometry geom = kind == ModelKind::Ball
                             ? ModelGeometry::ball(n, s.front(), segments)
                             : ModelGeometry::proj(n, s.front(), s.back(),
                                                   segments);
    const auto& grid = geom.grid();
    for (std::size_t i = 0; i < s.size(); ++i)
        if (std::fabs(grid[i] - s[i]) > 1e-9)
            throw Error(ErrorCode::BadInput,
                        "potential csv: s column is not the uniform grid of "
                        "the declared geometry");
    return RadialPotential(std::move(geom), std::move(phi), std::move(phip));
}

/// Rational from a JSON value: strings parse exactly ("3/10", "0.25"),
/// integers pass through; anything else (notably floats) is rejected so no
/// inexact value sneaks into exact lattice data.
inline Rational rational_from_json(const nlohmann::json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    throw Error(ErrorCode::BadRational,
                "rational fields must be strings or integers, got: " + j.dump());
}

/// Affine map from {"coeffs": ["1","1/2"], "constant": "3/10"}.
inline AffineMap affine_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("coeffs"))
        throw Error(ErrorCode::BadInput,
                    "affine map document needs a 'coeffs' array");
    AffineMap m;
    for (const auto& c : j.at("coeffs")) m.coeffs.push_back(rational_from_json(c));
    m.constant = j.contains("constant") ? rational_from_json(j.at("constant"))
                                        : Rational(0);
    return m;
}

/// Convex body from a JSON document: either a preset
/// {"preset": "segment" | "simplex" | "cube", "dimension": n} or an explicit
/// {"dimension": n, "points": [["0","0"], ["1","0"], ...]}.
inline ConvexBody body_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw Error(ErrorCode::BadInput, "polytope document must be an object");
    if (j.contains("preset")) {
        const std::string p = j.at("preset").get<std::string>();
        const int dim = j.contains("dimension") ? j.at("dimension").get<int>() : 1;
        if (p == "segment") return ConvexBody::segment();
        if (p == "simplex") return ConvexBody::simplex(dim);
        if (p == "cube") return ConvexBody::cube(dim);
        throw Error(ErrorCode::BadInput, "unknown polytope preset '" + p + "'");
    }
    if (!j.contains("dimension") || !j.contains("points"))
        throw Error(ErrorCode::BadInput,
                    "polytope document needs 'dimension' and 'points'");
    const int dim = j.at("dimension").get<int>();
    std::vector<RationalPoint> pts;
    for (const auto& row : j.at("points")) {
        RationalPoint p;
        for (const auto& c : row) p.push_back(rational_from_json(c));
        pts.push_back(std::move(p));
    }
    return ConvexBody(dim, std::move(pts));
}

/// Toric test configuration from {"body": ..., "pieces": [affine, ...]}.
inline ToricTestConfig toric_config_from_json(const nlohmann::json& j,
                                              bool require_nonnegative = false) {
    if (!j.is_object() || !j.contains("body") || !j.contains("pieces"))
        throw Error(ErrorCode::BadInput,
                    "test-configuration document needs 'body' and 'pieces'");
    ConvexBody body = body_from_json(j.at("body"));
    std::vector<AffineMap> pieces;
    for (const auto& p : j.at("pieces")) pieces.push_back(affine_from_json(p));
    return ToricTestConfig(std::move(body), std::move(pieces),
                           require_nonnegative);
}

/// Applies a JSON config document against a whitelist of key handlers;
/// any key without a handler is rejected by name.  Handlers are expected to
/// skip keys that were already set by explicit flags.
inline void apply_config_keys(
    const nlohmann::json& doc,
    const std::map<std::string, std::function<void(const nlohmann::json&)>>&
        setters) {
    if (!doc.is_object())
        throw Error(ErrorCode::BadInput, "config document must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        const auto it = setters.find(key);
        if (it == setters.end())
            throw Error(ErrorCode::BadInput, "unknown config key '" + key + "'");
        it->second(value);
    }
}

}  // namespace fanomom
