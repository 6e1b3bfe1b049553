#pragma once

// Alloy specification ingestion: a small line-oriented key-value document
// with explicit versioning, plus the built-in presets.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "marten/deadload.hpp"
#include "marten/linalg.hpp"

namespace marten {

// Variant-1 stretch of a cubic-to-orthorhombic transformation with lattice
// parameters (alpha, beta, gamma), expressed in the cubic material basis.
inline Mat3 orthorhombic_u1(double alpha, double beta, double gamma) {
    Mat3 U;
    double ap = 0.5 * (alpha + gamma), am = 0.5 * (alpha - gamma);
    U << ap, am, 0.0,
         am, ap, 0.0,
         0.0, 0.0, beta;
    return as_stretch(U);
}

struct AlloySpec {
    std::string name;
    Mat3 U1 = Mat3::Identity();
    std::string group = "identity";
    std::string orientation_name = "aligned";
    Orientation orientation;
    double sigma1 = 1.0;
    double c2 = 0.0; // 0: auto
    int version = 1;

    Orientation resolve_orientation() const {
        if (orientation_name == "aligned") return Orientation::aligned();
        if (orientation_name == "u1-eigenframe") return Orientation::u1_eigenframe(U1);
        return orientation; // explicit axis/angle
    }
};

inline AlloySpec alloy_preset(const std::string& name) {
    AlloySpec s;
    s.name = name;
    if (name == "cualni") {
        s.U1 = orthorhombic_u1(1.0619, 0.9178, 1.0230);
        s.group = "cubic";
        s.orientation_name = "u1-eigenframe";
        return s;
    }
    if (name == "terephthalic") {
        Mat3 U;
        U << 0.970, 0.038, -0.121,
             0.038, 0.835, -0.017,
             -0.121, -0.017, 1.298;
        s.U1 = as_stretch(U);
        s.group = "identity"; // both phases triclinic, a single variant
        return s;
    }
    throw ParseError("unknown preset '" + name + "' (available: cualni, terephthalic)");
}

namespace detail {

inline std::vector<double> parse_numbers(const std::string& key, const std::string& value,
                                         std::size_t expect) {
    std::istringstream in(value);
    std::vector<double> out;
    double x;
    while (in >> x) out.push_back(x);
    if (!in.eof() || out.size() != expect)
        throw ParseError("field '" + key + "': expected " + std::to_string(expect) +
                         " numbers, got '" + value + "'");
    return out;
}

} // namespace detail

// Format: one `key = value` pair per line, '#' comments, mandatory
// `version = 1`. Exactly one of `U1` (9 entries, row-major) or `lattice`
// (orthorhombic alpha beta gamma) defines the stretch.
inline AlloySpec parse_alloy_spec(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
        if (kv.count(key)) throw ParseError("field '" + key + "': duplicated");
        kv[key] = value;
    }

    if (!kv.count("version")) throw ParseError("field 'version': missing");
    AlloySpec s;
    s.version = static_cast<int>(detail::parse_numbers("version", kv["version"], 1)[0]);
    if (s.version != 1) throw ParseError("field 'version': unsupported version");

    if (kv.count("preset")) {
        s = alloy_preset(kv["preset"]);
        if (kv.count("U1") || kv.count("lattice"))
            throw ParseError("field 'preset': conflicts with 'U1'/'lattice'");
    } else {
        bool has_u1 = kv.count("U1"), has_lat = kv.count("lattice");
        if (has_u1 == has_lat)
            throw ParseError(has_u1 ? "fields 'U1' and 'lattice': exactly one must be present"
                                    : "field 'U1' or 'lattice': exactly one must be present");
        if (has_u1) {
            auto v = detail::parse_numbers("U1", kv["U1"], 9);
            Mat3 U;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) U(i, j) = v[3 * i + j];
            try {
                s.U1 = as_stretch(U);
            } catch (const Error& e) {
                throw ParseError(std::string("field 'U1': ") + e.what());
            }
        } else {
            auto v = detail::parse_numbers("lattice", kv["lattice"], 3);
            try {
                s.U1 = orthorhombic_u1(v[0], v[1], v[2]);
            } catch (const Error& e) {
                throw ParseError(std::string("field 'lattice': ") + e.what());
            }
        }
    }
    if (kv.count("name")) s.name = kv["name"];
    if (kv.count("group")) {
        s.group = kv["group"];
        try {
            rotation_group(s.group);
        } catch (const Error& e) {
            throw ParseError(std::string("field 'group': ") + e.what());
        }
    }
    if (kv.count("orientation")) {
        std::string o = kv["orientation"];
        if (o == "aligned" || o == "u1-eigenframe") {
            s.orientation_name = o;
        } else {
            std::istringstream os(o);
            std::string word;
            double ax, ay, az, deg;
            os >> word >> ax >> ay >> az;
            std::string anglekw;
            os >> anglekw >> deg;
            if (word != "axis" || anglekw != "angle" || os.fail())
                throw ParseError("field 'orientation': expected 'aligned', 'u1-eigenframe' or "
                                 "'axis X Y Z angle DEG'");
            s.orientation_name = "axis-angle";
            s.orientation =
                Orientation::axis_angle(Vec3(ax, ay, az), deg * 3.14159265358979323846 / 180.0);
        }
    }
    if (kv.count("sigma1")) {
        s.sigma1 = detail::parse_numbers("sigma1", kv["sigma1"], 1)[0];
        if (s.sigma1 <= 0.0) throw ParseError("field 'sigma1': must be positive");
    }
    if (kv.count("c2")) {
        s.c2 = detail::parse_numbers("c2", kv["c2"], 1)[0];
        if (s.c2 < 0.0) throw ParseError("field 'c2': must be nonnegative");
    }
    return s;
}

} // namespace marten
