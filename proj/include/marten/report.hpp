#pragma once

// Deterministic CSV/JSON emission and a small structural JSON-schema checker
// covering the subset used by the shipped schemas (type, properties,
// required, items, enum, const, additionalProperties, bounds).

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "marten/errors.hpp"
#include "marten/linalg.hpp"

namespace marten {

using Json = nlohmann::ordered_json;

inline std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline Json json_vec(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

inline Json json_mat(const Mat3& M) {
    Json rows = Json::array();
    for (int i = 0; i < 3; ++i) rows.push_back(Json::array({M(i, 0), M(i, 1), M(i, 2)}));
    return rows;
}

// CSV with byte-stable shortest round-trip number formatting.
struct CsvWriter {
    std::string text;

    explicit CsvWriter(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i)
            text += (i ? "," : "") + header[i];
        text += "\n";
    }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            text += (i ? "," : "") + format_double(values[i]);
        text += "\n";
    }
};

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << contents;
}

// ---------------------------------------------------------------------------
// Minimal JSON-schema validation
// ---------------------------------------------------------------------------

namespace detail {

inline bool type_matches(const Json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "number") return doc.is_number();
    if (type == "integer") return doc.is_number_integer();
    if (type == "boolean") return doc.is_boolean();
    if (type == "null") return doc.is_null();
    return false;
}

inline void validate_rec(const Json& doc, const Json& schema, const std::string& path,
                         std::vector<std::string>& errors) {
    if (schema.contains("const") && doc != schema["const"])
        errors.push_back(path + ": value does not match const");
    if (schema.contains("enum")) {
        bool hit = false;
        for (const auto& v : schema["enum"])
            if (doc == v) { hit = true; break; }
        if (!hit) errors.push_back(path + ": value not in enum");
    }
    if (schema.contains("type") && !type_matches(doc, schema["type"].get<std::string>())) {
        errors.push_back(path + ": expected type " + schema["type"].get<std::string>());
        return;
    }
    if (doc.is_number() && schema.contains("minimum") &&
        doc.get<double>() < schema["minimum"].get<double>())
        errors.push_back(path + ": below minimum");
    if (doc.is_number() && schema.contains("maximum") &&
        doc.get<double>() > schema["maximum"].get<double>())
        errors.push_back(path + ": above maximum");
    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!doc.contains(key.get<std::string>()))
                    errors.push_back(path + ": missing required '" + key.get<std::string>() + "'");
        const Json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (props && props->contains(it.key()))
                validate_rec(it.value(), (*props)[it.key()], path + "/" + it.key(), errors);
            else if (schema.contains("additionalProperties") &&
                     schema["additionalProperties"].is_boolean() &&
                     !schema["additionalProperties"].get<bool>())
                errors.push_back(path + ": unexpected property '" + it.key() + "'");
        }
    }
    if (doc.is_array()) {
        if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>())
            errors.push_back(path + ": too few items");
        if (schema.contains("maxItems") && doc.size() > schema["maxItems"].get<std::size_t>())
            errors.push_back(path + ": too many items");
        if (schema.contains("items")) {
            std::size_t i = 0;
            for (const auto& item : doc)
                validate_rec(item, schema["items"], path + "/" + std::to_string(i++), errors);
        }
    }
}

} // namespace detail

inline std::vector<std::string> validate_against_schema(const Json& doc, const Json& schema) {
    std::vector<std::string> errors;
    detail::validate_rec(doc, schema, "", errors);
    return errors;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    Json j;
    in >> j;
    return j;
}

} // namespace marten
