#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace szlab {

// ---------------------------------------------------------------------------
// Run reports: the machine-readable envelope every command-line invocation
// emits. The layout is frozen by a published JSON schema; rational mode keeps
// every field deterministic (exact "p/q" strings, runtime withheld) so two
// runs with the same inputs produce byte-identical documents.
// ---------------------------------------------------------------------------

using json = nlohmann::ordered_json;

struct RunConfig {
    std::string command;
    std::string mode = "rational";  // "rational" | "float"
    std::uint64_t master_seed = 0;
    long long guard = 0;  // 0 = per-command default
    std::string format = "json";  // "json" | "csv" | "text"
};

inline bool rational_mode(const RunConfig& cfg) { return cfg.mode == "rational"; }

// Exact in rational mode, a plain number in float mode.
template <class S>
json scalar_json(const S& v) {
    if constexpr (std::is_same_v<S, Rat>) return rat_to_string(v);
    else return v;
}

inline json make_report(const RunConfig& cfg) {
    json r;
    r["schema"] = "szlab-run-report/1";
    r["command"] = cfg.command;
    r["mode"] = cfg.mode;
    r["master_seed"] = cfg.master_seed;
    r["rng"] = kRngName;
    r["guard"] = cfg.guard;
    r["parameters"] = json::object();
    r["result"] = json::object();
    r["verified"] = nullptr;
    r["status"] = "ok";
    r["diagnostics"] = nullptr;
    r["runtime_ms"] = nullptr;
    return r;
}

// The published schema, embedded verbatim; the repository ships the same
// bytes as schemas/run_report.schema.json and a test pins the two together.
inline const char* run_report_schema_text() {
    return R"json({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "$id": "szlab-run-report/1",
  "title": "szlab run report",
  "type": "object",
  "additionalProperties": false,
  "required": [
    "schema",
    "command",
    "mode",
    "master_seed",
    "rng",
    "guard",
    "parameters",
    "result",
    "verified",
    "status",
    "diagnostics",
    "runtime_ms"
  ],
  "properties": {
    "schema": { "enum": ["szlab-run-report/1"] },
    "command": {
      "enum": [
        "count-aps",
        "behrend",
        "bohr",
        "qrec",
        "vdw",
        "schur",
        "hales-jewett",
        "ergodic",
        "recurrence",
        "boxnorm",
        "lambda",
        "regularize",
        "triangle-removal",
        "roth",
        "gnp",
        "linear-forms",
        "structure",
        "relative-removal"
      ]
    },
    "mode": { "enum": ["rational", "float"] },
    "master_seed": { "type": "integer" },
    "rng": { "enum": ["sm64-v1"] },
    "guard": { "type": "integer" },
    "parameters": { "type": "object" },
    "result": { "type": "object" },
    "verified": { "type": ["boolean", "null"] },
    "status": {
      "enum": [
        "ok",
        "invalid-argument",
        "precondition-violated",
        "certificate-failure",
        "resource-limit",
        "iteration-limit"
      ]
    },
    "diagnostics": { "type": ["string", "null"] },
    "runtime_ms": { "type": ["number", "null"] }
  }
}
)json";
}

// ---------------------------------------------------------------------------
// A small schema checker covering exactly the keywords the published schema
// uses: type (string or list), enum, required, properties,
// additionalProperties:false, and items. Returns human-readable violations;
// empty means the document conforms.
// ---------------------------------------------------------------------------

namespace detail {

inline bool json_matches_type(const nlohmann::json& doc, const std::string& t) {
    if (t == "object") return doc.is_object();
    if (t == "array") return doc.is_array();
    if (t == "string") return doc.is_string();
    if (t == "number") return doc.is_number();
    if (t == "integer") return doc.is_number_integer();
    if (t == "boolean") return doc.is_boolean();
    if (t == "null") return doc.is_null();
    throw InvalidArgument("schema: unsupported type keyword '" + t + "'");
}

inline void collect_schema_violations(const nlohmann::json& doc, const nlohmann::json& sch,
                                      const std::string& where, std::vector<std::string>& out) {
    if (sch.contains("type")) {
        const auto& ty = sch["type"];
        bool ok = false;
        if (ty.is_string()) ok = json_matches_type(doc, ty.get<std::string>());
        else
            for (const auto& t : ty)
                if (json_matches_type(doc, t.get<std::string>())) { ok = true; break; }
        if (!ok) {
            out.push_back(where + ": type mismatch (expected " + ty.dump() + ")");
            return;
        }
    }
    if (sch.contains("enum")) {
        bool ok = false;
        for (const auto& allowed : sch["enum"])
            if (doc == allowed) { ok = true; break; }
        if (!ok) {
            out.push_back(where + ": value " + doc.dump() + " not in enum");
            return;
        }
    }
    if (doc.is_object()) {
        if (sch.contains("required"))
            for (const auto& key : sch["required"])
                if (!doc.contains(key.get<std::string>()))
                    out.push_back(where + ": missing required key '" + key.get<std::string>() +
                                  "'");
        const bool closed =
            sch.contains("additionalProperties") && sch["additionalProperties"] == false;
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            const bool declared = sch.contains("properties") && sch["properties"].contains(it.key());
            if (declared)
                collect_schema_violations(it.value(), sch["properties"][it.key()],
                                          where + "." + it.key(), out);
            else if (closed)
                out.push_back(where + ": unexpected key '" + it.key() + "'");
        }
    }
    if (doc.is_array() && sch.contains("items")) {
        long long i = 0;
        for (const auto& el : doc) {
            collect_schema_violations(el, sch["items"], where + "[" + std::to_string(i) + "]",
                                      out);
            ++i;
        }
    }
}

}  // namespace detail

inline std::vector<std::string> schema_violations(const nlohmann::json& doc,
                                                  const nlohmann::json& schema) {
    std::vector<std::string> out;
    detail::collect_schema_violations(doc, schema, "$", out);
    return out;
}

inline std::vector<std::string> validate_run_report(const nlohmann::json& report) {
    return schema_violations(report, nlohmann::json::parse(run_report_schema_text()));
}

// ---------------------------------------------------------------------------
// Alternative output formats: dotted-path flattening for text and CSV.
// ---------------------------------------------------------------------------

namespace detail {

inline void flatten_report(const json& j, const std::string& prefix,
                           std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        if (j.empty()) out.emplace_back(prefix, "{}");
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten_report(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        out.emplace_back(prefix, j.dump());
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.dump());  // numbers, booleans, null
    }
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

}  // namespace detail

inline std::string report_as_text(const json& report) {
    std::vector<std::pair<std::string, std::string>> rows;
    detail::flatten_report(report, "", rows);
    std::string out;
    for (const auto& [k, v] : rows) out += k + ": " + v + "\n";
    return out;
}

inline std::string report_as_csv(const json& report) {
    std::vector<std::pair<std::string, std::string>> rows;
    detail::flatten_report(report, "", rows);
    std::string head, vals;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) { head += ','; vals += ','; }
        head += detail::csv_quote(rows[i].first);
        vals += detail::csv_quote(rows[i].second);
    }
    return head + "\n" + vals + "\n";
}

inline std::string render_report(const json& report, const std::string& format) {
    if (format == "json") return report.dump(2) + "\n";
    if (format == "csv") return report_as_csv(report);
    if (format == "text") return report_as_text(report);
    throw InvalidArgument("render_report: unknown format '" + format + "'");
}

}  // namespace szlab
