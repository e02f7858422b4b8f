#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "kneser/defect.hpp"
#include "kneser/errors.hpp"
#include "kneser/family.hpp"
#include "kneser/hypergraph.hpp"
#include "kneser/subset.hpp"
#include "kneser/tucker.hpp"
#include "kneser/verify.hpp"

namespace kneser {

using nlohmann::json;

inline json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw PreconditionError(what + ": invalid JSON");
    return j;
}

inline json subset_to_json(const Subset& s) { return json(s.elements()); }

inline json family_to_json(const Family& f) {
    json sets = json::array();
    for (const Subset& m : f.members()) sets.push_back(subset_to_json(m));
    return json{{"n", f.ground_size()}, {"sets", std::move(sets)}};
}

// Ingestion of {"n": ..., "sets": [[...], ...]}: unknown keys are ignored so
// emitted families re-ingest; duplicates and malformed members are rejected
// with a diagnostic.
inline Family family_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("sets"))
        throw PreconditionError("family JSON must be an object with \"n\" and \"sets\"");
    if (!j["n"].is_number_integer())
        throw PreconditionError("family JSON: \"n\" must be an integer");
    int n = j["n"].get<int>();
    if (n < 1 || n > kMaxGroundSize)
        throw PreconditionError("family JSON: n must be in [1, 64], got " + std::to_string(n));
    if (!j["sets"].is_array()) throw PreconditionError("family JSON: \"sets\" must be an array");
    std::vector<Subset> members;
    for (const json& set : j["sets"]) {
        if (!set.is_array())
            throw PreconditionError("family JSON: each set must be an array of integers");
        std::vector<int> elems;
        for (const json& e : set) {
            if (!e.is_number_integer())
                throw PreconditionError("family JSON: set " + set.dump() +
                                        " has a non-integer element");
            elems.push_back(e.get<int>());
        }
        Subset m = Subset::from_elements(n, elems);
        if (static_cast<int>(elems.size()) != m.size())
            throw PreconditionError("family JSON: set " + set.dump() + " repeats an element");
        if (m.empty()) throw PreconditionError("family JSON: empty sets are not allowed");
        for (const Subset& prev : members)
            if (prev == m)
                throw PreconditionError("family JSON: duplicate set " + set.dump());
        members.push_back(m);
    }
    return Family(n, std::move(members));
}

inline json certificate_to_json(const DefectCertificate& cert) {
    json parts = json::array();
    for (const Subset& p : cert.parts) parts.push_back(subset_to_json(p));
    return json{{"defect", cert.x0.size()}, {"x0", subset_to_json(cert.x0)},
                {"parts", std::move(parts)}};
}

inline DefectCertificate certificate_from_json(const json& j, int n) {
    if (!j.is_object() || !j.contains("x0") || !j.contains("parts"))
        throw PreconditionError("certificate JSON must contain \"x0\" and \"parts\"");
    DefectCertificate cert;
    cert.x0 = Subset::from_elements(n, j["x0"].get<std::vector<int>>());
    for (const json& p : j["parts"])
        cert.parts.push_back(Subset::from_elements(n, p.get<std::vector<int>>()));
    return cert;
}

inline std::string member_key(const Subset& m) { return subset_to_json(m).dump(); }

inline json coloring_to_json(const Family& f, const Coloring& c) {
    json colors = json::object();
    for (int i = 0; i < f.size(); ++i)
        colors[member_key(f.member(i))] = c.color[static_cast<size_t>(i)];
    return json{{"t", c.t}, {"colors", std::move(colors)}};
}

inline Coloring coloring_from_json(const Family& f, const json& j) {
    if (!j.is_object() || !j.contains("t") || !j.contains("colors"))
        throw PreconditionError("coloring JSON must contain \"t\" and \"colors\"");
    Coloring c;
    c.t = j["t"].get<int>();
    c.color.assign(static_cast<size_t>(f.size()), 0);
    size_t assigned = 0;
    for (const auto& [key, value] : j["colors"].items()) {
        json elems = parse_json(key, "coloring member key");
        Subset m = Subset::from_elements(f.ground_size(), elems.get<std::vector<int>>());
        int idx = f.index_of(m);
        if (idx < 0)
            throw PreconditionError("coloring JSON: " + key + " is not a family member");
        c.color[static_cast<size_t>(idx)] = value.get<int>();
        ++assigned;
    }
    if (assigned != static_cast<size_t>(f.size()))
        throw PreconditionError("coloring JSON: not every member is colored");
    check_coloring(f, c);
    return c;
}

inline json audit_report_to_json(const AuditReport& r) {
    json violations = json::array();
    for (const AuditViolation& v : r.violations)
        violations.push_back(json{{"kind", v.kind}, {"faces", v.faces}, {"note", v.note}});
    return json{{"faces", r.faces},          {"violations", std::move(violations)},
                {"m", r.m},                  {"alpha", r.alpha},
                {"bound_holds", r.bound_holds}, {"coloring_proper", r.coloring_proper}};
}

inline std::string format_seconds(double seconds, bool timings) {
    if (!timings) return "0.000";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", seconds);
    return buf;
}

inline json bound_report_to_json(const BoundReport& r, bool timings = false) {
    json j{{"check", r.check},
           {"family_spec", r.family_spec},
           {"family", family_to_json(r.family)},
           {"s", r.s},
           {"r_or_p", r.r_or_p},
           {"variant", to_string(r.variant)},
           {"vertices", r.vertices},
           {"chi", r.chi},
           {"bound", r.bound},
           {"defect", r.defect},
           {"holds", r.holds},
           {"degenerate", r.degenerate},
           {"exploratory", r.exploratory},
           {"seconds", format_seconds(r.seconds, timings)},
           {"certificate", certificate_to_json(r.certificate)}};
    if (r.alpha1 >= 0) {
        j["alpha1"] = r.alpha1;
        j["alpha2"] = r.alpha2;
    }
    Family sub = stable_subfamily(r.family, r.s, r.variant);
    j["witness"] = coloring_to_json(sub, r.witness);
    return j;
}

inline std::string csv_header() { return "n,k_or_spec,s,r_or_p,chi,bound,holds,seconds"; }

inline std::string bound_report_to_csv(const BoundReport& r, bool timings = false) {
    std::string row;
    row += std::to_string(r.family.ground_size());
    row += "," + r.family_spec;
    row += "," + std::to_string(r.s);
    row += "," + std::to_string(r.r_or_p);
    row += "," + std::to_string(r.chi);
    row += "," + std::to_string(r.bound);
    row += r.holds ? ",true" : ",false";
    row += "," + format_seconds(r.seconds, timings);
    return row;
}

inline json lemma_report_to_json(const LemmaWitnessReport& r) {
    return json{{"r1", r.r1},
                {"r2", r.r2},
                {"s2", r.s2},
                {"t", r.t},
                {"fprime", family_to_json(r.fprime)},
                {"fprime_stable", family_to_json(r.fprime_stable)},
                {"cprime", coloring_to_json(r.fprime_stable, r.cprime)},
                {"proper", r.proper},
                {"ecd_fprime", r.ecd_fprime},
                {"outer_within_bound", r.outer_within_bound},
                {"composed", certificate_to_json(r.composed)},
                {"composed_x0_size", r.composed_x0_size},
                {"allowed_removed", r.allowed_removed},
                {"composed_valid", r.composed_valid},
                {"composed_within_bound", r.composed_within_bound}};
}

}  // namespace kneser
