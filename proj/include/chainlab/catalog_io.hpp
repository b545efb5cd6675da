// include/chainlab/catalog_io.hpp: CSV and JSON encodings for exact values and catalogs.
//
// JSON carries every value as its exact (c, m, scale) triple next to a 6-place
// decimal; readers should compare the triples, never the decimals.

#pragma once

#include "chainlab/catalog.hpp"
#include "chainlab/defect.hpp"
#include "chainlab/log_value.hpp"

#include "json.hpp"

#include <sstream>
#include <string>

namespace chainlab {

inline nlohmann::json to_json(const ExactLogValue& v) {
    return {{"c", v.c}, {"m", v.m.str()}, {"scale", v.scale}, {"approx", to_decimal(v)}};
}

inline ExactLogValue log_value_from_json(const nlohmann::json& j) {
    ExactLogValue v;
    v.c = j.at("c").get<std::int64_t>();
    v.m = parse_natural(j.at("m").get<std::string>());
    v.scale = j.at("scale").get<std::uint32_t>();
    if (v.m == 0) {
        throw std::invalid_argument("exact value with m = 0");
    }
    return v;
}

inline nlohmann::json to_json(const ExactDefect& d) {
    return {{"class", d.class_name}, {"n", d.n.str()}, {"length", d.length}, {"value", to_json(d.value())}};
}

inline std::string stability_label(const std::optional<StabilityVerdict>& v) {
    return v ? to_string(*v) : "unprobed";
}

/// value_approx,leader,length_of_leader,multiplicity,stability; ascending.
inline std::string catalog_csv(const Catalog& catalog) {
    std::ostringstream out;
    out << "value_approx,leader,length_of_leader,multiplicity,stability\n";
    for (const auto& e : catalog.entries) {
        out << to_decimal(e.defect) << ',' << e.leader.str() << ',' << e.defect.length << ',' << e.multiplicity
            << ',' << stability_label(e.stability) << '\n';
    }
    return out.str();
}

inline nlohmann::json catalog_json(const Catalog& catalog) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : catalog.entries) {
        entries.push_back({{"value", to_json(e.defect.value())},
                           {"leader", e.leader.str()},
                           {"length_of_leader", e.defect.length},
                           {"multiplicity", e.multiplicity},
                           {"stability", stability_label(e.stability)}});
    }
    nlohmann::json unchecked = nlohmann::json::array();
    for (const auto& n : catalog.unchecked) {
        unchecked.push_back(n.str());
    }
    const auto& cert = catalog.certificate;
    nlohmann::json certificate = {{"witnesses_verified", cert.witnesses_verified},
                                  {"certified_through_threshold", cert.certified_through_threshold},
                                  {"note", cert.note}};
    if (cert.certified_below) {
        certificate["certified_below"] = to_json(*cert.certified_below);
    }
    return {{"class", catalog.class_name},
            {"threshold", catalog.threshold.str()},
            {"n_max", catalog.n_max.str()},
            {"entries", entries},
            {"unchecked", unchecked},
            {"certificate", certificate}};
}

}  // namespace chainlab
