#pragma once

// JSON encodings of series, components, operators and reports. nlohmann::json
// objects keep keys sorted, so every encoding here is deterministic.

#include "qdm/cohomology.hpp"
#include "qdm/dmodule.hpp"
#include "qdm/givental.hpp"
#include "qdm/laurent.hpp"
#include "qdm/loop_model.hpp"

#include "json.hpp"

#include <string>

namespace qdm::io {

using nlohmann::json;

inline json class_to_json(const CohomRing& ring, const CohomClass& c) {
    json out = json::object();
    for (std::size_t i = 0; i < ring.dim(); ++i)
        if (sgn(c[i]) != 0) out[monomial_name(ring.basis()[i])] = to_string(c[i]);
    return out;
}

inline CohomClass class_from_json(const CohomRing& ring, const json& j) {
    CohomClass c = ring.zero();
    for (const auto& [name, value] : j.items()) {
        bool found = false;
        for (std::size_t i = 0; i < ring.dim() && !found; ++i)
            if (monomial_name(ring.basis()[i]) == name) {
                c[i] += parse_rational(value.get<std::string>());
                found = true;
            }
        if (!found) throw Error("unknown basis monomial '" + name + "'");
    }
    return c;
}

inline json laurent_to_json(const CohomRing& ring, const LaurentH& x) {
    json terms = json::array();
    for (const auto& [h, cls] : x.terms()) terms.push_back({{"hbar", h}, {"class", class_to_json(ring, cls)}});
    return terms;
}

inline LaurentH laurent_from_json(const CohomRing& ring, const json& terms) {
    LaurentH x;
    for (const auto& t : terms) x.add(t.at("hbar").get<int>(), class_from_json(ring, t.at("class")));
    return x;
}

/// [{degree: [int], terms: [{hbar, class}]}], plus "valid": false on entries
/// outside an operator's validity window.
inline json series_to_json(const CohomRing& ring, const GiventalSeries& f) {
    json out = json::array();
    for (const auto& [d, entry] : f.terms) {
        json e = {{"degree", d.d}, {"terms", laurent_to_json(ring, entry.value)}};
        if (!entry.valid) e["valid"] = false;
        out.push_back(std::move(e));
    }
    return out;
}

inline GiventalSeries series_from_json(const CohomRing& ring, const ChargeMatrix& m, long bound, const json& j) {
    GiventalSeries f;
    f.bound = bound;
    f.c1_weights = c1_weights(m);
    for (const auto& e : j) {
        SeriesEntry entry{laurent_from_json(ring, e.at("terms")), e.value("valid", true)};
        f.terms.emplace(CurveClass(e.at("degree").get<IntVec>()), std::move(entry));
    }
    return f;
}

inline json component_to_json(const ComponentSeries& c) {
    json out = json::array();
    for (const auto& [d, coeffs] : c) {
        json terms = json::array();
        for (const auto& [key, v] : coeffs)
            terms.push_back({{"log", key.logs}, {"hbar", key.hbar}, {"coeff", to_string(v)}});
        out.push_back({{"degree", d.d}, {"terms", std::move(terms)}});
    }
    return out;
}

/// [{q: [int], terms: [{theta: [int], hbar: int, coeff: "p/q"}]}]
inline json op_to_json(const DiffOp& op) {
    json out = json::array();
    for (const auto& [e, p] : op.terms()) {
        json terms = json::array();
        for (const auto& [k, c] : p) terms.push_back({{"theta", k.theta}, {"hbar", k.hbar}, {"coeff", to_string(c)}});
        out.push_back({{"q", e}, {"terms", std::move(terms)}});
    }
    return out;
}

inline DiffOp op_from_json(const json& j, std::size_t l) {
    DiffOp op(l);
    for (const auto& block : j) {
        const IntVec e = block.at("q").get<IntVec>();
        if (e.size() != l) throw Error("operator q-exponent has wrong length");
        for (const auto& t : block.at("terms")) {
            ThetaKey k{t.at("theta").get<IntVec>(), t.at("hbar").get<int>()};
            if (k.theta.size() != l) throw Error("operator theta-exponent has wrong length");
            op.add(e, k, parse_rational(t.at("coeff").get<std::string>()));
        }
    }
    return op;
}

inline json weights_to_json(const std::vector<Weight>& ws) {
    json out = json::array();
    for (const auto& w : ws) out.push_back({{"k", w.k + 1}, {"nu", w.nu}});
    return out;
}

} // namespace qdm::io
