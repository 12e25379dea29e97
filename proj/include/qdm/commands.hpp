#pragma once

// The qdm pipeline commands. Each returns a JSON report plus the overall
// verification verdict; the tool only handles argument parsing and output.

#include "qdm/qdm.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qdm::cli {

using nlohmann::json;

enum class Format { json, text };

struct RunConfig {
    std::string command;
    std::string fan_path;
    long max_degree = 6;
    int theta_order = -1; ///< -1: dimension + 1
    int q_degree = 1;
    int hbar_order = -1;  ///< -1: same as theta_order
    std::optional<std::pair<long, long>> modes;
    std::vector<IntVec> degrees;
    bool allow_general_sign = false;
    bool components = false; ///< ifunction: also emit every basis component
    Format format = Format::json;
    std::string out_path;
};

struct Report {
    json data;
    bool ok = true;
};

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"cohomology", "ifunction", "operators", "loop-model"};
    return names;
}

inline void check_config(const RunConfig& cfg) {
    if (std::find(commands().begin(), commands().end(), cfg.command) == commands().end())
        throw Error("unknown command '" + cfg.command + "'");
    if (cfg.max_degree < 0) throw Error("--max-degree must be nonnegative");
    if (cfg.q_degree < 0) throw Error("--q-degree must be nonnegative");
    if (cfg.theta_order < -1 || cfg.hbar_order < -1) throw Error("operator bounds must be nonnegative");
    if (cfg.modes && (cfg.modes->first < 0 || cfg.modes->second < cfg.modes->first))
        throw Error("--modes must be N0..N1 with 0 <= N0 <= N1");
}

inline FanData load_fan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FanError("cannot open fan file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_fan(ss.str());
}

struct Context {
    FanData fan;
    ChargeMatrix m;
    std::vector<CurveClass> gens;
    CohomRing ring;
};

inline Context load_context(const RunConfig& cfg) {
    Context ctx;
    ctx.fan = load_fan(cfg.fan_path);
    ctx.m = charge_matrix(ctx.fan);
    ctx.gens = mori_generators(ctx.fan, ctx.m);
    ctx.ring = build_ring(ctx.fan, ctx.m);
    return ctx;
}

inline json matrix_to_json(const RatMat& a) {
    json out = json::array();
    for (const auto& row : a) {
        json r = json::array();
        for (const auto& x : row) r.push_back(to_string(x));
        out.push_back(std::move(r));
    }
    return out;
}

inline json gens_to_json(const std::vector<CurveClass>& gens) {
    json out = json::array();
    for (const auto& g : gens) out.push_back(g.d);
    return out;
}

inline Report cmd_cohomology(const RunConfig& cfg) {
    const Context ctx = load_context(cfg);
    const CohomRing& ring = ctx.ring;
    Report rep;
    json basis = json::array();
    for (const auto& mono : ring.basis()) basis.push_back(monomial_name(mono));
    json pairings = json::array();
    for (int p = 0; p <= ring.top_degree(); ++p)
        pairings.push_back({{"degree", p}, {"matrix", matrix_to_json(pairing_matrix(ring, p))}});
    const DualBasis duals = dual_basis(ring);
    json dual = json::array();
    for (const auto& c : duals.dual) dual.push_back(io::class_to_json(ring, c));
    json alphas = json::array();
    for (std::size_t k = 0; k < ctx.fan.num_rays(); ++k) alphas.push_back(io::class_to_json(ring, ring.alpha(k)));
    json sr = json::array();
    for (const auto& s : ring.stanley_reisner()) {
        json idx = json::array();
        for (int k : s) idx.push_back(k + 1);
        sr.push_back(std::move(idx));
    }
    // Linear relations sum_k <e_nu*, v_k> alpha_k must reduce to zero.
    bool relations_ok = true;
    for (std::size_t nu = 0; nu < ctx.fan.dimension(); ++nu) {
        CohomClass rel = ring.zero();
        for (std::size_t k = 0; k < ctx.fan.num_rays(); ++k)
            rel += Rational(ctx.fan.rays[k][nu]) * ring.alpha(k);
        relations_ok = relations_ok && rel.is_zero();
    }
    rep.ok = relations_ok;
    rep.data = {{"command", "cohomology"},
                {"rays", ctx.fan.num_rays()},
                {"picard_rank", ring.picard_rank()},
                {"charge_matrix", ctx.m.m},
                {"mori_generators", gens_to_json(ctx.gens)},
                {"dims", ring.dims()},
                {"total_dim", ring.dim()},
                {"basis", basis},
                {"dual_basis", dual},
                {"divisor_classes", alphas},
                {"c1", io::class_to_json(ring, ring.c1())},
                {"stanley_reisner", sr},
                {"pairing_matrices", pairings},
                {"linear_relations_vanish", relations_ok}};
    return rep;
}

inline SignMode sign_mode(const RunConfig& cfg) { return cfg.allow_general_sign ? SignMode::general : SignMode::fano; }

inline Report cmd_ifunction(const RunConfig& cfg) {
    const Context ctx = load_context(cfg);
    const GiventalSeries f = build_F(ctx.ring, ctx.m, ctx.gens, cfg.max_degree, sign_mode(cfg));
    Report rep;
    std::size_t violations = 0;
    for (const auto& [d, entry] : f.terms)
        violations += homogeneity_violations(ctx.ring, f.c1(d), entry.value);
    rep.ok = violations == 0;
    json basis = json::array();
    for (const auto& mono : ctx.ring.basis()) basis.push_back(monomial_name(mono));
    rep.data = {{"command", "ifunction"},
                {"max_degree", cfg.max_degree},
                {"charge_matrix", ctx.m.m},
                {"basis", basis},
                {"prefactor", "exp((t1*w1+...+tl*wl)/h)"},
                {"series", io::series_to_json(ctx.ring, f)},
                {"homogeneity_violations", violations}};
    if (cfg.components) {
        json comps = json::array();
        for (std::size_t b = 0; b < ctx.ring.dim(); ++b)
            comps.push_back({{"basis", monomial_name(ctx.ring.basis()[b])},
                             {"series", io::component_to_json(component(ctx.ring, f, b, ctx.ring.top_degree()))}});
        rep.data["components"] = std::move(comps);
    }
    return rep;
}

inline json relation_json(const CohomRing& ring, const DiffOp& op, const IntVec& weights, bool& ok) {
    const QuantumRelation rel = semiclassical(op);
    const bool classical = classical_limit(ring, rel).is_zero();
    const bool homogeneous = is_homogeneous(rel, weights);
    ok = ok && classical;
    return {{"relation", to_string(normalized(rel))}, {"classical_limit_vanishes", classical}, {"homogeneous", homogeneous}};
}

inline Report cmd_operators(const RunConfig& cfg) {
    const Context ctx = load_context(cfg);
    const int theta = cfg.theta_order < 0 ? ctx.ring.top_degree() + 1 : cfg.theta_order;
    const int hbar = cfg.hbar_order < 0 ? theta : cfg.hbar_order;
    const GiventalSeries f = build_F(ctx.ring, ctx.m, ctx.gens, cfg.max_degree, sign_mode(cfg));
    const IntVec weights = c1_weights(ctx.m);
    Report rep;
    json gkz = json::array();
    for (const auto& g : ctx.gens) {
        const DiffOp op = gkz_operator(ctx.m, g);
        const bool ok = annihilates(ctx.ring, op, f);
        rep.ok = rep.ok && ok;
        json entry = {{"generator", g.d},
                      {"operator", io::op_to_json(op)},
                      {"text", to_string(op)},
                      {"annihilates", ok}};
        entry.update(relation_json(ctx.ring, op, weights, rep.ok));
        gkz.push_back(std::move(entry));
    }
    json found = json::array();
    for (const auto& op : find_annihilators(ctx.ring, f, theta, cfg.q_degree, hbar)) {
        json entry = {{"operator", io::op_to_json(op)}, {"text", to_string(op)}};
        entry.update(relation_json(ctx.ring, op, weights, rep.ok));
        found.push_back(std::move(entry));
    }
    rep.data = {{"command", "operators"},
                {"max_degree", cfg.max_degree},
                {"bounds", {{"theta_order", theta}, {"q_degree", cfg.q_degree}, {"hbar_order", hbar}}},
                {"gkz", std::move(gkz)},
                {"annihilators", std::move(found)}};
    return rep;
}

inline Report cmd_loop_model(const RunConfig& cfg) {
    const Context ctx = load_context(cfg);
    std::vector<CurveClass> degrees;
    for (const auto& d : cfg.degrees) {
        if (d.size() != ctx.m.rows()) throw Error("--degree needs " + std::to_string(ctx.m.rows()) + " entries");
        degrees.emplace_back(d);
    }
    if (degrees.empty())
        degrees = enumerate_degrees(ctx.gens, ctx.m, cfg.max_degree, cfg.allow_general_sign);
    const RatVec lambda(ctx.m.rows(), Rational(1));
    Report rep;
    json reports = json::array();
    for (const auto& d : degrees) {
        const long need = min_modes(ctx.m, d);
        std::vector<long> modes;
        const long lo = cfg.modes ? cfg.modes->first : need, hi = cfg.modes ? cfg.modes->second : need + 3;
        for (long n = lo; n <= hi; ++n) modes.push_back(n);
        const StabilizationReport st = check_stabilization(ctx.ring, ctx.m, d, modes);
        rep.ok = rep.ok && st.stable;
        json entry = {{"degree", d.d},
                      {"N_list", modes},
                      {"N_min", need},
                      {"absent_N", st.absent},
                      {"stable", st.stable},
                      {"ratio", st.ratio ? io::laurent_to_json(ctx.ring, *st.ratio) : json(nullptr)}};
        const long n0 = std::max(need, lo);
        const CriticalData crit = critical_component(ctx.fan, ctx.m, lambda, d, std::max(n0, need));
        entry["critical_value"] = to_string(crit.value);
        entry["weights"] = {{"N", crit.modes},
                            {"positive", io::weights_to_json(crit.weights.positive)},
                            {"negative", io::weights_to_json(crit.weights.negative)}};
        reports.push_back(std::move(entry));
    }
    rep.data = {{"command", "loop-model"}, {"lambda", "1"}, {"reports", std::move(reports)}};
    return rep;
}

inline Report run(const RunConfig& cfg) {
    check_config(cfg);
    if (cfg.command == "cohomology") return cmd_cohomology(cfg);
    if (cfg.command == "ifunction") return cmd_ifunction(cfg);
    if (cfg.command == "operators") return cmd_operators(cfg);
    return cmd_loop_model(cfg);
}

/// Indented rendering of the JSON report.
inline bool is_flat(const json& j) {
    if (!j.is_structured()) return true;
    if (j.is_object()) return j.empty();
    return std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
}

inline std::string scalar_text(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

inline void render_text(const json& j, std::ostream& os, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (is_flat(v)) {
                os << pad << k << ": " << scalar_text(v) << "\n";
            } else {
                os << pad << k << ":\n";
                render_text(v, os, indent + 2);
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (is_flat(v)) {
                os << pad << "- " << scalar_text(v) << "\n";
            } else {
                os << pad << "-\n";
                render_text(v, os, indent + 2);
            }
        }
    } else {
        os << pad << scalar_text(j) << "\n";
    }
}

inline std::string render(const Report& rep, Format format) {
    if (format == Format::json) return rep.data.dump(2) + "\n";
    std::ostringstream os;
    render_text(rep.data, os);
    return os.str();
}

} // namespace qdm::cli
