#pragma once

#include "qdm/qdm.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace qdm::test {

inline std::string fan_path(const std::string& name) { return std::string(QDM_FAN_DIR) + "/" + name + ".json"; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Variety {
    FanData fan;
    ChargeMatrix m;
    std::vector<CurveClass> gens;
    CohomRing ring;
};

inline Variety load(const std::string& name) {
    Variety v;
    v.fan = parse_fan(read_file(fan_path(name)));
    v.m = charge_matrix(v.fan);
    v.gens = mori_generators(v.fan, v.m);
    v.ring = build_ring(v.fan, v.m);
    return v;
}

inline const std::vector<std::string>& corpus() {
    static const std::vector<std::string> names{"p1", "p2", "p3", "p1xp1", "f1", "dp7"};
    return names;
}

/// P^n fan: e_1..e_n and -(e_1+...+e_n).
inline std::string projective_space_json(int n) {
    std::string rays, cones;
    for (int i = 0; i <= n; ++i) {
        rays += i ? ", [" : "[";
        for (int j = 0; j < n; ++j) rays += std::string(j ? ", " : "") + (i == n ? "-1" : (i == j ? "1" : "0"));
        rays += "]";
        std::string cone;
        for (int k = 0; k <= n; ++k)
            if (k != i) cone += std::string(cone.empty() ? "" : ", ") + std::to_string(k);
        cones += std::string(i ? ", [" : "[") + cone + "]";
    }
    return "{\"rays\": [" + rays + "], \"max_cones\": [" + cones + "]}";
}

inline Variety projective_space(int n) {
    Variety v;
    v.fan = parse_fan(projective_space_json(n));
    v.m = charge_matrix(v.fan);
    v.gens = mori_generators(v.fan, v.m);
    v.ring = build_ring(v.fan, v.m);
    return v;
}

inline CohomClass random_class(const CohomRing& ring, std::mt19937& rng) {
    std::uniform_int_distribution<int> dist(-4, 4);
    CohomClass c = ring.zero();
    for (std::size_t i = 0; i < ring.dim(); ++i) c[i] = make_rational(dist(rng), 1 + (dist(rng) + 4) % 3);
    return c;
}

/// prod_k prod over the defining factors of R_d, i.e. the element R_d must
/// invert (a_k > 0) together with the numerator it must equal (a_k < 0).
inline std::pair<LaurentH, LaurentH> defining_products(const Variety& v, const CurveClass& d) {
    const IntVec a = pairing_vector(v.m, d);
    LaurentH den = lh_one(v.ring), num = lh_one(v.ring);
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (long nu = 1; nu <= a[k]; ++nu) den = lh_multiply(v.ring, den, lh_linear(v.ring, v.ring.alpha(k), nu));
        for (long nu = a[k] + 1; nu <= 0; ++nu) num = lh_multiply(v.ring, num, lh_linear(v.ring, v.ring.alpha(k), nu));
    }
    return {den, num};
}

} // namespace qdm::test
