#pragma once

// Finite-mode loop space model: loops gamma(z) = sum_{|nu|<=N} a_nu z^nu in C^n,
// the rotation Hamiltonian H_N, its critical copies M_d of M, and the
// S^1-equivariant Euler classes of their positive normal bundles.

#include "qdm/cohomology.hpp"
#include "qdm/givental.hpp"
#include "qdm/laurent.hpp"
#include "qdm/toric.hpp"

#include <map>
#include <optional>
#include <vector>

namespace qdm {

class ModeBoundError : public Error {
public:
    using Error::Error;
};

/// H_N = 1/2 sum_{k, nu} nu |a_nu^k|^2. Squared moduli are laid out k-major:
/// index k * (2N + 1) + (nu + N).
inline Rational action_value(const RatVec& squared_moduli, std::size_t n, long modes) {
    if (modes < 0) throw Error("mode bound must be nonnegative");
    const std::size_t per = static_cast<std::size_t>(2 * modes + 1);
    if (squared_moduli.size() != n * per)
        throw Error("expected " + std::to_string(n * per) + " squared moduli, got " +
                    std::to_string(squared_moduli.size()));
    Rational h = 0;
    for (std::size_t k = 0; k < n; ++k)
        for (long nu = -modes; nu <= modes; ++nu)
            h += nu * squared_moduli[k * per + static_cast<std::size_t>(nu + modes)];
    return h / 2;
}

/// Normal direction L_{k,nu} at M_d; Hessian coefficient of |a_nu^k|^2 in H_N is
/// (nu - <alpha_k, d>) / 2.
struct Weight {
    std::size_t k = 0;
    long nu = 0;
    long hessian = 0; ///< nu - <alpha_k, d>, never zero
    friend bool operator==(const Weight&, const Weight&) = default;
};

struct WeightSystem {
    std::vector<Weight> positive;
    std::vector<Weight> negative;
};

struct CriticalData {
    CurveClass degree;
    long modes = 0;
    Rational value; ///< sum_j d_j lambda_j
    WeightSystem weights;
};

/// Smallest mode bound for which every frozen mode <alpha_k, d> exists.
inline long min_modes(const ChargeMatrix& m, const CurveClass& d) {
    long n = 0;
    for (long a : pairing_vector(m, d)) n = std::max(n, a < 0 ? -a : a);
    return n;
}

inline WeightSystem weight_system(const ChargeMatrix& m, const CurveClass& d, long modes) {
    WeightSystem w;
    const IntVec a = pairing_vector(m, d);
    for (std::size_t k = 0; k < a.size(); ++k)
        for (long nu = -modes; nu <= modes; ++nu) {
            if (nu == a[k]) continue;
            Weight wt{k, nu, nu - a[k]};
            (nu > a[k] ? w.positive : w.negative).push_back(wt);
        }
    return w;
}

inline CriticalData critical_component(const FanData& fan, const ChargeMatrix& m, const RatVec& lambda,
                                       const CurveClass& d, long modes) {
    if (m.cols() != fan.num_rays() || lambda.size() != m.rows() || d.size() != m.rows())
        throw Error("dimension mismatch between fan, charges, lambda and degree");
    const long need = min_modes(m, d);
    if (modes < need)
        throw ModeBoundError("component M_d absent: N = " + std::to_string(modes) + " < N(d) = " + std::to_string(need));
    CriticalData out;
    out.degree = d;
    out.modes = modes;
    out.value = 0;
    for (std::size_t j = 0; j < lambda.size(); ++j) out.value += lambda[j] * d[j];
    out.weights = weight_system(m, d, modes);
    return out;
}

/// e(N+_{d,N}) / e(N+_{0,N}) with common factors cancelled before inversion.
inline LaurentH euler_ratio_N(const CohomRing& ring, const ChargeMatrix& m, const CurveClass& d, long modes) {
    const long need = min_modes(m, d);
    if (modes < need)
        throw ModeBoundError("component M_d absent: N = " + std::to_string(modes) + " < N(d) = " + std::to_string(need));
    std::map<std::pair<std::size_t, long>, int> factors; // +1 numerator, -1 denominator
    for (const auto& w : weight_system(m, d, modes).positive) ++factors[{w.k, w.nu}];
    for (const auto& w : weight_system(m, CurveClass::zero(m.rows()), modes).positive) --factors[{w.k, w.nu}];
    LaurentH num = lh_one(ring), den = lh_one(ring);
    for (const auto& [kn, mult] : factors) {
        const auto& [k, nu] = kn;
        const LaurentH f = lh_linear(ring, ring.alpha(k), nu);
        for (int i = 0; i < mult; ++i) num = lh_multiply(ring, num, f);
        for (int i = 0; i < -mult; ++i) den = lh_multiply(ring, den, f);
    }
    return lh_multiply(ring, num, lh_invert(ring, den));
}

struct StabilizationReport {
    CurveClass degree;
    std::vector<long> modes;   ///< requested N values
    std::vector<long> absent;  ///< requested N below N(d)
    long min_modes = 0;
    bool stable = false;       ///< all present N agree with the stable ratio
    std::optional<LaurentH> ratio;
};

inline StabilizationReport check_stabilization(const CohomRing& ring, const ChargeMatrix& m, const CurveClass& d,
                                               const std::vector<long>& modes) {
    StabilizationReport rep;
    rep.degree = d;
    rep.modes = modes;
    rep.min_modes = min_modes(m, d);
    const LaurentH stable = euler_ratio(ring, m, d, SignMode::general);
    bool all_equal = true, any = false;
    for (long n : modes) {
        if (n < rep.min_modes) {
            rep.absent.push_back(n);
            continue;
        }
        any = true;
        if (!(euler_ratio_N(ring, m, d, n) == stable)) all_equal = false;
    }
    rep.stable = any && all_equal;
    if (rep.stable) rep.ratio = stable;
    return rep;
}

} // namespace qdm
