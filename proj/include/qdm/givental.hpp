#pragma once

// The Givental series F = exp(t.omega/hbar) sum_d q^d R_d, where R_d is the
// stable ratio of S^1-equivariant Euler classes of positive normal bundles:
//   R_d = prod_k 1 / prod_{nu=1}^{a_k} (alpha_k + nu hbar),   a_k = <alpha_k, d>,
// with the a_k < 0 factors moved to the numerator as prod_{nu=a_k+1}^{0}.
// The exponential prefactor is kept symbolic.

#include "qdm/cohomology.hpp"
#include "qdm/laurent.hpp"
#include "qdm/toric.hpp"

#include <map>
#include <vector>

namespace qdm {

class NegativePairingError : public Error {
public:
    using Error::Error;
};

/// Which degrees euler_ratio accepts.
enum class SignMode {
    fano,            ///< any a_k sign, but c_1(d) > 0 for d != 0
    strict_positive, ///< all a_k >= 0
    general,         ///< anything; extrapolated beyond the Fano regime
};

inline LaurentH euler_ratio(const CohomRing& ring, const ChargeMatrix& m, const CurveClass& d,
                            SignMode mode = SignMode::fano) {
    const IntVec a = pairing_vector(m, d);
    if (mode == SignMode::strict_positive)
        for (std::size_t k = 0; k < a.size(); ++k)
            if (a[k] < 0)
                throw NegativePairingError("<alpha_" + std::to_string(k + 1) + ", d> < 0 in strict-positive mode");
    if (mode == SignMode::fano && !d.is_zero() && c1_degree(m, d) <= 0)
        throw NonFanoError("degree with c_1(d) <= 0 requires the general-sign mode");
    LaurentH out = lh_one(ring);
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0) continue;
        const CohomClass alpha = ring.alpha(k);
        if (a[k] > 0) {
            for (long nu = 1; nu <= a[k]; ++nu) out = lh_multiply(ring, out, lh_invert_linear(ring, alpha, nu));
        } else {
            for (long nu = a[k] + 1; nu <= 0; ++nu) out = lh_multiply(ring, out, lh_linear(ring, alpha, nu));
        }
    }
    return out;
}

struct SeriesEntry {
    LaurentH value;
    bool valid = true;
    friend bool operator==(const SeriesEntry&, const SeriesEntry&) = default;
};

/// Truncated q-expansion. Degrees absent from `terms` with c_1 <= bound are
/// exactly zero; entries flagged invalid are outside the window where the
/// truncation determines them.
struct GiventalSeries {
    long bound = 0;
    IntVec c1_weights;
    std::map<CurveClass, SeriesEntry> terms;
    bool prefactor = true; ///< full series carries exp(sum_j t_j omega_j / hbar)

    long c1(const CurveClass& d) const {
        long s = 0;
        for (std::size_t j = 0; j < c1_weights.size(); ++j) s += c1_weights[j] * d[j];
        return s;
    }
    std::size_t picard_rank() const { return c1_weights.size(); }
    /// R_d if known, zero if known to vanish, throws if outside the window.
    LaurentH at(const CurveClass& d) const {
        auto it = terms.find(d);
        if (it != terms.end()) {
            if (!it->second.valid) throw Error("series coefficient outside validity window");
            return it->second.value;
        }
        if (c1(d) > bound) throw Error("series coefficient beyond truncation");
        return {};
    }
    bool known(const CurveClass& d) const {
        auto it = terms.find(d);
        return it != terms.end() ? it->second.valid : c1(d) <= bound;
    }
};

inline GiventalSeries build_F(const CohomRing& ring, const ChargeMatrix& m, const std::vector<CurveClass>& gens,
                              long bound, SignMode mode = SignMode::fano) {
    GiventalSeries f;
    f.bound = bound;
    f.c1_weights = c1_weights(m);
    for (const auto& d : enumerate_degrees(gens, m, bound, mode == SignMode::general))
        f.terms.emplace(d, SeriesEntry{euler_ratio(ring, m, d, mode), true});
    return f;
}

/// Key of a component coefficient: exponents of L_j = ln q_j, then hbar.
struct LogKey {
    IntVec logs;
    int hbar = 0;
    auto operator<=>(const LogKey&) const = default;
};

using ComponentSeries = std::map<CurveClass, std::map<LogKey, Rational>>;

/// Coefficient of the basis element T_beta in exp(sum L_j omega_j / hbar) F,
/// i.e. the pairing of the expanded series with the dual element T^beta.
inline ComponentSeries component(const CohomRing& ring, const GiventalSeries& f, std::size_t beta, int log_order) {
    if (beta >= ring.dim()) throw Error("basis index out of range");
    if (log_order < 0) throw Error("log order must be nonnegative");
    const CohomClass dual = dual_basis(ring).dual[beta];
    const std::size_t l = ring.picard_rank();
    struct PrefactorTerm {
        Monomial a;
        Rational coeff; // 1 / prod a_j!
        CohomClass cls; // omega^a * T^beta
    };
    std::vector<PrefactorTerm> prefactor;
    for (int p = 0; p <= std::min(log_order, ring.top_degree()); ++p)
        for (const auto& a : monomials_of_degree(l, p)) {
            Rational c = 1;
            for (int e : a) c /= factorial(e);
            CohomClass cls = ring.multiply(ring.monomial(a), dual);
            if (!cls.is_zero()) prefactor.push_back({a, c, std::move(cls)});
        }
    ComponentSeries out;
    for (const auto& [d, entry] : f.terms) {
        if (!entry.valid) continue;
        auto& coeffs = out[d];
        for (const auto& [h, cls] : entry.value.terms())
            for (const auto& t : prefactor) {
                const Rational v = t.coeff * ring.integrate(ring.multiply(cls, t.cls));
                if (sgn(v) == 0) continue;
                LogKey key{IntVec(t.a.begin(), t.a.end()), h - total_degree(t.a)};
                coeffs[key] += v;
                if (sgn(coeffs[key]) == 0) coeffs.erase(key);
            }
    }
    return out;
}

/// Count of monomials of R_d violating classdeg + hbar-exp = -c_1(d).
inline std::size_t homogeneity_violations(const CohomRing& ring, long c1d, const LaurentH& r) {
    std::size_t bad = 0;
    for (const auto& [h, cls] : r.terms())
        for (std::size_t i = 0; i < ring.dim(); ++i)
            if (sgn(cls[i]) != 0 && ring.degree_of(i) + h != -c1d) ++bad;
    return bad;
}

} // namespace qdm
