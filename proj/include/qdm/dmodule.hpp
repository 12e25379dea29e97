#pragma once

// Polynomial differential operators sum_e q^e P_e(theta, hbar), theta_j =
// hbar q_j d/dq_j, stored normal-ordered (q's left of theta's). Acting on
// exp(t.omega/hbar) q^d R the operator theta_j multiplies by omega_j + d_j hbar.

#include "qdm/cohomology.hpp"
#include "qdm/givental.hpp"
#include "qdm/laurent.hpp"
#include "qdm/linalg.hpp"
#include "qdm/toric.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace qdm {

class WindowError : public Error {
public:
    using Error::Error;
};

struct ThetaKey {
    IntVec theta;
    int hbar = 0;
    auto operator<=>(const ThetaKey&) const = default;
};

/// Polynomial in theta_1..theta_l and hbar.
using ThetaPoly = std::map<ThetaKey, Rational>;

namespace dmod_detail {

inline void add_term(ThetaPoly& p, const ThetaKey& k, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = p.try_emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) p.erase(it);
    }
}

inline ThetaPoly poly_mul(const ThetaPoly& a, const ThetaPoly& b) {
    ThetaPoly out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            ThetaKey k{ka.theta, ka.hbar + kb.hbar};
            for (std::size_t j = 0; j < k.theta.size(); ++j) k.theta[j] += kb.theta[j];
            add_term(out, k, ca * cb);
        }
    return out;
}

inline Rational binomial(long n, long k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

/// P(theta + f hbar, hbar).
inline ThetaPoly shift(const ThetaPoly& p, const IntVec& f) {
    ThetaPoly out;
    for (const auto& [key, c] : p) {
        ThetaPoly acc{{ThetaKey{IntVec(key.theta.size(), 0), key.hbar}, c}};
        for (std::size_t j = 0; j < key.theta.size(); ++j) {
            const long a = key.theta[j];
            if (a == 0) continue;
            ThetaPoly factor;
            // (theta_j + f_j hbar)^a = sum_i C(a,i) theta_j^i (f_j hbar)^(a-i)
            Rational fpow = 1;
            for (long i = a; i >= 0; --i) {
                IntVec t(key.theta.size(), 0);
                t[j] = i;
                add_term(factor, ThetaKey{t, static_cast<int>(a - i)}, binomial(a, i) * fpow);
                fpow *= f[j];
            }
            acc = poly_mul(acc, factor);
        }
        for (const auto& [k, v] : acc) add_term(out, k, v);
    }
    return out;
}

} // namespace dmod_detail

class DiffOp {
public:
    using Terms = std::map<IntVec, ThetaPoly>;

    DiffOp() = default;
    explicit DiffOp(std::size_t l) : l_(l) {}

    static DiffOp constant(std::size_t l, const Rational& c, int hbar_exp = 0) {
        DiffOp d(l);
        d.add(IntVec(l, 0), ThetaKey{IntVec(l, 0), hbar_exp}, c);
        return d;
    }
    static DiffOp theta(std::size_t l, std::size_t j) {
        DiffOp d(l);
        IntVec t(l, 0);
        t[j] = 1;
        d.add(IntVec(l, 0), ThetaKey{t, 0}, 1);
        return d;
    }
    static DiffOp q_power(std::size_t l, const IntVec& e) {
        for (long x : e)
            if (x < 0) throw Error("q exponent must be nonnegative");
        DiffOp d(l);
        d.add(e, ThetaKey{IntVec(l, 0), 0}, 1);
        return d;
    }
    static DiffOp q(std::size_t l, std::size_t k) {
        IntVec e(l, 0);
        e[k] = 1;
        return q_power(l, e);
    }
    static DiffOp monomial(const IntVec& e, const IntVec& theta, int hbar, const Rational& c = 1) {
        DiffOp d(e.size());
        d.add(e, ThetaKey{theta, hbar}, c);
        return d;
    }

    std::size_t picard_rank() const { return l_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const IntVec& e, const ThetaKey& k, const Rational& c) {
        if (sgn(c) == 0) return;
        auto& p = terms_[e];
        dmod_detail::add_term(p, k, c);
        if (p.empty()) terms_.erase(e);
    }

    /// Coefficient of q^e theta^a hbar^h.
    Rational coefficient(const IntVec& e, const ThetaKey& k) const {
        auto it = terms_.find(e);
        if (it == terms_.end()) return 0;
        auto jt = it->second.find(k);
        return jt == it->second.end() ? Rational(0) : jt->second;
    }

    DiffOp& operator+=(const DiffOp& o) {
        if (l_ == 0) l_ = o.l_;
        for (const auto& [e, p] : o.terms_)
            for (const auto& [k, c] : p) add(e, k, c);
        return *this;
    }
    DiffOp& operator-=(const DiffOp& o) {
        if (l_ == 0) l_ = o.l_;
        for (const auto& [e, p] : o.terms_)
            for (const auto& [k, c] : p) add(e, k, -c);
        return *this;
    }
    DiffOp& operator*=(const Rational& s) {
        if (sgn(s) == 0) terms_.clear();
        for (auto& [e, p] : terms_)
            for (auto& [k, c] : p) c *= s;
        return *this;
    }
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
    friend DiffOp operator*(const Rational& s, DiffOp a) { return a *= s; }
    friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.terms_ == b.terms_; }

    /// Composition A o B, re-normalized with theta_j q^f = q^f (theta_j + f_j hbar).
    friend DiffOp operator*(const DiffOp& a, const DiffOp& b) {
        DiffOp out(std::max(a.l_, b.l_));
        for (const auto& [ea, pa] : a.terms_)
            for (const auto& [eb, pb] : b.terms_) {
                IntVec e(ea);
                for (std::size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
                for (const auto& [k, c] : dmod_detail::poly_mul(dmod_detail::shift(pa, eb), pb)) out.add(e, k, c);
            }
        return out;
    }

    /// Largest q-exponent total and theta-order, for bookkeeping.
    long max_q_degree() const {
        long best = 0;
        for (const auto& [e, p] : terms_) {
            long s = 0;
            for (long x : e) s += x;
            best = std::max(best, s);
        }
        return best;
    }

private:
    std::size_t l_ = 0;
    Terms terms_;
};

inline std::string to_string(const DiffOp& op) {
    if (op.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest q-degree first, then highest theta order: leading terms lead.
    for (auto it = op.terms().rbegin(); it != op.terms().rend(); ++it) {
        const auto& [e, p] = *it;
        for (auto jt = p.rbegin(); jt != p.rend(); ++jt) {
            const auto& [k, c] = *jt;
            std::vector<std::string> factors;
            for (std::size_t j = 0; j < e.size(); ++j)
                if (e[j] != 0) factors.push_back("q" + std::to_string(j + 1) + (e[j] > 1 ? "^" + std::to_string(e[j]) : ""));
            for (std::size_t j = 0; j < k.theta.size(); ++j)
                if (k.theta[j] != 0)
                    factors.push_back("theta" + std::to_string(j + 1) +
                                      (k.theta[j] > 1 ? "^" + std::to_string(k.theta[j]) : ""));
            if (k.hbar != 0) factors.push_back("h" + (k.hbar > 1 ? "^" + std::to_string(k.hbar) : std::string()));
            Rational mag = abs(c);
            os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
            std::string body;
            for (const auto& f : factors) body += (body.empty() ? "" : "*") + f;
            if (body.empty()) os << mag.get_str();
            else if (mag == 1) os << body;
            else os << mag.get_str() << "*" << body;
            first = false;
        }
    }
    return os.str();
}

namespace dmod_detail {

/// Evaluates P(omega + s hbar, hbar) in H* tensor Laurent(hbar).
class Evaluator {
public:
    explicit Evaluator(const CohomRing& ring) : ring_(ring) {}

    LaurentH eval(const ThetaPoly& p, const IntVec& s) {
        LaurentH out;
        for (const auto& [k, c] : p) {
            LaurentH term = lh_one(ring_);
            for (std::size_t j = 0; j < k.theta.size(); ++j)
                if (k.theta[j] != 0) term = lh_multiply(ring_, term, power(j, s[j], k.theta[j]));
            out += c * term.shifted(k.hbar);
        }
        return out;
    }

private:
    const LaurentH& power(std::size_t j, long s, long a) {
        auto& cache = cache_[{j, s}];
        if (cache.empty()) cache.push_back(lh_one(ring_));
        while (static_cast<long>(cache.size()) <= a)
            cache.push_back(lh_multiply(ring_, cache.back(), lh_linear(ring_, ring_.omega(j), s)));
        return cache[static_cast<std::size_t>(a)];
    }

    const CohomRing& ring_;
    std::map<std::pair<std::size_t, long>, std::vector<LaurentH>> cache_;
};

} // namespace dmod_detail

/// (DF)_d = sum_e P_e(omega + (d-e) hbar, hbar) R_{d-e}. The result is exact for
/// c_1(d) <= bound + min_e c_1(e); degrees past that are kept but flagged invalid.
inline GiventalSeries apply(const CohomRing& ring, const DiffOp& op, const GiventalSeries& f) {
    if (op.picard_rank() != 0 && op.picard_rank() != f.picard_rank())
        throw Error("operator and series have different numbers of variables");
    GiventalSeries out;
    out.c1_weights = f.c1_weights;
    out.prefactor = f.prefactor;
    out.bound = f.bound;
    if (op.is_zero()) return out;
    long min_c1 = 0;
    bool first = true;
    for (const auto& [e, p] : op.terms()) {
        const long c = f.c1(CurveClass(e));
        min_c1 = first ? c : std::min(min_c1, c);
        first = false;
    }
    out.bound = f.bound + min_c1;
    if (out.bound < 0) throw WindowError("operator support exceeds truncation: empty validity window");
    dmod_detail::Evaluator eval(ring);
    for (const auto& [src, entry] : f.terms) {
        if (!entry.valid) continue;
        for (const auto& [e, p] : op.terms()) {
            const CurveClass d = src + CurveClass(e);
            auto& slot = out.terms[d];
            slot.value += lh_multiply(ring, eval.eval(p, src.d), entry.value);
        }
    }
    for (auto& [d, entry] : out.terms) entry.valid = out.c1(d) <= out.bound;
    return out;
}

/// True iff every coefficient inside the validity window vanishes.
inline bool annihilates(const CohomRing& ring, const DiffOp& op, const GiventalSeries& f) {
    const GiventalSeries r = apply(ring, op, f);
    for (const auto& [d, entry] : r.terms)
        if (entry.valid && !entry.value.is_zero()) return false;
    return true;
}

/// prod_{a_k>0} prod_{nu<a_k} (D_k - nu hbar) - q^d prod_{a_k<0} prod_{nu<-a_k} (D_k - nu hbar),
/// D_k = sum_j m_{j,k} theta_j.
inline DiffOp gkz_operator(const ChargeMatrix& m, const CurveClass& d) {
    const std::size_t l = m.rows();
    const IntVec a = pairing_vector(m, d);
    auto divisor_op = [&](std::size_t k) {
        DiffOp dk(l);
        for (std::size_t j = 0; j < l; ++j)
            if (m.m[j][k] != 0) dk += Rational(m.m[j][k]) * DiffOp::theta(l, j);
        return dk;
    };
    DiffOp lhs = DiffOp::constant(l, 1), rhs = DiffOp::constant(l, 1);
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0) continue;
        const DiffOp dk = divisor_op(k);
        const long count = a[k] > 0 ? a[k] : -a[k];
        DiffOp& target = a[k] > 0 ? lhs : rhs;
        for (long nu = 0; nu < count; ++nu) target = target * (dk - DiffOp::constant(l, nu, 1));
    }
    return lhs - DiffOp::q_power(l, d.d) * rhs;
}

namespace dmod_detail {

struct AnsatzMonomial {
    IntVec q;
    IntVec theta;
    int hbar;
};

inline long total(const IntVec& v) {
    long s = 0;
    for (long x : v) s += x;
    return s;
}

/// Graded-lex descending on (q, theta, hbar).
inline bool ansatz_before(const AnsatzMonomial& a, const AnsatzMonomial& b) {
    if (total(a.q) != total(b.q)) return total(a.q) > total(b.q);
    if (a.q != b.q) return a.q > b.q;
    if (total(a.theta) != total(b.theta)) return total(a.theta) > total(b.theta);
    if (a.theta != b.theta) return a.theta > b.theta;
    return a.hbar > b.hbar;
}

inline std::vector<IntVec> exponents_up_to(std::size_t l, int degree) {
    std::vector<IntVec> out;
    for (int p = 0; p <= degree; ++p)
        for (const auto& mono : monomials_of_degree(l, p)) out.emplace_back(mono.begin(), mono.end());
    return out;
}

inline std::vector<AnsatzMonomial> ansatz(std::size_t l, int theta_order, int q_degree, int hbar_degree) {
    std::vector<AnsatzMonomial> out;
    for (const auto& q : exponents_up_to(l, q_degree))
        for (const auto& t : exponents_up_to(l, theta_order))
            for (int h = 0; h <= hbar_degree; ++h) out.push_back({q, t, h});
    std::sort(out.begin(), out.end(), ansatz_before);
    return out;
}

} // namespace dmod_detail

/// Basis (reduced row echelon over the ansatz monomials, leading coefficient 1)
/// of all operators within the given bounds annihilating F on the validity window.
inline std::vector<DiffOp> find_annihilators(const CohomRing& ring, const GiventalSeries& f, int theta_order,
                                             int q_degree, int hbar_degree) {
    if (theta_order < 0 || q_degree < 0 || hbar_degree < 0) throw Error("operator bounds must be nonnegative");
    const std::size_t l = f.picard_rank();
    const auto monos = dmod_detail::ansatz(l, theta_order, q_degree, hbar_degree);

    long min_c1 = 0;
    for (const auto& mono : monos) min_c1 = std::min(min_c1, f.c1(CurveClass(mono.q)));
    const long window = f.bound + min_c1;
    if (window < 0) throw WindowError("empty validity window for the requested q-degree");

    // Row key: (degree, hbar exponent, basis index).
    std::map<std::tuple<CurveClass, int, std::size_t>, std::size_t> row_of;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> columns(monos.size());
    for (std::size_t c = 0; c < monos.size(); ++c) {
        const auto& mono = monos[c];
        const GiventalSeries img = apply(ring, DiffOp::monomial(mono.q, mono.theta, mono.hbar), f);
        for (const auto& [d, entry] : img.terms) {
            if (f.c1(d) > window) continue;
            for (const auto& [h, cls] : entry.value.terms())
                for (std::size_t i = 0; i < ring.dim(); ++i) {
                    if (sgn(cls[i]) == 0) continue;
                    auto [it, inserted] = row_of.try_emplace({d, h, i}, row_of.size());
                    columns[c].emplace_back(it->second, cls[i]);
                }
        }
    }
    RatMat system(row_of.size(), RatVec(monos.size()));
    for (std::size_t c = 0; c < monos.size(); ++c)
        for (const auto& [r, v] : columns[c]) system[r][c] = v;

    RatMat kernel = linalg::nullspace(std::move(system), monos.size());
    linalg::rref(kernel);
    std::vector<DiffOp> out;
    for (const auto& row : kernel) {
        DiffOp op(l);
        for (std::size_t c = 0; c < monos.size(); ++c)
            if (sgn(row[c]) != 0) op.add(monos[c].q, ThetaKey{monos[c].theta, monos[c].hbar}, row[c]);
        if (!op.is_zero()) out.push_back(std::move(op));
    }
    return out;
}

/// Whether target lies in the linear span of ops.
inline bool in_span(const std::vector<DiffOp>& ops, const DiffOp& target) {
    std::map<std::pair<IntVec, ThetaKey>, std::size_t> col;
    auto collect = [&](const DiffOp& op) {
        for (const auto& [e, p] : op.terms())
            for (const auto& [k, c] : p) col.try_emplace({e, k}, col.size());
    };
    for (const auto& op : ops) collect(op);
    collect(target);
    auto vec = [&](const DiffOp& op) {
        RatVec v(col.size());
        for (const auto& [e, p] : op.terms())
            for (const auto& [k, c] : p) v[col.at({e, k})] = c;
        return v;
    };
    RatMat a;
    for (const auto& op : ops) a.push_back(vec(op));
    const std::size_t r = linalg::rank(a);
    a.push_back(vec(target));
    return linalg::rank(a) == r;
}

/// Polynomial in p_1..p_l and q_1..q_l.
struct QuantumRelation {
    struct Key {
        IntVec p;
        IntVec q;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, Rational> terms;

    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const QuantumRelation&, const QuantumRelation&) = default;
};

/// theta_j -> p_j, hbar -> 0.
inline QuantumRelation semiclassical(const DiffOp& op) {
    QuantumRelation rel;
    for (const auto& [e, p] : op.terms())
        for (const auto& [k, c] : p)
            if (k.hbar == 0) rel.terms[{k.theta, e}] += c;
    std::erase_if(rel.terms, [](const auto& kv) { return sgn(kv.second) == 0; });
    return rel;
}

/// The q = 0 part with p_j -> omega_j, reduced in the classical ring.
inline CohomClass classical_limit(const CohomRing& ring, const QuantumRelation& rel) {
    CohomClass out = ring.zero();
    for (const auto& [key, c] : rel.terms) {
        if (std::any_of(key.q.begin(), key.q.end(), [](long x) { return x != 0; })) continue;
        out += c * ring.monomial(Monomial(key.p.begin(), key.p.end()));
    }
    return out;
}

/// Homogeneous under deg p_j = 2, deg q^d = 2 c_1(d).
inline bool is_homogeneous(const QuantumRelation& rel, const IntVec& c1_weights) {
    std::set<long> degrees;
    for (const auto& [key, c] : rel.terms) {
        long deg = 0;
        for (std::size_t j = 0; j < key.p.size(); ++j) deg += key.p[j] + key.q[j] * c1_weights[j];
        degrees.insert(deg);
    }
    return degrees.size() <= 1;
}

/// Terms with the highest p-degree first.
inline std::vector<std::pair<QuantumRelation::Key, Rational>> ordered_terms(const QuantumRelation& rel) {
    std::vector<std::pair<QuantumRelation::Key, Rational>> terms(rel.terms.begin(), rel.terms.end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        const long pa = dmod_detail::total(a.first.p), pb = dmod_detail::total(b.first.p);
        if (pa != pb) return pa > pb;
        if (a.first.p != b.first.p) return a.first.p > b.first.p;
        return a.first.q > b.first.q;
    });
    return terms;
}

/// Scaled so the leading term has coefficient 1.
inline QuantumRelation normalized(QuantumRelation rel) {
    if (rel.is_zero()) return rel;
    const Rational lead = ordered_terms(rel).front().second;
    for (auto& [key, c] : rel.terms) c /= lead;
    return rel;
}

inline std::string to_string(const QuantumRelation& rel) {
    if (rel.is_zero()) return "0";
    const auto terms = ordered_terms(rel);
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : terms) {
        std::string body;
        auto append = [&](const IntVec& ex, const char* var) {
            for (std::size_t j = 0; j < ex.size(); ++j)
                if (ex[j] != 0)
                    body += (body.empty() ? "" : "*") + std::string(var) + std::to_string(j + 1) +
                            (ex[j] > 1 ? "^" + std::to_string(ex[j]) : "");
        };
        append(key.p, "p");
        append(key.q, "q");
        const Rational mag = abs(c);
        os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
        if (body.empty()) os << mag.get_str();
        else if (mag == 1) os << body;
        else os << mag.get_str() << "*" << body;
        first = false;
    }
    return os.str();
}

} // namespace qdm
