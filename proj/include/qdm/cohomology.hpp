#pragma once

// H*(M;Q) of a smooth complete toric variety as Q[omega_1..omega_l] modulo the
// Stanley-Reisner ideal, with alpha_k = sum_j m_{j,k} omega_j substituted so the
// linear relations hold identically. Each graded piece gets a standard-monomial
// basis from exact row reduction of the ideal's degree-p span.

#include "qdm/linalg.hpp"
#include "qdm/toric.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace qdm {

/// Exponent vector over omega_1..omega_l.
using Monomial = std::vector<int>;

inline int total_degree(const Monomial& mono) {
    int s = 0;
    for (int e : mono) s += e;
    return s;
}

/// Degree-p monomials in l variables, lexicographically descending
/// (omega_1^p first).
inline std::vector<Monomial> monomials_of_degree(std::size_t l, int p) {
    std::vector<Monomial> out;
    Monomial cur(l, 0);
    auto rec = [&](auto&& self, std::size_t j, int left) -> void {
        if (j + 1 == l) {
            cur[j] = left;
            out.push_back(cur);
            return;
        }
        for (int e = left; e >= 0; --e) {
            cur[j] = e;
            self(self, j + 1, left - e);
        }
    };
    if (l == 0) {
        if (p == 0) out.push_back(cur);
        return out;
    }
    rec(rec, 0, p);
    return out;
}

inline std::string monomial_name(const Monomial& mono, const std::string& var = "w") {
    std::string s;
    for (std::size_t j = 0; j < mono.size(); ++j) {
        if (mono[j] == 0) continue;
        if (!s.empty()) s += "*";
        s += var + std::to_string(j + 1);
        if (mono[j] > 1) s += "^" + std::to_string(mono[j]);
    }
    return s.empty() ? "1" : s;
}

/// Coordinates over the ring's flattened graded basis.
class CohomClass {
public:
    CohomClass() = default;
    explicit CohomClass(std::size_t dim) : c_(dim) {}
    explicit CohomClass(RatVec coords) : c_(std::move(coords)) {}

    std::size_t size() const { return c_.size(); }
    const Rational& operator[](std::size_t i) const { return c_[i]; }
    Rational& operator[](std::size_t i) { return c_[i]; }
    const RatVec& coords() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (sgn(x) != 0) return false;
        return true;
    }

    CohomClass& operator+=(const CohomClass& o) {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (sgn(o.c_[i]) != 0) c_[i] += o.c_[i];
        return *this;
    }
    CohomClass& operator-=(const CohomClass& o) {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (sgn(o.c_[i]) != 0) c_[i] -= o.c_[i];
        return *this;
    }
    CohomClass& operator*=(const Rational& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend CohomClass operator+(CohomClass a, const CohomClass& b) { return a += b; }
    friend CohomClass operator-(CohomClass a, const CohomClass& b) { return a -= b; }
    friend CohomClass operator*(const Rational& s, CohomClass a) { return a *= s; }
    friend CohomClass operator-(CohomClass a) { return a *= Rational(-1); }
    friend bool operator==(const CohomClass& a, const CohomClass& b) { return a.c_ == b.c_; }

private:
    RatVec c_;
};

class CohomRing {
public:
    std::size_t picard_rank() const { return l_; }
    int top_degree() const { return top_; }
    std::size_t dim() const { return basis_.size(); }
    std::size_t dim_in_degree(int p) const {
        return p < 0 || p > top_ ? 0 : offsets_[static_cast<std::size_t>(p) + 1] - offsets_[static_cast<std::size_t>(p)];
    }
    std::vector<std::size_t> dims() const {
        std::vector<std::size_t> d;
        for (int p = 0; p <= top_; ++p) d.push_back(dim_in_degree(p));
        return d;
    }
    const std::vector<Monomial>& basis() const { return basis_; }
    int degree_of(std::size_t i) const { return total_degree(basis_[i]); }
    std::size_t offset(int p) const { return offsets_[static_cast<std::size_t>(p)]; }
    const ChargeMatrix& charges() const { return m_; }
    const std::vector<std::vector<int>>& stanley_reisner() const { return sr_; }
    /// Integral of the (single) top-degree basis element.
    const Rational& point_weight() const { return point_weight_; }

    CohomClass zero() const { return CohomClass(dim()); }
    CohomClass one() const {
        CohomClass c(dim());
        c[0] = 1;
        return c;
    }
    CohomClass basis_element(std::size_t i) const {
        CohomClass c(dim());
        c[i] = 1;
        return c;
    }
    /// Normal form of a monomial in the omegas; zero above top degree.
    CohomClass monomial(const Monomial& mono) const {
        CohomClass c(dim());
        const int p = total_degree(mono);
        if (p > top_) return c;
        const auto& coords = reduce_[static_cast<std::size_t>(p)].at(mono);
        for (std::size_t i = 0; i < coords.size(); ++i) c[offset(p) + i] = coords[i];
        return c;
    }
    CohomClass omega(std::size_t j) const {
        Monomial mono(l_, 0);
        mono[j] = 1;
        return monomial(mono);
    }
    /// Toric divisor class alpha_k = sum_j m_{j,k} omega_j.
    CohomClass alpha(std::size_t k) const {
        CohomClass c = zero();
        for (std::size_t j = 0; j < l_; ++j)
            if (m_.m[j][k] != 0) c += Rational(m_.m[j][k]) * omega(j);
        return c;
    }
    CohomClass c1() const {
        CohomClass c = zero();
        for (std::size_t k = 0; k < m_.cols(); ++k) c += alpha(k);
        return c;
    }

    CohomClass multiply(const CohomClass& a, const CohomClass& b) const {
        CohomClass out(dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            if (sgn(a[i]) == 0) continue;
            for (std::size_t j = 0; j < dim(); ++j) {
                if (sgn(b[j]) == 0) continue;
                const Rational f = a[i] * b[j];
                for (const auto& [k, v] : table_[i][j]) out[k] += f * v;
            }
        }
        return out;
    }

    Rational integrate(const CohomClass& a) const { return a[dim() - 1] * point_weight_; }

    /// Largest degree with a nonzero coordinate, -1 for zero.
    int max_degree(const CohomClass& a) const {
        for (std::size_t i = dim(); i-- > 0;)
            if (sgn(a[i]) != 0) return degree_of(i);
        return -1;
    }

    std::string to_string(const CohomClass& a) const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < dim(); ++i) {
            if (sgn(a[i]) == 0) continue;
            Rational c = a[i];
            const std::string name = monomial_name(basis_[i]);
            if (!first) os << (sgn(c) < 0 ? " - " : " + ");
            else if (sgn(c) < 0) os << "-";
            c = abs(c);
            if (name == "1") os << c.get_str();
            else if (c == 1) os << name;
            else os << c.get_str() << "*" << name;
            first = false;
        }
        return first ? "0" : os.str();
    }

    friend CohomRing build_ring(const FanData& fan, const ChargeMatrix& m);

private:
    std::size_t l_ = 0;
    int top_ = 0;
    ChargeMatrix m_;
    std::vector<std::vector<int>> sr_;
    std::vector<Monomial> basis_;
    std::vector<std::size_t> offsets_;
    std::vector<std::map<Monomial, RatVec>> reduce_;
    std::vector<std::vector<std::vector<std::pair<std::size_t, Rational>>>> table_;
    Rational point_weight_;
};

namespace cohom_detail {

using Poly = std::map<Monomial, Rational>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Monomial mono(ma);
            for (std::size_t j = 0; j < mono.size(); ++j) mono[j] += mb[j];
            out[mono] += ca * cb;
        }
    std::erase_if(out, [](const auto& kv) { return sgn(kv.second) == 0; });
    return out;
}

inline Poly alpha_poly(const ChargeMatrix& m, std::size_t k) {
    Poly p;
    for (std::size_t j = 0; j < m.rows(); ++j) {
        if (m.m[j][k] == 0) continue;
        Monomial mono(m.rows(), 0);
        mono[j] = 1;
        p[mono] = m.m[j][k];
    }
    return p;
}

/// Minimal subsets of rays contained in no maximal cone.
inline std::vector<std::vector<int>> minimal_nonfaces(const FanData& fan) {
    const std::size_t n = fan.num_rays();
    auto is_face = [&](const std::vector<int>& s) {
        for (const auto& cone : fan.max_cones)
            if (std::includes(cone.begin(), cone.end(), s.begin(), s.end())) return true;
        return false;
    };
    std::vector<std::vector<int>> out;
    for (std::size_t size = 1; size <= fan.dimension() + 1 && size <= n; ++size) {
        for (const auto& sub : toric_detail::subsets(n, size)) {
            std::vector<int> s(sub.begin(), sub.end());
            if (is_face(s)) continue;
            bool minimal = true;
            for (const auto& prev : out)
                if (std::includes(s.begin(), s.end(), prev.begin(), prev.end())) minimal = false;
            if (minimal) out.push_back(s);
        }
    }
    return out;
}

} // namespace cohom_detail

inline CohomRing build_ring(const FanData& fan, const ChargeMatrix& m) {
    using cohom_detail::Poly;
    CohomRing ring;
    ring.l_ = m.rows();
    ring.top_ = static_cast<int>(fan.dimension());
    ring.m_ = m;
    ring.sr_ = cohom_detail::minimal_nonfaces(fan);
    const std::size_t n = fan.num_rays();
    if (m.cols() != n || m.rows() != fan.picard_rank()) throw Error("charge matrix does not match fan");

    std::vector<Poly> sr_polys;
    for (const auto& s : ring.sr_) {
        Poly p{{Monomial(ring.l_, 0), Rational(1)}};
        for (int k : s) p = cohom_detail::poly_mul(p, cohom_detail::alpha_poly(m, static_cast<std::size_t>(k)));
        sr_polys.push_back(std::move(p));
    }

    ring.offsets_.push_back(0);
    for (int p = 0; p <= ring.top_ + 1; ++p) {
        const auto monos = monomials_of_degree(ring.l_, p);
        std::map<Monomial, std::size_t> col;
        for (std::size_t i = 0; i < monos.size(); ++i) col[monos[i]] = i;
        RatMat rows;
        for (const auto& g : sr_polys) {
            const int s = total_degree(g.begin()->first);
            if (s > p) continue;
            for (const auto& mu : monomials_of_degree(ring.l_, p - s)) {
                RatVec row(monos.size());
                for (const auto& [mono, c] : cohom_detail::poly_mul(g, Poly{{mu, Rational(1)}})) row[col.at(mono)] = c;
                rows.push_back(std::move(row));
            }
        }
        for (auto& r : rows) r.resize(monos.size());
        const auto pivots = linalg::rref(rows);
        std::vector<bool> is_pivot(monos.size(), false);
        for (auto c : pivots) is_pivot[c] = true;
        std::vector<std::size_t> standard;
        for (std::size_t c = 0; c < monos.size(); ++c)
            if (!is_pivot[c]) standard.push_back(c);
        if (p == ring.top_ + 1) {
            if (!standard.empty()) throw FanError("cohomology does not vanish above the top degree");
            break;
        }
        std::map<Monomial, RatVec> reduce;
        for (std::size_t s = 0; s < standard.size(); ++s) {
            RatVec v(standard.size());
            v[s] = 1;
            reduce[monos[standard[s]]] = v;
        }
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            RatVec v(standard.size());
            for (std::size_t s = 0; s < standard.size(); ++s) v[s] = -rows[r][standard[s]];
            reduce[monos[pivots[r]]] = v;
        }
        for (auto c : standard) ring.basis_.push_back(monos[c]);
        ring.offsets_.push_back(ring.basis_.size());
        ring.reduce_.push_back(std::move(reduce));
    }
    if (ring.dim_in_degree(0) != 1 || ring.dim_in_degree(ring.top_) != 1)
        throw FanError("H^0 and H^top must be one-dimensional");
    if (ring.dim() != fan.max_cones.size())
        throw FanError("total Betti number " + std::to_string(ring.dim()) + " differs from the number of maximal cones");

    const std::size_t d = ring.dim();
    ring.table_.assign(d, std::vector<std::vector<std::pair<std::size_t, Rational>>>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Monomial mono(ring.basis_[i]);
            for (std::size_t t = 0; t < mono.size(); ++t) mono[t] += ring.basis_[j][t];
            const CohomClass prod = ring.monomial(mono);
            for (std::size_t k = 0; k < d; ++k)
                if (sgn(prod[k]) != 0) ring.table_[i][j].emplace_back(k, prod[k]);
        }

    // Normalize so that every maximal cone's product of divisor classes has integral 1.
    std::optional<Rational> top_coeff;
    for (const auto& cone : fan.max_cones) {
        CohomClass prod = ring.one();
        for (int k : cone) prod = ring.multiply(prod, ring.alpha(static_cast<std::size_t>(k)));
        const Rational c = prod[d - 1];
        if (sgn(c) == 0) throw FanError("a maximal cone has vanishing intersection number");
        if (top_coeff && *top_coeff != c) throw FanError("inconsistent normalization across maximal cones");
        top_coeff = c;
    }
    ring.point_weight_ = 1 / *top_coeff;
    return ring;
}

inline CohomClass multiply(const CohomRing& ring, const CohomClass& a, const CohomClass& b) {
    return ring.multiply(a, b);
}

inline Rational integrate(const CohomRing& ring, const CohomClass& a) { return ring.integrate(a); }

struct DualBasis {
    std::vector<CohomClass> primal; ///< T_i, the monomial basis
    std::vector<CohomClass> dual;   ///< T^i with integral(T_i T^j) = delta_ij
};

/// Full Poincare pairing matrix on the flattened basis.
inline RatMat pairing_matrix(const CohomRing& ring) {
    const std::size_t d = ring.dim();
    RatMat g(d, RatVec(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            g[i][j] = ring.integrate(ring.multiply(ring.basis_element(i), ring.basis_element(j)));
    return g;
}

/// Pairing between degree p and degree top - p.
inline RatMat pairing_matrix(const CohomRing& ring, int p) {
    const int q = ring.top_degree() - p;
    RatMat g(ring.dim_in_degree(p), RatVec(ring.dim_in_degree(q)));
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < ring.dim_in_degree(q); ++j)
            g[i][j] = ring.integrate(ring.multiply(ring.basis_element(ring.offset(p) + i),
                                                   ring.basis_element(ring.offset(q) + j)));
    return g;
}

inline DualBasis dual_basis(const CohomRing& ring) {
    const auto inv = linalg::inverse(pairing_matrix(ring));
    if (!inv) throw Error("Poincare pairing is singular");
    DualBasis out;
    for (std::size_t i = 0; i < ring.dim(); ++i) {
        out.primal.push_back(ring.basis_element(i));
        RatVec col(ring.dim());
        for (std::size_t k = 0; k < ring.dim(); ++k) col[k] = (*inv)[k][i];
        out.dual.emplace_back(std::move(col));
    }
    return out;
}

} // namespace qdm
