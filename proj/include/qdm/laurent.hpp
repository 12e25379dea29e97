#pragma once

// Elements of H*(M;Q) tensor Q[hbar, 1/hbar]: finite maps from hbar-exponent
// to cohomology class.

#include "qdm/cohomology.hpp"

#include <map>
#include <string>

namespace qdm {

class LaurentH {
public:
    using Terms = std::map<int, CohomClass>;

    LaurentH() = default;
    static LaurentH constant(const CohomClass& c, int hbar_exp = 0) {
        LaurentH x;
        if (!c.is_zero()) x.terms_.emplace(hbar_exp, c);
        return x;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int min_exponent() const { return terms_.begin()->first; }
    int max_exponent() const { return terms_.rbegin()->first; }

    /// Coefficient of hbar^e (zero class of the given size if absent).
    CohomClass at(int e, std::size_t dim) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? CohomClass(dim) : it->second;
    }

    void add(int e, const CohomClass& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    LaurentH& operator+=(const LaurentH& o) {
        for (const auto& [e, c] : o.terms_) add(e, c);
        return *this;
    }
    LaurentH& operator-=(const LaurentH& o) {
        for (const auto& [e, c] : o.terms_) add(e, -c);
        return *this;
    }
    LaurentH& operator*=(const Rational& s) {
        if (sgn(s) == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend LaurentH operator+(LaurentH a, const LaurentH& b) { return a += b; }
    friend LaurentH operator-(LaurentH a, const LaurentH& b) { return a -= b; }
    friend LaurentH operator*(const Rational& s, LaurentH a) { return a *= s; }
    friend bool operator==(const LaurentH& a, const LaurentH& b) { return a.terms_ == b.terms_; }

    /// Multiply by hbar^k.
    LaurentH shifted(int k) const {
        LaurentH out;
        for (const auto& [e, c] : terms_) out.terms_.emplace(e + k, c);
        return out;
    }

private:
    Terms terms_;
};

inline LaurentH lh_multiply(const CohomRing& ring, const LaurentH& a, const LaurentH& b) {
    LaurentH out;
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms()) out.add(ea + eb, ring.multiply(ca, cb));
    return out;
}

inline LaurentH lh_one(const CohomRing& ring) { return LaurentH::constant(ring.one()); }

inline LaurentH lh_hbar(const CohomRing& ring, const Rational& coeff = 1, int exp = 1) {
    return LaurentH::constant(coeff * ring.one(), exp);
}

/// The linear form alpha + nu*hbar.
inline LaurentH lh_linear(const CohomRing& ring, const CohomClass& alpha, long nu) {
    LaurentH x = LaurentH::constant(alpha, 0);
    if (nu != 0) x.add(1, Rational(nu) * ring.one());
    return x;
}

/// (alpha + nu*hbar)^{-1} = (nu*hbar)^{-1} sum_m (-alpha/(nu*hbar))^m for nu != 0
/// and alpha of positive degree; the sum stops by nilpotency.
inline LaurentH lh_invert_linear(const CohomRing& ring, const CohomClass& alpha, long nu) {
    if (nu == 0) throw Error("cannot invert a factor with nu = 0");
    LaurentH out;
    CohomClass power = ring.one();
    Rational scale = Rational(1) / nu;
    const Rational step = Rational(-1) / nu;
    for (int m = 0; !power.is_zero(); ++m) {
        out.add(-1 - m, scale * power);
        power = ring.multiply(power, alpha);
        scale *= step;
    }
    return out;
}

/// Inverse of x = hbar^E (s + nilpotent), s a nonzero scalar at the top hbar power.
inline LaurentH lh_invert(const CohomRing& ring, const LaurentH& x) {
    if (x.is_zero()) throw Error("cannot invert zero");
    const int top = x.max_exponent();
    const CohomClass& lead = x.terms().at(top);
    const Rational s = lead[0];
    if (sgn(s) == 0 || ring.max_degree(lead - s * ring.one()) >= 0)
        throw Error("leading hbar coefficient is not a nonzero scalar");
    // y = x / (s hbar^top) - 1, nilpotent (every class has positive degree).
    LaurentH y = (1 / s) * x.shifted(-top);
    y -= lh_one(ring);
    for (const auto& [e, c] : y.terms())
        if (sgn(c[0]) != 0) throw Error("element is not invertible by nilpotent expansion");
    LaurentH sum = lh_one(ring), power = lh_one(ring);
    for (int m = 1; m <= ring.top_degree(); ++m) {
        power = Rational(-1) * lh_multiply(ring, power, y);
        if (power.is_zero()) break;
        sum += power;
    }
    return (1 / s) * sum.shifted(-top);
}

inline std::string to_string(const CohomRing& ring, const LaurentH& x) {
    if (x.is_zero()) return "0";
    std::string s;
    for (auto it = x.terms().rbegin(); it != x.terms().rend(); ++it) {
        if (!s.empty()) s += " + ";
        s += "(" + ring.to_string(it->second) + ")";
        if (it->first != 0) s += "*h^" + std::to_string(it->first);
    }
    return s;
}

} // namespace qdm
