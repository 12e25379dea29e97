#pragma once

// Smooth complete toric varieties from fan data: validation, the charge
// matrix of the lattice sequence 0 -> Z^l -> Z^n -> Z^(n-l) -> 0, wall-curve
// classes and the lattice points of the Mori cone.

#include "qdm/linalg.hpp"
#include "qdm/rational.hpp"

#include "json.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qdm {

class FanError : public Error {
public:
    using Error::Error;
};

class NefBasisError : public Error {
public:
    using Error::Error;
};

class NonFanoError : public Error {
public:
    using Error::Error;
};

struct FanData {
    std::vector<IntVec> rays;
    std::vector<std::vector<int>> max_cones; // sorted index sets
    /// Optional rows omega_j = sum_k c_{j,k} D_k.
    std::optional<RatMat> nef_basis;

    std::size_t num_rays() const { return rays.size(); }
    std::size_t dimension() const { return rays.empty() ? 0 : rays.front().size(); }
    std::size_t picard_rank() const { return num_rays() - dimension(); }
};

/// Rows m_j of the l x n charge matrix. Column k holds the coordinates of
/// the divisor class alpha_k in the nef basis omega_1..omega_l.
struct ChargeMatrix {
    IntMat m;

    std::size_t rows() const { return m.size(); }
    std::size_t cols() const { return m.empty() ? 0 : m.front().size(); }
    friend bool operator==(const ChargeMatrix&, const ChargeMatrix&) = default;
};

/// A curve class d = (d_1..d_l) with d_j = <omega_j, d>.
struct CurveClass {
    IntVec d;

    CurveClass() = default;
    explicit CurveClass(IntVec v) : d(std::move(v)) {}
    static CurveClass zero(std::size_t l) { return CurveClass(IntVec(l, 0)); }

    std::size_t size() const { return d.size(); }
    long operator[](std::size_t j) const { return d[j]; }
    bool is_zero() const {
        return std::all_of(d.begin(), d.end(), [](long x) { return x == 0; });
    }
    CurveClass operator+(const CurveClass& o) const {
        IntVec r(d);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] += o.d[j];
        return CurveClass(std::move(r));
    }
    CurveClass operator-(const CurveClass& o) const {
        IntVec r(d);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] -= o.d[j];
        return CurveClass(std::move(r));
    }
    auto operator<=>(const CurveClass&) const = default;
};

namespace toric_detail {

inline void fail(const std::string& msg) { throw FanError(msg); }

inline std::vector<std::vector<int>> faces_of_size(const std::vector<int>& cone, std::size_t size) {
    std::vector<std::vector<int>> out;
    std::vector<bool> pick(cone.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(size), true);
    do {
        std::vector<int> f;
        for (std::size_t i = 0; i < cone.size(); ++i)
            if (pick[i]) f.push_back(cone[i]);
        out.push_back(std::move(f));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

/// All index subsets of {0..n-1} of the given size, lexicographic.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t size) {
    std::vector<std::vector<std::size_t>> out;
    if (size > n) return out;
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    for (;;) {
        out.push_back(idx);
        std::size_t i = size;
        while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

} // namespace toric_detail

/// Checks primitivity, smoothness and the wall-sharing completeness proxy.
inline void validate_fan(const FanData& fan) {
    using toric_detail::fail;
    if (fan.rays.empty()) fail("fan has no rays");
    const std::size_t dim = fan.dimension();
    if (dim == 0) fail("rays must have positive dimension");
    for (std::size_t k = 0; k < fan.rays.size(); ++k) {
        if (fan.rays[k].size() != dim) fail("ray " + std::to_string(k) + " has wrong dimension");
        if (linalg::gcd_of(fan.rays[k]) != 1) fail("ray " + std::to_string(k) + " is not primitive");
    }
    if (std::set<IntVec>(fan.rays.begin(), fan.rays.end()).size() != fan.rays.size())
        fail("duplicate rays");
    if (fan.max_cones.empty()) fail("fan has no maximal cones");
    std::set<std::vector<int>> seen;
    for (const auto& cone : fan.max_cones) {
        if (cone.size() != dim)
            fail("cone has wrong ray count: expected " + std::to_string(dim) + ", got " +
                 std::to_string(cone.size()));
        for (int k : cone)
            if (k < 0 || static_cast<std::size_t>(k) >= fan.rays.size())
                fail("cone references ray index " + std::to_string(k) + " out of range");
        if (std::set<int>(cone.begin(), cone.end()).size() != cone.size())
            fail("cone repeats a ray");
        if (!seen.insert(cone).second) fail("duplicate maximal cone");
        IntMat basis;
        for (int k : cone) basis.push_back(fan.rays[static_cast<std::size_t>(k)]);
        if (std::labs(linalg::determinant(basis)) != 1) fail("cone is not unimodular (fan not smooth)");
    }
    if (fan.rays.size() <= dim) fail("fan is not complete: too few rays");
    std::map<std::vector<int>, int> walls;
    for (const auto& cone : fan.max_cones)
        for (auto& wall : toric_detail::faces_of_size(cone, dim - 1)) ++walls[wall];
    for (const auto& [wall, count] : walls)
        if (count != 2) fail("wall shared by " + std::to_string(count) + " maximal cones (expected 2)");
    for (std::size_t k = 0; k < fan.rays.size(); ++k) {
        bool used = false;
        for (const auto& cone : fan.max_cones)
            used = used || std::find(cone.begin(), cone.end(), static_cast<int>(k)) != cone.end();
        if (!used) fail("ray " + std::to_string(k) + " lies in no maximal cone");
    }
    if (fan.nef_basis) {
        if (fan.nef_basis->size() != fan.picard_rank())
            fail("nef_basis must have exactly l = " + std::to_string(fan.picard_rank()) + " rows");
        for (const auto& row : *fan.nef_basis)
            if (row.size() != fan.rays.size()) fail("nef_basis rows must have one entry per ray");
    }
}

/// Parses the JSON fan format {"rays", "max_cones", "nef_basis"?} and validates.
inline FanData parse_fan(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FanError(std::string("malformed fan JSON: ") + e.what());
    }
    FanData fan;
    try {
        if (!j.is_object() || !j.contains("rays") || !j.contains("max_cones"))
            throw FanError("fan JSON needs \"rays\" and \"max_cones\"");
        fan.rays = j.at("rays").get<std::vector<IntVec>>();
        fan.max_cones = j.at("max_cones").get<std::vector<std::vector<int>>>();
        if (j.contains("nef_basis") && !j.at("nef_basis").is_null()) {
            RatMat basis;
            for (const auto& row : j.at("nef_basis")) {
                RatVec r;
                for (const auto& x : row)
                    r.push_back(x.is_string() ? parse_rational(x.get<std::string>()) : Rational(x.get<long>()));
                basis.push_back(std::move(r));
            }
            fan.nef_basis = std::move(basis);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FanError(std::string("malformed fan JSON: ") + e.what());
    } catch (const FanError&) {
        throw;
    } catch (const Error& e) {
        throw FanError(e.what());
    }
    for (auto& cone : fan.max_cones) std::sort(cone.begin(), cone.end());
    validate_fan(fan);
    return fan;
}

/// Integer relations r (sum_k r_k v_k = 0) attached to each wall: r_i = r_j = 1
/// on the two rays off the wall, r_k = b_k on the wall. Deduplicated, sorted.
inline std::vector<IntVec> wall_relations(const FanData& fan) {
    const std::size_t dim = fan.dimension(), n = fan.num_rays();
    std::map<std::vector<int>, std::vector<std::size_t>> walls;
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c)
        for (auto& wall : toric_detail::faces_of_size(fan.max_cones[c], dim - 1)) walls[wall].push_back(c);
    std::set<IntVec> out;
    for (const auto& [wall, owners] : walls) {
        if (owners.size() != 2) toric_detail::fail("wall not shared by exactly two cones");
        const auto& sigma = fan.max_cones[owners[0]];
        const auto& other = fan.max_cones[owners[1]];
        int i = -1, j = -1;
        for (int k : sigma)
            if (std::find(wall.begin(), wall.end(), k) == wall.end()) i = k;
        for (int k : other)
            if (std::find(wall.begin(), wall.end(), k) == wall.end()) j = k;
        // Express v_j in the basis (wall rays, v_i) of sigma.
        RatMat basis(dim, RatVec(dim));
        std::vector<int> order(wall);
        order.push_back(i);
        for (std::size_t c = 0; c < dim; ++c)
            for (std::size_t r = 0; r < dim; ++r)
                basis[r][c] = fan.rays[static_cast<std::size_t>(order[c])][r];
        RatVec target(dim);
        for (std::size_t r = 0; r < dim; ++r) target[r] = fan.rays[static_cast<std::size_t>(j)][r];
        auto coeff = linalg::solve_square(basis, target);
        if (!coeff || coeff->back() != -1)
            toric_detail::fail("cones on both sides of a wall overlap (fan not complete/smooth)");
        IntVec rel(n, 0);
        rel[static_cast<std::size_t>(i)] = 1;
        rel[static_cast<std::size_t>(j)] = 1;
        for (std::size_t c = 0; c + 1 < dim; ++c) rel[static_cast<std::size_t>(order[c])] = -to_long((*coeff)[c]);
        out.insert(rel);
    }
    return {out.begin(), out.end()};
}

/// True iff target is a nonnegative combination of gens (exact, via
/// Caratheodory: some linearly independent subset carries it).
inline bool cone_contains(const std::vector<RatVec>& gens, const RatVec& target) {
    if (std::all_of(target.begin(), target.end(), [](const Rational& x) { return sgn(x) == 0; })) return true;
    const std::size_t dim = target.size();
    for (std::size_t s = 1; s <= std::min(dim, gens.size()); ++s) {
        for (const auto& subset : toric_detail::subsets(gens.size(), s)) {
            RatMat a(dim, RatVec(s));
            for (std::size_t c = 0; c < s; ++c)
                for (std::size_t r = 0; r < dim; ++r) a[r][c] = gens[subset[c]][r];
            if (linalg::rank(a) != s) continue;
            auto x = linalg::solve(a, target, s);
            if (x && std::all_of(x->begin(), x->end(), [](const Rational& v) { return sgn(v) >= 0; }))
                return true;
        }
    }
    return false;
}

namespace toric_detail {

inline RatVec coords_in_rows(const IntMat& rows, const IntVec& v) {
    RatMat a(v.size(), RatVec(rows.size()));
    for (std::size_t c = 0; c < rows.size(); ++c)
        for (std::size_t r = 0; r < v.size(); ++r) a[r][c] = rows[c][r];
    RatVec b(v.begin(), v.end());
    auto x = linalg::solve(a, b, rows.size());
    if (!x) throw Error("vector is not in the row span");
    return *x;
}

} // namespace toric_detail

/// Charge matrix in a nef basis: the supplied one, else the basis dual to
/// the extremal wall classes (requires a simplicial Mori cone).
inline ChargeMatrix charge_matrix(const FanData& fan) {
    const std::size_t n = fan.num_rays(), dim = fan.dimension(), l = fan.picard_rank();
    IntMat ray_matrix(dim, IntVec(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t r = 0; r < dim; ++r) ray_matrix[r][k] = fan.rays[k][r];
    const IntMat kernel = linalg::integer_kernel(ray_matrix, n);
    if (kernel.size() != l) throw FanError("rays do not span the lattice");
    const auto relations = wall_relations(fan);

    if (fan.nef_basis) {
        const RatMat& nef = *fan.nef_basis;
        // pair[t][j] = <omega_j, kernel row t>
        RatMat pair(l, RatVec(l));
        for (std::size_t t = 0; t < l; ++t)
            for (std::size_t j = 0; j < l; ++j)
                for (std::size_t k = 0; k < n; ++k) pair[t][j] += nef[j][k] * kernel[t][k];
        for (const auto& row : pair)
            for (const auto& x : row)
                if (!is_integer(x)) throw NefBasisError("nef_basis is not integral on H_2(M;Z)");
        const Rational det = linalg::determinant(pair);
        if (det != 1 && det != -1) throw NefBasisError("nef_basis is not a lattice basis of H^2(M;Z)");
        const RatMat inv = *linalg::inverse(pair);
        IntMat m(l, IntVec(n, 0));
        for (std::size_t i = 0; i < l; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                Rational x = 0;
                for (std::size_t t = 0; t < l; ++t) x += inv[i][t] * kernel[t][k];
                m[i][k] = to_long(x);
            }
        for (const auto& rel : relations)
            for (std::size_t j = 0; j < l; ++j) {
                Rational pairing = 0;
                for (std::size_t k = 0; k < n; ++k) pairing += nef[j][k] * rel[k];
                if (sgn(pairing) < 0)
                    throw NefBasisError("nef_basis element " + std::to_string(j + 1) +
                                        " pairs negatively with a wall curve");
            }
        return ChargeMatrix{m};
    }

    std::vector<RatVec> coords;
    for (const auto& rel : relations) coords.push_back(toric_detail::coords_in_rows(kernel, rel));
    IntMat extremal;
    for (std::size_t i = 0; i < relations.size(); ++i) {
        std::vector<RatVec> others;
        for (std::size_t j = 0; j < relations.size(); ++j)
            if (j != i) others.push_back(coords[j]);
        if (!cone_contains(others, coords[i])) extremal.push_back(relations[i]);
    }
    if (extremal.size() != l)
        throw NefBasisError("Mori cone has " + std::to_string(extremal.size()) +
                            " extremal rays but Picard rank is " + std::to_string(l) +
                            "; the nef cone is not simplicial, supply an explicit simplicial nef_basis");
    RatMat change;
    for (const auto& e : extremal) change.push_back(toric_detail::coords_in_rows(kernel, e));
    const Rational det = linalg::determinant(change);
    if (det != 1 && det != -1)
        throw NefBasisError("extremal curve classes do not form a lattice basis of H_2; supply nef_basis");
    std::sort(extremal.begin(), extremal.end(), std::greater<>());
    return ChargeMatrix{extremal};
}

/// <alpha_k, d> = sum_j m_{j,k} d_j.
inline long pairing(const ChargeMatrix& m, const CurveClass& d, std::size_t k) {
    long s = 0;
    for (std::size_t j = 0; j < m.rows(); ++j) s += m.m[j][k] * d[j];
    return s;
}

inline IntVec pairing_vector(const ChargeMatrix& m, const CurveClass& d) {
    IntVec a(m.cols());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = pairing(m, d, k);
    return a;
}

/// c_1(TM) = sum_k alpha_k evaluated on d.
inline long c1_degree(const ChargeMatrix& m, const CurveClass& d) {
    long s = 0;
    for (std::size_t k = 0; k < m.cols(); ++k) s += pairing(m, d, k);
    return s;
}

/// c_1 weight of each nef-dual coordinate: c1_degree(d) = sum_j w_j d_j.
inline IntVec c1_weights(const ChargeMatrix& m) {
    IntVec w(m.rows(), 0);
    for (std::size_t j = 0; j < m.rows(); ++j)
        for (long x : m.m[j]) w[j] += x;
    return w;
}

/// Wall-curve classes in nef coordinates, deduplicated and with classes that
/// are sums of other wall classes dropped: the extremal rays of the Mori cone.
inline std::vector<CurveClass> mori_generators(const FanData& fan, const ChargeMatrix& m) {
    std::set<CurveClass> walls;
    for (const auto& rel : wall_relations(fan)) {
        RatVec x = toric_detail::coords_in_rows(m.m, rel);
        IntVec d;
        for (const auto& v : x) d.push_back(to_long(v));
        walls.insert(CurveClass(std::move(d)));
    }
    const std::vector<CurveClass> all(walls.begin(), walls.end());
    std::vector<CurveClass> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        std::vector<RatVec> others;
        for (std::size_t j = 0; j < all.size(); ++j)
            if (j != i) others.emplace_back(all[j].d.begin(), all[j].d.end());
        if (!cone_contains(others, RatVec(all[i].d.begin(), all[i].d.end()))) out.push_back(all[i]);
    }
    return out;
}

/// Mori-cone lattice points with 0 <= c1 <= bound, ordered by (c1, lex).
/// Non-Fano generator sets have infinitely many such points; they are
/// rejected unless allow_nonpositive, in which case |d_j| <= bound also caps.
inline std::vector<CurveClass> enumerate_degrees(const std::vector<CurveClass>& gens, const ChargeMatrix& m,
                                                 long bound, bool allow_nonpositive = false) {
    if (bound < 0) throw Error("degree bound must be nonnegative");
    const std::size_t l = m.rows();
    long c1_min = 0;
    bool fano = !gens.empty();
    for (const auto& g : gens) {
        const long c = c1_degree(m, g);
        if (c <= 0) fano = false;
        c1_min = c1_min == 0 ? c : std::min(c1_min, c);
    }
    if (!fano && !allow_nonpositive)
        throw NonFanoError("a Mori generator has c_1-degree <= 0; degree set is unbounded");

    IntVec lo(l, 0), hi(l, 0);
    for (std::size_t j = 0; j < l; ++j) {
        if (fano) {
            // A cone point uses at most l generators with multiplicity <= bound / c1_min.
            const long mult = bound / c1_min * static_cast<long>(l);
            for (const auto& g : gens) {
                lo[j] = std::min(lo[j], g[j] * mult);
                hi[j] = std::max(hi[j], g[j] * mult);
            }
        } else {
            lo[j] = -bound;
            hi[j] = bound;
        }
    }

    std::vector<RatVec> gen_coords;
    for (const auto& g : gens) gen_coords.emplace_back(g.d.begin(), g.d.end());
    // Inverses of independent l-subsets give a fast membership test.
    std::vector<RatMat> inverses;
    for (const auto& subset : toric_detail::subsets(gens.size(), l)) {
        RatMat a(l, RatVec(l));
        for (std::size_t c = 0; c < l; ++c)
            for (std::size_t r = 0; r < l; ++r) a[r][c] = gen_coords[subset[c]][r];
        if (auto inv = linalg::inverse(a)) inverses.push_back(std::move(*inv));
    }
    auto member = [&](const IntVec& d) {
        if (inverses.empty()) return cone_contains(gen_coords, RatVec(d.begin(), d.end()));
        for (const auto& inv : inverses) {
            bool ok = true;
            for (std::size_t r = 0; r < l && ok; ++r) {
                Rational x = 0;
                for (std::size_t c = 0; c < l; ++c) x += inv[r][c] * d[c];
                ok = sgn(x) >= 0;
            }
            if (ok) return true;
        }
        return false;
    };

    std::vector<CurveClass> out;
    IntVec d(lo);
    for (;;) {
        CurveClass cls(d);
        const long c = c1_degree(m, cls);
        if (c >= 0 && c <= bound && member(d)) out.push_back(cls);
        std::size_t j = 0;
        while (j < l && d[j] == hi[j]) d[j] = lo[j], ++j;
        if (j == l) break;
        ++d[j];
    }
    std::sort(out.begin(), out.end(), [&](const CurveClass& a, const CurveClass& b) {
        const long ca = c1_degree(m, a), cb = c1_degree(m, b);
        return ca != cb ? ca < cb : a < b;
    });
    return out;
}

} // namespace qdm
