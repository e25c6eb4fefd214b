#include "geo4/swring.hpp"

#include "geo4/errors.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace geo4 {

namespace {

struct ExpVecHash {
    std::size_t operator()(const ExpVec& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int64_t x : v) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 1099511628211ull;
        }
        return h;
    }
};

using Accumulator = std::unordered_map<ExpVec, Int, ExpVecHash>;

SWExpr from_accumulator(ClassBasis basis, Accumulator&& acc) {
    std::vector<std::pair<ExpVec, Int>> terms;
    terms.reserve(acc.size());
    while (!acc.empty()) {
        auto node = acc.extract(acc.begin());
        terms.emplace_back(std::move(node.key()), std::move(node.mapped()));
    }
    return SWExpr::from_terms(std::move(basis), std::move(terms));
}

// Merged basis plus the index remapping for the right operand (the left
// operand's generators keep their positions).
std::pair<ClassBasis, std::vector<std::size_t>> merge_bases(const ClassBasis& a,
                                                            const ClassBasis& b) {
    ClassBasis merged = a;
    std::vector<std::size_t> bmap(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) bmap[i] = merged.add(b.gen(i));
    return {std::move(merged), std::move(bmap)};
}

ExpVec remap(const ExpVec& exp, const std::vector<std::size_t>& map, std::size_t dim) {
    ExpVec out(dim, 0);
    for (std::size_t i = 0; i < exp.size(); ++i) out[map[i]] = exp[i];
    return out;
}

ExpVec widen(const ExpVec& exp, std::size_t dim) {
    ExpVec out = exp;
    out.resize(dim, 0);
    return out;
}

// Multiplication by a Laurent polynomial living in one generator, applied at
// exponent stride `stride` (the substitution t = e^{stride * gen}). Terms are
// grouped on the other coordinates and convolved densely along `gi`; no
// hashing is involved. `poly` must be sorted by exponent.
SWExpr mul_single_gen(const SWExpr& sw, std::size_t gi, std::int64_t stride,
                      const std::vector<std::pair<std::int64_t, Int>>& poly) {
    if (sw.is_zero() || poly.empty()) return SWExpr::zero(sw.basis());
    std::vector<const std::pair<const ExpVec, Int>*> items;
    items.reserve(sw.term_count());
    for (const auto& t : sw.terms()) items.push_back(&t);
    auto cmp_rest = [gi](const ExpVec& a, const ExpVec& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == gi) continue;
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        }
        return 0;
    };
    std::sort(items.begin(), items.end(),
              [&](const auto* x, const auto* y) {
                  int c = cmp_rest(x->first, y->first);
                  if (c != 0) return c < 0;
                  return x->first[gi] < y->first[gi];
              });
    std::int64_t pmin = poly.front().first, pmax = poly.back().first;
    std::vector<std::pair<ExpVec, Int>> out;
    out.reserve(items.size() + items.size() * poly.size() / 2);
    std::vector<Int> window;
    std::size_t i = 0;
    while (i < items.size()) {
        std::size_t j = i + 1;
        while (j < items.size() && cmp_rest(items[i]->first, items[j]->first) == 0) ++j;
        std::int64_t emin = items[i]->first[gi], emax = items[j - 1]->first[gi];
        std::int64_t lo = emin + stride * pmin, hi = emax + stride * pmax;
        window.assign(static_cast<std::size_t>(hi - lo + 1), Int(0));
        for (std::size_t k = i; k < j; ++k) {
            std::int64_t e = items[k]->first[gi];
            const Int& c = items[k]->second;
            for (const auto& [d, pc] : poly) window[static_cast<std::size_t>(e + stride * d - lo)] += c * pc;
        }
        for (std::int64_t w = lo; w <= hi; ++w) {
            Int& v = window[static_cast<std::size_t>(w - lo)];
            if (v == 0) continue;
            ExpVec ev = items[i]->first;
            ev[gi] = w;
            out.emplace_back(std::move(ev), std::move(v));
        }
        i = j;
    }
    return SWExpr::from_terms(sw.basis(), std::move(out));
}

std::string exp_combo(const ClassBasis& basis, const ExpVec& exp) {
    std::string s;
    for (std::size_t i = 0; i < exp.size(); ++i) {
        std::int64_t e = exp[i];
        if (e == 0) continue;
        if (!s.empty() && e > 0) s += '+';
        if (e == -1)
            s += '-';
        else if (e != 1)
            s += std::to_string(e);
        s += basis.gen(i).name;
    }
    return s;
}

} // namespace

ClassBasis::ClassBasis(std::vector<ClassGen> gens) {
    for (auto& g : gens) add(g);
}

std::optional<std::size_t> ClassBasis::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return i;
    return std::nullopt;
}

std::size_t ClassBasis::add(const ClassGen& g) {
    if (auto i = index_of(g.name)) {
        if (gens_[*i].provenance != g.provenance)
            fail(Errc::BasisClash, "class '" + g.name + "' carries provenance '" +
                                       gens_[*i].provenance + "' vs '" + g.provenance + "'");
        return *i;
    }
    gens_.push_back(g);
    return gens_.size() - 1;
}

SWExpr SWExpr::zero(ClassBasis basis) { return SWExpr(std::move(basis)); }

SWExpr SWExpr::constant(const Int& k, ClassBasis basis) {
    SWExpr e(std::move(basis));
    if (k != 0) e.terms_.emplace(ExpVec(e.basis_.size(), 0), k);
    return e;
}

SWExpr SWExpr::from_terms(ClassBasis basis, std::vector<std::pair<ExpVec, Int>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SWExpr out(std::move(basis));
    auto hint = out.terms_.end();
    std::size_t i = 0;
    while (i < terms.size()) {
        Int sum = std::move(terms[i].second);
        std::size_t j = i + 1;
        while (j < terms.size() && terms[j].first == terms[i].first) sum += terms[j++].second;
        if (sum != 0)
            hint = out.terms_.emplace_hint(out.terms_.end(), std::move(terms[i].first),
                                           std::move(sum));
        i = j;
    }
    (void)hint;
    return out;
}

SWExpr SWExpr::monomial(const ClassBasis& basis, std::size_t gen_index, std::int64_t exponent,
                        const Int& coef) {
    SWExpr e(basis);
    if (coef != 0) {
        ExpVec v(basis.size(), 0);
        v.at(gen_index) = exponent;
        e.terms_.emplace(std::move(v), coef);
    }
    return e;
}

void SWExpr::add_term(const ExpVec& exp, const Int& coef) {
    if (coef == 0) return;
    ExpVec v = widen(exp, basis_.size());
    auto it = terms_.find(v);
    if (it == terms_.end()) {
        terms_.emplace(std::move(v), coef);
    } else {
        it->second += coef;
        if (it->second == 0) terms_.erase(it);
    }
}

std::string SWExpr::text() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Int& c = it->second;
        if (!s.empty()) s += ' ';
        s += (c < 0) ? '-' : '+';
        Int a = c < 0 ? Int(-c) : c;
        std::string combo = exp_combo(basis_, it->first);
        if (combo.empty()) {
            s += a.str();
        } else {
            s += a.str();
            s += "*exp(";
            s += combo;
            s += ')';
        }
    }
    return s;
}

SWExpr add(const SWExpr& a, const SWExpr& b) {
    auto [basis, bmap] = merge_bases(a.basis(), b.basis());
    SWExpr out(basis);
    for (const auto& [exp, coef] : a.terms()) out.add_term(widen(exp, basis.size()), coef);
    for (const auto& [exp, coef] : b.terms()) out.add_term(remap(exp, bmap, basis.size()), coef);
    return out;
}

SWExpr negate(const SWExpr& a) {
    SWExpr out(a.basis());
    for (const auto& [exp, coef] : a.terms()) out.add_term(exp, -coef);
    return out;
}

SWExpr sub(const SWExpr& a, const SWExpr& b) { return add(a, negate(b)); }

SWExpr mul(const SWExpr& a, const SWExpr& b) {
    auto [basis, bmap] = merge_bases(a.basis(), b.basis());
    std::size_t dim = basis.size();
    Accumulator acc;
    acc.reserve(a.term_count() * b.term_count() / 2 + 8);
    for (const auto& [be, bc] : b.terms()) {
        ExpVec bexp = remap(be, bmap, dim);
        for (const auto& [ae, ac] : a.terms()) {
            ExpVec e = widen(ae, dim);
            for (std::size_t i = 0; i < dim; ++i) e[i] += bexp[i];
            acc[std::move(e)] += ac * bc;
        }
    }
    return from_accumulator(std::move(basis), std::move(acc));
}

SWExpr power(const SWExpr& a, unsigned n) {
    SWExpr result = SWExpr::constant(1, a.basis());
    SWExpr base = a;
    while (n > 0) {
        if (n & 1u) result = mul(result, base);
        n >>= 1u;
        if (n > 0) base = mul(base, base);
    }
    return result;
}

SWExpr conjugate(const SWExpr& a) {
    SWExpr out(a.basis());
    for (const auto& [exp, coef] : a.terms()) {
        ExpVec e = exp;
        for (auto& x : e) x = -x;
        out.add_term(e, coef);
    }
    return out;
}

SWExpr rebase(const SWExpr& a, const ClassBasis& extra) {
    auto [basis, _] = merge_bases(a.basis(), extra);
    SWExpr out(basis);
    for (const auto& [exp, coef] : a.terms()) out.add_term(widen(exp, basis.size()), coef);
    return out;
}

SWExpr alexander_torus_knot(std::int64_t p, std::int64_t q, const std::string& var_name) {
    if (p < 2 || q <= p || std::gcd(p, q) != 1)
        fail(Errc::BadKnotParams,
             "need gcd(p, q) = 1 and 2 <= p < q, got (" + std::to_string(p) + ", " +
                 std::to_string(q) + ")");
    // (t^{pq}-1)(t-1)/((t^p-1)(t^q-1)) is the generating series (1-t) * H(t)
    // with H the Hilbert series of the numerical semigroup <p, q>; its
    // coefficient at s is [s in S] - [s-1 in S], supported on [0, (p-1)(q-1)].
    std::int64_t top = (p - 1) * (q - 1);
    std::vector<char> in_s(static_cast<std::size_t>(top) + 1, 0);
    in_s[0] = 1;
    for (std::int64_t s = 1; s <= top; ++s)
        in_s[s] = (s >= p && in_s[s - p]) || (s >= q && in_s[s - q]);

    ClassBasis basis({{var_name, "knot(" + std::to_string(p) + "," + std::to_string(q) + ")"}});
    SWExpr out(basis);
    std::int64_t half = top / 2;
    for (std::int64_t s = 0; s <= top; ++s) {
        int coef = static_cast<int>(in_s[s]) - (s > 0 ? static_cast<int>(in_s[s - 1]) : 0);
        if (coef != 0) out.add_term(ExpVec{s - half}, coef);
    }
    return out;
}

SWExpr sw_elliptic_form(std::int64_t n, const std::string& t_name, const std::string& provenance) {
    if (n < 2) fail(Errc::UnknownSW, "elliptic form needs chi >= 2, got " + std::to_string(n));
    if (n == 2) return SWExpr::constant(1);
    ClassBasis basis({{t_name, provenance}});
    SWExpr out(basis);
    std::int64_t k = n - 2;
    Int binom = 1;
    for (std::int64_t j = 0; j <= k; ++j) {
        Int coef = (j % 2 == 0) ? binom : Int(-binom);
        out.add_term(ExpVec{k - 2 * j}, coef);
        binom = binom * (k - j) / (j + 1);
    }
    return out;
}

SWExpr sw_minimal_general_type(const std::string& k_name, const std::string& provenance,
                               const Int& chi) {
    ClassBasis basis({{k_name, provenance}});
    SWExpr out(basis);
    out.add_term(ExpVec{1}, 1);
    out.add_term(ExpVec{-1}, mod_floor(chi, 2) == 0 ? Int(1) : Int(-1));
    return out;
}

SWExpr sw_fiber_sum_torus(const SWExpr& sw_a, const SWExpr& sw_b, const std::string& f_name,
                          const std::string& f_provenance) {
    SWExpr prod = mul(sw_a, sw_b);
    ClassBasis basis = prod.basis();
    std::size_t fi = basis.add({f_name, f_provenance});
    return mul_single_gen(rebase(prod, basis), fi, 1,
                          {{-2, Int(1)}, {0, Int(-2)}, {2, Int(1)}});
}

SWExpr sw_knot_surgery(const SWExpr& sw, const std::string& t_class_name, std::int64_t p,
                       std::int64_t q) {
    SWExpr delta = alexander_torus_knot(p, q);
    ClassBasis basis = sw.basis();
    std::size_t ti;
    if (auto i = basis.index_of(t_class_name))
        ti = *i;
    else
        ti = basis.add({t_class_name, "surgery torus"});
    std::vector<std::pair<std::int64_t, Int>> poly;
    poly.reserve(delta.term_count());
    for (const auto& [de, dc] : delta.terms()) poly.emplace_back(de[0], dc);
    return mul_single_gen(rebase(sw, basis), ti, 2, poly); // t = exp(2T)
}

BasicClassSet basic_classes(const SWExpr& sw) {
    BasicClassSet out;
    out.classes.reserve(sw.term_count());
    for (const auto& [exp, coef] : sw.terms()) out.classes.push_back(exp);
    out.count = static_cast<std::int64_t>(out.classes.size());
    // Orbits under v ~ -v: count distinct representatives max(v, -v). Works
    // whether or not the support is negation-symmetric.
    std::vector<ExpVec> reps;
    reps.reserve(out.classes.size());
    for (const auto& v : out.classes) {
        ExpVec neg = v;
        for (auto& x : neg) x = -x;
        reps.push_back(v < neg ? neg : v);
    }
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    out.count_up_to_sign = static_cast<std::int64_t>(reps.size());
    return out;
}

DesignatedSet w_basic_classes(std::int64_t m, std::int64_t k_prime, std::int64_t n, bool with_h7,
                              std::size_t materialize_cap) {
    if (m < 0 || k_prime < 1 || n < 1)
        fail(Errc::BadParams, "need m >= 0, k' >= 1, n >= 1");

    std::int64_t tori = m + 1 + (with_h7 ? 1 : 0);
    DesignatedSet out;
    out.basis.add({"K_H", "H(" + std::to_string(8 * k_prime - 1) + ")"});
    if (with_h7) out.basis.add({"K_H7", "H(7)"});
    out.basis.add({"T", "E(" + std::to_string(2 * n) + ")"});
    for (std::int64_t i = 1; i <= m; ++i)
        out.basis.add({"K_X@" + std::to_string(i), "X copy " + std::to_string(i)});
    for (std::int64_t l = 1; l <= tori; ++l)
        out.basis.add({"f@s" + std::to_string(l), "sum " + std::to_string(l)});

    // One half-set S: K_H fixed +1, every other choice free. All members are
    // distinct (independent coordinates) and S is disjoint from -S (the K_H
    // coordinate), so the counts are exact without deduplication.
    Int half = Int(2 * n - 1);
    if (with_h7) half *= 2;
    for (std::int64_t i = 0; i < m; ++i) half *= 2;
    for (std::int64_t l = 0; l < tori; ++l) half *= 3;
    out.count = 2 * half;
    out.count_up_to_sign = half;

    if (out.count > Int(static_cast<std::int64_t>(materialize_cap))) {
        out.classes_complete = false;
        return out;
    }

    std::size_t dim = out.basis.size();
    std::size_t h7pos = 1;
    std::size_t tpos = with_h7 ? 2 : 1;
    std::size_t xpos = tpos + 1;
    std::size_t fpos = xpos + static_cast<std::size_t>(m);

    std::vector<ExpVec> half_set;
    ExpVec v(dim, 0);
    v[0] = 1;
    std::vector<int> fdig(static_cast<std::size_t>(tori), 0);
    static const std::int64_t fval[3] = {0, 2, -2};
    for (int h7s = 0; h7s < (with_h7 ? 2 : 1); ++h7s) {
        if (with_h7) v[h7pos] = h7s == 0 ? 1 : -1;
        for (std::int64_t j = -(n - 1); j <= n - 1; ++j) {
            v[tpos] = 2 * j;
            std::uint64_t xmask_end = 1ull << m;
            for (std::uint64_t xm = 0; xm < xmask_end; ++xm) {
                for (std::int64_t i = 0; i < m; ++i)
                    v[xpos + static_cast<std::size_t>(i)] = (xm >> i) & 1ull ? -1 : 1;
                std::fill(fdig.begin(), fdig.end(), 0);
                while (true) {
                    for (std::int64_t l = 0; l < tori; ++l)
                        v[fpos + static_cast<std::size_t>(l)] = fval[fdig[static_cast<std::size_t>(l)]];
                    half_set.push_back(v);
                    std::int64_t carry = 0;
                    while (carry < tori && ++fdig[static_cast<std::size_t>(carry)] == 3) {
                        fdig[static_cast<std::size_t>(carry)] = 0;
                        ++carry;
                    }
                    if (carry == tori) break;
                }
            }
        }
    }
    out.classes.reserve(half_set.size() * 2);
    for (const auto& w : half_set) out.classes.push_back(w);
    for (const auto& w : half_set) {
        ExpVec neg = w;
        for (auto& x : neg) x = -x;
        out.classes.push_back(std::move(neg));
    }
    std::sort(out.classes.begin(), out.classes.end());
    return out;
}

std::string propagate_designated_class(const DesignatedClass& l1, const DesignatedClass& l2,
                                       const Int& genus, const std::string& fresh_name) {
    Int want = 2 * genus - 2;
    if (l1.pairing != want || l2.pairing != want)
        fail(Errc::PairingMismatch, "need <l, [Sigma]> = " + want.str() + " on both sides, got " +
                                        l1.pairing.str() + " (" + l1.name + ") and " +
                                        l2.pairing.str() + " (" + l2.name + ")");
    return fresh_name;
}

std::vector<Int> abs_coeff_multiset(const SWExpr& sw) {
    std::vector<Int> out;
    out.reserve(sw.term_count());
    for (const auto& [exp, coef] : sw.terms()) out.push_back(coef < 0 ? Int(-coef) : coef);
    std::sort(out.begin(), out.end());
    return out;
}

std::string canonical_key(const SWExpr& sw) {
    std::size_t dim = sw.basis().size();
    // Column signature of each generator: the sorted (exponent, coefficient)
    // pairs of the terms that use it.
    std::vector<std::string> sig(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<std::string> col;
        for (const auto& [exp, coef] : sw.terms())
            if (exp[i] != 0) col.push_back(std::to_string(exp[i]) + ";" + coef.str());
        std::sort(col.begin(), col.end());
        for (const auto& s : col) sig[i] += s + "|";
    }
    std::vector<std::size_t> order(dim);
    for (std::size_t i = 0; i < dim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sig[a] < sig[b]; });

    std::vector<std::string> lines;
    lines.reserve(sw.term_count());
    for (const auto& [exp, coef] : sw.terms()) {
        std::string line = coef.str() + ":";
        for (std::size_t i = 0; i < dim; ++i) {
            if (sig[order[i]].empty()) continue; // generator unused by any term
            line += std::to_string(exp[order[i]]) + ",";
        }
        lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());
    std::string key;
    for (const auto& l : lines) key += l + "\n";
    return key;
}

std::string sw_to_json(const SWExpr& sw) {
    std::string s = "{\"basis\":[";
    for (std::size_t i = 0; i < sw.basis().size(); ++i) {
        if (i) s += ',';
        s += "{\"name\":\"" + sw.basis().gen(i).name + "\",\"provenance\":\"" +
             sw.basis().gen(i).provenance + "\"}";
    }
    s += "],\"terms\":[";
    bool first = true;
    for (auto it = sw.terms().rbegin(); it != sw.terms().rend(); ++it) {
        if (!first) s += ',';
        first = false;
        s += "{\"exp\":[";
        for (std::size_t i = 0; i < it->first.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(it->first[i]);
        }
        // Large coefficients are emitted as strings to survive JSON readers
        // that parse numbers as doubles.
        const Int& c = it->second;
        bool fits = c >= Int(-((std::int64_t)1 << 53)) && c <= Int((std::int64_t)1 << 53);
        s += "],\"coef\":";
        s += fits ? c.str() : "\"" + c.str() + "\"";
        s += '}';
    }
    s += "]}";
    return s;
}

} // namespace geo4
