#include "geo4/construct.hpp"

#include "geo4/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>

namespace geo4 {

using nlohmann::json;

ExprPtr make_leaf(BlockSpec block) {
    auto e = std::make_shared<ConstructionExpr>();
    e->node = ConstructionExpr::Leaf{std::move(block)};
    return e;
}

ExprPtr make_fiber_sum(ExprPtr left, ExprPtr right, std::string left_slot,
                       std::string right_slot) {
    if (!left || !right) fail(Errc::BadParams, "fiber sum needs two operands");
    auto e = std::make_shared<ConstructionExpr>();
    e->node = ConstructionExpr::FiberSum{std::move(left), std::move(right), std::move(left_slot),
                                         std::move(right_slot)};
    return e;
}

ExprPtr make_knot_surgery(ExprPtr base, std::string torus_slot, TorusKnot knot) {
    if (!base) fail(Errc::BadParams, "knot surgery needs a base");
    if (knot.p < 2 || knot.q <= knot.p || std::gcd(knot.p, knot.q) != 1)
        fail(Errc::BadKnotParams, "need gcd(p, q) = 1 and 2 <= p < q, got (" +
                                      std::to_string(knot.p) + ", " + std::to_string(knot.q) + ")");
    auto e = std::make_shared<ConstructionExpr>();
    e->node = ConstructionExpr::KnotSurgery{std::move(base), std::move(torus_slot), knot};
    return e;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    if (a->node.index() != b->node.index()) return false;
    if (const auto* la = std::get_if<ConstructionExpr::Leaf>(&a->node)) {
        const auto& lb = std::get<ConstructionExpr::Leaf>(b->node);
        return la->block == lb.block;
    }
    if (const auto* fa = std::get_if<ConstructionExpr::FiberSum>(&a->node)) {
        const auto& fb = std::get<ConstructionExpr::FiberSum>(b->node);
        return fa->left_slot == fb.left_slot && fa->right_slot == fb.right_slot &&
               expr_equal(fa->left, fb.left) && expr_equal(fa->right, fb.right);
    }
    const auto& ka = std::get<ConstructionExpr::KnotSurgery>(a->node);
    const auto& kb = std::get<ConstructionExpr::KnotSurgery>(b->node);
    return ka.torus_slot == kb.torus_slot && ka.knot == kb.knot && expr_equal(ka.base, kb.base);
}

ExprPtr iterate_fiber_sum(const ExprPtr& base, std::int64_t copies, const std::string& slot,
                          const ExprPtr& tail) {
    if (copies < 1) fail(Errc::BadParams, "need at least one copy");
    ExprPtr cur = base;
    for (std::int64_t i = 1; i < copies; ++i) cur = make_fiber_sum(cur, base, slot, slot);
    if (tail) cur = make_fiber_sum(cur, tail, slot, slot);
    return cur;
}

const EvalSlot* EvalReport::find_slot(const std::string& id) const {
    for (const auto& s : slots)
        if (s.slot.id == id) return &s;
    const EvalSlot* base_match = nullptr;
    int hits = 0;
    for (const auto& s : slots)
        if (s.base_id == id) {
            base_match = &s;
            ++hits;
        }
    return hits == 1 ? base_match : nullptr;
}

namespace {

std::string base_of(const std::string& id) {
    auto at = id.find('@');
    return at == std::string::npos ? id : id.substr(0, at);
}

// Pre-pass over the tree: leaf indexing and the census deciding whether
// class names need qualification.
struct NameInfo {
    int leaf_count = 0;
    int sum_count = 0;
    int f_sources = 0; // fiber sums plus blocks with an internal gluing class

    bool qualify_leaf_classes() const { return leaf_count > 1; }
    bool qualify_sum_classes() const { return f_sources > 1; }
};

void scan(const ConstructionExpr& e, NameInfo& info) {
    if (const auto* l = std::get_if<ConstructionExpr::Leaf>(&e.node)) {
        ++info.leaf_count;
        if (l->block.family == Family::X2n) ++info.f_sources;
        return;
    }
    if (const auto* f = std::get_if<ConstructionExpr::FiberSum>(&e.node)) {
        ++info.sum_count;
        ++info.f_sources;
        scan(*f->left, info);
        scan(*f->right, info);
        return;
    }
    scan(*std::get<ConstructionExpr::KnotSurgery>(e.node).base, info);
}

void add_note(EvalReport& r, const std::string& note) {
    if (std::find(r.provenance.begin(), r.provenance.end(), note) == r.provenance.end())
        r.provenance.push_back(note);
}

void merge_notes(EvalReport& r, const EvalReport& child) {
    for (const auto& n : child.provenance) add_note(r, n);
}

void render_slot_ids(std::vector<EvalSlot>& slots) {
    std::map<std::string, int> count;
    for (const auto& s : slots) ++count[s.base_id];
    for (auto& s : slots)
        s.slot.id = count[s.base_id] > 1 ? s.base_id + "@" + s.origin_tag : s.base_id;
}

std::vector<ExpVec> sign_closed_support(const SWStatus& st, ClassBasis& basis_out) {
    if (st.kind == SWStatusKind::Exact) {
        basis_out = st.exact->basis();
        std::vector<ExpVec> v;
        v.reserve(st.exact->term_count());
        for (const auto& [exp, coef] : st.exact->terms()) v.push_back(exp);
        return v;
    }
    basis_out = st.partial->basis;
    return st.partial->designated;
}

class Evaluator {
public:
    Evaluator(const NameInfo& names, const EvalOptions& opts) : names_(names), opts_(opts) {}

    EvalReport go(const ConstructionExpr& e) {
        if (const auto* l = std::get_if<ConstructionExpr::Leaf>(&e.node)) return leaf(*l);
        if (const auto* f = std::get_if<ConstructionExpr::FiberSum>(&e.node)) return fiber_sum(*f);
        return surgery(std::get<ConstructionExpr::KnotSurgery>(e.node));
    }

private:
    const NameInfo& names_;
    EvalOptions opts_;
    int next_leaf_ = 1;
    int next_sum_ = 1;

    std::string leaf_suffix(int idx) const {
        return names_.qualify_leaf_classes() ? "@" + std::to_string(idx) : "";
    }
    std::string sum_class_name(int k) const {
        return names_.qualify_sum_classes() ? "f@s" + std::to_string(k) : "f";
    }

    EvalReport leaf(const ConstructionExpr::Leaf& lf) {
        const BlockSpec& b = lf.block;
        int idx = next_leaf_++;
        std::string suffix = leaf_suffix(idx);
        std::string provn = "leaf" + std::to_string(idx) + ":" + block_label(b);

        EvalReport r;
        r.invariants = b.invariants;
        r.spin = b.spin;
        r.simply_connected = b.simply_connected;
        r.symplectic = true;
        r.model_approx = b.approx_model || b.lattice_model;
        r.leaf_count = names_.leaf_count;
        add_note(r, block_label(b) + ": catalog invariants (" + b.invariants.chi.str() + ", " +
                        b.invariants.c.str() + "), spin=" + (b.spin ? "true" : "false"));
        if (b.approx_model)
            add_note(r, block_label(b) + ": asymptotic model values adopted as exact");
        if (b.lattice_model)
            add_note(r, block_label(b) + ": lattice bookkeeping block, b2- positivity suspended");

        for (const auto& s : b.surfaces) {
            EvalSlot es;
            es.slot = s;
            es.base_id = s.id;
            es.origin_leaf = idx;
            es.origin_tag = std::to_string(idx);
            if (s.genus == 1) {
                bool named_in_sw = (b.sw.kind == SWKind::Elliptic && s.id == "T") ||
                                   (b.family == Family::X2n && (s.id == "T" || s.id == "f"));
                es.sw_class = named_in_sw ? s.id + suffix : s.id + "@L" + std::to_string(idx);
            }
            r.slots.push_back(std::move(es));
        }
        render_slot_ids(r.slots);

        if (!opts_.with_sw) {
            r.sw.kind = SWStatusKind::Unknown;
            r.sw.note = "not computed (disabled for this evaluation)";
            return r;
        }
        try {
            BlockSW bs = sw_of_block(b, suffix, provn);
            if (bs.exact) {
                r.sw.kind = SWStatusKind::Exact;
                r.sw.exact = std::move(bs.expr);
                r.sw.canonical = bs.canonical_class;
            } else {
                r.sw.kind = SWStatusKind::Partial;
                r.sw.partial = PartialSW{std::move(bs.partial_basis),
                                         std::move(bs.partial_designated), bs.canonical_class};
            }
        } catch (const Error& err) {
            if (err.code() != Errc::UnknownSW) throw;
            r.sw.kind = SWStatusKind::Unknown;
            r.sw.note = err.what();
        }
        return r;
    }

    EvalReport fiber_sum(const ConstructionExpr::FiberSum& fs) {
        EvalReport L = go(*fs.left);
        EvalReport R = go(*fs.right);
        int k = next_sum_++;

        const EvalSlot* ls = L.find_slot(fs.left_slot);
        if (!ls) fail(Errc::MissingSlot, "left operand has no slot '" + fs.left_slot + "'" +
                                             available(L));
        const EvalSlot* rs = R.find_slot(fs.right_slot);
        if (!rs) fail(Errc::MissingSlot, "right operand has no slot '" + fs.right_slot + "'" +
                                             available(R));
        if (ls->slot.genus != rs->slot.genus)
            fail(Errc::SlotMismatch, "slot '" + ls->slot.id + "' has genus " +
                                         ls->slot.genus.str() + " but slot '" + rs->slot.id +
                                         "' has genus " + rs->slot.genus.str());
        Int g = ls->slot.genus;

        EvalReport r;
        bool lattice = L.invariants.lattice_model || R.invariants.lattice_model;
        r.invariants = char_from_chi_c(L.invariants.chi + R.invariants.chi + (g - 1),
                                       L.invariants.c + R.invariants.c + 8 * (g - 1), lattice);
        r.spin = L.spin && R.spin;
        bool disk = ls->slot.has_dual_sphere || rs->slot.has_dual_sphere;
        r.simply_connected = L.simply_connected && R.simply_connected && disk;
        r.symplectic = L.symplectic && R.symplectic;
        r.model_approx = L.model_approx || R.model_approx;
        r.sw_formal_warning = L.sw_formal_warning || R.sw_formal_warning;
        r.leaf_count = names_.leaf_count;
        merge_notes(r, L);
        merge_notes(r, R);
        add_note(r, "fiber sum " + std::to_string(k) + " along genus-" + g.str() +
                        " square-zero surfaces ('" + ls->slot.id + "', '" + rs->slot.id +
                        "'): chi, c gain (g-1), 8(g-1); signatures add");
        if (r.spin) add_note(r, "both summands spin: the fiber sum carries a spin structure");
        if (disk)
            add_note(r, "simple connectivity: a dual sphere on a consumed slot provides the"
                        " disk killing the gluing circle");
        else if (L.simply_connected && R.simply_connected)
            add_note(r, "no dual sphere on either consumed slot: simple connectivity of the sum"
                        " is not certified");

        std::string fname = sum_class_name(k);

        for (const auto& s : L.slots)
            if (&s != ls && s.slot.assumed_disjoint) r.slots.push_back(s);
        for (const auto& s : R.slots)
            if (&s != rs && s.slot.assumed_disjoint) r.slots.push_back(s);

        EvalSlot ind;
        ind.slot.genus = g;
        ind.slot.self_intersection = 0;
        ind.slot.kind = (ls->slot.kind == SlotKind::LagrangianTorusInCusp &&
                         rs->slot.kind == SlotKind::LagrangianTorusInCusp)
                            ? SlotKind::LagrangianTorusInCusp
                            : SlotKind::SymplecticSurface;
        // The induced surface has a transverse sphere only when both consumed
        // slots brought one (their punctured spheres glue up).
        ind.slot.has_dual_sphere = ls->slot.has_dual_sphere && rs->slot.has_dual_sphere;
        ind.slot.host = "induced embedding of the summed surface (sum " + std::to_string(k) + ")";
        ind.base_id = base_of(ls->slot.id);
        ind.origin_leaf = -1;
        ind.origin_tag = "s" + std::to_string(k);
        if (g == 1) ind.sw_class = fname;
        r.slots.push_back(std::move(ind));
        render_slot_ids(r.slots);

        if (!opts_.with_sw) {
            r.sw.kind = SWStatusKind::Unknown;
            r.sw.note = "not computed (disabled for this evaluation)";
            return r;
        }

        if (g == 1 && (L.invariants.chi < 2 || R.invariants.chi < 2)) {
            r.sw_formal_warning = true;
            add_note(r, "torus product formula applied with an operand of b2+ <= 1:"
                        " result is formal only");
        }

        if (L.sw.kind == SWStatusKind::Unknown || R.sw.kind == SWStatusKind::Unknown) {
            r.sw.kind = SWStatusKind::Unknown;
            r.sw.note = "an operand's invariant is unknown";
            return r;
        }

        std::string sum_prov = "sum" + std::to_string(k);
        if (g == 1) {
            if (L.sw.kind == SWStatusKind::Exact && R.sw.kind == SWStatusKind::Exact) {
                r.sw.kind = SWStatusKind::Exact;
                r.sw.exact = sw_fiber_sum_torus(*L.sw.exact, *R.sw.exact, fname, sum_prov);
                add_note(r, "torus fiber sum: invariant is the product of the sides times"
                            " (e^f - e^{-f})^2 in the fresh gluing class");
            } else {
                // Sum-set of known-nonzero classes: with disjoint generator
                // sets no cancellation can occur, so every combination stays
                // certifiably nonzero.
                ClassBasis lb, rb;
                auto lv = sign_closed_support(L.sw, lb);
                auto rv = sign_closed_support(R.sw, rb);
                PartialSW p;
                p.basis = lb;
                std::vector<std::size_t> rmap(rb.size());
                for (std::size_t i = 0; i < rb.size(); ++i) rmap[i] = p.basis.add(rb.gen(i));
                std::size_t fi = p.basis.add({fname, sum_prov});
                std::size_t dim = p.basis.size();
                static const std::int64_t fvals[3] = {0, 2, -2};
                p.designated.reserve(lv.size() * rv.size() * 3);
                for (const auto& a : lv)
                    for (const auto& b : rv)
                        for (std::int64_t fv : fvals) {
                            ExpVec v(dim, 0);
                            for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i];
                            for (std::size_t i = 0; i < b.size(); ++i) v[rmap[i]] += b[i];
                            v[fi] += fv;
                            p.designated.push_back(std::move(v));
                        }
                std::sort(p.designated.begin(), p.designated.end());
                p.designated.erase(std::unique(p.designated.begin(), p.designated.end()),
                                   p.designated.end());
                r.sw.kind = SWStatusKind::Partial;
                r.sw.partial = std::move(p);
                add_note(r, "torus fiber sum with a partially known operand: designated classes"
                            " combine as sums plus {0, +-2f}");
            }
            return r;
        }

        // Genus > 1: a pair of classes pairing 2g-2 against the summed surface
        // induces one nonzero class of the composite.
        auto canonical_of = [](const SWStatus& st) -> std::optional<std::string> {
            if (st.kind == SWStatusKind::Exact) return st.canonical;
            return st.partial->canonical;
        };
        auto lcan = canonical_of(L.sw);
        auto rcan = canonical_of(R.sw);
        if (!lcan || !rcan) {
            r.sw.kind = SWStatusKind::Unknown;
            r.sw.note = std::string("no class with pairing 2g-2 available on the ") +
                        (!lcan ? "left" : "right") + " side of a genus-" + g.str() + " sum";
            add_note(r, r.sw.note);
            return r;
        }
        Int want = 2 * g - 2;
        std::string fresh = "K@s" + std::to_string(k);
        propagate_designated_class({*lcan, want}, {*rcan, want}, g, fresh);
        PartialSW p;
        p.basis.add({fresh, sum_prov});
        p.designated = {ExpVec{1}, ExpVec{-1}};
        p.canonical = fresh;
        r.sw.kind = SWStatusKind::Partial;
        r.sw.partial = std::move(p);
        add_note(r, "genus-" + g.str() + " fiber sum: the pair (" + *lcan + ", " + *rcan +
                        ") pairing 2g-2 with the summed surface designates the nonzero class " +
                        fresh);
        return r;
    }

    EvalReport surgery(const ConstructionExpr::KnotSurgery& ks) {
        EvalReport B = go(*ks.base);
        const EvalSlot* s = B.find_slot(ks.torus_slot);
        if (!s) fail(Errc::MissingSlot, "no slot '" + ks.torus_slot + "'" + available(B));
        if (s->slot.genus != 1)
            fail(Errc::NonTorusSlot, "knot surgery needs a torus; slot '" + s->slot.id +
                                         "' has genus " + s->slot.genus.str());
        std::string knot_str =
            "T(" + std::to_string(ks.knot.p) + "," + std::to_string(ks.knot.q) + ")";
        EvalReport r = B;
        add_note(r, "knot surgery by " + knot_str + " on slot '" + s->slot.id +
                        "': homeomorphism type, spin and symplectic structure preserved;"
                        " the formal invariant is multiplied by the knot polynomial at"
                        " t = exp(2[T])");
        switch (B.sw.kind) {
            case SWStatusKind::Exact:
                r.sw.exact = sw_knot_surgery(*B.sw.exact, s->sw_class, ks.knot.p, ks.knot.q);
                r.sw.canonical.reset();
                break;
            case SWStatusKind::Partial:
                r.sw.kind = SWStatusKind::Unknown;
                r.sw.partial.reset();
                r.sw.note = "knot surgery on a partially known invariant: no product class is"
                            " certifiably nonzero from the designated set alone";
                add_note(r, r.sw.note);
                break;
            case SWStatusKind::Unknown: break;
        }
        return r;
    }

    static std::string available(const EvalReport& rep) {
        std::string s = " (available:";
        if (rep.slots.empty()) s += " none";
        for (const auto& sl : rep.slots) s += " " + sl.slot.id;
        s += ")";
        return s;
    }
};

} // namespace

EvalReport eval(const ExprPtr& expr, const EvalOptions& opts) {
    if (!expr) fail(Errc::BadParams, "empty construction");
    NameInfo info;
    scan(*expr, info);
    Evaluator ev(info, opts);
    return ev.go(*expr);
}

// ---------------------------------------------------------------------------
// Text grammar.

namespace {

struct Lexer {
    const std::string& s;
    std::size_t pos = 0;

    explicit Lexer(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r'))
            ++pos;
    }

    bool ident_char(char c) const {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@' ||
               static_cast<unsigned char>(c) >= 0x80;
    }

    [[noreturn]] void error(const std::string& msg) const {
        fail(Errc::SyntaxError, msg + " at position " + std::to_string(pos));
    }

    char peek() {
        skip_ws();
        if (pos >= s.size()) error("unexpected end of input");
        return s[pos];
    }

    bool at_end() {
        skip_ws();
        return pos >= s.size();
    }

    void expect(char c) {
        if (peek() != c) error(std::string("expected '") + c + "'");
        ++pos;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && ident_char(s[pos])) ++pos;
        if (pos == start) error("expected a name");
        return s.substr(start, pos - start);
    }

    Int integer() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        std::size_t digits = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == digits) error("expected an integer");
        return Int(s.substr(start, pos - start));
    }
};

ExprPtr parse_expr(Lexer& lx, const Catalog& catalog);

ExprPtr parse_block(Lexer& lx, const Catalog& catalog, const std::string& name) {
    auto fam = family_from_str(name);
    if (!fam) fail(Errc::UnknownBlock, "unknown block family '" + name + "'");
    lx.expect('(');
    ParamMap params;
    if (lx.peek() != ')') {
        while (true) {
            std::string key = lx.ident();
            lx.expect('=');
            params[key] = lx.integer();
            if (lx.peek() != ',') break;
            lx.expect(',');
        }
    }
    lx.expect(')');
    if (*fam == Family::Synthetic) {
        auto it = params.find("id");
        if (it == params.end()) fail(Errc::UnknownBlock, "synthetic blocks are referenced by id");
        const BlockSpec* b = catalog.find_synthetic(it->second);
        if (!b)
            fail(Errc::UnknownBlock, "no synthetic block with id " + it->second.str() +
                                         " in the loaded catalog");
        return make_leaf(*b);
    }
    return make_leaf(make_block(*fam, params));
}

ExprPtr parse_expr(Lexer& lx, const Catalog& catalog) {
    std::string name = lx.ident();
    if (name == "fsum") {
        lx.expect('(');
        std::string ls = lx.ident();
        lx.expect(',');
        std::string rs = lx.ident();
        lx.expect(';');
        ExprPtr left = parse_expr(lx, catalog);
        lx.expect(',');
        ExprPtr right = parse_expr(lx, catalog);
        lx.expect(')');
        return make_fiber_sum(std::move(left), std::move(right), std::move(ls), std::move(rs));
    }
    if (name == "surgery") {
        lx.expect('(');
        std::string slot = lx.ident();
        lx.expect(',');
        lx.expect('(');
        Int p = lx.integer();
        lx.expect(',');
        Int q = lx.integer();
        lx.expect(')');
        lx.expect(';');
        ExprPtr base = parse_expr(lx, catalog);
        lx.expect(')');
        return make_knot_surgery(std::move(base), std::move(slot),
                                 {p.convert_to<std::int64_t>(), q.convert_to<std::int64_t>()});
    }
    return parse_block(lx, catalog, name);
}

} // namespace

std::string serialize(const ExprPtr& expr) {
    if (!expr) fail(Errc::BadParams, "empty construction");
    if (const auto* l = std::get_if<ConstructionExpr::Leaf>(&expr->node))
        return block_label(l->block);
    if (const auto* f = std::get_if<ConstructionExpr::FiberSum>(&expr->node))
        return "fsum(" + f->left_slot + "," + f->right_slot + "; " + serialize(f->left) + ", " +
               serialize(f->right) + ")";
    const auto& k = std::get<ConstructionExpr::KnotSurgery>(expr->node);
    return "surgery(" + k.torus_slot + ",(" + std::to_string(k.knot.p) + "," +
           std::to_string(k.knot.q) + "); " + serialize(k.base) + ")";
}

ExprPtr parse(const std::string& text, const Catalog& catalog) {
    Lexer lx(text);
    ExprPtr e = parse_expr(lx, catalog);
    if (!lx.at_end()) lx.error("trailing input");
    return e;
}

namespace {

json expr_to_json_obj(const ExprPtr& e) {
    if (const auto* l = std::get_if<ConstructionExpr::Leaf>(&e->node)) {
        json params = json::object();
        for (const auto& [k, v] : l->block.params) params[k] = v.str();
        return json{{"op", "block"}, {"family", family_str(l->block.family)}, {"params", params}};
    }
    if (const auto* f = std::get_if<ConstructionExpr::FiberSum>(&e->node))
        return json{{"op", "fsum"},
                    {"left_slot", f->left_slot},
                    {"right_slot", f->right_slot},
                    {"left", expr_to_json_obj(f->left)},
                    {"right", expr_to_json_obj(f->right)}};
    const auto& k = std::get<ConstructionExpr::KnotSurgery>(e->node);
    return json{{"op", "surgery"},
                {"slot", k.torus_slot},
                {"p", k.knot.p},
                {"q", k.knot.q},
                {"base", expr_to_json_obj(k.base)}};
}

ExprPtr expr_from_json_obj(const json& j, const Catalog& catalog) {
    std::string op = j.at("op").get<std::string>();
    if (op == "block") {
        std::string fam = j.at("family").get<std::string>();
        auto f = family_from_str(fam);
        if (!f) fail(Errc::UnknownBlock, "unknown block family '" + fam + "'");
        ParamMap params;
        for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it) {
            const json& v = it.value();
            params[it.key()] = v.is_string() ? Int(v.get<std::string>()) : Int(v.get<std::int64_t>());
        }
        if (*f == Family::Synthetic) {
            const BlockSpec* b = catalog.find_synthetic(params.at("id"));
            if (!b) fail(Errc::UnknownBlock, "no synthetic block with that id in the catalog");
            return make_leaf(*b);
        }
        return make_leaf(make_block(*f, params));
    }
    if (op == "fsum")
        return make_fiber_sum(expr_from_json_obj(j.at("left"), catalog),
                              expr_from_json_obj(j.at("right"), catalog),
                              j.at("left_slot").get<std::string>(),
                              j.at("right_slot").get<std::string>());
    if (op == "surgery")
        return make_knot_surgery(expr_from_json_obj(j.at("base"), catalog),
                                 j.at("slot").get<std::string>(),
                                 {j.at("p").get<std::int64_t>(), j.at("q").get<std::int64_t>()});
    fail(Errc::ParseError, "unknown op '" + op + "'");
}

} // namespace

std::string expr_to_json(const ExprPtr& expr) {
    if (!expr) fail(Errc::BadParams, "empty construction");
    return expr_to_json_obj(expr).dump();
}

ExprPtr expr_from_json(const std::string& text, const Catalog& catalog) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(Errc::ParseError, std::string("construction JSON: ") + e.what());
    }
    return expr_from_json_obj(j, catalog);
}

AdmissibilityVerdict is_complex_admissible(const EvalReport& report) {
    AdmissibilityVerdict v;
    if (report.sw.kind == SWStatusKind::Partial) {
        v.value = Admissibility::Unknown;
        v.reasoning.push_back("the invariant is only partially known: the designated classes"
                              " alone cannot decide complex admissibility");
        return v;
    }
    if (report.sw.kind == SWStatusKind::Unknown) {
        v.value = Admissibility::Unknown;
        v.reasoning.push_back("no invariant available: " + report.sw.note);
        return v;
    }
    BasicClassSet bcs = basic_classes(*report.sw.exact);
    const Int& c = report.invariants.c;
    if (c > 0) {
        v.reasoning.push_back("c = " + c.str() + " > 0: a complex surface here would be of"
                              " general type with exactly one basic class up to sign");
        v.reasoning.push_back("found " + bcs.count_up_to_sign.str() + " basic classes up to sign");
        v.value = bcs.count_up_to_sign <= 1 ? Admissibility::Admissible
                                            : Admissibility::NotAdmissible;
        return v;
    }
    if (c == 0) {
        const Int& chi = report.invariants.chi;
        if (chi >= 2 && mod_floor(chi, 2) == 0) {
            SWExpr ref = sw_elliptic_form(chi.convert_to<std::int64_t>(), "T", "reference");
            bool same = abs_coeff_multiset(*report.sw.exact) == abs_coeff_multiset(ref);
            if (!same) {
                v.value = Admissibility::NotAdmissible;
                v.reasoning.push_back("c = 0 elliptic comparison: the coefficient multiset"
                                      " differs from the E(" + chi.str() + ") basic-class"
                                      " structure under the configured proxy");
            } else {
                v.value = Admissibility::Unknown;
                v.reasoning.push_back("c = 0 elliptic comparison: the coefficient-multiset proxy"
                                      " cannot separate this invariant from E(" + chi.str() +
                                      ")'s; the distinction lives in homological data this ring"
                                      " does not encode");
            }
            return v;
        }
        v.value = Admissibility::Unknown;
        v.reasoning.push_back("c = 0 with no even elliptic reference at chi = " + chi.str());
        return v;
    }
    v.value = Admissibility::Unknown;
    v.reasoning.push_back("c < 0 is outside the modeled complex-surface comparisons");
    return v;
}

} // namespace geo4
