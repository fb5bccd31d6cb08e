#include "holink/algebra.hpp"

#include <algorithm>
#include <sstream>

#include "text_cursor.hpp"

namespace holink {

DiagramSum DiagramSum::of(const LinkDiagram& g, const Q& c) {
    DiagramSum s(g.m, g.parity);
    s.add(g, c);
    return s;
}

void DiagramSum::check(const LinkDiagram& g) const {
    if (g.m != m_ || g.parity != parity_) throw std::invalid_argument("DiagramSum: m/parity mismatch");
}

void DiagramSum::add(const LinkDiagram& g, const Q& c) {
    check(g);
    if (c == 0) return;
    NormalizedDiagram n = normalize(g);
    if (n.sign == 0) return;
    add_canonical(n.canonical, n.sign > 0 ? Q(c) : Q(-c));
}

void DiagramSum::add_canonical(const LinkDiagram& g, const Q& c) {
    check(g);
    if (c == 0) return;
    auto it = terms_.find(g);
    if (it == terms_.end()) {
        terms_.emplace(g, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

void DiagramSum::add(const DiagramSum& x, const Q& c) {
    if (x.empty()) return;
    if (x.m_ != m_ || x.parity_ != parity_) {
        if (terms_.empty()) {
            m_ = x.m_;
            parity_ = x.parity_;
        } else {
            throw std::invalid_argument("DiagramSum: m/parity mismatch");
        }
    }
    for (auto& [g, v] : x.terms_) add_canonical(g, v * c);
}

Q DiagramSum::coeff(const LinkDiagram& canonical) const {
    auto it = terms_.find(canonical);
    return it == terms_.end() ? Q(0) : it->second;
}

DiagramSum DiagramSum::operator+(const DiagramSum& o) const {
    DiagramSum r = *this;
    r.add(o, 1);
    return r;
}

DiagramSum DiagramSum::operator-(const DiagramSum& o) const {
    DiagramSum r = *this;
    r.add(o, -1);
    return r;
}

DiagramSum DiagramSum::operator*(const Q& c) const {
    DiagramSum r(m_, parity_);
    if (c == 0) return r;
    for (auto& [g, v] : terms_) r.terms_.emplace(g, v * c);
    return r;
}

// ---- contraction and differential ------------------------------------------

std::vector<Contractible> contractibles(const LinkDiagram& g) {
    std::vector<Contractible> out;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
        EdgeKind k = g.edges[i].kind;
        if (k == EdgeKind::mixed || k == EdgeKind::free) out.push_back({false, i, -1, -1});
    }
    for (int j = 0; j < g.m; ++j)
        for (int p = 0; p + 1 < g.seg_sizes[j]; ++p) out.push_back({true, -1, j, p});
    return out;
}

static std::pair<int, int> endpoints_of(const LinkDiagram& g, const Contractible& c) {
    if (c.is_arc) {
        int v = g.seg_vertex(c.seg, c.pos);
        return {v, v + 1};
    }
    if (c.edge < 0 || c.edge >= static_cast<int>(g.edges.size()))
        throw std::invalid_argument("contract: edge index out of range");
    const Edge& e = g.edges[c.edge];
    if (e.kind == EdgeKind::chord || e.kind == EdgeKind::loop)
        throw std::invalid_argument("non-contractible edge");
    return {std::min(e.a, e.b), std::max(e.a, e.b)};
}

LinkDiagram contract_raw(const LinkDiagram& g, const Contractible& c) {
    auto [v, w] = endpoints_of(g, c);
    LinkDiagram h = g;
    if (g.is_free(w))
        --h.n_free;
    else
        --h.seg_sizes[g.segment_of(w)];
    auto map = [&](int x) { return x == w ? v : (x > w ? x - 1 : x); };
    h.edges.clear();
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
        if (!c.is_arc && i == c.edge) continue;
        Edge e = g.edges[i];
        int a = map(e.a), b = map(e.b);
        if (a == b && e.a != e.b) {
            // a chord between v and w becomes a loop at v
            e.loop_flag = (e.a == v) ? 1 : -1;
            if (g.parity == Parity::even) e.loop_flag = 1;
        }
        e.a = a;
        e.b = b;
        e.kind = kind_for(h, a, b);
        h.edges.push_back(e);
    }
    return h;
}

NormalizedDiagram contract(const LinkDiagram& g, const Contractible& c) {
    LinkDiagram h = contract_raw(g, c);
    for (const auto& e : h.edges)
        if (e.a == e.b && h.is_free(e.a)) return {h, 0};
    return normalize(h);
}

int contraction_sign(const LinkDiagram& g, const Contractible& c) {
    auto [v, w] = endpoints_of(g, c);
    const int pos_w = w + 1;
    if (g.parity == Parity::odd) {
        int s = (pos_w % 2) ? -1 : 1;
        if (!c.is_arc && g.edges[c.edge].a != v) s = -s;
        return s;
    }
    if (c.is_arc) return (pos_w % 2) ? -1 : 1;
    int p = c.edge + 1 + g.n_seg();
    return (p % 2) ? -1 : 1;
}

DiagramSum differential(const LinkDiagram& g, const DifferentialOptions& opt) {
    DiagramSum out(g.m, g.parity);
    for (const auto& c : contractibles(g)) {
        NormalizedDiagram n = contract(g, c);
        if (n.sign == 0) continue;
        int s = contraction_sign(g, c) * n.sign;
        if (opt.inject_sign_bug && c.is_arc && c.pos == 0) s = -s;
        out.add_canonical(n.canonical, s);
    }
    return out;
}

DiagramSum differential(const DiagramSum& x, const DifferentialOptions& opt) {
    DiagramSum out(x.m(), x.parity());
    for (auto& [g, c] : x.terms()) out.add(differential(g, opt), c);
    return out;
}

// ---- shuffle product ---------------------------------------------------------

DiagramSum shuffle(const LinkDiagram& a, const LinkDiagram& b) {
    if (a.m != b.m || a.parity != b.parity) throw std::invalid_argument("shuffle: m/parity mismatch");
    const int m = a.m;
    DiagramSum out(m, a.parity);
    LinkDiagram prod(m, a.parity);
    for (int j = 0; j < m; ++j) prod.seg_sizes[j] = a.seg_sizes[j] + b.seg_sizes[j];
    prod.n_free = a.n_free + b.n_free;
    const int S = prod.n_seg();
    const int S1 = a.n_seg(), S2 = b.n_seg();
    const int block = a.parity == Parity::odd ? a.n_free * S2 : static_cast<int>(a.edges.size()) * S2;
    const int block_sign = block % 2 ? -1 : 1;

    // choice[j] = bitmask of merged positions on segment j taken by a's vertices
    std::vector<std::vector<unsigned>> choices(m);
    for (int j = 0; j < m; ++j) {
        int p = a.seg_sizes[j], t = prod.seg_sizes[j];
        if (t > 30) throw ResourceError("shuffle: segment too long");
        for (unsigned mask = 0; mask < (1u << t); ++mask)
            if (__builtin_popcount(mask) == p) choices[j].push_back(mask);
    }
    std::vector<int> pick(m, 0);
    while (true) {
        std::vector<int> map_a(a.n_vertices()), map_b(b.n_vertices());
        std::vector<char> from_a(S);
        for (int j = 0; j < m; ++j) {
            unsigned mask = choices[j][pick[j]];
            int ia = 0, ib = 0;
            for (int p = 0; p < prod.seg_sizes[j]; ++p) {
                int gid = prod.seg_vertex(j, p);
                if (mask >> p & 1u) {
                    map_a[a.seg_vertex(j, ia++)] = gid;
                    from_a[gid] = 1;
                } else {
                    map_b[b.seg_vertex(j, ib++)] = gid;
                    from_a[gid] = 0;
                }
            }
        }
        for (int f = 0; f < a.n_free; ++f) map_a[S1 + f] = S + f;
        for (int f = 0; f < b.n_free; ++f) map_b[S2 + f] = S + a.n_free + f;
        // interleaving sign: pairs (x from a, y from b) with y before x
        long inv = 0, seen_b = 0;
        for (int gid = 0; gid < S; ++gid) {
            if (from_a[gid])
                inv += seen_b;
            else
                ++seen_b;
        }
        LinkDiagram h = prod;
        for (auto e : a.edges) {
            e.a = map_a[e.a];
            e.b = map_a[e.b];
            e.kind = kind_for(h, e.a, e.b);
            h.edges.push_back(e);
        }
        for (auto e : b.edges) {
            e.a = map_b[e.a];
            e.b = map_b[e.b];
            e.kind = kind_for(h, e.a, e.b);
            h.edges.push_back(e);
        }
        int s = block_sign * ((inv % 2) ? -1 : 1);
        out.add(h, s);
        int j = 0;
        while (j < m && ++pick[j] == static_cast<int>(choices[j].size())) pick[j++] = 0;
        if (j == m) break;
    }
    return out;
}

DiagramSum shuffle(const DiagramSum& x, const DiagramSum& y) {
    if (x.m() != y.m() || x.parity() != y.parity()) throw std::invalid_argument("shuffle: m/parity mismatch");
    DiagramSum out(x.m(), x.parity());
    for (auto& [g, c] : x.terms())
        for (auto& [h, d] : y.terms()) out.add(shuffle(g, h), c * d);
    return out;
}

// ---- pairing -------------------------------------------------------------------

Q pairing(const LinkDiagram& a, const LinkDiagram& b) {
    auto na = normalize(a), nb = normalize(b);
    if (na.sign == 0 || nb.sign == 0 || na.canonical != nb.canonical) return 0;
    return Q(static_cast<long>(aut_order(na.canonical)) * na.sign * nb.sign);
}

Q pairing(const DiagramSum& x, const DiagramSum& y) {
    Q out = 0;
    for (auto& [g, c] : x.terms()) {
        Q d = y.coeff(g);
        if (d != 0) out += c * d * static_cast<long>(aut_order(g));
    }
    return out;
}

bool all_homotopy(const DiagramSum& x) {
    for (auto& [g, c] : x.terms())
        if (!is_homotopy_diagram(g)) return false;
    return true;
}

// ---- serialization -------------------------------------------------------------

std::string to_text(const DiagramSum& x) {
    std::ostringstream os;
    for (auto& [g, c] : x.terms()) os << c.get_str() << " * " << to_text(g) << "\n";
    return os.str();
}

DiagramSum parse_sum(const std::string& text) {
    detail::Cursor c(text);
    DiagramSum out;
    bool first = true;
    while (true) {
        c.skip_ws();
        if (c.eof()) break;
        if (c.peek() == '#') {
            c.skip_line();
            continue;
        }
        int l = c.line(), col = c.col();
        std::string tok = c.token("*");
        Q q;
        try {
            q = Q(tok);
            q.canonicalize();
        } catch (const std::invalid_argument&) {
            throw ParseError("malformed rational '" + tok + "'", l, col);
        }
        c.expect("*");
        LinkDiagram g = detail::parse_diagram_at(c);
        if (first) {
            out = DiagramSum(g.m, g.parity);
            first = false;
        }
        if (g.m != out.m() || g.parity != out.parity()) throw ParseError("mixed m/parity in sum", l, col);
        auto v = validate(g);
        if (!v.empty()) throw ParseError("invalid diagram: " + v.front(), l, col);
        out.add(g, q);
    }
    return out;
}

}  // namespace holink
