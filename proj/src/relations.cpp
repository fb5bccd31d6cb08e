#include <algorithm>
#include <array>
#include <stdexcept>
#include <numeric>

#include "holink/algebra.hpp"
#include "holink/linalg.hpp"

namespace holink {

Basis::Basis(std::vector<LinkDiagram> d) : diagrams(std::move(d)) {
    for (int i = 0; i < static_cast<int>(diagrams.size()); ++i) index.emplace(diagrams[i], i);
}

int Basis::find(const LinkDiagram& g) const {
    auto it = index.find(g);
    return it == index.end() ? -1 : it->second;
}

const char* tag_name(RelationTag t) {
    switch (t) {
        case RelationTag::STU: return "STU";
        case RelationTag::IHX: return "IHX";
        case RelationTag::OneT: return "1T";
        case RelationTag::H1T: return "H1T";
    }
    return "?";
}

namespace {

SparseRow row_of(const DiagramSum& x, const Basis& b) {
    SparseRow r;
    for (auto& [g, c] : x.terms()) {
        int i = b.find(g);
        if (i < 0) throw std::logic_error("diagram outside the enumerated basis:\n" + to_text(g));
        r.emplace_back(i, c);
    }
    std::sort(r.begin(), r.end(), [](auto& p, auto& q) { return p.first < q.first; });
    return r;
}

DiagramSum sum_of(const SparseRow& r, const Basis& b, int m, Parity p) {
    DiagramSum s(m, p);
    for (auto& [i, c] : r) s.add_canonical(b.diagrams[i], c);
    return s;
}

// δ as rows indexed by the defect-one basis.
std::vector<SparseRow> delta_rows(const Basis& b0, const Basis& b1) {
    std::vector<SparseRow> rows(b1.diagrams.size());
    for (int j = 0; j < static_cast<int>(b0.diagrams.size()); ++j) {
        DiagramSum d = differential(b0.diagrams[j]);
        for (auto& [g, c] : d.terms()) {
            int i = b1.find(g);
            if (i < 0) throw std::logic_error("differential leaves the enumerated basis");
            rows[i].emplace_back(j, c);
        }
    }
    return rows;
}

void add_term(DiagramSum& gen, const LinkDiagram& raw, const Contractible& c, Space space) {
    NormalizedDiagram n = normalize(raw);
    if (n.sign == 0) return;
    if (space == Space::HD && !is_homotopy_diagram(n.canonical)) return;
    gen.add_canonical(n.canonical, contraction_sign(raw, c) * n.sign);
}

}  // namespace

std::vector<DiagramSum> kernel_defect_zero(int m, Parity parity, int k, Space space) {
    Basis b0(enumerate(m, parity, 0, k, space));
    Basis b1(enumerate(m, parity, 1, k, space));
    auto rows = delta_rows(b0, b1);
    Echelon e(static_cast<int>(b0.diagrams.size()), sparsest_first(rows, static_cast<int>(b0.diagrams.size())));
    for (auto& r : rows) e.insert(r);
    std::vector<DiagramSum> out;
    for (auto& v : e.nullspace()) out.push_back(sum_of(v, b0, m, parity));
    return out;
}

Relation blowup(const LinkDiagram& d, Space space) {
    Relation rel;
    rel.source = d;
    rel.gen = DiagramSum(d.m, d.parity);
    auto cnt = d.endpoint_counts();
    const int S = d.n_seg();
    int x = -1;
    for (int v = 0; v < d.n_vertices(); ++v) {
        int excess = v < S ? cnt[v] - 1 : cnt[v] - 3;
        if (excess == 1) x = v;
        if (excess > 1) throw std::invalid_argument("blowup: excess vertex of valence above 4");
    }
    if (x < 0 || defect(d) != 1) throw std::invalid_argument("blowup: need a defect-one diagram");
    std::vector<int> inc;
    for (int i = 0; i < static_cast<int>(d.edges.size()); ++i)
        if (d.edges[i].a == x || d.edges[i].b == x) inc.push_back(i);

    auto reroute = [](Edge e, int from, int to) {
        if (e.a == from) e.a = to;
        if (e.b == from) e.b = to;
        return e;
    };

    if (x >= S) {
        // 4-valent free vertex: the three ways to split it along a new free edge
        rel.tag = RelationTag::IHX;
        const int w = d.n_vertices();
        for (int partner = 1; partner <= 3; ++partner) {
            LinkDiagram g = d;
            g.n_free += 1;
            for (int q = 1; q <= 3; ++q) {
                if (q == partner) continue;
                g.edges[inc[q]] = reroute(d.edges[inc[q]], x, w);
            }
            for (auto& e : g.edges) e.kind = kind_for(g, e.a, e.b);
            g.edges.push_back({EdgeKind::free, x, w, 1});
            add_term(rel.gen, g, {false, static_cast<int>(g.edges.size()) - 1, -1, -1}, space);
        }
        return rel;
    }

    const int seg = d.segment_of(x), pos = d.position_of(x);
    // inserts a new segment vertex right after x; returns the diagram with
    // ids shifted (the new vertex is x + 1)
    auto with_inserted = [&](LinkDiagram& g) {
        g = d;
        g.seg_sizes[seg] += 1;
        for (auto& e : g.edges) {
            if (e.a > x) ++e.a;
            if (e.b > x) ++e.b;
        }
    };

    if (inc.size() == 1) {
        // loop at x: the only preimage is an isolated chord
        rel.tag = RelationTag::OneT;
        LinkDiagram g;
        with_inserted(g);
        Edge& e = g.edges[inc[0]];
        const Edge& loop = d.edges[inc[0]];
        e.kind = EdgeKind::chord;
        if (d.parity == Parity::odd && loop.loop_flag < 0) {
            e.a = x + 1;
            e.b = x;
        } else {
            e.a = x;
            e.b = x + 1;
        }
        e.loop_flag = 1;
        add_term(rel.gen, g, {true, -1, seg, pos}, space);
        return rel;
    }

    rel.tag = RelationTag::STU;
    {
        // S: both edges move to a new free vertex joined to x
        LinkDiagram g = d;
        const int w = d.n_vertices();
        g.n_free += 1;
        for (int q : inc) g.edges[q] = reroute(d.edges[q], x, w);
        for (auto& e : g.edges) e.kind = kind_for(g, e.a, e.b);
        g.edges.push_back({EdgeKind::mixed, x, w, 1});
        add_term(rel.gen, g, {false, static_cast<int>(g.edges.size()) - 1, -1, -1}, space);
    }
    for (int moved = 0; moved < 2; ++moved) {
        // T and U: one edge stays at x, the other moves to the new vertex x+1
        LinkDiagram g;
        with_inserted(g);
        Edge& e = g.edges[inc[moved]];
        if (e.a == x) e.a = x + 1;
        if (e.b == x) e.b = x + 1;
        for (auto& f : g.edges) f.kind = kind_for(g, f.a, f.b);
        // in HD a term that leaves the subcomplex is dropped
        if (space == Space::HD && !is_homotopy_diagram(g)) rel.tag = RelationTag::H1T;
        add_term(rel.gen, g, {true, -1, seg, pos}, space);
    }
    return rel;
}

RelationSystem relation_generators(int m, Parity parity, int k, Space space) {
    RelationSystem rs;
    rs.m = m;
    rs.parity = parity;
    rs.k = k;
    rs.space = space;
    for (const auto& d : enumerate(m, parity, 1, k, space)) {
        Relation r = blowup(d, space);
        rs.relations.push_back(std::move(r));
    }
    return rs;
}

DiagramSum dual_generator(const LinkDiagram& d, const std::vector<LinkDiagram>& basis0) {
    DiagramSum out(d.m, d.parity);
    const long aut_d = static_cast<long>(aut_order(d));
    for (const auto& g : basis0) {
        Q c = differential(g).coeff(d);
        if (c == 0) continue;
        out.add_canonical(g, c * aut_d / static_cast<long>(aut_order(g)));
    }
    return out;
}

// ---- STU reduction ---------------------------------------------------------------

namespace {

// Candidate (free vertex, segment neighbour, edge index) triples in order.
std::vector<std::array<int, 3>> stu_candidates(const LinkDiagram& g, ReduceOrder order) {
    std::vector<std::array<int, 3>> out;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
        const Edge& e = g.edges[i];
        if (e.kind != EdgeKind::mixed) continue;
        int u = std::max(e.a, e.b), x = std::min(e.a, e.b);
        out.push_back({u, x, i});
    }
    std::sort(out.begin(), out.end());
    if (order == ReduceOrder::greatest) std::reverse(out.begin(), out.end());
    return out;
}

bool reduce_step(const LinkDiagram& g, Space space, ReduceOrder order, ReduceStep& step) {
    for (auto [u, x, i] : stu_candidates(g, order)) {
        NormalizedDiagram n = contract(g, {false, i, -1, -1});
        if (n.sign == 0) continue;
        Relation rel = blowup(n.canonical, space);
        if (rel.gen.coeff(g) == 0) continue;
        step.diagram = g;
        step.free_vertex = u;
        step.seg_vertex = x;
        step.contracted = n.canonical;
        step.generator = rel.gen;
        return true;
    }
    return false;
}

void apply_step(DiagramSum& acc, const ReduceStep& step) {
    Q a = acc.coeff(step.diagram);
    Q cs = step.generator.coeff(step.diagram);
    // Γ ≡ -(gen - cs Γ)/cs
    acc.add(step.generator, -a / cs);
}

}  // namespace

Reduction stu_reduce(const DiagramSum& x, Space space, ReduceOrder order) {
    Reduction r;
    DiagramSum acc = x;
    while (true) {
        const LinkDiagram* pick = nullptr;
        for (auto& [g, c] : acc.terms())
            if (g.n_free > 0 && (!pick || g.n_free > pick->n_free)) pick = &g;
        if (!pick) break;
        ReduceStep step;
        if (!reduce_step(*pick, space, order, step))
            throw std::runtime_error("stu_reduce: no usable STU resolution");
        apply_step(acc, step);
        r.steps.push_back(std::move(step));
    }
    r.result = acc;
    return r;
}

Reduction stu_reduce(const LinkDiagram& g, Space space, ReduceOrder order) {
    if (defect(g) != 0) throw std::invalid_argument("stu_reduce: non-zero defect input");
    return stu_reduce(DiagramSum::of(g), space, order);
}

bool check_certificate(const DiagramSum& input, const Reduction& r, Space space) {
    DiagramSum acc = input;
    for (const auto& step : r.steps) {
        if (acc.coeff(step.diagram) == 0) return false;
        int edge = -1;
        for (int i = 0; i < static_cast<int>(step.diagram.edges.size()); ++i) {
            const Edge& e = step.diagram.edges[i];
            if (e.kind == EdgeKind::mixed && std::min(e.a, e.b) == step.seg_vertex &&
                std::max(e.a, e.b) == step.free_vertex)
                edge = i;
        }
        if (edge < 0) return false;
        NormalizedDiagram n = contract(step.diagram, {false, edge, -1, -1});
        if (n.sign == 0 || n.canonical != step.contracted) return false;
        if (!(blowup(n.canonical, space).gen == step.generator)) return false;
        if (step.generator.coeff(step.diagram) == 0) return false;
        apply_step(acc, step);
    }
    for (auto& [g, c] : acc.terms())
        if (g.n_free > 0) return false;
    return acc == r.result;
}

// ---- chord side ---------------------------------------------------------------

std::vector<LinkDiagram> chord_basis(int m, Parity parity, int k, Space space) {
    std::vector<LinkDiagram> out;
    for (auto& g : enumerate(m, parity, 0, k, space))
        if (g.n_free == 0) out.push_back(g);
    return out;
}

std::vector<DiagramSum> chord_relations(int m, Parity parity, int k, Space space) {
    std::vector<DiagramSum> out;
    for (const auto& y : enumerate(m, parity, 0, k, space)) {
        if (y.n_free != 1) continue;
        std::vector<DiagramSum> expansions;
        for (int i = 0; i < static_cast<int>(y.edges.size()); ++i) {
            if (y.edges[i].kind != EdgeKind::mixed) continue;
            NormalizedDiagram n = contract(y, {false, i, -1, -1});
            if (n.sign == 0) continue;
            DiagramSum gen = blowup(n.canonical, space).gen;
            Q cs = gen.coeff(y);
            if (cs == 0) continue;
            DiagramSum rest = gen - DiagramSum::of(y) * cs;
            expansions.push_back(rest * Q(-1 / cs));
        }
        for (std::size_t a = 1; a < expansions.size(); ++a) {
            DiagramSum rel = expansions[0] - expansions[a];
            if (!rel.empty()) out.push_back(rel);
        }
    }
    // generators that only involve chord diagrams (1T, and the homotopy
    // relations whose free-vertex term left the subcomplex)
    for (const auto& r : relation_generators(m, parity, k, space).relations) {
        bool chords_only = true;
        for (auto& [g, c] : r.gen.terms())
            if (g.n_free > 0) chords_only = false;
        if (chords_only && !r.gen.empty()) out.push_back(r.gen);
    }
    return out;
}

int chord_orientation_sign(const LinkDiagram& g) {
    std::vector<int> seq;
    for (const auto& e : g.edges) {
        if (e.kind != EdgeKind::chord) throw std::invalid_argument("chord_orientation_sign: chord diagram required");
        seq.push_back(e.a);
        seq.push_back(e.b);
    }
    int inv = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[j] < seq[i]) ++inv;
    return inv % 2 ? -1 : 1;
}

CohomologyReport cohomology(int m, Parity parity, int k, Space space) {
    CohomologyReport rep;
    Basis b0(enumerate(m, parity, 0, k, space));
    Basis b1(enumerate(m, parity, 1, k, space));
    rep.n0 = static_cast<int>(b0.diagrams.size());
    rep.n1 = static_cast<int>(b1.diagrams.size());

    auto rows = delta_rows(b0, b1);
    Echelon ed(rep.n0, sparsest_first(rows, rep.n0));
    for (auto& r : rows) ed.insert(r);
    rep.rank_delta = ed.rank();
    for (auto& v : ed.nullspace()) rep.kernel.push_back(sum_of(v, b0, m, parity));
    rep.dim_kernel = rep.n0 - rep.rank_delta;

    std::vector<SparseRow> gen_rows, stu_rows, ihx_rows;
    for (const auto& d : b1.diagrams) {
        Relation r = blowup(d, space);
        SparseRow row = row_of(r.gen, b0);
        if (!(r.gen == dual_generator(d, b0.diagrams))) rep.dual_oracle_agrees = false;
        for (const auto& kv : rep.kernel)
            if (pairing(kv, r.gen) != 0) rep.kernel_orthogonal = false;
        gen_rows.push_back(row);
        if (r.tag == RelationTag::STU || r.tag == RelationTag::H1T) stu_rows.push_back(row);
        if (r.tag == RelationTag::IHX) ihx_rows.push_back(row);
    }
    rep.rank_generators = rank_of(gen_rows, rep.n0);
    rep.dim_quotient = rep.n0 - rep.rank_generators;
    rep.rank_stu = rank_of(stu_rows, rep.n0);
    std::vector<SparseRow> both = stu_rows;
    both.insert(both.end(), ihx_rows.begin(), ihx_rows.end());
    rep.rank_stu_ihx = rank_of(both, rep.n0);

    Basis bc(chord_basis(m, parity, k, space));
    rep.n_chord = static_cast<int>(bc.diagrams.size());
    std::vector<SparseRow> crow;
    for (auto& rel : chord_relations(m, parity, k, space)) crow.push_back(row_of(rel, bc));
    rep.rank_chord_relations = rank_of(crow, rep.n_chord);
    rep.dim_chord_quotient = rep.n_chord - rep.rank_chord_relations;
    return rep;
}

}  // namespace holink
