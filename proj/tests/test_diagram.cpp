#include <doctest.h>

#include <algorithm>
#include <random>

#include "holink/diagram.hpp"
#include "holink/verify.hpp"

using namespace holink;

namespace {

bool has_message(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

LinkDiagram theta() {
    DiagramBuilder b(2, Parity::odd);
    int a = b.seg(1), c = b.seg(2), u = b.free_vertex(), v = b.free_vertex();
    b.edge(a, u).edge(a, v).edge(u, c).edge(v, c).edge(u, v);
    return b.build();
}

// Permutes free vertex ids, carrying orientations along unchanged.
LinkDiagram permute_free(const LinkDiagram& g, const std::vector<int>& perm) {
    LinkDiagram h = g;
    const int S = g.n_seg();
    for (auto& e : h.edges) {
        if (e.a >= S) e.a = S + perm[e.a - S];
        if (e.b >= S) e.b = S + perm[e.b - S];
    }
    return h;
}

int perm_parity_sign(std::vector<int> p) {
    int s = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        while (p[i] != static_cast<int>(i)) {
            std::swap(p[i], p[p[i]]);
            s = -s;
        }
    return s;
}

}  // namespace

TEST_CASE("validate accepts the tripod and names broken rules") {
    CHECK(validate(tripod(3, Parity::odd)).empty());

    DiagramBuilder b(2, Parity::odd);
    int x = b.seg(1), y = b.seg(2), u = b.free_vertex();
    b.edge(x, u).edge(y, u);
    CHECK(has_message(validate(b.build()), "free vertex valence < 3"));

    LinkDiagram iso(1, Parity::odd);
    iso.n_free = 4;
    iso.edges = {{EdgeKind::free, 0, 1}, {EdgeKind::free, 0, 2}, {EdgeKind::free, 0, 3},
                 {EdgeKind::free, 1, 2}, {EdgeKind::free, 2, 3}, {EdgeKind::free, 1, 3}};
    CHECK(has_message(validate(iso), "free vertex has no path to segment vertex"));
}

TEST_CASE("defect and order") {
    auto c = chord_diagram(2, Parity::odd, 1, 2);
    CHECK(defect(c) == 0);
    CHECK(order(c) == 1);
    auto t = tripod(3, Parity::odd);
    CHECK(defect(t) == 0);
    CHECK(order(t) == 2);
    CHECK(main_degree(t, 3) == 0);
    CHECK(main_degree(t, 4) == 2);

    // a 4-valent free vertex, everything else trivalent
    DiagramBuilder b(4, Parity::odd);
    int u = b.free_vertex();
    for (int s = 1; s <= 4; ++s) b.edge(b.seg(s), u);
    CHECK(validate(b.build()).empty());
    CHECK(defect(b.build()) == 1);
}

TEST_CASE("normalize: double edges, orientation flips, idempotence") {
    LinkDiagram g = theta();
    auto n1 = normalize(g);
    CHECK(n1.sign != 0);
    auto n2 = normalize(n1.canonical);
    CHECK(n2.sign == 1);
    CHECK(n2.canonical == n1.canonical);

    LinkDiagram flipped = n1.canonical;
    std::swap(flipped.edges[0].a, flipped.edges[0].b);
    auto nf = normalize(flipped);
    CHECK(nf.canonical == n1.canonical);
    CHECK(nf.sign == -1);

    DiagramBuilder b(2, Parity::odd);
    int x = b.seg(1), y = b.seg(2), u = b.free_vertex(), v = b.free_vertex();
    b.edge(x, u).edge(y, v).edge(u, v).edge(u, v).edge(u, v);
    CHECK(normalize(b.build()).sign == 0);
}

TEST_CASE("normalize is sign-multiplicative under free relabelings") {
    LinkDiagram g = theta();
    const int base = normalize(g).sign;
    std::vector<int> swap{1, 0};
    LinkDiagram h = permute_free(g, swap);
    auto nh = normalize(h);
    CHECK(nh.canonical == normalize(g).canonical);
    CHECK(nh.sign * base == perm_parity_sign(swap));

    // random relabelings of a diagram with three free vertices
    DiagramBuilder b(3, Parity::odd);
    int x = b.seg(1), y = b.seg(2), z = b.seg(3), w = b.seg(1);
    int p = b.free_vertex(), q = b.free_vertex(), r = b.free_vertex();
    b.edge(x, p).edge(y, p).edge(p, q).edge(q, z).edge(q, r).edge(r, w).edge(r, b.seg(2));
    LinkDiagram big = b.build();
    REQUIRE(validate(big).empty());
    const auto nb = normalize(big);
    std::mt19937 rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<int> perm{0, 1, 2};
        std::shuffle(perm.begin(), perm.end(), rng);
        auto np = normalize(permute_free(big, perm));
        CHECK(np.canonical == nb.canonical);
        CHECK(np.sign == nb.sign * perm_parity_sign(perm));
        auto iso = is_isomorphic(big, permute_free(big, perm));
        REQUIRE(iso.has_value());
        CHECK(*iso == perm_parity_sign(perm));
        CHECK(is_homotopy_diagram(permute_free(big, perm)) == is_homotopy_diagram(big));
    }
}

TEST_CASE("is_isomorphic") {
    auto t = tripod(3, Parity::odd);
    CHECK(is_isomorphic(t, t) == 1);
    CHECK_FALSE(is_isomorphic(chord_diagram(3, Parity::odd, 1, 2), t).has_value());
    CHECK_THROWS(is_isomorphic(t, tripod(3, Parity::even)));
}

TEST_CASE("aut_order") {
    CHECK(aut_order(tripod(3, Parity::odd)) == 1);
    CHECK(aut_order(theta()) == 2);
    CHECK(aut_order(chord_diagram(2, Parity::odd, 1, 2)) == 1);
}

TEST_CASE("grafts") {
    DiagramBuilder b(3, Parity::odd);
    int x1 = b.seg(1), x2 = b.seg(1), y = b.seg(2), z = b.seg(3);
    b.edge(x1, y).edge(x2, z);
    auto gs = grafts(b.build());
    REQUIRE(gs.size() == 2);
    for (const auto& g : gs) {
        CHECK(g.edges.size() == 1);
        CHECK(g.vertices.size() == 2);
        CHECK(g.free_count == 0);
    }
    auto t = grafts(tripod(3, Parity::odd));
    REQUIRE(t.size() == 1);
    CHECK(t[0].free_count == 1);
    CHECK(t[0].per_segment_counts == std::vector<int>{1, 1, 1});

    // a segment vertex with two edges is split in the hybrid
    DiagramBuilder c(3, Parity::odd);
    int v = c.seg(1), yy = c.seg(2), zz = c.seg(3);
    c.edge(v, yy).edge(v, zz);
    CHECK(grafts(c.build()).size() == 2);
}

TEST_CASE("the worked graft example") {
    const LinkDiagram g = five_graft_example();
    CHECK(validate(g).empty());
    CHECK(defect(g) == 0);
    CHECK(is_homotopy_diagram(g));
    CHECK(grafts(g).size() == 5);
}

TEST_CASE("is_homotopy_diagram") {
    CHECK_FALSE(is_homotopy_diagram(chord_diagram(1, Parity::odd, 1, 1)));
    CHECK(is_homotopy_diagram(tripod(3, Parity::odd)));
    DiagramBuilder b(2, Parity::odd);
    int x1 = b.seg(1), x2 = b.seg(1), y = b.seg(2), u = b.free_vertex();
    b.edge(x1, u).edge(x2, u).edge(y, u);
    CHECK_FALSE(is_homotopy_diagram(b.build()));
}

TEST_CASE("enumerate examples") {
    auto hd = enumerate(2, Parity::odd, 0, 1, Space::HD);
    REQUIRE(hd.size() == 1);
    CHECK(hd[0] == normalize(chord_diagram(2, Parity::odd, 1, 2)).canonical);
    for (Parity p : {Parity::odd, Parity::even}) {
        for (int k = 1; k <= 3; ++k) CHECK(enumerate(1, p, 0, k, Space::HD).empty());
        // with defect 1 only K4 with one leg to the strand survives
        CHECK(enumerate(1, p, 1, 2, Space::HD).empty());
        auto k4 = enumerate(1, p, 1, 3, Space::HD);
        REQUIRE(k4.size() == 1);
        CHECK(k4[0].n_free == 4);
        CHECK(k4[0].edges.size() == 7);
    }
    auto empty = enumerate(2, Parity::odd, 0, 0, Space::LD);
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].edges.empty());
}

TEST_CASE("enumerate agrees with hand counts of chord diagrams at order 1") {
    // one chord on m segments: m(m-1)/2 between segments, m within a segment
    for (int m = 1; m <= 4; ++m) {
        CHECK(enumerate(m, Parity::odd, 0, 1, Space::HD).size() == static_cast<std::size_t>(m * (m - 1) / 2));
        CHECK(enumerate(m, Parity::odd, 0, 1, Space::LD).size() == static_cast<std::size_t>(m * (m - 1) / 2 + m));
    }
}

TEST_CASE("enumerated corpus: canonical, valid, duplicate free, nonnegative defect") {
    for (Parity p : {Parity::odd, Parity::even})
        for (int d = 0; d <= 1; ++d) {
            auto list = enumerate(3, p, d, 2, Space::LD);
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto& g = list[i];
                CHECK(validate(g).empty());
                CHECK(defect(g) == d);
                CHECK(order(g) == 2);
                auto n = normalize(g);
                CHECK(n.sign == 1);
                CHECK(n.canonical == g);
                if (d == 0) {
                    for (int v = 0; v < g.n_seg(); ++v) {
                        int deg = 0;
                        for (const auto& e : g.edges) deg += (e.a == v) + (e.b == v);
                        CHECK(deg == 1);
                    }
                }
                for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(list[j] == g);
            }
        }
}

TEST_CASE("grafts partition edges; HD grafts have at most one vertex per segment") {
    for (int m = 2; m <= 3; ++m)
        for (int k = 1; k <= 3; ++k)
            for (const auto& g : enumerate(m, Parity::odd, 0, k, Space::HD)) {
                std::vector<int> seen(g.edges.size(), 0);
                std::vector<int> covered(g.n_vertices(), 0);
                for (const auto& gr : grafts(g)) {
                    for (int c : gr.per_segment_counts) CHECK(c <= 1);
                    for (int e : gr.edges) ++seen[e];
                    for (int v : gr.vertices) covered[v] = 1;
                }
                for (int s : seen) CHECK(s == 1);
                for (int c : covered) CHECK(c == 1);
            }
}

TEST_CASE("diagram text round trip and parse diagnostics") {
    for (const auto& g : enumerate(3, Parity::even, 1, 2, Space::LD)) {
        auto text = to_text(g);
        CHECK(to_text(parse_diagram(text)) == text);
    }
    auto g = parse_diagram(
        "diagram v1 { m=3 parity=odd seg=[[a],[b],[c]] free=[u] edges=[mixed(a,u,a->u), mixed(b,u,b->u), "
        "mixed(c,u,c->u)] }");
    CHECK(is_isomorphic(g, tripod(3, Parity::odd)).has_value());
    try {
        parse_diagram("diagram v1 { m=2 parity=odd seg=[[a],[b]] free=[] edges=[chord(a,q,a->q)] }");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.column > 1);
    }
}
