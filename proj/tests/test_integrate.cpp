#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "holink/algebra.hpp"
#include "holink/integrate.hpp"

using namespace holink;

namespace {

IntegrateOptions quick(std::uint64_t samples = 200000, std::uint64_t seed = 7) {
    IntegrateOptions o;
    o.samples = samples;
    o.seed = seed;
    o.workers = 1;
    return o;
}

LinkDiagram permute_free(const LinkDiagram& g, const std::vector<int>& perm) {
    LinkDiagram h = g;
    const int S = g.n_seg();
    for (auto& e : h.edges) {
        if (e.a >= S) e.a = S + perm[e.a - S];
        if (e.b >= S) e.b = S + perm[e.b - S];
    }
    return h;
}

int perm_sign(std::vector<int> p) {
    int s = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        while (p[i] != static_cast<int>(i)) {
            std::swap(p[i], p[p[i]]);
            s = -s;
        }
    return s;
}

// two free vertices, each joined to the other and to two segments
LinkDiagram h_diagram() {
    DiagramBuilder b(3, Parity::odd);
    int x = b.seg(1), y = b.seg(2), z = b.seg(3), w = b.seg(1);
    int p = b.free_vertex(), q = b.free_vertex();
    b.edge(x, p).edge(y, p).edge(p, q).edge(q, z).edge(w, q);
    return b.build();
}

LinkDiagram two_chord() {
    DiagramBuilder b(3, Parity::odd);
    int x1 = b.seg(1), x2 = b.seg(1), y = b.seg(2), z = b.seg(3);
    b.edge(x1, y).edge(x2, z);
    return b.build();
}

}  // namespace

TEST_CASE("direction") {
    auto d = direction(Vec3(0, 0, 0), Vec3(0, 0, 2));
    REQUIRE(d.has_value());
    CHECK((*d - Vec3(0, 0, 1)).norm() < 1e-15);
    CHECK_FALSE(direction(Vec3(1, 2, 3), Vec3(1, 2, 3)).has_value());
}

TEST_CASE("chord integrand equals the Gauss kernel") {
    const LinkDiagram g = chord_diagram(2, Parity::odd, 1, 2);
    StringLink L = random_clasp_link(2, 3).first;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-13, 13);
    for (int trial = 0; trial < 200; ++trial) {
        FiberPoint c;
        c.params = {u(rng), u(rng)};
        const Vec3 x = L.eval(0, c.params[0]), y = L.eval(1, c.params[1]);
        const Vec3 dx = L.derivative(0, c.params[0]), dy = L.derivative(1, c.params[1]);
        const double r = (x - y).norm();
        const double kernel = dx.cross(dy).dot(x - y) / (4 * std::numbers::pi * r * r * r);
        auto v = integrand(g, L, c);
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(kernel).epsilon(1e-9).scale(1e-12));
    }
}

TEST_CASE("chords between unlinked strands integrate to zero") {
    StringLink L = trivial_link(2);
    MCEstimate e = mc_integrate(chord_diagram(2, Parity::odd, 1, 2), L, quick(20000));
    CHECK(std::abs(e.value) < 1e-12);
    // the trivial link lies in a plane, so the kernel vanishes pointwise
    FiberPoint c;
    c.params = {-1.0, 2.0};
    CHECK(*integrand(chord_diagram(2, Parity::odd, 1, 2), L, c) == doctest::Approx(0.0).scale(1e-15));
}

TEST_CASE("integrand under relabeling and edge flips") {
    const LinkDiagram g = h_diagram();
    REQUIRE(validate(g).empty());
    REQUIRE(defect(g) == 0);
    StringLink L = random_clasp_link(3, 5).first;
    FiberSampler sampler(g, L, quick());
    const std::vector<int> swap{1, 0};
    const LinkDiagram h = permute_free(g, swap);
    LinkDiagram flipped = g;
    std::swap(flipped.edges[2].a, flipped.edges[2].b);
    int compared = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        FiberPoint c;
        sampler.sample(3, i, c);
        auto v = integrand(g, L, c);
        if (!v) continue;
        FiberPoint cp = c;
        cp.free_points = {c.free_points[1], c.free_points[0]};
        auto vp = integrand(h, L, cp);
        auto vf = integrand(flipped, L, c);
        REQUIRE(vp.has_value());
        REQUIRE(vf.has_value());
        CHECK(*vp == doctest::Approx(perm_sign(swap) * *v).epsilon(1e-9).scale(1e-12));
        CHECK(*vf == doctest::Approx(-*v).epsilon(1e-9).scale(1e-12));
        ++compared;
    }
    CHECK(compared > 90);
}

TEST_CASE("estimates respect relabeling and edge flips exactly") {
    const LinkDiagram t = tripod(3, Parity::odd);
    StringLink L = random_clasp_link(3, 2).first;
    const MCEstimate base = mc_integrate(t, L, quick(20000));
    LinkDiagram flipped = t;
    std::swap(flipped.edges[0].a, flipped.edges[0].b);
    CHECK(mc_integrate(flipped, L, quick(20000)).value == -base.value);

    const LinkDiagram g = h_diagram();
    const MCEstimate eg = mc_integrate(g, L, quick(20000));
    const MCEstimate eh = mc_integrate(permute_free(g, {1, 0}), L, quick(20000));
    CHECK(eh.value == -eg.value);
    CHECK(eh.std_error == eg.std_error);
}

TEST_CASE("results do not depend on the worker count") {
    StringLink L = random_clasp_link(2, 1).first;
    const LinkDiagram g = chord_diagram(2, Parity::odd, 1, 2);
    IntegrateOptions a = quick(30000), b = quick(30000);
    b.workers = 3;
    MCEstimate ea = mc_integrate(g, L, a), eb = mc_integrate(g, L, b);
    CHECK(ea.value == eb.value);
    CHECK(ea.std_error == eb.std_error);
    CHECK(ea.rejected == eb.rejected);
    CHECK(report(ea) == report(eb));
}

TEST_CASE("clasp linking number from the integral") {
    StringLink L = clasp_link(2, {{0, 1, 1}});
    MCEstimate e = mc_integrate(chord_diagram(2, Parity::odd, 1, 2), L, quick());
    CHECK(e.samples == 200000);
    CHECK(std::abs(e.value - 1.0) < 4 * e.std_error);
    CHECK(e.std_error < 0.05);
}

TEST_CASE("cocycle input checks") {
    StringLink L = trivial_link(3);
    DiagramSum w = DiagramSum::of(normalize(tripod(3, Parity::odd)).canonical);
    CHECK_THROWS_WITH(universal_invariant(w, L, quick(1000), Space::LD), "anomalous correction required");
    CHECK_THROWS(mc_integrate(chord_diagram(2, Parity::odd, 1, 2), L, quick(1000)));
    CHECK_THROWS(mc_integrate(tripod(3, Parity::even), L, quick(1000)));
}

TEST_CASE("refining the polyline does not move the estimate") {
    FingerOptions coarse, fine;
    fine.link.n_points = 9601;
    StringLink a = clasp_link(2, {{0, 1, -1}}, coarse), b = clasp_link(2, {{0, 1, -1}}, fine);
    const LinkDiagram g = chord_diagram(2, Parity::odd, 1, 2);
    MCEstimate ea = mc_integrate(g, a, quick()), eb = mc_integrate(g, b, quick(200000, 8));
    CHECK(std::abs(ea.value - eb.value) < 4 * std::hypot(ea.std_error, eb.std_error));
}

TEST_CASE("an order-one integral vanishes on a doubly singular link") {
    SingularLink H = build_singular_link(two_chord());
    std::vector<StringLink> res;
    std::vector<double> coeffs;
    for (int S = 0; S < 4; ++S) {
        res.push_back(resolve(H, {bool(S & 1), bool(S & 2)}));
        coeffs.push_back(std::popcount(static_cast<unsigned>(S)) % 2 ? -1.0 : 1.0);
    }
    std::vector<const StringLink*> links;
    for (const auto& L : res) links.push_back(&L);
    for (auto [i, j] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
        MCEstimate e = mc_combination(chord_diagram(3, Parity::odd, i, j), links, coeffs, quick());
        CHECK(std::abs(e.value) < 4 * e.std_error + 1e-12);
    }
}
