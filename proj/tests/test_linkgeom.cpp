#include <doctest.h>

#include <cmath>
#include <random>

#include "holink/linkgeom.hpp"

using namespace holink;

namespace {

double max_difference(const StringLink& a, const StringLink& b) {
    double d = 0;
    for (int i = 0; i < a.m; ++i)
        for (std::size_t k = 0; k < a.strands[i].size(); ++k) d = std::max(d, (a.strands[i][k] - b.strands[i][k]).norm());
    return d;
}

LinkDiagram two_chord() {
    DiagramBuilder b(3, Parity::odd);
    int x1 = b.seg(1), x2 = b.seg(1), y = b.seg(2), z = b.seg(3);
    b.edge(x1, y).edge(x2, z);
    return b.build();
}

}  // namespace

TEST_CASE("trivial link evaluation") {
    StringLink one = trivial_link(1);
    CHECK(one.m == 1);
    CHECK((one.eval(0, 3.0) - Vec3(3, -1, 0)).norm() < 1e-12);
    StringLink L = trivial_link(2);
    CHECK((L.eval(0, 0.0) - Vec3(0, -1, 0)).norm() < 1e-12);
    CHECK((L.eval(1, 0.0) - Vec3(0, -2, 0)).norm() < 1e-12);
    // strand i follows t -> (t, |t|((m+1)/2 - (i+1)), 0) beyond t1
    CHECK((L.eval(0, 20.0) - Vec3(20, 10, 0)).norm() < 1e-12);
    CHECK((L.eval(1, -30.0) - Vec3(-30, -15, 0)).norm() < 1e-12);
    CHECK((L.tangent(0, 1.234) - Vec3(1, 0, 0)).norm() < 1e-12);
    CHECK(validate_link(L, true).empty());
    CHECK(signed_crossing_linking(trivial_link(3), 0, 2) == 0);
}

TEST_CASE("clasps have linking number plus or minus one") {
    StringLink pos = clasp_link(2, {{0, 1, 1}});
    StringLink neg = clasp_link(2, {{0, 1, -1}});
    CHECK(validate_link(pos, true).empty());
    CHECK(signed_crossing_linking(pos, 0, 1) == 1);
    CHECK(signed_crossing_linking(neg, 0, 1) == -1);
    StringLink L = clasp_link(3, {{0, 1, 1}, {0, 1, 1}, {0, 2, -1}});
    CHECK(signed_crossing_linking(L, 0, 1) == 2);
    CHECK(signed_crossing_linking(L, 0, 2) == -1);
    CHECK(signed_crossing_linking(L, 1, 2) == 0);
}

TEST_CASE("crossing linking number: direction invariance and symmetry") {
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto [L, expected] = random_clasp_link(3, seed);
        CHECK(validate_link(L, true).empty());
        const int lk = signed_crossing_linking(L, 0, 1);
        CHECK(lk == expected);
        CHECK(signed_crossing_linking(L, 1, 0) == lk);
        int generic = 0;
        for (int trial = 0; trial < 5; ++trial) {
            std::normal_distribution<double> n;
            Vec3 dir(0.3 * n(rng), 0.3 * n(rng), 1.0);
            if (auto v = crossing_linking_along(L, 0, 1, dir)) {
                CHECK(*v == lk);
                ++generic;
            }
        }
        CHECK(generic > 0);
    }
}

TEST_CASE("linking numbers do not depend on t0, t1 or the sampling density") {
    FingerOptions a, b;
    b.link.t0 = 8;
    b.link.t1 = 11;
    b.link.n_points = 6601;
    StringLink La = clasp_link(3, {{0, 1, 1}, {0, 2, -1}}, a);
    StringLink Lb = clasp_link(3, {{0, 1, 1}, {0, 2, -1}}, b);
    CHECK(validate_link(Lb, true).empty());
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}})
        CHECK(signed_crossing_linking(La, i, j) == signed_crossing_linking(Lb, i, j));
}

TEST_CASE("crossing change is a local involution preserving linking numbers") {
    SingularLink H = build_fingers(2, {{0, 0, -3, 3, -1}});
    REQUIRE(H.doubles.size() == 1);
    const Vec3 c = H.doubles[0].point;
    StringLink L = resolve(H, {true});
    CHECK(validate_link(L, false).empty());
    StringLink C = crossing_change(L, 0, c, 0.2);
    CHECK(validate_link(C, false).empty());
    CHECK(max_difference(crossing_change(C, 0, c, 0.2), L) == 0.0);
    int moved_far = 0;
    for (int i = 0; i < L.m; ++i)
        for (std::size_t k = 0; k < L.strands[i].size(); ++k)
            if ((L.strands[i][k] - c).norm() > 0.2 && L.strands[i][k] != C.strands[i][k]) ++moved_far;
    CHECK(moved_far == 0);
    CHECK(max_difference(C, L) > 0.0);
    CHECK(signed_crossing_linking(C, 0, 1) == signed_crossing_linking(L, 0, 1));
    // a ball meeting the other strand is refused
    CHECK_THROWS_AS(crossing_change(L, 0, L.eval(1, 0.0), 0.2), GeometryError);
}

TEST_CASE("singular links realizing chord diagrams") {
    SingularLink H = build_singular_link(chord_diagram(2, Parity::odd, 1, 2));
    REQUIRE(H.doubles.size() == 1);
    const auto& d = H.doubles[0];
    CHECK((H.link.eval(d.strand_i, d.t_i) - H.link.eval(d.strand_j, d.t_j)).norm() < 1e-9);
    const int up = signed_crossing_linking(resolve(H, {true}), 0, 1);
    const int down = signed_crossing_linking(resolve(H, {false}), 0, 1);
    CHECK(up - down == 1);

    SingularLink H2 = build_singular_link(two_chord());
    REQUIRE(H2.doubles.size() == 2);
    // the double points follow the chord-endpoint order on strand 1
    CHECK(H2.doubles[0].strand_i == 0);
    CHECK(H2.doubles[1].strand_i == 0);
    CHECK(H2.doubles[0].t_i < H2.doubles[1].t_i);
    CHECK(H2.doubles[0].strand_j == 1);
    CHECK(H2.doubles[1].strand_j == 2);
    for (int S = 0; S < 4; ++S) {
        StringLink L = resolve(H2, {bool(S & 1), bool(S & 2)});
        CHECK(validate_link(L, false).empty());
        CHECK(signed_crossing_linking(L, 0, 1) == (S & 1 ? 1 : 0));
        CHECK(signed_crossing_linking(L, 0, 2) == (S & 2 ? 1 : 0));
        // unchanged away from the crossing balls
        int moved_far = 0;
        for (int i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < L.strands[i].size(); ++k) {
                bool far = true;
                for (const auto& dp : H2.doubles) far = far && (H2.link.strands[i][k] - dp.point).norm() > dp.radius;
                if (far && L.strands[i][k] != H2.link.strands[i][k]) ++moved_far;
            }
        CHECK(moved_far == 0);
    }
    CHECK_THROWS(build_singular_link(chord_diagram(2, Parity::odd, 1, 1)));
}

TEST_CASE("link text round trip") {
    StringLink L = random_clasp_link(2, 4).first;
    const std::string text = to_text(L);
    StringLink back = parse_link(text);
    CHECK(max_difference(back, L) == 0.0);
    CHECK(to_text(back) == text);
    SingularLink H = build_singular_link(two_chord());
    CHECK(to_text(parse_singular_link(to_text(H))) == to_text(H));
    CHECK_THROWS(parse_link("link v1 m=2 t0=10 t1=12\nstrand 1: (0,0,0)\n"));
}
