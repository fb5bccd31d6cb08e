#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "holink/diagram.hpp"

namespace holink {

using Vec3 = Eigen::Vector3d;

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinkOptions {
    double t0 = 10.0;
    double t1 = 12.0;
    int n_points = 4801;  // grid points per strand on [-t1, t1]
};

// m polyline strands sampled at uniformly spaced parameters on [-t1, t1].
// Outside that interval strand i (0-based) follows the ray
// t -> (t, |t| ((m+1)/2 - (i+1)), 0).
struct StringLink {
    int m = 1;
    double t0 = 10.0;
    double t1 = 12.0;
    std::vector<std::vector<Vec3>> strands;

    int n_points() const { return strands.empty() ? 0 : static_cast<int>(strands[0].size()); }
    double spacing() const { return 2.0 * t1 / (n_points() - 1); }
    double param(int k) const { return -t1 + k * spacing(); }

    Vec3 ray(int i, double t) const;
    Vec3 eval(int i, double t) const;
    // d/dt of the parameterization (left limit at grid points).
    Vec3 derivative(int i, double t) const;
    Vec3 tangent(int i, double t) const { return derivative(i, t).normalized(); }
};

StringLink trivial_link(int m, const LinkOptions& opt = {});

// Violations of the ray conditions and of strand disjointness; with
// `embedded` each strand must also be free of self-intersections.
std::vector<std::string> validate_link(const StringLink& L, bool embedded = false, double tol = 1e-9);
double min_strand_distance(const StringLink& L, int i, int j);
// Smallest distance between non-adjacent segments of one strand.
double min_self_distance(const StringLink& L, int i);

// Linking number from crossings in a projection along `dir`; nullopt if the
// projection is not generic for the pair.
std::optional<int> crossing_linking_along(const StringLink& L, int i, int j, const Vec3& dir);
// Tries random directions near the z axis until a generic one is found.
int signed_crossing_linking(const StringLink& L, int i, int j, std::uint64_t seed = 1);

// Swaps over/under inside a ball containing exactly two sub-arcs of strand i
// and nothing of the other strands.
StringLink crossing_change(const StringLink& L, int i, const Vec3& center, double radius);
// Same reflection without the single-strand requirement: the ball must meet
// exactly two sub-arcs in total (possibly of different strands).
StringLink swap_crossing(const StringLink& L, const Vec3& center, double radius);

struct DoublePoint {
    int strand_i = 0;  // the strand that is pushed over or under
    double t_i = 0;
    int strand_j = 0;
    double t_j = 0;
    Vec3 point = Vec3::Zero();
    double radius = 0.1;
};

struct SingularLink {
    StringLink link;
    std::vector<DoublePoint> doubles;
};

struct FingerSpec {
    int from = 0;        // strand carrying the finger
    int to = 1;          // strand met at the double point (to == from: self finger)
    double from_x = 0;   // slot on `from`
    double to_x = 0;     // x coordinate of the double point on `to`
    int side = -1;       // -1: finger runs below the other strands, +1 above
};

struct FingerOptions {
    LinkOptions link;
    double radius = 0.1;
};

SingularLink build_fingers(int m, const std::vector<FingerSpec>& fingers, const FingerOptions& opt = {});
// The almost-planar singular link realizing a homotopy chord diagram; double
// point c corresponds to edge c of g.
SingularLink build_singular_link(const LinkDiagram& g, const FingerOptions& opt = {});
// positive[c] resolves double point c with strand_i over strand_j.
StringLink resolve(const SingularLink& H, const std::vector<bool>& positive, double perturbation = 0.05);

// A link whose strands 0 and the other strands clasp through fingers;
// lk(from, to) changes by sign for each clasp.
struct Clasp {
    int from = 0;
    int to = 1;
    int sign = 1;
};
StringLink clasp_link(int m, const std::vector<Clasp>& clasps, const FingerOptions& opt = {},
                      double perturbation = 0.15);
// Random clasp link on m strands: returns the link and the expected lk(0,1).
std::pair<StringLink, int> random_clasp_link(int m, std::uint64_t seed, const FingerOptions& opt = {});

// Text format.
std::string to_text(const StringLink& L);
StringLink parse_link(const std::string& text);
std::string to_text(const SingularLink& H);
SingularLink parse_singular_link(const std::string& text);

}  // namespace holink
