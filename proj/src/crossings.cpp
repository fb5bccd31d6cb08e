#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "geom_util.hpp"
#include "holink/linkgeom.hpp"

namespace holink {

namespace {

constexpr double kMargin = 1e-6;
constexpr double kFar = 1e3;

struct Seg {
    Vec3 p, q;
};

// Strand polyline plus the two rays truncated far away.
std::vector<Seg> strand_segments(const StringLink& L, int i, std::vector<Seg>& rays) {
    const auto& P = L.strands[i];
    std::vector<Seg> out;
    out.reserve(P.size());
    for (std::size_t k = 0; k + 1 < P.size(); ++k) out.push_back({P[k], P[k + 1]});
    rays.push_back({L.ray(i, -kFar), P.front()});
    rays.push_back({P.back(), L.ray(i, kFar)});
    return out;
}

struct Frame {
    Vec3 d, u, v;
    explicit Frame(const Vec3& dir) : d(dir.normalized()) {
        Vec3 a = std::abs(d.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
        u = d.cross(a).normalized();
        v = d.cross(u);
    }
};

enum class Hit { none, crossing, degenerate };

// Projected intersection of two segments; sign of the crossing if any.
Hit cross(const Frame& f, const Seg& a, const Seg& b, int& sign) {
    const double ax = a.p.dot(f.u), ay = a.p.dot(f.v), bx = a.q.dot(f.u), by = a.q.dot(f.v);
    const double cx = b.p.dot(f.u), cy = b.p.dot(f.v), dx = b.q.dot(f.u), dy = b.q.dot(f.v);
    const double rx = bx - ax, ry = by - ay, sx = dx - cx, sy = dy - cy;
    const double den = rx * sy - ry * sx;
    const double la = std::hypot(rx, ry), lb = std::hypot(sx, sy);
    const double qx = cx - ax, qy = cy - ay;
    if (std::abs(den) <= kMargin * la * lb) {
        // parallel in projection: degenerate only if the lines nearly overlap
        double dist = std::abs(qx * ry - qy * rx) / std::max(la, 1e-300);
        if (dist > kMargin * std::max(1.0, la)) return Hit::none;
        double t0 = (qx * rx + qy * ry) / (la * la), t1 = ((dx - ax) * rx + (dy - ay) * ry) / (la * la);
        if (std::max(t0, t1) < -kMargin || std::min(t0, t1) > 1 + kMargin) return Hit::none;
        return Hit::degenerate;
    }
    const double s = (qx * sy - qy * sx) / den;  // along a
    const double t = (qx * ry - qy * rx) / den;  // along b
    if (s < -kMargin || s > 1 + kMargin || t < -kMargin || t > 1 + kMargin) return Hit::none;
    if (s < kMargin || s > 1 - kMargin || t < kMargin || t > 1 - kMargin) return Hit::degenerate;
    const Vec3 pa = a.p + s * (a.q - a.p), pb = b.p + t * (b.q - b.p);
    const double ha = pa.dot(f.d), hb = pb.dot(f.d);
    if (std::abs(ha - hb) < kMargin) return Hit::degenerate;  // the strands meet
    const Vec3 ta = a.q - a.p, tb = b.q - b.p;
    const double s3 = ha > hb ? ta.cross(tb).dot(f.d) : tb.cross(ta).dot(f.d);
    sign = s3 > 0 ? 1 : -1;
    return Hit::crossing;
}

struct Key2 {
    long x, y;
    bool operator==(const Key2&) const = default;
};
struct Key2Hash {
    std::size_t operator()(const Key2& k) const { return std::hash<long>()(k.x * 73856093L ^ k.y * 19349663L); }
};

}  // namespace

std::optional<int> crossing_linking_along(const StringLink& L, int i, int j, const Vec3& dir) {
    if (i == j) throw std::invalid_argument("linking number needs two distinct strands");
    const Frame f(dir);
    std::vector<Seg> rays_i, rays_j;
    auto A = strand_segments(L, i, rays_i);
    auto B = strand_segments(L, j, rays_j);

    const double cell = 0.25;
    std::unordered_map<Key2, std::vector<int>, Key2Hash> grid;
    auto key = [&](double x, double y) {
        return Key2{static_cast<long>(std::floor(x / cell)), static_cast<long>(std::floor(y / cell))};
    };
    auto box = [&](const Seg& s) {
        double x0 = s.p.dot(f.u), y0 = s.p.dot(f.v), x1 = s.q.dot(f.u), y1 = s.q.dot(f.v);
        return std::pair{key(std::min(x0, x1) - kMargin, std::min(y0, y1) - kMargin),
                         key(std::max(x0, x1) + kMargin, std::max(y0, y1) + kMargin)};
    };
    for (int b = 0; b < static_cast<int>(B.size()); ++b) {
        auto [lo, hi] = box(B[b]);
        for (long x = lo.x; x <= hi.x; ++x)
            for (long y = lo.y; y <= hi.y; ++y) grid[{x, y}].push_back(b);
    }
    int total = 0;
    std::vector<int> seen(B.size(), -1);
    for (int a = 0; a < static_cast<int>(A.size()); ++a) {
        auto [lo, hi] = box(A[a]);
        for (long x = lo.x; x <= hi.x; ++x)
            for (long y = lo.y; y <= hi.y; ++y) {
                auto it = grid.find({x, y});
                if (it == grid.end()) continue;
                for (int b : it->second) {
                    if (seen[b] == a) continue;
                    seen[b] = a;
                    int s = 0;
                    Hit h = cross(f, A[a], B[b], s);
                    if (h == Hit::degenerate) return std::nullopt;
                    if (h == Hit::crossing) total += s;
                }
            }
    }
    // the far rays are few; test them against everything directly
    auto brute = [&](const std::vector<Seg>& X, const std::vector<Seg>& Y, bool flip) -> bool {
        for (auto& x : X)
            for (auto& y : Y) {
                int s = 0;
                Hit h = flip ? cross(f, y, x, s) : cross(f, x, y, s);
                if (h == Hit::degenerate) return false;
                if (h == Hit::crossing) total += s;
            }
        return true;
    };
    if (!brute(rays_i, B, false) || !brute(A, rays_j, false) || !brute(rays_i, rays_j, false)) return std::nullopt;
    if (total % 2 != 0) return std::nullopt;
    return total / 2;
}

int signed_crossing_linking(const StringLink& L, int i, int j, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double cmin = std::cos(30.0 * M_PI / 180.0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        double u1 = (rng() >> 11) * 0x1.0p-53, u2 = (rng() >> 11) * 0x1.0p-53;
        double c = cmin + (1.0 - cmin) * u1, s = std::sqrt(std::max(0.0, 1.0 - c * c));
        Vec3 dir(s * std::cos(2 * M_PI * u2), s * std::sin(2 * M_PI * u2), c);
        if (auto r = crossing_linking_along(L, i, j, dir)) return *r;
    }
    throw GeometryError("no generic projection direction found after 100 attempts");
}

// ---- crossing changes --------------------------------------------------------

namespace {

// Maximal runs of consecutive segments of strand i meeting the ball.
std::vector<std::pair<int, int>> runs_in_ball(const StringLink& L, int i, const Vec3& c, double r) {
    std::vector<std::pair<int, int>> out;
    const auto& P = L.strands[i];
    int start = -1;
    for (int k = 0; k + 1 < static_cast<int>(P.size()); ++k) {
        bool in = detail::point_segment_distance(c, P[k], P[k + 1]) < r;
        if (in && start < 0) start = k;
        if (!in && start >= 0) {
            out.emplace_back(start, k - 1);
            start = -1;
        }
    }
    if (start >= 0) out.emplace_back(start, static_cast<int>(P.size()) - 2);
    return out;
}

StringLink reflect_in_ball(const StringLink& L, const std::vector<int>& strands, const Vec3& c, double r) {
    // points in the inner half-ball are reflected; the set is preserved by the
    // reflection, so applying it twice gives back the input
    const double inner = 0.5 * r;
    StringLink out = L;
    for (int i : strands) {
        const auto& P = L.strands[i];
        for (std::size_t k = 0; k < P.size(); ++k) {
            if ((P[k] - c).norm() >= inner) continue;
            for (std::size_t n : {k - 1, k + 1})
                if (n < P.size() && (P[n] - c).norm() >= r)
                    throw GeometryError("crossing ball is too small for the polyline spacing");
            out.strands[i][k].z() = 2.0 * c.z() - P[k].z();
        }
    }
    // the two arcs must stay apart inside the ball
    std::vector<std::pair<int, std::pair<int, int>>> arcs;
    for (int i : strands)
        for (auto run : runs_in_ball(out, i, c, r)) arcs.push_back({i, run});
    if (arcs.size() == 2) {
        auto& [i1, r1] = arcs[0];
        auto& [i2, r2] = arcs[1];
        double best = std::numeric_limits<double>::infinity();
        for (int a = r1.first; a <= r1.second; ++a)
            for (int b = r2.first; b <= r2.second; ++b)
                best = std::min(best, detail::segment_distance(out.strands[i1][a], out.strands[i1][a + 1],
                                                               out.strands[i2][b], out.strands[i2][b + 1]));
        if (best < 1e-12) throw GeometryError("crossing change makes the arcs intersect");
    }
    return out;
}

}  // namespace

StringLink crossing_change(const StringLink& L, int i, const Vec3& center, double radius) {
    if (i < 0 || i >= L.m) throw std::invalid_argument("crossing_change: strand out of range");
    for (int j = 0; j < L.m; ++j) {
        auto runs = runs_in_ball(L, j, center, radius);
        if (j == i && runs.size() != 2)
            throw GeometryError("crossing ball must contain exactly two arcs of strand " + std::to_string(i + 1));
        if (j != i && !runs.empty())
            throw GeometryError("crossing ball meets strand " + std::to_string(j + 1));
    }
    return reflect_in_ball(L, {i}, center, radius);
}

StringLink swap_crossing(const StringLink& L, const Vec3& center, double radius) {
    std::vector<int> involved;
    std::size_t arcs = 0;
    for (int j = 0; j < L.m; ++j) {
        auto runs = runs_in_ball(L, j, center, radius);
        if (!runs.empty()) involved.push_back(j);
        arcs += runs.size();
    }
    if (arcs != 2) throw GeometryError("crossing ball must contain exactly two arcs");
    return reflect_in_ball(L, involved, center, radius);
}

}  // namespace holink
