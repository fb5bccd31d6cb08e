#include "holink/linkgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "geom_util.hpp"

namespace holink {

Vec3 StringLink::ray(int i, double t) const {
    double c = 0.5 * (m + 1) - (i + 1);
    return {t, std::abs(t) * c, 0.0};
}

Vec3 StringLink::eval(int i, double t) const {
    if (t <= -t1 || t >= t1) {
        if (t == -t1) return strands[i].front();
        if (t == t1) return strands[i].back();
        return ray(i, t);
    }
    const double h = spacing();
    double u = (t + t1) / h;
    int k = std::min(static_cast<int>(u), n_points() - 2);
    double f = u - k;
    return (1.0 - f) * strands[i][k] + f * strands[i][k + 1];
}

Vec3 StringLink::derivative(int i, double t) const {
    if (t < -t1 || t > t1) {
        double c = 0.5 * (m + 1) - (i + 1);
        return {1.0, (t < 0 ? -1.0 : 1.0) * c, 0.0};
    }
    const double h = spacing();
    double u = (t + t1) / h;
    int k = static_cast<int>(std::ceil(u)) - 1;
    k = std::clamp(k, 0, n_points() - 2);
    return (strands[i][k + 1] - strands[i][k]) / h;
}

namespace detail {

std::vector<Vec3> strand_from_core(int m, int i, const std::vector<Vec3>& core, const LinkOptions& opt,
                                   std::vector<int>* key_index) {
    StringLink probe;
    probe.m = m;
    probe.t0 = opt.t0;
    probe.t1 = opt.t1;
    const int n = opt.n_points;
    if (n < 3) throw std::invalid_argument("strand needs at least 3 grid points");
    if (!(opt.t0 > 0) || !(opt.t1 > opt.t0)) throw std::invalid_argument("need 0 < t0 < t1");
    const double h = 2.0 * opt.t1 / (n - 1);
    const int k0 = static_cast<int>(std::lround((opt.t1 - opt.t0) / h));
    const int k1 = n - 1 - k0;
    if (k1 - k0 < static_cast<int>(core.size())) throw std::invalid_argument("grid too coarse for strand");

    std::vector<double> arc(core.size(), 0.0);
    for (std::size_t q = 1; q < core.size(); ++q) arc[q] = arc[q - 1] + (core[q] - core[q - 1]).norm();
    const double total = arc.back();
    std::vector<int> idx(core.size());
    for (std::size_t q = 0; q < core.size(); ++q) {
        idx[q] = k0 + static_cast<int>(std::lround((k1 - k0) * arc[q] / total));
        if (q > 0 && idx[q] <= idx[q - 1]) idx[q] = idx[q - 1] + 1;
    }
    idx.back() = k1;
    for (std::size_t q = core.size() - 1; q-- > 0;)
        if (idx[q] >= idx[q + 1]) idx[q] = idx[q + 1] - 1;

    if (key_index) *key_index = idx;
    std::vector<Vec3> pts(n);
    for (std::size_t q = 0; q + 1 < core.size(); ++q) {
        for (int k = idx[q]; k <= idx[q + 1]; ++k) {
            double f = double(k - idx[q]) / (idx[q + 1] - idx[q]);
            pts[k] = (1.0 - f) * core[q] + f * core[q + 1];
        }
    }
    const Vec3 left = probe.ray(i, -opt.t1), right = probe.ray(i, opt.t1);
    for (int k = 0; k <= k0; ++k) {
        double f = k0 == 0 ? 1.0 : double(k) / k0;
        pts[k] = (1.0 - f) * left + f * core.front();
    }
    for (int k = k1; k < n; ++k) {
        double f = k1 == n - 1 ? 0.0 : double(k - k1) / (n - 1 - k1);
        pts[k] = (1.0 - f) * core.back() + f * right;
    }
    return pts;
}

double segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
    // closest points of two segments
    const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
    const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
    double s, t;
    if (a <= 1e-300 && e <= 1e-300) return r.norm();
    if (a <= 1e-300) {
        s = 0;
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e <= 1e-300) {
            t = 0;
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2), den = a * e - b * b;
            s = den > 0 ? std::clamp((b * f - c * e) / den, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0) {
                t = 0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1) {
                t = 1;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return ((p1 + s * d1) - (p2 + t * d2)).norm();
}

double point_segment_distance(const Vec3& x, const Vec3& p, const Vec3& q) {
    const Vec3 d = q - p;
    double L = d.squaredNorm();
    double s = L > 0 ? std::clamp((x - p).dot(d) / L, 0.0, 1.0) : 0.0;
    return (x - (p + s * d)).norm();
}

namespace {

struct CellKey {
    long x, y, z;
    bool operator==(const CellKey&) const = default;
};
struct CellHash {
    std::size_t operator()(const CellKey& k) const {
        return std::hash<long>()(k.x * 73856093L ^ k.y * 19349663L ^ k.z * 83492791L);
    }
};

}  // namespace

// Smallest distance between a segment of P and a segment of Q, over pairs
// whose bounding boxes are within `reach`; `skip(a, b)` filters pairs.
template <class Skip>
double min_pair_distance(const std::vector<Vec3>& P, const std::vector<Vec3>& Q, double reach, Skip skip) {
    const double cell = reach;
    std::unordered_map<CellKey, std::vector<int>, CellHash> grid;
    auto key = [&](const Vec3& x) {
        return CellKey{static_cast<long>(std::floor(x.x() / cell)), static_cast<long>(std::floor(x.y() / cell)),
                       static_cast<long>(std::floor(x.z() / cell))};
    };
    for (int b = 0; b + 1 < static_cast<int>(Q.size()); ++b) {
        Vec3 lo = Q[b].cwiseMin(Q[b + 1]), hi = Q[b].cwiseMax(Q[b + 1]);
        CellKey a = key(lo), z = key(hi);
        for (long x = a.x; x <= z.x; ++x)
            for (long y = a.y; y <= z.y; ++y)
                for (long w = a.z; w <= z.z; ++w) grid[{x, y, w}].push_back(b);
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> seen(Q.size(), -1);
    for (int a = 0; a + 1 < static_cast<int>(P.size()); ++a) {
        Vec3 lo = P[a].cwiseMin(P[a + 1]).array() - reach, hi = P[a].cwiseMax(P[a + 1]).array() + reach;
        CellKey c0 = key(lo), c1 = key(hi);
        for (long x = c0.x; x <= c1.x; ++x)
            for (long y = c0.y; y <= c1.y; ++y)
                for (long w = c0.z; w <= c1.z; ++w) {
                    auto it = grid.find({x, y, w});
                    if (it == grid.end()) continue;
                    for (int b : it->second) {
                        if (seen[b] == a || skip(a, b)) continue;
                        seen[b] = a;
                        best = std::min(best, segment_distance(P[a], P[a + 1], Q[b], Q[b + 1]));
                    }
                }
    }
    return best;
}

}  // namespace detail

StringLink trivial_link(int m, const LinkOptions& opt) {
    if (m < 1) throw std::invalid_argument("trivial_link: m must be positive");
    StringLink L;
    L.m = m;
    L.t0 = opt.t0;
    L.t1 = opt.t1;
    for (int i = 0; i < m; ++i) {
        double y = -(i + 1.0);
        L.strands.push_back(detail::strand_from_core(m, i, {Vec3(-opt.t0, y, 0), Vec3(opt.t0, y, 0)}, opt));
    }
    return L;
}

double min_strand_distance(const StringLink& L, int i, int j) {
    if (i == j) throw std::invalid_argument("min_strand_distance: need distinct strands");
    for (double reach : {0.5, 4.0, 32.0}) {
        double d = detail::min_pair_distance(L.strands[i], L.strands[j], reach, [](int, int) { return false; });
        if (d <= reach) return d;
    }
    // strands farther apart than the search reach: brute force over points
    double best = std::numeric_limits<double>::infinity();
    for (auto& p : L.strands[i])
        for (auto& q : L.strands[j]) best = std::min(best, (p - q).norm());
    return best;
}

double min_self_distance(const StringLink& L, int i) {
    // segments sharing an endpoint are skipped; any other pair of a polyline
    // is at positive distance unless the strand meets itself
    const auto& P = L.strands[i];
    return detail::min_pair_distance(P, P, 0.5, [](int a, int b) { return std::abs(a - b) <= 1; });
}

std::vector<std::string> validate_link(const StringLink& L, bool embedded, double tol) {
    std::vector<std::string> out;
    if (L.m < 1 || static_cast<int>(L.strands.size()) != L.m) {
        out.push_back("strand count does not match m");
        return out;
    }
    for (int i = 0; i < L.m; ++i) {
        if (L.strands[i].size() != L.strands[0].size() || L.strands[i].size() < 2) {
            out.push_back("strand " + std::to_string(i + 1) + ": inconsistent point count");
            return out;
        }
    }
    for (int i = 0; i < L.m; ++i) {
        if ((L.strands[i].front() - L.ray(i, -L.t1)).norm() > 1e-9)
            out.push_back("strand " + std::to_string(i + 1) + ": start does not meet the ray");
        if ((L.strands[i].back() - L.ray(i, L.t1)).norm() > 1e-9)
            out.push_back("strand " + std::to_string(i + 1) + ": end does not meet the ray");
    }
    for (int i = 0; i < L.m; ++i)
        for (int j = i + 1; j < L.m; ++j)
            if (min_strand_distance(L, i, j) <= tol)
                out.push_back("strands " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " intersect");
    if (embedded) {
        for (int i = 0; i < L.m; ++i)
            if (min_self_distance(L, i) <= tol) out.push_back("strand " + std::to_string(i + 1) + " intersects itself");
    }
    return out;
}

}  // namespace holink
