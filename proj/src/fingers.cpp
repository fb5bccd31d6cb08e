#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "geom_util.hpp"
#include "holink/linkgeom.hpp"

namespace holink {

namespace {

double strand_y(int i) { return -(i + 1.0); }

struct Detour {
    std::vector<Vec3> points;  // P0 ... Pend, both ends on the strand line
    int a_offset = 0;          // index of the double point within `points`
};

Detour finger_detour(const FingerSpec& f, double h) {
    const double h2 = h + 0.15, s = f.side < 0 ? -1.0 : 1.0;
    const double yi = strand_y(f.from), Xa = f.from_x, Xd = f.to_x;
    Detour d;
    if (f.to != f.from) {
        const double yj = strand_y(f.to);
        d.points = {{Xa - 0.3, yi, 0},           {Xa - 0.3, yi - 0.25, s * h}, {Xd, yj + 0.35, s * h},
                    {Xd, yj + 0.15, 0},          {Xd, yj, 0},                  {Xd, yj - 0.15, 0},
                    {Xd, yj - 0.35, s * h},      {Xd + 0.2, yj - 0.35, s * h2}, {Xd + 0.2, yj + 0.35, s * h2},
                    {Xa + 0.3, yi - 0.25, s * h2}, {Xa + 0.3, yi, 0}};
        d.a_offset = 4;
    } else {
        // around the next strand and back up through the strand itself
        const double yn = yi - 1.0;
        d.points = {{Xa - 0.3, yi, 0},          {Xa - 0.3, yi - 0.25, s * h}, {Xa - 0.3, yn - 0.5, s * h},
                    {Xd, yn - 0.5, s * h},      {Xd, yi - 0.35, s * h},       {Xd, yi - 0.15, 0},
                    {Xd, yi, 0},                {Xd, yi + 0.15, 0},           {Xd, yi + 0.35, s * h},
                    {Xd + 0.2, yi + 0.35, s * h2}, {Xd + 0.2, yn - 0.4, s * h2}, {Xa + 0.3, yn - 0.4, s * h2},
                    {Xa + 0.3, yi - 0.25, s * h2}, {Xa + 0.3, yi, 0}};
        d.a_offset = 6;
    }
    return d;
}

// Parameter of the point of strand i closest to x over grid segments [lo, hi).
double closest_param(const StringLink& L, int i, const Vec3& x, int lo, int hi) {
    const auto& P = L.strands[i];
    double best = std::numeric_limits<double>::infinity(), t = 0;
    for (int k = std::max(lo, 0); k < std::min(hi, static_cast<int>(P.size()) - 1); ++k) {
        const Vec3 d = P[k + 1] - P[k];
        double s = std::clamp((x - P[k]).dot(d) / d.squaredNorm(), 0.0, 1.0);
        double dist = (P[k] + s * d - x).norm();
        if (dist < best) {
            best = dist;
            t = L.param(k) + s * L.spacing();
        }
    }
    return t;
}

}  // namespace

SingularLink build_fingers(int m, const std::vector<FingerSpec>& fingers, const FingerOptions& opt) {
    const int nf = static_cast<int>(fingers.size());
    for (const auto& f : fingers) {
        if (f.from < 0 || f.from >= m || f.to < 0 || f.to >= m) throw std::invalid_argument("finger strand out of range");
        if (f.to < f.from) throw std::invalid_argument("finger must run from a lower to a higher strand index");
        if (f.to == f.from && (f.from + 1 >= m || !(f.to_x > f.from_x + 0.5)))
            throw std::invalid_argument("self finger needs a next strand and a double point right of its slot");
        if (std::abs(f.from_x) > opt.link.t0 - 1 || std::abs(f.to_x) > opt.link.t0 - 1)
            throw std::invalid_argument("finger slot outside the core");
    }
    // deeper fingers first: lower owner strand, then farther target
    std::vector<int> order(nf);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (fingers[a].from != fingers[b].from) return fingers[a].from < fingers[b].from;
        return fingers[a].to > fingers[b].to;
    });
    std::vector<double> depth(nf);
    for (int r = 0; r < nf; ++r) depth[order[r]] = 0.3 + 0.3 * (nf - 1 - r);

    SingularLink H;
    StringLink& L = H.link;
    L.m = m;
    L.t0 = opt.link.t0;
    L.t1 = opt.link.t1;
    L.strands.resize(m);
    // grid index of each finger's double point and of its detour ends
    std::vector<int> a_index(nf), lo_index(nf), hi_index(nf);
    for (int i = 0; i < m; ++i) {
        std::vector<int> own;
        for (int c = 0; c < nf; ++c)
            if (fingers[c].from == i) own.push_back(c);
        std::sort(own.begin(), own.end(), [&](int a, int b) { return fingers[a].from_x < fingers[b].from_x; });
        for (std::size_t q = 1; q < own.size(); ++q)
            if (fingers[own[q]].from_x - fingers[own[q - 1]].from_x < 0.8)
                throw std::invalid_argument("finger slots on one strand are too close");
        std::vector<Vec3> core{{-L.t0, strand_y(i), 0}};
        std::vector<std::pair<int, std::size_t>> marks;  // finger, index of its P0 in core
        for (int c : own) {
            Detour d = finger_detour(fingers[c], depth[c]);
            marks.push_back({c, core.size()});
            core.insert(core.end(), d.points.begin(), d.points.end());
        }
        core.push_back({L.t0, strand_y(i), 0});
        std::vector<int> key;
        L.strands[i] = detail::strand_from_core(m, i, core, opt.link, &key);
        for (auto [c, start] : marks) {
            Detour d = finger_detour(fingers[c], depth[c]);
            a_index[c] = key[start + d.a_offset];
            lo_index[c] = key[start];
            hi_index[c] = key[start + d.points.size() - 1];
        }
    }
    for (int c = 0; c < nf; ++c) {
        const auto& f = fingers[c];
        DoublePoint dp;
        dp.strand_i = f.from;
        dp.strand_j = f.to;
        dp.t_i = L.param(a_index[c]);
        dp.point = L.strands[f.from][a_index[c]];
        dp.radius = opt.radius;
        if (f.to != f.from) {
            dp.t_j = closest_param(L, f.to, dp.point, 0, L.n_points());
        } else {
            double t1 = closest_param(L, f.to, dp.point, 0, lo_index[c]);
            double t2 = closest_param(L, f.to, dp.point, hi_index[c], L.n_points());
            dp.t_j = (L.eval(f.to, t1) - dp.point).norm() < (L.eval(f.to, t2) - dp.point).norm() ? t1 : t2;
        }
        if ((L.eval(f.to, dp.t_j) - dp.point).norm() > 1e-9)
            throw GeometryError("double point does not lie on the target strand");
        H.doubles.push_back(dp);
    }
    return H;
}

SingularLink build_singular_link(const LinkDiagram& g, const FingerOptions& opt) {
    std::vector<FingerSpec> fingers;
    auto slot = [&](int v) {
        int s = g.segment_of(v), r = g.position_of(v);
        return -5.0 + 10.0 * (r + 0.5) / g.seg_sizes[s];
    };
    for (const auto& e : g.edges) {
        if (e.kind != EdgeKind::chord) throw std::invalid_argument("singular links need a chord diagram");
        int sa = g.segment_of(e.a), sb = g.segment_of(e.b);
        if (sa == sb) throw std::invalid_argument("chord with both ends on one segment");
        int own = sa < sb ? e.a : e.b, other = sa < sb ? e.b : e.a;
        fingers.push_back({std::min(sa, sb), std::max(sa, sb), slot(own), slot(other), -1});
    }
    return build_fingers(g.m, fingers, opt);
}

StringLink resolve(const SingularLink& H, const std::vector<bool>& positive, double perturbation) {
    if (positive.size() != H.doubles.size()) throw std::invalid_argument("resolve: one sign per double point");
    StringLink L = H.link;
    const double h = L.spacing();
    for (std::size_t c = 0; c < H.doubles.size(); ++c) {
        const DoublePoint& dp = H.doubles[c];
        auto& P = L.strands[dp.strand_i];
        const double sign = positive[c] ? 1.0 : -1.0;
        const int k0 = static_cast<int>(std::lround((dp.t_i + L.t1) / h));
        // the arc through the double point, walked both ways while inside the ball
        for (int dir : {-1, 1}) {
            for (int k = dir < 0 ? k0 : k0 + 1; k >= 0 && k < L.n_points(); k += dir) {
                double d = (H.link.strands[dp.strand_i][k] - dp.point).norm();
                if (d >= dp.radius) break;
                P[k].z() += sign * perturbation * (1.0 - d / dp.radius);
            }
        }
    }
    return L;
}

namespace {

// Evenly spread slots for the items hosted by each strand.
std::vector<std::pair<double, double>> clasp_slots(int m, const std::vector<Clasp>& clasps, std::mt19937_64* jitter) {
    std::vector<int> count(m, 0);
    std::vector<std::pair<int, int>> rank;
    for (const auto& c : clasps) rank.push_back({count[c.from]++, count[c.to]++});
    std::vector<std::pair<double, double>> out;
    for (std::size_t q = 0; q < clasps.size(); ++q) {
        auto pos = [&](int strand, int r) {
            double x = -7.0 + 14.0 * (r + 0.5) / count[strand];
            if (jitter) x += ((*jitter)() >> 11) * 0x1.0p-53 - 0.5;
            return x;
        };
        out.push_back({pos(clasps[q].from, rank[q].first), pos(clasps[q].to, rank[q].second)});
    }
    return out;
}

StringLink clasp_link_slots(int m, const std::vector<Clasp>& clasps, const FingerOptions& opt, double perturbation,
                            std::mt19937_64* jitter) {
    auto slots = clasp_slots(m, clasps, jitter);
    std::vector<FingerSpec> fingers;
    std::vector<bool> positive;
    for (std::size_t q = 0; q < clasps.size(); ++q) {
        const auto& c = clasps[q];
        if (c.from >= c.to) throw std::invalid_argument("clasp must run from a lower to a higher strand");
        if (c.sign != 1 && c.sign != -1) throw std::invalid_argument("clasp sign must be +1 or -1");
        fingers.push_back({c.from, c.to, slots[q].first, slots[q].second, c.sign > 0 ? -1 : 1});
        positive.push_back(c.sign > 0);
    }
    return resolve(build_fingers(m, fingers, opt), positive, perturbation);
}

}  // namespace

StringLink clasp_link(int m, const std::vector<Clasp>& clasps, const FingerOptions& opt, double perturbation) {
    return clasp_link_slots(m, clasps, opt, perturbation, nullptr);
}

std::pair<StringLink, int> random_clasp_link(int m, std::uint64_t seed, const FingerOptions& opt) {
    if (m < 2) throw std::invalid_argument("random_clasp_link: need two strands");
    std::mt19937_64 rng(seed);
    int n = 1 + static_cast<int>(rng() % 3);
    std::vector<Clasp> clasps;
    int lk = 0;
    for (int q = 0; q < n; ++q) {
        int sign = (rng() & 1) ? 1 : -1;
        clasps.push_back({0, 1, sign});
        lk += sign;
    }
    double perturbation = 0.1 + 0.1 * ((rng() >> 11) * 0x1.0p-53);
    FingerOptions o = opt;
    o.radius = std::max(o.radius, perturbation);
    return {clasp_link_slots(m, clasps, o, perturbation, &rng), lk};
}

}  // namespace holink
