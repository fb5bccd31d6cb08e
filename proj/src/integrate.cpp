#include "holink/integrate.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace holink {

namespace {

constexpr double kFourPi = 4.0 * M_PI;
constexpr std::uint64_t kBlock = 4096;

// Counter-based stream: the draws for sample n depend only on (seed, n).
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t index) : s_(mix(seed ^ 0x243F6A8885A308D3ULL) ^ mix(index + 1)) {}
    std::uint64_t next() {
        s_ += 0x9E3779B97F4A7C15ULL;
        return mix(s_);
    }
    // uniform on (0, 1)
    double uniform() { return ((next() >> 11) + 0.5) * 0x1.0p-53; }
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2 * M_PI * u2);
    }
    Vec3 unit_vector() {
        double z = 2.0 * uniform() - 1.0, phi = 2 * M_PI * uniform();
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(phi), s * std::sin(phi), z};
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::uint64_t s_;
    double spare_ = 0;
    bool have_spare_ = false;
};

// Distance from x to the nearest grid point of the strands in `others`,
// capped at `cap`.
class NearestPoint {
public:
    NearestPoint(const StringLink& L, const std::vector<int>& others, double cell) : L_(L), cell_(cell) {
        for (int j : others)
            for (int k = 0; k < L.n_points(); ++k) grid_[key(L.strands[j][k])].push_back({j, k});
    }
    double operator()(const Vec3& x, double cap) const {
        double best = cap;
        auto c = key(x);
        for (long a = -1; a <= 1; ++a)
            for (long b = -1; b <= 1; ++b)
                for (long d = -1; d <= 1; ++d) {
                    auto it = grid_.find({c[0] + a, c[1] + b, c[2] + d});
                    if (it == grid_.end()) continue;
                    for (auto [j, k] : it->second) best = std::min(best, (L_.strands[j][k] - x).norm());
                }
        return best;
    }

private:
    struct Hash {
        std::size_t operator()(const std::array<long, 3>& k) const {
            return std::hash<long>()(k[0] * 73856093L ^ k[1] * 19349663L ^ k[2] * 83492791L);
        }
    };
    std::array<long, 3> key(const Vec3& x) const {
        return {static_cast<long>(std::floor(x.x() / cell_)), static_cast<long>(std::floor(x.y() / cell_)),
                static_cast<long>(std::floor(x.z() / cell_))};
    }
    const StringLink& L_;
    double cell_;
    std::unordered_map<std::array<long, 3>, std::vector<std::pair<int, int>>, Hash> grid_;
};

constexpr double kUniformWeight = 0.45, kActivityWeight = 0.5, kTailWeight = 0.05;
constexpr double kAnchorWeight = 0.4, kRadialWeight = 0.45, kFreeTailWeight = 0.15;
constexpr double kRadialReach = 1.0, kFreeTailScale = 5.0, kActivityEps = 0.02;

}  // namespace

std::optional<Vec3> direction(const Vec3& p, const Vec3& q) {
    Vec3 d = q - p;
    double r = d.norm();
    if (!(r > 1e-12)) return std::nullopt;
    return Vec3(d / r);
}

std::optional<double> integrand(const LinkDiagram& g, const StringLink& L, const FiberPoint& c) {
    const int S = g.n_seg(), F = g.n_free, E = static_cast<int>(g.edges.size());
    const int cols = S + 3 * F;
    if (2 * E != cols) throw std::invalid_argument("integrand: the diagram must have defect zero");
    if (g.parity != Parity::odd) throw std::invalid_argument("integrand: parity must be odd (n = 3)");
    if (static_cast<int>(c.params.size()) != S || static_cast<int>(c.free_points.size()) != F)
        throw std::invalid_argument("integrand: fiber point does not match the diagram");
    std::vector<Vec3> pos(S + F), vel(S);
    for (int v = 0; v < S; ++v) {
        int s = g.segment_of(v);
        pos[v] = L.eval(s, c.params[v]);
        vel[v] = L.derivative(s, c.params[v]);
    }
    for (int f = 0; f < F; ++f) pos[S + f] = c.free_points[f];

    using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 32, 32>;
    if (cols > 32) throw ResourceError("integrand: diagram too large");
    Mat J = Mat::Zero(cols, cols);
    for (int e = 0; e < E; ++e) {
        const Edge& ed = g.edges[e];
        if (ed.a == ed.b) throw std::invalid_argument("integrand: loop edges are not supported");
        auto phi = direction(pos[ed.a], pos[ed.b]);
        if (!phi) return std::nullopt;
        const double r = (pos[ed.b] - pos[ed.a]).norm();
        Vec3 axis = Vec3::Zero();
        Eigen::Index k;
        phi->cwiseAbs().minCoeff(&k);
        axis[k] = 1.0;
        const Vec3 t1 = phi->cross(axis).normalized();
        const Vec3 t2 = phi->cross(t1);
        for (int side = 0; side < 2; ++side) {
            const int w = side ? ed.b : ed.a;
            const double sg = side ? 1.0 / r : -1.0 / r;
            if (w < S) {
                J(2 * e, w) += sg * t1.dot(vel[w]);
                J(2 * e + 1, w) += sg * t2.dot(vel[w]);
            } else {
                const int col = S + 3 * (w - S);
                for (int a = 0; a < 3; ++a) {
                    J(2 * e, col + a) += sg * t1[a];
                    J(2 * e + 1, col + a) += sg * t2[a];
                }
            }
        }
    }
    double det = cols == 0 ? 1.0 : J.partialPivLu().determinant();
    return det * std::pow(kFourPi, -E);
}

// ---- sampler -------------------------------------------------------------------

FiberSampler::FiberSampler(const LinkDiagram& g, const StringLink& L, const IntegrateOptions& opt)
    : g_(g), ref_(&L), T_(L.t1 + opt.tail_pad), sigma_(opt.anchor_sigma) {
    if (g.m != L.m) throw std::invalid_argument("diagram and link have different numbers of strands");
    if (opt.anchors < 1 || !(opt.anchor_sigma > 0) || !(opt.tail_pad > 0))
        throw std::invalid_argument("sampler needs anchors >= 1, anchor_sigma > 0 and tail_pad > 0");
    const int n = L.n_points();
    const double h = L.spacing();
    activity_.resize(L.m);
    for (int i = 0; i < L.m; ++i) {
        std::vector<int> others;
        for (int j = 0; j < L.m; ++j)
            if (j != i) others.push_back(j);
        NearestPoint near(L, others, 0.5);
        auto& a = activity_[i];
        a.cdf.resize(n - 1);
        double acc = 0;
        for (int k = 0; k + 1 < n; ++k) {
            const Vec3 mid = 0.5 * (L.strands[i][k] + L.strands[i][k + 1]);
            const double len = (L.strands[i][k + 1] - L.strands[i][k]).norm();
            double w = len;
            if (!others.empty()) {
                double d = near(mid, 1.0);
                w = len * others.size() / (d * d + kActivityEps * kActivityEps);
            }
            acc += w;
            a.cdf[k] = acc;
        }
        a.total = acc;
    }
    // anchors equispaced by arclength along the strand cores
    std::vector<Vec3> core;
    std::vector<double> arc;
    for (int i = 0; i < L.m; ++i) {
        bool first = true;
        for (int k = 0; k < n; ++k) {
            const double t = L.param(k);
            if (t < -L.t0 - 0.5 * h || t > L.t0 + 0.5 * h) continue;
            const double step = first || arc.empty() ? 0.0 : (L.strands[i][k] - core.back()).norm();
            arc.push_back((arc.empty() ? 0.0 : arc.back()) + step);
            core.push_back(L.strands[i][k]);
            first = false;
        }
    }
    for (int q = 0; q < opt.anchors; ++q) {
        const double target = arc.back() * (q + 0.5) / opt.anchors;
        auto it = std::lower_bound(arc.begin(), arc.end(), target);
        anchors_.push_back(core[std::min<std::size_t>(it - arc.begin(), core.size() - 1)]);
    }
    const int S = g.n_seg();
    earlier_neighbours_.resize(g.n_free);
    for (const auto& e : g.edges) {
        for (auto [u, v] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}})
            if (u >= S && v < u) earlier_neighbours_[u - S].push_back(v);
    }
    for (const auto& gr : grafts(g)) {
        int d = 3 * gr.free_count;
        for (int c : gr.per_segment_counts) d += c;
        graft_dims_.push_back(d);
    }
}

double FiberSampler::seg_density(int s, double t) const {
    const StringLink& L = *ref_;
    double p = 0;
    if (std::abs(t) <= T_) p += kUniformWeight / (2 * T_);
    if (std::abs(t) > T_) {
        double x = (std::abs(t) - T_) / lambda_;
        p += kTailWeight * 0.5 / (lambda_ * (1 + x) * (1 + x));
    }
    if (t > -L.t1 && t < L.t1) {
        const double h = L.spacing();
        int k = std::min(static_cast<int>((t + L.t1) / h), L.n_points() - 2);
        const auto& a = activity_[s];
        double mass = a.cdf[k] - (k ? a.cdf[k - 1] : 0.0);
        p += kActivityWeight * mass / (a.total * h);
    }
    return p;
}

double FiberSampler::seg_draw(int s, double u1, double u2) const {
    const StringLink& L = *ref_;
    if (u1 < kUniformWeight) return -T_ + 2 * T_ * u2;
    if (u1 < kUniformWeight + kActivityWeight) {
        const auto& a = activity_[s];
        double target = (u1 - kUniformWeight) / kActivityWeight * a.total;
        int k = static_cast<int>(std::upper_bound(a.cdf.begin(), a.cdf.end(), target) - a.cdf.begin());
        k = std::min(k, static_cast<int>(a.cdf.size()) - 1);
        return L.param(k) + u2 * L.spacing();
    }
    // Lomax tail beyond T on either side
    double v = (u1 - kUniformWeight - kActivityWeight) / kTailWeight;
    double side = v < 0.5 ? -1.0 : 1.0;
    double x = lambda_ * (1.0 / (1.0 - u2) - 1.0);
    return side * (T_ + x);
}

double FiberSampler::sample(std::uint64_t seed, std::uint64_t index, FiberPoint& out) const {
    Stream rng(seed, index);
    const LinkDiagram& g = g_;
    const StringLink& L = *ref_;
    const int S = g.n_seg();
    out.params.assign(S, 0.0);
    out.free_points.assign(g.n_free, Vec3::Zero());
    double density = 1.0;
    std::vector<Vec3> pos(S + g.n_free);
    for (int s = 0; s < g.m; ++s) {
        const int n = g.seg_sizes[s];
        if (n == 0) continue;
        std::vector<double> t(n);
        for (int q = 0; q < n; ++q) {
            double u1 = rng.uniform(), u2 = rng.uniform();
            t[q] = seg_draw(s, u1, u2);
            density *= seg_density(s, t[q]) * (q + 1);
        }
        std::sort(t.begin(), t.end());
        for (int q = 0; q < n; ++q) {
            int v = g.seg_vertex(s, q);
            out.params[v] = t[q];
            pos[v] = L.eval(s, t[q]);
        }
    }
    const Vec3 centre(0.0, -0.5 * (L.m + 1), 0.0);
    const double K = static_cast<double>(anchors_.size());
    for (int f = 0; f < g.n_free; ++f) {
        const auto& nb = earlier_neighbours_[f];
        const double w_radial = nb.empty() ? 0.0 : kRadialWeight;
        const double w_anchor = kAnchorWeight + (kRadialWeight - w_radial);
        double u = rng.uniform();
        Vec3 x;
        if (u < w_anchor) {
            int a = std::min(static_cast<int>(rng.uniform() * K), static_cast<int>(K) - 1);
            x = anchors_[a] + sigma_ * Vec3(rng.normal(), rng.normal(), rng.normal());
        } else if (u < w_anchor + w_radial) {
            int v = nb[std::min(static_cast<int>(rng.uniform() * nb.size()), static_cast<int>(nb.size()) - 1)];
            x = pos[v] + kRadialReach * rng.uniform() * rng.unit_vector();
        } else {
            double r = kFreeTailScale * (1.0 / (1.0 - rng.uniform()) - 1.0);
            x = centre + r * rng.unit_vector();
        }
        // exact mixture density at x
        double p = 0;
        const double norm = std::pow(2 * M_PI * sigma_ * sigma_, -1.5);
        for (const auto& a : anchors_) p += w_anchor / K * norm * std::exp(-(x - a).squaredNorm() / (2 * sigma_ * sigma_));
        for (int v : nb) {
            double r = (x - pos[v]).norm();
            if (r < kRadialReach && r > 0) p += w_radial / nb.size() / (kFourPi * kRadialReach * r * r);
        }
        {
            double r = (x - centre).norm();
            double pr = 1.0 / (kFreeTailScale * (1 + r / kFreeTailScale) * (1 + r / kFreeTailScale));
            if (r > 0) p += kFreeTailWeight * pr / (kFourPi * r * r);
        }
        density *= p;
        out.free_points[f] = x;
        pos[S + f] = x;
    }
    return density;
}

// ---- estimators ---------------------------------------------------------------

int default_workers() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HOLINK_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return std::min<int>(v, static_cast<int>(hw) * 4);
    }
    return static_cast<int>(hw);
}

namespace {

struct BlockSum {
    double sum = 0, sum_sq = 0;
    std::uint64_t rejected = 0;
};

BlockSum pairwise(const std::vector<BlockSum>& b, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return b[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    BlockSum x = pairwise(b, lo, mid), y = pairwise(b, mid, hi);
    return {x.sum + y.sum, x.sum_sq + y.sum_sq, x.rejected + y.rejected};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    Stream s(seed, 0xD1B54A32D192ED03ULL ^ salt);
    return s.next();
}

}  // namespace

MCEstimate mc_combination(const LinkDiagram& g, const std::vector<const StringLink*>& links,
                          const std::vector<double>& coeffs, const IntegrateOptions& opt) {
    if (links.empty() || links.size() != coeffs.size()) throw std::invalid_argument("one coefficient per link");
    if (opt.samples == 0) throw std::invalid_argument("samples must be positive");
    if (auto v = validate(g); !v.empty()) throw std::invalid_argument("invalid diagram: " + v.front());
    if (defect(g) != 0) throw std::invalid_argument("integration needs a defect-zero diagram");
    if (g.parity != Parity::odd) throw std::invalid_argument("integration needs parity odd (n = 3)");
    for (const auto& e : g.edges)
        if (e.kind == EdgeKind::loop) throw std::invalid_argument("integration of loop edges is not supported");
    for (auto* L : links)
        if (L->m != g.m) throw std::invalid_argument("diagram and link have different numbers of strands");
    // the canonical representative is integrated, so relabelings and edge
    // reversals change the estimate only through the sign
    const NormalizedDiagram nd = normalize(g);
    MCEstimate e;
    e.samples = opt.samples;
    e.seed = opt.seed;
    if (nd.sign == 0) return e;
    const LinkDiagram& gc = nd.canonical;
    FiberSampler sampler(gc, *links[0], opt);

    const std::uint64_t N = opt.samples;
    const std::uint64_t nblocks = (N + kBlock - 1) / kBlock;
    std::vector<BlockSum> blocks(nblocks);
    auto run = [&](std::uint64_t b) {
        BlockSum acc;
        FiberPoint c;
        const std::uint64_t lo = b * kBlock, hi = std::min(N, lo + kBlock);
        for (std::uint64_t n = lo; n < hi; ++n) {
            double q = sampler.sample(opt.seed, n, c);
            double v = 0;
            bool ok = q > 0 && std::isfinite(q);
            for (std::size_t r = 0; ok && r < links.size(); ++r) {
                if (coeffs[r] == 0) continue;
                auto f = integrand(gc, *links[r], c);
                if (!f || !std::isfinite(*f)) {
                    ok = false;
                    break;
                }
                v += coeffs[r] * *f;
            }
            if (!ok) {
                ++acc.rejected;
                continue;
            }
            double w = v / q;
            acc.sum += w;
            acc.sum_sq += w * w;
        }
        blocks[b] = acc;
    };
    int W = opt.workers > 0 ? opt.workers : default_workers();
    W = static_cast<int>(std::min<std::uint64_t>(W, nblocks));
    if (W <= 1) {
        for (std::uint64_t b = 0; b < nblocks; ++b) run(b);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < W; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t b = w; b < nblocks; b += W) run(b);
            });
        for (auto& t : pool) t.join();
    }
    BlockSum tot = pairwise(blocks, 0, blocks.size());
    if (opt.trace) {
        opt.trace->clear();
        double s = 0;
        for (std::uint64_t b = 0; b < nblocks; ++b) {
            s += blocks[b].sum;
            std::uint64_t n = std::min(N, (b + 1) * kBlock);
            opt.trace->push_back({n, nd.sign * s / n});
        }
    }
    if (tot.rejected * 2 > N)
        throw std::runtime_error("more than half of the samples were rejected; review the geometry or tolerances");
    e.rejected = tot.rejected;
    e.value = nd.sign * tot.sum / N;
    double var = std::max(0.0, tot.sum_sq / N - e.value * e.value);
    e.std_error = std::sqrt(var / N);
    return e;
}

MCEstimate mc_integrate(const LinkDiagram& g, const StringLink& L, const IntegrateOptions& opt) {
    return mc_combination(g, {&L}, {1.0}, opt);
}

namespace {

void check_cocycle_terms(const DiagramSum& w, Space space) {
    for (auto& [g, c] : w.terms()) {
        if (defect(g) != 0) throw std::invalid_argument("cocycle terms must have defect zero");
        if (space == Space::LD && g.n_free > 0) throw std::invalid_argument("anomalous correction required");
    }
}

MCEstimate combine_terms(const DiagramSum& w, const IntegrateOptions& opt, Space space,
                         const std::vector<const StringLink*>& links, const std::vector<double>& coeffs) {
    check_cocycle_terms(w, space);
    MCEstimate out;
    out.seed = opt.seed;
    double var = 0;
    std::uint64_t salt = 0;
    for (auto& [g, c] : w.terms()) {
        IntegrateOptions o = opt;
        o.seed = derive_seed(opt.seed, ++salt);
        o.trace = nullptr;
        MCEstimate e = mc_combination(g, links, coeffs, o);
        const double a = c.get_d();
        out.value += a * e.value;
        var += a * a * e.std_error * e.std_error;
        out.samples += e.samples;
        out.rejected += e.rejected;
    }
    out.std_error = std::sqrt(var);
    return out;
}

}  // namespace

MCEstimate universal_invariant(const DiagramSum& w, const StringLink& L, const IntegrateOptions& opt, Space space) {
    return combine_terms(w, opt, space, {&L}, {1.0});
}

MCEstimate universal_difference(const DiagramSum& w, const StringLink& L1, const StringLink& L2,
                                const IntegrateOptions& opt, Space space) {
    return combine_terms(w, opt, space, {&L1, &L2}, {1.0, -1.0});
}

MCEstimate alternating_sum(const LinkDiagram& gprime, const LinkDiagram& g, const IntegrateOptions& opt,
                           const FingerOptions& fopt, double perturbation) {
    if (order(gprime) != order(g)) throw std::invalid_argument("alternating_sum: diagrams of different order");
    if (gprime.m != g.m) throw std::invalid_argument("alternating_sum: diagrams on different numbers of strands");
    SingularLink H = build_singular_link(g, fopt);
    const int k = static_cast<int>(H.doubles.size());
    if (k > 12) throw ResourceError("alternating_sum: too many double points");
    std::vector<StringLink> res;
    std::vector<double> coeffs;
    for (int S = 0; S < (1 << k); ++S) {
        std::vector<bool> pos(k);
        for (int c = 0; c < k; ++c) pos[c] = (S >> c) & 1;
        res.push_back(resolve(H, pos, perturbation));
        coeffs.push_back(((k - __builtin_popcount(S)) % 2) ? -1.0 : 1.0);
    }
    std::vector<const StringLink*> ptr;
    for (auto& L : res) ptr.push_back(&L);
    return mc_combination(gprime, ptr, coeffs, opt);
}

std::string report(const MCEstimate& e, const std::vector<int>& graft_dims) {
    auto num = [](double x) {
        char buf[64];
        auto r = std::to_chars(buf, buf + sizeof buf, x);
        return std::string(buf, r.ptr);
    };
    std::ostringstream os;
    os << "value=" << num(e.value) << "\n";
    os << "std_error=" << num(e.std_error) << "\n";
    os << "samples=" << e.samples << "\n";
    os << "seed=" << e.seed << "\n";
    os << "rejected=" << e.rejected << "\n";
    if (!graft_dims.empty()) {
        os << "graft_dims=";
        for (std::size_t q = 0; q < graft_dims.size(); ++q) os << (q ? "," : "") << graft_dims[q];
        os << "\n";
    }
    return os.str();
}

}  // namespace holink
