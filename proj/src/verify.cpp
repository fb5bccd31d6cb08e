#include "holink/verify.hpp"

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

namespace holink {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

// Cohomology reports are shared by the duality and IHX checks.
const CohomologyReport& cached_cohomology(int m, Parity p, int k, Space s) {
    static std::map<std::tuple<int, int, int, int>, CohomologyReport> cache;
    auto key = std::make_tuple(m, static_cast<int>(p), k, static_cast<int>(s));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, cohomology(m, p, k, s)).first;
    return it->second;
}

std::vector<LinkDiagram> corpus(int max_m, int max_k, int max_d, Space space) {
    std::vector<LinkDiagram> out;
    for (int m = 1; m <= max_m; ++m)
        for (Parity p : {Parity::odd, Parity::even})
            for (int k = 1; k <= max_k; ++k)
                for (int d = 0; d <= max_d; ++d)
                    for (auto& g : enumerate(m, p, d, k, space)) out.push_back(std::move(g));
    return out;
}

LinkDiagram two_chord(bool crossed) {
    DiagramBuilder b(3, Parity::odd);
    int x1 = b.seg(1), x2 = b.seg(1), y = b.seg(2), z = b.seg(3);
    if (crossed) {
        b.edge(x1, z);
        b.edge(x2, y);
    } else {
        b.edge(x1, y);
        b.edge(x2, z);
    }
    return b.build();
}

IntegrateOptions integrate_options(const NumericOptions& o) {
    IntegrateOptions io;
    io.samples = o.samples;
    io.seed = o.seed;
    io.workers = o.workers;
    return io;
}

bool within(const MCEstimate& e, double expected, double n_sigma) {
    return std::abs(e.value - expected) <= n_sigma * e.std_error;
}

}  // namespace

CheckResult check_delta_squared(int max_m, int max_k, int max_d, bool inject_sign_bug) {
    CheckResult r{"delta_squared", true, ""};
    DifferentialOptions opt;
    opt.inject_sign_bug = inject_sign_bug;
    std::size_t n = 0, bad = 0;
    for (const auto& g : corpus(max_m, max_k, max_d, Space::LD)) {
        ++n;
        if (!differential(differential(g, opt), opt).empty()) {
            if (!bad) r.detail = "first failure: " + to_text(g) + "; ";
            ++bad;
        }
    }
    r.pass = bad == 0;
    r.detail += std::to_string(n) + " diagrams, " + std::to_string(bad) + " with nonzero square";
    return r;
}

CheckResult check_leibniz_commutativity(int max_m, int max_k, int pairs, std::uint64_t seed, bool inject_sign_bug) {
    CheckResult r{"leibniz_commutativity", true, ""};
    DifferentialOptions opt;
    opt.inject_sign_bug = inject_sign_bug;
    auto all = corpus(max_m, max_k - 1, 1, Space::LD);
    std::mt19937_64 rng(seed);
    int done = 0, leibniz_bad = 0, comm_bad = 0;
    for (int attempt = 0; done < pairs && attempt < 1000 * pairs; ++attempt) {
        const auto& a = all[rng() % all.size()];
        const auto& b = all[rng() % all.size()];
        if (a.m != b.m || a.parity != b.parity || order(a) + order(b) > max_k) continue;
        ++done;
        DiagramSum ab = shuffle(a, b), ba = shuffle(b, a);
        const int da = sign_degree(a), db = sign_degree(b);
        if (!(ab == ba * Q((da * db) % 2 ? -1 : 1))) ++comm_bad;
        DiagramSum lhs = differential(ab, opt);
        DiagramSum rhs = shuffle(differential(a, opt), DiagramSum::of(b));
        rhs.add(shuffle(DiagramSum::of(a), differential(b, opt)), Q(da ? -1 : 1));
        if (!(lhs == rhs)) ++leibniz_bad;
    }
    r.pass = done == pairs && leibniz_bad == 0 && comm_bad == 0;
    r.detail = std::to_string(done) + " pairs, " + std::to_string(leibniz_bad) + " Leibniz failures, " +
               std::to_string(comm_bad) + " commutativity failures";
    return r;
}

CheckResult check_hd_closure(int max_m, int max_k, int max_d) {
    CheckResult r{"hd_closure", true, ""};
    auto hd = corpus(max_m, max_k, max_d, Space::HD);
    std::size_t bad = 0, products = 0;
    for (const auto& g : hd)
        if (!is_homotopy_diagram(g) || !all_homotopy(differential(g))) ++bad;
    for (std::size_t i = 0; i < hd.size(); ++i)
        for (std::size_t j = 0; j < hd.size(); ++j) {
            const auto &a = hd[i], &b = hd[j];
            if (a.m != b.m || a.parity != b.parity || order(a) + order(b) > max_k) continue;
            ++products;
            if (!all_homotopy(shuffle(a, b))) ++bad;
        }
    r.pass = bad == 0;
    r.detail = std::to_string(hd.size()) + " diagrams, " + std::to_string(products) + " products, " +
               std::to_string(bad) + " leaving HD";
    return r;
}

CheckResult check_cohomology_duality(int max_m, int max_k, int max_m_k1) {
    CheckResult r{"cohomology_duality", true, ""};
    std::ostringstream os;
    int cases = 0;
    for (int m = 1; m <= max_m; ++m)
        for (Parity p : {Parity::odd, Parity::even})
            for (Space s : {Space::LD, Space::HD})
                for (int k = 1; k <= max_k; ++k) {
                    const auto& c = cached_cohomology(m, p, k, s);
                    ++cases;
                    bool ok = c.dim_kernel == c.dim_quotient && c.dim_kernel == c.dim_chord_quotient &&
                              c.kernel_orthogonal && c.dual_oracle_agrees;
                    if (!ok) {
                        r.pass = false;
                        os << "mismatch at m=" << m << " " << parity_name(p) << " " << space_name(s) << " k=" << k
                           << " (" << c.dim_kernel << "," << c.dim_quotient << "," << c.dim_chord_quotient << "); ";
                    }
                }
    for (int m = 1; m <= max_m_k1; ++m)
        for (Parity p : {Parity::odd, Parity::even}) {
            const auto& c = cached_cohomology(m, p, 1, Space::HD);
            const int want = m * (m - 1) / 2;
            if (c.dim_kernel != want || c.dim_quotient != want || c.dim_chord_quotient != want) {
                r.pass = false;
                os << "HD k=1 m=" << m << " " << parity_name(p) << " dims " << c.dim_kernel << "," << c.dim_quotient
                   << "," << c.dim_chord_quotient << " expected " << want << "; ";
            }
        }
    os << cases << " (m,parity,space,k) cases, HD k=1 checked up to m=" << max_m_k1;
    r.detail = os.str();
    return r;
}

CheckResult check_ihx_in_stu(int max_m, int max_k) {
    CheckResult r{"ihx_in_stu", true, ""};
    std::ostringstream os;
    int cases = 0;
    for (int m = 1; m <= max_m; ++m)
        for (Parity p : {Parity::odd, Parity::even})
            for (Space s : {Space::LD, Space::HD})
                for (int k = 1; k <= max_k; ++k) {
                    const auto& c = cached_cohomology(m, p, k, s);
                    ++cases;
                    if (c.rank_stu != c.rank_stu_ihx) {
                        r.pass = false;
                        os << "m=" << m << " " << parity_name(p) << " " << space_name(s) << " k=" << k << " rank "
                           << c.rank_stu << " vs " << c.rank_stu_ihx << "; ";
                    }
                }
    os << cases << " cases";
    r.detail = os.str();
    return r;
}

LinkDiagram five_graft_example() {
    DiagramBuilder b(4, Parity::odd);
    int x1 = b.seg(1), x2 = b.seg(1), x3 = b.seg(1), x4 = b.seg(1);
    int y1 = b.seg(2), y2 = b.seg(2), y3 = b.seg(2), y4 = b.seg(2);
    int z1 = b.seg(3), z2 = b.seg(3), z3 = b.seg(3), z4 = b.seg(3);
    int w1 = b.seg(4);
    int a = b.free_vertex(), p = b.free_vertex(), q = b.free_vertex();
    b.edge(x1, y1);                          // chord
    b.edge(x2, a).edge(y2, a).edge(z1, a);   // tripod
    b.edge(x3, z2);                          // chord
    b.edge(y3, z3);                          // chord
    b.edge(x4, p).edge(y4, p).edge(p, q).edge(z4, q).edge(w1, q);  // H graph
    return b.build();
}

CheckResult check_grafts(int max_m, int max_k) {
    CheckResult r{"grafts", true, ""};
    const LinkDiagram ex = five_graft_example();
    const std::size_t n_ex = grafts(ex).size();
    std::size_t n = 0, bad = 0;
    auto hd = corpus(max_m, max_k, 1, Space::HD);
    hd.push_back(ex);
    for (const auto& g : hd) {
        ++n;
        std::vector<int> seen(g.edges.size(), 0);
        for (const auto& gr : grafts(g)) {
            for (int c : gr.per_segment_counts)
                if (c > 1) ++bad;
            for (int e : gr.edges) ++seen[e];
        }
        for (int s : seen)
            if (s != 1) ++bad;
    }
    r.pass = n_ex == 5 && is_homotopy_diagram(ex) && bad == 0;
    r.detail = "worked example has " + std::to_string(n_ex) + " grafts; " + std::to_string(n) +
               " HD diagrams, " + std::to_string(bad) + " violations";
    return r;
}

// ---- numerical ------------------------------------------------------------------

StringLink product_link(int lk12, int lk13) {
    std::vector<Clasp> clasps;
    for (int q = 0; q < std::abs(lk12); ++q) clasps.push_back({0, 1, lk12 > 0 ? 1 : -1});
    for (int q = 0; q < std::abs(lk13); ++q) clasps.push_back({0, 2, lk13 > 0 ? 1 : -1});
    return clasp_link(3, clasps);
}

HomotopyTestLinks homotopy_test_links() {
    // strand 1 clasps strands 2 and 3 and carries a self finger around strand 2
    SingularLink H = build_fingers(3, {{0, 1, -7, -5, -1}, {0, 2, -3, -1, -1}, {0, 0, 2, 6, -1}});
    HomotopyTestLinks t;
    t.base = resolve(H, {true, true, true}, 0.05);
    t.self_changed = crossing_change(t.base, 0, H.doubles[2].point, 0.3);
    t.inter_changed = swap_crossing(t.base, H.doubles[0].point, 0.3);
    return t;
}

CheckResult check_gauss_oracle(int links, double n_sigma, double max_se, const NumericOptions& o) {
    CheckResult r{"gauss_oracle", true, ""};
    std::ostringstream os;
    const LinkDiagram g = chord_diagram(2, Parity::odd, 1, 2);
    double worst = 0, worst_se = 0;
    for (int s = 1; s <= links; ++s) {
        auto [L, built] = random_clasp_link(2, static_cast<std::uint64_t>(s));
        const int lk = signed_crossing_linking(L, 0, 1);
        MCEstimate e = mc_integrate(g, L, integrate_options(o));
        const double z = e.std_error > 0 ? std::abs(e.value - lk) / e.std_error : (e.value == lk ? 0 : INFINITY);
        worst = std::max(worst, z);
        worst_se = std::max(worst_se, e.std_error);
        if (lk != built || z > n_sigma || !(e.std_error < max_se)) {
            r.pass = false;
            os << "link " << s << ": lk=" << lk << " estimate " << fmt(e.value) << " +- " << fmt(e.std_error) << "; ";
        }
    }
    os << links << " links, worst deviation " << fmt(worst) << " sigma, largest std_error " << fmt(worst_se);
    r.detail = os.str();
    return r;
}

CheckResult check_product_identity(double n_sigma, const NumericOptions& o) {
    CheckResult r{"product_identity", true, ""};
    std::ostringstream os;
    const LinkDiagram c12 = chord_diagram(3, Parity::odd, 1, 2), c13 = chord_diagram(3, Parity::odd, 1, 3);
    const DiagramSum prod = shuffle(c12, c13);
    for (auto [a, b] : {std::pair{1, 1}, std::pair{2, -1}}) {
        StringLink L = product_link(a, b);
        if (signed_crossing_linking(L, 0, 1) != a || signed_crossing_linking(L, 0, 2) != b) {
            r.pass = false;
            os << "link (" << a << "," << b << ") has wrong crossing linking numbers; ";
            continue;
        }
        IntegrateOptions io = integrate_options(o);
        MCEstimate e1 = mc_integrate(c12, L, io);
        io.seed = o.seed + 1;
        MCEstimate e2 = mc_integrate(c13, L, io);
        io.seed = o.seed + 2;
        MCEstimate ep = universal_invariant(prod, L, io);
        const double expect = e1.value * e2.value;
        const double sigma = std::sqrt(ep.std_error * ep.std_error + std::pow(e2.value * e1.std_error, 2) +
                                       std::pow(e1.value * e2.std_error, 2));
        const bool ok = std::abs(ep.value - expect) <= n_sigma * sigma;
        r.pass = r.pass && ok;
        os << "(" << a << "," << b << "): I(product)=" << fmt(ep.value) << " I1*I2=" << fmt(expect)
           << " sigma=" << fmt(sigma) << "; ";
    }
    r.detail = os.str();
    return r;
}

CheckResult check_composition_k1(double n_sigma, double max_se, const NumericOptions& o) {
    CheckResult r{"composition_k1", true, ""};
    IntegrateOptions io = integrate_options(o);
    const LinkDiagram g2 = chord_diagram(2, Parity::odd, 1, 2);
    const LinkDiagram g12 = chord_diagram(3, Parity::odd, 1, 2), g13 = chord_diagram(3, Parity::odd, 1, 3);
    MCEstimate same = alternating_sum(g2, g2, io);
    MCEstimate other = alternating_sum(g13, g12, io);
    r.pass = within(same, 1.0, n_sigma) && within(other, 0.0, n_sigma) && same.std_error < max_se &&
             other.std_error < max_se;
    r.detail = "same=" + fmt(same.value) + " +- " + fmt(same.std_error) + ", different=" + fmt(other.value) +
               " +- " + fmt(other.std_error);
    return r;
}

CheckResult check_composition_k2(double n_sigma, double max_se, const NumericOptions& o) {
    CheckResult r{"composition_k2", true, ""};
    std::ostringstream os;
    IntegrateOptions io = integrate_options(o);
    const LinkDiagram A = two_chord(false), B = two_chord(true), T = tripod(3, Parity::odd);
    const std::vector<LinkDiagram> rows{A, B, T}, cols{A, B};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        // chord rows are taken in the orientation in which their integral is a
        // product of Gauss integrals
        const double eps = i < 2 ? chord_orientation_sign(rows[i]) : 1.0;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            MCEstimate e = alternating_sum(rows[i], cols[j], io);
            const double v = eps * e.value, expect = i == j ? 1.0 : 0.0;
            const bool ok = std::abs(v - expect) <= n_sigma * e.std_error && e.std_error < max_se;
            r.pass = r.pass && ok;
            os << (j ? " " : (i ? " | " : "")) << fmt(v) << "(" << fmt(e.std_error) << ")";
        }
    }
    r.detail = "rows A,B,tripod; columns A,B: " + os.str();
    return r;
}

CheckResult check_homotopy_invariance(double self_sigma, double inter_sigma, const NumericOptions& o) {
    CheckResult r{"homotopy_invariance", true, ""};
    std::ostringstream os;
    HomotopyTestLinks t = homotopy_test_links();
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (signed_crossing_linking(t.base, i, j) != signed_crossing_linking(t.self_changed, i, j)) {
                r.pass = false;
                os << "self crossing change altered lk; ";
            }
    if (signed_crossing_linking(t.base, 0, 1) == signed_crossing_linking(t.inter_changed, 0, 1)) {
        r.pass = false;
        os << "inter-strand change did not alter lk; ";
    }
    IntegrateOptions io = integrate_options(o);
    double worst_self = 0, best_inter = 0;
    int q = 0;
    for (const auto& w : kernel_defect_zero(3, Parity::odd, 2, Space::HD)) {
        ++q;
        MCEstimate s = universal_difference(w, t.base, t.self_changed, io);
        MCEstimate x = universal_difference(w, t.base, t.inter_changed, io);
        const double zs = s.std_error > 0 ? std::abs(s.value) / s.std_error : (s.value == 0 ? 0 : INFINITY);
        const double zx = x.std_error > 0 ? std::abs(x.value) / x.std_error : 0;
        worst_self = std::max(worst_self, zs);
        best_inter = std::max(best_inter, zx);
        os << "w" << q << " self " << fmt(s.value) << "(" << fmt(s.std_error) << ") inter " << fmt(x.value) << "("
           << fmt(x.std_error) << "); ";
    }
    r.pass = r.pass && q > 0 && worst_self < self_sigma && best_inter > inter_sigma;
    os << "max self deviation " << fmt(worst_self) << " sigma, max inter change " << fmt(best_inter) << " sigma";
    r.detail = os.str();
    return r;
}

CheckResult check_determinism(const NumericOptions& o) {
    CheckResult r{"determinism", true, ""};
    const LinkDiagram g = two_chord(false);
    const StringLink L = product_link(1, 1);
    const DiagramSum w = kernel_defect_zero(3, Parity::odd, 2, Space::HD).back();
    const LinkDiagram c12 = chord_diagram(2, Parity::odd, 1, 2);
    IntegrateOptions io = integrate_options(o);
    std::vector<std::string> ref;
    int runs = 0;
    for (int workers : {1, 2, 3, 1}) {
        io.workers = workers;
        std::vector<std::string> out{report(mc_integrate(g, L, io)), report(universal_invariant(w, L, io)),
                                     report(alternating_sum(c12, c12, io))};
        if (ref.empty()) ref = out;
        if (out != ref) r.pass = false;
        ++runs;
    }
    r.detail = std::string(r.pass ? "identical" : "differing") +
               " reports for mc_integrate, universal_invariant and alternating_sum over " + std::to_string(runs) +
               " runs with 1, 2, 3 and again 1 workers";
    return r;
}

std::vector<CheckResult> run_verify(const VerifyOptions& opt) {
    NumericOptions no;
    no.seed = opt.seed;
    no.workers = opt.workers;
    no.samples = opt.samples ? opt.samples : (opt.full ? 1000000 : 200000);
    std::vector<CheckResult> out;
    const int M = opt.full ? 3 : 2, K = opt.full ? 3 : 2;
    out.push_back(check_delta_squared(M, K, 1, opt.inject_sign_bug));
    out.push_back(check_leibniz_commutativity(M, K, opt.full ? 200 : 50, opt.seed, opt.inject_sign_bug));
    out.push_back(check_hd_closure(M, K, 1));
    out.push_back(check_cohomology_duality(M, K, opt.full ? 4 : 3));
    out.push_back(check_ihx_in_stu(M, K));
    out.push_back(check_grafts(M, K));
    out.push_back(check_gauss_oracle(opt.full ? 10 : 3, 4.0, 0.05, no));
    out.push_back(check_composition_k1(3.0, 0.05, no));
    if (opt.full) {
        out.push_back(check_product_identity(3.0, no));
        out.push_back(check_composition_k2(3.0, 0.1, no));
        out.push_back(check_homotopy_invariance(3.0, 5.0, no));
    }
    NumericOptions nd = no;
    nd.samples = std::min<std::uint64_t>(no.samples, 50000);
    out.push_back(check_determinism(nd));
    return out;
}

}  // namespace holink
