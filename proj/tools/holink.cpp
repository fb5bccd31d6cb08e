#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "holink/algebra.hpp"
#include "holink/integrate.hpp"
#include "holink/linkgeom.hpp"
#include "holink/verify.hpp"

using namespace holink;

namespace {

constexpr int kOk = 0, kUsage = 1, kResource = 2, kVerifyFailed = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

bool looks_like_diagram(const std::string& text) {
    auto p = text.find_first_not_of(" \t\r\n");
    return p != std::string::npos && text.compare(p, 7, "diagram") == 0;
}

DiagramSum read_sum(const std::string& path) {
    std::string text = read_input(path);
    if (looks_like_diagram(text)) return DiagramSum::of(parse_diagram(text));
    return parse_sum(text);
}

LinkDiagram read_diagram(const std::string& path) { return parse_diagram(read_input(path)); }

// HOLINK_THREADS caps the worker count; 0 means the default.
int effective_workers(int requested) {
    int w = requested > 0 ? requested : default_workers();
    if (const char* env = std::getenv("HOLINK_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) w = std::min(w, cap);
    }
    return std::max(1, w);
}

std::vector<bool> parse_signs(const std::string& s) {
    std::vector<bool> out;
    for (char c : s) {
        if (c == '+') out.push_back(true);
        else if (c == '-') out.push_back(false);
        else throw UsageError("signs must be a string of + and -");
    }
    return out;
}

Clasp parse_clasp(const std::string& s) {
    // from:to:sign with 1-based strands
    std::istringstream is(s);
    int a = 0, b = 0, sign = 0;
    char c1 = 0, c2 = 0;
    if (!(is >> a >> c1 >> b >> c2 >> sign) || c1 != ':' || c2 != ':' || (sign != 1 && sign != -1))
        throw UsageError("clasp must look like 1:2:+1");
    return {a - 1, b - 1, sign};
}

struct Common {
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    int workers = 0;
    IntegrateOptions options() const {
        IntegrateOptions o;
        o.samples = samples;
        o.seed = seed;
        o.workers = effective_workers(workers);
        return o;
    }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--samples", c.samples, "Monte Carlo sample count")->check(CLI::Range(1ULL, 1ULL << 40));
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--workers", c.workers, "worker threads (0: HOLINK_THREADS or hardware)")->check(CLI::Range(0, 1024));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"holink: link diagram complexes and configuration space integrals"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("-o,--out", out_path, "output file (default stdout)");

    // enumerate
    int m = 2, defect_v = 0, order_v = 1;
    std::string parity_s = "odd", space_s = "hd";
    auto* en = app.add_subcommand("enumerate", "list the canonical diagrams of a basis");
    en->add_option("--m", m, "number of strands")->required()->check(CLI::Range(1, 8));
    en->add_option("--parity", parity_s)->check(CLI::IsMember({"odd", "even"}));
    en->add_option("--defect", defect_v)->check(CLI::Range(0, 8));
    en->add_option("--order", order_v)->required()->check(CLI::Range(0, 8));
    en->add_option("--space", space_s)->check(CLI::IsMember({"hd", "ld"}));

    // differential / shuffle
    std::string in_a, in_b;
    bool inject = false;
    auto* di = app.add_subcommand("differential", "apply the differential to a diagram or sum");
    di->add_option("input", in_a, "diagram or sum file ('-' for stdin)")->required();
    di->add_flag("--inject-sign-bug", inject, "test mode: perturb one contraction sign");
    auto* sh = app.add_subcommand("shuffle", "shuffle product of two diagrams or sums");
    sh->add_option("a", in_a)->required();
    sh->add_option("b", in_b)->required();

    // cohomology
    auto* co = app.add_subcommand("cohomology", "defect-zero cohomology with duality cross-checks");
    co->add_option("--m", m)->required()->check(CLI::Range(1, 6));
    co->add_option("--parity", parity_s)->check(CLI::IsMember({"odd", "even"}));
    co->add_option("--order", order_v)->required()->check(CLI::Range(1, 5));
    co->add_option("--space", space_s)->check(CLI::IsMember({"hd", "ld"}));

    // reduce
    std::string order_s = "least";
    auto* re = app.add_subcommand("reduce", "STU-reduce a diagram or sum to chord diagrams");
    re->add_option("input", in_a)->required();
    re->add_option("--space", space_s)->check(CLI::IsMember({"hd", "ld"}));
    re->add_option("--choice", order_s, "which free vertex to resolve first")
        ->check(CLI::IsMember({"least", "greatest"}));

    // grafts
    auto* gr = app.add_subcommand("grafts", "graft decomposition of a diagram");
    gr->add_option("input", in_a)->required();

    // link-make
    std::string kind = "trivial";
    std::vector<std::string> clasp_specs;
    std::uint64_t link_seed = 1;
    double perturbation = 0.15;
    auto* lm = app.add_subcommand("link-make", "build a trivial, clasp or random clasp link");
    lm->add_option("--kind", kind)->check(CLI::IsMember({"trivial", "clasp", "random"}));
    lm->add_option("--m", m)->check(CLI::Range(1, 16));
    lm->add_option("--clasp", clasp_specs, "from:to:sign, 1-based, repeatable");
    lm->add_option("--seed", link_seed);
    lm->add_option("--perturbation", perturbation)->check(CLI::Range(0.01, 0.3));

    // link-lk
    auto* lk = app.add_subcommand("link-lk", "pairwise linking numbers from projection crossings");
    lk->add_option("link", in_a)->required();
    lk->add_option("--seed", link_seed);

    // singular / resolve
    double radius = 0.1;
    std::string signs;
    auto* si = app.add_subcommand("singular", "singular link realizing a homotopy chord diagram");
    si->add_option("diagram", in_a)->required();
    si->add_option("--radius", radius)->check(CLI::Range(0.02, 0.3));
    auto* rs = app.add_subcommand("resolve", "resolve the double points of a singular link");
    rs->add_option("singular", in_a)->required();
    rs->add_option("--signs", signs, "one + or - per double point")->required();
    rs->add_option("--perturbation", perturbation)->check(CLI::Range(0.005, 0.3));

    // integrate
    Common com;
    std::string diagram_path, cocycle_path, link_path, trace_path;
    auto* in = app.add_subcommand("integrate", "Monte Carlo configuration space integral");
    auto* od = in->add_option("--diagram", diagram_path, "single defect-zero diagram");
    auto* oc = in->add_option("--cocycle", cocycle_path, "defect-zero cocycle sum");
    od->excludes(oc);
    in->add_option("--link", link_path)->required();
    in->add_option("--space", space_s)->check(CLI::IsMember({"hd", "ld"}));
    in->add_option("--trace", trace_path, "CSV file for the running mean");
    add_common(in, com);

    // alternating-sum
    std::string gprime_path, g_path;
    auto* al = app.add_subcommand("alternating-sum", "sum over resolutions of the singular link of g");
    al->add_option("gprime", gprime_path)->required();
    al->add_option("g", g_path)->required();
    add_common(al, com);

    // verify
    bool full = false;
    std::uint64_t verify_samples = 0;
    auto* ve = app.add_subcommand("verify", "run the property battery");
    ve->add_flag("--full", full, "acceptance-scale battery");
    ve->add_flag("--inject-sign-bug", inject, "test mode: perturb one contraction sign");
    ve->add_option("--samples", verify_samples);
    ve->add_option("--seed", com.seed);
    ve->add_option("--workers", com.workers)->check(CLI::Range(0, 1024));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        std::ostringstream os;
        if (*en) {
            auto list = enumerate(m, parse_parity(parity_s), defect_v, order_v, parse_space(space_s));
            for (const auto& g : list) os << to_text(g) << "\n";
            os << "count=" << list.size() << "\n";
        } else if (*di) {
            DifferentialOptions opt;
            opt.inject_sign_bug = inject;
            os << to_text(differential(read_sum(in_a), opt));
        } else if (*sh) {
            os << to_text(shuffle(read_sum(in_a), read_sum(in_b)));
        } else if (*co) {
            const Parity p = parse_parity(parity_s);
            const Space s = parse_space(space_s);
            CohomologyReport c = cohomology(m, p, order_v, s);
            os << "m=" << m << "\nparity=" << parity_name(p) << "\nspace=" << space_name(s) << "\norder=" << order_v
               << "\nbasis_defect0=" << c.n0 << "\nbasis_defect1=" << c.n1 << "\nrank_delta=" << c.rank_delta
               << "\nrank_generators=" << c.rank_generators << "\nrank_stu=" << c.rank_stu
               << "\nrank_stu_ihx=" << c.rank_stu_ihx << "\nchord_basis=" << c.n_chord
               << "\nrank_chord_relations=" << c.rank_chord_relations << "\ndim_kernel=" << c.dim_kernel
               << "\ndim_quotient=" << c.dim_quotient << "\ndim_chord_quotient=" << c.dim_chord_quotient
               << "\nkernel_orthogonal=" << (c.kernel_orthogonal ? "true" : "false")
               << "\ndual_oracle_agrees=" << (c.dual_oracle_agrees ? "true" : "false") << "\n";
            for (std::size_t q = 0; q < c.kernel.size(); ++q)
                os << "cocycle " << q + 1 << ":\n" << to_text(c.kernel[q]);
            write_output(out_path, os.str());
            const bool ok = c.dim_kernel == c.dim_quotient && c.dim_kernel == c.dim_chord_quotient &&
                            c.kernel_orthogonal && c.dual_oracle_agrees;
            return ok ? kOk : kVerifyFailed;
        } else if (*re) {
            const Space s = parse_space(space_s);
            DiagramSum x = read_sum(in_a);
            Reduction r = stu_reduce(x, s, order_s == "least" ? ReduceOrder::least : ReduceOrder::greatest);
            const bool ok = check_certificate(x, r, s);
            os << to_text(r.result) << "steps=" << r.steps.size() << "\ncertificate=" << (ok ? "valid" : "invalid")
               << "\n";
            write_output(out_path, os.str());
            return ok ? kOk : kVerifyFailed;
        } else if (*gr) {
            LinkDiagram g = read_diagram(in_a);
            auto list = grafts(g);
            for (std::size_t q = 0; q < list.size(); ++q) {
                const auto& gf = list[q];
                os << "graft " << q + 1 << ": vertices=[";
                for (std::size_t i = 0; i < gf.vertices.size(); ++i) os << (i ? "," : "") << "v" << gf.vertices[i];
                os << "] per_segment=[";
                for (std::size_t i = 0; i < gf.per_segment_counts.size(); ++i)
                    os << (i ? "," : "") << gf.per_segment_counts[i];
                os << "] free=" << gf.free_count << "\n  " << to_text(gf.sub) << "\n";
            }
            os << "count=" << list.size() << "\n";
        } else if (*lm) {
            StringLink L;
            if (kind == "trivial") {
                L = trivial_link(m);
            } else if (kind == "clasp") {
                std::vector<Clasp> clasps;
                for (const auto& s : clasp_specs) clasps.push_back(parse_clasp(s));
                if (clasps.empty()) throw UsageError("clasp links need at least one --clasp");
                L = clasp_link(m, clasps, {}, perturbation);
            } else {
                L = random_clasp_link(m, link_seed).first;
            }
            os << to_text(L);
        } else if (*lk) {
            StringLink L = parse_link(read_input(in_a));
            for (int i = 0; i < L.m; ++i)
                for (int j = i + 1; j < L.m; ++j)
                    os << "lk(" << i + 1 << "," << j + 1 << ")=" << signed_crossing_linking(L, i, j, link_seed) << "\n";
        } else if (*si) {
            FingerOptions fo;
            fo.radius = radius;
            os << to_text(build_singular_link(read_diagram(in_a), fo));
        } else if (*rs) {
            SingularLink H = parse_singular_link(read_input(in_a));
            auto pos = parse_signs(signs);
            if (pos.size() != H.doubles.size())
                throw UsageError("need " + std::to_string(H.doubles.size()) + " signs");
            os << to_text(resolve(H, pos, perturbation));
        } else if (*in) {
            if (diagram_path.empty() == cocycle_path.empty()) throw UsageError("give exactly one of --diagram, --cocycle");
            StringLink L = parse_link(read_input(link_path));
            IntegrateOptions o = com.options();
            std::vector<std::pair<std::uint64_t, double>> trace;
            if (!trace_path.empty()) o.trace = &trace;
            if (!diagram_path.empty()) {
                LinkDiagram g = read_diagram(diagram_path);
                MCEstimate e = mc_integrate(g, L, o);
                os << report(e, FiberSampler(g, L, o).graft_dimensions());
            } else {
                os << report(universal_invariant(read_sum(cocycle_path), L, o, parse_space(space_s)));
            }
            if (!trace_path.empty() && !trace.empty()) {
                std::ostringstream csv;
                csv << "samples,mean\n";
                csv.precision(17);
                for (auto [n, v] : trace) csv << n << "," << v << "\n";
                write_output(trace_path, csv.str());
            }
        } else if (*al) {
            os << report(alternating_sum(read_diagram(gprime_path), read_diagram(g_path), com.options()));
        } else if (*ve) {
            VerifyOptions vo;
            vo.full = full;
            vo.inject_sign_bug = inject;
            vo.seed = com.seed;
            vo.samples = verify_samples;
            vo.workers = effective_workers(com.workers);
            bool all = true;
            for (const auto& r : run_verify(vo)) {
                os << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
                all = all && r.pass;
            }
            os << "result=" << (all ? "pass" : "fail") << "\n";
            write_output(out_path, os.str());
            return all ? kOk : kVerifyFailed;
        }
        write_output(out_path, os.str());
        return kOk;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
