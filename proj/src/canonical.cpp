// Canonical labeling by individualization/refinement over free vertices.
#include "holink/diagram.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace holink {

namespace {

int perm_sign(std::vector<int> p) {
    int s = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (p[i] != static_cast<int>(i)) {
            std::swap(p[i], p[p[i]]);
            s = -s;
        }
    }
    return s;
}

// Sign of the stable sort permutation of keys (inversion parity).
template <class T>
int sort_sign(const std::vector<T>& keys) {
    int inv = 0;
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = i + 1; j < keys.size(); ++j)
            if (keys[j] < keys[i]) ++inv;
    return inv % 2 ? -1 : 1;
}

}  // namespace

Relabeled relabel(const LinkDiagram& g, const std::vector<int>& free_perm) {
    const int S = g.n_seg();
    auto map = [&](int v) { return v < S ? v : S + free_perm[v - S]; };
    Relabeled r;
    r.diagram = g;
    int sign = g.parity == Parity::odd ? perm_sign(free_perm) : 1;
    auto& edges = r.diagram.edges;
    for (auto& e : edges) {
        e.a = map(e.a);
        e.b = map(e.b);
        if (g.parity == Parity::odd) {
            if (e.a == e.b) {
                if (e.loop_flag == -1) sign = -sign;
                e.loop_flag = 1;
            } else if (e.a > e.b) {
                std::swap(e.a, e.b);
                sign = -sign;
            }
        } else {
            if (e.a > e.b) std::swap(e.a, e.b);
            e.loop_flag = 1;
        }
        e.kind = kind_for(r.diagram, e.a, e.b);
    }
    if (g.parity == Parity::even) sign *= sort_sign(edges);
    std::stable_sort(edges.begin(), edges.end());
    r.sign = sign;
    return r;
}

namespace {

struct Canonizer {
    const LinkDiagram& g;
    int S, F;
    std::vector<std::vector<int>> adj;  // over all vertices
    bool have_best = false;
    std::vector<Edge> best;
    LinkDiagram best_diagram;
    int best_sign = 1;
    bool sign_conflict = false;
    std::uint64_t best_count = 0;

    explicit Canonizer(const LinkDiagram& d) : g(d), S(d.n_seg()), F(d.n_free) {
        adj.assign(g.n_vertices(), {});
        for (const auto& e : g.edges) {
            if (e.a == e.b) continue;
            adj[e.a].push_back(e.b);
            adj[e.b].push_back(e.a);
        }
    }

    static int rank_keys(std::vector<std::vector<int>>& sigs, std::vector<int>& colors) {
        std::vector<std::vector<int>> sorted = sigs;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (std::size_t i = 0; i < sigs.size(); ++i)
            colors[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sigs[i]) - sorted.begin());
        return static_cast<int>(sorted.size());
    }

    int refine(std::vector<int>& colors) const {
        int ncol = -1;
        while (true) {
            std::vector<std::vector<int>> sigs(F);
            for (int f = 0; f < F; ++f) {
                std::vector<int> nb;
                for (int u : adj[S + f]) nb.push_back(u < S ? u : S + colors[u - S]);
                std::sort(nb.begin(), nb.end());
                sigs[f].push_back(colors[f]);
                sigs[f].insert(sigs[f].end(), nb.begin(), nb.end());
            }
            int n = rank_keys(sigs, colors);
            if (n == ncol) return n;
            ncol = n;
        }
    }

    void leaf(const std::vector<int>& colors) {
        Relabeled r = relabel(g, colors);
        if (!have_best || r.diagram.edges < best) {
            have_best = true;
            best = r.diagram.edges;
            best_diagram = std::move(r.diagram);
            best_sign = r.sign;
            best_count = 1;
            sign_conflict = false;
        } else if (r.diagram.edges == best) {
            ++best_count;
            if (r.sign != best_sign) sign_conflict = true;
        }
    }

    void search(std::vector<int> colors) {
        int ncol = refine(colors);
        if (ncol == F) {
            leaf(colors);
            return;
        }
        std::vector<int> size(ncol, 0);
        for (int c : colors) ++size[c];
        int target = -1;
        for (int c = 0; c < ncol; ++c)
            if (size[c] > 1) {
                target = c;
                break;
            }
        for (int f = 0; f < F; ++f) {
            if (colors[f] != target) continue;
            std::vector<std::vector<int>> sigs(F);
            for (int h = 0; h < F; ++h) sigs[h] = {colors[h], (colors[h] == target && h != f) ? 1 : 0};
            std::vector<int> next(F);
            rank_keys(sigs, next);
            search(std::move(next));
        }
    }

    void run() {
        std::vector<std::vector<int>> sigs(F);
        for (int f = 0; f < F; ++f) sigs[f] = {static_cast<int>(adj[S + f].size())};
        std::vector<int> colors(F);
        rank_keys(sigs, colors);
        search(std::move(colors));
    }
};

}  // namespace

NormalizedDiagram normalize(const LinkDiagram& g) {
    if (has_repeated_edge(g)) {
        std::vector<int> id(g.n_free);
        std::iota(id.begin(), id.end(), 0);
        return {relabel(g, id).diagram, 0};
    }
    Canonizer c(g);
    c.run();
    return {c.best_diagram, c.sign_conflict ? 0 : c.best_sign};
}

std::optional<int> is_isomorphic(const LinkDiagram& a, const LinkDiagram& b) {
    if (a.m != b.m || a.parity != b.parity)
        throw std::invalid_argument("is_isomorphic: m/parity mismatch");
    if (a.seg_sizes != b.seg_sizes || a.n_free != b.n_free || a.edges.size() != b.edges.size())
        return std::nullopt;
    auto na = normalize(a), nb = normalize(b);
    if (na.canonical != nb.canonical) return std::nullopt;
    return na.sign * nb.sign;
}

std::uint64_t aut_order(const LinkDiagram& g) {
    Canonizer c(g);
    c.run();
    return c.best_count;
}

}  // namespace holink
