#include <algorithm>
#include <set>

#include "holink/diagram.hpp"

namespace holink {

namespace {

struct Enumerator {
    int m;
    Parity parity;
    Space space;
    const EnumerateOptions& opt;
    std::set<LinkDiagram> found;
    std::size_t candidates = 0;

    LinkDiagram cur;
    std::vector<int> rem;
    std::vector<char> has_loop;
    std::set<std::pair<int, int>> present;

    Enumerator(int m_, Parity p, Space s, const EnumerateOptions& o) : m(m_), parity(p), space(s), opt(o) {}

    void emit() {
        if (++candidates > opt.max_candidates)
            throw ResourceError("enumerate: candidate bound exceeded");
        if (!validate(cur).empty()) return;
        if (space == Space::HD && !is_homotopy_diagram(cur)) return;
        NormalizedDiagram n = normalize(cur);
        if (n.sign == 0) return;
        found.insert(std::move(n.canonical));
        if (found.size() > opt.max_results) throw ResourceError("enumerate: result bound exceeded");
    }

    // Places the remaining endpoints of vertex v, with partners >= lo.
    void place(int v, int lo) {
        const int V = cur.n_vertices();
        while (v < V && rem[v] == 0) {
            ++v;
            lo = v;
        }
        if (v == V) {
            emit();
            return;
        }
        const int S = cur.n_seg();
        for (int u = lo; u < V; ++u) {
            if (u == v) {
                if (v >= S || rem[v] < 2 || has_loop[v]) continue;
                if (space == Space::HD) continue;
                has_loop[v] = 1;
                rem[v] -= 2;
                cur.edges.push_back({EdgeKind::loop, v, v, 1});
                place(v, u + 1);
                cur.edges.pop_back();
                rem[v] += 2;
                has_loop[v] = 0;
                continue;
            }
            if (rem[u] == 0 || present.count({v, u})) continue;
            if (space == Space::HD && v < S && u < S && cur.segment_of(v) == cur.segment_of(u)) continue;
            present.insert({v, u});
            --rem[v];
            --rem[u];
            cur.edges.push_back({kind_for(cur, v, u), v, u, 1});
            place(v, u + 1);
            cur.edges.pop_back();
            ++rem[v];
            ++rem[u];
            present.erase({v, u});
        }
    }

    // Distributes `excess` over vertices; free degrees kept non-increasing.
    void distribute(int idx, int excess, std::vector<int>& extra) {
        const int V = cur.n_vertices();
        const int S = cur.n_seg();
        if (idx == V) {
            if (excess != 0) return;
            rem.assign(V, 0);
            for (int v = 0; v < V; ++v) rem[v] = (v < S ? 1 : 3) + extra[v];
            int total = 0;
            for (int r : rem) total += r;
            if (total % 2) return;
            has_loop.assign(V, 0);
            present.clear();
            cur.edges.clear();
            place(0, 0);
            return;
        }
        int hi = excess;
        if (idx > S) hi = std::min(hi, extra[idx - 1]);
        for (int x = 0; x <= hi; ++x) {
            extra[idx] = x;
            distribute(idx + 1, excess - x, extra);
        }
        extra[idx] = 0;
    }

    void compositions(int j, int left, std::vector<int>& sizes, int F, int d) {
        if (j == m - 1) {
            sizes[j] = left;
            cur = LinkDiagram(m, parity);
            cur.seg_sizes = sizes;
            cur.n_free = F;
            std::vector<int> extra(cur.n_vertices(), 0);
            distribute(0, d, extra);
            return;
        }
        for (int s = 0; s <= left; ++s) {
            sizes[j] = s;
            compositions(j + 1, left - s, sizes, F, d);
        }
    }
};

}  // namespace

std::vector<LinkDiagram> enumerate(int m, Parity parity, int d, int k, Space space, const EnumerateOptions& opt) {
    if (m < 1 || d < 0 || k < 0) throw std::invalid_argument("enumerate: need m >= 1, d >= 0, k >= 0");
    const int V = 2 * k - d;
    std::vector<LinkDiagram> out;
    if (V < 0) return out;
    Enumerator en(m, parity, space, opt);
    for (int F = 0; F <= V; ++F) {
        int S = V - F;
        int E = k + F;
        if (2 * E != 3 * F + S + d) continue;
        std::vector<int> sizes(m, 0);
        en.compositions(0, S, sizes, F, d);
    }
    out.assign(en.found.begin(), en.found.end());
    // deterministic order: by free count, segment sizes, edges (set order)
    return out;
}

}  // namespace holink
