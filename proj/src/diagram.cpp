#include "holink/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

namespace holink {

int LinkDiagram::n_seg() const {
    return std::accumulate(seg_sizes.begin(), seg_sizes.end(), 0);
}

int LinkDiagram::segment_of(int v) const {
    int acc = 0;
    for (int j = 0; j < m; ++j) {
        acc += seg_sizes[j];
        if (v < acc) return j;
    }
    return -1;
}

int LinkDiagram::position_of(int v) const {
    int acc = 0;
    for (int j = 0; j < m; ++j) {
        if (v < acc + seg_sizes[j]) return v - acc;
        acc += seg_sizes[j];
    }
    return v - acc;
}

int LinkDiagram::seg_vertex(int seg, int pos) const {
    int acc = 0;
    for (int j = 0; j < seg; ++j) acc += seg_sizes[j];
    return acc + pos;
}

std::vector<std::vector<int>> LinkDiagram::segment_vertices() const {
    std::vector<std::vector<int>> out(m);
    int id = 0;
    for (int j = 0; j < m; ++j)
        for (int p = 0; p < seg_sizes[j]; ++p) out[j].push_back(id++);
    return out;
}

std::vector<int> LinkDiagram::free_vertices() const {
    std::vector<int> out(n_free);
    std::iota(out.begin(), out.end(), n_seg());
    return out;
}

std::vector<int> LinkDiagram::endpoint_counts() const {
    std::vector<int> c(n_vertices(), 0);
    for (const auto& e : edges) {
        ++c[e.a];
        ++c[e.b];
    }
    return c;
}

bool LinkDiagram::operator<(const LinkDiagram& o) const {
    if (m != o.m) return m < o.m;
    if (parity != o.parity) return parity < o.parity;
    if (n_free != o.n_free) return n_free < o.n_free;
    if (seg_sizes != o.seg_sizes) return seg_sizes < o.seg_sizes;
    return edges < o.edges;
}

EdgeKind kind_for(const LinkDiagram& g, int a, int b) {
    if (a == b) return EdgeKind::loop;
    bool fa = g.is_free(a), fb = g.is_free(b);
    if (fa && fb) return EdgeKind::free;
    if (fa || fb) return EdgeKind::mixed;
    return EdgeKind::chord;
}

int DiagramBuilder::seg(int segment) {
    int pos = 0;
    for (auto& h : handles_)
        if (!h.free && h.seg == segment - 1) ++pos;
    handles_.push_back({false, segment - 1, pos});
    return static_cast<int>(handles_.size()) - 1;
}

int DiagramBuilder::free_vertex() {
    int pos = 0;
    for (auto& h : handles_)
        if (h.free) ++pos;
    handles_.push_back({true, -1, pos});
    return static_cast<int>(handles_.size()) - 1;
}

DiagramBuilder& DiagramBuilder::edge(int a, int b, int loop_flag) {
    pending_.push_back({{a, b}, loop_flag});
    return *this;
}

LinkDiagram DiagramBuilder::build() const {
    LinkDiagram out = g;
    std::fill(out.seg_sizes.begin(), out.seg_sizes.end(), 0);
    out.n_free = 0;
    for (auto& h : handles_) {
        if (h.free)
            ++out.n_free;
        else
            ++out.seg_sizes[h.seg];
    }
    auto id = [&](int h) {
        const Handle& hd = handles_[h];
        if (hd.free) return out.n_seg() + hd.pos;
        return out.seg_vertex(hd.seg, hd.pos);
    };
    out.edges.clear();
    for (auto& [ab, flag] : pending_) {
        Edge e;
        e.a = id(ab.first);
        e.b = id(ab.second);
        e.kind = kind_for(out, e.a, e.b);
        e.loop_flag = e.kind == EdgeKind::loop ? flag : 1;
        out.edges.push_back(e);
    }
    return out;
}

LinkDiagram chord_diagram(int m, Parity p, int seg_a, int seg_b) {
    DiagramBuilder b(m, p);
    int x = b.seg(seg_a);
    int y = b.seg(seg_b);
    b.edge(x, y);
    return b.build();
}

LinkDiagram tripod(int m, Parity p, int s1, int s2, int s3) {
    DiagramBuilder b(m, p);
    int x = b.seg(s1), y = b.seg(s2), z = b.seg(s3);
    int u = b.free_vertex();
    b.edge(x, u).edge(y, u).edge(z, u);
    return b.build();
}

LinkDiagram empty_diagram(int m, Parity p) { return LinkDiagram(m, p); }

static std::string vname(int v) { return "v" + std::to_string(v); }

std::vector<std::string> validate(const LinkDiagram& g) {
    std::vector<std::string> out;
    if (g.m < 1) out.push_back("diagram: m must be positive");
    if (static_cast<int>(g.seg_sizes.size()) != g.m) {
        out.push_back("diagram: segment list count differs from m");
        return out;
    }
    for (int s : g.seg_sizes)
        if (s < 0) out.push_back("diagram: negative segment size");
    if (g.n_free < 0) out.push_back("diagram: negative free vertex count");
    if (!out.empty()) return out;
    const int V = g.n_vertices();
    bool ids_ok = true;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        std::string tag = "edge " + std::to_string(i);
        if (e.a < 0 || e.a >= V || e.b < 0 || e.b >= V) {
            out.push_back(tag + ": endpoint references a missing vertex");
            ids_ok = false;
            continue;
        }
        if (e.kind != kind_for(g, e.a, e.b)) {
            if (e.a == e.b && g.is_free(e.a))
                out.push_back(tag + ": loop at a free vertex");
            else
                out.push_back(tag + ": edge kind inconsistent with endpoints");
        }
        if (e.kind == EdgeKind::loop && e.loop_flag != 1 && e.loop_flag != -1)
            out.push_back(tag + ": loop flag must be +1 or -1");
    }
    if (!ids_ok) return out;
    auto cnt = g.endpoint_counts();
    const int S = g.n_seg();
    for (int v = 0; v < V; ++v) {
        if (g.is_free(v)) {
            if (cnt[v] < 3) out.push_back("free vertex " + vname(v) + ": free vertex valence < 3");
        } else if (cnt[v] + 2 < 3) {
            out.push_back("segment vertex " + vname(v) + ": segment vertex valence < 3");
        }
    }
    // reachability of a segment vertex from every free vertex
    std::vector<std::vector<int>> adj(V);
    for (const auto& e : g.edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::vector<char> seen(V, 0);
    std::queue<int> q;
    for (int v = 0; v < S; ++v) {
        seen[v] = 1;
        q.push(v);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                q.push(u);
            }
    }
    for (int v = S; v < V; ++v)
        if (!seen[v]) out.push_back("free vertex " + vname(v) + ": free vertex has no path to segment vertex");
    return out;
}

int defect(const LinkDiagram& g) {
    return 2 * static_cast<int>(g.edges.size()) - 3 * g.n_free - g.n_seg();
}

int order(const LinkDiagram& g) { return static_cast<int>(g.edges.size()) - g.n_free; }

int main_degree(const LinkDiagram& g, int n) {
    if (n < 3) throw std::invalid_argument("main_degree requires n >= 3");
    return order(g) * (n - 3) + defect(g);
}

int sign_degree(const LinkDiagram& g) {
    int d = defect(g);
    int deg = g.parity == Parity::odd ? d : d + order(g);
    return ((deg % 2) + 2) % 2;
}

bool has_repeated_edge(const LinkDiagram& g) {
    std::vector<std::pair<int, int>> keys;
    keys.reserve(g.edges.size());
    for (const auto& e : g.edges) keys.push_back({std::min(e.a, e.b), std::max(e.a, e.b)});
    std::sort(keys.begin(), keys.end());
    return std::adjacent_find(keys.begin(), keys.end()) != keys.end();
}

std::vector<Graft> grafts(const LinkDiagram& g) {
    const int E = static_cast<int>(g.edges.size());
    std::vector<int> parent(E);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<int> first_at(g.n_vertices(), -1);
    for (int i = 0; i < E; ++i) {
        for (int v : {g.edges[i].a, g.edges[i].b}) {
            if (!g.is_free(v)) continue;
            if (first_at[v] < 0)
                first_at[v] = i;
            else
                parent[find(i)] = find(first_at[v]);
        }
    }
    std::vector<std::vector<int>> comp_edges;
    std::vector<int> root_to_comp(E, -1);
    for (int i = 0; i < E; ++i) {
        int r = find(i);
        if (root_to_comp[r] < 0) {
            root_to_comp[r] = static_cast<int>(comp_edges.size());
            comp_edges.emplace_back();
        }
        comp_edges[root_to_comp[r]].push_back(i);
    }
    std::vector<Graft> out;
    for (auto& ce : comp_edges) {
        Graft gr;
        gr.edges = ce;
        for (int i : ce) {
            gr.vertices.push_back(g.edges[i].a);
            gr.vertices.push_back(g.edges[i].b);
        }
        std::sort(gr.vertices.begin(), gr.vertices.end());
        gr.vertices.erase(std::unique(gr.vertices.begin(), gr.vertices.end()), gr.vertices.end());
        LinkDiagram sub(g.m, g.parity);
        std::vector<int> newid(g.n_vertices(), -1);
        for (int v : gr.vertices) {
            if (g.is_free(v))
                ++sub.n_free;
            else
                ++sub.seg_sizes[g.segment_of(v)];
        }
        int next = 0;
        for (int v : gr.vertices) newid[v] = next++;  // sorted order is already global order
        for (int i : ce) {
            Edge e = g.edges[i];
            e.a = newid[e.a];
            e.b = newid[e.b];
            e.kind = kind_for(sub, e.a, e.b);
            sub.edges.push_back(e);
        }
        gr.per_segment_counts = sub.seg_sizes;
        gr.free_count = sub.n_free;
        gr.sub = std::move(sub);
        out.push_back(std::move(gr));
    }
    std::sort(out.begin(), out.end(), [](const Graft& x, const Graft& y) {
        if (x.vertices != y.vertices) return x.vertices < y.vertices;
        return x.edges < y.edges;
    });
    return out;
}

bool is_homotopy_diagram(const LinkDiagram& g) {
    const int V = g.n_vertices();
    std::vector<std::vector<int>> adj(V);
    for (const auto& e : g.edges) {
        if (e.a == e.b) return false;
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    const int S = g.n_seg();
    std::vector<int> mark(V, -1);
    for (int x = 0; x < S; ++x) {
        const int sx = g.segment_of(x);
        std::queue<int> q;
        q.push(x);
        mark[x] = x;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int u : adj[v]) {
                if (!g.is_free(u)) {
                    if (u != x && g.segment_of(u) == sx) return false;
                    continue;
                }
                if (mark[u] != x) {
                    mark[u] = x;
                    q.push(u);
                }
            }
        }
    }
    return true;
}

const char* parity_name(Parity p) { return p == Parity::odd ? "odd" : "even"; }
const char* space_name(Space s) { return s == Space::HD ? "HD" : "LD"; }

Parity parse_parity(const std::string& s) {
    if (s == "odd") return Parity::odd;
    if (s == "even") return Parity::even;
    throw std::invalid_argument("parity must be odd or even");
}

Space parse_space(const std::string& s) {
    if (s == "hd" || s == "HD") return Space::HD;
    if (s == "ld" || s == "LD") return Space::LD;
    throw std::invalid_argument("space must be hd or ld");
}

}  // namespace holink
