#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace holink {

enum class Parity { even, odd };
enum class EdgeKind { chord, mixed, free, loop };
enum class Space { LD, HD };

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An edge between dense vertex ids. For odd parity the edge is oriented
// a -> b; a loop (a == b) carries its orientation in loop_flag instead.
// For even parity a/b are unordered and the position in the edge list is
// what matters.
struct Edge {
    EdgeKind kind = EdgeKind::chord;
    int a = 0;
    int b = 0;
    int loop_flag = 1;

    bool operator==(const Edge&) const = default;
    auto operator<=>(const Edge&) const = default;
};

// Vertex ids are dense: segment vertices first (segment 0 positions 0.., then
// segment 1, ...), then free vertices. Arcs are derived, never stored.
struct LinkDiagram {
    int m = 1;
    Parity parity = Parity::odd;
    std::vector<int> seg_sizes;  // one entry per segment
    int n_free = 0;
    std::vector<Edge> edges;

    LinkDiagram() = default;
    LinkDiagram(int m_, Parity p) : m(m_), parity(p), seg_sizes(m_, 0) {}

    int n_seg() const;
    int n_vertices() const { return n_seg() + n_free; }
    bool is_free(int v) const { return v >= n_seg(); }
    int segment_of(int v) const;        // 0-based segment, -1 for free vertices
    int position_of(int v) const;       // position along its segment
    int seg_vertex(int seg, int pos) const;
    std::vector<std::vector<int>> segment_vertices() const;
    std::vector<int> free_vertices() const;
    std::vector<int> endpoint_counts() const;  // loops count twice

    bool operator==(const LinkDiagram&) const = default;
    bool operator<(const LinkDiagram& o) const;
};

EdgeKind kind_for(const LinkDiagram& g, int a, int b);

// Builders used by tests, examples and the CLI.
struct DiagramBuilder {
    LinkDiagram g;
    DiagramBuilder(int m, Parity p) : g(m, p) {}
    // Appends a vertex at the end of segment seg (1-based) and returns a handle.
    int seg(int segment);
    int free_vertex();
    DiagramBuilder& edge(int a, int b, int loop_flag = 1);
    // Resolves handles into dense ids.
    LinkDiagram build() const;

private:
    struct Handle { bool free; int seg; int pos; };
    std::vector<Handle> handles_;
    std::vector<std::pair<std::pair<int, int>, int>> pending_;
};

LinkDiagram chord_diagram(int m, Parity p, int seg_a, int seg_b);
LinkDiagram tripod(int m, Parity p, int s1 = 1, int s2 = 2, int s3 = 3);
LinkDiagram empty_diagram(int m, Parity p);

std::vector<std::string> validate(const LinkDiagram& g);
int defect(const LinkDiagram& g);
int order(const LinkDiagram& g);
int main_degree(const LinkDiagram& g, int n);
// Degree used for graded signs: d (odd parity) or k + d (even parity), mod 2.
int sign_degree(const LinkDiagram& g);

struct NormalizedDiagram {
    LinkDiagram canonical;
    int sign = 1;
};

// Relabeling of a diagram: free vertex permutation (old free index -> new
// free index) plus, for even parity, the new edge order; orientations are
// carried along. Returns the relabeled diagram and the sign relating them
// (input = sign * output).
struct Relabeled {
    LinkDiagram diagram;
    int sign = 1;
};
Relabeled relabel(const LinkDiagram& g, const std::vector<int>& free_perm);

NormalizedDiagram normalize(const LinkDiagram& g);
std::optional<int> is_isomorphic(const LinkDiagram& a, const LinkDiagram& b);
std::uint64_t aut_order(const LinkDiagram& g);
bool has_repeated_edge(const LinkDiagram& g);

struct Graft {
    LinkDiagram sub;
    std::vector<int> per_segment_counts;
    int free_count = 0;
    std::vector<int> vertices;  // parent vertex ids, sorted
    std::vector<int> edges;     // parent edge indices
};
std::vector<Graft> grafts(const LinkDiagram& g);

bool is_homotopy_diagram(const LinkDiagram& g);

struct EnumerateOptions {
    std::size_t max_candidates = 20'000'000;
    std::size_t max_results = 2'000'000;
};
std::vector<LinkDiagram> enumerate(int m, Parity parity, int d, int k, Space space,
                                   const EnumerateOptions& opt = {});

// Text format.
std::string to_text(const LinkDiagram& g);
LinkDiagram parse_diagram(const std::string& text);

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(const std::string& msg, int l, int c);
};

const char* parity_name(Parity p);
const char* space_name(Space s);
Parity parse_parity(const std::string& s);
Space parse_space(const std::string& s);

}  // namespace holink
