#include <map>
#include <sstream>

#include "holink/diagram.hpp"
#include "text_cursor.hpp"

namespace holink {

ParseError::ParseError(const std::string& msg, int l, int c)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
      line(l),
      column(c) {}

static const char* kind_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::chord: return "chord";
        case EdgeKind::mixed: return "mixed";
        case EdgeKind::free: return "free";
        case EdgeKind::loop: return "loop";
    }
    return "?";
}

std::string to_text(const LinkDiagram& g) {
    std::ostringstream os;
    auto name = [](int v) { return "v" + std::to_string(v); };
    os << "diagram v1 { m=" << g.m << " parity=" << parity_name(g.parity) << " seg=[";
    auto segs = g.segment_vertices();
    for (int j = 0; j < g.m; ++j) {
        if (j) os << ",";
        os << "[";
        for (std::size_t p = 0; p < segs[j].size(); ++p) os << (p ? "," : "") << name(segs[j][p]);
        os << "]";
    }
    os << "] free=[";
    auto fr = g.free_vertices();
    for (std::size_t i = 0; i < fr.size(); ++i) os << (i ? "," : "") << name(fr[i]);
    os << "] edges=[";
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (i) os << ", ";
        os << kind_name(e.kind) << "(" << name(e.a) << "," << name(e.b);
        if (g.parity == Parity::odd) {
            if (e.kind == EdgeKind::loop)
                os << "," << (e.loop_flag > 0 ? "+1" : "-1");
            else
                os << "," << name(e.a) << "->" << name(e.b);
        }
        os << ")";
    }
    os << "] }";
    return os.str();
}

namespace detail {

LinkDiagram parse_diagram_at(Cursor& c) {
    c.expect("diagram");
    c.expect("v1");
    c.expect("{");
    c.expect("m");
    c.expect("=");
    int line = c.line(), col = c.col();
    long m = c.integer();
    if (m < 1 || m > 64) throw ParseError("m out of range", line, col);
    c.expect("parity");
    c.expect("=");
    std::string par = c.ident();
    Parity parity;
    if (par == "odd")
        parity = Parity::odd;
    else if (par == "even")
        parity = Parity::even;
    else
        c.fail("parity must be odd or even");

    LinkDiagram g(static_cast<int>(m), parity);
    std::map<std::string, std::pair<int, int>> names;  // name -> (segment or -1, position)
    std::vector<std::vector<std::string>> seg_names;
    c.expect("seg");
    c.expect("=");
    c.expect("[");
    if (!c.accept("]")) {
        do {
            c.expect("[");
            seg_names.emplace_back();
            if (!c.accept("]")) {
                do {
                    std::string n = c.ident();
                    seg_names.back().push_back(n);
                } while (c.accept(","));
                c.expect("]");
            }
        } while (c.accept(","));
        c.expect("]");
    }
    if (static_cast<long>(seg_names.size()) != m) c.fail("seg must list exactly m segments");
    std::vector<std::string> free_names;
    c.expect("free");
    c.expect("=");
    c.expect("[");
    if (!c.accept("]")) {
        do free_names.push_back(c.ident());
        while (c.accept(","));
        c.expect("]");
    }
    for (int j = 0; j < m; ++j) {
        g.seg_sizes[j] = static_cast<int>(seg_names[j].size());
        for (std::size_t p = 0; p < seg_names[j].size(); ++p)
            if (!names.emplace(seg_names[j][p], std::make_pair(j, static_cast<int>(p))).second)
                c.fail("duplicate vertex name '" + seg_names[j][p] + "'");
    }
    g.n_free = static_cast<int>(free_names.size());
    for (std::size_t i = 0; i < free_names.size(); ++i)
        if (!names.emplace(free_names[i], std::make_pair(-1, static_cast<int>(i))).second)
            c.fail("duplicate vertex name '" + free_names[i] + "'");
    auto id_of = [&](const std::string& n) {
        auto it = names.find(n);
        if (it == names.end()) c.fail("unknown vertex '" + n + "'");
        auto [s, p] = it->second;
        return s < 0 ? g.n_seg() + p : g.seg_vertex(s, p);
    };

    c.expect("edges");
    c.expect("=");
    c.expect("[");
    if (!c.accept("]")) {
        do {
            c.skip_ws();
            int el = c.line(), ec = c.col();
            std::string kind = c.ident();
            c.expect("(");
            std::string an = c.ident();
            c.expect(",");
            std::string bn = c.ident();
            Edge e;
            e.a = id_of(an);
            e.b = id_of(bn);
            e.kind = kind_for(g, e.a, e.b);
            const char* expect_kind = kind_name(e.kind);
            if (kind != "chord" && kind != "mixed" && kind != "free" && kind != "loop")
                throw ParseError("unknown edge kind '" + kind + "'", el, ec);
            if (kind != expect_kind)
                throw ParseError("edge kind '" + kind + "' inconsistent with endpoints", el, ec);
            if (parity == Parity::odd) {
                c.expect(",");
                if (e.kind == EdgeKind::loop) {
                    if (c.accept("+1"))
                        e.loop_flag = 1;
                    else if (c.accept("-1"))
                        e.loop_flag = -1;
                    else
                        c.fail("loop orientation must be +1 or -1");
                } else {
                    std::string x = c.ident();
                    c.expect("->");
                    std::string y = c.ident();
                    int xi = id_of(x), yi = id_of(y);
                    if (!((xi == e.a && yi == e.b) || (xi == e.b && yi == e.a)))
                        c.fail("orientation must use the edge's endpoints");
                    e.a = xi;
                    e.b = yi;
                }
            }
            c.expect(")");
            g.edges.push_back(e);
        } while (c.accept(","));
        c.expect("]");
    }
    c.expect("}");
    return g;
}

}  // namespace detail

LinkDiagram parse_diagram(const std::string& text) {
    detail::Cursor c(text);
    LinkDiagram g = detail::parse_diagram_at(c);
    c.skip_ws();
    if (!c.eof()) c.fail("trailing characters after diagram record");
    return g;
}

}  // namespace holink
