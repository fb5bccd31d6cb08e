#include <charconv>
#include <sstream>

#include "holink/linkgeom.hpp"
#include "text_cursor.hpp"

namespace holink {

namespace {

std::string num(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

void write_link(std::ostringstream& os, const StringLink& L) {
    os << "link v1 m=" << L.m << " t0=" << num(L.t0) << " t1=" << num(L.t1) << "\n";
    for (int i = 0; i < L.m; ++i) {
        os << "strand " << i + 1 << ":";
        const auto& P = L.strands[i];
        for (std::size_t k = 0; k < P.size(); ++k) {
            os << (k ? "; " : " ") << "(" << num(P[k].x()) << "," << num(P[k].y()) << "," << num(P[k].z()) << ")";
        }
        os << "\n";
    }
}

double keyed_real(detail::Cursor& c, const std::string& key) {
    c.expect(key);
    c.expect("=");
    return c.real(" \t\r\n");
}

long keyed_int(detail::Cursor& c, const std::string& key) {
    c.expect(key);
    c.expect("=");
    return c.integer();
}

bool at_line_start_of(detail::Cursor& c, const std::string& word) {
    c.skip_ws();
    return !c.eof() && c.peek() == word[0];
}

StringLink read_link(detail::Cursor& c) {
    StringLink L;
    c.expect("link");
    c.expect("v1");
    long m = keyed_int(c, "m");
    if (m < 1 || m > 64) c.fail("m out of range");
    L.m = static_cast<int>(m);
    L.t0 = keyed_real(c, "t0");
    L.t1 = keyed_real(c, "t1");
    if (!(L.t0 > 0) || !(L.t1 > L.t0)) c.fail("need 0 < t0 < t1");
    for (int i = 0; i < L.m; ++i) {
        c.expect("strand");
        long idx = c.integer();
        if (idx != i + 1) c.fail("expected strand " + std::to_string(i + 1));
        c.expect(":");
        std::vector<Vec3> pts;
        do {
            c.expect("(");
            double x = c.real(",");
            c.expect(",");
            double y = c.real(",");
            c.expect(",");
            double z = c.real(")");
            c.expect(")");
            pts.emplace_back(x, y, z);
        } while (c.accept(";"));
        if (pts.size() < 3) c.fail("strand needs at least 3 points");
        if (i > 0 && pts.size() != L.strands[0].size()) c.fail("strands must have equal point counts");
        L.strands.push_back(std::move(pts));
    }
    auto v = validate_link(L, false);
    for (const auto& msg : v)
        if (msg.find("ray") != std::string::npos || msg.find("count") != std::string::npos) c.fail(msg);
    return L;
}

}  // namespace

std::string to_text(const StringLink& L) {
    std::ostringstream os;
    write_link(os, L);
    return os.str();
}

StringLink parse_link(const std::string& text) {
    detail::Cursor c(text);
    StringLink L = read_link(c);
    c.skip_ws();
    if (!c.eof()) c.fail("trailing characters after link");
    return L;
}

std::string to_text(const SingularLink& H) {
    std::ostringstream os;
    write_link(os, H.link);
    for (std::size_t q = 0; q < H.doubles.size(); ++q) {
        const auto& d = H.doubles[q];
        os << "double " << q + 1 << ": strand_i=" << d.strand_i + 1 << " t_i=" << num(d.t_i)
           << " strand_j=" << d.strand_j + 1 << " t_j=" << num(d.t_j) << " radius=" << num(d.radius) << "\n";
    }
    return os.str();
}

SingularLink parse_singular_link(const std::string& text) {
    detail::Cursor c(text);
    SingularLink H;
    H.link = read_link(c);
    int q = 0;
    while (at_line_start_of(c, "double")) {
        c.expect("double");
        if (c.integer() != ++q) c.fail("double points must be numbered consecutively");
        c.expect(":");
        DoublePoint d;
        long si = keyed_int(c, "strand_i");
        d.t_i = keyed_real(c, "t_i");
        long sj = keyed_int(c, "strand_j");
        d.t_j = keyed_real(c, "t_j");
        d.radius = keyed_real(c, "radius");
        if (si < 1 || si > H.link.m || sj < 1 || sj > H.link.m) c.fail("strand out of range");
        if (!(d.radius > 0)) c.fail("radius must be positive");
        d.strand_i = static_cast<int>(si - 1);
        d.strand_j = static_cast<int>(sj - 1);
        d.point = H.link.eval(d.strand_i, d.t_i);
        if ((H.link.eval(d.strand_j, d.t_j) - d.point).norm() > 1e-6) c.fail("double point strands do not meet");
        H.doubles.push_back(d);
    }
    c.skip_ws();
    if (!c.eof()) c.fail("trailing characters after singular link");
    return H;
}

}  // namespace holink
