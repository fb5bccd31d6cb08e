#pragma once

#include <cctype>
#include <string>

#include "holink/diagram.hpp"

namespace holink::detail {

// Character cursor with line/column tracking for the text formats.
class Cursor {
public:
    explicit Cursor(const std::string& s) : s_(s) {}

    bool eof() { return pos_ >= s_.size(); }
    char peek() { return eof() ? '\0' : s_[pos_]; }
    int line() const { return line_; }
    int col() const { return col_; }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
    }
    void skip_inline_ws() {
        while (!eof() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) advance();
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg, line_, col_);
    }

    void expect(const std::string& lit) {
        skip_ws();
        if (s_.compare(pos_, lit.size(), lit) != 0) fail("expected '" + lit + "'");
        for (std::size_t i = 0; i < lit.size(); ++i) advance();
    }

    bool accept(const std::string& lit) {
        skip_ws();
        if (s_.compare(pos_, lit.size(), lit) != 0) return false;
        for (std::size_t i = 0; i < lit.size(); ++i) advance();
        return true;
    }

    std::string ident() {
        skip_ws();
        std::string out;
        while (!eof()) {
            char c = s_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
                out += c;
                advance();
            } else {
                break;
            }
        }
        if (out.empty()) fail("expected identifier");
        return out;
    }

    // Token of characters up to whitespace or one of the stop characters.
    std::string token(const std::string& stops) {
        skip_ws();
        std::string out;
        while (!eof()) {
            char c = s_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || stops.find(c) != std::string::npos) break;
            out += c;
            advance();
        }
        if (out.empty()) fail("expected token");
        return out;
    }

    long integer() {
        std::string t = token(",;:)]}=*");
        try {
            std::size_t used = 0;
            long v = std::stol(t, &used);
            if (used != t.size()) fail("malformed integer '" + t + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("malformed integer '" + t + "'");
        }
    }

    double real(const std::string& stops) {
        std::string t = token(stops);
        try {
            std::size_t used = 0;
            double v = std::stod(t, &used);
            if (used != t.size()) fail("malformed number '" + t + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("malformed number '" + t + "'");
        }
    }

    void skip_line() {
        while (!eof() && s_[pos_] != '\n') advance();
    }

    std::size_t offset() const { return pos_; }

private:
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

LinkDiagram parse_diagram_at(Cursor& c);

}  // namespace holink::detail
