#include "holink/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace holink {

namespace {

// a - c * b, both sorted.
SparseRow axpy(const SparseRow& a, const mpq_class& c, const SparseRow& b) {
    SparseRow out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, -c * b[j].second);
            ++j;
        } else {
            mpq_class v = a[i].second - c * b[j].second;
            if (v != 0) out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Echelon::Echelon(int ncols, std::vector<int> col_order) : ncols_(ncols) {
    if (col_order.empty()) {
        col_order.resize(ncols);
        std::iota(col_order.begin(), col_order.end(), 0);
    }
    order_ = std::move(col_order);
    inv_.assign(ncols, -1);
    for (int i = 0; i < ncols; ++i) inv_[order_[i]] = i;
}

SparseRow Echelon::to_internal(const SparseRow& row) const {
    SparseRow r;
    r.reserve(row.size());
    for (auto& [c, v] : row)
        if (v != 0) r.emplace_back(inv_[c], v);
    std::sort(r.begin(), r.end(), [](auto& x, auto& y) { return x.first < y.first; });
    // merge duplicates
    SparseRow out;
    for (auto& e : r) {
        if (!out.empty() && out.back().first == e.first) {
            out.back().second += e.second;
            if (out.back().second == 0) out.pop_back();
        } else {
            out.push_back(e);
        }
    }
    return out;
}

bool Echelon::insert(const SparseRow& row) {
    SparseRow r = to_internal(row);
    // Reduce only at the lead; the remainder is kept as-is.
    while (!r.empty()) {
        auto it = pivots_.find(r.front().first);
        if (it == pivots_.end()) break;
        mpq_class c = r.front().second;
        r = axpy(r, c, it->second);
    }
    if (r.empty()) return false;
    mpq_class lead = r.front().second;
    for (auto& e : r) e.second /= lead;
    pivots_.emplace(r.front().first, std::move(r));
    return true;
}

bool Echelon::in_span(const SparseRow& row) const {
    SparseRow r = to_internal(row);
    while (!r.empty()) {
        auto it = pivots_.find(r.front().first);
        if (it == pivots_.end()) return false;
        mpq_class c = r.front().second;
        r = axpy(r, c, it->second);
    }
    return true;
}

std::vector<SparseRow> Echelon::nullspace() const {
    // Back-substitute to reduced echelon form, highest lead first.
    std::map<int, SparseRow> red;
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
        SparseRow r = it->second;
        // eliminate every later pivot column present in r
        SparseRow out;
        out.push_back(r.front());
        SparseRow tail(r.begin() + 1, r.end());
        while (!tail.empty()) {
            // find first entry in tail that is a pivot column
            std::size_t idx = 0;
            while (idx < tail.size() && !red.count(tail[idx].first)) ++idx;
            if (idx == tail.size()) break;
            mpq_class c = tail[idx].second;
            tail = axpy(tail, c, red.at(tail[idx].first));
        }
        out.insert(out.end(), tail.begin(), tail.end());
        red.emplace(it->first, std::move(out));
    }
    std::vector<SparseRow> basis;
    for (int f = 0; f < ncols_; ++f) {
        if (red.count(f)) continue;
        SparseRow v;
        v.emplace_back(order_[f], mpq_class(1));
        for (auto& [lead, r] : red) {
            for (auto& [c, val] : r)
                if (c == f) v.emplace_back(order_[lead], -val);
        }
        std::sort(v.begin(), v.end(), [](auto& x, auto& y) { return x.first < y.first; });
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<int> sparsest_first(const std::vector<SparseRow>& rows, int ncols) {
    std::vector<int> count(ncols, 0);
    for (auto& r : rows)
        for (auto& e : r) ++count[e.first];
    std::vector<int> ord(ncols);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return count[a] < count[b]; });
    return ord;
}

int rank_of(const std::vector<SparseRow>& rows, int ncols) {
    Echelon e(ncols, sparsest_first(rows, ncols));
    for (auto& r : rows) e.insert(r);
    return e.rank();
}

}  // namespace holink
