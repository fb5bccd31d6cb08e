#pragma once

#include <gmpxx.h>

#include <map>
#include <utility>
#include <vector>

namespace holink {

using SparseRow = std::vector<std::pair<int, mpq_class>>;  // sorted by column

// Incremental row echelon form over Q. Columns are processed in the order
// given by `col_order` (sparsest first by default), which keeps fill-in low
// for the incidence-like matrices of the diagram complexes.
class Echelon {
public:
    explicit Echelon(int ncols, std::vector<int> col_order = {});

    // Inserts a row (original column indices); returns true if it was
    // independent of the rows inserted so far.
    bool insert(const SparseRow& row);
    bool in_span(const SparseRow& row) const;
    int rank() const { return static_cast<int>(pivots_.size()); }
    int ncols() const { return ncols_; }
    // Basis of {x : r·x = 0 for all inserted rows r}, in original columns,
    // each vector with a 1 at its free column (reduced echelon form).
    std::vector<SparseRow> nullspace() const;

private:
    SparseRow to_internal(const SparseRow& row) const;

    int ncols_;
    std::vector<int> order_;   // internal -> original
    std::vector<int> inv_;     // original -> internal
    std::map<int, SparseRow> pivots_;  // internal lead column -> row with lead 1
};

// Column order by increasing number of nonzeros across the rows.
std::vector<int> sparsest_first(const std::vector<SparseRow>& rows, int ncols);

int rank_of(const std::vector<SparseRow>& rows, int ncols);

}  // namespace holink
