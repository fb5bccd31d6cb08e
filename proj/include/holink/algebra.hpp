#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "holink/diagram.hpp"

namespace holink {

using Q = mpq_class;

// Finite rational combination of canonical diagrams (keys have sign +1).
class DiagramSum {
public:
    DiagramSum() = default;
    DiagramSum(int m, Parity p) : m_(m), parity_(p) {}
    static DiagramSum of(const LinkDiagram& g, const Q& c = 1);

    int m() const { return m_; }
    Parity parity() const { return parity_; }
    const std::map<LinkDiagram, Q>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    // Adds c * g; g is normalized first.
    void add(const LinkDiagram& g, const Q& c);
    // Adds c * g for g already canonical with sign +1.
    void add_canonical(const LinkDiagram& g, const Q& c);
    void add(const DiagramSum& x, const Q& c = 1);
    Q coeff(const LinkDiagram& canonical) const;

    DiagramSum operator+(const DiagramSum& o) const;
    DiagramSum operator-(const DiagramSum& o) const;
    DiagramSum operator*(const Q& c) const;
    bool operator==(const DiagramSum& o) const {
        return m_ == o.m_ && parity_ == o.parity_ && terms_ == o.terms_;
    }

private:
    void check(const LinkDiagram& g) const;
    int m_ = 1;
    Parity parity_ = Parity::odd;
    std::map<LinkDiagram, Q> terms_;
};

// A contractible element: a mixed or free edge, or an arc between positions
// pos and pos+1 of segment seg (0-based).
struct Contractible {
    bool is_arc = false;
    int edge = -1;
    int seg = -1;
    int pos = -1;
};

std::vector<Contractible> contractibles(const LinkDiagram& g);
// Contraction without normalization: w (later endpoint) merged into v.
LinkDiagram contract_raw(const LinkDiagram& g, const Contractible& c);
NormalizedDiagram contract(const LinkDiagram& g, const Contractible& c);
// The sign attached to contracting c in the differential.
int contraction_sign(const LinkDiagram& g, const Contractible& c);

struct DifferentialOptions {
    bool inject_sign_bug = false;  // test mode: perturbs one sign
};
DiagramSum differential(const LinkDiagram& g, const DifferentialOptions& opt = {});
DiagramSum differential(const DiagramSum& x, const DifferentialOptions& opt = {});

DiagramSum shuffle(const LinkDiagram& a, const LinkDiagram& b);
DiagramSum shuffle(const DiagramSum& x, const DiagramSum& y);

Q pairing(const LinkDiagram& a, const LinkDiagram& b);
Q pairing(const DiagramSum& x, const DiagramSum& y);

bool all_homotopy(const DiagramSum& x);

// Serialization: "<rational> * <diagram record>" per line.
std::string to_text(const DiagramSum& x);
DiagramSum parse_sum(const std::string& text);

// ---- defect-zero theory ----------------------------------------------------

struct Basis {
    std::vector<LinkDiagram> diagrams;
    std::map<LinkDiagram, int> index;
    explicit Basis(std::vector<LinkDiagram> d);
    int find(const LinkDiagram& g) const;
};

std::vector<DiagramSum> kernel_defect_zero(int m, Parity parity, int k, Space space);

enum class RelationTag { STU, IHX, OneT, H1T };
const char* tag_name(RelationTag t);

struct Relation {
    RelationTag tag;
    LinkDiagram source;  // the defect-one diagram that was blown up
    DiagramSum gen;
};

struct RelationSystem {
    int m = 1;
    Parity parity = Parity::odd;
    int k = 0;
    Space space = Space::LD;
    std::vector<Relation> relations;
};

// Blowups of one defect-one diagram (canonical, sign +1).
Relation blowup(const LinkDiagram& d, Space space);
RelationSystem relation_generators(int m, Parity parity, int k, Space space);
// Independent generator of the same functional from the transpose of δ,
// scaled by |Aut|: c_Γ = coeff_D(δΓ) |Aut D| / |Aut Γ| over the given basis.
DiagramSum dual_generator(const LinkDiagram& d, const std::vector<LinkDiagram>& basis0);

struct ReduceStep {
    LinkDiagram diagram;      // the diagram being resolved
    int free_vertex = -1;
    int seg_vertex = -1;
    LinkDiagram contracted;   // Γ / (seg_vertex, free_vertex)
    DiagramSum generator;     // blowup generator of `contracted`
};

struct Reduction {
    DiagramSum result;             // chord diagrams only
    std::vector<ReduceStep> steps; // certificate
};

enum class ReduceOrder { least, greatest };
Reduction stu_reduce(const LinkDiagram& g, Space space, ReduceOrder order = ReduceOrder::least);
Reduction stu_reduce(const DiagramSum& x, Space space, ReduceOrder order = ReduceOrder::least);
// Replays a certificate; true iff every step is a valid STU substitution and
// the result is reproduced.
bool check_certificate(const DiagramSum& input, const Reduction& r, Space space);

// Chord-side relations: 4T (as differences of STU expansions of one-vertex
// diagrams) plus every blowup generator made of chord diagrams only.
std::vector<DiagramSum> chord_relations(int m, Parity parity, int k, Space space);
std::vector<LinkDiagram> chord_basis(int m, Parity parity, int k, Space space);

// Sign relating the canonical labeling of a chord diagram to the orientation
// in which its integral factors into a product of Gauss integrals.
int chord_orientation_sign(const LinkDiagram& g);

struct CohomologyReport {
    int n0 = 0, n1 = 0;           // basis sizes in defect 0 and 1
    int rank_delta = 0;           // rank of δ : defect 0 -> defect 1
    int rank_generators = 0;      // rank of blowup generators
    int rank_stu = 0, rank_stu_ihx = 0;
    int n_chord = 0, rank_chord_relations = 0;
    int dim_kernel = 0;           // n0 - rank_delta
    int dim_quotient = 0;         // n0 - rank_generators
    int dim_chord_quotient = 0;   // n_chord - rank_chord_relations
    bool kernel_orthogonal = true;
    bool dual_oracle_agrees = true;
    std::vector<DiagramSum> kernel;
};
CohomologyReport cohomology(int m, Parity parity, int k, Space space);

}  // namespace holink
