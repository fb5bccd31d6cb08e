#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holink/algebra.hpp"
#include "holink/linkgeom.hpp"

namespace holink {

struct MCEstimate {
    double value = 0;
    double std_error = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t rejected = 0;
};

// Parameters of the segment vertices (dense id order) and positions of the
// free vertices.
struct FiberPoint {
    std::vector<double> params;
    std::vector<Vec3> free_points;
};

struct IntegrateOptions {
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    int workers = 0;            // 0: HOLINK_THREADS or hardware concurrency
    double tail_pad = 4.0;      // T = t1 + tail_pad
    int anchors = 64;
    double anchor_sigma = 1.5;
    std::vector<std::pair<std::uint64_t, double>>* trace = nullptr;  // running mean per block
};

std::optional<Vec3> direction(const Vec3& p, const Vec3& q);

// Density of the pulled-back product of unit volume forms with respect to
// the fiber coordinates; nullopt on a singular configuration.
std::optional<double> integrand(const LinkDiagram& g, const StringLink& L, const FiberPoint& c);

// Importance sampler over the fiber of g, adapted to a reference link.
class FiberSampler {
public:
    FiberSampler(const LinkDiagram& g, const StringLink& reference, const IntegrateOptions& opt);
    // Draws a point from the u-stream and returns its density.
    double sample(std::uint64_t seed, std::uint64_t index, FiberPoint& out) const;
    // Per-graft fiber dimensions of g.
    const std::vector<int>& graft_dimensions() const { return graft_dims_; }

private:
    struct Strand {
        std::vector<double> cdf;  // activity mass per grid piece, cumulative
        double total = 0;
    };
    double seg_density(int strand, double t) const;
    double seg_draw(int strand, double u1, double u2) const;

    LinkDiagram g_;
    const StringLink* ref_;
    double T_;
    double lambda_ = 4.0;
    double sigma_;
    std::vector<Strand> activity_;
    std::vector<Vec3> anchors_;
    std::vector<std::vector<int>> earlier_neighbours_;  // per free vertex
    std::vector<int> graft_dims_;
};

// Weighted integral sum_r c_r I_g(L_r) estimated with one shared sample set
// (links must have the same m; the sampler adapts to links[0]).
MCEstimate mc_combination(const LinkDiagram& g, const std::vector<const StringLink*>& links,
                          const std::vector<double>& coeffs, const IntegrateOptions& opt);
MCEstimate mc_integrate(const LinkDiagram& g, const StringLink& L, const IntegrateOptions& opt);

// sum over Γ of c_Γ I_Γ(L) for a defect-zero cocycle sum c_Γ Γ; with two
// links, the paired difference I(L1) - I(L2).
MCEstimate universal_invariant(const DiagramSum& w, const StringLink& L, const IntegrateOptions& opt,
                               Space space = Space::HD);
MCEstimate universal_difference(const DiagramSum& w, const StringLink& L1, const StringLink& L2,
                                const IntegrateOptions& opt, Space space = Space::HD);

// sum over S of (-1)^{k-|S|} I_{g'}(H_g^S).
MCEstimate alternating_sum(const LinkDiagram& gprime, const LinkDiagram& g, const IntegrateOptions& opt,
                           const FingerOptions& fopt = {}, double perturbation = 0.05);

std::string report(const MCEstimate& e, const std::vector<int>& graft_dims = {});

int default_workers();

}  // namespace holink
