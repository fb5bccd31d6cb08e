#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holink/algebra.hpp"
#include "holink/integrate.hpp"

namespace holink {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Exact checks over the enumerated corpus m <= max_m, 1 <= k <= max_k.
CheckResult check_delta_squared(int max_m, int max_k, int max_d, bool inject_sign_bug = false);
CheckResult check_leibniz_commutativity(int max_m, int max_k, int pairs, std::uint64_t seed,
                                        bool inject_sign_bug = false);
CheckResult check_hd_closure(int max_m, int max_k, int max_d);
CheckResult check_cohomology_duality(int max_m, int max_k, int max_m_k1);
CheckResult check_ihx_in_stu(int max_m, int max_k);
CheckResult check_grafts(int max_m, int max_k);

// The m = 4 homotopy diagram with five grafts used as the worked example.
LinkDiagram five_graft_example();

struct NumericOptions {
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    int workers = 0;
};

// Numerical checks; tolerances are passed in by the caller.
CheckResult check_gauss_oracle(int links, double n_sigma, double max_se, const NumericOptions& o);
CheckResult check_product_identity(double n_sigma, const NumericOptions& o);
CheckResult check_composition_k1(double n_sigma, double max_se, const NumericOptions& o);
CheckResult check_composition_k2(double n_sigma, double max_se, const NumericOptions& o);
CheckResult check_homotopy_invariance(double self_sigma, double inter_sigma, const NumericOptions& o);
CheckResult check_determinism(const NumericOptions& o);

// The desk-scale links used by the numerical checks.
StringLink product_link(int lk12, int lk13);
struct HomotopyTestLinks {
    StringLink base, self_changed, inter_changed;
};
HomotopyTestLinks homotopy_test_links();

struct VerifyOptions {
    bool full = false;
    bool inject_sign_bug = false;
    std::uint64_t seed = 1;
    std::uint64_t samples = 0;  // 0: 2e5 quick, 1e6 full
    int workers = 0;
};
std::vector<CheckResult> run_verify(const VerifyOptions& opt);

}  // namespace holink
