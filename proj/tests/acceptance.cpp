// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "holink/verify.hpp"

using namespace holink;

namespace {

// pinned tolerances
constexpr int kMaxM = 3, kMaxK = 3;
constexpr int kLeibnizPairs = 200;
constexpr int kCohomologyK1MaxM = 4;
constexpr int kGaussLinks = 10;
constexpr double kGaussSigma = 4.0, kGaussMaxSe = 0.05;
constexpr double kProductSigma = 3.0;
constexpr double kCompositionSigma = 3.0, kCompositionK1MaxSe = 0.05, kCompositionK2MaxSe = 0.1;
constexpr double kSelfChangeSigma = 3.0, kInterChangeSigma = 5.0;
constexpr std::uint64_t kSamples = 1000000;

}  // namespace

int main() {
    NumericOptions no;
    no.samples = kSamples;
    no.seed = 1;
    const std::vector<std::pair<std::string, std::function<std::vector<CheckResult>()>>> criteria = {
        {"1 delta squared", [] { return std::vector{check_delta_squared(kMaxM, kMaxK, 1)}; }},
        {"2 Leibniz and commutativity",
         [] { return std::vector{check_leibniz_commutativity(kMaxM, kMaxK, kLeibnizPairs, 1)}; }},
        {"3 HD closure", [] { return std::vector{check_hd_closure(kMaxM, kMaxK, 1)}; }},
        {"4 cohomology duality", [] { return std::vector{check_cohomology_duality(kMaxM, kMaxK, kCohomologyK1MaxM)}; }},
        {"5 IHX in STU", [] { return std::vector{check_ihx_in_stu(kMaxM, kMaxK)}; }},
        {"6 grafts", [] { return std::vector{check_grafts(kMaxM, kMaxK)}; }},
        {"7 Gauss oracle", [&] { return std::vector{check_gauss_oracle(kGaussLinks, kGaussSigma, kGaussMaxSe, no)}; }},
        {"8 product identity", [&] { return std::vector{check_product_identity(kProductSigma, no)}; }},
        {"9 composition",
         [&] {
             return std::vector{check_composition_k1(kCompositionSigma, kCompositionK1MaxSe, no),
                                check_composition_k2(kCompositionSigma, kCompositionK2MaxSe, no)};
         }},
        {"10 homotopy invariance",
         [&] { return std::vector{check_homotopy_invariance(kSelfChangeSigma, kInterChangeSigma, no)}; }},
        {"11 determinism", [&] { return std::vector{check_determinism(no)}; }},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        bool pass = true;
        std::string detail;
        try {
            for (const auto& r : run()) {
                pass = pass && r.pass;
                detail += (detail.empty() ? "" : " | ") + r.name + ": " + r.detail;
            }
        } catch (const std::exception& e) {
            pass = false;
            detail = std::string("exception: ") + e.what();
        }
        failed += !pass;
        std::printf("%s criterion %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
