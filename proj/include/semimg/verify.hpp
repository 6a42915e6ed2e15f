#pragma once

#include <string>
#include <vector>

namespace semimg {

struct VerifyResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Oracle suites behind the `verify` subcommand. Each check is implemented
// against an independent reference (pairwise expansion, finite differences,
// exhaustive enumeration, per-pixel sorting).
std::vector<VerifyResult> verify_coeffs();
std::vector<VerifyResult> verify_gradcheck();
std::vector<VerifyResult> verify_potts();
std::vector<VerifyResult> verify_median();
std::vector<VerifyResult> verify_all();

} // namespace semimg
