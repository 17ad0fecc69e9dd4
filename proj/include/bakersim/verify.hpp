#pragma once

// Self-check suite run by `bakersim verify`.

#include <string>
#include <vector>

namespace bakersim {

struct VerifyCheck {
    std::string name;
    double value;      // distance or error measure; smaller is better
    double tolerance;  // pass iff value < tolerance
    bool pass;
};

std::vector<VerifyCheck> run_verification_suite();

std::string format_verification_table(const std::vector<VerifyCheck>& checks);

}  // namespace bakersim
