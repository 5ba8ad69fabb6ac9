#pragma once
// The acceptance suite shared by `polx check` and the acceptance test binary.

#include <iosfwd>
#include <string>
#include <vector>

namespace polx {

struct SubCheck {
    bool pass;
    std::string text;
};

struct CriterionResult {
    int id;
    std::string name;
    std::vector<SubCheck> checks;
    double seconds = 0.0;

    bool pass() const;
};

/// Runs every criterion, printing one PASS/FAIL line per criterion (followed by
/// indented sub-check details) to `out` as each completes.
std::vector<CriterionResult> run_acceptance(std::ostream& out, bool verbose = true);

}  // namespace polx
