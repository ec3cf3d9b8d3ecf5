#pragma once

#include "jetforge/paperdefs.hpp"

namespace jetforge {

struct CheckOptions {
    std::uint64_t seed = 1;
    int points = 5;
    int max_order = 6;
};

/// Outcome of one named verification.  PASS requires the symbolic verdict
/// (zero / exact) AND oracle confirmation; a symbolic/numeric disagreement is
/// flagged and can never pass.
struct CheckResult {
    enum class Status { Pass, Fail, Skipped };

    std::string name;
    Status status = Status::Fail;
    std::string detail;                       // human summary line
    bool symbolic_zero = false;
    bool oracle_zero = false;
    bool engines_agree = true;
    std::string oracle;                       // rendered oracle verdict
    size_t residual_terms = 0;
    std::vector<std::string> residual_top;    // largest rendered entries
    std::vector<std::string> assumptions;
    std::vector<std::pair<std::string, std::string>> notes; // sorted key/value
    double wall_ms = 0;                       // never serialized into reports

    static const char* status_name(Status s);
};

class CheckRunner {
public:
    CheckRunner(const Bundle& bundle, CheckOptions opt) : b_(bundle), opt_(opt) {}

    /// Dispatch a suite check spec (kind + subject + options).
    CheckResult run(const SuiteCheckDecl& spec) const;

    CheckResult check_compat(const std::string& covering) const;
    CheckResult check_offshell(const std::string& covering) const;
    CheckResult check_eliminate(const std::string& covering, const std::string& target) const;
    CheckResult check_quotient_derive(const std::string& covering,
                                      const std::string& target_eq) const;
    CheckResult check_quotient_equals(const std::string& inverse, const std::string& displayed,
                                      const std::string& g_name) const;
    CheckResult check_third_order(const std::string& inverse, const std::string& h_name,
                                  const std::string& eq_name) const;
    CheckResult check_autobacklund(const std::string& covering, const std::string& target) const;
    CheckResult check_structure(const std::string& name) const;
    CheckResult check_solve_coefficients(const std::string& name) const;

private:
    std::uint64_t seed_for(const std::string& name) const {
        return derive_seed(opt_.seed, name);
    }
    const Bundle& b_;
    CheckOptions opt_;
};

} // namespace jetforge
