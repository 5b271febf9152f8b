#ifndef NGMLIMIT_VERIFY_HPP
#define NGMLIMIT_VERIFY_HPP

// Property suite: each check draws a seeded corpus, evaluates one identity
// or limit claim over it and records the extreme values it observed.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace ngmlimit {

struct PropertyResult {
    std::string name;
    int criterion = 0;  ///< acceptance criterion this belongs to, 0 for support checks
    std::string description;
    std::string bound;  ///< human-readable pass condition
    bool passed = true;
    std::size_t cases = 0;
    double observed_min = std::numeric_limits<double>::infinity();
    double observed_max = -std::numeric_limits<double>::infinity();
    std::vector<std::string> failures;  ///< first few failing cases

    PropertyResult(std::string name, int criterion, std::string description, std::string bound);

    void at_most(double value, double limit, const std::string& where);
    void at_least(double value, double limit, const std::string& where);
    void within(double value, double lo, double hi, const std::string& where);
    void require(bool ok, const std::string& where);

private:
    void observe(double value);
    void fail(const std::string& where);
};

struct VerifyOptions {
    std::uint64_t seed = 42;
    /// Relative perturbation applied to F of every coupled pair checked by the
    /// coupling property. Zero in normal runs; used to exercise failure paths.
    double coupled_fault = 0.0;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::vector<PropertyResult> properties;

    bool all_passed() const;
    bool criterion_passed(int criterion) const;
    const PropertyResult* find(const std::string& name) const;
};

using PropertyList = std::vector<PropertyResult>;

// Dense and eigen oracles.
PropertyList check_dense_oracles(const VerifyOptions& opt);
PropertyList check_spectrum_oracles(const VerifyOptions& opt);

// Acceptance criteria 1 through 8, in order.
PropertyList check_affine_determinant(const VerifyOptions& opt);
PropertyList check_minor_inverse_limit(const VerifyOptions& opt);
PropertyList check_row_col_decay(const VerifyOptions& opt);
PropertyList check_spectral_limit(const VerifyOptions& opt);
PropertyList check_closed_form_ngm(const VerifyOptions& opt);
PropertyList check_coupling(const VerifyOptions& opt);
PropertyList check_relapse_limit_chain(const VerifyOptions& opt);
PropertyList check_threshold_consistency(const VerifyOptions& opt);

VerifyReport run_verify(const VerifyOptions& opt);

}  // namespace ngmlimit

#endif  // NGMLIMIT_VERIFY_HPP
