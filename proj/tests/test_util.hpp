#ifndef NGMLIMIT_TEST_UTIL_HPP
#define NGMLIMIT_TEST_UTIL_HPP

#include <initializer_list>

#include "ngmlimit/dense.hpp"
#include "ngmlimit/relapse.hpp"

namespace testutil {

inline ngmlimit::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
    using ngmlimit::Index;
    ngmlimit::MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index r = 0;
    for (const auto& row : rows) {
        Index c = 0;
        for (double x : row) out(r, c++) = x;
        ++r;
    }
    return out;
}

/// alpha = (2, 1, ..., 1), mu = 1: every chain factor alpha_{l-1}/(alpha_l + mu_l)
/// is 1 for l = 1 and 1/2 after that.
inline ngmlimit::HostParams unit_host(ngmlimit::Index stages, double c = 1.0) {
    ngmlimit::HostParams h;
    h.c = c;
    h.S_bar = 1.0;
    h.alpha.assign(static_cast<std::size_t>(stages) + 1, 1.0);
    h.alpha[0] = 2.0;
    h.mu.assign(static_cast<std::size_t>(stages), 1.0);
    return h;
}

inline ngmlimit::VectorParams unit_vector() { return {1.0, 1.0, 1.0, 1.0}; }

}  // namespace testutil

#endif  // NGMLIMIT_TEST_UTIL_HPP
