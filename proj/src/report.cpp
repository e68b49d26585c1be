#include "qvertex/report.hpp"

namespace qvertex {

bool CheckContext::scalar_eq(const Scalar& lhs, const Scalar& rhs, const std::string& where) {
    ++rep_.assertions;
    if (!(lhs == rhs)) {
        rep_.fail(where, lhs.str(), rhs.str());
        return false;
    }
    if (cross_numeric_ && !lhs.is_numeric() && lhs.has_ctx()) {
        ++rep_.assertions;
        auto a = lhs.numeric_eval(), b = rhs.numeric_eval();
        if (std::abs(a - b) > 1e-9) {
            rep_.fail(where + " [numeric bridge]", std::to_string(std::abs(a - b)), "<=1e-9");
            return false;
        }
    }
    return true;
}

bool CheckContext::require(bool cond, const std::string& where, const std::string& lhs,
                           const std::string& rhs) {
    ++rep_.assertions;
    if (!cond) rep_.fail(where, lhs, rhs);
    return cond;
}

} // namespace qvertex
