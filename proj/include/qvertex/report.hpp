#pragma once

#include <map>
#include <string>
#include <vector>

#include "qvertex/field.hpp"

namespace qvertex {

// Machine-checkable outcome of one identity check.
struct Failure {
    std::string location; // mode pair / basis state / tail index
    std::string lhs;
    std::string rhs;
};

struct RelationReport {
    std::string check_id;
    std::map<std::string, std::string> params;
    bool passed = true;
    long long assertions = 0;
    bool truncated = false; // certified only through the series order
    std::vector<Failure> failures;
    std::vector<std::string> notes; // resolved conventions, computed data

    void note(const std::string& s) { notes.push_back(s); }
    void fail(const std::string& loc, const std::string& lhs, const std::string& rhs) {
        passed = false;
        if (failures.size() < 32) failures.push_back({loc, lhs, rhs});
    }
};

// Assertion helper shared by the checkers: exact comparisons are also
// bridged to the numeric backend so every reported scalar is cross-checked
// against its numeric evaluation.
class CheckContext {
public:
    explicit CheckContext(RelationReport& rep, bool cross_numeric = true)
        : rep_(rep), cross_numeric_(cross_numeric) {}

    bool scalar_eq(const Scalar& lhs, const Scalar& rhs, const std::string& where);
    bool require(bool cond, const std::string& where, const std::string& lhs = "",
                 const std::string& rhs = "");
    RelationReport& report() { return rep_; }

private:
    RelationReport& rep_;
    bool cross_numeric_;
};

} // namespace qvertex
