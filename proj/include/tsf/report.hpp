#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "json.hpp"

namespace tsf {

struct CheckResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    bool skipped = false;
    std::string note;
    std::vector<std::string> witnesses;

    bool ok() const { return failures == 0; }
    void pass() { ++cases; }
    void fail(const std::string& witness);
    void check(bool cond, const std::string& witness) { cond ? pass() : fail(witness); }
};

// Checks live in a deque so references returned by add() stay valid.
struct Report {
    std::deque<CheckResult> checks;

    CheckResult& add(const std::string& name);
    const CheckResult* find(const std::string& name) const;
    bool ok() const;
    void merge(const Report& other, const std::string& prefix = "");
    nlohmann::json to_json() const;
};

// Witness lists are capped so reports stay small; the failure count is exact.
inline constexpr std::size_t kMaxWitnesses = 8;

}  // namespace tsf
