#include "tsf/report.hpp"

namespace tsf {

void CheckResult::fail(const std::string& witness) {
    ++cases;
    ++failures;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(witness);
}

CheckResult& Report::add(const std::string& name) {
    CheckResult c;
    c.name = name;
    checks.push_back(std::move(c));
    return checks.back();
}

const CheckResult* Report::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

bool Report::ok() const {
    for (const auto& c : checks)
        if (!c.ok()) return false;
    return true;
}

void Report::merge(const Report& other, const std::string& prefix) {
    for (auto c : other.checks) {
        c.name = prefix + c.name;
        checks.push_back(std::move(c));
    }
}

nlohmann::json Report::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json j;
        j["name"] = c.name;
        j["ok"] = c.ok();
        j["cases"] = c.cases;
        j["failures"] = c.failures;
        if (c.skipped) j["skipped"] = true;
        if (!c.note.empty()) j["note"] = c.note;
        if (!c.witnesses.empty()) j["witnesses"] = c.witnesses;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace tsf
