#pragma once

#include <chrono>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgm/matrix.hpp"

namespace dgm {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

enum class Status { pass, fail, infeasible };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::infeasible: return "infeasible";
    }
    return "?";
}

inline json to_json(const Vector& v) {
    json a = json::array();
    for (const auto& s : v.entries()) a.push_back(s.to_string());
    return a;
}

inline json to_json(const Matrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
    return a;
}

struct Check {
    std::string name;
    Status status = Status::pass;
    std::string detail;
    json witness;
};

/// Outcome of a checker: one entry per check, each with an optional witness.
struct VerdictReport {
    std::string subject;
    std::vector<Check> checks;
    std::string field;
    double seconds = 0;
    std::map<std::string, std::string> conventions;

    VerdictReport() = default;
    explicit VerdictReport(std::string s, std::string f = {}) : subject(std::move(s)), field(std::move(f)) {}

    bool passed() const {
        for (const auto& c : checks)
            if (c.status != Status::pass) return false;
        return true;
    }

    const Check* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    Check& add(std::string name, bool ok, std::string detail = {}, json witness = nullptr) {
        checks.push_back({std::move(name), ok ? Status::pass : Status::fail, std::move(detail), std::move(witness)});
        return checks.back();
    }
    Check& add(std::string name, Status st, std::string detail = {}, json witness = nullptr) {
        checks.push_back({std::move(name), st, std::move(detail), std::move(witness)});
        return checks.back();
    }

    void merge(const VerdictReport& other, const std::string& prefix = {}) {
        for (auto c : other.checks) {
            if (!prefix.empty()) c.name = prefix + c.name;
            checks.push_back(std::move(c));
        }
        conventions.insert(other.conventions.begin(), other.conventions.end());
    }

    json to_json() const {
        json j;
        j["subject"] = subject;
        j["status"] = passed() ? "pass" : "fail";
        j["field"] = field;
        j["tool_version"] = kToolVersion;
        j["seconds"] = seconds;
        json cs = json::array();
        for (const auto& c : checks) {
            json e;
            e["name"] = c.name;
            e["status"] = dgm::to_string(c.status);
            if (!c.detail.empty()) e["detail"] = c.detail;
            if (!c.witness.is_null()) e["witness"] = c.witness;
            cs.push_back(std::move(e));
        }
        j["checks"] = std::move(cs);
        if (!conventions.empty()) j["conventions"] = conventions;
        return j;
    }

    std::string to_human() const {
        std::ostringstream os;
        os << subject << " [" << field << "]  " << (passed() ? "PASS" : "FAIL") << "\n";
        std::size_t w = 4;
        for (const auto& c : checks) w = std::max(w, c.name.size());
        for (const auto& c : checks) {
            os << "  " << std::left << std::setw(int(w)) << c.name << "  " << std::setw(10) << dgm::to_string(c.status);
            if (!c.detail.empty()) os << "  " << c.detail;
            os << "\n";
        }
        return os.str();
    }
};

class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

}  // namespace dgm
