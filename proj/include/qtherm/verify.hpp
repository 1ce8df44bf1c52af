#pragma once

// Cross-module self-checks behind `qtherm verify <suite>`.

#include <cstdint>
#include <string>
#include <vector>

namespace qtherm {

struct Check {
    std::string name;
    double tolerance{};
    double observed{};  // worst deviation seen
    bool passed{};
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    std::vector<Check> checks;

    bool passed() const;
    std::string to_json() const;
};

// oracles, invariants, dynamics
const std::vector<std::string>& verify_suites();

inline constexpr std::uint64_t kDefaultVerifySeed = 20240601;

// Validation for an unknown suite name.
VerifyReport run_verify(const std::string& suite, std::uint64_t seed = kDefaultVerifySeed);

}  // namespace qtherm
