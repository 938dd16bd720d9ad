#pragma once

// Seeded verification suites: each one exercises a single structural result
// on randomly generated finite modules and reports the worst deviation seen.

#include <cstdint>
#include <string>
#include <vector>

#include "rnm/io.hpp"

namespace rnm::verify {

struct SuiteReport {
    io::Json report;
    bool passed = false;
};

/// thm12 lem31 lem32 lem33 prop31 prop32 cor21 hb axioms
const std::vector<std::string>& suite_names();

/// Throws PreconditionError for an unknown suite name.
SuiteReport run_suite(const std::string& name, std::uint64_t seed);

}  // namespace rnm::verify
