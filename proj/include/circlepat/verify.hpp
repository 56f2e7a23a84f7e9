#pragma once

// Seeded property suites behind `circlepat verify`.

#include <cstdint>
#include <string>
#include <vector>

#include "circlepat/surface.hpp"

namespace circlepat {

struct VerifyOptions {
    std::string suite = "all";  // config | solver | layout | all
    int trials = 100;
    std::uint64_t seed = 1;
    std::string property;  // empty: every property of the suite
    int start = 0;         // first sample index
    double tol_scale = 1.0;
};

struct VerifyInstances {
    CellularSurface triangulation;
    CellularSurface ideal;
    EdgeWeights ideal_weights;
};

struct PropertyResult {
    std::string suite;
    std::string name;
    int passed = 0;
    int total = 0;
    int first_failure = -1;  // sample index
    std::string failure;     // serialized failing sample
};

struct VerifyReport {
    std::vector<PropertyResult> results;
    bool pass() const;
    std::string format(const VerifyOptions& opts) const;
};

std::vector<std::string> verify_property_names(const std::string& suite);

// Throws RangeError for an unknown suite or property.
VerifyReport run_verify(const VerifyOptions& opts, const VerifyInstances& inst);

// Independent per-sample stream: mixes seed, property name and sample index.
std::uint64_t sample_seed(std::uint64_t seed, const std::string& property, int index);

}  // namespace circlepat
