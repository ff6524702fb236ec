#pragma once

#include <random>

#include "reo/automaton.hpp"

namespace testsupport {

struct RandomIocaConfig {
    int maxStates = 12;
    int maxPorts = 3;
    double tauProbability = 0.1;
    bool inputEnable = false;  // angelically complete the result
};

/// Random automaton over ports A..C with singleton ?P inputs, !P outputs
/// (occasionally paired), and optional tau edges. Alphabets always declare
/// every port both ways so generated pairs are comparable.
reo::Automaton random_ioca(std::mt19937_64& rng, const RandomIocaConfig& config = {});

/// Perturb some output transitions (retarget, relabel, or drop) to produce
/// likely-nonconforming variants; input edges are left alone.
reo::Automaton mutate_outputs(const reo::Automaton& a, std::mt19937_64& rng);

}  // namespace testsupport
