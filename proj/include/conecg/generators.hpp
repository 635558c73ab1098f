#pragma once

#include "conecg/cg.hpp"
#include "conecg/polyopt.hpp"
#include "conecg/stableset.hpp"

#include <cstdint>

namespace conecg {

/// Dense quartic form in n ≥ 2 variables, coefficients i.i.d. N(0,1) in basis order.
Poly gen_quartic(int n, std::uint64_t seed);

/// Erdős–Rényi graph: each pair i < j (lexicographic order) kept with probability p.
Graph gen_er(int n, double p, std::uint64_t seed);

/// max y₁ + y₂  s.t.  I + y₁E + y₂F ⪰ 0, E and F symmetric with i.i.d.
/// N(0,1) upper triangles (E drawn first, row by row).
SdpProblem gen_spectrahedron(int n, std::uint64_t seed);

}  // namespace conecg
