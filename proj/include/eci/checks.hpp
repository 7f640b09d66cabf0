#pragma once

// Exact evaluation of independence statements on finite models.
//
// Statement masks are relative to universe_of(model): stochastic bit i is
// the i-th model variable, decision bit j the j-th decision variable.

#include "eci/distribution.hpp"
#include "eci/family.hpp"
#include "eci/lattice.hpp"
#include "eci/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

namespace eci {

/// X ⊥ Y | Z under one distribution: P(x,y|z) = P(x|z)·P(y|z) for every z
/// of positive probability.
bool check_sci(const DiscreteDistribution& d, Mask X, Mask Y, Mask Z);
/// Throws SemanticsMismatch for statements with decision variables.
bool check_sci(const DiscreteDistribution& d, const CIStatement& s);

/// X ⊥ Y | Z for decision variables: R(X | y,z) = R(X | z) for all
/// realizable (y,z). `regimes` restricts the regime space when non-empty.
bool check_vci(const RegimeFamily& fam, Mask X, Mask Y, Mask Z,
               const std::vector<int>& regimes = {});
/// Throws SemanticsMismatch for statements with stochastic variables.
bool check_vci(const RegimeFamily& fam, const CIStatement& s, const std::vector<int>& regimes = {});

/// Common conditional probabilities w_φ(x, z), keyed by (code of the Φ
/// values, x value indices, z value indices). Only contexts with positive
/// probability in some regime of the φ-group appear.
struct WitnessTable {
  Mask phi = 0;   // decision variables
  Mask x = 0;     // stochastic variables
  Mask z = 0;     // stochastic variables
  std::map<std::tuple<std::uint64_t, std::vector<int>, std::vector<int>>, Rational> entries;
};

struct EciResult {
  bool holds = false;
  std::optional<WitnessTable> witness;
  explicit operator bool() const { return holds; }
};

/// X ⊥ (Y,Θ) | (Z,Φ): for every φ there is one w_φ(x,z) equal to
/// P_σ(X=x | Y=y, Z=z) for every σ with Φ(σ)=φ and every (y,z) of positive
/// P_σ-probability. Throws MalformedStatement for left-slot decision
/// variables or empty outer slots, NotComplementary if Θ ∪ Φ does not
/// separate the regimes.
EciResult check_eci(const RegimeFamily& fam, const CIStatement& s, bool want_witness = false);

/// As check_eci, but a common witness is only required for each pair of
/// regimes sharing a φ-value.
bool check_pairwise_eci(const RegimeFamily& fam, const CIStatement& s);

/// General form (X,K) ⊥ (Y,Θ) | (Z,Φ), evaluated as the conjunction of
///   X ⊥ (Y,Θ) | (Z,Φ,K),  Y ⊥ K | (Z,Φ,Θ),  and for every z: Θ ⊥ K | Φ
/// in the variation sense on 𝒮_z. Empty components hold trivially. Throws
/// NotComplementary if K ∪ Θ ∪ Φ does not separate the regimes.
bool check_eci_general(const RegimeFamily& fam, const CIStatement& s);

}  // namespace eci
