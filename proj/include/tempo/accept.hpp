#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tempo {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// Ten-point release battery exercising the refutation probes, the template
// report, the uniform solver, the consistency-transfer laws, the power
// functors, decoding, and the exact linear algebra. `log`, when set, fires
// once per criterion as it finishes. `slow` adds the long high-arity block
// probe (hours); `seed` drives every randomized criterion deterministically.
// All time budgets and expected values are pinned in the implementation.
std::vector<CriterionResult> run_acceptance(
    bool slow, uint64_t seed,
    const std::function<void(const CriterionResult&)>& log);

}  // namespace tempo
