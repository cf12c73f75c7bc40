#pragma once

#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>

namespace tempo {

// Bad user input (files, CLI arguments, malformed structures).
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A broken internal invariant; never a legitimate answer.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw input_error(msg);
}

inline void ensure(bool cond, const std::string& msg) {
  if (!cond) throw internal_error(msg);
}

// Enumeration and size caps. Defaults are desk scale; the environment
// variable TEMPO_PCSP_CAPS accepts a comma list of key=value overrides,
// e.g. "max_vars=128,max_k=5,enum_per_relation=4000000".
struct Caps {
  long max_vars = 64;             // instance size for strategy tables
  int max_k = 4;                  // strategy width
  int max_arity = 4;              // compiled temporal relation arity
  int max_power = 3;              // power construction exponent
  int max_iso = 10;               // exhaustive isomorphism search
  long enum_per_relation = 1000000;  // indicator tuple enumerations
};

Caps& caps();

// Deterministic RNG for harnesses; seed 0 unless a command overrides it.
using Rng = std::mt19937_64;

}  // namespace tempo
