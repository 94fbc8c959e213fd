#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "anast/matrix.hpp"

namespace anast {

enum class ProjectorKind : std::uint8_t { random_gaussian = 0, identity = 1 };
enum class Activation : std::uint8_t { identity = 0, relu = 1 };

std::string to_string(ProjectorKind kind);
std::string to_string(Activation act);
ProjectorKind projector_kind_from_string(const std::string& s);
Activation activation_from_string(const std::string& s);

// Configuration of the fixed feature-expansion layer: a seeded random linear
// map d_in -> d_exp applied identically at every task.
struct ExpansionSpec {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  std::uint64_t seed = 0;
  ProjectorKind kind = ProjectorKind::random_gaussian;
  Activation activation = Activation::identity;
  // Entry std-dev for random_gaussian. 0 means "default", resolved to
  // 1/sqrt(input_dim) so expanded magnitudes stay comparable to the input.
  double scale = 0.0;

  // Returns a copy with input_dim set and a defaulted scale resolved.
  ExpansionSpec resolved(std::size_t input_dim_hint) const;

  // Throws std::invalid_argument on violated invariants.
  void validate() const;

  bool operator==(const ExpansionSpec&) const = default;
};

// The frozen expansion layer. `matrix` is input_dim x output_dim and is never
// mutated after construction; features are expanded as act(F * matrix).
struct Projector {
  ExpansionSpec spec;
  Matrix matrix;
};

// Builds the projector for a valid spec. random_gaussian entries are filled
// i.i.d. normal(0, scale^2) in row-major order from a SplitMix64/Box-Muller
// stream seeded by spec.seed, so the same spec is bitwise reproducible.
Projector make_projector(const ExpansionSpec& spec);

// act(f * P). Rejects f whose column count differs from the input dimension.
Matrix expand(const Projector& p, const Matrix& f);

// Same result as expand(), but visits the input row by row and reports how
// many rows were read. Backs the one-pass instrumentation of adapt().
Matrix expand_counted(const Projector& p, const Matrix& f,
                      std::size_t* rows_read);

}  // namespace anast
