#pragma once

// Seeded test-function families for the ratio sweeps.

#include <cstdint>
#include <string>
#include <vector>

#include "besovlab/spectral.hpp"

namespace besovlab::lab {

struct FamilyOptions {
  int max_mode = 0;  // 0 selects N/8
  bool mean_zero = false;
};

struct FamilyMember {
  std::string id;
  spectral::GridFunction f;
  double boundary_tail = 0.0;
  bool localized = true;  // false for the periodic band-limited members
};

/// Gaussians e^{-|x|^2/w} (w = 1/2, 1, 2), two translated bumps, two
/// modulated Gaussians, then random band-limited members with N(0,1)/|k|^2
/// amplitudes. Every member has unit L^1 norm. Members are a function of
/// (seed, index, max_mode) alone, so a refined grid sees the same functions.
std::vector<FamilyMember> family_generator(std::uint64_t seed, const spectral::GridSpec& spec, int count,
                                           const FamilyOptions& options = {});

}  // namespace besovlab::lab
