#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

namespace spie {

using StateId = std::size_t;
using ActionId = std::size_t;

// One generator per run; every random draw of a run goes through it.
using Rng = std::mt19937_64;

// Floor applied to norms that appear in a denominator.
inline constexpr double kNormEpsilon = 1e-3;

// Root of the shipped data files (maps, MDP tables, presets). Honors the
// SPIE_DATA_DIR environment variable, falling back to the source tree.
std::filesystem::path data_dir();
std::filesystem::path data_path(const std::string& relative);

// Stable 64-bit FNV-1a, used for config fingerprints.
std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t value);

}  // namespace spie
