#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citefit/distributions.hpp"
#include "citefit/experiments.hpp"
#include "citefit/sample.hpp"

namespace citefit::cli {

inline constexpr const char* kSeedVariable = "CITEFIT_SEED";

/// --seed if given, else $CITEFIT_SEED, else a fresh random seed.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag);

/// "lognormal:MU,SIGMA" or "hooked:ALPHA,B".
ModelSpec parse_model(std::string_view text);

/// Components separated by ';', each "WEIGHT*MODEL" or just "MODEL"
/// (weight 1), e.g. "0.5*lognormal:1,1;0.5*lognormal:3.5,1".
MixtureSpec parse_mixture(std::string_view text);

/// "lognormal", "hooked" or "both".
std::vector<Family> parse_families(std::string_view text);

/// Reads and offsets every file; the label is the file name without its
/// directory.
std::vector<CitationSample> load_samples(const std::vector<std::string>& paths, Count offset);

/// Comma-separated list of the file names, or the fixture description.
std::string describe_source(const std::vector<std::string>& paths, std::string_view fixture);

}  // namespace citefit::cli
