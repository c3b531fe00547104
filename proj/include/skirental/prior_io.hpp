#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skirental/prior.hpp"

namespace skirental {

/// Parses the textual family syntax used by the CLI and config files:
///
///   uniform(N)  geometric(p, N)  gaussian(mu, sigma, N)  point(k)
///   explicit(k:w, k:w, ...)  mixture(w*spec, w*spec, ...)
///
/// N may be omitted from uniform/geometric/gaussian and defaults to the
/// horizon. Throws InvalidSpec on syntax errors.
PriorFamilySpec parse_family_spec(std::string_view text, Day horizon);

/// Inverse of parse_family_spec (N is always written out).
std::string format_family(const Family& family);

/// Reads `k,weight` lines; '#' starts a comment, blank lines are skipped.
/// When `horizon` is empty the largest listed day is used. The result is a
/// sparse prior normalized by the loader.
DiscretePrior load_prior_file(const std::filesystem::path& path,
                              std::optional<Day> horizon = std::nullopt);

/// Writes nonzero masses as `k,weight` with round-trip precision.
void save_prior_file(const std::filesystem::path& path, const DiscretePrior& prior);

/// Splits `text` into lines with comments and surrounding whitespace removed.
/// Each entry is (1-based line number, content); blank lines are dropped.
std::vector<std::pair<int, std::string>> data_lines(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace skirental
