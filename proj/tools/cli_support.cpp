#include "cli_support.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "citefit/errors.hpp"
#include "citefit/ingest.hpp"

namespace citefit::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ParameterError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kSeedVariable); env != nullptr && *env != '\0') {
    const std::string_view text(env);
    std::uint64_t seed = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc{} || end != text.data() + text.size()) {
      throw ParameterError(std::string(kSeedVariable) + " must be an unsigned integer, got '" +
                           std::string(text) + "'");
    }
    return seed;
  }
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

ModelSpec parse_model(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParameterError("model must look like 'lognormal:MU,SIGMA' or 'hooked:ALPHA,B', got '" +
                         std::string(text) + "'");
  }
  const Family family = parse_family(trim(text.substr(0, colon)));
  const auto params = text.substr(colon + 1);
  const auto comma = params.find(',');
  if (comma == std::string_view::npos) {
    throw ParameterError("model needs two comma-separated parameters: '" + std::string(text) + "'");
  }
  const double p = parse_real(params.substr(0, comma), "model parameter");
  const double q = parse_real(params.substr(comma + 1), "model parameter");
  return family == Family::DiscretisedLognormal ? ModelSpec::lognormal(p, q)
                                                : ModelSpec::hooked(p, q);
}

MixtureSpec parse_mixture(std::string_view text) {
  std::vector<MixtureComponent> components;
  while (!text.empty()) {
    const auto semi = text.find(';');
    const auto part = trim(text.substr(0, semi));
    text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
    if (part.empty()) continue;
    const auto star = part.find('*');
    if (star == std::string_view::npos) {
      components.push_back({parse_model(part), 1.0});
    } else {
      components.push_back(
          {parse_model(part.substr(star + 1)), parse_real(part.substr(0, star), "weight")});
    }
  }
  return MixtureSpec(std::move(components));
}

std::vector<Family> parse_families(std::string_view text) {
  if (text == "both") return {Family::DiscretisedLognormal, Family::HookedPowerLaw};
  return {parse_family(text)};
}

std::vector<CitationSample> load_samples(const std::vector<std::string>& paths, Count offset) {
  std::vector<CitationSample> samples;
  for (const auto& path : paths) {
    auto sample = ingest(read_count_file(path), offset);
    sample.label = std::filesystem::path(path).filename().string();
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::string describe_source(const std::vector<std::string>& paths, std::string_view fixture) {
  if (paths.empty()) return std::string(fixture);
  std::string out;
  for (const auto& path : paths) {
    if (!out.empty()) out += ", ";
    out += std::filesystem::path(path).filename().string();
  }
  return out;
}

}  // namespace citefit::cli
