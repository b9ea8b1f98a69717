#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citefit/distributions.hpp"
#include "citefit/fitting.hpp"
#include "citefit/goodness_of_fit.hpp"
#include "citefit/model_compare.hpp"
#include "citefit/report.hpp"
#include "citefit/resampling.hpp"

namespace citefit {

/// Fitted parameters of one subject category (23 rows in total).
struct SubjectFixture {
  std::string_view name;
  std::size_t n;
  double ln_mu;
  double ln_sigma;
  double hook_alpha;
  double hook_b;

  ModelSpec lognormal() const { return ModelSpec::lognormal(ln_mu, ln_sigma); }
  ModelSpec hooked() const { return ModelSpec::hooked(hook_alpha, hook_b); }
  ModelSpec model(Family family) const;
};

std::span<const SubjectFixture> subject_fixtures() noexcept;

/// Throws ParameterError for unknown names.
const SubjectFixture& find_subject(std::string_view name);

/// Simulated stand-in for a subject's data: `size` (default: the subject's
/// n) draws from the chosen family's fixture parameters.
CitationSample simulate_subject(const SubjectFixture& subject, Family generator,
                                std::optional<std::size_t> size, std::uint64_t seed);

struct StudyOptions {
  FitConfig fit;
  double critical = kVuongCritical;
  unsigned workers = 0;
};

// ---------------------------------------------------------------------------
// Plausibility (fit both families, Monte-Carlo KS test for each)

struct PlausibilityRow {
  std::string subject;
  std::size_t n = 0;
  std::optional<GofResult> lognormal;
  std::optional<GofResult> hooked;
  std::vector<std::string> annotations;

  bool lognormal_plausible() const noexcept;
  bool hooked_plausible() const noexcept;
  /// "H", "L", "H,L" or "".
  std::string plausible_flags() const;
};

/// Family-level failures are recorded as annotations instead of thrown.
PlausibilityRow plausibility_row(const CitationSample& sample, std::size_t n_sim,
                                 std::uint64_t seed, const StudyOptions& options = {});

std::vector<std::string> plausibility_columns();
Table to_table(std::span<const PlausibilityRow> rows);

// ---------------------------------------------------------------------------
// Vuong studies. Model A is the hooked power law, model B the lognormal, so
// positive z favours the hooked power law.

struct VuongStudy {
  std::string subject;
  std::size_t sample_size = 0;
  std::size_t reps = 0;
  /// Empty when every replicate failed.
  std::optional<StudySummary> z;
  SignificanceTally tally;
  /// Replicates where either fit was not Converged.
  std::size_t failed = 0;
};

/// Vuong z of both fits on `reps` resamples (at least kMinReps).
VuongStudy bootstrap_vuong_study(const CitationSample& sample, std::size_t reps,
                                 ResampleSize size, std::uint64_t seed,
                                 const StudyOptions& options = {});

/// Vuong z of both fits on `reps` samples of size n drawn from `generator`.
VuongStudy simulation_study(const ModelSpec& generator, std::size_t n, std::size_t reps,
                            std::uint64_t seed, const StudyOptions& options = {});

std::vector<std::string> vuong_columns();
Table to_table(std::span<const VuongStudy> studies);

// ---------------------------------------------------------------------------
// Bootstrap confidence intervals of the lognormal scale parameter

struct ScaleCiRow {
  std::string subject;
  std::size_t n = 0;
  std::optional<StudySummary> sigma;
  std::string annotation;
};

std::vector<ScaleCiRow> scale_ci_study(std::span<const CitationSample> samples,
                                       std::size_t reps, ResampleSize size,
                                       std::uint64_t seed, const StudyOptions& options = {});

Table to_table(std::span<const ScaleCiRow> rows);

// ---------------------------------------------------------------------------
// Cumulative shape comparison at bottom / median / top

struct ShapeRow {
  std::string subject;
  std::optional<ShapeReport> lognormal;
  std::optional<ShapeReport> hooked;
  std::vector<std::string> annotations;
};

std::vector<ShapeRow> shape_table(std::span<const CitationSample> samples, double epsilon,
                                  const StudyOptions& options = {});

std::vector<std::string> shape_columns();
/// One row per subject followed by Higher/Same/Lower/Overall total rows.
Table to_table(std::span<const ShapeRow> rows);

// ---------------------------------------------------------------------------
// Closed-form mean cross-check

struct MeanCrosscheck {
  struct Row {
    std::string subject;
    double lognormal_mean;
    double hooked_mean;
  };
  std::vector<Row> rows;
  double ln_mean_avg;
  double hook_mean_avg;
};

/// Averages exp(mu + sigma^2 / 2) and B / (alpha - 1) over the subjects.
MeanCrosscheck mean_crosscheck(std::span<const SubjectFixture> fixture);

Table to_table(const MeanCrosscheck& check);

// ---------------------------------------------------------------------------
// Mixtures

struct MixtureComponent {
  ModelSpec model;
  double weight;
};

/// Finite mixture; weights must be positive and are normalised to sum to 1.
class MixtureSpec {
 public:
  /// Throws InvalidWeights for an empty list, non-positive or non-finite
  /// weights.
  explicit MixtureSpec(std::vector<MixtureComponent> components);

  const std::vector<MixtureComponent>& components() const noexcept { return components_; }
  std::string describe() const;

 private:
  std::vector<MixtureComponent> components_;
  std::vector<double> cumulative_;

  friend CitationSample mixture_sample(const MixtureSpec&, std::size_t, std::uint64_t);
};

/// Draw i takes its uniform from the same stream sample() uses and picks its
/// component from a second derived stream, so a mixture of identical
/// components reproduces sample() bit for bit.
CitationSample mixture_sample(const MixtureSpec& spec, std::size_t n, std::uint64_t seed);

struct MixtureStudy {
  std::string mixture;
  std::string pure;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::vector<double> ks_mixed;
  std::vector<double> ks_pure;
  /// Trials where the mixed sample's best lognormal fit is further away.
  std::size_t mixed_larger = 0;
  /// Monte-Carlo rejections at p < 0.05; empty when n_sim = 0.
  std::optional<std::size_t> mixed_rejected;
  std::optional<std::size_t> pure_rejected;
  std::size_t failed = 0;
};

/// Per trial t, draws n values from `mixed` and from `pure` (seeds derived
/// from t), fits the lognormal to each and compares the KS distances.
MixtureStudy mixture_impurity_study(const MixtureSpec& mixed, const ModelSpec& pure,
                                    std::size_t n, std::size_t trials, std::uint64_t seed,
                                    std::size_t n_sim = 0, const StudyOptions& options = {});

Table to_table(const MixtureStudy& study);

}  // namespace citefit
