#include "citefit/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "citefit/errors.hpp"
#include "citefit/parallel.hpp"
#include "citefit/random.hpp"

namespace citefit {
namespace {

// Articles from 2006: sample size and maximum-likelihood parameters of both
// families for each of the 23 subject categories.
constexpr std::array<SubjectFixture, 23> kSubjects{{
    {"Cancer Research", 9994, 2.77, 1.4, 3.94, 67.9},
    {"Computational Mechanics", 7776, 2.19, 1.17, 4.87, 46.1},
    {"Computer Science Applications", 8148, 2.19, 1.4, 3.11, 24.3},
    {"Control and Optimization", 1043, 2.08, 1.11, 5.07, 41.9},
    {"Critical Care and Intensive Care Medicine", 2625, 1.75, 1.82, 2.06, 7.1},
    {"Cultural Studies", 4848, -0.38, 1.73, 2.26, 1.3},
    {"Developmental Neuroscience", 1394, 2.83, 1.08, 11.34, 258.1},
    {"Economics and Econometrics", 9974, 2.23, 1.39, 3.08, 24.4},
    {"Energy Engineering and Power Technology", 7833, 1.33, 1.79, 2.07, 4.7},
    {"Filtration and Separation", 3282, 2.18, 1.39, 3.56, 31.5},
    {"Food Science", 9992, 2.54, 1.26, 5.76, 89.8},
    {"Geochemistry and Petrology", 8292, 2.79, 1.12, 6.55, 126.9},
    {"Global and Planetary Change", 834, 3, 1.35, 3.5, 67},
    {"Health social science", 4352, 2.15, 1.5, 3.82, 37.9},
    {"Health Information Management", 697, 1.96, 1.37, 3.5, 23.8},
    {"Management Science & Operations Research", 3993, 2.45, 1.24, 4.08, 47.6},
    {"Marketing", 2260, 2.43, 1.33, 3.52, 37.8},
    {"Metals and Alloys", 9964, 1.22, 1.53, 2.38, 5.2},
    {"Neuropsychology & Physiological Psychology", 2927, 2.59, 1.39, 4.55, 72.6},
    {"Nuclear and High Energy Physics", 9994, 2.34, 1.41, 3.23, 30.8},
    {"Pharmaceutical Science", 9228, 1.9, 1.61, 2.95, 19.4},
    {"Physical and Theoretical Chemistry", 9986, 2.46, 1.18, 4.77, 59.3},
    {"Virology", 6534, 2.81, 1.05, 14.74, 329.5},
}};

constexpr double kPlausibleLevel = 0.05;
constexpr std::uint64_t kComponentStream = 0x6d69787475726521ULL;

Cell real(double v) { return std::isfinite(v) ? Cell{v} : Cell{}; }
Cell count(std::size_t v) { return Cell{static_cast<std::int64_t>(v)}; }

std::string label_or(const CitationSample& sample, std::size_t index) {
  return sample.label.empty() ? "sample " + std::to_string(index + 1) : sample.label;
}

double median_of(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  return m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

// Fits both families to each replicate and runs the Vuong test with the
// hooked power law as model A.
VuongStudy run_vuong_study(std::string subject, std::size_t sample_size, std::size_t reps,
                           const std::function<CitationSample(std::size_t)>& make,
                           const StudyOptions& options) {
  std::vector<std::optional<VuongResult>> outcome(reps);
  parallel_for(
      reps,
      [&](std::size_t r) {
        const auto table = CountTable::from(make(r));
        const auto hooked = fit(Family::HookedPowerLaw, table, options.fit);
        const auto lognormal = fit(Family::DiscretisedLognormal, table, options.fit);
        if (!hooked.converged() || !lognormal.converged()) return;
        try {
          outcome[r] = vuong(*hooked.model, *lognormal.model, table, options.critical);
        } catch (const IdenticalModels&) {
        }
      },
      options.workers);

  VuongStudy study;
  study.subject = std::move(subject);
  study.sample_size = sample_size;
  study.reps = reps;
  std::vector<VuongResult> results;
  std::vector<double> z;
  for (const auto& o : outcome) {
    if (!o) continue;
    results.push_back(*o);
    z.push_back(o->z);
  }
  study.failed = reps - results.size();
  study.tally = tally_significance(results);
  if (!z.empty()) study.z = summarize("vuong_z", std::move(z), reps, study.failed);
  return study;
}

}  // namespace

ModelSpec SubjectFixture::model(Family family) const {
  return family == Family::DiscretisedLognormal ? lognormal() : hooked();
}

std::span<const SubjectFixture> subject_fixtures() noexcept { return kSubjects; }

const SubjectFixture& find_subject(std::string_view name) {
  for (const auto& s : kSubjects) {
    if (s.name == name) return s;
  }
  throw ParameterError("unknown subject '" + std::string(name) + "'");
}

CitationSample simulate_subject(const SubjectFixture& subject, Family generator,
                                std::optional<std::size_t> size, std::uint64_t seed) {
  auto out = sample(subject.model(generator), size.value_or(subject.n), seed);
  out.label = std::string(subject.name);
  return out;
}

// ---------------------------------------------------------------------------

bool PlausibilityRow::lognormal_plausible() const noexcept {
  return lognormal && lognormal->p_value > kPlausibleLevel;
}

bool PlausibilityRow::hooked_plausible() const noexcept {
  return hooked && hooked->p_value > kPlausibleLevel;
}

std::string PlausibilityRow::plausible_flags() const {
  if (hooked_plausible() && lognormal_plausible()) return "H,L";
  if (hooked_plausible()) return "H";
  if (lognormal_plausible()) return "L";
  return "";
}

PlausibilityRow plausibility_row(const CitationSample& sample, std::size_t n_sim,
                                 std::uint64_t seed, const StudyOptions& options) {
  require_fittable(sample);
  PlausibilityRow row;
  row.subject = sample.label;
  row.n = sample.size();

  const std::array families{Family::DiscretisedLognormal, Family::HookedPowerLaw};
  for (std::size_t i = 0; i < families.size(); ++i) {
    const Family family = families[i];
    GofConfig config{n_sim, derive_seed(seed, i), RefitMode::FixedParams, options.fit,
                     options.workers};
    std::optional<GofResult> result;
    try {
      result = ks_p_value(family, sample, config);
      if (!result->fit_converged) {
        row.annotations.push_back(std::string(to_string(family)) + " fit NonConverged (" +
                                  result->fit->message + ")");
      }
    } catch (const FitFailed& e) {
      row.annotations.push_back(std::string(to_string(family)) + " fit Degenerate: " + e.what());
    }
    (family == Family::DiscretisedLognormal ? row.lognormal : row.hooked) = std::move(result);
  }
  return row;
}

std::vector<std::string> plausibility_columns() {
  return {"Subject", "N",       "Ln μ",    "Ln σ",       "Ln KS",    "Ln KS p",
          "Hook α",  "Hook B",  "Hook KS", "Hook KS p",  "Plausible"};
}

Table to_table(std::span<const PlausibilityRow> rows) {
  Table table{plausibility_columns(), {}, {}};
  for (const auto& row : rows) {
    std::vector<Cell> cells{row.subject, count(row.n)};
    for (const auto* gof : {&row.lognormal, &row.hooked}) {
      if (*gof && (*gof)->fit && (*gof)->fit->model) {
        const auto [p, q] = (*gof)->fit->model->parameters();
        cells.insert(cells.end(), {real(p), real(q), real((*gof)->ks_stat), real((*gof)->p_value)});
      } else {
        cells.insert(cells.end(), {Cell{}, Cell{}, Cell{}, Cell{}});
      }
    }
    cells.emplace_back(row.plausible_flags());
    table.rows.push_back(std::move(cells));
    for (const auto& note : row.annotations) table.notes.push_back(row.subject + ": " + note);
  }
  return table;
}

// ---------------------------------------------------------------------------

VuongStudy bootstrap_vuong_study(const CitationSample& sample, std::size_t reps,
                                 ResampleSize size, std::uint64_t seed,
                                 const StudyOptions& options) {
  if (reps < kMinReps) {
    throw TooFewReps("bootstrap needs at least " + std::to_string(kMinReps) + " reps, got " +
                     std::to_string(reps));
  }
  require_fittable(sample);
  const std::size_t n = size.resolve(sample.size());
  return run_vuong_study(
      sample.label, n, reps,
      [&](std::size_t r) { return resample(sample, n, derive_seed(seed, r)); }, options);
}

VuongStudy simulation_study(const ModelSpec& generator, std::size_t n, std::size_t reps,
                            std::uint64_t seed, const StudyOptions& options) {
  if (n == 0 || reps == 0) throw ParameterError("simulation study needs n >= 1 and reps >= 1");
  return run_vuong_study(
      generator.describe(), n, reps,
      [&](std::size_t r) { return sample(generator, n, derive_seed(seed, r)); }, options);
}

std::vector<std::string> vuong_columns() {
  return {"Subject",
          "Sample size (articles)",
          "Lower 95% limit",
          "Median Vuong",
          "Upper 95% limit",
          "Hooked a sig. better fit",
          "Discr. Logn. a sig. better fit"};
}

Table to_table(std::span<const VuongStudy> studies) {
  Table table{vuong_columns(), {}, {}};
  for (const auto& s : studies) {
    std::vector<Cell> cells{s.subject, count(s.sample_size)};
    if (s.z) {
      cells.insert(cells.end(), {real(s.z->lo95), real(s.z->median), real(s.z->hi95)});
    } else {
      cells.insert(cells.end(), {Cell{}, Cell{}, Cell{}});
    }
    cells.push_back(count(s.tally.a_wins));
    cells.push_back(count(s.tally.b_wins));
    table.rows.push_back(std::move(cells));
    table.notes.push_back(s.subject + ": neither=" + std::to_string(s.tally.neither) +
                          ", failed=" + std::to_string(s.failed) + " of " + std::to_string(s.reps) +
                          " reps");
  }
  return table;
}

// ---------------------------------------------------------------------------

std::vector<ScaleCiRow> scale_ci_study(std::span<const CitationSample> samples, std::size_t reps,
                                       ResampleSize size, std::uint64_t seed,
                                       const StudyOptions& options) {
  std::vector<ScaleCiRow> rows;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& sample = samples[i];
    ScaleCiRow row{label_or(sample, i), sample.size(), std::nullopt, {}};
    try {
      require_fittable(sample);
      const auto full = fit(Family::DiscretisedLognormal, sample, options.fit);
      if (full.status == FitStatus::Degenerate) {
        row.annotation = "Degenerate";
        rows.push_back(std::move(row));
        continue;
      }
      const FitConfig fit_config = options.fit;
      row.sigma = bootstrap_study(
          sample, "sigma",
          [fit_config](const CitationSample& s) -> std::optional<double> {
            const auto f = fit(Family::DiscretisedLognormal, s, fit_config);
            if (!f.converged()) return std::nullopt;
            return f.model->as_lognormal()->sigma();
          },
          {reps, size, derive_seed(seed, i), options.workers});
      if (row.sigma->failed > 0) {
        row.annotation = std::to_string(row.sigma->failed) + " of " + std::to_string(reps) +
                         " replicates failed to fit";
      }
    } catch (const TooFewReps&) {
      throw;
    } catch (const Error& e) {
      row.annotation = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Table to_table(std::span<const ScaleCiRow> rows) {
  Table table{{"Subject", "N", "Lower 95% limit", "Median σ", "Upper 95% limit"}, {}, {}};
  for (const auto& row : rows) {
    if (row.sigma) {
      table.rows.push_back({row.subject, count(row.n), real(row.sigma->lo95),
                            real(row.sigma->median), real(row.sigma->hi95)});
    } else {
      table.rows.push_back({row.subject, count(row.n), Cell{}, Cell{}, Cell{}});
    }
    if (!row.annotation.empty()) table.notes.push_back(row.subject + ": " + row.annotation);
  }
  return table;
}

// ---------------------------------------------------------------------------

std::vector<ShapeRow> shape_table(std::span<const CitationSample> samples, double epsilon,
                                  const StudyOptions& options) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  std::vector<ShapeRow> rows(samples.size());
  parallel_for(
      samples.size(),
      [&](std::size_t i) {
        const auto& sample = samples[i];
        ShapeRow& row = rows[i];
        row.subject = label_or(sample, i);
        for (const Family family : {Family::DiscretisedLognormal, Family::HookedPowerLaw}) {
          try {
            const auto fitted = fit(family, sample, options.fit);
            if (!fitted.model) {
              row.annotations.push_back(std::string(to_string(family)) + " fit " +
                                        std::string(to_string(fitted.status)));
              continue;
            }
            if (!fitted.converged()) {
              row.annotations.push_back(std::string(to_string(family)) + " fit NonConverged");
            }
            auto report = shape_classify(*fitted.model, sample, epsilon);
            (family == Family::DiscretisedLognormal ? row.lognormal : row.hooked) = report;
          } catch (const Error& e) {
            row.annotations.push_back(std::string(to_string(family)) + ": " + e.what());
          }
        }
      },
      options.workers);
  return rows;
}

std::vector<std::string> shape_columns() {
  return {"Empirical data", "Ln bottom",  "Ln middle", "Ln top",
          "Hook bottom",    "Hook middle", "Hook top"};
}

Table to_table(std::span<const ShapeRow> rows) {
  Table table{shape_columns(), {}, {}};
  // totals[sign][column]
  std::array<std::array<std::size_t, 6>, 3> totals{};
  auto sign_index = [](ShapeSign s) {
    return s == ShapeSign::Plus ? 0U : (s == ShapeSign::Equal ? 1U : 2U);
  };

  for (const auto& row : rows) {
    std::vector<Cell> cells{row.subject};
    std::size_t column = 0;
    for (const auto* report : {&row.lognormal, &row.hooked}) {
      for (std::size_t part = 0; part < 3; ++part, ++column) {
        if (!*report) {
          cells.emplace_back();
          continue;
        }
        const ShapeSign s = part == 0 ? (*report)->bottom
                                      : (part == 1 ? (*report)->middle : (*report)->top);
        ++totals[sign_index(s)][column];
        cells.emplace_back(std::string(1, symbol(s)));
      }
    }
    table.rows.push_back(std::move(cells));
    for (const auto& note : row.annotations) table.notes.push_back(row.subject + ": " + note);
  }

  const std::array<const char*, 3> names{"Higher total", "Same total", "Lower total"};
  std::array<std::size_t, 6> overall{};
  for (std::size_t s = 0; s < 3; ++s) {
    std::vector<Cell> cells{std::string(names[s])};
    for (std::size_t c = 0; c < 6; ++c) {
      cells.push_back(count(totals[s][c]));
      overall[c] += totals[s][c];
    }
    table.rows.push_back(std::move(cells));
  }
  std::vector<Cell> cells{std::string("Overall total")};
  for (const auto v : overall) cells.push_back(count(v));
  table.rows.push_back(std::move(cells));
  return table;
}

// ---------------------------------------------------------------------------

MeanCrosscheck mean_crosscheck(std::span<const SubjectFixture> fixture) {
  if (fixture.empty()) throw EmptySample("mean cross-check needs at least one subject");
  MeanCrosscheck check{{}, 0.0, 0.0};
  for (const auto& s : fixture) {
    const double ln_mean = continuous_moments(s.lognormal()).mean;
    const double hook_mean = continuous_moments(s.hooked()).mean;
    check.rows.push_back({std::string(s.name), ln_mean, hook_mean});
    check.ln_mean_avg += ln_mean;
    check.hook_mean_avg += hook_mean;
  }
  check.ln_mean_avg /= static_cast<double>(fixture.size());
  check.hook_mean_avg /= static_cast<double>(fixture.size());
  return check;
}

Table to_table(const MeanCrosscheck& check) {
  Table table{{"Subject", "Lognormal mean", "Hooked mean"}, {}, {}};
  for (const auto& row : check.rows) {
    table.rows.push_back({row.subject, real(row.lognormal_mean), real(row.hooked_mean)});
  }
  table.rows.push_back({std::string("Average"), real(check.ln_mean_avg), real(check.hook_mean_avg)});
  table.notes.push_back("continuous-analogue means: exp(mu + sigma^2/2) and B/(alpha - 1)");
  return table;
}

// ---------------------------------------------------------------------------

MixtureSpec::MixtureSpec(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidWeights("a mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!std::isfinite(c.weight) || !(c.weight > 0.0)) {
      throw InvalidWeights("mixture weights must be positive and finite");
    }
    total += c.weight;
  }
  double running = 0.0;
  for (auto& c : components_) {
    c.weight /= total;
    running += c.weight;
    cumulative_.push_back(running);
  }
  cumulative_.back() = 1.0;
}

std::string MixtureSpec::describe() const {
  std::string out;
  for (const auto& c : components_) {
    if (!out.empty()) out += " + ";
    out += format_sig4(c.weight) + "*" + c.model.describe();
  }
  return out;
}

CitationSample mixture_sample(const MixtureSpec& spec, std::size_t n, std::uint64_t seed) {
  CitationSample out;
  out.counts.reserve(n);
  Rng values(seed);
  Rng chooser(derive_seed(seed, kComponentStream));
  const auto& cumulative = spec.cumulative_;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = values.uniform01();
    std::size_t k = 0;
    if (cumulative.size() > 1) {
      const double w = chooser.uniform01();
      k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), w) -
                                   cumulative.begin());
      k = std::min(k, cumulative.size() - 1);
    }
    out.counts.push_back(spec.components_[k].model.quantile(u));
  }
  return out;
}

MixtureStudy mixture_impurity_study(const MixtureSpec& mixed, const ModelSpec& pure,
                                    std::size_t n, std::size_t trials, std::uint64_t seed,
                                    std::size_t n_sim, const StudyOptions& options) {
  if (n == 0 || trials == 0) throw ParameterError("mixture study needs n >= 1 and trials >= 1");

  struct Trial {
    double ks_mixed;
    double ks_pure;
    bool mixed_rejected = false;
    bool pure_rejected = false;
  };
  std::vector<std::optional<Trial>> outcome(trials);
  parallel_for(
      trials,
      [&](std::size_t t) {
        const std::uint64_t trial_seed = derive_seed(seed, t);
        const auto mixed_sample = mixture_sample(mixed, n, derive_seed(trial_seed, 0));
        const auto pure_sample = sample(pure, n, derive_seed(trial_seed, 1));
        const auto mixed_fit = fit(Family::DiscretisedLognormal, mixed_sample, options.fit);
        const auto pure_fit = fit(Family::DiscretisedLognormal, pure_sample, options.fit);
        if (!mixed_fit.converged() || !pure_fit.converged()) return;

        Trial trial{ks_statistic(*mixed_fit.model, mixed_sample),
                    ks_statistic(*pure_fit.model, pure_sample)};
        if (n_sim > 0) {
          trial.mixed_rejected =
              ks_p_value(*mixed_fit.model, mixed_sample, n_sim, derive_seed(trial_seed, 2), 1)
                  .p_value < kPlausibleLevel;
          trial.pure_rejected =
              ks_p_value(*pure_fit.model, pure_sample, n_sim, derive_seed(trial_seed, 3), 1)
                  .p_value < kPlausibleLevel;
        }
        outcome[t] = trial;
      },
      options.workers);

  MixtureStudy study;
  study.mixture = mixed.describe();
  study.pure = pure.describe();
  study.n = n;
  study.trials = trials;
  std::size_t mixed_rejected = 0;
  std::size_t pure_rejected = 0;
  for (const auto& o : outcome) {
    if (!o) {
      ++study.failed;
      continue;
    }
    study.ks_mixed.push_back(o->ks_mixed);
    study.ks_pure.push_back(o->ks_pure);
    if (o->ks_mixed > o->ks_pure) ++study.mixed_larger;
    mixed_rejected += o->mixed_rejected ? 1 : 0;
    pure_rejected += o->pure_rejected ? 1 : 0;
  }
  if (n_sim > 0) {
    study.mixed_rejected = mixed_rejected;
    study.pure_rejected = pure_rejected;
  }
  return study;
}

Table to_table(const MixtureStudy& study) {
  Table table{{"Mixture", "Pure", "N", "Trials", "Median KS mixed", "Median KS pure",
               "Mixed KS larger", "Mixed rejected", "Pure rejected"},
              {},
              {}};
  auto optional_count = [](const std::optional<std::size_t>& v) { return v ? count(*v) : Cell{}; };
  table.rows.push_back({study.mixture, study.pure, count(study.n), count(study.trials),
                        real(median_of(study.ks_mixed)), real(median_of(study.ks_pure)),
                        count(study.mixed_larger), optional_count(study.mixed_rejected),
                        optional_count(study.pure_rejected)});
  if (study.failed > 0) {
    table.notes.push_back(std::to_string(study.failed) + " trials failed to fit");
  }
  return table;
}

}  // namespace citefit
