// citefit: fit, test and compare discrete citation-count distributions.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "citefit/errors.hpp"
#include "citefit/experiments.hpp"
#include "citefit/parallel.hpp"
#include "citefit/random.hpp"
#include "citefit/report.hpp"
#include "citefit/version.hpp"
#include "cli_support.hpp"

namespace citefit::cli {
namespace {

// Stream tags separating the fixture data from the study randomness.
constexpr std::uint64_t kDataStream = 0x64617461ULL;
constexpr std::uint64_t kStudyStream = 0x73747564ULL;

struct Options {
  std::vector<std::string> files;
  std::string dist = "both";
  std::string generator = "lognormal";
  std::size_t reps = 50;
  std::size_t nsim = 1000;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> size;
  Count offset = 1;
  double epsilon = 0.01;
  std::string format = "tsv";
  bool refit = false;
  unsigned threads = 0;
  std::string output;
  std::string model;
  std::string subject;
  std::string mixture = "0.5*lognormal:1.0,1.0;0.5*lognormal:3.5,1.0";
  std::string pure = "lognormal:2.25,1.0";
};

StudyOptions study_options(const Options& o) {
  StudyOptions s;
  s.workers = o.threads;
  return s;
}

std::string fixture_source(const Options& o) {
  return "simulated from the embedded 23-subject parameter fixture (" + o.generator +
         " generator)";
}

// Fixture mode: one simulated sample per subject, sized by the subject or
// by --size.
std::vector<CitationSample> fixture_samples(const Options& o, std::uint64_t seed) {
  const Family generator = parse_family(o.generator);
  std::vector<CitationSample> samples;
  const auto subjects = subject_fixtures();
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    samples.push_back(
        simulate_subject(subjects[i], generator, o.size, derive_seed(derive_seed(seed, kDataStream), i)));
  }
  return samples;
}

std::vector<CitationSample> input_samples(const Options& o, std::uint64_t seed) {
  return o.files.empty() ? fixture_samples(o, seed) : load_samples(o.files, o.offset);
}

void write(const Report& report, const Options& o) {
  const ReportFormat format = parse_report_format(o.format);
  if (o.output.empty()) {
    emit_report(report, format, std::cout);
  } else {
    emit_report(report, format, std::filesystem::path(o.output));
  }
}

Report make_report(std::string command, std::uint64_t seed, std::optional<std::uint64_t> reps,
                   std::string source, Table table) {
  return {{kVersion, seed, reps, std::move(command), std::move(source)}, std::move(table)};
}

Cell real(double v) { return std::isfinite(v) ? Cell{v} : Cell{}; }
Cell integer(std::size_t v) { return Cell{static_cast<std::int64_t>(v)}; }

std::vector<CitationSample> require_files(const Options& o, std::string_view command) {
  if (o.files.empty()) {
    throw InputError(std::string(command) + " needs at least one count file");
  }
  return load_samples(o.files, o.offset);
}

// ---------------------------------------------------------------------------

void run_fit(const Options& o, std::uint64_t seed) {
  const auto samples = require_files(o, "fit");
  Table table{{"Sample", "N", "Distribution", "Status", "Parameter 1", "Parameter 2",
               "Log-likelihood", "Evaluations"},
              {},
              {}};
  for (const auto& sample : samples) {
    for (const Family family : parse_families(o.dist)) {
      const auto result = fit(family, sample);
      std::vector<Cell> row{sample.label, integer(sample.size()), std::string(to_string(family)),
                            std::string(to_string(result.status))};
      if (result.model) {
        const auto [p, q] = result.model->parameters();
        row.insert(row.end(), {real(p), real(q), real(result.log_likelihood)});
      } else {
        row.insert(row.end(), {Cell{}, Cell{}, Cell{}});
      }
      row.push_back(Cell{static_cast<std::int64_t>(result.evaluations)});
      table.rows.push_back(std::move(row));
      if (!result.converged()) {
        table.notes.push_back(sample.label + " " + std::string(to_string(family)) + ": " +
                              result.message);
      }
    }
  }
  write(make_report("fit", seed, std::nullopt, describe_source(o.files, ""), std::move(table)), o);
}

void run_gof(const Options& o, std::uint64_t seed) {
  const auto samples = require_files(o, "gof");
  Table table{{"Sample", "N", "Distribution", "Parameter 1", "Parameter 2", "KS", "KS p",
               "Simulations", "Failed simulations", "Refit"},
              {},
              {}};
  const auto families = parse_families(o.dist);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& sample = samples[i];
    for (std::size_t f = 0; f < families.size(); ++f) {
      GofConfig config;
      config.n_sim = o.nsim;
      config.seed = derive_seed(derive_seed(seed, i), f);
      config.refit = o.refit ? RefitMode::Refit : RefitMode::FixedParams;
      config.workers = o.threads;
      const auto result = ks_p_value(families[f], sample, config);
      const auto [p, q] = result.fit->model->parameters();
      table.rows.push_back({sample.label, integer(sample.size()),
                            std::string(to_string(families[f])), real(p), real(q),
                            real(result.ks_stat), real(result.p_value), integer(result.n_sim),
                            integer(result.failed_sims),
                            std::string(to_string(result.refit_mode))});
      if (!result.fit_converged) {
        table.notes.push_back(sample.label + " " + std::string(to_string(families[f])) +
                              ": fit NonConverged (" + result.fit->message + ")");
      }
    }
  }
  write(make_report("gof", seed, std::nullopt, describe_source(o.files, ""), std::move(table)), o);
}

void run_vuong(const Options& o, std::uint64_t seed) {
  const auto samples = require_files(o, "vuong");
  Table table{{"Sample", "N", "Vuong z", "p (two-sided)", "Favoured"}, {}, {}};
  for (const auto& sample : samples) {
    const auto table_counts = CountTable::from(sample);
    const auto hooked = fit(Family::HookedPowerLaw, table_counts);
    const auto lognormal = fit(Family::DiscretisedLognormal, table_counts);
    if (!hooked.model || !lognormal.model) {
      throw FitFailed(sample.label + ": " + (hooked.model ? lognormal.message : hooked.message));
    }
    const auto r = vuong(*hooked.model, *lognormal.model, table_counts);
    const char* favoured = r.favored == Favored::ModelA
                               ? "hooked"
                               : (r.favored == Favored::ModelB ? "lognormal" : "neither");
    table.rows.push_back({sample.label, integer(r.n), real(r.z), real(r.p_two_sided),
                          std::string(favoured)});
    for (const auto* f : {&hooked, &lognormal}) {
      if (!f->converged()) {
        table.notes.push_back(sample.label + " " + std::string(to_string(f->family)) + ": " +
                              f->message);
      }
    }
  }
  table.notes.push_back("positive z favours the hooked power law");
  write(make_report("vuong", seed, std::nullopt, describe_source(o.files, ""), std::move(table)),
        o);
}

ResampleSize resample_size(const Options& o, ResampleSize fallback) {
  return o.size ? ResampleSize::fixed(*o.size) : fallback;
}

void run_bootstrap(const Options& o, std::uint64_t seed) {
  const auto samples = require_files(o, "bootstrap");
  std::vector<VuongStudy> studies;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    studies.push_back(bootstrap_vuong_study(samples[i], o.reps,
                                            resample_size(o, ResampleSize::same()),
                                            derive_seed(seed, i), study_options(o)));
  }
  write(make_report("bootstrap", seed, o.reps, describe_source(o.files, ""), to_table(studies)), o);
}

void run_simulate(const Options& o, std::uint64_t seed) {
  std::optional<ModelSpec> model;
  std::size_t n = o.size.value_or(0);
  if (!o.model.empty()) {
    model = parse_model(o.model);
  } else if (!o.subject.empty()) {
    const auto& subject = find_subject(o.subject);
    model = subject.model(parse_family(o.generator));
    if (!o.size) n = subject.n;
  } else {
    throw InputError("simulate needs --model or --subject");
  }
  if (n == 0 && !o.size) throw InputError("simulate needs --size with --model");
  const auto drawn = sample(*model, n, seed);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) throw IoError("cannot write '" + o.output + "'");
    out = &file;
  }
  // Raw (pre-offset) counts, so the output can be fed back to every command.
  for (const Count c : drawn.counts) *out << (c - o.offset) << '\n';
}

void run_plot(const Options& o, std::uint64_t) {
  const auto samples = require_files(o, "plot");
  if (samples.size() != 1) throw InputError("plot takes exactly one count file");
  const auto families = parse_families(o.dist == "both" ? "lognormal" : o.dist);
  std::optional<ModelSpec> model;
  if (o.model.empty()) {
    const auto result = fit(families.front(), samples.front());
    if (!result.model) throw FitFailed(result.message);
    model = result.model;
  } else {
    model = parse_model(o.model);
  }
  if (o.output.empty()) {
    emit_plot_data(*model, samples.front(), std::cout);
  } else {
    emit_plot_data(*model, samples.front(), std::filesystem::path(o.output));
  }
}

// ---------------------------------------------------------------------------

void run_study_plausibility(const Options& o, std::uint64_t seed) {
  const auto samples = input_samples(o, seed);
  std::vector<PlausibilityRow> rows;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    rows.push_back(plausibility_row(samples[i], o.nsim,
                                    derive_seed(derive_seed(seed, kStudyStream), i),
                                    study_options(o)));
  }
  write(make_report("study plausibility", seed, std::nullopt,
                    describe_source(o.files, fixture_source(o)), to_table(rows)),
        o);
}

void run_study_vuong(const Options& o, std::uint64_t seed) {
  std::vector<VuongStudy> studies;
  const std::uint64_t study_seed = derive_seed(seed, kStudyStream);
  if (o.files.empty()) {
    const Family generator = parse_family(o.generator);
    const auto subjects = subject_fixtures();
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      auto study = simulation_study(subjects[i].model(generator), o.size.value_or(subjects[i].n),
                                    o.reps, derive_seed(study_seed, i), study_options(o));
      study.subject = std::string(subjects[i].name);
      studies.push_back(std::move(study));
    }
  } else {
    const auto samples = load_samples(o.files, o.offset);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      studies.push_back(bootstrap_vuong_study(samples[i], o.reps,
                                              resample_size(o, ResampleSize::same()),
                                              derive_seed(study_seed, i), study_options(o)));
    }
  }
  auto table = to_table(studies);
  table.notes.push_back("positive z favours the hooked power law");
  write(make_report("study vuong", seed, o.reps, describe_source(o.files, fixture_source(o)),
                    std::move(table)),
        o);
}

void run_study_scale(const Options& o, std::uint64_t seed) {
  const auto samples = input_samples(o, seed);
  const auto rows = scale_ci_study(samples, o.reps, resample_size(o, ResampleSize::fixed(500)),
                                   derive_seed(seed, kStudyStream), study_options(o));
  write(make_report("study scale", seed, o.reps, describe_source(o.files, fixture_source(o)),
                    to_table(rows)),
        o);
}

void run_study_shape(const Options& o, std::uint64_t seed) {
  const auto samples = input_samples(o, seed);
  const auto rows = shape_table(samples, o.epsilon, study_options(o));
  auto table = to_table(rows);
  table.notes.push_back("+: empirical CDF above the model by more than epsilon = " +
                        format_sig4(o.epsilon) + "; -: below; =: within");
  write(make_report("study shape", seed, std::nullopt,
                    describe_source(o.files, fixture_source(o)), std::move(table)),
        o);
}

void run_study_mixture(const Options& o, std::uint64_t seed) {
  const auto study = mixture_impurity_study(parse_mixture(o.mixture), parse_model(o.pure),
                                            o.size.value_or(10000), o.reps, seed,
                                            o.refit ? o.nsim : 0, study_options(o));
  write(make_report("study mixture", seed, o.reps, "simulated mixture and pure samples",
                    to_table(study)),
        o);
}

void run_study_means(const Options& o, std::uint64_t seed) {
  write(make_report("study means", seed, std::nullopt, "embedded 23-subject parameter fixture",
                    to_table(mean_crosscheck(subject_fixtures()))),
        o);
}

// ---------------------------------------------------------------------------

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Master seed (default: $CITEFIT_SEED, else random)");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--format", o.format, "Report format: tsv or json")
      ->check(CLI::IsMember({"tsv", "json"}));
  cmd->add_option("--output,-o", o.output, "Write to this file instead of stdout");
}

void add_input(CLI::App* cmd, Options& o) {
  cmd->add_option("files", o.files, "Count files: one integer per line, or CSV with a "
                                    "'citations' column");
  cmd->add_option("--offset", o.offset, "Added to every raw count")->check(CLI::NonNegativeNumber);
}

void add_fixture(CLI::App* cmd, Options& o) {
  cmd->add_option("--generator", o.generator,
                  "Family simulated per subject when no files are given");
}

int run(int argc, char** argv) {
  CLI::App app{"Fit, test and compare discretised lognormal and hooked power law models of "
               "citation counts"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Options o;
  std::function<void(const Options&, std::uint64_t)> action;
  auto bind = [&](CLI::App* cmd, void (*fn)(const Options&, std::uint64_t)) {
    cmd->callback([&action, fn] { action = fn; });
  };

  auto* fit_cmd = app.add_subcommand("fit", "Maximum-likelihood fit of each file");
  add_input(fit_cmd, o);
  add_common(fit_cmd, o);
  fit_cmd->add_option("--dist", o.dist, "lognormal, hooked or both");
  bind(fit_cmd, run_fit);

  auto* gof_cmd = app.add_subcommand("gof", "Monte-Carlo Kolmogorov-Smirnov test");
  add_input(gof_cmd, o);
  add_common(gof_cmd, o);
  gof_cmd->add_option("--dist", o.dist, "lognormal, hooked or both");
  gof_cmd->add_option("--nsim", o.nsim, "Simulated samples")->check(CLI::PositiveNumber);
  gof_cmd->add_flag("--refit", o.refit, "Refit every simulated sample");
  bind(gof_cmd, run_gof);

  auto* vuong_cmd = app.add_subcommand("vuong", "Vuong test, hooked power law vs lognormal");
  add_input(vuong_cmd, o);
  add_common(vuong_cmd, o);
  bind(vuong_cmd, run_vuong);

  auto* boot_cmd = app.add_subcommand("bootstrap", "Vuong z over bootstrap resamples");
  add_input(boot_cmd, o);
  add_common(boot_cmd, o);
  boot_cmd->add_option("--reps", o.reps, "Resamples (at least 40)");
  boot_cmd->add_option("--size", o.size, "Resample size (default: the file's size)")
      ->check(CLI::PositiveNumber);
  bind(boot_cmd, run_bootstrap);

  auto* sim_cmd = app.add_subcommand("simulate", "Draw raw counts from a model");
  add_common(sim_cmd, o);
  sim_cmd->add_option("--model", o.model, "lognormal:MU,SIGMA or hooked:ALPHA,B");
  sim_cmd->add_option("--subject", o.subject, "Use a fixture subject's parameters");
  sim_cmd->add_option("--dist", o.generator, "Family used with --subject");
  sim_cmd->add_option("--size", o.size, "Number of draws");
  sim_cmd->add_option("--offset", o.offset, "Subtracted from every draw")
      ->check(CLI::NonNegativeNumber);
  bind(sim_cmd, run_simulate);

  auto* plot_cmd = app.add_subcommand("plot", "Empirical and model CDF as CSV");
  add_input(plot_cmd, o);
  add_common(plot_cmd, o);
  plot_cmd->add_option("--dist", o.dist, "Family to fit (lognormal or hooked)");
  plot_cmd->add_option("--model", o.model, "Plot this model instead of a fit");
  bind(plot_cmd, run_plot);

  auto* study = app.add_subcommand("study", "Multi-subject studies");
  study->require_subcommand(1);

  auto* plaus = study->add_subcommand("plausibility", "Fit and KS-test both families");
  add_input(plaus, o);
  add_common(plaus, o);
  add_fixture(plaus, o);
  plaus->add_option("--nsim", o.nsim, "Simulated samples per test")->check(CLI::PositiveNumber);
  plaus->add_option("--size", o.size, "Fixture sample size (default: the subject's n)");
  bind(plaus, run_study_plausibility);

  auto* sv = study->add_subcommand("vuong", "Vuong tallies over resamples or simulations");
  add_input(sv, o);
  add_common(sv, o);
  add_fixture(sv, o);
  sv->add_option("--reps", o.reps, "Replicates per subject");
  sv->add_option("--size", o.size, "Replicate size (default: the subject's n)")
      ->check(CLI::PositiveNumber);
  bind(sv, run_study_vuong);

  auto* scale = study->add_subcommand("scale", "Bootstrap CI of the lognormal sigma");
  add_input(scale, o);
  add_common(scale, o);
  add_fixture(scale, o);
  scale->add_option("--reps", o.reps, "Resamples per subject (at least 40)");
  scale->add_option("--size", o.size, "Resample size (default: 500)")->check(CLI::PositiveNumber);
  bind(scale, run_study_scale);

  auto* shape = study->add_subcommand("shape", "Bottom/middle/top CDF comparison");
  add_input(shape, o);
  add_common(shape, o);
  add_fixture(shape, o);
  shape->add_option("--epsilon", o.epsilon, "Classification threshold")
      ->check(CLI::PositiveNumber);
  shape->add_option("--size", o.size, "Fixture sample size (default: the subject's n)");
  bind(shape, run_study_shape);

  auto* mix = study->add_subcommand("mixture", "Fit quality of mixed vs pure samples");
  add_common(mix, o);
  mix->add_option("--mixture", o.mixture, "WEIGHT*MODEL;WEIGHT*MODEL...");
  mix->add_option("--pure", o.pure, "Pure comparison model");
  mix->add_option("--reps", o.reps, "Trials");
  mix->add_option("--size", o.size, "Sample size per trial (default: 10000)")
      ->check(CLI::PositiveNumber);
  mix->add_option("--nsim", o.nsim, "Simulations per KS test with --refit");
  mix->add_flag("--refit", o.refit, "Also run Monte-Carlo KS tests on each trial");
  bind(mix, run_study_mixture);

  auto* means = study->add_subcommand("means", "Closed-form mean cross-check");
  add_common(means, o);
  bind(means, run_study_means);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::uint64_t seed = resolve_seed(o.seed);
  std::cerr << "citefit: master seed " << seed << '\n';
  if (o.threads > 0) set_default_workers(o.threads);
  action(o, seed);
  return 0;
}

}  // namespace
}  // namespace citefit::cli

int main(int argc, char** argv) {
  try {
    return citefit::cli::run(argc, argv);
  } catch (const citefit::InputError& e) {
    std::cerr << "citefit: error: " << e.what() << '\n';
    return 2;
  } catch (const citefit::NumericalError& e) {
    std::cerr << "citefit: numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "citefit: " << e.what() << '\n';
    return 3;
  }
}
