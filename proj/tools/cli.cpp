#include "cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "seedlab/features.hpp"
#include "seedlab/io.hpp"
#include "seedlab/metrics.hpp"
#include "seedlab/ml.hpp"
#include "seedlab/segmentation.hpp"

namespace seedlab::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> inputs;
  std::string out;
  std::string model;
  std::optional<double> min_area, max_area, circ_min, circ_max;
  std::string features;
  std::string classifier = "rf";
  int k = 1;
  int trees = 100;
  double c = 1.0;
  int folds = 10;
  std::uint64_t seed = 1;
  int jobs = 1;
  int glcm_levels = 256;
  int pad = 2;
  bool quiet = false;
};

void add_filter_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--min-area", o.min_area, "Smallest accepted region, px^2 (default 50)");
  cmd.add_option("--max-area", o.max_area, "Largest accepted region, px^2 (default image area / 4)");
  cmd.add_option("--circ-min", o.circ_min, "Lowest accepted circularity (default 0)");
  cmd.add_option("--circ-max", o.circ_max, "Highest accepted circularity (default 1)");
  cmd.add_option("--glcm-levels", o.glcm_levels, "Gray levels of the co-occurrence matrix")
      ->check(CLI::Range(2, 256));
}

void add_model_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--classifier", o.classifier, "knn, nb, rf or svm");
  cmd.add_option("--k", o.k, "Neighbours for knn")->check(CLI::PositiveNumber);
  cmd.add_option("--trees", o.trees, "Trees for rf")->check(CLI::PositiveNumber);
  cmd.add_option("--c", o.c, "Soft-margin penalty for svm")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", o.seed, "Random seed");
}

void add_common_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  cmd.add_flag("-q,--quiet", o.quiet, "Suppress warnings on stderr");
}

segmentation::RegionFilterOverrides filter_from(const Options& o) {
  segmentation::RegionFilterOverrides f{o.min_area, o.max_area, o.circ_min, o.circ_max};
  try {
    f.resolve(1 << 15, 1 << 15);  // huge frame: only checks the explicit bounds
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return f;
}

std::optional<FeatureCategory> categories_from(const Options& o) {
  if (o.features.empty()) return std::nullopt;
  try {
    return parse_categories(o.features);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

ml::ClassifierKind kind_from(const Options& o) {
  try {
    return ml::parse_classifier(o.classifier);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

ml::Hyperparameters hyper_from(const Options& o) {
  ml::Hyperparameters hp;
  hp.knn_k = o.k;
  hp.rf_trees = o.trees;
  hp.svm_c = o.c;
  try {
    hp.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return hp;
}

io::IngestOptions ingest_from(const Options& o, FeatureCategory set) {
  io::IngestOptions opts;
  opts.categories = set;
  opts.filter = filter_from(o);
  opts.extract.texture.glcm_levels = o.glcm_levels;
  opts.jobs = o.jobs;
  return opts;
}

void report_ingest(const io::IngestResult& r, const Options& o, std::ostream& err) {
  if (o.quiet) return;
  for (const auto& e : r.errors) fmt::print(err, "warning: {}: {}\n", e.file.string(), e.message);
  for (const auto& s : r.skipped) fmt::print(err, "warning: skipped {}\n", s);
}

/// Dataset file, or a scan directory that is ingested on the fly.
LabeledDataset load_input(const std::string& input, const Options& o, FeatureCategory ingest_set,
                          std::ostream& err) {
  if (fs::is_directory(input)) {
    auto r = io::ingest_directory(input, ingest_from(o, ingest_set));
    report_ingest(r, o, err);
    if (r.dataset.size() == 0) {
      throw Error(ErrorKind::EmptyRegion, "no seeds were extracted from " + input);
    }
    return std::move(r.dataset);
  }
  return io::read_dataset(input);
}

/// Columns of `set`, located by name; every one must be present.
LabeledDataset select_category(const LabeledDataset& ds, FeatureCategory set) {
  const auto wanted = feature_names(set);
  std::vector<std::size_t> cols;
  for (const auto& name : wanted) {
    const auto it = std::find(ds.feature_names.begin(), ds.feature_names.end(), name);
    if (it == ds.feature_names.end()) {
      throw Error(ErrorKind::FeatureSchemaMismatch, "dataset lacks feature '" + name + "'");
    }
    cols.push_back(static_cast<std::size_t>(it - ds.feature_names.begin()));
  }
  return ds.select_columns(cols);
}

LabeledDataset apply_selection(LabeledDataset ds, const std::optional<FeatureCategory>& set) {
  return set ? select_category(ds, *set) : ds;
}

std::string pct(double v) { return fmt::format("{:.4f}", v); }

std::string auc_text(const std::optional<double>& auc) {
  return auc ? fmt::format("{:.6f}", *auc) : std::string("NA");
}

void metrics_header_csv(std::ostream& out) {
  out << "accuracy,specificity,sensitivity,precision,mavg,mava,mfm,auc";
}

std::string metrics_csv(const metrics::MetricsReport& m, const std::optional<double>& auc) {
  return fmt::format("{},{},{},{},{},{},{},{}", pct(m.accuracy), pct(m.macro_specificity),
                     pct(m.macro_sensitivity), pct(m.macro_precision), pct(m.mavg), pct(m.mava),
                     pct(m.mfm), auc_text(auc));
}

std::string metrics_row(const std::string& label, const metrics::MetricsReport& m,
                        const std::optional<double>& auc) {
  return fmt::format("{:<8}{:>10}{:>13}{:>13}{:>11}{:>10}{:>10}{:>10}{:>10}\n", label, pct(m.accuracy),
                     pct(m.macro_specificity), pct(m.macro_sensitivity), pct(m.macro_precision),
                     pct(m.mavg), pct(m.mava), pct(m.mfm), auc_text(auc));
}

std::string metrics_table_header() {
  return fmt::format("{:<8}{:>10}{:>13}{:>13}{:>11}{:>10}{:>10}{:>10}{:>10}\n", "fold", "accuracy",
                     "specificity", "sensitivity", "precision", "mavg", "mava", "mfm", "auc");
}

std::optional<double> safe_auc(const Matrix& scores, std::span<const int> y) {
  try {
    return ml::macro_ovr_auc(scores, y);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UndefinedAuc) return std::nullopt;
    throw;
  }
}

/// Deterministic text rendering of a cross-validation run.
std::string render_cv_text(const LabeledDataset& ds, ml::ClassifierKind kind, const Options& o,
                           const ml::CvReport& cv, const std::optional<double>& pooled_auc) {
  std::ostringstream s;
  fmt::print(s, "classifier: {}\n", ml::to_string(kind));
  fmt::print(s, "samples: {}  features: {}  classes: {}\n", ds.size(), ds.dims(), ds.num_classes());
  fmt::print(s, "folds: {}  seed: {}\n", cv.per_fold.size(), o.seed);
  if (cv.warning) fmt::print(s, "warning: {}\n", *cv.warning);
  s << '\n' << metrics_table_header();
  for (std::size_t f = 0; f < cv.per_fold.size(); ++f) {
    const auto& fold = cv.per_fold[f];
    s << metrics_row(std::to_string(f + 1), metrics::compute_metrics(fold.confusion), fold.auc);
  }
  const auto pooled = metrics::compute_metrics(cv.pooled);
  s << metrics_row("pooled", pooled, pooled_auc);
  fmt::print(s, "\nselected fold: {} (largest AUC)\n", cv.selected_fold + 1);

  s << "\nconfusion matrix (rows: truth, columns: predicted)\n";
  std::size_t width = 6;
  for (const auto& n : ds.class_names) width = std::max(width, n.size() + 2);
  fmt::print(s, "{:<{}}", "", width);
  for (const auto& n : ds.class_names) fmt::print(s, "{:>{}}", n, width);
  s << '\n';
  for (std::size_t i = 0; i < ds.num_classes(); ++i) {
    fmt::print(s, "{:<{}}", ds.class_names[i], width);
    for (std::size_t j = 0; j < ds.num_classes(); ++j) fmt::print(s, "{:>{}}", cv.pooled(i, j), width);
    s << '\n';
  }

  s << "\nper class (pooled)\n";
  fmt::print(s, "{:<{}}{:>13}{:>13}{:>11}{:>10}\n", "class", width, "sensitivity", "specificity",
             "precision", "f1");
  for (std::size_t i = 0; i < ds.num_classes(); ++i) {
    const auto& c = pooled.per_class[i];
    fmt::print(s, "{:<{}}{:>13.4f}{:>13.4f}{:>11.4f}{:>10.4f}\n", ds.class_names[i], width,
               c.sensitivity, c.specificity, c.precision, c.f1);
  }
  return s.str();
}

std::string render_cv_csv(const ml::CvReport& cv, const std::optional<double>& pooled_auc) {
  std::ostringstream s;
  s << "fold,";
  metrics_header_csv(s);
  s << '\n';
  for (std::size_t f = 0; f < cv.per_fold.size(); ++f) {
    const auto& fold = cv.per_fold[f];
    s << (f + 1) << ',' << metrics_csv(metrics::compute_metrics(fold.confusion), fold.auc) << '\n';
  }
  s << "pooled," << metrics_csv(metrics::compute_metrics(cv.pooled), pooled_auc) << '\n';
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

/// "--out results" and "--out results.arff" both name the stem "results".
fs::path output_stem(const std::string& out) {
  fs::path p(out);
  const auto ext = p.extension().string();
  if (ext == ".arff" || ext == ".csv" || ext == ".txt") p.replace_extension();
  return p;
}

fs::path with_suffix(const fs::path& stem, const std::string& suffix) {
  return stem.parent_path() / (stem.filename().string() + suffix);
}

std::vector<fs::path> image_files(const fs::path& input) {
  std::vector<fs::path> files;
  if (fs::is_directory(input)) {
    for (const auto& e : fs::recursive_directory_iterator(input)) {
      if (e.is_regular_file() && io::is_image_file(e.path())) files.push_back(e.path());
    }
  } else {
    files.push_back(input);
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  return files;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_segment(const Options& o, std::ostream& out, std::ostream& err) {
  const auto filter = filter_from(o);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  std::size_t failures = 0;
  std::vector<fs::path> files;
  for (const auto& in : o.inputs) {
    const auto f = image_files(in);
    files.insert(files.end(), f.begin(), f.end());
  }
  for (const auto& file : files) {
    try {
      const auto img = io::load_image(file);
      const auto mask = segmentation::blue_background_mask(img);
      const auto regions = segmentation::filter_regions(segmentation::connected_components(mask),
                                                        filter.resolve(img.width(), img.height()));
      const std::string stem = file.stem().string();

      GrayRaster mask_png(img.width(), img.height());
      const auto kept = segmentation::mask_from_regions(img.width(), img.height(), regions);
      for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) mask_png.at(x, y) = is_foreground(kept, x, y) ? 255 : 0;
      }
      io::save_png(mask_png, dir / (stem + "_mask.png"));

      RgbRaster overlay = img;
      for (const auto& r : regions) {
        for (const auto& p : r.contour) overlay.at(p.x, p.y) = Rgb{255, 0, 0};
      }
      io::save_png(overlay, dir / (stem + "_overlay.png"));

      for (const auto& r : regions) {
        const auto crop = segmentation::crop_region(img, kept, r, o.pad);
        io::save_png(crop.image, dir / fmt::format("{}_seed{:04d}.png", stem, r.label));
      }
      fmt::print(out, "{}: {} seeds\n", file.string(), regions.size());
    } catch (const Error& e) {
      ++failures;
      fmt::print(err, "error: {}: {}\n", file.string(), e.what());
    }
  }
  if (files.empty()) throw Error(ErrorKind::Io, "no image files found");
  return failures == files.size() ? kDataError : kOk;
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  const FeatureCategory set = categories_from(o).value_or(FeatureCategory::All);
  auto r = io::ingest_directory(o.inputs.front(), ingest_from(o, set));
  report_ingest(r, o, err);
  if (r.dataset.size() == 0) {
    fmt::print(err, "error: no seeds extracted ({} files failed)\n", r.errors.size());
    return kDataError;
  }
  if (r.dataset.dims() != category_arity(set)) {
    throw std::logic_error("feature arity does not match the selected categories");
  }
  const auto stem = output_stem(o.out);
  if (!stem.parent_path().empty()) fs::create_directories(stem.parent_path());
  io::write_arff(r.dataset, with_suffix(stem, ".arff"));
  io::write_csv(r.dataset, with_suffix(stem, ".csv"));
  fmt::print(out, "{} rows x {} features, {} classes from {} files ({} failed)\n", r.dataset.size(),
             r.dataset.dims(), r.dataset.num_classes(), r.files_read, r.errors.size());
  return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto kind = kind_from(o);
  const auto hp = hyper_from(o);
  const auto set = categories_from(o);
  const auto ds = apply_selection(load_input(o.inputs.front(), o, FeatureCategory::All, err), set);
  ds.validate();
  const auto cv = ml::cross_validate(kind, ds, hp, static_cast<std::size_t>(o.folds), o.seed, o.jobs);
  const auto pooled_auc = safe_auc(cv.scores, ds.y);
  const std::string text = render_cv_text(ds, kind, o, cv, pooled_auc);
  out << text;
  if (!o.out.empty()) {
    const auto stem = output_stem(o.out);
    write_text(with_suffix(stem, ".txt"), text);
    write_text(with_suffix(stem, ".csv"), render_cv_csv(cv, pooled_auc));
  }
  return kOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  const auto kind = kind_from(o);
  const auto hp = hyper_from(o);
  const auto set = categories_from(o);
  const auto ds = apply_selection(load_input(o.inputs.front(), o, FeatureCategory::All, err), set);
  ds.validate();
  if (o.folds == 1) {
    const auto model = ml::train(kind, ds, hp, o.seed, o.jobs);
    io::save_model(model, fs::path(o.out));
    fmt::print(out, "classifier: {}\nsamples: {}  features: {}  classes: {}\n", ml::to_string(kind),
               ds.size(), ds.dims(), ds.num_classes());
    fmt::print(out, "trained on all rows; model written to {}\n", o.out);
    return kOk;
  }
  const auto cv = ml::cross_validate(kind, ds, hp, static_cast<std::size_t>(o.folds), o.seed, o.jobs);
  out << render_cv_text(ds, kind, o, cv, safe_auc(cv.scores, ds.y));
  io::save_model(*cv.selected_model, fs::path(o.out));
  fmt::print(out, "model of fold {} written to {}\n", cv.selected_fold + 1, o.out);
  return kOk;
}

void print_scores_header(std::ostream& s, const ml::TrainedModel& model) {
  s << "predicted";
  for (const auto& c : model.class_names()) s << ',' << io::csv_escape("score_" + c);
  s << '\n';
}

void print_scores(std::ostream& s, const ml::TrainedModel& model, std::span<const double> x) {
  const auto scores = model.predict_scores(x);
  s << io::csv_escape(model.class_names()[static_cast<std::size_t>(model.predict(x))]);
  for (const double v : scores) s << ',' << fmt::format("{:.6f}", v);
  s << '\n';
}

int cmd_predict(const Options& o, std::ostream& out, std::ostream& err) {
  const auto model = io::load_model(fs::path(o.model));
  std::ostringstream table;
  const fs::path input = o.inputs.front();
  const bool images = fs::is_directory(input) || io::is_image_file(input);
  if (!images) {
    const auto ds = io::read_dataset(input);
    io::check_feature_schema(model, ds);
    table << "row,truth,";
    print_scores_header(table, model);
    for (std::size_t r = 0; r < ds.size(); ++r) {
      table << (r + 1) << ',' << io::csv_escape(ds.class_names[static_cast<std::size_t>(ds.y[r])]) << ',';
      print_scores(table, model, ds.X.row(r));
    }
  } else {
    // Features are computed in full and picked out by the model's names.
    const auto all = feature_names(FeatureCategory::All);
    std::vector<std::size_t> cols;
    for (const auto& name : model.feature_names()) {
      const auto it = std::find(all.begin(), all.end(), name);
      if (it == all.end()) throw Error(ErrorKind::FeatureSchemaMismatch, "unknown feature '" + name + "'");
      cols.push_back(static_cast<std::size_t>(it - all.begin()));
    }
    const auto filter = filter_from(o);
    ExtractOptions extract;
    extract.texture.glcm_levels = o.glcm_levels;
    table << "file,region,x,y,";
    print_scores_header(table, model);
    std::size_t failures = 0;
    const auto files = image_files(input);
    for (const auto& file : files) {
      try {
        const auto img = io::load_image(file);
        const auto a = analyse_image(img, filter.resolve(img.width(), img.height()), extract);
        if (!o.quiet) {
          for (const auto& s : a.skipped) fmt::print(err, "warning: skipped {}: {}\n", file.string(), s);
        }
        for (const auto& seed : a.seeds) {
          const auto full = seed.features.select(FeatureCategory::All);
          std::vector<double> x;
          for (const auto c : cols) x.push_back(full[c]);
          table << io::csv_escape(file.string()) << ',' << seed.region.label << ','
                << fmt::format("{:.2f},{:.2f},", seed.region.centroid.x, seed.region.centroid.y);
          print_scores(table, model, x);
        }
      } catch (const Error& e) {
        ++failures;
        fmt::print(err, "error: {}: {}\n", file.string(), e.what());
      }
    }
    if (!files.empty() && failures == files.size()) return kDataError;
  }
  if (o.out.empty()) {
    out << table.str();
  } else {
    write_text(o.out, table.str());
  }
  return kOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  const auto hp = hyper_from(o);
  const auto ds = load_input(o.inputs.front(), o, FeatureCategory::All, err);
  ds.validate();
  std::ostringstream csv;
  csv << "classifier,features,";
  metrics_header_csv(csv);
  csv << ",seconds\n";
  fmt::print(out, "{:<6}{:<16}{:>10}{:>13}{:>13}{:>11}{:>10}{:>10}{:>10}{:>10}{:>10}\n", "model",
             "features", "accuracy", "specificity", "sensitivity", "precision", "mavg", "mava", "mfm",
             "auc", "seconds");
  for (const auto kind : ml::kAllClassifiers) {
    for (const auto set : category_combinations()) {
      const auto sub = select_category(ds, set);
      const auto start = std::chrono::steady_clock::now();
      const auto cv = ml::cross_validate(kind, sub, hp, static_cast<std::size_t>(o.folds), o.seed, o.jobs);
      const auto auc = safe_auc(cv.scores, sub.y);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const auto m = metrics::compute_metrics(cv.pooled);
      fmt::print(out, "{:<6}{:<16}{:>10}{:>13}{:>13}{:>11}{:>10}{:>10}{:>10}{:>10}{:>10.3f}\n",
                 ml::to_string(kind), to_string(set), pct(m.accuracy), pct(m.macro_specificity),
                 pct(m.macro_sensitivity), pct(m.macro_precision), pct(m.mavg), pct(m.mava), pct(m.mfm),
                 auc_text(auc), secs);
      csv << ml::to_string(kind) << ',' << io::csv_escape(to_string(set)) << ',' << metrics_csv(m, auc)
          << ',' << fmt::format("{:.3f}", secs) << '\n';
    }
  }
  if (!o.out.empty()) write_text(o.out, csv.str());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seed image segmentation, descriptor extraction and classification", "seedlab"};
  app.require_subcommand(1);
  Options o;

  auto* segment = app.add_subcommand("segment", "Write per-seed crops, masks and contour overlays");
  segment->add_option("input", o.inputs, "Images or directories")->required();
  segment->add_option("--out", o.out, "Output directory")->required();
  segment->add_option("--pad", o.pad, "Crop margin in pixels")->check(CLI::NonNegativeNumber);
  add_filter_flags(*segment, o);
  add_common_flags(*segment, o);

  auto* extract = app.add_subcommand("extract", "Measure every seed of a scan tree into ARFF and CSV");
  extract->add_option("input", o.inputs, "Directory of class folders or labelled scans")
      ->required()->expected(1);
  extract->add_option("--out", o.out, "Output stem; .arff and .csv are appended")->required();
  extract->add_option("--features", o.features, "Comma list of morph, texture, color, all");
  add_filter_flags(*extract, o);
  add_common_flags(*extract, o);

  auto* train = app.add_subcommand("train", "Cross-validate and save the best-AUC fold model");
  train->add_option("input", o.inputs, "ARFF/CSV dataset or scan directory")->required()->expected(1);
  train->add_option("--out", o.out, "Model archive path")->required();
  train->add_option("--folds", o.folds, "Folds; 1 trains on all rows")->check(CLI::PositiveNumber);
  train->add_option("--features", o.features, "Restrict to these categories");
  add_model_flags(*train, o);
  add_filter_flags(*train, o);
  add_common_flags(*train, o);

  auto* evaluate = app.add_subcommand("evaluate", "Stratified k-fold report of one classifier");
  evaluate->add_option("input", o.inputs, "ARFF/CSV dataset or scan directory")->required()->expected(1);
  evaluate->add_option("--out", o.out, "Report stem; .txt and .csv are appended");
  evaluate->add_option("--folds", o.folds, "Folds")->check(CLI::Range(2, 1 << 30));
  evaluate->add_option("--features", o.features, "Restrict to these categories");
  add_model_flags(*evaluate, o);
  add_filter_flags(*evaluate, o);
  add_common_flags(*evaluate, o);

  auto* predict = app.add_subcommand("predict", "Label rows of a dataset or seeds of scans");
  predict->add_option("input", o.inputs, "ARFF/CSV dataset, image or directory")->required()->expected(1);
  predict->add_option("--model", o.model, "Model archive")->required();
  predict->add_option("--out", o.out, "CSV output (default stdout)");
  add_filter_flags(*predict, o);
  add_common_flags(*predict, o);

  auto* compare = app.add_subcommand("compare", "Every classifier on every category combination");
  compare->add_option("input", o.inputs, "ARFF/CSV dataset or scan directory")->required()->expected(1);
  compare->add_option("--out", o.out, "CSV copy of the grid");
  compare->add_option("--folds", o.folds, "Folds")->check(CLI::Range(2, 1 << 30));
  add_model_flags(*compare, o);
  add_filter_flags(*compare, o);
  add_common_flags(*compare, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (segment->parsed()) return cmd_segment(o, out, err);
    if (extract->parsed()) return cmd_extract(o, out, err);
    if (train->parsed()) return cmd_train(o, out, err);
    if (evaluate->parsed()) return cmd_evaluate(o, out, err);
    if (predict->parsed()) return cmd_predict(o, out, err);
    if (compare->parsed()) return cmd_compare(o, out, err);
    return kUsage;
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsage;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kDataError;
  } catch (const std::exception& e) {
    fmt::print(err, "internal error: {}\n", e.what());
    return kInternal;
  }
}

}  // namespace seedlab::cli
