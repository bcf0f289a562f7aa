#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "seedlab/dataset.hpp"
#include "seedlab/features.hpp"
#include "seedlab/ml.hpp"
#include "seedlab/raster.hpp"
#include "seedlab/segmentation.hpp"

namespace seedlab::io {

// --- images ---------------------------------------------------------------

/// Decodes PNG or JPEG by content signature. 16-bit samples are reduced to
/// 8 bits, gray inputs are replicated to RGB, alpha is dropped.
/// Throws UnsupportedFormat, CorruptFile or Io.
RgbRaster load_image(const std::filesystem::path& path);

void save_png(const RgbRaster& img, const std::filesystem::path& path);
void save_png(const GrayRaster& img, const std::filesystem::path& path);

bool is_image_file(const std::filesystem::path& path);

// --- ARFF / CSV ------------------------------------------------------------

/// Numeric attributes followed by one nominal `class` attribute. Numbers are
/// written with 17 significant digits so the text round-trips exactly.
void write_arff(const LabeledDataset& ds, std::ostream& out);
void write_arff(const LabeledDataset& ds, const std::filesystem::path& path);

/// Case-insensitive keywords, '%' comments, blank lines and CRLF are
/// accepted; nominal values may be quoted. The class attribute must be the
/// last one and nominal. Throws MalformedArff (with a line number) or
/// MissingClassAttribute.
LabeledDataset read_arff(std::istream& in);
LabeledDataset read_arff(const std::filesystem::path& path);

/// Header row of feature names plus "class"; fields quoted when needed.
void write_csv(const LabeledDataset& ds, std::ostream& out);
void write_csv(const LabeledDataset& ds, const std::filesystem::path& path);

/// Reads the format write_csv emits. Classes are ordered by first
/// appearance unless `class_names` is given.
LabeledDataset read_csv(std::istream& in, const std::vector<std::string>& class_names = {});
LabeledDataset read_csv(const std::filesystem::path& path,
                        const std::vector<std::string>& class_names = {});

/// Dispatches on extension: .arff or .csv.
LabeledDataset read_dataset(const std::filesystem::path& path);

/// RFC 4180 quoting of one field.
std::string csv_escape(const std::string& field);

// --- model archive ---------------------------------------------------------

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Writes the little-endian archive described in docs/model_format.md,
/// closed by a SHA-256 digest of everything before it.
void save_model(const ml::TrainedModel& model, std::ostream& out);
void save_model(const ml::TrainedModel& model, const std::filesystem::path& path);

/// Throws VersionUnsupported, DigestMismatch or CorruptFile.
ml::TrainedModel load_model(std::istream& in);
ml::TrainedModel load_model(const std::filesystem::path& path);

/// Throws FeatureSchemaMismatch unless the dataset's feature names equal the
/// model's, in order.
void check_feature_schema(const ml::TrainedModel& model, const LabeledDataset& ds);

// --- directory ingestion ---------------------------------------------------

struct IngestOptions {
  FeatureCategory categories = FeatureCategory::All;
  segmentation::RegionFilterOverrides filter;
  ExtractOptions extract;
  int jobs = 1;
};

struct IngestError {
  std::filesystem::path file;
  std::string message;
};

struct IngestResult {
  LabeledDataset dataset;
  std::vector<IngestError> errors;     // per-file failures; other files still count
  std::vector<std::string> skipped;    // per-region rejections inside readable files
  std::size_t files_read = 0;
};

/// Builds a dataset from `root`. Two layouts are accepted: class-named
/// subdirectories holding scans, or scans directly under `root` with a
/// `labels.csv` sidecar of `file,label` lines. Rows are ordered by
/// lexicographic path, then region label; classes are sorted by name.
IngestResult ingest_directory(const std::filesystem::path& root, const IngestOptions& options);

}  // namespace seedlab::io
