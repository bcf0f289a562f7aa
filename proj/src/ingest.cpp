#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "seedlab/io.hpp"
#include "seedlab/parallel.hpp"

namespace seedlab::io {

namespace fs = std::filesystem;

namespace {

struct Job {
  fs::path file;
  std::string label;
};

struct FileOutcome {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> skipped;
  std::optional<std::string> error;
};

std::vector<Job> jobs_from_subdirectories(const fs::path& root) {
  std::vector<Job> jobs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const std::string label = entry.path().filename().string();
    for (const auto& f : fs::recursive_directory_iterator(entry.path())) {
      if (f.is_regular_file() && is_image_file(f.path())) jobs.push_back({f.path(), label});
    }
  }
  return jobs;
}

std::vector<Job> jobs_from_sidecar(const fs::path& root, const fs::path& sidecar) {
  std::ifstream in(sidecar, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + sidecar.string());
  std::vector<Job> jobs;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::CorruptFile, sidecar.string() + " line " + std::to_string(n) +
                                              ": expected 'file,label'");
    }
    std::string file = line.substr(0, comma);
    std::string label = line.substr(comma + 1);
    if (n == 1 && file == "file" && label == "label") continue;
    jobs.push_back({root / file, label});
  }
  return jobs;
}

FileOutcome process(const Job& job, const IngestOptions& options) {
  FileOutcome out;
  try {
    const auto img = load_image(job.file);
    const auto analysis = analyse_image(img, options.filter.resolve(img.width(), img.height()), options.extract);
    for (const auto& seed : analysis.seeds) out.rows.push_back(seed.features.select(options.categories));
    for (const auto& s : analysis.skipped) out.skipped.push_back(job.file.string() + ": " + s);
  } catch (const std::exception& e) {
    out.rows.clear();
    out.error = e.what();
  }
  return out;
}

}  // namespace

IngestResult ingest_directory(const fs::path& root, const IngestOptions& options) {
  if (!fs::is_directory(root)) throw Error(ErrorKind::Io, root.string() + " is not a directory");
  const fs::path sidecar = root / "labels.csv";
  auto jobs = fs::exists(sidecar) ? jobs_from_sidecar(root, sidecar) : jobs_from_subdirectories(root);
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return a.file.generic_string() < b.file.generic_string();
  });

  std::set<std::string> labels;
  for (const auto& j : jobs) labels.insert(j.label);

  IngestResult result;
  result.dataset.feature_names = feature_names(options.categories);
  result.dataset.class_names.assign(labels.begin(), labels.end());
  result.dataset.X = Matrix(0, result.dataset.feature_names.size());

  std::vector<FileOutcome> outcomes(jobs.size());
  parallel_for(jobs.size(), options.jobs, [&](std::size_t i) { outcomes[i] = process(jobs[i], options); });

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto& o = outcomes[i];
    if (o.error) {
      result.errors.push_back({jobs[i].file, *o.error});
      continue;
    }
    ++result.files_read;
    const auto& names = result.dataset.class_names;
    const int label = static_cast<int>(std::find(names.begin(), names.end(), jobs[i].label) - names.begin());
    for (const auto& row : o.rows) {
      result.dataset.X.push_row(row);
      result.dataset.y.push_back(label);
    }
    for (auto& s : o.skipped) result.skipped.push_back(std::move(s));
  }
  return result;
}

}  // namespace seedlab::io
