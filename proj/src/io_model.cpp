#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "seedlab/io.hpp"

namespace seedlab::io {

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'E', 'E', 'D', 'L', 'A', 'B', 'M'};
constexpr std::size_t kDigestSize = 32;

std::array<unsigned char, kDigestSize> sha256(const unsigned char* data, std::size_t size) {
  std::array<unsigned char, kDigestSize> out{};
  unsigned int len = 0;
  if (EVP_Digest(data, size, out.data(), &len, EVP_sha256(), nullptr) != 1 || len != kDigestSize) {
    throw Error(ErrorKind::Io, "SHA-256 computation failed");
  }
  return out;
}

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void i32(int v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void f64s(std::span<const double> v) {
    u64(v.size());
    for (const double x : v) f64(x);
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  void strs(const std::vector<std::string>& v) {
    u32(static_cast<std::uint32_t>(v.size()));
    for (const auto& s : v) str(s);
  }
  void matrix(const Matrix& m) {
    u64(m.rows());
    u64(m.cols());
    for (const double x : m.data()) f64(x);
  }
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  std::vector<unsigned char>& bytes() { return buf_; }

 private:
  std::vector<unsigned char> buf_;
};

class Reader {
 public:
  Reader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

  std::uint8_t u8() { return *take(1); }
  std::uint32_t u32() {
    const auto* p = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const auto* p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  }
  int i32() { return static_cast<int>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t count(std::size_t element_size) {
    const std::uint64_t n = u64();
    if (element_size > 0 && n > remaining() / element_size) corrupt("element count exceeds file size");
    return static_cast<std::size_t>(n);
  }
  std::vector<double> f64s() {
    std::vector<double> v(count(8));
    for (auto& x : v) x = f64();
    return v;
  }
  std::string str() {
    const std::uint32_t n = u32();
    const auto* p = take(n);
    return std::string(reinterpret_cast<const char*>(p), n);
  }
  std::vector<std::string> strs() {
    const std::uint32_t n = u32();
    if (n > remaining() / 4) corrupt("string count exceeds file size");
    std::vector<std::string> v(n);
    for (auto& s : v) s = str();
    return v;
  }
  Matrix matrix() {
    const std::uint64_t rows = u64();
    const std::uint64_t cols = u64();
    if (cols != 0 && rows > remaining() / 8 / cols) corrupt("matrix exceeds file size");
    Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (auto& x : m.row(r)) x = f64();
    }
    return m;
  }
  std::size_t remaining() const { return size_ - pos_; }

  [[noreturn]] static void corrupt(const std::string& what) {
    throw Error(ErrorKind::CorruptFile, "model archive: " + what);
  }

 private:
  const unsigned char* take(std::size_t n) {
    if (n > remaining()) corrupt("unexpected end of data");
    const auto* p = data_ + pos_;
    pos_ += n;
    return p;
  }

  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

void write_payload(Writer& w, const ml::ModelPayload& payload) {
  if (const auto* m = std::get_if<ml::KnnModel>(&payload)) {
    w.i32(m->k);
    w.matrix(m->X);
    w.u64(m->y.size());
    for (const int v : m->y) w.i32(v);
  } else if (const auto* m = std::get_if<ml::NaiveBayesModel>(&payload)) {
    w.f64s(m->log_prior);
    w.matrix(m->mean);
    w.matrix(m->variance);
  } else if (const auto* m = std::get_if<ml::ForestModel>(&payload)) {
    w.u64(m->trees.size());
    for (const auto& tree : m->trees) {
      w.u64(tree.nodes.size());
      for (const auto& n : tree.nodes) {
        w.i32(n.feature);
        w.f64(n.threshold);
        w.i32(n.left);
        w.i32(n.right);
        w.i32(n.label);
      }
    }
  } else if (const auto* m = std::get_if<ml::SvmModel>(&payload)) {
    w.u64(m->machines.size());
    for (const auto& mc : m->machines) {
      w.i32(mc.positive);
      w.i32(mc.negative);
      w.f64s(mc.w);
      w.f64(mc.bias);
    }
  }
}

bool label_ok(int label, std::size_t classes) {
  return label >= 0 && static_cast<std::size_t>(label) < classes;
}

ml::ModelPayload read_payload(Reader& r, ml::ClassifierKind kind, std::size_t dims,
                              std::size_t classes) {
  switch (kind) {
    case ml::ClassifierKind::Knn: {
      ml::KnnModel m;
      m.k = r.i32();
      m.X = r.matrix();
      m.y.resize(r.count(4));
      for (auto& v : m.y) v = r.i32();
      if (m.X.cols() != dims || m.X.rows() != m.y.size() || m.y.empty() || m.k < 1) {
        Reader::corrupt("inconsistent kNN payload");
      }
      for (const int v : m.y) {
        if (!label_ok(v, classes)) Reader::corrupt("kNN label out of range");
      }
      return m;
    }
    case ml::ClassifierKind::NaiveBayes: {
      ml::NaiveBayesModel m;
      m.log_prior = r.f64s();
      m.mean = r.matrix();
      m.variance = r.matrix();
      if (m.log_prior.size() != classes || m.mean.rows() != classes || m.mean.cols() != dims ||
          m.variance.rows() != classes || m.variance.cols() != dims) {
        Reader::corrupt("inconsistent naive Bayes payload");
      }
      return m;
    }
    case ml::ClassifierKind::RandomForest: {
      ml::ForestModel m;
      m.trees.resize(r.count(8));
      if (m.trees.empty()) Reader::corrupt("forest has no trees");
      for (auto& tree : m.trees) {
        tree.nodes.resize(r.count(24));
        if (tree.nodes.empty()) Reader::corrupt("empty tree");
        const int size = static_cast<int>(tree.nodes.size());
        for (int i = 0; i < size; ++i) {
          auto& n = tree.nodes[static_cast<std::size_t>(i)];
          n.feature = r.i32();
          n.threshold = r.f64();
          n.left = r.i32();
          n.right = r.i32();
          n.label = r.i32();
          // Children always follow their parent, which also rules out cycles.
          const bool leaf = n.feature < 0;
          if (!leaf && (static_cast<std::size_t>(n.feature) >= dims || n.left <= i || n.right <= i ||
                        n.left >= size || n.right >= size)) {
            Reader::corrupt("tree node out of range");
          }
          if (leaf && !label_ok(n.label, classes)) Reader::corrupt("tree label out of range");
        }
      }
      return m;
    }
    case ml::ClassifierKind::Svm: {
      ml::SvmModel m;
      m.machines.resize(r.count(16));
      if (m.machines.empty()) Reader::corrupt("SVM has no machines");
      for (auto& mc : m.machines) {
        mc.positive = r.i32();
        mc.negative = r.i32();
        mc.w = r.f64s();
        mc.bias = r.f64();
        if (!label_ok(mc.positive, classes) || !label_ok(mc.negative, classes) ||
            mc.w.size() != dims) {
          Reader::corrupt("inconsistent SVM machine");
        }
      }
      return m;
    }
  }
  Reader::corrupt("unknown classifier kind");
}

}  // namespace

void save_model(const ml::TrainedModel& model, std::ostream& out) {
  Writer w;
  w.raw(kMagic.data(), kMagic.size());
  w.u32(kModelFormatVersion);
  w.u8(static_cast<std::uint8_t>(model.kind()));
  const auto& hp = model.hyperparameters();
  w.i32(hp.knn_k);
  w.i32(hp.rf_trees);
  w.i32(hp.rf_max_features);
  w.f64(hp.svm_c);
  w.i32(hp.svm_max_epochs);
  w.f64(hp.svm_tolerance);
  w.f64(hp.nb_variance_floor);
  w.strs(model.class_names());
  w.strs(model.feature_names());
  w.f64s(model.standardizer().mean);
  w.f64s(model.standardizer().scale);
  write_payload(w, model.payload());
  const auto digest = sha256(w.bytes().data(), w.bytes().size());
  w.raw(digest.data(), digest.size());
  out.write(reinterpret_cast<const char*>(w.bytes().data()),
            static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw Error(ErrorKind::Io, "failed to write model archive");
}

void save_model(const ml::TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  save_model(model, out);
}

ml::TrainedModel load_model(std::istream& in) {
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};
  if (bytes.size() < kMagic.size() + 4 + kDigestSize ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorKind::CorruptFile, "not a seedlab model archive");
  }
  Reader header(bytes.data() + kMagic.size(), 4);
  const std::uint32_t version = header.u32();
  if (version != kModelFormatVersion) {
    throw Error(ErrorKind::VersionUnsupported,
                "model format version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kModelFormatVersion) + ")");
  }
  const std::size_t body = bytes.size() - kDigestSize;
  const auto digest = sha256(bytes.data(), body);
  if (std::memcmp(digest.data(), bytes.data() + body, kDigestSize) != 0) {
    throw Error(ErrorKind::DigestMismatch, "model archive digest does not match its contents");
  }

  Reader r(bytes.data() + kMagic.size() + 4, body - kMagic.size() - 4);
  const std::uint8_t kind_byte = r.u8();
  if (kind_byte > static_cast<std::uint8_t>(ml::ClassifierKind::Svm)) {
    Reader::corrupt("unknown classifier kind");
  }
  const auto kind = static_cast<ml::ClassifierKind>(kind_byte);
  ml::Hyperparameters hp;
  hp.knn_k = r.i32();
  hp.rf_trees = r.i32();
  hp.rf_max_features = r.i32();
  hp.svm_c = r.f64();
  hp.svm_max_epochs = r.i32();
  hp.svm_tolerance = r.f64();
  hp.nb_variance_floor = r.f64();
  auto class_names = r.strs();
  auto feature_names = r.strs();
  ml::Standardizer st;
  st.mean = r.f64s();
  st.scale = r.f64s();
  auto payload = read_payload(r, kind, feature_names.size(), class_names.size());
  if (r.remaining() != 0) Reader::corrupt("trailing bytes after payload");
  try {
    return ml::TrainedModel(kind, hp, std::move(st), std::move(payload), std::move(class_names),
                            std::move(feature_names));
  } catch (const Error& e) {
    Reader::corrupt(e.what());
  }
}

ml::TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return load_model(in);
}

void check_feature_schema(const ml::TrainedModel& model, const LabeledDataset& ds) {
  if (model.feature_names() == ds.feature_names) return;
  std::string detail = "model expects " + std::to_string(model.dims()) + " features, dataset has " +
                       std::to_string(ds.dims());
  if (model.dims() == ds.dims()) {
    for (std::size_t i = 0; i < ds.dims(); ++i) {
      if (model.feature_names()[i] != ds.feature_names[i]) {
        detail = "feature " + std::to_string(i) + " is '" + ds.feature_names[i] + "', model expects '" +
                 model.feature_names()[i] + "'";
        break;
      }
    }
  }
  throw Error(ErrorKind::FeatureSchemaMismatch, detail);
}

}  // namespace seedlab::io
