#include "ncerec/dataio/model_io.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "ncerec/errors.h"

namespace ncerec::dataio {
namespace {

using models::ModelKind;
using models::TrainedModel;
using numkit::DenseMatrix;

constexpr std::array<ModelKind, 6> kKindTags{ModelKind::kNcePlrec, ModelKind::kNcePlrecWeighted,
                                             ModelKind::kPlrec,    ModelKind::kPureSvd,
                                             ModelKind::kNceSvd,   ModelKind::kPop};

std::uint32_t kind_tag(ModelKind kind) {
  for (std::size_t t = 0; t < kKindTags.size(); ++t)
    if (kKindTags[t] == kind) return static_cast<std::uint32_t>(t);
  throw std::logic_error("unknown model kind");
}

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename U>
  void uint(U v) {
    std::array<char, sizeof(U)> bytes;
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(bytes.data(), bytes.size());
  }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  void size(std::size_t v) { uint(static_cast<std::uint64_t>(v)); }
  void raw(const char* data, std::size_t n) { out_.write(data, static_cast<std::streamsize>(n)); }
  void matrix(const DenseMatrix& m) {
    size(m.rows());
    size(m.cols());
    for (double v : m.values()) f64(v);
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  void raw(char* data, std::size_t n) {
    in_.read(data, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw FormatError(source_ + ": truncated model file");
  }
  template <typename U>
  U uint() {
    std::array<unsigned char, sizeof(U)> bytes;
    raw(reinterpret_cast<char*>(bytes.data()), bytes.size());
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  std::size_t size(std::uint64_t limit) {
    const auto v = uint<std::uint64_t>();
    if (v > limit) throw FormatError(source_ + ": implausible length " + std::to_string(v));
    return static_cast<std::size_t>(v);
  }
  DenseMatrix matrix() {
    const std::size_t rows = size(kMaxDim);
    const std::size_t cols = size(kMaxDim);
    if (cols != 0 && rows > kMaxElements / cols) throw FormatError(source_ + ": matrix too large");
    std::vector<double> values;
    values.reserve(std::min<std::size_t>(rows * cols, std::size_t{1} << 20));
    for (std::size_t i = 0; i < rows * cols; ++i) values.push_back(f64());
    try {
      return DenseMatrix(rows, cols, std::move(values));
    } catch (const std::invalid_argument& e) {
      throw FormatError(source_ + ": " + e.what());
    }
  }
  const std::string& source() const { return source_; }

  static constexpr std::uint64_t kMaxDim = std::uint64_t{1} << 40;
  static constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 40;

 private:
  std::istream& in_;
  std::string source_;
};

}  // namespace

void write_model(std::ostream& out, const TrainedModel& model) {
  model.validate();
  Writer w(out);
  w.raw(kModelMagic, sizeof(kModelMagic));
  w.uint(kModelVersion);
  w.uint(kind_tag(model.kind));
  w.size(model.num_users);
  w.size(model.num_items);
  w.size(model.item_embedding ? model.item_embedding->cols() : 0);
  const auto& h = model.hyper;
  w.size(h.rank);
  w.f64(h.beta);
  w.f64(h.alpha);
  w.f64(h.lambda);
  w.size(h.power_iterations);
  w.uint(static_cast<std::uint64_t>(h.seed));
  const std::uint8_t flags = (model.item_embedding ? 1 : 0) | (model.weights ? 2 : 0) |
                             (model.user_factor ? 4 : 0);
  w.uint(flags);
  if (model.item_embedding) w.matrix(*model.item_embedding);
  if (model.weights) w.matrix(*model.weights);
  if (model.user_factor) w.matrix(*model.user_factor);
  w.size(model.popularity.size());
  for (double p : model.popularity) w.f64(p);
  w.size(model.item_ids.size());
  for (const auto& id : model.item_ids) {
    w.size(id.size());
    w.raw(id.data(), id.size());
  }
  if (!out) throw IoError("model write failed");
}

TrainedModel read_model(std::istream& in, const std::string& source) {
  Reader r(in, source);
  char magic[sizeof(kModelMagic)];
  try {
    r.raw(magic, sizeof(magic));
  } catch (const FormatError&) {
    throw IncompatibleModelError(source + ": not a model file (too short)");
  }
  if (std::memcmp(magic, kModelMagic, sizeof(magic)) != 0)
    throw IncompatibleModelError(source + ": not a model file (bad magic)");
  const auto version = r.uint<std::uint32_t>();
  if (version != kModelVersion)
    throw IncompatibleModelError(source + ": model format version " + std::to_string(version) +
                                 ", this build reads version " + std::to_string(kModelVersion));
  const auto tag = r.uint<std::uint32_t>();
  if (tag >= kKindTags.size())
    throw IncompatibleModelError(source + ": unknown model kind tag " + std::to_string(tag));

  TrainedModel model;
  model.kind = kKindTags[tag];
  model.num_users = r.size(Reader::kMaxDim);
  model.num_items = r.size(Reader::kMaxDim);
  const std::size_t rank = r.size(Reader::kMaxDim);
  model.hyper.rank = r.size(Reader::kMaxDim);
  model.hyper.beta = r.f64();
  model.hyper.alpha = r.f64();
  model.hyper.lambda = r.f64();
  model.hyper.power_iterations = r.size(Reader::kMaxDim);
  model.hyper.seed = r.uint<std::uint64_t>();
  const auto flags = r.uint<std::uint8_t>();
  if (flags & ~7u) throw FormatError(source + ": bad presence flags");
  if (flags & 1) model.item_embedding = r.matrix();
  if (flags & 2) model.weights = r.matrix();
  if (flags & 4) model.user_factor = r.matrix();
  const std::size_t popularity_size = r.size(Reader::kMaxDim);
  for (std::size_t j = 0; j < popularity_size; ++j) model.popularity.push_back(r.f64());
  const std::size_t id_count = r.size(Reader::kMaxDim);
  for (std::size_t j = 0; j < id_count; ++j) {
    std::string id(r.size(1u << 20), '\0');
    r.raw(id.data(), id.size());
    model.item_ids.push_back(std::move(id));
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw FormatError(source + ": trailing bytes after model");
  if (model.item_embedding && model.item_embedding->cols() != rank)
    throw FormatError(source + ": rank header disagrees with the embedding");
  try {
    model.validate();
  } catch (const std::logic_error& e) {
    throw FormatError(source + ": " + e.what());
  }
  return model;
}

void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_model(out, model);
  if (!out.flush()) throw IoError("write failed: " + path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_model(in, path);
}

}  // namespace ncerec::dataio
