#include "csp/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "csp/error.hpp"

namespace csp {

namespace {

constexpr char kMagic[8] = {'C', 'S', 'P', 'C', 'K', 'P', 'T', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}

  std::uint64_t u64() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::string bytes(std::size_t n) {
    require(n);
    std::string out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool done() const { return pos_ == data_.size(); }

 private:
  void require(std::size_t n) const {
    if (pos_ + n > data_.size()) {
      throw Error("truncated checkpoint file");
    }
  }

  std::string data_;
  std::size_t pos_ = 0;
};

} // namespace

void save_checkpoint(const ParameterStore& params, const std::string& path) {
  std::string out(kMagic, sizeof(kMagic));
  put_u64(out, 1); // format version
  put_u64(out, params.count());
  for (std::size_t p = 0; p < params.count(); ++p) {
    const Parameter& param = params[p];
    put_u64(out, param.name.size());
    out += param.name;
    put_u64(out, param.value.rows());
    put_u64(out, param.value.cols());
    for (std::size_t i = 0; i < param.value.size(); ++i) put_f64(out, param.value.data()[i]);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw Error("cannot open checkpoint file for writing: " + path);
  }
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
}

ParameterStore load_checkpoint(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw Error("cannot open checkpoint file: " + path);
  }
  std::string data((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  Reader reader(std::move(data));
  if (reader.bytes(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
    throw Error("bad checkpoint magic in " + path);
  }
  const std::uint64_t version = reader.u64();
  if (version != 1) {
    throw Error("unsupported checkpoint version " + std::to_string(version));
  }
  ParameterStore store;
  const std::uint64_t count = reader.u64();
  for (std::uint64_t p = 0; p < count; ++p) {
    const std::uint64_t name_len = reader.u64();
    std::string name = reader.bytes(name_len);
    const std::uint64_t rows = reader.u64();
    const std::uint64_t cols = reader.u64();
    std::vector<double> payload(rows * cols);
    for (auto& v : payload) v = reader.f64();
    store.add(std::move(name), Matrix(rows, cols, std::move(payload)));
  }
  if (!reader.done()) {
    throw Error("trailing bytes in checkpoint " + path);
  }
  return store;
}

} // namespace csp
