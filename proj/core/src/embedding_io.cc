#include "unisup/embedding_io.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <limits>

#include "unisup/error.h"
#include "unisup/kv_file.h"

namespace unisup {
namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

template <typename T>
void PutLe(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  auto bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(bits & 0xFF));
    bits >>= 8;
  }
}

class Reader {
 public:
  Reader(std::string_view bytes, std::string_view origin)
      : bytes_(bytes), origin_(origin) {}

  template <typename T>
  T GetLe() {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    Need(sizeof(T));
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bits |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return std::bit_cast<T>(bits);
  }

  std::string_view GetBytes(std::size_t n) {
    Need(n);
    const auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      ThrowValidation(std::string(origin_) + ": truncated embedding file");
    }
  }

  std::string_view bytes_;
  std::string_view origin_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string EncodeEmbeddings(const EmbeddingTable& table) {
  std::string out;
  PutLe<std::uint64_t>(out, table.size());
  PutLe<std::uint64_t>(out, table.dimension());
  for (std::size_t row = 0; row < table.size(); ++row) {
    const auto& id = table.id(row);
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out += id;
    for (float v : table.vector(row)) PutLe<float>(out, v);
  }
  return out;
}

EmbeddingTable DecodeEmbeddings(std::string_view bytes,
                                std::string_view origin) {
  Reader in(bytes, origin);
  const auto count = in.GetLe<std::uint64_t>();
  const auto dimension = in.GetLe<std::uint64_t>();
  if (dimension == 0 || dimension > (1u << 20)) {
    ThrowValidation(std::string(origin) + ": implausible dimension " +
                    std::to_string(dimension));
  }
  EmbeddingTable table(dimension);
  std::vector<float> values(dimension);
  for (std::uint64_t row = 0; row < count; ++row) {
    const auto id_length = in.GetLe<std::uint32_t>();
    std::string id(in.GetBytes(id_length));
    for (auto& v : values) v = in.GetLe<float>();
    table.Add(std::move(id), values);
  }
  if (!in.done()) ThrowValidation(std::string(origin) + ": trailing bytes");
  return table;
}

void SaveEmbeddings(const EmbeddingTable& table, const std::string& path) {
  WriteTextFile(path, EncodeEmbeddings(table));
}

EmbeddingTable LoadEmbeddings(const std::string& path) {
  return DecodeEmbeddings(ReadTextFile(path), path);
}

}  // namespace unisup
