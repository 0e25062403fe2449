#pragma once

#include <string>
#include <string_view>

#include "unisup/evalkit.h"

namespace unisup {

// Binary layout, all little-endian:
//   u64 count, u64 dimension,
//   count x { u32 id_length, id bytes, dimension x f32 }
std::string EncodeEmbeddings(const EmbeddingTable& table);
EmbeddingTable DecodeEmbeddings(std::string_view bytes,
                                std::string_view origin);

void SaveEmbeddings(const EmbeddingTable& table, const std::string& path);
EmbeddingTable LoadEmbeddings(const std::string& path);

}  // namespace unisup
