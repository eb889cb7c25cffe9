#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace phrasekit::backend {

// Binary embedding store, all integers little-endian:
//   "PHEM" | version u32 | dim u32 | count u64 |
//   count x ( text_len u32 | text bytes | dim x f32 )
inline constexpr char kStoreMagic[4] = {'P', 'H', 'E', 'M'};
inline constexpr std::uint32_t kStoreVersion = 1;

struct StoreRecord {
    std::string text;
    std::vector<float> vector;
};

struct EmbeddingStore {
    std::uint32_t dim = 0;
    std::vector<StoreRecord> records;
};

// Bitwise equality of all float payloads (NaN-safe, -0 != +0).
bool bit_equal(const EmbeddingStore& a, const EmbeddingStore& b);

void write_store(std::ostream& out, const EmbeddingStore& store);
void write_store(const std::string& path, const EmbeddingStore& store);
EmbeddingStore read_store(std::istream& in);
EmbeddingStore read_store(const std::string& path);

// One JSON object per record; for inspection only.
void export_store_jsonl(std::ostream& out, const EmbeddingStore& store);

}  // namespace phrasekit::backend
