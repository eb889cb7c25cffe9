#include "phrasekit/store.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "phrasekit/errors.hpp"

namespace phrasekit::backend {

namespace {

template <typename T>
void put_le(std::ostream& out, T v) {
    char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
    unsigned char buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw TruncatedFile();
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(T(buf[i]) << (8 * i));
    return v;
}

}  // namespace

bool bit_equal(const EmbeddingStore& a, const EmbeddingStore& b) {
    if (a.dim != b.dim || a.records.size() != b.records.size()) return false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const auto& ra = a.records[i];
        const auto& rb = b.records[i];
        if (ra.text != rb.text || ra.vector.size() != rb.vector.size()) return false;
        if (std::memcmp(ra.vector.data(), rb.vector.data(), ra.vector.size() * sizeof(float)) != 0)
            return false;
    }
    return true;
}

void write_store(std::ostream& out, const EmbeddingStore& store) {
    std::unordered_set<std::string_view> seen;
    for (const auto& r : store.records) {
        if (!seen.insert(r.text).second) throw DuplicateText(r.text);
        if (r.vector.size() != store.dim) throw DimensionMismatch(store.dim, r.vector.size());
        if (r.text.size() > UINT32_MAX) throw InvalidArgument("text too long for store");
    }
    out.write(kStoreMagic, 4);
    put_le<std::uint32_t>(out, kStoreVersion);
    put_le<std::uint32_t>(out, store.dim);
    put_le<std::uint64_t>(out, store.records.size());
    for (const auto& r : store.records) {
        put_le<std::uint32_t>(out, static_cast<std::uint32_t>(r.text.size()));
        out.write(r.text.data(), static_cast<std::streamsize>(r.text.size()));
        for (float f : r.vector) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
    }
    if (!out) throw Error("failed writing embedding store");
}

void write_store(const std::string& path, const EmbeddingStore& store) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileNotFound(path);
    write_store(out, store);
}

EmbeddingStore read_store(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4)) throw TruncatedFile();
    if (std::memcmp(magic, kStoreMagic, 4) != 0) throw BadMagic();
    const auto version = get_le<std::uint32_t>(in);
    if (version != kStoreVersion) throw UnsupportedVersion(version);

    EmbeddingStore store;
    store.dim = get_le<std::uint32_t>(in);
    const auto count = get_le<std::uint64_t>(in);
    std::unordered_set<std::string> seen;
    for (std::uint64_t i = 0; i < count; ++i) {
        StoreRecord r;
        const auto len = get_le<std::uint32_t>(in);
        r.text.resize(len);
        if (len && !in.read(r.text.data(), len)) throw TruncatedFile();
        r.vector.resize(store.dim);
        for (auto& f : r.vector) f = std::bit_cast<float>(get_le<std::uint32_t>(in));
        if (!seen.insert(r.text).second) throw DuplicateText(r.text);
        store.records.push_back(std::move(r));
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw StoreFormatError("trailing bytes after the last store record");
    return store;
}

EmbeddingStore read_store(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound(path);
    return read_store(in);
}

void export_store_jsonl(std::ostream& out, const EmbeddingStore& store) {
    for (const auto& r : store.records) {
        nlohmann::json j;
        j["text"] = r.text;
        j["vector"] = r.vector;
        out << j.dump() << '\n';
    }
}

}  // namespace phrasekit::backend
