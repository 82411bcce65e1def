#include "cache.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nilhom::cli {

namespace {

constexpr std::array<char, 8> kMagic{'N', 'I', 'L', 'H', 'O', 'M', 'C', '\0'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::optional<std::uint64_t> uint(int width) {
        if (bytes_.size() - pos_ < static_cast<std::size_t>(width)) return std::nullopt;
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= std::uint64_t(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += width;
        return v;
    }

    std::optional<std::string_view> section() {
        auto len = uint(8);
        if (!len || bytes_.size() - pos_ < *len) return std::nullopt;
        auto s = bytes_.substr(pos_, *len);
        pos_ += *len;
        return s;
    }

    std::optional<std::string_view> raw(std::size_t n) {
        if (bytes_.size() - pos_ < n) return std::nullopt;
        auto s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    std::size_t position() const { return pos_; }
    bool done() const { return pos_ == bytes_.size(); }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
    for (unsigned char c : bytes) {
        state ^= c;
        state *= 0x100000001b3ULL;
    }
    return state;
}

std::string encode_entry(std::string_view key, std::string_view payload) {
    std::string out(kMagic.begin(), kMagic.end());
    put_u32(out, kSchemaVersion);
    put_u32(out, 2);
    put_u64(out, key.size());
    out.append(key);
    put_u64(out, payload.size());
    out.append(payload);
    put_u64(out, fnv1a64(out));
    return out;
}

std::optional<std::string> decode_entry(std::string_view bytes, std::string_view key) {
    Reader in(bytes);
    auto magic = in.raw(kMagic.size());
    if (!magic || *magic != std::string_view(kMagic.data(), kMagic.size())) return std::nullopt;
    if (in.uint(4) != kSchemaVersion) return std::nullopt;
    if (in.uint(4) != 2u) return std::nullopt;
    auto stored_key = in.section();
    auto payload = in.section();
    if (!stored_key || !payload) return std::nullopt;
    std::size_t body = in.position();
    auto checksum = in.uint(8);
    if (!checksum || !in.done()) return std::nullopt;
    if (*checksum != fnv1a64(bytes.substr(0, body))) return std::nullopt;
    if (*stored_key != key) return std::nullopt;
    return std::string(*payload);
}

ResultCache::ResultCache(std::optional<std::filesystem::path> dir, std::ostream& diag)
    : dir_(std::move(dir)), diag_(diag) {}

std::filesystem::path ResultCache::entry_path(std::string_view key) const {
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.nhc", static_cast<unsigned long long>(fnv1a64(key)));
    return *dir_ / name;
}

std::optional<std::string> ResultCache::load(std::string_view key) const {
    if (!dir_) return std::nullopt;
    auto path = entry_path(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    auto payload = decode_entry(buf.str(), key);
    if (!payload) diag_ << "cache: discarding invalid entry " << path.string() << "\n";
    return payload;
}

void ResultCache::store(std::string_view key, std::string_view payload) const {
    if (!dir_) return;
    std::error_code ec;
    std::filesystem::create_directories(*dir_, ec);
    auto path = entry_path(key);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            diag_ << "cache: cannot write " << tmp.string() << "\n";
            return;
        }
        auto bytes = encode_entry(key, payload);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) diag_ << "cache: cannot move entry into place: " << ec.message() << "\n";
}

}  // namespace nilhom::cli
