#pragma once

// On-disk result cache. One file per entry; the byte layout is described in
// docs/cache-format.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace nilhom::cli {

inline constexpr std::uint32_t kSchemaVersion = 1;

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

std::string encode_entry(std::string_view key, std::string_view payload);
/// Payload of an encoded entry, or nullopt when the magic, schema version,
/// lengths, key or checksum do not match.
std::optional<std::string> decode_entry(std::string_view bytes, std::string_view key);

class ResultCache {
public:
    /// No directory disables the cache. Diagnostics go to `diag`.
    ResultCache(std::optional<std::filesystem::path> dir, std::ostream& diag);

    bool enabled() const { return dir_.has_value(); }
    std::filesystem::path entry_path(std::string_view key) const;

    std::optional<std::string> load(std::string_view key) const;
    void store(std::string_view key, std::string_view payload) const;

private:
    std::optional<std::filesystem::path> dir_;
    std::ostream& diag_;
};

}  // namespace nilhom::cli
