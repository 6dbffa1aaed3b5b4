#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace inkbot {

std::string sha256_hex(std::string_view data);

/// Incremental SHA-256 over length-prefixed fields, so ("ab", "c") and
/// ("a", "bc") hash differently.
class Hasher {
public:
    Hasher();
    ~Hasher();
    Hasher(const Hasher&) = delete;
    Hasher& operator=(const Hasher&) = delete;

    Hasher& add(std::string_view field);
    std::string hex();

private:
    void* ctx_;
};

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file, flushes it to disk and renames it over
/// the target, so readers see either the old or the new content.
void write_atomic(const std::filesystem::path& path, std::string_view data);

}  // namespace inkbot
