// include/chainlab/length_cache.hpp: persistent table of exact chain lengths.
//
// File format: CSV with header `class,n,length`, rows sorted by (class, n).
// Only exact lengths belong here; a row that disagrees with an existing entry
// is treated as corruption and raises CacheConflict.

#pragma once

#include "chainlab/natural.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chainlab {

class CacheConflict : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CacheFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CacheEntry {
    std::string class_name;
    Natural n;
    unsigned length = 0;
};

class LengthCache {
public:
    LengthCache() = default;
    explicit LengthCache(std::filesystem::path source) : source_(std::move(source)) {}

    LengthCache(const LengthCache&) = delete;
    LengthCache& operator=(const LengthCache&) = delete;
    LengthCache(LengthCache&&) = default;
    LengthCache& operator=(LengthCache&&) = default;

    /// Reads `path` if it exists; a missing file yields an empty cache bound to it.
    static LengthCache open(const std::filesystem::path& path) {
        LengthCache cache(path);
        std::error_code ec;
        if (!std::filesystem::exists(path, ec)) {
            if (ec) {
                throw CacheFormatError("cannot access cache file " + path.string() + ": " + ec.message());
            }
            return cache;
        }
        std::ifstream in(path);
        if (!in) {
            throw CacheFormatError("cannot read cache file " + path.string());
        }
        cache.read(in, path.string());
        return cache;
    }

    /// Parses CSV rows into the cache. Conflicts with existing entries throw.
    void read(std::istream& in, const std::string& origin = "<stream>") {
        std::string line;
        std::size_t line_no = 0;
        std::vector<CacheEntry> rows;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty() || (line_no == 1 && line == "class,n,length")) {
                continue;
            }
            rows.push_back(parse_row(line, origin, line_no));
        }
        merge(rows);
    }

    std::optional<unsigned> find(const std::string& class_name, const Natural& n) const {
        std::shared_lock guard(*lock_);
        auto it = entries_.find(Key{class_name, n});
        if (it == entries_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    void insert(const std::string& class_name, const Natural& n, unsigned length) {
        merge({CacheEntry{class_name, n, length}});
    }

    /// Adds a batch under one exclusive lock. All rows are checked before any is applied.
    void merge(const std::vector<CacheEntry>& batch) {
        std::unique_lock guard(*lock_);
        std::map<Key, unsigned> staged;
        for (const auto& row : batch) {
            Key key{row.class_name, row.n};
            auto check = [&](const std::map<Key, unsigned>& table) {
                auto it = table.find(key);
                if (it != table.end() && it->second != row.length) {
                    throw CacheConflict("conflicting cache entry for " + row.class_name + "," + row.n.str() +
                                        ": " + std::to_string(it->second) + " vs " +
                                        std::to_string(row.length));
                }
            };
            check(entries_);
            check(staged);
            staged.emplace(std::move(key), row.length);
        }
        entries_.merge(staged);
    }

    std::vector<CacheEntry> entries() const {
        std::shared_lock guard(*lock_);
        std::vector<CacheEntry> out;
        out.reserve(entries_.size());
        for (const auto& [key, length] : entries_) {
            out.push_back(CacheEntry{key.first, key.second, length});
        }
        return out;
    }

    std::size_t size() const {
        std::shared_lock guard(*lock_);
        return entries_.size();
    }

    const std::filesystem::path& source() const { return source_; }

    void write(std::ostream& out) const {
        out << "class,n,length\n";
        for (const auto& e : entries()) {
            out << e.class_name << ',' << e.n.str() << ',' << e.length << '\n';
        }
    }

    /// Writes to `path` (default: the source file) via a temporary and rename.
    void save(std::optional<std::filesystem::path> path = std::nullopt) const {
        const std::filesystem::path target = path.value_or(source_);
        if (target.empty()) {
            throw std::logic_error("LengthCache::save: no file path");
        }
        std::filesystem::path tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) {
                throw CacheFormatError("cannot write cache file " + tmp.string());
            }
            write(out);
            if (!out) {
                throw CacheFormatError("short write to " + tmp.string());
            }
        }
        std::filesystem::rename(tmp, target);
    }

private:
    using Key = std::pair<std::string, Natural>;

    static CacheEntry parse_row(const std::string& line, const std::string& origin, std::size_t line_no) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        const auto fail = [&](const std::string& why) {
            return CacheFormatError(origin + ":" + std::to_string(line_no) + ": " + why);
        };
        if (fields.size() != 3 || fields[0].empty()) {
            throw fail("expected class,n,length");
        }
        try {
            const Natural n = parse_natural(fields[1]);
            const Natural length = parse_natural(fields[2]);
            if (n == 0) {
                throw fail("n must be positive");
            }
            // every admissible class lies between these bounds
            if (length < ceil_log2(n) || length > floor_log2(n) + ones_count(n) - 1) {
                throw fail("length outside the bounds ceil(log2 n) .. floor(log2 n) + nu(n) - 1");
            }
            return CacheEntry{fields[0], n, static_cast<unsigned>(length)};
        } catch (const std::invalid_argument& e) {
            throw fail(e.what());
        }
    }

    std::filesystem::path source_;
    std::unique_ptr<std::shared_mutex> lock_ = std::make_unique<std::shared_mutex>();
    std::map<Key, unsigned> entries_;
};

}  // namespace chainlab
