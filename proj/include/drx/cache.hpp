#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include <unistd.h>

namespace drx {

namespace detail {

// Content digest for cache filenames and tamper detection. Not
// cryptographic; correctness never depends on it because the full request
// text is stored and compared on every hit.
inline std::string content_digest(const std::string& data) {
    auto fnv = [&](std::uint64_t seed) {
        std::uint64_t h = seed;
        for (unsigned char c : data) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    };
    std::ostringstream os;
    os << std::hex << fnv(0xcbf29ce484222325ULL) << std::setfill('0') << std::setw(16)
       << fnv(0x9e3779b97f4a7c15ULL);
    return os.str();
}

}  // namespace detail

// Content-addressed result cache: one file per request digest, written
// atomically (temp file + rename). A hit must be byte-identical to a
// recomputation, so the stored request is compared verbatim and the stored
// value is digest-checked; anything off is treated as a miss with a
// warning.
class DiskCache {
  public:
    DiskCache() = default;
    DiskCache(std::filesystem::path dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {}

    static DiskCache resolve(const std::string& flag_dir, bool disabled) {
        if (disabled) return DiskCache({}, false);
        if (!flag_dir.empty()) return DiskCache(flag_dir, true);
        if (const char* env = std::getenv("DRX_CACHE_DIR"); env && *env)
            return DiskCache(env, true);
        return DiskCache({}, false);
    }

    bool enabled() const { return enabled_; }

    std::optional<std::string> get(const std::string& request,
                                   const std::function<void(const std::string&)>& warn) const {
        if (!enabled_) return std::nullopt;
        auto path = entry_path(request);
        std::ifstream in(path);
        if (!in) return std::nullopt;
        std::string header, stored_digest, stored_request, value, line;
        if (!std::getline(in, stored_digest) || !std::getline(in, stored_request))
            return corrupt(path, warn);
        std::ostringstream rest;
        bool first = true;
        while (std::getline(in, line)) {
            if (!first) rest << '\n';
            rest << line;
            first = false;
        }
        value = rest.str();
        if (decode(stored_request) != request || stored_digest != detail::content_digest(value))
            return corrupt(path, warn);
        return value;
    }

    void put(const std::string& request, const std::string& value) const {
        if (!enabled_) return;
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        auto path = entry_path(request);
        auto tmp = path;
        tmp += ".tmp" + std::to_string(static_cast<unsigned>(::getpid()));
        {
            std::ofstream out(tmp, std::ios::trunc);
            out << detail::content_digest(value) << '\n' << encode(request) << '\n' << value;
        }
        std::filesystem::rename(tmp, path, ec);
        if (ec) std::filesystem::remove(tmp, ec);
    }

  private:
    std::filesystem::path entry_path(const std::string& request) const {
        return dir_ / (detail::content_digest(request) + ".drxcache");
    }

    static std::string encode(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '\n') out += "\\n";
            else if (c == '\\') out += "\\\\";
            else out += c;
        }
        return out;
    }

    static std::string decode(const std::string& s) {
        std::string out;
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '\\' && i + 1 < s.size()) {
                out += s[i + 1] == 'n' ? '\n' : s[i + 1];
                ++i;
            } else {
                out += s[i];
            }
        }
        return out;
    }

    std::optional<std::string> corrupt(const std::filesystem::path& path,
                                       const std::function<void(const std::string&)>& warn) const {
        warn("ignoring corrupt cache entry " + path.string());
        return std::nullopt;
    }

    std::filesystem::path dir_;
    bool enabled_ = false;
};

}  // namespace drx
