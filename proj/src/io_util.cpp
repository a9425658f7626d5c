#include "nanocool/io_util.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "nanocool/errors.hpp"

namespace nanocool {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) return "nan";
    return std::string(buf.data(), ptr);
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw SimError(ErrorKind::kIoError, "cannot open '" + tmp.string() + "' for writing",
                           {{"path", path}});
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw SimError(ErrorKind::kIoError, "write to '" + tmp.string() + "' failed",
                           {{"path", path}});
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw SimError(ErrorKind::kIoError,
                       "rename to '" + target.string() + "' failed: " + ec.message(),
                       {{"path", path}});
    }
}

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf.data(), 16);
}

}  // namespace nanocool
