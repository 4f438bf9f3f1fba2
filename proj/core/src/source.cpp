#include "cliq/source.hpp"

#include <fstream>
#include <sstream>

namespace cliq {

namespace {

// Returns the offset of the first invalid byte, or npos if the text is
// valid UTF-8. Rejects overlong encodings, surrogates, and values > U+10FFFF.
size_t find_utf8_error(std::string_view s) {
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        size_t len;
        uint32_t cp;
        if (c < 0x80) {
            i += 1;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + len > s.size()) return i;
        for (size_t k = 1; k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (len == 2 && cp < 0x80) return i;
        if (len == 3 && cp < 0x800) return i;
        if (len == 4 && cp < 0x10000) return i;
        if (cp > 0x10FFFF) return i;
        if (cp >= 0xD800 && cp <= 0xDFFF) return i;
        i += len;
    }
    return std::string_view::npos;
}

} // namespace

std::optional<SourceModule> SourceModule::from_text(std::string path, std::string_view raw,
                                                    Diagnostics& diags) {
    size_t bad = find_utf8_error(raw);
    if (bad != std::string_view::npos) {
        diags.error("E004", "source is not valid UTF-8 (invalid byte at offset " +
                                std::to_string(bad) + ")",
                    {static_cast<uint32_t>(bad), static_cast<uint32_t>(bad + 1)});
        return std::nullopt;
    }

    SourceModule mod;
    mod.path = std::move(path);
    mod.text.reserve(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == '\r' && i + 1 < raw.size() && raw[i + 1] == '\n') continue;
        if (raw[i] == '\r') {
            mod.text.push_back('\n'); // lone CR treated as a line ending
            continue;
        }
        mod.text.push_back(raw[i]);
    }

    mod.line_starts.push_back(0);
    for (uint32_t i = 0; i < mod.text.size(); ++i) {
        if (mod.text[i] == '\n') mod.line_starts.push_back(i + 1);
    }
    return mod;
}

std::optional<SourceModule> SourceModule::from_file(const std::string& path, Diagnostics& diags) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        diags.error("E000", "cannot open file: " + path);
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(path, buf.str(), diags);
}

SourceModule::LineCol SourceModule::line_col(uint32_t offset) const {
    // Last line start <= offset.
    size_t lo = 0, hi = line_starts.size();
    while (lo + 1 < hi) {
        size_t mid = (lo + hi) / 2;
        if (line_starts[mid] <= offset)
            lo = mid;
        else
            hi = mid;
    }
    return {static_cast<uint32_t>(lo + 1), offset - line_starts[lo] + 1};
}

std::string format_diagnostic(const SourceModule& src, const Diagnostic& diag) {
    auto lc = src.line_col(diag.span.begin);
    std::string out = src.path + ":" + std::to_string(lc.line) + ":" + std::to_string(lc.col);
    out += ": " + diag.code + ": " + diag.message;
    return out;
}

std::string format_diagnostic(const std::string& path, const Diagnostic& diag) {
    return path + ": " + diag.code + ": " + diag.message;
}

} // namespace cliq
