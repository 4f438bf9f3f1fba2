#pragma once

#include "cliq/diagnostics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cliq {

/// A loaded source file. Text is validated UTF-8 with line endings
/// normalized to LF before any offsets are computed, so spans and the
/// line table always refer to the normalized text.
struct SourceModule {
    std::string path;
    std::string text;
    std::vector<uint32_t> line_starts; // strictly increasing, starts at 0

    struct LineCol {
        uint32_t line = 1; // 1-based
        uint32_t col = 1;  // 1-based, in bytes
    };

    /// Validates UTF-8, normalizes CRLF to LF, and builds the line table.
    /// Reports E004 on invalid UTF-8.
    static std::optional<SourceModule> from_text(std::string path, std::string_view raw,
                                                 Diagnostics& diags);
    static std::optional<SourceModule> from_file(const std::string& path, Diagnostics& diags);

    LineCol line_col(uint32_t offset) const;
    std::string_view slice(Span span) const {
        return std::string_view(text).substr(span.begin, span.end - span.begin);
    }
};

/// Renders "path:line:col: CODE: message" for CLI stderr output.
std::string format_diagnostic(const SourceModule& src, const Diagnostic& diag);

/// Variant for diagnostics without a source module (e.g. mapping files).
std::string format_diagnostic(const std::string& path, const Diagnostic& diag);

} // namespace cliq
