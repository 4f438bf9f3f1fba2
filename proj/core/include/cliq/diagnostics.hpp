#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cliq {

/// Half-open byte range [begin, end) into the normalized source text.
struct Span {
    uint32_t begin = 0;
    uint32_t end = 0;

    bool contains(const Span& other) const {
        return begin <= other.begin && other.end <= end;
    }
    friend bool operator==(const Span&, const Span&) = default;
};

enum class Severity { Error, Warning };

/// One reportable finding. Codes are stable strings from the diagnostic
/// table in docs/language.md (frontend/runtime) and docs/qasm_subset.md
/// (translation/interpretation).
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    Span span;
};

/// Sink that collects diagnostics produced by a pipeline stage.
class Diagnostics {
  public:
    void error(std::string code, std::string message, Span span = {}) {
        items_.push_back({Severity::Error, std::move(code), std::move(message), span});
    }
    void warning(std::string code, std::string message, Span span = {}) {
        items_.push_back({Severity::Warning, std::move(code), std::move(message), span});
    }
    void add(Diagnostic d) { items_.push_back(std::move(d)); }

    bool has_errors() const {
        for (const auto& d : items_) {
            if (d.severity == Severity::Error) return true;
        }
        return false;
    }
    const std::vector<Diagnostic>& all() const { return items_; }
    bool empty() const { return items_.empty(); }
    void clear() { items_.clear(); }

    /// First error message, for terse test assertions.
    std::string first_error() const {
        for (const auto& d : items_) {
            if (d.severity == Severity::Error) return d.code + ": " + d.message;
        }
        return {};
    }
    std::string first_code() const {
        for (const auto& d : items_) {
            if (d.severity == Severity::Error) return d.code;
        }
        return {};
    }

  private:
    std::vector<Diagnostic> items_;
};

} // namespace cliq
