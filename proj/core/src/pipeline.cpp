#include "cliq/pipeline.hpp"

#include "cliq/checker.hpp"
#include "cliq/lowering.hpp"
#include "cliq/parser.hpp"
#include "cliq/qasm_emitter.hpp"

#include <stdexcept>

namespace cliq {

const MappingRuleSet& default_mapping() {
    static const MappingRuleSet set = [] {
        Diagnostics diags;
        auto loaded = load_mapping(default_mapping_text(), diags);
        if (!loaded) {
            throw std::logic_error("embedded default mapping is invalid: " +
                                   diags.first_error());
        }
        return *loaded;
    }();
    return set;
}

std::optional<Translation> translate_source(const SourceModule& src,
                                            const TranslateOptions& options, Diagnostics& diags) {
    auto parsed = parse_module(src, diags);
    if (!parsed) return std::nullopt;
    auto tp = check_program(std::move(parsed->root), diags);
    if (!tp) return std::nullopt;

    Translation out;
    out.report = find_sites(*tp, parsed->directives);
    select_sites(out.report, options.mode, options.selected_ids);

    const MappingRuleSet& rules = options.rules ? *options.rules : default_mapping();

    const TypedProgram* lower_input = &*tp;
    std::optional<TypedProgram> rewritten;
    if (out.report.applied_count() > 0) {
        rewritten = apply_report(*tp, out.report, diags);
        if (!rewritten) return std::nullopt;
        lower_input = &*rewritten;
    }

    auto program = lower_program(*lower_input, rules, diags);
    if (!program) return std::nullopt;
    out.program = std::move(*program);
    out.qasm_text = emit_qasm(out.program);
    return out;
}

} // namespace cliq
