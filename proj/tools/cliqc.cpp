// cliqc - translate .cliq programs to OpenQASM 3.0, run the emitted
// subset on the built-in simulator, and differentially verify the
// translation.

#include "cliq/pipeline.hpp"
#include "cliq/qasm_interpreter.hpp"
#include "cliq/qasm_parser.hpp"
#include "cliq/qplp.hpp"
#include "cliq/verifier.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitInternal = 2;

void print_diagnostics(const cliq::SourceModule& src, const cliq::Diagnostics& diags) {
    for (const auto& d : diags.all()) {
        std::cerr << cliq::format_diagnostic(src, d) << "\n";
    }
}

void print_diagnostics(const std::string& path, const cliq::Diagnostics& diags) {
    for (const auto& d : diags.all()) {
        std::cerr << cliq::format_diagnostic(path, d) << "\n";
    }
}

std::optional<cliq::MappingRuleSet> load_mapping_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << path << ": E000: cannot open mapping file\n";
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    cliq::Diagnostics diags;
    auto rules = cliq::load_mapping(buf.str(), diags);
    if (!rules) {
        print_diagnostics(path, diags);
        return std::nullopt;
    }
    return rules;
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << path << ": E000: cannot open for writing\n";
        return false;
    }
    out << text;
    return true;
}

int cmd_translate(const std::string& input, const std::string& output, bool optimize,
                  const std::string& optimize_only, const std::string& mapping_path,
                  const std::string& report_out) {
    cliq::Diagnostics diags;
    auto src = cliq::SourceModule::from_file(input, diags);
    if (!src) {
        print_diagnostics(input, diags);
        return kExitDiagnostics;
    }

    std::optional<cliq::MappingRuleSet> custom;
    if (!mapping_path.empty()) {
        custom = load_mapping_file(mapping_path);
        if (!custom) return kExitDiagnostics;
    }

    cliq::TranslateOptions options;
    if (!optimize_only.empty()) {
        options.mode = cliq::OptimizeMode::ApplySelected;
        options.selected_ids = {optimize_only};
    } else if (optimize) {
        options.mode = cliq::OptimizeMode::ApplyAll;
    }
    if (custom) options.rules = &*custom;

    auto translation = cliq::translate_source(*src, options, diags);
    if (!translation) {
        print_diagnostics(*src, diags);
        return kExitDiagnostics;
    }

    if (!write_file(output, translation->qasm_text)) return kExitDiagnostics;

    std::string report = cliq::report_to_json(translation->report, &*src);
    if (!report_out.empty()) {
        if (!write_file(report_out, report)) return kExitDiagnostics;
    } else {
        std::cout << report;
    }
    return kExitOk;
}

void print_execution(const cliq::ExecutionResult& result) {
    using Mode = cliq::ExecutionResult::Mode;
    if (result.mode == Mode::Sampled) {
        std::cout << "shots " << result.shots << " seed " << result.seed << "\n";
        for (const auto& [outcomes, count] : result.sample_counts) {
            std::cout << "outcomes [";
            for (size_t i = 0; i < outcomes.size(); ++i) {
                if (i) std::cout << ", ";
                std::cout << outcomes[i];
            }
            std::cout << "] count " << count << "\n";
        }
        return;
    }

    for (size_t e = 0; e < result.trace.size(); ++e) {
        const auto& ev = result.trace[e];
        std::cout << "measurement " << e << " (" << ev.register_name << "):";
        for (size_t o = 0; o < ev.distribution.size(); ++o) {
            if (ev.distribution[o] <= 0.0) continue;
            std::cout << " " << o << ":" << cliq::format_double(ev.distribution[o]);
        }
        std::cout << "\n";
    }
    for (const auto& branch : result.branches) {
        if (result.branches.size() > 1 || !branch.outcomes.empty()) {
            std::cout << "branch p=" << cliq::format_double(branch.probability) << " outcomes [";
            for (size_t i = 0; i < branch.outcomes.size(); ++i) {
                if (i) std::cout << ", ";
                std::cout << branch.outcomes[i];
            }
            std::cout << "]\n";
        }
        for (size_t k = 0; k < branch.outputs.size(); ++k) {
            std::cout << "  out[" << k << "] = " << cliq::value_to_string(branch.outputs[k])
                      << "\n";
        }
    }
}

int cmd_run(const std::string& input, bool exact, uint64_t shots, std::optional<uint64_t> seed) {
    std::ifstream in(input, std::ios::binary);
    if (!in) {
        std::cerr << input << ": E000: cannot open file\n";
        return kExitDiagnostics;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    cliq::Diagnostics diags;
    auto program = cliq::parse_qasm(buf.str(), diags);
    if (!program) {
        print_diagnostics(input, diags);
        return kExitDiagnostics;
    }

    cliq::QasmExecutionOptions options;
    if (shots > 0 && !exact) {
        if (!seed) {
            std::cerr << input << ": E000: --shots requires --seed\n";
            return kExitDiagnostics;
        }
        options.mode = cliq::ExecutionResult::Mode::Sampled;
        options.shots = shots;
        options.seed = *seed;
    }

    auto result = cliq::interpret_qasm(*program, options, diags);
    if (!result) {
        print_diagnostics(input, diags);
        return kExitDiagnostics;
    }
    print_execution(*result);
    return kExitOk;
}

int cmd_verify(const std::string& input, bool optimize, const std::string& mapping_path) {
    cliq::Diagnostics diags;
    auto src = cliq::SourceModule::from_file(input, diags);
    if (!src) {
        print_diagnostics(input, diags);
        return kExitDiagnostics;
    }

    std::optional<cliq::MappingRuleSet> custom;
    if (!mapping_path.empty()) {
        custom = load_mapping_file(mapping_path);
        if (!custom) return kExitDiagnostics;
    }
    const cliq::MappingRuleSet& rules = custom ? *custom : cliq::default_mapping();

    cliq::Verdict verdict = cliq::differential_check(*src, optimize, rules, diags);
    if (!diags.empty() && !verdict.pass) print_diagnostics(*src, diags);
    std::cout << verdict.to_json();
    std::cout << (verdict.pass ? "PASS" : "FAIL") << "\n";
    return verdict.pass ? kExitOk : kExitDiagnostics;
}

int cmd_list_qplp() {
    for (const auto& entry : cliq::qplp_catalog()) {
        std::cout << entry.id << "\t" << (entry.executable ? "executable" : "metadata") << "\t"
                  << entry.description << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cliqc: a CliqLang to OpenQASM 3.0 transpiler with a pattern-based "
                 "quantum optimizer and a differential verification harness"};
    app.require_subcommand(1);

    // translate
    std::string tr_input, tr_output, tr_mapping, tr_report_out, tr_optimize_only;
    bool tr_optimize = false;
    auto* translate = app.add_subcommand("translate", "Translate a .cliq file to OpenQASM 3.0");
    translate->add_option("input", tr_input, "input .cliq file")->required();
    translate->add_option("-o,--output", tr_output, "output .qasm path")->required();
    translate->add_flag("--optimize", tr_optimize, "apply every executable QPLP site");
    translate->add_option("--optimize-only", tr_optimize_only,
                          "apply only sites matching this catalog entry id");
    translate->add_option("--mapping", tr_mapping, "mapping file overriding the built-in rules");
    translate->add_option("--report-out", tr_report_out,
                          "write the optimization report here instead of stdout");

    // run
    std::string run_input;
    bool run_exact = false;
    uint64_t run_shots = 0;
    std::optional<uint64_t> run_seed;
    auto* run = app.add_subcommand("run", "Execute a .qasm file on the exact simulator");
    run->add_option("input", run_input, "input .qasm file")->required();
    run->add_flag("--exact", run_exact, "enumerate all measurement outcomes (default)");
    run->add_option("--shots", run_shots, "sample this many shots instead");
    run->add_option("--seed", [&run_seed](const std::vector<std::string>& vals) {
        run_seed = std::stoull(vals.at(0));
        return true;
    }, "PRNG seed for --shots");

    // verify
    std::string vf_input, vf_mapping;
    bool vf_optimize = false;
    auto* verify = app.add_subcommand("verify", "Differentially check source vs translation");
    verify->add_option("input", vf_input, "input .cliq file")->required();
    verify->add_flag("--optimize", vf_optimize, "verify the block-translation path");
    verify->add_option("--mapping", vf_mapping, "mapping file overriding the built-in rules");

    // list-qplp
    auto* list = app.add_subcommand("list-qplp", "List the pattern catalog");

    CLI11_PARSE(app, argc, argv);

    try {
        if (translate->parsed()) {
            return cmd_translate(tr_input, tr_output, tr_optimize, tr_optimize_only, tr_mapping,
                                 tr_report_out);
        }
        if (run->parsed()) return cmd_run(run_input, run_exact, run_shots, run_seed);
        if (verify->parsed()) return cmd_verify(vf_input, vf_optimize, vf_mapping);
        if (list->parsed()) return cmd_list_qplp();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
