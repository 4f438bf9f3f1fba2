#include "cliq/mapping.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

namespace cliq {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string unescape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            if (s[i + 1] == 'n') {
                out.push_back('\n');
                ++i;
                continue;
            }
            if (s[i + 1] == '\\') {
                out.push_back('\\');
                ++i;
                continue;
            }
        }
        out.push_back(s[i]);
    }
    return out;
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '\n') {
            out += "\\n";
        } else if (c == '\\') {
            out += "\\\\";
        } else {
            out.push_back(c);
        }
    }
    return out;
}

bool valid_sig_type(const std::string& t) { return t == "int" || t == "float" || t == "bool"; }

/// Per-kind placeholder contract: how many positional operands the
/// lowering supplies and which named placeholders it binds. Templates
/// must use all of them, so no operand can be silently dropped.
struct KeySpec {
    int arity = 0;
    std::set<std::string> named;
};

const std::unordered_map<std::string, KeySpec>& key_specs() {
    static const std::unordered_map<std::string, KeySpec> specs = [] {
        std::unordered_map<std::string, KeySpec> m;
        m["lit.int"] = {1, {}};
        m["lit.float"] = {1, {}};
        m["lit.bool"] = {1, {}};
        m["expr.name"] = {1, {}};
        m["expr.index"] = {2, {}};
        m["unary.neg"] = {1, {}};
        m["unary.not"] = {1, {}};
        for (const char* op :
             {"binop.add", "binop.sub", "binop.mul", "binop.div", "binop.floordiv", "binop.mod"})
            m[op] = {2, {}};
        for (const char* op : {"compare.eq", "compare.ne", "compare.lt", "compare.le",
                               "compare.gt", "compare.ge"})
            m[op] = {2, {}};
        m["boolop.and"] = {2, {}};
        m["boolop.or"] = {2, {}};
        m["stmt.assign"] = {0, {"target", "value"}};
        m["stmt.assign.element"] = {0, {"target", "index", "value"}};
        m["stmt.expr"] = {1, {}};
        m["stmt.if"] = {1, {"body"}};
        m["stmt.if.else"] = {1, {"body", "orelse"}};
        m["stmt.while"] = {1, {"body"}};
        m["stmt.for"] = {2, {"name", "body"}};
        m["stmt.for.step"] = {3, {"name", "body"}};
        m["stmt.break"] = {0, {}};
        m["stmt.continue"] = {0, {}};
        m["stmt.return"] = {1, {}};
        m["decl.int"] = {0, {"name"}};
        m["decl.float"] = {0, {"name"}};
        m["decl.bool"] = {0, {"name"}};
        m["decl.array"] = {0, {"name", "size", "init"}};
        return m;
    }();
    return specs;
}

// Scans template text for placeholders: {digits} or {lowercase-word}.
// Braces that do not form a placeholder are literal text.
struct PlaceholderScan {
    std::set<int> positional;
    std::set<std::string> named;
};

PlaceholderScan scan_placeholders(const std::string& text) {
    PlaceholderScan out;
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') continue;
        size_t j = i + 1;
        while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) ||
                                   std::islower(static_cast<unsigned char>(text[j]))))
            ++j;
        if (j > i + 1 && j < text.size() && text[j] == '}') {
            std::string body = text.substr(i + 1, j - i - 1);
            if (std::isdigit(static_cast<unsigned char>(body[0]))) {
                out.positional.insert(std::stoi(body));
            } else {
                out.named.insert(body);
            }
            i = j;
        }
    }
    return out;
}

} // namespace

std::string MappingRule::key_string() const {
    std::string out = kind + " | ";
    if (wildcard_sig) {
        out += "-";
    } else {
        for (size_t i = 0; i < sig.size(); ++i) {
            if (i) out += ",";
            out += sig[i];
        }
    }
    return out;
}

const MappingRule* MappingRuleSet::lookup(const std::string& kind,
                                          const std::vector<std::string>& sig) const {
    const MappingRule* wildcard = nullptr;
    for (const auto& r : rules) {
        if (r.kind != kind) continue;
        if (r.wildcard_sig) {
            if (!wildcard) wildcard = &r;
            continue;
        }
        if (r.sig == sig) return &r;
    }
    return wildcard;
}

const MappingRule* MappingRuleSet::lookup(const std::string& kind,
                                          const std::vector<std::string>& sig,
                                          Diagnostics& diags) const {
    const MappingRule* r = lookup(kind, sig);
    if (!r) {
        std::string s;
        for (size_t i = 0; i < sig.size(); ++i) {
            if (i) s += ",";
            s += sig[i];
        }
        diags.error("E023", "no applicable mapping rule for (" + kind + ", [" +
                                (sig.empty() ? "-" : s) + "])");
    }
    return r;
}

std::string MappingRuleSet::serialize() const {
    std::ostringstream out;
    out << "version " << version << "\n";
    for (const auto& r : rules) {
        out << r.kind << " | ";
        if (r.wildcard_sig) {
            out << "-";
        } else {
            for (size_t i = 0; i < r.sig.size(); ++i) {
                if (i) out << ",";
                out << r.sig[i];
            }
        }
        out << " -> " << r.result_type << " | " << escape(r.template_text) << "\n";
    }
    return out.str();
}

std::optional<MappingRuleSet> load_mapping(const std::string& text, Diagnostics& diags) {
    MappingRuleSet set;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool version_seen = false;
    bool failed = false;
    std::set<std::string> keys;

    auto err = [&](const std::string& code, const std::string& msg) {
        diags.error(code, msg + " (line " + std::to_string(line_no) + ")");
        failed = true;
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!version_seen) {
            if (t.rfind("version", 0) != 0) {
                err("E020", "first non-comment line must be 'version 1'");
                return std::nullopt;
            }
            std::string v = trim(t.substr(7));
            if (v != "1") {
                err("E020", "unsupported mapping format version '" + v + "'");
                return std::nullopt;
            }
            set.version = 1;
            version_seen = true;
            continue;
        }

        // kind | sig -> result | template
        size_t p1 = t.find('|');
        size_t p2 = t.find('|', p1 == std::string::npos ? p1 : p1 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos) {
            err("E020", "malformed rule: expected 'kind | signature -> result | template'");
            continue;
        }
        MappingRule rule;
        rule.line = line_no;
        rule.kind = trim(t.substr(0, p1));
        std::string middle = trim(t.substr(p1 + 1, p2 - p1 - 1));
        rule.template_text = unescape(trim(t.substr(p2 + 1)));

        size_t arrow = middle.find("->");
        if (arrow == std::string::npos) {
            err("E020", "malformed signature: expected 'types -> result'");
            continue;
        }
        std::string sig_text = trim(middle.substr(0, arrow));
        rule.result_type = trim(middle.substr(arrow + 2));

        auto spec_it = key_specs().find(rule.kind);
        if (spec_it == key_specs().end()) {
            err("E020", "unknown rule kind '" + rule.kind + "'");
            continue;
        }
        const KeySpec& spec = spec_it->second;

        if (sig_text == "-") {
            rule.wildcard_sig = true;
        } else {
            std::istringstream sig_in(sig_text);
            std::string part;
            bool sig_ok = true;
            while (std::getline(sig_in, part, ',')) {
                std::string p = trim(part);
                if (!valid_sig_type(p)) {
                    err("E020", "invalid signature type '" + p + "'");
                    sig_ok = false;
                    break;
                }
                rule.sig.push_back(p);
            }
            if (!sig_ok) continue;
            if (static_cast<int>(rule.sig.size()) != spec.arity) {
                err("E020", "signature of '" + rule.kind + "' must list " +
                                std::to_string(spec.arity) + " operand type(s)");
                continue;
            }
        }
        if (rule.result_type != "-" && !valid_sig_type(rule.result_type)) {
            err("E020", "invalid result type '" + rule.result_type + "'");
            continue;
        }

        PlaceholderScan scan = scan_placeholders(rule.template_text);
        bool placeholders_ok = true;
        for (int i = 0; i < spec.arity; ++i) {
            if (!scan.positional.count(i)) {
                err("E020", "template for '" + rule.kind + "' must use placeholder {" +
                                std::to_string(i) + "}");
                placeholders_ok = false;
                break;
            }
        }
        if (!placeholders_ok) continue;
        if (!scan.positional.empty() && *scan.positional.rbegin() >= spec.arity) {
            err("E020", "template for '" + rule.kind + "' uses out-of-range placeholder {" +
                            std::to_string(*scan.positional.rbegin()) + "}");
            continue;
        }
        for (const auto& n : spec.named) {
            if (!scan.named.count(n)) {
                err("E020", "template for '" + rule.kind + "' must use placeholder {" + n + "}");
                placeholders_ok = false;
                break;
            }
        }
        if (!placeholders_ok) continue;
        for (const auto& n : scan.named) {
            if (!spec.named.count(n)) {
                err("E020",
                    "template for '" + rule.kind + "' uses unknown placeholder {" + n + "}");
                placeholders_ok = false;
                break;
            }
        }
        if (!placeholders_ok) continue;

        std::string key = rule.key_string();
        if (!keys.insert(key).second) {
            err("E021", "duplicate mapping key '" + key + "'");
            continue;
        }
        set.rules.push_back(std::move(rule));
    }

    if (!version_seen) {
        err("E020", "missing 'version 1' line");
        return std::nullopt;
    }
    if (failed) return std::nullopt;

    // Coverage: every (kind, signature) the lowering can consult must
    // resolve to some rule, exact or wildcard.
    std::vector<std::string> missing;
    for (const auto& [kind, sig] : required_mapping_coverage()) {
        if (!set.lookup(kind, sig)) {
            MappingRule probe;
            probe.kind = kind;
            probe.sig = sig;
            probe.wildcard_sig = sig.empty();
            missing.push_back(probe.key_string());
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (size_t i = 0; i < missing.size(); ++i) {
            if (i) list += "; ";
            list += missing[i];
        }
        diags.error("E022", "mapping does not cover required kind(s): " + list);
        return std::nullopt;
    }
    return set;
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& required_mapping_coverage() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> list = [] {
        std::vector<std::pair<std::string, std::vector<std::string>>> v;
        auto add = [&](const std::string& kind, std::vector<std::string> sig = {}) {
            v.emplace_back(kind, std::move(sig));
        };
        const std::vector<std::vector<std::string>> numeric2 = {
            {"int", "int"}, {"int", "float"}, {"float", "int"}, {"float", "float"}};
        for (const char* op : {"binop.add", "binop.sub", "binop.mul", "binop.div"}) {
            for (const auto& s : numeric2) add(op, s);
        }
        add("binop.floordiv", {"int", "int"});
        add("binop.mod", {"int", "int"});
        add("unary.neg", {"int"});
        add("unary.neg", {"float"});
        add("unary.not", {"bool"});
        for (const char* op : {"compare.eq", "compare.ne"}) {
            for (const auto& s : numeric2) add(op, s);
            add(op, {"bool", "bool"});
        }
        for (const char* op : {"compare.lt", "compare.le", "compare.gt", "compare.ge"}) {
            for (const auto& s : numeric2) add(op, s);
        }
        add("boolop.and", {"bool", "bool"});
        add("boolop.or", {"bool", "bool"});
        for (const char* k :
             {"lit.int", "lit.float", "lit.bool", "expr.name", "expr.index", "stmt.assign",
              "stmt.assign.element", "stmt.expr", "stmt.if", "stmt.if.else", "stmt.while",
              "stmt.for", "stmt.for.step", "stmt.break", "stmt.continue", "stmt.return",
              "decl.int", "decl.float", "decl.bool", "decl.array"})
            add(k);
        return v;
    }();
    return list;
}

std::optional<std::string> instantiate_template(const std::string& template_text,
                                                const std::vector<std::string>& positional,
                                                const std::map<std::string, std::string>& named,
                                                std::string* error) {
    std::string out;
    out.reserve(template_text.size() + 16);
    for (size_t i = 0; i < template_text.size(); ++i) {
        if (template_text[i] != '{') {
            out.push_back(template_text[i]);
            continue;
        }
        size_t j = i + 1;
        while (j < template_text.size() &&
               (std::isdigit(static_cast<unsigned char>(template_text[j])) ||
                std::islower(static_cast<unsigned char>(template_text[j]))))
            ++j;
        if (j > i + 1 && j < template_text.size() && template_text[j] == '}') {
            std::string body = template_text.substr(i + 1, j - i - 1);
            if (std::isdigit(static_cast<unsigned char>(body[0]))) {
                size_t idx = static_cast<size_t>(std::stoi(body));
                if (idx >= positional.size()) {
                    if (error) *error = "unbound placeholder {" + body + "}";
                    return std::nullopt;
                }
                out += positional[idx];
            } else {
                auto it = named.find(body);
                if (it == named.end()) {
                    if (error) *error = "unbound placeholder {" + body + "}";
                    return std::nullopt;
                }
                out += it->second;
            }
            i = j;
        } else {
            out.push_back(template_text[i]);
        }
    }
    return out;
}

const std::string& default_mapping_text() {
    static const std::string text = R"MAP(# Default lowering rules targeting OpenQASM 3.0.
# Format: kind | signature -> result | template
# Templates may use positional {0},{1},... operand renderings plus the
# named placeholders each kind provides. "\n" inside a template is a
# literal newline in the instantiated text.
version 1

# literals and atoms
lit.int | - -> int | {0}
lit.float | - -> float | {0}
lit.bool | - -> bool | {0}
expr.name | - -> - | {0}
expr.index | - -> int | {0}[{1}]

# unary operators
unary.neg | int -> int | (-{0})
unary.neg | float -> float | (-{0})
unary.not | bool -> bool | (!{0})

# arithmetic
binop.add | int,int -> int | ({0} + {1})
binop.add | int,float -> float | (float[64]({0}) + {1})
binop.add | float,int -> float | ({0} + float[64]({1}))
binop.add | float,float -> float | ({0} + {1})
binop.sub | int,int -> int | ({0} - {1})
binop.sub | int,float -> float | (float[64]({0}) - {1})
binop.sub | float,int -> float | ({0} - float[64]({1}))
binop.sub | float,float -> float | ({0} - {1})
binop.mul | int,int -> int | ({0} * {1})
binop.mul | int,float -> float | (float[64]({0}) * {1})
binop.mul | float,int -> float | ({0} * float[64]({1}))
binop.mul | float,float -> float | ({0} * {1})
binop.div | int,int -> float | (float[64]({0}) / float[64]({1}))
binop.div | int,float -> float | (float[64]({0}) / {1})
binop.div | float,int -> float | ({0} / float[64]({1}))
binop.div | float,float -> float | ({0} / {1})
binop.floordiv | int,int -> int | ({0} / {1})
binop.mod | int,int -> int | ({0} % {1})

# comparisons
compare.eq | int,int -> bool | ({0} == {1})
compare.eq | int,float -> bool | (float[64]({0}) == {1})
compare.eq | float,int -> bool | ({0} == float[64]({1}))
compare.eq | float,float -> bool | ({0} == {1})
compare.eq | bool,bool -> bool | ({0} == {1})
compare.ne | int,int -> bool | ({0} != {1})
compare.ne | int,float -> bool | (float[64]({0}) != {1})
compare.ne | float,int -> bool | ({0} != float[64]({1}))
compare.ne | float,float -> bool | ({0} != {1})
compare.ne | bool,bool -> bool | ({0} != {1})
compare.lt | int,int -> bool | ({0} < {1})
compare.lt | int,float -> bool | (float[64]({0}) < {1})
compare.lt | float,int -> bool | ({0} < float[64]({1}))
compare.lt | float,float -> bool | ({0} < {1})
compare.le | int,int -> bool | ({0} <= {1})
compare.le | int,float -> bool | (float[64]({0}) <= {1})
compare.le | float,int -> bool | ({0} <= float[64]({1}))
compare.le | float,float -> bool | ({0} <= {1})
compare.gt | int,int -> bool | ({0} > {1})
compare.gt | int,float -> bool | (float[64]({0}) > {1})
compare.gt | float,int -> bool | ({0} > float[64]({1}))
compare.gt | float,float -> bool | ({0} > {1})
compare.ge | int,int -> bool | ({0} >= {1})
compare.ge | int,float -> bool | (float[64]({0}) >= {1})
compare.ge | float,int -> bool | ({0} >= float[64]({1}))
compare.ge | float,float -> bool | ({0} >= {1})

# boolean connectives (short-circuit in the documented subset)
boolop.and | bool,bool -> bool | ({0} && {1})
boolop.or | bool,bool -> bool | ({0} || {1})

# statements
stmt.assign | - -> - | {target} = {value};
stmt.assign.element | - -> - | {target}[{index}] = {value};
stmt.expr | - -> - | {0};
stmt.if | - -> - | if ({0}) {\n{body}\n}
stmt.if.else | - -> - | if ({0}) {\n{body}\n} else {\n{orelse}\n}
stmt.while | - -> - | while ({0}) {\n{body}\n}
stmt.for | - -> - | for int[32] {name} in [{0}:{1}] {\n{body}\n}
stmt.for.step | - -> - | for int[32] {name} in [{0}:{1}:{2}] {\n{body}\n}
stmt.break | - -> - | break;
stmt.continue | - -> - | continue;
stmt.return | - -> - | return {0};

# declarations
decl.int | - -> - | int[32] {name};
decl.float | - -> - | float[64] {name};
decl.bool | - -> - | bool {name};
decl.array | - -> - | array[int[32], {size}] {name} = {init};
)MAP";
    return text;
}

} // namespace cliq
