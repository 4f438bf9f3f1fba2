#include "cliq/mapping.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace cliq;

namespace {

std::optional<MappingRuleSet> load(const std::string& text, Diagnostics& diags) {
    return load_mapping(text, diags);
}

} // namespace

TEST(Mapping, ParsesSingleRuleLine) {
    Diagnostics diags;
    auto rules = load(default_mapping_text(), diags);
    ASSERT_TRUE(rules) << diags.first_error();
    const MappingRule* r = rules->lookup("binop.add", {"int", "int"});
    ASSERT_NE(r, nullptr);
    EXPECT_EQ(r->result_type, "int");
    EXPECT_EQ(r->template_text, "({0} + {1})");
    EXPECT_FALSE(r->wildcard_sig);
}

TEST(Mapping, DuplicateKeyIsE021) {
    std::string text = default_mapping_text();
    text += "binop.add | int,int -> int | ({0} + {1})\n";
    Diagnostics diags;
    EXPECT_FALSE(load(text, diags));
    EXPECT_EQ(diags.first_code(), "E021");
}

TEST(Mapping, MissingCoverageIsE022) {
    // Drop the stmt.while rule from the default document.
    std::string text;
    std::istringstream in(default_mapping_text());
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("stmt.while", 0) == 0) continue;
        text += line + "\n";
    }
    Diagnostics diags;
    EXPECT_FALSE(load(text, diags));
    EXPECT_EQ(diags.first_code(), "E022");
    EXPECT_NE(diags.first_error().find("stmt.while"), std::string::npos);
}

TEST(Mapping, MalformedLineIsE020) {
    Diagnostics diags;
    EXPECT_FALSE(load("version 1\nbinop.add int,int int ({0} + {1})\n", diags));
    EXPECT_EQ(diags.first_code(), "E020");
}

TEST(Mapping, UnknownKindIsE020) {
    Diagnostics diags;
    EXPECT_FALSE(load("version 1\nbinop.xor | int,int -> int | ({0} ^ {1})\n", diags));
    EXPECT_EQ(diags.first_code(), "E020");
}

TEST(Mapping, MissingVersionLineIsE020) {
    Diagnostics diags;
    EXPECT_FALSE(load("binop.add | int,int -> int | ({0} + {1})\n", diags));
    EXPECT_EQ(diags.first_code(), "E020");
}

TEST(Mapping, WrongVersionIsE020) {
    Diagnostics diags;
    EXPECT_FALSE(load("version 2\n", diags));
    EXPECT_EQ(diags.first_code(), "E020");
}

TEST(Mapping, DroppedOperandPlaceholderIsE020) {
    Diagnostics diags;
    EXPECT_FALSE(load("version 1\nbinop.add | int,int -> int | ({0} + {0})\n", diags));
    EXPECT_EQ(diags.first_code(), "E020");
}

TEST(Mapping, LookupPrefersExactSignature) {
    Diagnostics diags;
    auto rules = load(default_mapping_text(), diags);
    ASSERT_TRUE(rules);
    const MappingRule* exact = rules->lookup("binop.add", {"int", "int"});
    ASSERT_NE(exact, nullptr);
    EXPECT_EQ(exact->sig, (std::vector<std::string>{"int", "int"}));
}

TEST(Mapping, LookupFallsBackToWildcard) {
    Diagnostics diags;
    auto rules = load(default_mapping_text(), diags);
    ASSERT_TRUE(rules);
    // stmt.assign only has a "-" rule; any probe signature lands on it.
    const MappingRule* wildcard = rules->lookup("stmt.assign", {"float"});
    ASSERT_NE(wildcard, nullptr);
    EXPECT_TRUE(wildcard->wildcard_sig);
}

TEST(Mapping, LookupMissIsE023) {
    Diagnostics diags;
    auto rules = load(default_mapping_text(), diags);
    ASSERT_TRUE(rules);
    EXPECT_EQ(rules->lookup("binop.mod", {"float", "float"}), nullptr);
    Diagnostics lookup_diags;
    rules->lookup("binop.mod", {"float", "float"}, lookup_diags);
    EXPECT_EQ(lookup_diags.first_code(), "E023");
}

TEST(Mapping, SerializeRoundTrip) {
    Diagnostics diags;
    auto rules = load(default_mapping_text(), diags);
    ASSERT_TRUE(rules);
    std::string serialized = rules->serialize();
    Diagnostics diags2;
    auto reloaded = load(serialized, diags2);
    ASSERT_TRUE(reloaded) << diags2.first_error();
    ASSERT_EQ(rules->rules.size(), reloaded->rules.size());
    for (size_t i = 0; i < rules->rules.size(); ++i) {
        EXPECT_EQ(rules->rules[i].kind, reloaded->rules[i].kind);
        EXPECT_EQ(rules->rules[i].sig, reloaded->rules[i].sig);
        EXPECT_EQ(rules->rules[i].wildcard_sig, reloaded->rules[i].wildcard_sig);
        EXPECT_EQ(rules->rules[i].result_type, reloaded->rules[i].result_type);
        EXPECT_EQ(rules->rules[i].template_text, reloaded->rules[i].template_text);
    }
    EXPECT_EQ(serialized, reloaded->serialize());
}

TEST(Mapping, LoadDeterminism) {
    Diagnostics d1, d2;
    auto a = load(default_mapping_text(), d1);
    auto b = load(default_mapping_text(), d2);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(a->serialize(), b->serialize());
}

TEST(Mapping, TemplateNewlineEscapes) {
    Diagnostics diags;
    auto rules = load(default_mapping_text(), diags);
    ASSERT_TRUE(rules);
    const MappingRule* r = rules->lookup("stmt.while", {});
    ASSERT_NE(r, nullptr);
    EXPECT_NE(r->template_text.find('\n'), std::string::npos);
}

TEST(Mapping, InstantiateReportsUnboundPlaceholder) {
    std::string error;
    auto out = instantiate_template("({0} + {1})", {"a"}, {}, &error);
    EXPECT_FALSE(out);
    EXPECT_NE(error.find("{1}"), std::string::npos);
}

TEST(Mapping, InstantiateNamedAndPositional) {
    std::string error;
    auto out = instantiate_template("{target} = {value}; // {0}", {"seven"},
                                    {{"target", "x"}, {"value", "7"}}, &error);
    ASSERT_TRUE(out);
    EXPECT_EQ(*out, "x = 7; // seven");
}

TEST(Mapping, LiteralBracesAreNotPlaceholders) {
    std::string error;
    auto out = instantiate_template("if ({0}) {\n{body}\n}", {"c"}, {{"body", "x = 1;"}}, &error);
    ASSERT_TRUE(out);
    EXPECT_EQ(*out, "if (c) {\nx = 1;\n}");
}
