#include "cliq/ast.hpp"

#include "cliq/value.hpp"

#include <sstream>

namespace cliq {

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
    case NodeKind::Module: return "Module";
    case NodeKind::FuncDef: return "FuncDef";
    case NodeKind::Assign: return "Assign";
    case NodeKind::AugAssign: return "AugAssign";
    case NodeKind::If: return "If";
    case NodeKind::While: return "While";
    case NodeKind::ForRange: return "ForRange";
    case NodeKind::Break: return "Break";
    case NodeKind::Continue: return "Continue";
    case NodeKind::Return: return "Return";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::BinOp: return "BinOp";
    case NodeKind::UnaryOp: return "UnaryOp";
    case NodeKind::Compare: return "Compare";
    case NodeKind::BoolOp: return "BoolOp";
    case NodeKind::Call: return "Call";
    case NodeKind::Name: return "Name";
    case NodeKind::IntLit: return "IntLit";
    case NodeKind::FloatLit: return "FloatLit";
    case NodeKind::BoolLit: return "BoolLit";
    case NodeKind::ArrayLit: return "ArrayLit";
    case NodeKind::Index: return "Index";
    case NodeKind::QuantumBlock: return "QuantumBlock";
    }
    return "?";
}

AstPtr make_node(NodeKind kind, Span span) { return std::make_unique<AstNode>(kind, span); }

AstPtr AstNode::clone() const {
    auto out = make_node(kind, span);
    out->str_attr = str_attr;
    out->int_attr = int_attr;
    out->float_attr = float_attr;
    out->bool_attr = bool_attr;
    out->synthetic = synthetic;
    if (quantum) out->quantum = std::make_unique<QuantumBlockInfo>(*quantum);
    out->children.reserve(children.size());
    for (const auto& c : children) out->children.push_back(c->clone());
    // FuncDef payload lives in dedicated fields.
    out->params = params;
    out->ret_type = ret_type;
    return out;
}

bool structurally_equal(const AstNode& a, const AstNode& b) {
    if (a.kind != b.kind || a.str_attr != b.str_attr || a.int_attr != b.int_attr ||
        a.float_attr != b.float_attr || a.bool_attr != b.bool_attr)
        return false;
    if (a.params != b.params || a.ret_type != b.ret_type) return false;
    if (static_cast<bool>(a.quantum) != static_cast<bool>(b.quantum)) return false;
    if (a.quantum && !(*a.quantum == *b.quantum)) return false;
    if (a.children.size() != b.children.size()) return false;
    for (size_t i = 0; i < a.children.size(); ++i) {
        if (!structurally_equal(*a.children[i], *b.children[i])) return false;
    }
    return true;
}

namespace {

void dump_rec(const AstNode& n, std::ostringstream& out) {
    out << node_kind_name(n.kind);
    switch (n.kind) {
    case NodeKind::Name:
    case NodeKind::Call:
    case NodeKind::BinOp:
    case NodeKind::UnaryOp:
    case NodeKind::Compare:
    case NodeKind::BoolOp:
    case NodeKind::AugAssign:
    case NodeKind::FuncDef:
    case NodeKind::ForRange: out << "(" << n.str_attr << ")"; break;
    case NodeKind::IntLit: out << "(" << n.int_attr << ")"; break;
    case NodeKind::FloatLit: out << "(" << format_double(n.float_attr) << ")"; break;
    case NodeKind::BoolLit: out << "(" << (n.bool_attr ? "True" : "False") << ")"; break;
    default: break;
    }
    if (!n.children.empty()) {
        out << "[";
        for (size_t i = 0; i < n.children.size(); ++i) {
            if (i) out << " ";
            dump_rec(*n.children[i], out);
        }
        out << "]";
    }
}

} // namespace

std::string dump_ast(const AstNode& node) {
    std::ostringstream out;
    dump_rec(node, out);
    return out.str();
}

} // namespace cliq
