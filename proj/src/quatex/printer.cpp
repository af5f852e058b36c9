#include "smcsweep/quatex/printer.hpp"

#include "smcsweep/csv.hpp"

namespace smcsweep::quatex {
namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void print_call(const Call& call, std::string& out);

void print_expr(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          out += csv::format_double(node.value);
        } else if constexpr (std::is_same_v<T, StringLit>) {
          out += quote(node.value);
        } else if constexpr (std::is_same_v<T, ParamRef>) {
          out += node.name;
        } else if constexpr (std::is_same_v<T, Rval>) {
          out += "s.rval(";
          print_expr(node.name.front(), out);
          out += ")";
        } else if constexpr (std::is_same_v<T, Compare>) {
          // Comparisons do not chain; nested ones need parentheses.
          for (int side = 0; side < 2; ++side) {
            const Expr& operand = node.operands[side];
            bool wrap = std::holds_alternative<Compare>(operand.node);
            if (wrap) out += "(";
            print_expr(operand, out);
            if (wrap) out += ")";
            if (side == 0) {
              out += " ";
              out += spelling(node.op);
              out += " ";
            }
          }
        } else if constexpr (std::is_same_v<T, IfExpr>) {
          out += "if ";
          print_expr(node.parts[0], out);
          out += " then ";
          print_expr(node.parts[1], out);
          out += " else ";
          print_expr(node.parts[2], out);
          out += " fi";
        } else if constexpr (std::is_same_v<T, Call>) {
          print_call(node, out);
        } else if constexpr (std::is_same_v<T, Next>) {
          out += "# ";
          print_call(node.call, out);
        }
      },
      e.node);
}

void print_call(const Call& call, std::string& out) {
  out += call.callee;
  out += "(";
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (i) out += ", ";
    print_expr(call.args[i], out);
  }
  out += ")";
}

}  // namespace

std::string print(const Expr& expr) {
  std::string out;
  print_expr(expr, out);
  return out;
}

std::string print(const QueryAst& ast) {
  std::string out;
  for (const auto& def : ast.definitions) {
    out += def.name + "(";
    for (std::size_t i = 0; i < def.params.size(); ++i) {
      if (i) out += ", ";
      out += def.params[i];
    }
    out += ") =\n  ";
    print_expr(def.body, out);
    out += ";\n";
  }
  for (const auto& dir : ast.directives) {
    out += "eval ";
    if (dir.parametric) {
      const auto& g = *dir.parametric;
      out += "parametric(E[" + print(dir.target) + "], " + g.variable + ", " + std::to_string(g.lo) + ", " +
             std::to_string(g.step) + ", " + std::to_string(g.hi) + ")";
    } else {
      out += "E[" + print(dir.target) + "]";
    }
    out += ";\n";
  }
  return out;
}

}  // namespace smcsweep::quatex
