#include <sstream>

#include "barrierfix/minikernel.hpp"

namespace barrierfix {

namespace {

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 6;
  }
  return 0;
}

void printExprTo(std::ostream& os, const Expr& e);

// Parenthesize a binary operand when the parser would otherwise rebuild a
// different tree: looser binding on either side, or equal binding on the
// right (operators are left-associative).
void printOperand(std::ostream& os, const Expr& child, int parentPrec, bool rightSide) {
  const auto* bin = std::get_if<Binary>(&child.node);
  bool parens = bin && (precedence(bin->op) < parentPrec ||
                        (rightSide && precedence(bin->op) == parentPrec));
  if (parens) os << '(';
  printExprTo(os, child);
  if (parens) os << ')';
}

void printExprTo(std::ostream& os, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          os << n.value;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, BuiltinRef>) {
          os << builtinName(n.which);
        } else if constexpr (std::is_same_v<T, ArrayRead>) {
          os << n.array << '[';
          printExprTo(os, *n.index);
          os << ']';
        } else if constexpr (std::is_same_v<T, Unary>) {
          os << (n.op == UnaryOp::Neg ? "-" : "!");
          bool parens = std::holds_alternative<Binary>(n.operand->node);
          if (parens) os << '(';
          printExprTo(os, *n.operand);
          if (parens) os << ')';
        } else {
          int prec = precedence(n.op);
          printOperand(os, *n.lhs, prec, false);
          os << ' ' << binaryOpText(n.op) << ' ';
          printOperand(os, *n.rhs, prec, true);
        }
      },
      e.node);
}

class Printer {
 public:
  std::string str() const { return os_.str(); }

  void kernel(const Kernel& k) {
    for (const Function& f : k.functions) {
      function(f);
      os_ << '\n';
    }
    os_ << "kernel " << k.name << '(';
    params(k.params);
    os_ << ") <<<" << k.launch.blocks << ", " << k.launch.threadsPerBlock << ">>> ";
    block(k.body);
    os_ << '\n';
  }

 private:
  void indent() { os_ << std::string(static_cast<std::size_t>(depth_) * 2, ' '); }

  void params(const std::vector<Param>& ps) {
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (i) os_ << ", ";
      const Param& p = ps[i];
      if (p.isArray) {
        os_ << (p.space == MemorySpace::Shared ? "shared int " : "int ") << p.name << "[]";
      } else {
        os_ << "int " << p.name;
        if (p.scalarValue != 0) os_ << " = " << p.scalarValue;
      }
    }
  }

  void function(const Function& f) {
    os_ << "device " << (f.returnsValue ? "int " : "void ") << f.name << '(';
    params(f.params);
    os_ << ") {\n";
    ++depth_;
    for (const Stmt& s : f.body.stmts) stmt(s);
    if (f.returnValue) {
      indent();
      os_ << "return ";
      printExprTo(os_, *f.returnValue);
      os_ << ";\n";
    }
    --depth_;
    os_ << "}\n";
  }

  // Prints "{ ... }" starting at the current column; no trailing newline.
  void block(const Block& b) {
    os_ << "{\n";
    ++depth_;
    for (const Stmt& s : b.stmts) stmt(s);
    --depth_;
    indent();
    os_ << '}';
  }

  void stmt(const Stmt& s) {
    indent();
    std::visit([&](const auto& n) { emit(n); }, s.node);
  }

  void emit(const Assign& a) {
    if (a.declares) os_ << "int ";
    os_ << a.target.name;
    if (a.target.index) {
      os_ << '[';
      printExprTo(os_, *a.target.index);
      os_ << ']';
    }
    os_ << " = ";
    printExprTo(os_, *a.value);
    os_ << ";\n";
  }
  void emit(const Barrier& b) {
    if (b.origin == BarrierOrigin::Instrumented) os_ << "inserted ";
    os_ << (b.level == BarrierLevel::Grid ? "gridbarrier" : "barrier");
    if (b.guard) os_ << " when b" << *b.guard;
    os_ << ";\n";
  }
  void emit(const If& s) {
    os_ << "if (";
    printExprTo(os_, *s.cond);
    os_ << ") ";
    block(s.thenBlock);
    if (s.hasElse) {
      os_ << " else ";
      block(s.elseBlock);
    }
    os_ << '\n';
  }
  void emit(const While& w) {
    os_ << "while (";
    printExprTo(os_, *w.cond);
    os_ << ") ";
    if (w.unrollHint != kDefaultUnrollHint) os_ << "unroll(" << w.unrollHint << ") ";
    block(w.body);
    os_ << '\n';
  }
  void emit(const Call& c) {
    if (c.result) os_ << (c.declaresResult ? "int " : "") << *c.result << " = ";
    os_ << c.callee << '(';
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      if (i) os_ << ", ";
      printExprTo(os_, *c.args[i]);
    }
    os_ << ");\n";
  }
  void emit(const Assert& a) {
    os_ << "assert(";
    printExprTo(os_, *a.cond);
    os_ << ");\n";
  }

  std::ostringstream os_;
  int depth_ = 0;
};

}  // namespace

std::string printExpr(const Expr& expr) {
  std::ostringstream os;
  printExprTo(os, expr);
  return os.str();
}

std::string prettyPrint(const Kernel& kernel) {
  Printer p;
  p.kernel(kernel);
  return p.str();
}

}  // namespace barrierfix
