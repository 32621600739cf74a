#include <sstream>

#include "barrierfix/minikernel.hpp"

namespace barrierfix {

std::string toString(const SourceLoc& loc) {
  std::ostringstream os;
  os << loc.file << ':' << loc.line << ':' << loc.col;
  return os.str();
}

ParseError::ParseError(SourceLoc loc, const std::string& message)
    : std::runtime_error(toString(loc) + ": parse error: " + message), loc_(std::move(loc)) {}

SemanticError::SemanticError(SourceLoc loc, const std::string& message)
    : std::runtime_error(toString(loc) + ": error: " + message), loc_(std::move(loc)) {}

ExprPtr makeExpr(decltype(Expr::node) node, SourceLoc loc) {
  return std::make_shared<const Expr>(Expr{std::move(node), std::move(loc)});
}

void validateLaunch(const LaunchConfig& launch, const LaunchLimits& limits,
                    const SourceLoc& where) {
  if (launch.blocks < 1 || launch.threadsPerBlock < 1) {
    throw SemanticError(where, "launch dimensions must be positive");
  }
  if (launch.blocks > limits.maxBlocks || launch.threadsPerBlock > limits.maxThreadsPerBlock) {
    std::ostringstream os;
    os << "launch <<<" << launch.blocks << ", " << launch.threadsPerBlock
       << ">>> exceeds the limit of " << limits.maxBlocks << " blocks x "
       << limits.maxThreadsPerBlock << " threads";
    throw SemanticError(where, os.str());
  }
  if (launch.totalThreads() < 2) {
    throw SemanticError(where, "launch must have at least two threads");
  }
}

const Param* Kernel::findParam(const std::string& n) const {
  for (const Param& p : params) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

const Function* Kernel::findFunction(const std::string& n) const {
  for (const Function& f : functions) {
    if (f.name == n) return &f;
  }
  return nullptr;
}

std::string_view builtinName(Builtin b) {
  switch (b) {
    case Builtin::ThreadId: return "tid";
    case Builtin::BlockId: return "bid";
    case Builtin::BlockDim: return "bdim";
    case Builtin::GridDim: return "gdim";
  }
  return "?";
}

std::string_view binaryOpText(BinaryOp op) {
  switch (op) {
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Structural equality

namespace {

bool equalPtr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurallyEqual(*a, *b);
}

bool equalParams(const std::vector<Param>& a, const std::vector<Param>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].isArray != b[i].isArray ||
        a[i].space != b[i].space || a[i].scalarValue != b[i].scalarValue) {
      return false;
    }
  }
  return true;
}

bool equalStmt(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Assign>) {
          return x.target.name == y.target.name && equalPtr(x.target.index, y.target.index) &&
                 equalPtr(x.value, y.value) && x.declares == y.declares;
        } else if constexpr (std::is_same_v<T, Barrier>) {
          return x.level == y.level && x.origin == y.origin && x.guard == y.guard;
        } else if constexpr (std::is_same_v<T, If>) {
          return equalPtr(x.cond, y.cond) && structurallyEqual(x.thenBlock, y.thenBlock) &&
                 x.hasElse == y.hasElse && structurallyEqual(x.elseBlock, y.elseBlock);
        } else if constexpr (std::is_same_v<T, While>) {
          return equalPtr(x.cond, y.cond) && x.unrollHint == y.unrollHint &&
                 structurallyEqual(x.body, y.body);
        } else if constexpr (std::is_same_v<T, Call>) {
          if (x.callee != y.callee || x.result != y.result ||
              x.declaresResult != y.declaresResult || x.args.size() != y.args.size()) {
            return false;
          }
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (!equalPtr(x.args[i], y.args[i])) return false;
          }
          return true;
        } else {
          return equalPtr(x.cond, y.cond);
        }
      },
      a.node);
}

}  // namespace

bool structurallyEqual(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IntLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, BuiltinRef>) {
          return x.which == y.which;
        } else if constexpr (std::is_same_v<T, ArrayRead>) {
          return x.array == y.array && equalPtr(x.index, y.index);
        } else if constexpr (std::is_same_v<T, Unary>) {
          return x.op == y.op && equalPtr(x.operand, y.operand);
        } else {
          return x.op == y.op && equalPtr(x.lhs, y.lhs) && equalPtr(x.rhs, y.rhs);
        }
      },
      a.node);
}

bool structurallyEqual(const Block& a, const Block& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (std::size_t i = 0; i < a.stmts.size(); ++i) {
    if (!equalStmt(a.stmts[i], b.stmts[i])) return false;
  }
  return true;
}

bool structurallyEqual(const Kernel& a, const Kernel& b) {
  if (a.name != b.name || !(a.launch == b.launch) || !equalParams(a.params, b.params) ||
      a.functions.size() != b.functions.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const Function& f = a.functions[i];
    const Function& g = b.functions[i];
    if (f.name != g.name || f.returnsValue != g.returnsValue || !equalParams(f.params, g.params) ||
        !structurallyEqual(f.body, g.body) || !equalPtr(f.returnValue, g.returnValue)) {
      return false;
    }
  }
  return structurallyEqual(a.body, b.body);
}

// ---------------------------------------------------------------------------
// Shared-access queries

namespace {

bool isSharedName(const Kernel& k, const std::string& name) {
  const Param* p = k.findParam(name);
  return p && p->isArray && p->space == MemorySpace::Shared;
}

}  // namespace

bool readsSharedArray(const Kernel& kernel, const Expr& expr) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ArrayRead>) {
          return isSharedName(kernel, n.array) || readsSharedArray(kernel, *n.index);
        } else if constexpr (std::is_same_v<T, Unary>) {
          return readsSharedArray(kernel, *n.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return readsSharedArray(kernel, *n.lhs) || readsSharedArray(kernel, *n.rhs);
        } else {
          return false;
        }
      },
      expr.node);
}

bool touchesShared(const Kernel& kernel, const Stmt& stmt) {
  if (const auto* a = std::get_if<Assign>(&stmt.node)) {
    if (a->target.index && isSharedName(kernel, a->target.name)) return true;
    if (a->target.index && readsSharedArray(kernel, *a->target.index)) return true;
    return readsSharedArray(kernel, *a->value);
  }
  if (const auto* c = std::get_if<Call>(&stmt.node)) {
    for (const ExprPtr& arg : c->args) {
      if (const auto* v = std::get_if<VarRef>(&arg->node); v && isSharedName(kernel, v->name)) {
        return true;
      }
    }
    return false;
  }
  if (const auto* s = std::get_if<Assert>(&stmt.node)) {
    return readsSharedArray(kernel, *s->cond);
  }
  return false;
}

}  // namespace barrierfix
