// MiniKernel: a small C-like GPU kernel language and its lowered IR.
//
// The parser lowers every statement so that it performs at most one shared
// array access, hoisting shared reads into fresh temporaries. Everything
// downstream (instrumentation, the oracle, repair) works on that IR.
#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace barrierfix {

struct SourceLoc {
  std::string file;
  int line = 1;
  int col = 1;

  std::strong_ordering operator<=>(const SourceLoc& other) const {
    if (auto c = line <=> other.line; c != 0) return c;
    return col <=> other.col;
  }
  bool operator==(const SourceLoc& other) const {
    return line == other.line && col == other.col;
  }
};

std::string toString(const SourceLoc& loc);

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc loc, const std::string& message);
  const SourceLoc& loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

class SemanticError : public std::runtime_error {
 public:
  SemanticError(SourceLoc loc, const std::string& message);
  const SourceLoc& loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

// ---------------------------------------------------------------------------
// Expressions

enum class Builtin { ThreadId, BlockId, BlockDim, GridDim };
enum class UnaryOp { Neg, Not };
enum class BinaryOp { Mul, Div, Mod, Add, Sub, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct IntLit {
  std::int64_t value;
};
struct VarRef {
  std::string name;
};
struct BuiltinRef {
  Builtin which;
};
struct ArrayRead {
  std::string array;
  ExprPtr index;
  SourceLoc close;  // position of the closing ']'
};
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  std::variant<IntLit, VarRef, BuiltinRef, ArrayRead, Unary, Binary> node;
  SourceLoc loc;
};

ExprPtr makeExpr(decltype(Expr::node) node, SourceLoc loc);

// ---------------------------------------------------------------------------
// Statements

enum class BarrierLevel { Block, Grid };
enum class BarrierOrigin { Programmer, Instrumented };

struct Stmt;

struct Block {
  std::vector<Stmt> stmts;
};

// Assignment target: a local scalar (index == nullptr) or an array cell.
struct LValue {
  std::string name;
  ExprPtr index;
};

struct Assign {
  LValue target;
  ExprPtr value;
  bool declares = false;  // `int x = e;`
};

struct Barrier {
  BarrierLevel level = BarrierLevel::Block;
  BarrierOrigin origin = BarrierOrigin::Programmer;
  std::optional<int> guard;  // barrier variable id, set by instrumentation
};

struct If {
  ExprPtr cond;
  Block thenBlock;
  Block elseBlock;
  bool hasElse = false;
};

inline constexpr int kDefaultUnrollHint = 2;

struct While {
  ExprPtr cond;
  Block body;
  int unrollHint = kDefaultUnrollHint;
};

struct Call {
  std::string callee;
  std::vector<ExprPtr> args;
  std::optional<std::string> result;
  bool declaresResult = false;
};

struct Assert {
  ExprPtr cond;
};

struct Stmt {
  std::variant<Assign, Barrier, If, While, Call, Assert> node;
  SourceLoc loc;
};

// ---------------------------------------------------------------------------
// Declarations

enum class MemorySpace { Shared, Private };

struct Param {
  std::string name;
  bool isArray = false;
  MemorySpace space = MemorySpace::Private;
  std::int64_t scalarValue = 0;  // launch-time value of a scalar parameter
  SourceLoc loc;
};

struct Function {
  std::string name;
  bool returnsValue = false;
  std::vector<Param> params;
  Block body;
  ExprPtr returnValue;  // non-null iff returnsValue
  SourceLoc returnLoc;
  SourceLoc loc;
};

struct LaunchConfig {
  int blocks = 1;
  int threadsPerBlock = 4;

  int totalThreads() const { return blocks * threadsPerBlock; }
  bool operator==(const LaunchConfig&) const = default;
};

struct LaunchLimits {
  int maxBlocks = 8;
  int maxThreadsPerBlock = 8;
};

// Throws SemanticError when the configuration is outside the limits or has
// fewer than two threads.
void validateLaunch(const LaunchConfig& launch, const LaunchLimits& limits,
                    const SourceLoc& where);

struct Kernel {
  std::string name;
  std::vector<Param> params;
  Block body;
  LaunchConfig launch;
  std::vector<Function> functions;
  SourceLoc loc;

  const Param* findParam(const std::string& name) const;
  const Function* findFunction(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Operations

struct ParseOptions {
  std::string file = "<input>";
  LaunchLimits limits;
};

Kernel parse(const std::string& text, const ParseOptions& options = {});

std::string prettyPrint(const Kernel& kernel);
std::string printExpr(const Expr& expr);

// AST equality that ignores source locations.
bool structurallyEqual(const Kernel& a, const Kernel& b);
bool structurallyEqual(const Block& a, const Block& b);
bool structurallyEqual(const Expr& a, const Expr& b);

std::string_view builtinName(Builtin b);
std::string_view binaryOpText(BinaryOp op);

// Shared-access queries. touchesShared looks only at the statement itself:
// nested blocks are not descended into, and a call counts when any argument
// names a shared array.
bool readsSharedArray(const Kernel& kernel, const Expr& expr);
bool touchesShared(const Kernel& kernel, const Stmt& stmt);

}  // namespace barrierfix
