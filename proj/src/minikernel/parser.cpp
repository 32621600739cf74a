#include <charconv>
#include <set>
#include <unordered_map>

#include "barrierfix/minikernel.hpp"
#include "lexer.hpp"

namespace barrierfix {

using detail::Token;
using detail::TokenKind;

namespace {

enum class SymbolKind { Scalar, SharedArray, PrivateArray };

const std::set<std::string, std::less<>> kKeywords = {
    "kernel", "device",   "shared",      "int",   "void",   "if",
    "else",   "while",    "unroll",      "barrier", "gridbarrier",
    "inserted", "when",   "assert",      "return", "tid",   "bid",
    "bdim",   "gdim"};

std::optional<Builtin> builtinFor(std::string_view word) {
  if (word == "tid") return Builtin::ThreadId;
  if (word == "bid") return Builtin::BlockId;
  if (word == "bdim") return Builtin::BlockDim;
  if (word == "gdim") return Builtin::GridDim;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& options)
      : toks_(std::move(tokens)), options_(options) {
    for (const Token& t : toks_) {
      if (t.kind == TokenKind::Ident) usedNames_.insert(t.text);
    }
  }

  Kernel parseFile() {
    Kernel kernel;
    bool haveKernel = false;
    while (!at(TokenKind::End)) {
      if (isWord("device")) {
        if (haveKernel) {
          throw SemanticError(peek().loc, "device functions must precede the kernel");
        }
        Function fn = parseFunction();
        if (functionIndex_.count(fn.name)) {
          throw SemanticError(fn.loc, "duplicate function '" + fn.name + "'");
        }
        functionIndex_[fn.name] = functions_.size();
        functions_.push_back(std::move(fn));
      } else if (isWord("kernel")) {
        if (haveKernel) throw SemanticError(peek().loc, "more than one kernel in file");
        kernel = parseKernel();
        haveKernel = true;
      } else {
        throw ParseError(peek().loc, "expected 'kernel' or 'device', found '" +
                                         describe(peek()) + "'");
      }
    }
    if (!haveKernel) throw ParseError(peek().loc, "no kernel definition found");
    kernel.functions = functions_;
    return kernel;
  }

 private:
  // -- token helpers --------------------------------------------------------
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(TokenKind k) const { return peek().kind == k; }
  bool isPunct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Punct && peek(ahead).text == p;
  }
  bool isWord(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Ident && peek(ahead).text == w;
  }
  static std::string describe(const Token& t) {
    return t.kind == TokenKind::End ? std::string("end of input") : t.text;
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  const Token& expectPunct(std::string_view p) {
    if (!isPunct(p)) {
      throw ParseError(peek().loc, "expected '" + std::string(p) + "', found '" +
                                       describe(peek()) + "'");
    }
    return next();
  }
  const Token& expectWord(std::string_view w) {
    if (!isWord(w)) {
      throw ParseError(peek().loc, "expected '" + std::string(w) + "', found '" +
                                       describe(peek()) + "'");
    }
    return next();
  }
  const Token& expectIdentifier(const char* what) {
    if (!at(TokenKind::Ident) || kKeywords.count(peek().text)) {
      throw ParseError(peek().loc, std::string("expected ") + what + ", found '" +
                                       describe(peek()) + "'");
    }
    return next();
  }
  std::int64_t expectInt() {
    bool negative = false;
    if (isPunct("-")) {
      next();
      negative = true;
    }
    if (!at(TokenKind::Int)) {
      throw ParseError(peek().loc, "expected integer, found '" + describe(peek()) + "'");
    }
    const Token& t = next();
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) throw ParseError(t.loc, "integer literal out of range");
    return negative ? -v : v;
  }

  // -- scopes -----------------------------------------------------------------
  void pushScope() { scopes_.emplace_back(); }
  void popScope() { scopes_.pop_back(); }
  std::optional<SymbolKind> lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (auto f = it->find(name); f != it->end()) return f->second;
    }
    return std::nullopt;
  }
  void declare(const std::string& name, SymbolKind kind, const SourceLoc& loc) {
    if (lookup(name)) throw SemanticError(loc, "redeclaration of '" + name + "'");
    if (functionIndex_.count(name)) {
      throw SemanticError(loc, "'" + name + "' is already a function name");
    }
    scopes_.back()[name] = kind;
  }
  std::string freshTemp() {
    for (;;) {
      std::string name = "t" + std::to_string(tempCounter_++);
      if (!usedNames_.count(name)) {
        usedNames_.insert(name);
        return name;
      }
    }
  }

  // -- declarations ---------------------------------------------------------
  Param parseParam() {
    Param p;
    p.loc = peek().loc;
    if (isWord("shared")) {
      next();
      expectWord("int");
      p.name = expectIdentifier("parameter name").text;
      expectPunct("[");
      expectPunct("]");
      p.isArray = true;
      p.space = MemorySpace::Shared;
      return p;
    }
    expectWord("int");
    p.name = expectIdentifier("parameter name").text;
    if (isPunct("[")) {
      next();
      expectPunct("]");
      p.isArray = true;
      p.space = MemorySpace::Private;
    } else if (isPunct("=")) {
      next();
      p.scalarValue = expectInt();
    }
    return p;
  }

  std::vector<Param> parseParams() {
    std::vector<Param> params;
    expectPunct("(");
    if (!isPunct(")")) {
      for (;;) {
        params.push_back(parseParam());
        if (!isPunct(",")) break;
        next();
      }
    }
    expectPunct(")");
    return params;
  }

  void declareParams(const std::vector<Param>& params) {
    for (const Param& p : params) {
      SymbolKind kind = !p.isArray ? SymbolKind::Scalar
                        : p.space == MemorySpace::Shared ? SymbolKind::SharedArray
                                                         : SymbolKind::PrivateArray;
      declare(p.name, kind, p.loc);
    }
  }

  Function parseFunction() {
    Function fn;
    fn.loc = expectWord("device").loc;
    if (isWord("void")) {
      next();
    } else {
      expectWord("int");
      fn.returnsValue = true;
    }
    fn.name = expectIdentifier("function name").text;
    fn.params = parseParams();
    inFunction_ = true;
    pushScope();
    declareParams(fn.params);
    expectPunct("{");
    pushScope();
    while (!isPunct("}") && !isWord("return")) {
      if (at(TokenKind::End)) throw ParseError(peek().loc, "unterminated function body");
      parseStatementInto(fn.body);
    }
    if (isWord("return")) {
      const Token& ret = next();
      if (!fn.returnsValue) {
        throw SemanticError(ret.loc, "void function '" + fn.name + "' returns a value");
      }
      ExprPtr value = parseExpr();
      const Token& semi = expectPunct(";");
      std::vector<Stmt> hoisted;
      value = hoistSharedReads(value, hoisted);
      for (Stmt& s : hoisted) fn.body.stmts.push_back(std::move(s));
      fn.returnValue = value;
      fn.returnLoc = hoisted.empty() ? ret.loc : semi.loc;
      if (!isPunct("}")) {
        throw ParseError(peek().loc, "'return' must be the last statement of a function");
      }
    } else if (fn.returnsValue) {
      throw SemanticError(fn.loc, "function '" + fn.name + "' must end with 'return'");
    }
    expectPunct("}");
    popScope();
    popScope();
    inFunction_ = false;
    return fn;
  }

  Kernel parseKernel() {
    Kernel k;
    k.loc = expectWord("kernel").loc;
    k.name = expectIdentifier("kernel name").text;
    k.params = parseParams();
    if (isPunct("<<<")) {
      const Token& open = next();
      std::int64_t blocks = expectInt();
      expectPunct(",");
      std::int64_t threads = expectInt();
      expectPunct(">>>");
      if (blocks < 1 || threads < 1 || blocks > 1'000'000 || threads > 1'000'000) {
        throw SemanticError(open.loc, "launch dimensions must be positive");
      }
      k.launch.blocks = static_cast<int>(blocks);
      k.launch.threadsPerBlock = static_cast<int>(threads);
      validateLaunch(k.launch, options_.limits, open.loc);
    }
    pushScope();
    declareParams(k.params);
    k.body = parseBlock();
    popScope();
    return k;
  }

  // -- statements -----------------------------------------------------------
  Block parseBlock() {
    expectPunct("{");
    pushScope();
    Block block;
    while (!isPunct("}")) {
      if (at(TokenKind::End)) throw ParseError(peek().loc, "expected '}'");
      parseStatementInto(block);
    }
    next();
    popScope();
    return block;
  }

  std::optional<int> parseGuard() {
    if (!isWord("when")) return std::nullopt;
    next();
    const Token& t = peek();
    if (t.kind != TokenKind::Ident || t.text.size() < 2 || t.text[0] != 'b') {
      throw ParseError(t.loc, "expected barrier variable 'b<N>'");
    }
    int id = 0;
    auto [ptr, ec] = std::from_chars(t.text.data() + 1, t.text.data() + t.text.size(), id);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() || id < 1) {
      throw ParseError(t.loc, "expected barrier variable 'b<N>' with N >= 1");
    }
    next();
    return id;
  }

  Stmt parseBarrier(const SourceLoc& loc, BarrierOrigin origin) {
    Barrier b;
    b.origin = origin;
    if (isWord("barrier")) {
      b.level = BarrierLevel::Block;
    } else if (isWord("gridbarrier")) {
      b.level = BarrierLevel::Grid;
    } else {
      throw ParseError(peek().loc, "expected 'barrier' or 'gridbarrier'");
    }
    const Token& kw = next();
    if (inFunction_) {
      throw SemanticError(kw.loc, "barriers are not allowed inside device functions");
    }
    b.guard = parseGuard();
    if (origin == BarrierOrigin::Instrumented && !b.guard) {
      throw ParseError(peek().loc, "inserted barrier requires a 'when b<N>' guard");
    }
    expectPunct(";");
    return Stmt{b, loc};
  }

  void parseStatementInto(Block& block) {
    const Token& first = peek();
    SourceLoc loc = first.loc;
    if (isWord("barrier") || isWord("gridbarrier")) {
      block.stmts.push_back(parseBarrier(loc, BarrierOrigin::Programmer));
      return;
    }
    if (isWord("inserted")) {
      next();
      block.stmts.push_back(parseBarrier(loc, BarrierOrigin::Instrumented));
      return;
    }
    if (isWord("if")) {
      block.stmts.push_back(parseIf());
      return;
    }
    if (isWord("while")) {
      next();
      expectPunct("(");
      While w;
      w.cond = parseCondition();
      expectPunct(")");
      if (isWord("unroll")) {
        next();
        expectPunct("(");
        const SourceLoc hintLoc = peek().loc;
        std::int64_t hint = expectInt();
        if (hint < 1 || hint > 64) {
          throw SemanticError(hintLoc, "unroll hint must be between 1 and 64");
        }
        w.unrollHint = static_cast<int>(hint);
        expectPunct(")");
      }
      w.body = parseBlock();
      block.stmts.push_back(Stmt{std::move(w), loc});
      return;
    }
    if (isWord("assert")) {
      next();
      expectPunct("(");
      ExprPtr cond = parseExpr();
      expectPunct(")");
      const Token& semi = expectPunct(";");
      std::vector<Stmt> hoisted;
      cond = hoistSharedReads(cond, hoisted);
      SourceLoc at = hoisted.empty() ? loc : semi.loc;
      for (Stmt& s : hoisted) block.stmts.push_back(std::move(s));
      block.stmts.push_back(Stmt{Assert{cond}, at});
      return;
    }
    if (isWord("int")) {
      next();
      const Token& name = expectIdentifier("variable name");
      if (isPunct(";")) {
        next();
        declare(name.text, SymbolKind::Scalar, name.loc);
        Assign a{LValue{name.text, nullptr}, makeExpr(IntLit{0}, name.loc), true};
        block.stmts.push_back(Stmt{std::move(a), loc});
        return;
      }
      expectPunct("=");
      if (isCallAhead()) {
        Stmt call = parseCall(loc);
        declare(name.text, SymbolKind::Scalar, name.loc);
        auto& c = std::get<Call>(call.node);
        requireFunctionShape(c, true, loc);
        c.result = name.text;
        c.declaresResult = true;
        block.stmts.push_back(std::move(call));
        return;
      }
      ExprPtr value = parseExpr();
      const Token& semi = expectPunct(";");
      declare(name.text, SymbolKind::Scalar, name.loc);
      emitAssign(block, LValue{name.text, nullptr}, value, true, loc, semi.loc);
      return;
    }
    if (at(TokenKind::Ident) && isPunct("(", 1)) {
      Stmt call = parseCall(loc);
      requireFunctionShape(std::get<Call>(call.node), false, loc);
      block.stmts.push_back(std::move(call));
      return;
    }
    if (at(TokenKind::Ident)) {
      if (builtinFor(first.text)) {
        throw SemanticError(loc, "cannot assign to builtin '" + first.text + "'");
      }
      const Token& name = expectIdentifier("statement");
      auto kind = lookup(name.text);
      if (!kind) throw SemanticError(name.loc, "undeclared identifier '" + name.text + "'");
      LValue target{name.text, nullptr};
      if (isPunct("[")) {
        if (*kind == SymbolKind::Scalar) {
          throw SemanticError(name.loc, "'" + name.text + "' is not an array");
        }
        next();
        target.index = parseExpr();
        expectPunct("]");
      } else if (*kind != SymbolKind::Scalar) {
        throw SemanticError(name.loc, "array '" + name.text + "' must be indexed");
      }
      expectPunct("=");
      if (isCallAhead()) {
        if (target.index) {
          throw SemanticError(loc, "call results can only be stored in scalars");
        }
        Stmt call = parseCall(loc);
        auto& c = std::get<Call>(call.node);
        requireFunctionShape(c, true, loc);
        c.result = name.text;
        block.stmts.push_back(std::move(call));
        return;
      }
      ExprPtr value = parseExpr();
      const Token& semi = expectPunct(";");
      emitAssign(block, std::move(target), value, false, loc, semi.loc);
      return;
    }
    throw ParseError(loc, "expected statement, found '" + describe(first) + "'");
  }

  Stmt parseIf() {
    SourceLoc loc = expectWord("if").loc;
    expectPunct("(");
    If s;
    s.cond = parseCondition();
    expectPunct(")");
    s.thenBlock = parseBlock();
    if (isWord("else")) {
      next();
      s.hasElse = true;
      if (isWord("if")) {
        s.elseBlock.stmts.push_back(parseIf());
      } else {
        s.elseBlock = parseBlock();
      }
    }
    return Stmt{std::move(s), loc};
  }

  ExprPtr parseCondition() {
    ExprPtr cond = parseExpr();
    if (containsSharedRead(*cond)) {
      throw SemanticError(cond->loc,
                          "shared array read in a condition; load it into a local first");
    }
    return cond;
  }

  // Lowers an assignment. `x = A[e]` stays a single load; anything else has
  // its shared reads hoisted into temporaries, and the residual statement is
  // then located at its terminating ';' so statement locations stay ordered.
  void emitAssign(Block& block, LValue target, ExprPtr value, bool declares,
                  const SourceLoc& loc, const SourceLoc& semiLoc) {
    bool plainLoad = !target.index && std::holds_alternative<ArrayRead>(value->node) &&
                     isSharedArray(std::get<ArrayRead>(value->node).array) &&
                     !containsSharedRead(*std::get<ArrayRead>(value->node).index);
    if (plainLoad) {
      block.stmts.push_back(Stmt{Assign{std::move(target), value, declares}, loc});
      return;
    }
    std::vector<Stmt> hoisted;
    if (target.index) target.index = hoistSharedReads(target.index, hoisted);
    value = hoistSharedReads(value, hoisted);
    SourceLoc at = hoisted.empty() ? loc : semiLoc;
    for (Stmt& s : hoisted) block.stmts.push_back(std::move(s));
    block.stmts.push_back(Stmt{Assign{std::move(target), value, declares}, at});
  }

  bool isSharedArray(const std::string& name) const {
    auto k = lookup(name);
    return k && *k == SymbolKind::SharedArray;
  }

  bool containsSharedRead(const Expr& e) const {
    return std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ArrayRead>) {
            return isSharedArray(n.array) || containsSharedRead(*n.index);
          } else if constexpr (std::is_same_v<T, Unary>) {
            return containsSharedRead(*n.operand);
          } else if constexpr (std::is_same_v<T, Binary>) {
            return containsSharedRead(*n.lhs) || containsSharedRead(*n.rhs);
          } else {
            return false;
          }
        },
        e.node);
  }

  // Post-order, left to right: this matches the order of the reads' closing
  // brackets in the source, so the temporaries' locations increase.
  ExprPtr hoistSharedReads(const ExprPtr& e, std::vector<Stmt>& out) {
    return std::visit(
        [&](const auto& n) -> ExprPtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ArrayRead>) {
            ExprPtr index = hoistSharedReads(n.index, out);
            ArrayRead read{n.array, index, n.close};
            if (!isSharedArray(n.array)) return makeExpr(std::move(read), e->loc);
            std::string temp = freshTemp();
            scopes_.back()[temp] = SymbolKind::Scalar;
            out.push_back(Stmt{Assign{LValue{temp, nullptr}, makeExpr(std::move(read), e->loc), true},
                               n.close});
            return makeExpr(VarRef{temp}, e->loc);
          } else if constexpr (std::is_same_v<T, Unary>) {
            return makeExpr(Unary{n.op, hoistSharedReads(n.operand, out)}, e->loc);
          } else if constexpr (std::is_same_v<T, Binary>) {
            ExprPtr lhs = hoistSharedReads(n.lhs, out);
            ExprPtr rhs = hoistSharedReads(n.rhs, out);
            return makeExpr(Binary{n.op, lhs, rhs}, e->loc);
          } else {
            return e;
          }
        },
        e->node);
  }

  bool isCallAhead() const {
    return at(TokenKind::Ident) && isPunct("(", 1) && !kKeywords.count(peek().text);
  }

  Stmt parseCall(const SourceLoc& loc) {
    const Token& name = next();
    if (inFunction_) {
      throw SemanticError(name.loc, "device functions cannot call other functions");
    }
    auto fit = functionIndex_.find(name.text);
    if (fit == functionIndex_.end()) {
      throw SemanticError(name.loc, "call to undeclared function '" + name.text + "'");
    }
    const Function& fn = functions_[fit->second];
    Call call;
    call.callee = name.text;
    expectPunct("(");
    if (!isPunct(")")) {
      for (;;) {
        std::size_t i = call.args.size();
        if (i >= fn.params.size()) {
          throw SemanticError(peek().loc, "too many arguments to '" + fn.name + "'");
        }
        const Param& p = fn.params[i];
        if (p.isArray) {
          const Token& arg = expectIdentifier("array argument");
          auto kind = lookup(arg.text);
          SymbolKind want = p.space == MemorySpace::Shared ? SymbolKind::SharedArray
                                                           : SymbolKind::PrivateArray;
          if (!kind) throw SemanticError(arg.loc, "undeclared identifier '" + arg.text + "'");
          if (*kind != want) {
            throw SemanticError(arg.loc, "argument '" + arg.text +
                                             "' does not match array parameter '" + p.name + "'");
          }
          call.args.push_back(makeExpr(VarRef{arg.text}, arg.loc));
        } else {
          ExprPtr arg = parseExpr();
          if (containsSharedRead(*arg)) {
            throw SemanticError(arg->loc,
                                "shared array read in a call argument; load it into a local first");
          }
          call.args.push_back(arg);
        }
        if (!isPunct(",")) break;
        next();
      }
    }
    expectPunct(")");
    expectPunct(";");
    if (call.args.size() != fn.params.size()) {
      throw SemanticError(name.loc, "wrong number of arguments to '" + fn.name + "'");
    }
    return Stmt{std::move(call), loc};
  }

  void requireFunctionShape(const Call& c, bool wantsValue, const SourceLoc& loc) {
    const Function& fn = functions_[functionIndex_.at(c.callee)];
    if (wantsValue && !fn.returnsValue) {
      throw SemanticError(loc, "function '" + fn.name + "' does not return a value");
    }
  }

  // -- expressions ----------------------------------------------------------
  ExprPtr parseExpr() { return parseBinary(0); }

  static int precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return -1;
  }
  static BinaryOp toBinaryOp(std::string_view op) {
    if (op == "||") return BinaryOp::Or;
    if (op == "&&") return BinaryOp::And;
    if (op == "==") return BinaryOp::Eq;
    if (op == "!=") return BinaryOp::Ne;
    if (op == "<") return BinaryOp::Lt;
    if (op == "<=") return BinaryOp::Le;
    if (op == ">") return BinaryOp::Gt;
    if (op == ">=") return BinaryOp::Ge;
    if (op == "+") return BinaryOp::Add;
    if (op == "-") return BinaryOp::Sub;
    if (op == "*") return BinaryOp::Mul;
    if (op == "/") return BinaryOp::Div;
    return BinaryOp::Mod;
  }

  ExprPtr parseBinary(int minPrec) {
    ExprPtr lhs = parseUnary();
    for (;;) {
      const Token& t = peek();
      if (t.kind != TokenKind::Punct) break;
      int prec = precedence(t.text);
      if (prec < 0 || prec < minPrec) break;
      next();
      ExprPtr rhs = parseBinary(prec + 1);
      SourceLoc loc = lhs->loc;
      lhs = makeExpr(Binary{toBinaryOp(t.text), lhs, rhs}, loc);
    }
    return lhs;
  }

  ExprPtr parseUnary() {
    if (isPunct("-") || isPunct("!")) {
      const Token& op = next();
      ExprPtr operand = parseUnary();
      return makeExpr(Unary{op.text == "-" ? UnaryOp::Neg : UnaryOp::Not, operand}, op.loc);
    }
    return parsePrimary();
  }

  ExprPtr parsePrimary() {
    const Token& t = peek();
    if (t.kind == TokenKind::Int) {
      return makeExpr(IntLit{expectInt()}, t.loc);
    }
    if (isPunct("(")) {
      next();
      ExprPtr inner = parseExpr();
      expectPunct(")");
      return inner;
    }
    if (t.kind == TokenKind::Ident) {
      if (auto b = builtinFor(t.text)) {
        next();
        return makeExpr(BuiltinRef{*b}, t.loc);
      }
      const Token& name = expectIdentifier("expression");
      if (functionIndex_.count(name.text)) {
        throw SemanticError(name.loc, "call to '" + name.text +
                                          "' must be a statement or an initializer");
      }
      auto kind = lookup(name.text);
      if (!kind) throw SemanticError(name.loc, "undeclared identifier '" + name.text + "'");
      if (isPunct("[")) {
        if (*kind == SymbolKind::Scalar) {
          throw SemanticError(name.loc, "'" + name.text + "' is not an array");
        }
        next();
        ExprPtr index = parseExpr();
        const Token& close = expectPunct("]");
        return makeExpr(ArrayRead{name.text, index, close.loc}, name.loc);
      }
      if (*kind != SymbolKind::Scalar) {
        throw SemanticError(name.loc, "array '" + name.text + "' must be indexed");
      }
      return makeExpr(VarRef{name.text}, name.loc);
    }
    throw ParseError(t.loc, "expected expression, found '" + describe(t) + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOptions options_;
  std::vector<std::unordered_map<std::string, SymbolKind>> scopes_;
  std::vector<Function> functions_;
  std::unordered_map<std::string, std::size_t> functionIndex_;
  std::set<std::string, std::less<>> usedNames_;
  int tempCounter_ = 0;
  bool inFunction_ = false;
};

}  // namespace

Kernel parse(const std::string& text, const ParseOptions& options) {
  Parser parser(detail::tokenize(text, options.file), options);
  return parser.parseFile();
}

}  // namespace barrierfix
