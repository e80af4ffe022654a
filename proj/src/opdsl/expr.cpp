#include <charconv>
#include <cmath>
#include <memory>
#include <string>

#include "sparkdet/error.hpp"
#include "sparkdet/registry.hpp"

namespace sparkdet {

namespace {

struct Node {
  enum class Op { Const, X, Y, Neg, Add, Sub, Mul, Div, Min, Max, Abs };
  Op op;
  double constant = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double eval(double x, double y) const {
    switch (op) {
      case Op::Const: return constant;
      case Op::X: return x;
      case Op::Y: return y;
      case Op::Neg: return -lhs->eval(x, y);
      case Op::Add: return lhs->eval(x, y) + rhs->eval(x, y);
      case Op::Sub: return lhs->eval(x, y) - rhs->eval(x, y);
      case Op::Mul: return lhs->eval(x, y) * rhs->eval(x, y);
      case Op::Div: return lhs->eval(x, y) / rhs->eval(x, y);
      case Op::Min: return std::fmin(lhs->eval(x, y), rhs->eval(x, y));
      case Op::Max: return std::fmax(lhs->eval(x, y), rhs->eval(x, y));
      case Op::Abs: return std::fabs(lhs->eval(x, y));
    }
    return 0.0;
  }
};

using NodePtr = std::shared_ptr<const Node>;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::unknown_operator, "expr:" + std::string(text_) + ": " + why +
                                            " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  static NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    return std::make_shared<const Node>(Node{op, 0.0, std::move(lhs), std::move(rhs)});
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (accept("+")) {
        lhs = make(Node::Op::Add, lhs, term());
      } else if (accept("-") || accept("−")) {
        lhs = make(Node::Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (accept("*") || accept("×")) {
        lhs = make(Node::Op::Mul, lhs, unary());
      } else if (accept("/") || accept("÷")) {
        lhs = make(Node::Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept("-") || accept("−")) return make(Node::Op::Neg, unary());
    return atom();
  }

  NodePtr call(Node::Op op, bool binary) {
    expect("(");
    NodePtr a = expr();
    NodePtr b;
    if (binary) {
      expect(",");
      b = expr();
    }
    expect(")");
    return make(op, a, b);
  }

  NodePtr atom() {
    skip_space();
    if (accept("(")) {
      NodePtr inner = expr();
      expect(")");
      return inner;
    }
    if (accept("min")) return call(Node::Op::Min, true);
    if (accept("max")) return call(Node::Op::Max, true);
    if (accept("abs")) return call(Node::Op::Abs, false);
    if (accept("x")) return make(Node::Op::X);
    if (accept("y")) return make(Node::Op::Y);
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("expected a number, variable or call");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return std::make_shared<const Node>(Node{Node::Op::Const, value, nullptr, nullptr});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Operator parse_expression(std::string_view formula) {
  NodePtr root = Parser(formula).parse();
  return Operator("expr:" + std::string(formula), Sort::Num, Sort::Num, Sort::Float,
                  [root](const Value& x, const Value& y) {
                    return Value::real(root->eval(x.as_number(), y.as_number()));
                  });
}

}  // namespace sparkdet
