#include "robreg/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace robreg::expr {

namespace {

NodePtr make_constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = v;
  return n;
}

NodePtr make_node(NodeKind kind, std::vector<NodePtr> children) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = std::move(children);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, int dimension) : text_(text), dimension_(dimension) {}

  NodePtr parse_all() {
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("syntax error: " + what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(NodeKind::Add, {lhs, parse_term()});
      } else if (accept('-')) {
        lhs = make_node(NodeKind::Sub, {lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(NodeKind::Mul, {lhs, parse_factor()});
      } else if (accept('/')) {
        lhs = make_node(NodeKind::Div, {lhs, parse_factor()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    if (accept('-')) {
      NodePtr operand = parse_factor();
      // Negative literals fold into constants so printed trees re-parse identically.
      if (operand->kind == NodeKind::Constant) return make_constant(-operand->value);
      return make_node(NodeKind::Neg, {operand});
    }
    NodePtr base = parse_atom();
    if (accept('^')) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '-') fail("negative exponent");
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent");
      unsigned exponent = 0;
      const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, exponent);
      if (ec != std::errc() || ptr != text_.data() + pos_) fail("exponent out of range");
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::IntPow;
      n->exponent = exponent;
      n->children = {base};
      return n;
    }
    return base;
  }

  std::string read_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return make_constant(value);
  }

  NodePtr parse_call(NodeKind kind, int arity) {
    expect('(');
    std::vector<NodePtr> args;
    args.push_back(parse_expr());
    for (int i = 1; i < arity; ++i) {
      expect(',');
      args.push_back(parse_expr());
    }
    expect(')');
    return make_node(kind, std::move(args));
  }

  NodePtr parse_polynomial() {
    const std::size_t start = pos_;
    NodePtr p = parse_expr();
    if (!is_polynomial(*p)) {
      pos_ = start;
      fail("piecewise guards must be polynomial (+, -, *, ^ only)");
    }
    return p;
  }

  Comparison parse_comparison() {
    skip_ws();
    if (accept('<')) return accept('=') ? Comparison::LessEqual : Comparison::Less;
    if (accept('>')) return accept('=') ? Comparison::GreaterEqual : Comparison::Greater;
    if (accept('=')) return Comparison::Equal;
    fail("expected comparison operator");
  }

  NodePtr parse_piecewise() {
    expect('{');
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Piecewise;
    do {
      Guard g;
      g.lhs = parse_polynomial();
      g.cmp = parse_comparison();
      g.rhs = parse_polynomial();
      expect(':');
      g.branch = parse_expr();
      expect(';');
      n->guards.push_back(std::move(g));
    } while (!peek('}'));
    expect('}');
    return n;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      if (c == 'x' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        ++pos_;
        const std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        int index = 0;
        const auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, index);
        if (ec != std::errc() || index < 1 || index > dimension_) {
          pos_ = start;
          fail("variable index out of range (dimension " + std::to_string(dimension_) + ")");
        }
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Variable;
        n->index = index - 1;
        return n;
      }
      const std::string name = read_identifier();
      if (name == "sqrt") return parse_call(NodeKind::Sqrt, 1);
      if (name == "abs") return parse_call(NodeKind::Abs, 1);
      if (name == "min") return parse_call(NodeKind::Min, 2);
      if (name == "max") return parse_call(NodeKind::Max, 2);
      if (name == "piecewise") return parse_piecewise();
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  int dimension_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, std::span<const double> x) {
  switch (n.kind) {
    case NodeKind::Constant:
      return n.value;
    case NodeKind::Variable:
      return x[static_cast<std::size_t>(n.index)];
    case NodeKind::Neg:
      return -eval_node(*n.children[0], x);
    case NodeKind::Add:
      return eval_node(*n.children[0], x) + eval_node(*n.children[1], x);
    case NodeKind::Sub:
      return eval_node(*n.children[0], x) - eval_node(*n.children[1], x);
    case NodeKind::Mul:
      return eval_node(*n.children[0], x) * eval_node(*n.children[1], x);
    case NodeKind::Div: {
      const double den = eval_node(*n.children[1], x);
      if (den == 0.0) throw DomainError("division by zero");
      return eval_node(*n.children[0], x) / den;
    }
    case NodeKind::IntPow: {
      const double base = eval_node(*n.children[0], x);
      double result = 1.0;
      for (unsigned k = 0; k < n.exponent; ++k) result *= base;
      return result;
    }
    case NodeKind::Sqrt: {
      const double arg = eval_node(*n.children[0], x);
      if (arg < 0.0) throw DomainError("sqrt of negative value");
      return std::sqrt(arg);
    }
    case NodeKind::Abs:
      return std::abs(eval_node(*n.children[0], x));
    case NodeKind::Min:
      return std::min(eval_node(*n.children[0], x), eval_node(*n.children[1], x));
    case NodeKind::Max:
      return std::max(eval_node(*n.children[0], x), eval_node(*n.children[1], x));
    case NodeKind::Piecewise:
      for (const Guard& g : n.guards) {
        if (compare(eval_node(*g.lhs, x), g.cmp, eval_node(*g.rhs, x))) return eval_node(*g.branch, x);
      }
      throw DomainError("no piecewise guard satisfied");
  }
  throw Error("corrupt expression node");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* comparison_text(Comparison c) {
  switch (c) {
    case Comparison::Less: return "<";
    case Comparison::LessEqual: return "<=";
    case Comparison::Equal: return "=";
    case Comparison::GreaterEqual: return ">=";
    case Comparison::Greater: return ">";
  }
  return "?";
}

void print_node(const Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print_node(*n.children[0], out);
    out += op;
    print_node(*n.children[1], out);
    out += ')';
  };
  auto call = [&](const char* name) {
    out += name;
    out += '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) out += ", ";
      print_node(*n.children[i], out);
    }
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Constant:
      if (n.value < 0 || std::signbit(n.value)) {
        out += "(-" + format_number(-n.value) + ")";
      } else {
        out += format_number(n.value);
      }
      return;
    case NodeKind::Variable:
      out += 'x' + std::to_string(n.index + 1);
      return;
    case NodeKind::Neg:
      out += "(-";
      print_node(*n.children[0], out);
      out += ')';
      return;
    case NodeKind::Add: binary(" + "); return;
    case NodeKind::Sub: binary(" - "); return;
    case NodeKind::Mul: binary(" * "); return;
    case NodeKind::Div: binary(" / "); return;
    case NodeKind::IntPow: {
      const Node& base = *n.children[0];
      const bool needs_parens = base.kind == NodeKind::IntPow;
      if (needs_parens) out += '(';
      print_node(base, out);
      if (needs_parens) out += ')';
      out += '^' + std::to_string(n.exponent);
      return;
    }
    case NodeKind::Sqrt: call("sqrt"); return;
    case NodeKind::Abs: call("abs"); return;
    case NodeKind::Min: call("min"); return;
    case NodeKind::Max: call("max"); return;
    case NodeKind::Piecewise:
      out += "piecewise{ ";
      for (const Guard& g : n.guards) {
        print_node(*g.lhs, out);
        out += ' ';
        out += comparison_text(g.cmp);
        out += ' ';
        print_node(*g.rhs, out);
        out += " : ";
        print_node(*g.branch, out);
        out += " ; ";
      }
      out += '}';
      return;
  }
}

bool variables_in_range(const Node& n, int dimension) {
  if (n.kind == NodeKind::Variable && (n.index < 0 || n.index >= dimension)) return false;
  for (const auto& c : n.children) {
    if (!variables_in_range(*c, dimension)) return false;
  }
  for (const auto& g : n.guards) {
    if (!variables_in_range(*g.lhs, dimension) || !variables_in_range(*g.rhs, dimension) ||
        !variables_in_range(*g.branch, dimension)) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool compare(double lhs, Comparison cmp, double rhs) {
  switch (cmp) {
    case Comparison::Less: return lhs < rhs;
    case Comparison::LessEqual: return lhs <= rhs;
    case Comparison::Equal: return lhs == rhs;
    case Comparison::GreaterEqual: return lhs >= rhs;
    case Comparison::Greater: return lhs > rhs;
  }
  return false;
}

bool is_polynomial(const Node& node) {
  switch (node.kind) {
    case NodeKind::Constant:
    case NodeKind::Variable:
      return true;
    case NodeKind::Neg:
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::IntPow:
      for (const auto& c : node.children) {
        if (!is_polynomial(*c)) return false;
      }
      return true;
    default:
      return false;
  }
}

Expression Expression::parse(std::string_view text, int dimension) {
  if (dimension < 1) throw DimensionError("expression dimension must be positive");
  return Expression(Parser(text, dimension).parse_all(), dimension);
}

Expression::Expression(NodePtr root, int dimension) : root_(std::move(root)), dimension_(dimension) {
  if (!root_) throw Error("null expression root");
  if (!variables_in_range(*root_, dimension_)) throw DimensionError("expression uses a variable beyond its dimension");
}

double Expression::evaluate(std::span<const double> point) const {
  if (point.size() != static_cast<std::size_t>(dimension_)) {
    throw DimensionError("expression expects " + std::to_string(dimension_) + " coordinates, got " +
                         std::to_string(point.size()));
  }
  return eval_node(*root_, point);
}

double Expression::evaluate(const Vec& point) const {
  return evaluate(std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
}

std::string Expression::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant:
      return a.value == b.value && std::signbit(a.value) == std::signbit(b.value);
    case NodeKind::Variable:
      return a.index == b.index;
    case NodeKind::IntPow:
      if (a.exponent != b.exponent) return false;
      break;
    default:
      break;
  }
  if (a.children.size() != b.children.size() || a.guards.size() != b.guards.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  for (std::size_t i = 0; i < a.guards.size(); ++i) {
    const Guard& ga = a.guards[i];
    const Guard& gb = b.guards[i];
    if (ga.cmp != gb.cmp || !structurally_equal(*ga.lhs, *gb.lhs) || !structurally_equal(*ga.rhs, *gb.rhs) ||
        !structurally_equal(*ga.branch, *gb.branch)) {
      return false;
    }
  }
  return true;
}

bool structurally_equal(const Expression& a, const Expression& b) {
  return a.dimension() == b.dimension() && structurally_equal(a.root(), b.root());
}

}  // namespace robreg::expr
