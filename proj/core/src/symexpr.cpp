#include "srcartan/symexpr.hpp"

#include <cmath>
#include <sstream>

#include "srcartan/errors.hpp"

namespace srcartan {

EvaluationError::EvaluationError(const std::string& what, std::vector<double> point)
    : Error([&] {
        std::ostringstream os;
        os << what << " at point (";
        for (std::size_t i = 0; i < point.size(); ++i) os << (i ? ", " : "") << point[i];
        os << ")";
        return os.str();
      }()),
      point_(std::move(point)) {}

}  // namespace srcartan

namespace srcartan::sym {

Chart::Chart(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = i + 1; j < names_.size(); ++j) {
      if (names_[i] == names_[j]) throw SchemaError("chart variable '" + names_[i] + "' repeated");
    }
  }
}

std::optional<std::size_t> Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

struct Expr::Node {
  Op op = Op::kConst;
  Rational value;
  std::size_t index = 0;
  int exponent = 0;
  Expr a{nullptr};
  Expr b{nullptr};
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

const NodePtr& zero_node() {
  static const NodePtr node = [] {
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::kConst;
    n->value = 0;
    return n;
  }();
  return node;
}

bool is_perfect_square(const mpz_class& z) { return z >= 0 && mpz_perfect_square_p(z.get_mpz_t()); }

mpz_class int_sqrt(const mpz_class& z) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  return r;
}

Rational rational_pow(const Rational& base, int k) {
  Rational out = 1;
  Rational b = k < 0 ? Rational(1 / base) : base;
  for (int i = 0; i < std::abs(k); ++i) out *= b;
  return out;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(const Rational& value) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = value;
  n->value.canonicalize();
  node_ = std::move(n);
}

Expr::Expr(long value) : Expr(Rational(value)) {}

Expr Expr::variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::kVar;
  n->index = index;
  return Expr(NodePtr(std::move(n)));
}

Op Expr::op() const noexcept { return node_->op; }
const Rational& Expr::value() const { return node_->value; }
std::size_t Expr::index() const { return node_->index; }
int Expr::exponent() const { return node_->exponent; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

bool Expr::is_zero() const noexcept { return op() == Op::kConst && node_->value == 0; }
bool Expr::is_one() const noexcept { return op() == Op::kConst && node_->value == 1; }

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  if (op() != other.op()) return false;
  switch (op()) {
    case Op::kConst:
      return value() == other.value();
    case Op::kVar:
      return index() == other.index();
    case Op::kPow:
      return exponent() == other.exponent() && lhs() == other.lhs();
    case Op::kNeg:
    case Op::kSqrt:
    case Op::kSin:
    case Op::kCos:
    case Op::kExp:
      return lhs() == other.lhs();
    default:
      return lhs() == other.lhs() && rhs() == other.rhs();
  }
}

struct ExprFactory {
  static Expr build(Op op, const Expr& a, const Expr& b, int exponent);
};

namespace {

Expr make(Op op, const Expr& a, const Expr& b = Expr(), int exponent = 0) {
  return ExprFactory::build(op, a, b, exponent);
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return make(Op::kAdd, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() - b.value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return make(Op::kSub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return make(Op::kMul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && !b.is_zero()) return Expr(a.value() / b.value());
  if (a.is_zero() && !b.is_zero()) return Expr();
  if (b.is_one()) return a;
  return make(Op::kDiv, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(Rational(-a.value()));
  if (a.op() == Op::kNeg) return a.lhs();
  return make(Op::kNeg, a);
}

Expr pow(const Expr& a, int k) {
  if (k == 0) return Expr(1L);
  if (k == 1) return a;
  if (a.is_constant() && (k > 0 || !a.is_zero())) return Expr(rational_pow(a.value(), k));
  return make(Op::kPow, a, Expr(), k);
}

Expr sqrt(const Expr& a) {
  if (a.is_constant()) {
    const Rational& v = a.value();
    if (is_perfect_square(v.get_num()) && is_perfect_square(v.get_den())) {
      return Expr(Rational(int_sqrt(v.get_num()), int_sqrt(v.get_den())));
    }
  }
  return make(Op::kSqrt, a);
}

Expr sin(const Expr& a) { return a.is_zero() ? Expr() : make(Op::kSin, a); }
Expr cos(const Expr& a) { return a.is_zero() ? Expr(1L) : make(Op::kCos, a); }
Expr exp(const Expr& a) { return a.is_zero() ? Expr(1L) : make(Op::kExp, a); }

Expr ExprFactory::build(Op op, const Expr& a, const Expr& b, int exponent) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = a;
  n->b = b;
  n->exponent = exponent;
  return Expr(NodePtr(std::move(n)));
}

Expr diff(const Expr& e, std::size_t var) {
  switch (e.op()) {
    case Op::kConst:
      return Expr();
    case Op::kVar:
      return e.index() == var ? Expr(1L) : Expr();
    case Op::kAdd:
      return diff(e.lhs(), var) + diff(e.rhs(), var);
    case Op::kSub:
      return diff(e.lhs(), var) - diff(e.rhs(), var);
    case Op::kMul:
      return diff(e.lhs(), var) * e.rhs() + e.lhs() * diff(e.rhs(), var);
    case Op::kDiv: {
      const Expr da = diff(e.lhs(), var);
      const Expr db = diff(e.rhs(), var);
      if (db.is_zero()) return da / e.rhs();
      return (da * e.rhs() - e.lhs() * db) / pow(e.rhs(), 2);
    }
    case Op::kNeg:
      return -diff(e.lhs(), var);
    case Op::kPow: {
      const int k = e.exponent();
      return Expr(static_cast<long>(k)) * pow(e.lhs(), k - 1) * diff(e.lhs(), var);
    }
    case Op::kSqrt:
      return diff(e.lhs(), var) / (Expr(2L) * e);
    case Op::kSin:
      return cos(e.lhs()) * diff(e.lhs(), var);
    case Op::kCos:
      return -(sin(e.lhs()) * diff(e.lhs(), var));
    case Op::kExp:
      return e * diff(e.lhs(), var);
  }
  return Expr();
}

Expr substitute(const Expr& e, std::span<const Expr> replacements) {
  switch (e.op()) {
    case Op::kConst:
      return e;
    case Op::kVar:
      if (e.index() >= replacements.size()) {
        throw std::out_of_range("substitute: variable index outside replacement list");
      }
      return replacements[e.index()];
    case Op::kAdd:
      return substitute(e.lhs(), replacements) + substitute(e.rhs(), replacements);
    case Op::kSub:
      return substitute(e.lhs(), replacements) - substitute(e.rhs(), replacements);
    case Op::kMul:
      return substitute(e.lhs(), replacements) * substitute(e.rhs(), replacements);
    case Op::kDiv:
      return substitute(e.lhs(), replacements) / substitute(e.rhs(), replacements);
    case Op::kNeg:
      return -substitute(e.lhs(), replacements);
    case Op::kPow:
      return pow(substitute(e.lhs(), replacements), e.exponent());
    case Op::kSqrt:
      return sqrt(substitute(e.lhs(), replacements));
    case Op::kSin:
      return sin(substitute(e.lhs(), replacements));
    case Op::kCos:
      return cos(substitute(e.lhs(), replacements));
    case Op::kExp:
      return exp(substitute(e.lhs(), replacements));
  }
  return e;
}

namespace {

double eval_node(const Expr& e, std::span<const double> point) {
  auto fail = [&](const std::string& what) -> double {
    throw EvaluationError(what, std::vector<double>(point.begin(), point.end()));
  };
  switch (e.op()) {
    case Op::kConst:
      return e.value().get_d();
    case Op::kVar:
      if (e.index() >= point.size()) fail("variable index outside point");
      return point[e.index()];
    case Op::kAdd:
      return eval_node(e.lhs(), point) + eval_node(e.rhs(), point);
    case Op::kSub:
      return eval_node(e.lhs(), point) - eval_node(e.rhs(), point);
    case Op::kMul:
      return eval_node(e.lhs(), point) * eval_node(e.rhs(), point);
    case Op::kDiv: {
      const double den = eval_node(e.rhs(), point);
      if (den == 0.0) return fail("division by zero");
      return eval_node(e.lhs(), point) / den;
    }
    case Op::kNeg:
      return -eval_node(e.lhs(), point);
    case Op::kPow: {
      const double base = eval_node(e.lhs(), point);
      if (base == 0.0 && e.exponent() < 0) return fail("division by zero");
      return std::pow(base, e.exponent());
    }
    case Op::kSqrt: {
      const double v = eval_node(e.lhs(), point);
      if (v < 0.0) return fail("square root of a negative number");
      return std::sqrt(v);
    }
    case Op::kSin:
      return std::sin(eval_node(e.lhs(), point));
    case Op::kCos:
      return std::cos(eval_node(e.lhs(), point));
    case Op::kExp:
      return std::exp(eval_node(e.lhs(), point));
  }
  return 0.0;
}

void print(const Expr& e, const Chart& chart, std::ostream& os) {
  auto binary = [&](const char* op) {
    os << '(';
    print(e.lhs(), chart, os);
    os << ' ' << op << ' ';
    print(e.rhs(), chart, os);
    os << ')';
  };
  auto call = [&](const char* fn) {
    os << fn << '(';
    print(e.lhs(), chart, os);
    os << ')';
  };
  switch (e.op()) {
    case Op::kConst:
      if (e.value() >= 0 && e.value().get_den() == 1) {
        os << e.value().get_str();
      } else {
        os << '(' << e.value().get_str() << ')';
      }
      return;
    case Op::kVar:
      if (e.index() < chart.dimension()) {
        os << chart.name(e.index());
      } else {
        os << "$" << e.index();
      }
      return;
    case Op::kAdd:
      return binary("+");
    case Op::kSub:
      return binary("-");
    case Op::kMul:
      return binary("*");
    case Op::kDiv:
      return binary("/");
    case Op::kNeg:
      os << "(-";
      print(e.lhs(), chart, os);
      os << ')';
      return;
    case Op::kPow:
      os << '(';
      print(e.lhs(), chart, os);
      os << ")^";
      if (e.exponent() < 0) {
        os << '(' << e.exponent() << ')';
      } else {
        os << e.exponent();
      }
      return;
    case Op::kSqrt:
      return call("sqrt");
    case Op::kSin:
      return call("sin");
    case Op::kCos:
      return call("cos");
    case Op::kExp:
      return call("exp");
  }
}

}  // namespace

double eval(const Expr& e, std::span<const double> point) {
  const double v = eval_node(e, point);
  if (!std::isfinite(v)) {
    throw EvaluationError("non-finite value", std::vector<double>(point.begin(), point.end()));
  }
  return v;
}

std::string to_string(const Expr& e, const Chart& chart) {
  std::ostringstream os;
  print(e, chart, os);
  return os.str();
}

bool depends_on(const Expr& e, std::size_t var) {
  switch (e.op()) {
    case Op::kConst:
      return false;
    case Op::kVar:
      return e.index() == var;
    case Op::kNeg:
    case Op::kPow:
    case Op::kSqrt:
    case Op::kSin:
    case Op::kCos:
    case Op::kExp:
      return depends_on(e.lhs(), var);
    default:
      return depends_on(e.lhs(), var) || depends_on(e.rhs(), var);
  }
}

std::size_t variable_bound(const Expr& e) {
  switch (e.op()) {
    case Op::kConst:
      return 0;
    case Op::kVar:
      return e.index() + 1;
    case Op::kNeg:
    case Op::kPow:
    case Op::kSqrt:
    case Op::kSin:
    case Op::kCos:
    case Op::kExp:
      return variable_bound(e.lhs());
    default:
      return std::max(variable_bound(e.lhs()), variable_bound(e.rhs()));
  }
}

}  // namespace srcartan::sym
