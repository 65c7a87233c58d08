#ifndef HORIZON_EXPR_HPP
#define HORIZON_EXPR_HPP

#include <memory>
#include <variant>
#include <vector>

#include "horizon/json_io.hpp"
#include "horizon/polyhedron.hpp"

namespace horizon {

struct FuncExpr;
using FuncPtr = std::shared_ptr<const FuncExpr>;

// Atoms. Every smooth atom carries an exact gradient rule (see subdiff.hpp).
struct AffineAtom {
  Vector c;
  double beta = 0.0;
};
struct QuadAtom {
  Matrix Q;  // x^T Q x
};
struct ExpAffineAtom {
  Vector c;
  double beta = 0.0;  // exp(<c,x> + beta)
};
struct PowerAbsAtom {
  Vector c;
  double beta = 0.0;
  double p = 1.0;  // |<c,x> + beta|^p, p >= 1
};
struct NormAtom {
  Index n = 0;
};
struct DistAtom {
  HPolyhedron P;
};
struct IndicatorAtom {
  HPolyhedron P;
};
// Two-piece C^1 switch on the sign of <c,x> + beta: left branch below zero,
// right branch at and above.
struct PwNode {
  Vector c;
  double beta = 0.0;
  FuncPtr left, right;
};

struct SumNode {
  std::vector<FuncPtr> terms;
};
struct ScaleNode {
  double alpha = 1.0;
  FuncPtr f;
};
struct MaxNode {
  std::vector<FuncPtr> branches;
};
struct MinNode {
  std::vector<FuncPtr> branches;
};

using FuncNode = std::variant<AffineAtom, QuadAtom, ExpAffineAtom, PowerAbsAtom, NormAtom,
                              DistAtom, IndicatorAtom, PwNode, SumNode, ScaleNode, MaxNode,
                              MinNode>;

struct FuncExpr {
  FuncNode node;
  Index dim = 0;
};

inline FuncPtr make_expr(FuncNode node, Index dim) {
  return std::make_shared<const FuncExpr>(FuncExpr{std::move(node), dim});
}

inline FuncPtr affine(const Vector& c, double beta = 0.0) {
  return make_expr(AffineAtom{c, beta}, c.size());
}
inline FuncPtr quad(const Matrix& Q) { return make_expr(QuadAtom{Q}, Q.cols()); }
inline FuncPtr exp_affine(const Vector& c, double beta = 0.0) {
  return make_expr(ExpAffineAtom{c, beta}, c.size());
}
inline FuncPtr power_abs(const Vector& c, double beta, double p) {
  if (p < 1.0) throw Error("power_abs: p must be >= 1");
  return make_expr(PowerAbsAtom{c, beta, p}, c.size());
}
inline FuncPtr norm(Index n) { return make_expr(NormAtom{n}, n); }
inline FuncPtr dist(const HPolyhedron& P) { return make_expr(DistAtom{P}, P.dim()); }
inline FuncPtr indicator(const HPolyhedron& P) {
  return make_expr(IndicatorAtom{P}, P.dim());
}
inline FuncPtr pw(const Vector& c, double beta, FuncPtr left, FuncPtr right) {
  Index n = left->dim;
  return make_expr(PwNode{c, beta, std::move(left), std::move(right)}, n);
}
inline FuncPtr sum(std::vector<FuncPtr> terms) {
  Index n = terms.empty() ? 0 : terms[0]->dim;
  return make_expr(SumNode{std::move(terms)}, n);
}
inline FuncPtr scale(double alpha, FuncPtr f) {
  if (alpha <= 0.0) throw Error("scale: alpha must be positive");
  Index n = f->dim;
  return make_expr(ScaleNode{alpha, std::move(f)}, n);
}
inline FuncPtr max_of(std::vector<FuncPtr> branches) {
  Index n = branches.empty() ? 0 : branches[0]->dim;
  return make_expr(MaxNode{std::move(branches)}, n);
}
inline FuncPtr min_of(std::vector<FuncPtr> branches) {
  Index n = branches.empty() ? 0 : branches[0]->dim;
  return make_expr(MinNode{std::move(branches)}, n);
}

inline constexpr double kPlusInf = std::numeric_limits<double>::infinity();

// Mathematical value as an extended real; +infinity arises only through
// indicators (or numeric overflow of exp, reported as +/-1e308-scale inf).
inline double eval(const FuncExpr& f, const Vector& x) {
  return std::visit(
      [&](const auto& node) -> double {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AffineAtom>) {
          return node.c.dot(x) + node.beta;
        } else if constexpr (std::is_same_v<T, QuadAtom>) {
          return x.dot(node.Q * x);
        } else if constexpr (std::is_same_v<T, ExpAffineAtom>) {
          return std::exp(node.c.dot(x) + node.beta);
        } else if constexpr (std::is_same_v<T, PowerAbsAtom>) {
          return std::pow(std::abs(node.c.dot(x) + node.beta), node.p);
        } else if constexpr (std::is_same_v<T, NormAtom>) {
          return x.norm();
        } else if constexpr (std::is_same_v<T, DistAtom>) {
          return distance_to(node.P, x);
        } else if constexpr (std::is_same_v<T, IndicatorAtom>) {
          return node.P.contains(x) ? 0.0 : kPlusInf;
        } else if constexpr (std::is_same_v<T, PwNode>) {
          double s = node.c.dot(x) + node.beta;
          return eval(s < 0.0 ? *node.left : *node.right, x);
        } else if constexpr (std::is_same_v<T, SumNode>) {
          double acc = 0.0;
          for (const FuncPtr& t : node.terms) acc += eval(*t, x);
          return acc;
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          return node.alpha * eval(*node.f, x);
        } else if constexpr (std::is_same_v<T, MaxNode>) {
          double best = -kPlusInf;
          for (const FuncPtr& b : node.branches) best = std::max(best, eval(*b, x));
          return best;
        } else {
          static_assert(std::is_same_v<T, MinNode>);
          double best = kPlusInf;
          for (const FuncPtr& b : node.branches) best = std::min(best, eval(*b, x));
          return best;
        }
      },
      f.node);
}

inline bool overflowed(double value) { return std::abs(value) > kOverflowLimit; }

// Domain membership: everything is finite except behind indicators.
inline bool in_domain(const FuncExpr& f, const Vector& x) {
  return std::visit(
      [&](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, IndicatorAtom>) {
          return node.P.contains(x);
        } else if constexpr (std::is_same_v<T, PwNode>) {
          double s = node.c.dot(x) + node.beta;
          return in_domain(s < 0.0 ? *node.left : *node.right, x);
        } else if constexpr (std::is_same_v<T, SumNode>) {
          for (const FuncPtr& t : node.terms)
            if (!in_domain(*t, x)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          return in_domain(*node.f, x);
        } else if constexpr (std::is_same_v<T, MaxNode>) {
          for (const FuncPtr& b : node.branches)
            if (!in_domain(*b, x)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, MinNode>) {
          for (const FuncPtr& b : node.branches)
            if (in_domain(*b, x)) return true;
          return node.branches.empty();
        } else {
          return true;
        }
      },
      f.node);
}

// ---- JSON round trip ------------------------------------------------------

inline Json emit_func(const FuncExpr& f);

namespace detail {

inline Json emit_children_sorted(const std::vector<FuncPtr>& children) {
  std::vector<std::string> dumped;
  std::vector<Json> parts;
  for (const FuncPtr& c : children) parts.push_back(emit_func(*c));
  std::sort(parts.begin(), parts.end(),
            [](const Json& a, const Json& b) { return a.dump() < b.dump(); });
  Json arr = Json::array();
  for (Json& p : parts) arr.push_back(std::move(p));
  return arr;
}

}  // namespace detail

// Canonical emission: sum/max/min children sorted lexicographically by their
// serialized form, so round trips are byte-stable.
inline Json emit_func(const FuncExpr& f) {
  return std::visit(
      [&](const auto& node) -> Json {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AffineAtom>) {
          return Json{{"affine", {{"c", to_json(node.c)}, {"beta", node.beta}}}};
        } else if constexpr (std::is_same_v<T, QuadAtom>) {
          return Json{{"quad", {{"Q", to_json(node.Q)}}}};
        } else if constexpr (std::is_same_v<T, ExpAffineAtom>) {
          return Json{{"exp_affine", {{"c", to_json(node.c)}, {"beta", node.beta}}}};
        } else if constexpr (std::is_same_v<T, PowerAbsAtom>) {
          return Json{{"power_abs",
                       {{"c", to_json(node.c)}, {"beta", node.beta}, {"p", node.p}}}};
        } else if constexpr (std::is_same_v<T, NormAtom>) {
          return Json{{"norm", {{"n", node.n}}}};
        } else if constexpr (std::is_same_v<T, DistAtom>) {
          return Json{{"dist", {{"polyhedron", to_json(node.P)}}}};
        } else if constexpr (std::is_same_v<T, IndicatorAtom>) {
          return Json{{"indicator", {{"polyhedron", to_json(node.P)}}}};
        } else if constexpr (std::is_same_v<T, PwNode>) {
          return Json{{"pw",
                       {{"c", to_json(node.c)},
                        {"beta", node.beta},
                        {"left", emit_func(*node.left)},
                        {"right", emit_func(*node.right)}}}};
        } else if constexpr (std::is_same_v<T, SumNode>) {
          return Json{{"sum", detail::emit_children_sorted(node.terms)}};
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          return Json{{"scale", {{"alpha", node.alpha}, {"f", emit_func(*node.f)}}}};
        } else if constexpr (std::is_same_v<T, MaxNode>) {
          return Json{{"max", detail::emit_children_sorted(node.branches)}};
        } else {
          static_assert(std::is_same_v<T, MinNode>);
          return Json{{"min", detail::emit_children_sorted(node.branches)}};
        }
      },
      f.node);
}

inline FuncPtr parse_func(const Json& j);

namespace detail {

inline std::vector<FuncPtr> parse_children(const Json& arr, const std::string& tag) {
  if (!arr.is_array() || arr.empty())
    throw ParseError(tag + ": expected nonempty array of functions");
  std::vector<FuncPtr> out;
  for (const Json& c : arr) out.push_back(parse_func(c));
  for (const FuncPtr& c : out)
    if (c->dim != out[0]->dim) throw ParseError(tag + ": children dimension mismatch");
  return out;
}

}  // namespace detail

inline FuncPtr parse_func(const Json& j) {
  if (!j.is_object() || j.size() != 1)
    throw ParseError("function node: expected single-key object");
  const std::string tag = j.begin().key();
  const Json& body = j.begin().value();

  if (tag == "affine") {
    return affine(vector_from_json(body.at("c")), body.value("beta", 0.0));
  } else if (tag == "quad") {
    Matrix Q = matrix_from_json(body.at("Q"));
    if (Q.rows() != Q.cols()) throw ParseError("quad: Q must be square");
    return quad(Q);
  } else if (tag == "exp_affine") {
    return exp_affine(vector_from_json(body.at("c")), body.value("beta", 0.0));
  } else if (tag == "power_abs") {
    return power_abs(vector_from_json(body.at("c")), body.value("beta", 0.0),
                     body.value("p", 1.0));
  } else if (tag == "norm") {
    return norm(body.at("n").get<Index>());
  } else if (tag == "dist") {
    return dist(polyhedron_from_json(body.at("polyhedron")));
  } else if (tag == "indicator") {
    return indicator(polyhedron_from_json(body.at("polyhedron")));
  } else if (tag == "pw") {
    return pw(vector_from_json(body.at("c")), body.value("beta", 0.0),
              parse_func(body.at("left")), parse_func(body.at("right")));
  } else if (tag == "sum") {
    return sum(detail::parse_children(body, tag));
  } else if (tag == "scale") {
    return scale(body.at("alpha").get<double>(), parse_func(body.at("f")));
  } else if (tag == "max") {
    return max_of(detail::parse_children(body, tag));
  } else if (tag == "min") {
    return min_of(detail::parse_children(body, tag));
  }
  throw ParseError("unknown function tag '" + tag + "'");
}

}  // namespace horizon

#endif  // HORIZON_EXPR_HPP
