#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "ccgnli/util.hpp"

namespace ccgnli {

enum class TypeKind { Entity, Event, Degree, Truth, Arrow };

class SemType;
using TypePtr = std::shared_ptr<const SemType>;

// Simple types over four base sorts plus right-associated arrows.
// Values are immutable and shared; compare structurally.
class SemType {
public:
  TypeKind kind;
  TypePtr from, to;  // set iff kind == Arrow

  static TypePtr entity() { return base(TypeKind::Entity); }
  static TypePtr event() { return base(TypeKind::Event); }
  static TypePtr degree() { return base(TypeKind::Degree); }
  static TypePtr truth() { return base(TypeKind::Truth); }

  static TypePtr arrow(TypePtr a, TypePtr b) {
    auto t = std::make_shared<SemType>();
    t->kind = TypeKind::Arrow;
    t->from = std::move(a);
    t->to = std::move(b);
    return t;
  }

private:
  static TypePtr base(TypeKind k) {
    static TypePtr cache[4] = {make(TypeKind::Entity), make(TypeKind::Event),
                               make(TypeKind::Degree), make(TypeKind::Truth)};
    return cache[static_cast<int>(k)];
  }
  static TypePtr make(TypeKind k) {
    auto t = std::make_shared<SemType>();
    t->kind = k;
    return t;
  }
};

inline bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->kind != TypeKind::Arrow) return true;
  return type_equal(a->from, b->from) && type_equal(a->to, b->to);
}

inline std::string type_str(const TypePtr& t) {
  if (!t) return "?";
  switch (t->kind) {
    case TypeKind::Entity: return "E";
    case TypeKind::Event: return "V";
    case TypeKind::Degree: return "D";
    case TypeKind::Truth: return "T";
    case TypeKind::Arrow: {
      std::string lhs = type_str(t->from);
      if (t->from && t->from->kind == TypeKind::Arrow) lhs = "(" + lhs + ")";
      return lhs + ">" + type_str(t->to);
    }
  }
  return "?";
}

// Parses "E", "V>T", "(E>T)>T". '>' associates to the right.
inline TypePtr parse_type(std::string_view s, size_t* pos_io = nullptr) {
  size_t pos = pos_io ? *pos_io : 0;
  auto skip = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  };
  auto atom = [&]() -> TypePtr {
    skip();
    if (pos >= s.size()) throw ParseError("type expected", (int)pos);
    char c = s[pos];
    if (c == '(') {
      ++pos;
      TypePtr inner = parse_type(s, &pos);
      skip();
      if (pos >= s.size() || s[pos] != ')')
        throw ParseError("expected ) in type", (int)pos);
      ++pos;
      return inner;
    }
    ++pos;
    switch (c) {
      case 'E': return SemType::entity();
      case 'V': return SemType::event();
      case 'D': return SemType::degree();
      case 'T': return SemType::truth();
      default: throw ParseError(std::string("bad type letter: ") + c, (int)pos);
    }
  };
  TypePtr lhs = atom();
  skip();
  if (pos < s.size() && s[pos] == '>') {
    ++pos;
    TypePtr rhs = parse_type(s, &pos);
    lhs = SemType::arrow(lhs, rhs);
  }
  if (pos_io) {
    *pos_io = pos;
  } else {
    skip();
    if (pos != s.size()) throw ParseError("trailing characters in type", (int)pos);
  }
  return lhs;
}

}  // namespace ccgnli
