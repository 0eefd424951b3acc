#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ccgnli/term.hpp"
#include "ccgnli/util.hpp"

namespace ccgnli {

// Congruence closure over ground terms: constants, numerals, and
// applications of them. Tracks asserted equalities, closes under
// f(a)=f(b) when a=b, and flags a clash when two distinct numeric
// literals land in one class. Copyable, so each proof branch can
// fork its own instance.
class Congruence {
public:
  void add_eq(const TermPtr& a, const TermPtr& b) {
    merge(intern(a), intern(b));
    close();
  }

  bool equal(const TermPtr& a, const TermPtr& b) {
    int x = intern(a), y = intern(b);
    close();
    return find(x) == find(y);
  }

  // Two distinct numeric literals were identified.
  bool num_clash() const { return clash_; }

  int intern(const TermPtr& t) {
    std::string key = ground_key(t);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    Node n;
    n.key = key;
    if (t->kind == TermKind::App) {
      n.is_app = true;
      n.fun = intern(t->a);
      n.arg = intern(t->b);
    } else if (t->kind == TermKind::Num) {
      n.has_num = true;
      n.num = t->value;
      n.unit = t->unit;
    }
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(n));
    parent_.push_back(id);
    ids_.emplace(std::move(key), id);
    return id;
  }

private:
  struct Node {
    std::string key;
    bool is_app{};
    int fun{}, arg{};
    bool has_num{};
    Rational num;
    std::string unit;
  };

  static std::string ground_key(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Const: return "c:" + t->name;
      case TermKind::Num: return "n:" + t->value.str() + ":" + t->unit;
      case TermKind::App:
        return "(" + ground_key(t->a) + " " + ground_key(t->b) + ")";
      default:
        throw Error("congruence closure handles ground terms only");
    }
  }

  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void merge(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return;
    const Node &na = nodes_[ra], &nb = nodes_[rb];
    if (na.has_num && nb.has_num &&
        (na.num != nb.num || na.unit != nb.unit))
      clash_ = true;
    parent_[ra] = rb;
    if (na.has_num && !nb.has_num) {
      nodes_[rb].has_num = true;
      nodes_[rb].num = na.num;
      nodes_[rb].unit = na.unit;
    }
  }

  // Merge applications whose function and argument classes coincide,
  // repeating until no signature collides.
  void close() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::map<std::pair<int, int>, int> sig;
      for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
        if (!nodes_[i].is_app) continue;
        std::pair<int, int> s{find(nodes_[i].fun), find(nodes_[i].arg)};
        auto it = sig.find(s);
        if (it == sig.end()) {
          sig.emplace(s, i);
        } else if (find(it->second) != find(i)) {
          merge(it->second, i);
          changed = true;
        }
      }
    }
  }

  std::map<std::string, int> ids_;
  std::vector<Node> nodes_;
  std::vector<int> parent_;
  bool clash_{};
};

}  // namespace ccgnli
