/*
 * Copyright (c) 2026, The Ceremony Checker Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ceremony/ltl/buchi.hh"

#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "ceremony/kernel/error.hh"

namespace ceremony::ltl {

namespace {

using Op = Formula::Op;
using FormulaSet = std::set<int>;

// Subformulas are interned by their printed form so that sets of them
// compare cheaply.
class Table {
 public:
  int Intern(const FormulaPtr& f) {
    auto [it, fresh] = ids_.try_emplace(f->ToString(), static_cast<int>(all_.size()));
    if (fresh) all_.push_back(f);
    return it->second;
  }
  const FormulaPtr& at(int id) const { return all_[id]; }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<FormulaPtr> all_;
};

struct Node {
  std::set<int> incoming;  // -1 stands for the initial pseudo-node
  FormulaSet pending;
  FormulaSet old;
  FormulaSet next;
};

struct Closed {
  std::set<int> incoming;
  FormulaSet old;
  FormulaSet next;
};

class Tableau {
 public:
  explicit Tableau(Table& table) : table_(table) {}

  void Run(int root) {
    Node start;
    start.incoming.insert(-1);
    start.pending.insert(root);
    Expand(std::move(start));
  }

  std::vector<Closed>& nodes() { return nodes_; }

 private:
  bool Contradicts(const FormulaSet& old, const FormulaPtr& lit) {
    if (lit->op() == Op::kFalse) return true;
    if (lit->op() == Op::kNot) {
      return old.count(table_.Intern(lit->lhs())) > 0;
    }
    if (lit->is_atom()) {
      return old.count(table_.Intern(Formula::Not(lit))) > 0;
    }
    return false;
  }

  void AddPending(Node& n, const FormulaPtr& f) {
    int id = table_.Intern(f);
    if (!n.old.count(id)) n.pending.insert(id);
  }

  // Work list instead of recursion: formulas here are tiny but the split
  // tree can still be deep for long chains of disjunctions.
  void Expand(Node start) {
    std::vector<Node> work{std::move(start)};
    while (!work.empty()) {
      Node n = std::move(work.back());
      work.pop_back();
      if (n.pending.empty()) {
        Close(std::move(n), work);
        continue;
      }
      int id = *n.pending.begin();
      n.pending.erase(n.pending.begin());
      FormulaPtr f = table_.at(id);
      if (f->is_literal()) {
        if (Contradicts(n.old, f)) continue;
        n.old.insert(id);
        work.push_back(std::move(n));
        continue;
      }
      switch (f->op()) {
        case Op::kAnd:
          n.old.insert(id);
          AddPending(n, f->lhs());
          AddPending(n, f->rhs());
          work.push_back(std::move(n));
          break;
        case Op::kNext:
          n.old.insert(id);
          n.next.insert(table_.Intern(f->lhs()));
          work.push_back(std::move(n));
          break;
        case Op::kOr:
        case Op::kUntil:
        case Op::kRelease: {
          Node a = n, b = std::move(n);
          a.old.insert(id);
          b.old.insert(id);
          if (f->op() == Op::kOr) {
            AddPending(a, f->lhs());
            AddPending(b, f->rhs());
          } else if (f->op() == Op::kUntil) {
            AddPending(a, f->lhs());
            a.next.insert(id);
            AddPending(b, f->rhs());
          } else {
            AddPending(a, f->rhs());
            a.next.insert(id);
            AddPending(b, f->lhs());
            AddPending(b, f->rhs());
          }
          // Pushed in reverse so the first alternative is expanded first.
          work.push_back(std::move(b));
          work.push_back(std::move(a));
          break;
        }
        default:
          throw Error(ErrorCode::kInvalidArgument,
                      "formula is not in negation normal form");
      }
    }
  }

  void Close(Node n, std::vector<Node>& work) {
    for (auto& c : nodes_) {
      if (c.old == n.old && c.next == n.next) {
        c.incoming.insert(n.incoming.begin(), n.incoming.end());
        return;
      }
    }
    int self = static_cast<int>(nodes_.size());
    nodes_.push_back(Closed{n.incoming, n.old, n.next});
    Node succ;
    succ.incoming.insert(self);
    succ.pending = n.next;
    work.push_back(std::move(succ));
  }

  Table& table_;
  std::vector<Closed> nodes_;
};

void CollectUntils(const FormulaPtr& f, Table& table, std::set<int>& out) {
  if (f->op() == Op::kUntil) out.insert(table.Intern(f));
  if (f->lhs()) CollectUntils(f->lhs(), table, out);
  if (f->rhs()) CollectUntils(f->rhs(), table, out);
}

}  // namespace

BuchiAutomaton ToBuchi(const FormulaPtr& f) {
  BuchiAutomaton out;
  out.atoms = Atoms(f);
  if (out.atoms.size() > 64) {
    throw Error(ErrorCode::kCapacityExceeded, "more than 64 atoms in formula");
  }
  std::map<std::string, int> atom_index;
  for (std::size_t i = 0; i < out.atoms.size(); ++i) {
    atom_index[out.atoms[i]->ToString()] = static_cast<int>(i);
  }

  FormulaPtr nnf = ToNnf(f);
  Table table;
  int root = table.Intern(nnf);
  std::set<int> untils;
  CollectUntils(nnf, table, untils);

  Tableau tableau(table);
  tableau.Run(root);
  const auto& nodes = tableau.nodes();
  const std::size_t n = nodes.size();

  std::vector<Guard> guards(n);
  std::vector<std::vector<int>> succ(n);
  std::vector<int> starts;
  for (std::size_t i = 0; i < n; ++i) {
    for (int id : nodes[i].old) {
      const FormulaPtr& g = table.at(id);
      if (g->is_atom()) {
        guards[i].pos |= std::uint64_t{1} << atom_index.at(g->ToString());
      } else if (g->op() == Op::kNot && g->lhs()->is_atom()) {
        guards[i].neg |= std::uint64_t{1} << atom_index.at(g->lhs()->ToString());
      }
    }
    for (int from : nodes[i].incoming) {
      if (from < 0) {
        starts.push_back(static_cast<int>(i));
      } else {
        succ[from].push_back(static_cast<int>(i));
      }
    }
  }

  // Acceptance set per until: nodes that do not promise it or fulfil it now.
  std::vector<std::vector<bool>> sets;
  for (int u : untils) {
    int rhs = table.Intern(table.at(u)->rhs());
    std::vector<bool> in(n);
    for (std::size_t i = 0; i < n; ++i) {
      in[i] = !nodes[i].old.count(u) || nodes[i].old.count(rhs);
    }
    sets.push_back(std::move(in));
  }
  if (sets.empty()) sets.emplace_back(n, true);
  const std::size_t k = sets.size();

  // Degeneralize: (node, counter); the counter advances when the node is in
  // the set it is waiting for.
  std::map<std::pair<int, std::size_t>, std::uint32_t> ids;
  std::deque<std::pair<int, std::size_t>> queue;
  auto intern = [&](int node, std::size_t c) {
    auto [it, fresh] = ids.try_emplace({node, c},
                                       static_cast<std::uint32_t>(out.states.size()));
    if (fresh) {
      BuchiAutomaton::State st;
      st.guard = guards[node];
      st.accepting = c == k - 1 && sets[k - 1][node];
      out.states.push_back(std::move(st));
      queue.emplace_back(node, c);
    }
    return it->second;
  };
  for (int s : starts) out.initial.push_back(intern(s, 0));
  while (!queue.empty()) {
    auto [node, c] = queue.front();
    queue.pop_front();
    std::uint32_t self = ids.at({node, c});
    std::size_t next = sets[c][node] ? (c + 1) % k : c;
    for (int t : succ[node]) {
      std::uint32_t id = intern(t, next);
      out.states[self].successors.push_back(id);
    }
  }
  return out;
}

std::vector<bool> BuchiAutomaton::Universal() const {
  // Only true-guarded moves can be taken whatever the input is. A state is
  // universal when such moves lead it to an accepting state on a cycle of
  // such moves.
  const std::size_t n = states.size();
  auto reach = [&](std::size_t from) {
    std::vector<bool> seen(n);
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
      std::size_t q = stack.back();
      stack.pop_back();
      for (auto t : states[q].successors) {
        if (states[t].guard.is_true() && !seen[t]) {
          seen[t] = true;
          stack.push_back(t);
        }
      }
    }
    return seen;
  };
  std::vector<std::vector<bool>> reachable(n);
  for (std::size_t q = 0; q < n; ++q) reachable[q] = reach(q);
  std::vector<bool> out(n);
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t a = 0; a < n && !out[q]; ++a) {
      bool on_cycle = states[a].accepting && reachable[a][a];
      out[q] = on_cycle && (a == q || reachable[q][a]);
    }
  }
  return out;
}

bool BuchiAutomaton::AcceptsLasso(const std::vector<std::uint64_t>& prefix,
                                  const std::vector<std::uint64_t>& cycle) const {
  if (cycle.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "lasso cycle must be nonempty");
  }
  const std::size_t len = prefix.size() + cycle.size();
  auto letter = [&](std::size_t i) {
    return i < prefix.size() ? prefix[i] : cycle[i - prefix.size()];
  };
  auto advance = [&](std::size_t i) {
    return i + 1 < len ? i + 1 : prefix.size();
  };
  const std::size_t q = states.size();
  auto node = [&](std::size_t s, std::size_t i) { return s * len + i; };

  // Reachable (state, index) pairs of the run graph.
  std::vector<bool> reach(q * len);
  std::vector<std::size_t> stack;
  for (auto s : initial) {
    if (states[s].guard.Holds(letter(0)) && !reach[node(s, 0)]) {
      reach[node(s, 0)] = true;
      stack.push_back(node(s, 0));
    }
  }
  auto successors = [&](std::size_t v, auto&& visit) {
    std::size_t s = v / len, i = v % len, j = advance(i);
    for (auto t : states[s].successors) {
      if (states[t].guard.Holds(letter(j))) visit(node(t, j));
    }
  };
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    successors(v, [&](std::size_t w) {
      if (!reach[w]) {
        reach[w] = true;
        stack.push_back(w);
      }
    });
  }
  // An accepting reachable node that lies on a cycle.
  for (std::size_t v = 0; v < q * len; ++v) {
    if (!reach[v] || !states[v / len].accepting) continue;
    std::vector<bool> seen(q * len);
    stack.assign(1, v);
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      bool found = false;
      successors(u, [&](std::size_t w) {
        if (w == v) found = true;
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      });
      if (found) return true;
    }
  }
  return false;
}

std::string BuchiAutomaton::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    out += "q" + std::to_string(i);
    if (s.accepting) out += " accepting";
    out += " [";
    bool first = true;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      std::uint64_t bit = std::uint64_t{1} << a;
      if (!(s.guard.pos & bit) && !(s.guard.neg & bit)) continue;
      if (!first) out += " && ";
      first = false;
      if (s.guard.neg & bit) out += "!";
      out += atoms[a]->ToString();
    }
    out += first ? "true]" : "]";
    out += " ->";
    for (auto t : s.successors) out += " q" + std::to_string(t);
    out += "\n";
  }
  out += "initial:";
  for (auto s : initial) out += " q" + std::to_string(s);
  return out + "\n";
}

}  // namespace ceremony::ltl
