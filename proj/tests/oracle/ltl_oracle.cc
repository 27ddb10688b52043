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

#include "oracle/ltl_oracle.hh"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>

namespace ceremony::oracle {
namespace {

using ltl::Formula;
using ltl::FormulaPtr;
using Op = Formula::Op;

// Core syntax: true, atoms, not, and, next, until.
struct Core {
  enum Kind { kTrue, kState, kEvent, kNot, kAnd, kNext, kUntil } kind;
  std::string atom;
  int lhs = -1, rhs = -1;
};

class CoreBuilder {
 public:
  std::vector<Core> nodes;

  int Add(Core c) {
    nodes.push_back(std::move(c));
    return static_cast<int>(nodes.size()) - 1;
  }
  int Not(int a) { return Add({Core::kNot, "", a}); }
  int And(int a, int b) { return Add({Core::kAnd, "", a, b}); }
  int Or(int a, int b) { return Not(And(Not(a), Not(b))); }
  int True() { return Add({Core::kTrue}); }
  int Until(int a, int b) { return Add({Core::kUntil, "", a, b}); }

  int Build(const FormulaPtr& f) {
    switch (f->op()) {
      case Op::kTrue: return True();
      case Op::kFalse: return Not(True());
      case Op::kState: return Add({Core::kState, f->atom()});
      case Op::kEvent: return Add({Core::kEvent, f->atom()});
      case Op::kNot: return Not(Build(f->lhs()));
      case Op::kAnd: return And(Build(f->lhs()), Build(f->rhs()));
      case Op::kOr: return Or(Build(f->lhs()), Build(f->rhs()));
      case Op::kImplies: return Or(Not(Build(f->lhs())), Build(f->rhs()));
      case Op::kNext: return Add({Core::kNext, "", Build(f->lhs())});
      case Op::kAlways: return Not(Until(True(), Not(Build(f->lhs()))));
      case Op::kEventually: return Until(True(), Build(f->lhs()));
      case Op::kUntil: return Until(Build(f->lhs()), Build(f->rhs()));
      case Op::kRelease:
        return Not(Until(Not(Build(f->lhs())), Not(Build(f->rhs()))));
    }
    throw std::logic_error("unknown operator");
  }
};

struct Letters {
  const std::vector<std::string>* pred_names;
  bool Atom(const Core& c, const Letter& l) const {
    if (c.kind == Core::kEvent) return l.event && *l.event == c.atom;
    auto it = std::find(pred_names->begin(), pred_names->end(), c.atom);
    if (it == pred_names->end()) throw std::invalid_argument(c.atom);
    return (l.preds >> (it - pred_names->begin())) & 1U;
  }
};

}  // namespace

std::optional<int> SmallSystem::PredicateIndex(const std::string& name) const {
  auto it = std::find(pred_names.begin(), pred_names.end(), name);
  if (it == pred_names.end()) return std::nullopt;
  return static_cast<int>(it - pred_names.begin());
}

SmallSystem RandomSystem(std::mt19937_64& rng, std::size_t max_states) {
  SmallSystem sys;
  sys.pred_names = {"p", "q"};
  sys.labels = {"a", "b"};
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_states)(rng);
  std::uniform_int_distribution<std::size_t> target(0, n - 1);
  std::uniform_int_distribution<int> degree(0, 3), bit(0, 3), label(0, 1);
  sys.edges.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    sys.preds.push_back(bit(rng));
    // One state in eight deadlocks, so stuttering gets exercised.
    int d = (rng() % 8 == 0) ? 0 : std::max(1, degree(rng));
    for (int k = 0; k < d; ++k) {
      sys.edges[s].push_back(
          {static_cast<statespace::LabelId>(label(rng)),
           static_cast<statespace::StateId>(target(rng))});
    }
  }
  return sys;
}

namespace {

int TemporalOps(const FormulaPtr& f) {
  if (!f) return 0;
  bool temporal = f->op() == Op::kNext || f->op() == Op::kAlways ||
                  f->op() == Op::kEventually || f->op() == Op::kUntil ||
                  f->op() == Op::kRelease;
  return temporal + TemporalOps(f->lhs()) + TemporalOps(f->rhs());
}

FormulaPtr AnyFormula(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 3 : 12);
  switch (int k = pick(rng)) {
    case 0: return Formula::State("p");
    case 1: return Formula::State("q");
    case 2: return Formula::Event("a");
    case 3: return (rng() % 2) ? Formula::True() : Formula::State("p");
    default: {
      FormulaPtr a = AnyFormula(rng, depth - 1);
      switch (k) {
        case 4: return Formula::Not(a);
        case 5: return Formula::Next(a);
        case 6: return Formula::Always(a);
        case 7: return Formula::Eventually(a);
        default: break;
      }
      FormulaPtr b = AnyFormula(rng, depth - 1);
      switch (k) {
        case 8: return Formula::And(a, b);
        case 9: return Formula::Or(a, b);
        case 10: return Formula::Implies(a, b);
        case 11: return Formula::Until(a, b);
        default: return Formula::Release(a, b);
      }
    }
  }
}

}  // namespace

FormulaPtr RandomFormula(std::mt19937_64& rng, int depth) {
  // The tableau is exponential in temporal operators; keep it tractable.
  for (;;) {
    FormulaPtr f = AnyFormula(rng, depth);
    if (TemporalOps(f) <= 7) return f;
  }
}

bool HoldsOnLasso(const FormulaPtr& f, const std::vector<Letter>& word,
                  std::size_t loop_start,
                  const std::vector<std::string>& pred_names) {
  CoreBuilder b;
  int root = b.Build(f);
  const std::size_t n = word.size();
  auto next = [&](std::size_t i) { return i + 1 < n ? i + 1 : loop_start; };
  Letters letters{&pred_names};
  // Children are built before parents, so index order is bottom-up.
  std::vector<std::vector<bool>> val(b.nodes.size(), std::vector<bool>(n));
  for (std::size_t k = 0; k < b.nodes.size(); ++k) {
    const Core& c = b.nodes[k];
    auto& v = val[k];
    for (std::size_t i = 0; i < n; ++i) {
      switch (c.kind) {
        case Core::kTrue: v[i] = true; break;
        case Core::kState:
        case Core::kEvent: v[i] = letters.Atom(c, word[i]); break;
        case Core::kNot: v[i] = !val[c.lhs][i]; break;
        case Core::kAnd: v[i] = val[c.lhs][i] && val[c.rhs][i]; break;
        case Core::kNext: v[i] = val[c.lhs][next(i)]; break;
        case Core::kUntil: v[i] = false; break;
      }
    }
    if (c.kind == Core::kUntil) {
      // Least fixpoint; n rounds suffice on n positions.
      for (std::size_t round = 0; round <= n; ++round) {
        for (std::size_t j = n; j-- > 0;) {
          v[j] = val[c.rhs][j] || (val[c.lhs][j] && v[next(j)]);
        }
      }
    }
  }
  return val[root][0];
}

std::vector<Letter> Spell(const ltl::System& system,
                          const std::vector<ltl::Position>& positions) {
  std::vector<Letter> out;
  for (const auto& p : positions) {
    Letter l;
    l.preds = system.Predicates(p.state);
    if (p.label) l.event = system.LabelText(*p.label);
    out.push_back(l);
  }
  return out;
}

bool HoldsByTableau(const SmallSystem& system, const FormulaPtr& f) {
  CoreBuilder b;
  int phi = b.Not(b.Build(f));
  const auto& nodes = b.nodes;

  // Elementary temporal formulas: X g for each next, X(g U h) for each until.
  std::vector<int> elementary;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].kind == Core::kNext || nodes[k].kind == Core::kUntil) {
      elementary.push_back(static_cast<int>(k));
    }
  }
  if (elementary.size() > 12) throw std::length_error("formula too large");
  const std::uint32_t tableau_states = 1U << elementary.size();
  std::vector<int> slot(nodes.size(), -1);
  for (std::size_t e = 0; e < elementary.size(); ++e) slot[elementary[e]] = e;

  // Positions: (incoming label or none, state).
  using Pos = std::pair<int, statespace::StateId>;  // label -1: none/silent
  std::vector<Pos> positions{{-1, 0}};
  std::map<Pos, std::size_t> pos_index{{positions[0], 0}};
  std::vector<std::vector<std::size_t>> pos_succ;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    auto s = positions[i].second;
    std::vector<Pos> next;
    for (const auto& e : system.edges[s]) next.push_back({int(e.label), e.target});
    if (next.empty()) next.push_back({-1, s});
    pos_succ.emplace_back();
    for (const auto& p : next) {
      auto [it, fresh] = pos_index.try_emplace(p, positions.size());
      if (fresh) positions.push_back(p);
      pos_succ[i].push_back(it->second);
    }
  }

  Letters letters{&system.pred_names};
  auto letter_of = [&](std::size_t pos) {
    Letter l;
    l.preds = system.preds[positions[pos].second];
    if (positions[pos].first >= 0) l.event = system.labels[positions[pos].first];
    return l;
  };
  // Truth of every core node at (position, tableau state).
  auto compute = [&](std::size_t pos, std::uint32_t t) {
    Letter l = letter_of(pos);
    std::vector<bool> v(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const Core& c = nodes[k];
      switch (c.kind) {
        case Core::kTrue: v[k] = true; break;
        case Core::kState:
        case Core::kEvent: v[k] = letters.Atom(c, l); break;
        case Core::kNot: v[k] = !v[c.lhs]; break;
        case Core::kAnd: v[k] = v[c.lhs] && v[c.rhs]; break;
        case Core::kNext: v[k] = (t >> slot[k]) & 1U; break;
        case Core::kUntil:
          v[k] = v[c.rhs] || (v[c.lhs] && ((t >> slot[k]) & 1U));
          break;
      }
    }
    return v;
  };
  std::vector<std::vector<std::vector<bool>>> cache(positions.size());
  auto sat = [&](std::size_t pos, std::uint32_t t) -> const std::vector<bool>& {
    if (cache[pos].empty()) {
      for (std::uint32_t u = 0; u < tableau_states; ++u) {
        cache[pos].push_back(compute(pos, u));
      }
    }
    return cache[pos][t];
  };

  // Product graph over reachable (position, tableau state) nodes.
  std::map<std::pair<std::size_t, std::uint32_t>, std::size_t> index;
  std::vector<std::pair<std::size_t, std::uint32_t>> pnodes;
  std::vector<std::vector<bool>> psat;
  std::vector<std::vector<std::size_t>> succ;
  auto intern = [&](std::size_t pos, std::uint32_t t) {
    auto [it, fresh] = index.try_emplace({pos, t}, pnodes.size());
    if (fresh) {
      pnodes.push_back({pos, t});
      psat.push_back(sat(pos, t));
    }
    return it->second;
  };
  for (std::uint32_t t = 0; t < tableau_states; ++t) {
    if (sat(0, t)[phi]) intern(0, t);
  }
  for (std::size_t i = 0; i < pnodes.size(); ++i) {
    auto [pos, t] = pnodes[i];
    std::vector<std::size_t> out;
    for (std::size_t next_pos : pos_succ[pos]) {
      for (std::uint32_t u = 0; u < tableau_states; ++u) {
        const auto& v = sat(next_pos, u);
        bool ok = true;
        for (std::size_t e = 0; e < elementary.size() && ok; ++e) {
          const Core& c = nodes[elementary[e]];
          bool promised = (t >> e) & 1U;
          bool target = c.kind == Core::kNext ? v[c.lhs] : v[elementary[e]];
          ok = promised == target;
        }
        if (ok) out.push_back(intern(next_pos, u));
      }
    }
    succ.push_back(std::move(out));
  }

  // Tarjan, iteratively.
  const std::size_t n = pnodes.size();
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n);
  std::vector<std::size_t> stack;
  int counter = 0, comps = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (idx[root] >= 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
    idx[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < succ[v].size()) {
        std::size_t w = succ[v][next++];
        if (idx[w] < 0) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
        continue;
      }
      if (low[v] == idx[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty()) {
        low[call.back().first] = std::min(low[call.back().first], low[done]);
      }
    }
  }

  // A fair SCC is nontrivial and fulfils every until somewhere inside.
  std::vector<std::vector<std::size_t>> members(comps);
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);
  for (const auto& m : members) {
    bool nontrivial = false;
    for (std::size_t v : m) {
      for (std::size_t w : succ[v]) nontrivial |= comp[w] == comp[v];
    }
    if (!nontrivial) continue;
    bool fair = true;
    for (int u : elementary) {
      if (nodes[u].kind != Core::kUntil) continue;
      bool fulfilled = false;
      for (std::size_t v : m) {
        fulfilled |= !psat[v][u] || psat[v][nodes[u].rhs];
      }
      fair &= fulfilled;
    }
    if (fair) return false;  // some path satisfies the negation
  }
  return true;
}

}  // namespace ceremony::oracle
