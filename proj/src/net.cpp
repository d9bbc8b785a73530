/* Copyright 2026 the stepbmc authors
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
#include "stepbmc/net.hpp"

#include <algorithm>
#include <boost/functional/hash.hpp>
#include <cctype>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

#include "stepbmc/common.hpp"
#include "stepbmc/condition.hpp"

namespace stepbmc {

std::size_t MarkingHash::operator()(const Marking& m) const {
  std::vector<Marking::block_type> blocks(m.num_blocks());
  boost::to_block_range(m, blocks.begin());
  std::size_t seed = boost::hash_range(blocks.begin(), blocks.end());
  boost::hash_combine(seed, m.size());
  return seed;
}

namespace {

// Names the encoder owns; a net may not use them for places or transitions.
const std::set<std::string> kReservedNames = {"idle", "el", "le", "nl",
                                              "il",   "live", "not"};

// Identifier shape plus hygiene: no leading underscore (reserved for
// generated atoms) and none of the encoder's own atom names.
std::string check_identifier(const std::string& id) {
  if (id.empty()) return "empty identifier";
  if (!std::isalpha(static_cast<unsigned char>(id[0])))
    return "identifier '" + id + "' must start with a letter (the '_' namespace is reserved)";
  for (char c : id)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.')
      return "identifier '" + id + "' contains an invalid character";
  if (kReservedNames.count(id)) return "identifier '" + id + "' is reserved";
  return {};
}

}  // namespace

int Net::place_index(const std::string& name) const {
  auto it = pidx_.find(name);
  return it == pidx_.end() ? -1 : it->second;
}

int Net::transition_index(const std::string& name) const {
  auto it = tidx_.find(name);
  return it == tidx_.end() ? -1 : it->second;
}

Marking Net::marking_of(const std::vector<std::string>& names) const {
  Marking m(nplaces());
  for (const auto& name : names) {
    int p = place_index(name);
    if (p < 0) throw DomainError("unknown place '" + name + "'");
    m.set(std::size_t(p));
  }
  return m;
}

std::vector<std::string> Net::place_names(const Marking& m) const {
  std::vector<std::string> out;
  for (std::size_t p = 0; p < nplaces() && p < m.size(); ++p)
    if (m.test(p)) out.push_back(places[p]);
  std::sort(out.begin(), out.end());
  return out;
}

void Net::validate() {
  pidx_.clear();
  tidx_.clear();
  std::set<std::string> all;
  for (std::size_t i = 0; i < places.size(); ++i) {
    std::string err = check_identifier(places[i]);
    if (!err.empty()) throw DomainError(err);
    if (!all.insert(places[i]).second)
      throw DomainError("duplicate identifier '" + places[i] + "'");
    pidx_[places[i]] = int(i);
  }
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    std::string err = check_identifier(transitions[i]);
    if (!err.empty()) throw DomainError(err);
    if (!all.insert(transitions[i]).second)
      throw DomainError("duplicate identifier '" + transitions[i] + "'");
    tidx_[transitions[i]] = int(i);
  }
  if (pre.size() != transitions.size() || post.size() != transitions.size())
    throw DomainError("flow tables do not match the transition count");
  for (std::size_t t = 0; t < transitions.size(); ++t) {
    if (pre[t].size() != places.size() || post[t].size() != places.size())
      throw DomainError("flow bitset width does not match the place count");
    if (pre[t].none())
      throw DomainError("transition '" + transitions[t] + "' has an empty preset");
    if (post[t].none())
      throw DomainError("transition '" + transitions[t] + "' has an empty postset");
  }
  if (initial.size() != places.size())
    throw DomainError("initial marking width does not match the place count");
}

Net parse_net(const std::string& text) {
  Net net;
  std::map<std::string, int> pidx, tidx;  // parse-time lookup
  std::vector<std::string> init_names;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  auto fail = [&](const std::string& msg) -> void { throw ParseError(msg, lineno, 0); };

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "place" || kw == "trans") {
      std::string id;
      if (!(ls >> id)) fail("expected an identifier after '" + kw + "'");
      std::string err = check_identifier(id);
      if (!err.empty()) fail(err);
      if (pidx.count(id) || tidx.count(id)) fail("duplicate identifier '" + id + "'");
      if (kw == "place") {
        pidx[id] = int(net.places.size());
        net.places.push_back(id);
      } else {
        tidx[id] = int(net.transitions.size());
        net.transitions.push_back(id);
        net.pre.emplace_back();
        net.post.emplace_back();
      }
    } else if (kw == "arc") {
      std::string a, b;
      if (!(ls >> a >> b)) fail("expected two identifiers after 'arc'");
      bool a_place = pidx.count(a), a_trans = tidx.count(a);
      bool b_place = pidx.count(b), b_trans = tidx.count(b);
      if (!a_place && !a_trans) fail("arc references undeclared node '" + a + "'");
      if (!b_place && !b_trans) fail("arc references undeclared node '" + b + "'");
      if (a_place == b_place)
        fail("arc must connect a place and a transition, got '" + a + "' and '" + b + "'");
      // Places may be declared after transitions; widen lazily.
      for (auto& bs : net.pre)
        if (bs.size() < net.places.size()) bs.resize(net.places.size());
      for (auto& bs : net.post)
        if (bs.size() < net.places.size()) bs.resize(net.places.size());
      if (a_place)
        net.pre[std::size_t(tidx[b])].set(std::size_t(pidx[a]));
      else
        net.post[std::size_t(tidx[a])].set(std::size_t(pidx[b]));
    } else if (kw == "init") {
      std::string id;
      if (!(ls >> id)) fail("expected a place after 'init'");
      if (!pidx.count(id)) fail("init references undeclared place '" + id + "'");
      init_names.push_back(id);
    } else {
      fail("unknown directive '" + kw + "'");
    }
    std::string extra;
    if (ls >> extra) fail("unexpected token '" + extra + "'");
  }
  for (auto& bs : net.pre) bs.resize(net.places.size());
  for (auto& bs : net.post) bs.resize(net.places.size());
  net.initial = Marking(net.places.size());
  for (const auto& id : init_names) net.initial.set(std::size_t(pidx[id]));
  try {
    net.validate();
  } catch (const DomainError& e) {
    throw ParseError(e.what(), 0, 0);
  }
  return net;
}

std::string net_to_text(const Net& net) {
  std::string out;
  for (const auto& p : net.places) out += "place " + p + "\n";
  for (const auto& t : net.transitions) out += "trans " + t + "\n";
  for (std::size_t t = 0; t < net.ntransitions(); ++t)
    for (std::size_t p = 0; p < net.nplaces(); ++p)
      if (net.pre[t].test(p)) out += "arc " + net.places[p] + " " + net.transitions[t] + "\n";
  for (std::size_t t = 0; t < net.ntransitions(); ++t)
    for (std::size_t p = 0; p < net.nplaces(); ++p)
      if (net.post[t].test(p)) out += "arc " + net.transitions[t] + " " + net.places[p] + "\n";
  for (std::size_t p = 0; p < net.nplaces(); ++p)
    if (net.initial.test(p)) out += "init " + net.places[p] + "\n";
  return out;
}

void write_net_file(const Net& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open '" + path + "' for writing");
  out << net_to_text(net);
  if (!out) throw DomainError("failed writing '" + path + "'");
}

bool enabled(const Net& net, const Marking& m, int t) {
  if (t < 0 || std::size_t(t) >= net.ntransitions())
    throw DomainError("transition index out of range");
  return net.pre[std::size_t(t)].is_subset_of(m);
}

std::vector<int> enabled_set(const Net& net, const Marking& m) {
  std::vector<int> out;
  for (std::size_t t = 0; t < net.ntransitions(); ++t)
    if (net.pre[t].is_subset_of(m)) out.push_back(int(t));
  return out;
}

Marking fire(const Net& net, const Marking& m, int t) {
  if (!enabled(net, m, t))
    throw DomainError("transition '" + net.transitions[std::size_t(t)] +
                      "' is not enabled");
  return (m - net.pre[std::size_t(t)]) | net.post[std::size_t(t)];
}

bool is_step(const Net& net, const Marking& m, const std::vector<int>& step) {
  std::set<int> distinct(step.begin(), step.end());
  Marking used(net.nplaces());
  for (int t : step) {
    if (t < 0 || std::size_t(t) >= net.ntransitions())
      throw DomainError("transition index out of range");
  }
  for (int t : distinct) {
    if (!net.pre[std::size_t(t)].is_subset_of(m)) return false;
    if (used.intersects(net.pre[std::size_t(t)])) return false;
    used |= net.pre[std::size_t(t)];
  }
  return true;
}

Marking fire_step(const Net& net, const Marking& m, const std::vector<int>& step) {
  if (!is_step(net, m, step)) throw DomainError("not an enabled step");
  Marking take(net.nplaces()), put(net.nplaces());
  for (int t : step) {
    take |= net.pre[std::size_t(t)];
    put |= net.post[std::size_t(t)];
  }
  return (m - take) | put;
}

bool deadlocked(const Net& net, const Marking& m) {
  for (std::size_t t = 0; t < net.ntransitions(); ++t)
    if (net.pre[t].is_subset_of(m)) return false;
  return true;
}

namespace {

// Path reconstruction table for breadth-first searches.
struct Crumb {
  Marking parent;
  std::vector<int> step;
};

StepExecution rebuild_path(const std::unordered_map<Marking, Crumb, MarkingHash>& from,
                           const Marking& root, const Marking& goal) {
  StepExecution exec;
  Marking cur = goal;
  while (!(cur == root)) {
    const Crumb& c = from.at(cur);
    exec.markings.push_back(cur);
    exec.steps.push_back(c.step);
    cur = c.parent;
  }
  exec.markings.push_back(root);
  std::reverse(exec.markings.begin(), exec.markings.end());
  std::reverse(exec.steps.begin(), exec.steps.end());
  return exec;
}

}  // namespace

OneSafeReport assert_one_safe(const Net& net, std::size_t state_limit,
                              const std::optional<Marking>& from) {
  if (state_limit == 0) throw DomainError("state_limit must be positive");
  Marking root = from.value_or(net.initial);
  if (root.size() != net.nplaces())
    throw DomainError("start marking width does not match the net");
  OneSafeReport rep;
  std::unordered_map<Marking, Crumb, MarkingHash> crumbs;
  std::unordered_map<Marking, char, MarkingHash> visited;
  std::queue<Marking> queue;
  visited[root] = 1;
  queue.push(root);
  while (!queue.empty()) {
    Marking m = queue.front();
    queue.pop();
    for (int t : enabled_set(net, m)) {
      if ((m - net.pre[std::size_t(t)]).intersects(net.post[std::size_t(t)])) {
        rep.status = OneSafeReport::Status::violation;
        rep.reachable_count = visited.size();
        rep.witness = rebuild_path(crumbs, root, m);
        rep.witness_transition = t;
        return rep;
      }
      Marking next = (m - net.pre[std::size_t(t)]) | net.post[std::size_t(t)];
      if (visited.count(next)) continue;
      if (visited.size() >= state_limit) {
        rep.status = OneSafeReport::Status::inconclusive;
        rep.reachable_count = visited.size();
        return rep;
      }
      visited[next] = 1;
      crumbs[next] = Crumb{m, {t}};
      queue.push(next);
    }
  }
  rep.status = OneSafeReport::Status::one_safe;
  rep.reachable_count = visited.size();
  return rep;
}

namespace {

// Calls body(step) for every nonempty preset-disjoint subset of the enabled
// transitions, built in declaration order. body returns false to stop.
bool for_each_step(const Net& net, const std::vector<int>& en, Semantics sem,
                   const std::function<bool(const std::vector<int>&)>& body) {
  if (sem == Semantics::interleaving) {
    std::vector<int> step(1);
    for (int t : en) {
      step[0] = t;
      if (!body(step)) return false;
    }
    return true;
  }
  std::vector<int> step;
  Marking used(net.nplaces());
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == en.size()) return step.empty() ? true : body(step);
    int t = en[k];
    if (!used.intersects(net.pre[std::size_t(t)])) {
      used |= net.pre[std::size_t(t)];
      step.push_back(t);
      if (!rec(k + 1)) return false;
      step.pop_back();
      used -= net.pre[std::size_t(t)];
    }
    return rec(k + 1);
  };
  return rec(0);
}

}  // namespace

SearchOutcome oracle_search(const Net& net, const ConditionPtr& initial,
                            const std::function<bool(const Marking&)>& goal,
                            std::size_t bound, Semantics semantics,
                            std::size_t node_budget) {
  SearchOutcome out;
  SatisfyingSet roots = satisfying_markings(net, initial, node_budget);
  out.explored = roots.explored;
  bool clipped = !roots.exhaustive;

  std::unordered_map<Marking, Crumb, MarkingHash> crumbs;
  std::unordered_map<Marking, char, MarkingHash> seen;
  // The sentinel root marking doubles as path terminator in rebuild_path, so
  // every root maps to itself.
  std::vector<Marking> layer;
  for (const auto& m : roots.markings) {
    if (seen.count(m)) continue;
    seen[m] = 1;
    if (goal(m)) {
      out.status = SearchOutcome::Status::found;
      out.execution = StepExecution{{m}, {}};
      return out;
    }
    layer.push_back(m);
  }
  std::unordered_map<Marking, Marking, MarkingHash> root_of;
  for (const auto& m : layer) root_of[m] = m;

  for (std::size_t depth = 0; depth < bound && !layer.empty(); ++depth) {
    std::vector<Marking> next_layer;
    for (const auto& m : layer) {
      std::vector<int> en = enabled_set(net, m);
      bool ok = for_each_step(net, en, semantics, [&](const std::vector<int>& step) {
        if (out.explored++ >= node_budget) return false;
        Marking take(net.nplaces()), put(net.nplaces());
        for (int t : step) {
          take |= net.pre[std::size_t(t)];
          put |= net.post[std::size_t(t)];
        }
        Marking next = (m - take) | put;
        if (seen.count(next)) return true;
        seen[next] = 1;
        crumbs[next] = Crumb{m, step};
        root_of[next] = root_of.at(m);
        if (goal(next)) {
          out.status = SearchOutcome::Status::found;
          out.execution = rebuild_path(crumbs, root_of.at(next), next);
          return false;
        }
        next_layer.push_back(next);
        return true;
      });
      if (!ok) {
        if (out.status == SearchOutcome::Status::found) return out;
        out.status = SearchOutcome::Status::budget_exceeded;
        return out;
      }
    }
    layer = std::move(next_layer);
  }
  out.status = clipped ? SearchOutcome::Status::budget_exceeded
                       : SearchOutcome::Status::absent;
  return out;
}

namespace {

struct LtlSearch {
  const Net& net;
  const FormulaPtr& f;
  std::size_t bound;
  std::size_t budget;
  std::set<std::string> ap;
  std::vector<int> atom_places;  // place index per ap member (sorted names)
  LtlOracleOutcome out;
  std::vector<Marking> path;
  std::vector<std::vector<int>> steps;

  Word::Letter letter(const Marking& m) const {
    Word::Letter l;
    auto it = ap.begin();
    for (std::size_t k = 0; k < atom_places.size(); ++k, ++it)
      if (m.test(std::size_t(atom_places[k]))) l.insert(*it);
    return l;
  }

  std::vector<Word::Letter> letters() const {
    std::vector<Word::Letter> ls;
    ls.reserve(path.size());
    for (const auto& m : path) ls.push_back(letter(m));
    return ls;
  }

  bool found(std::optional<std::size_t> loop) {
    out.status = LtlOracleOutcome::Status::found;
    out.witness = LtlWitness{StepExecution{path, steps}, loop};
    return false;
  }

  // Returns false to stop the search (found or budget).
  bool visit() {
    if (out.explored++ >= budget) {
      out.status = LtlOracleOutcome::Status::budget_exceeded;
      return false;
    }
    // By value: push_back below may reallocate the path vector.
    const Marking m = path.back();
    std::size_t depth = steps.size();
    if (deadlocked(net, m)) {
      Word w = Word::make(letters(), std::nullopt, ap);
      if (eval(f, w)) return found(std::nullopt);
      return true;
    }
    for (std::size_t l = 0; l < depth; ++l) {
      if (!(path[l] == m)) continue;
      Word w = Word::make(letters(), l, ap);
      if (eval(f, w)) return found(l);
    }
    if (depth == bound) return true;
    for (int t : enabled_set(net, m)) {
      path.push_back(fire(net, m, t));
      steps.push_back({t});
      bool keep = visit();
      path.pop_back();
      steps.pop_back();
      if (!keep) return false;
    }
    return true;
  }
};

}  // namespace

LtlOracleOutcome oracle_ltl_counterexample(const Net& net, const FormulaPtr& f,
                                           std::size_t bound,
                                           const std::optional<ConditionPtr>& initial,
                                           std::size_t node_budget) {
  if (!f) throw DomainError("cannot search for a null formula");
  if (!is_pnf(f)) throw DomainError("formula must be in positive normal form");
  if (bound < 1) throw DomainError("bound must be at least 1");
  std::vector<std::string> names = atoms_of(f);
  for (const auto& name : names)
    if (net.place_index(name) < 0)
      throw DomainError("formula mentions unknown place '" + name + "'");

  ConditionPtr c0 =
      initial ? *initial : exact_marking_condition(net, net.initial);
  SatisfyingSet roots = satisfying_markings(net, c0, node_budget);

  LtlSearch s{net, f, bound, node_budget, {}, {}, {}, {}, {}};
  s.ap = std::set<std::string>(names.begin(), names.end());
  for (const auto& name : s.ap) s.atom_places.push_back(net.place_index(name));
  s.out.explored = roots.explored;
  for (const auto& root : roots.markings) {
    s.path = {root};
    s.steps = {};
    if (!s.visit()) return s.out;
  }
  if (!roots.exhaustive &&
      s.out.status == LtlOracleOutcome::Status::absent)
    s.out.status = LtlOracleOutcome::Status::budget_exceeded;
  return s.out;
}

Net dining_philosophers(std::size_t k) {
  if (k < 2) throw DomainError("dining_philosophers needs k >= 2");
  Net net;
  for (std::size_t i = 0; i < k; ++i) {
    std::string n = std::to_string(i);
    net.places.push_back("think_" + n);
    net.places.push_back("hasL_" + n);
    net.places.push_back("eat_" + n);
    net.places.push_back("fork_" + n);
  }
  auto place = [&](const std::string& base, std::size_t i) {
    return int(4 * i) + (base == "think" ? 0 : base == "hasL" ? 1 : base == "eat" ? 2 : 3);
  };
  std::size_t P = net.places.size();
  for (std::size_t i = 0; i < k; ++i) {
    std::string n = std::to_string(i);
    std::size_t right = (i + 1) % k;
    Marking pre(P), post(P);
    net.transitions.push_back("takeL_" + n);
    pre.set(std::size_t(place("think", i)));
    pre.set(std::size_t(place("fork", i)));
    post.set(std::size_t(place("hasL", i)));
    net.pre.push_back(pre);
    net.post.push_back(post);

    pre = Marking(P);
    post = Marking(P);
    net.transitions.push_back("takeR_" + n);
    pre.set(std::size_t(place("hasL", i)));
    pre.set(std::size_t(place("fork", right)));
    post.set(std::size_t(place("eat", i)));
    net.pre.push_back(pre);
    net.post.push_back(post);

    pre = Marking(P);
    post = Marking(P);
    net.transitions.push_back("release_" + n);
    pre.set(std::size_t(place("eat", i)));
    post.set(std::size_t(place("think", i)));
    post.set(std::size_t(place("fork", i)));
    post.set(std::size_t(place("fork", right)));
    net.pre.push_back(pre);
    net.post.push_back(post);
  }
  net.initial = Marking(P);
  for (std::size_t i = 0; i < k; ++i) {
    net.initial.set(std::size_t(place("think", i)));
    net.initial.set(std::size_t(place("fork", i)));
  }
  net.validate();
  return net;
}

}  // namespace stepbmc
