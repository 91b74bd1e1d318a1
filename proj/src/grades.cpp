// Copyright 2026 The gract Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gract/grades.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <set>
#include <sstream>

namespace gract {

std::string GradeMonoid::format(Grade g) const {
  if (g.is_infinite()) return "inf";
  return std::to_string(g.value());
}

std::optional<Grade> GradeMonoid::parse(std::string_view text) const {
  if (text == "inf" || text == "∞") return Grade::infinity();
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  Grade g = Grade::finite(value);
  if (!contains(g)) return std::nullopt;
  return g;
}

namespace {

Grade nat_plus(Grade g, Grade h) {
  if (g.is_infinite() || h.is_infinite()) return Grade::infinity();
  if (g.value() > std::numeric_limits<std::uint64_t>::max() - h.value()) return Grade::infinity();
  return Grade::finite(g.value() + h.value());
}

bool nat_below(Grade g, Grade h) {
  if (h.is_infinite()) return true;
  if (g.is_infinite()) return false;
  return g.value() <= h.value();
}

std::vector<Grade> nat_sample() {
  std::vector<Grade> out;
  for (std::uint64_t i = 0; i <= 8; ++i) out.push_back(Grade::finite(i));
  out.push_back(Grade::infinity());
  return out;
}

class NatLeq final : public GradeMonoid {
 public:
  GradeKind kind() const override { return GradeKind::kNatLeq; }
  std::string_view name() const override { return "natLeq"; }
  bool contains(Grade) const override { return true; }
  Grade plus(Grade g, Grade h) const override { return nat_plus(g, h); }
  bool leq(Grade g, Grade h) const override { return nat_below(g, h); }
  std::optional<Grade> minus(Grade h, Grade g) const override {
    if (!nat_below(g, h)) return std::nullopt;
    if (h.is_infinite()) return Grade::infinity();
    return Grade::finite(h.value() - g.value());
  }
  std::optional<Grade> glb(Grade g, Grade h) const override { return nat_below(g, h) ? g : h; }
  std::vector<Grade> sample() const override { return nat_sample(); }
};

// Order is equality. Subtraction keeps the exact difference: h - g is the
// unique z with g + z = h, and anything minus into infinity is infinity.
class NatExact final : public GradeMonoid {
 public:
  GradeKind kind() const override { return GradeKind::kNatExact; }
  std::string_view name() const override { return "natEq"; }
  bool contains(Grade) const override { return true; }
  Grade plus(Grade g, Grade h) const override { return nat_plus(g, h); }
  bool leq(Grade g, Grade h) const override { return g == h; }
  std::optional<Grade> minus(Grade h, Grade g) const override {
    if (h.is_infinite()) return Grade::infinity();
    if (g.is_infinite() || g.value() > h.value()) return std::nullopt;
    return Grade::finite(h.value() - g.value());
  }
  std::optional<Grade> glb(Grade g, Grade h) const override {
    if (g == h) return g;
    return std::nullopt;
  }
  std::vector<Grade> sample() const override { return nat_sample(); }
};

const Grade kOne = Grade::finite(1);

// 0, 1 and infinity. Lin orders only 0 <= inf and 1 <= inf; Affine adds 0 <= 1.
class Usage final : public GradeMonoid {
 public:
  explicit Usage(bool affine) : affine_(affine) {}

  GradeKind kind() const override { return affine_ ? GradeKind::kAffine : GradeKind::kLin; }
  std::string_view name() const override { return affine_ ? "affine" : "lin"; }
  bool contains(Grade g) const override { return g.is_infinite() || g.value() <= 1; }
  Grade plus(Grade g, Grade h) const override {
    if (g == zero()) return h;
    if (h == zero()) return g;
    return Grade::infinity();
  }
  bool leq(Grade g, Grade h) const override {
    if (g == h || h.is_infinite()) return true;
    return affine_ && g == zero() && h == kOne;
  }
  std::optional<Grade> minus(Grade h, Grade g) const override {
    if (g == zero()) return h;
    if (h.is_infinite()) return Grade::infinity();
    if (h == kOne && g == kOne) return zero();
    return std::nullopt;
  }
  std::optional<Grade> glb(Grade g, Grade h) const override {
    if (leq(g, h)) return g;
    if (leq(h, g)) return h;
    return std::nullopt;
  }
  std::vector<Grade> sample() const override { return {zero(), kOne, Grade::infinity()}; }

 private:
  bool affine_;
};

}  // namespace

std::shared_ptr<const GradeMonoid> make_nat_exact() { return std::make_shared<NatExact>(); }
std::shared_ptr<const GradeMonoid> make_nat_leq() { return std::make_shared<NatLeq>(); }
std::shared_ptr<const GradeMonoid> make_lin() { return std::make_shared<Usage>(false); }
std::shared_ptr<const GradeMonoid> make_affine() { return std::make_shared<Usage>(true); }

std::shared_ptr<const LevelLattice> LevelLattice::build(const std::vector<Relation>& relations) {
  std::shared_ptr<LevelLattice> lattice(new LevelLattice());
  auto& names = lattice->names_;
  names.push_back("0");
  auto index_of = [&names](const std::string& level) {
    auto it = std::find(names.begin(), names.end(), level);
    if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
    names.push_back(level);
    return names.size() - 1;
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [lo, hi] : relations) {
    if (lo == "inf" || hi == "inf") throw GradeError("'inf' is not a level name");
    std::size_t a = index_of(lo);
    std::size_t b = index_of(hi);
    edges.emplace_back(a, b);
  }
  const std::size_t n = names.size();
  auto& order = lattice->order_;
  order.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    order[i][i] = true;
    order[0][i] = true;
  }
  for (auto [a, b] : edges) order[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (order[i][k] && order[k][j]) order[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (order[i][j] && order[j][i])
        throw GradeError("levels '" + names[i] + "' and '" + names[j] + "' form a cycle");

  auto& join = lattice->join_;
  join.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::optional<std::size_t> least;
      for (std::size_t u = 0; u < n; ++u) {
        if (!order[i][u] || !order[j][u]) continue;
        bool below_all = true;
        for (std::size_t v = 0; v < n && below_all; ++v)
          if (order[i][v] && order[j][v] && !order[u][v]) below_all = false;
        if (below_all) least = u;
      }
      if (!least)
        throw GradeError("levels '" + names[i] + "' and '" + names[j] + "' have no join");
      join[i][j] = *least;
    }
  }
  return lattice;
}

bool LevelLattice::contains(Grade g) const {
  return !g.is_infinite() && g.value() < names_.size();
}

Grade LevelLattice::plus(Grade g, Grade h) const {
  return Grade::finite(join_[g.value()][h.value()]);
}

bool LevelLattice::leq(Grade g, Grade h) const { return order_[g.value()][h.value()]; }

std::optional<Grade> LevelLattice::minus(Grade h, Grade g) const {
  if (!leq(g, h)) return std::nullopt;
  return h;
}

std::optional<Grade> LevelLattice::glb(Grade g, Grade h) const {
  std::optional<Grade> best;
  for (std::size_t l = 0; l < names_.size(); ++l) {
    Grade c = Grade::finite(l);
    if (!leq(c, g) || !leq(c, h)) continue;
    bool above_all = true;
    for (std::size_t k = 0; k < names_.size() && above_all; ++k) {
      Grade d = Grade::finite(k);
      if (leq(d, g) && leq(d, h) && !leq(d, c)) above_all = false;
    }
    if (above_all) best = c;
  }
  return best;
}

std::vector<Grade> LevelLattice::sample() const {
  std::vector<Grade> out;
  for (std::size_t i = 0; i < names_.size(); ++i) out.push_back(Grade::finite(i));
  return out;
}

std::string LevelLattice::format(Grade g) const {
  if (!contains(g)) return "?";
  return names_[g.value()];
}

std::optional<Grade> LevelLattice::parse(std::string_view text) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == text) return Grade::finite(i);
  return std::nullopt;
}

std::vector<LevelLattice::Relation> LevelLattice::covering_relations() const {
  std::vector<Relation> out;
  const std::size_t n = names_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !order_[i][j]) continue;
      bool covers = true;
      for (std::size_t k = 0; k < n && covers; ++k)
        if (k != i && k != j && order_[i][k] && order_[k][j]) covers = false;
      if (covers) out.emplace_back(names_[i], names_[j]);
    }
  }
  return out;
}

Grade ctx_get(const GradeMonoid& m, const ActorContext& ctx, const std::string& actor,
              const std::string& resource) {
  auto a = ctx.find(actor);
  if (a == ctx.end()) return m.zero();
  auto r = a->second.find(resource);
  return r == a->second.end() ? m.zero() : r->second;
}

void ctx_set(ActorContext& ctx, const std::string& actor, const std::string& resource, Grade g) {
  ctx[actor][resource] = g;
}

namespace {

template <typename Map>
std::set<typename Map::key_type> key_union(const Map& a, const Map& b) {
  std::set<typename Map::key_type> keys;
  for (const auto& [k, _] : a) keys.insert(k);
  for (const auto& [k, _] : b) keys.insert(k);
  return keys;
}

Grade env_at(const GradeMonoid& m, const ResourceEnv& env, const std::string& r) {
  auto it = env.find(r);
  return it == env.end() ? m.zero() : it->second;
}

const ResourceEnv& actor_at(const ActorContext& ctx, const std::string& a) {
  static const ResourceEnv kEmpty;
  auto it = ctx.find(a);
  return it == ctx.end() ? kEmpty : it->second;
}

}  // namespace

ResourceEnv env_plus(const GradeMonoid& m, const ResourceEnv& a, const ResourceEnv& b) {
  ResourceEnv out;
  for (const auto& r : key_union(a, b)) out[r] = m.plus(env_at(m, a, r), env_at(m, b, r));
  return out;
}

bool env_leq(const GradeMonoid& m, const ResourceEnv& a, const ResourceEnv& b) {
  for (const auto& r : key_union(a, b))
    if (!m.leq(env_at(m, a, r), env_at(m, b, r))) return false;
  return true;
}

std::optional<ResourceEnv> env_minus(const GradeMonoid& m, const ResourceEnv& h,
                                     const ResourceEnv& g) {
  ResourceEnv out;
  for (const auto& r : key_union(h, g)) {
    auto d = m.minus(env_at(m, h, r), env_at(m, g, r));
    if (!d) return std::nullopt;
    out[r] = *d;
  }
  return out;
}

ResourceEnv env_meet(const GradeMonoid& m, const ResourceEnv& a, const ResourceEnv& b) {
  ResourceEnv out;
  for (const auto& r : key_union(a, b)) out[r] = m.meet(env_at(m, a, r), env_at(m, b, r));
  return out;
}

ActorContext ctx_plus(const GradeMonoid& m, const ActorContext& a, const ActorContext& b) {
  ActorContext out;
  for (const auto& k : key_union(a, b)) out[k] = env_plus(m, actor_at(a, k), actor_at(b, k));
  return out;
}

bool ctx_leq(const GradeMonoid& m, const ActorContext& a, const ActorContext& b) {
  for (const auto& k : key_union(a, b))
    if (!env_leq(m, actor_at(a, k), actor_at(b, k))) return false;
  return true;
}

std::optional<ActorContext> ctx_minus(const GradeMonoid& m, const ActorContext& h,
                                      const ActorContext& g) {
  ActorContext out;
  for (const auto& k : key_union(h, g)) {
    auto d = env_minus(m, actor_at(h, k), actor_at(g, k));
    if (!d) return std::nullopt;
    out[k] = std::move(*d);
  }
  return out;
}

ActorContext ctx_meet(const GradeMonoid& m, const ActorContext& a, const ActorContext& b) {
  ActorContext out;
  for (const auto& k : key_union(a, b)) out[k] = env_meet(m, actor_at(a, k), actor_at(b, k));
  return out;
}

ActorContext ctx_normalize(const ActorContext& ctx) {
  ActorContext out;
  for (const auto& [actor, env] : ctx) {
    ResourceEnv kept;
    for (const auto& [r, g] : env)
      if (g != Grade::finite(0)) kept[r] = g;
    if (!kept.empty()) out[actor] = std::move(kept);
  }
  return out;
}

bool ctx_equal(const GradeMonoid& m, const ActorContext& a, const ActorContext& b) {
  return ctx_normalize(m, a) == ctx_normalize(m, b);
}

bool ctx_empty(const GradeMonoid& m, const ActorContext& ctx) {
  return ctx_normalize(m, ctx).empty();
}

std::string format_ctx(const GradeMonoid& m, const ActorContext& ctx) {
  std::ostringstream out;
  out << '{';
  bool first_actor = true;
  for (const auto& [actor, env] : ctx_normalize(m, ctx)) {
    if (!first_actor) out << ", ";
    first_actor = false;
    out << actor << ": {";
    bool first = true;
    for (const auto& [r, g] : env) {
      if (!first) out << ", ";
      first = false;
      out << r << '^' << m.format(g);
    }
    out << '}';
  }
  out << '}';
  return out.str();
}

}  // namespace gract
