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

#ifndef GRACT_GRADES_HPP_
#define GRACT_GRADES_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gract {

/// An element of some grade carrier. The interpretation belongs to the
/// GradeMonoid that produced it: naturals use the value directly, Lin and
/// Affine use 0, 1 and infinity, level lattices store the level index.
class Grade {
 public:
  constexpr Grade() = default;

  static constexpr Grade finite(std::uint64_t value) { return Grade(value, false); }
  static constexpr Grade infinity() { return Grade(0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr std::uint64_t value() const { return value_; }

  friend constexpr bool operator==(Grade, Grade) = default;
  // Structural order for use as a map key; unrelated to any monoid order.
  friend constexpr std::strong_ordering operator<=>(Grade a, Grade b) {
    if (a.infinite_ != b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

 private:
  constexpr Grade(std::uint64_t value, bool infinite)
      : value_(infinite ? 0 : value), infinite_(infinite) {}

  std::uint64_t value_ = 0;
  bool infinite_ = false;
};

class GradeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GradeKind { kNatExact, kNatLeq, kLin, kAffine, kLevel };

/// Subtractive grade monoid. `minus(h, g)` is the largest h' with
/// g + h' <= h and is empty when no such h' exists.
class GradeMonoid {
 public:
  virtual ~GradeMonoid() = default;

  virtual GradeKind kind() const = 0;
  /// Header keyword: natEq, natLeq, lin, affine or level.
  virtual std::string_view name() const = 0;

  Grade zero() const { return Grade::finite(0); }
  virtual bool contains(Grade g) const = 0;
  virtual Grade plus(Grade g, Grade h) const = 0;
  virtual bool leq(Grade g, Grade h) const = 0;
  virtual std::optional<Grade> minus(Grade h, Grade g) const = 0;
  /// Greatest lower bound, when the carrier has one for this pair.
  virtual std::optional<Grade> glb(Grade g, Grade h) const = 0;
  /// Finite carrier sample used by the law tests.
  virtual std::vector<Grade> sample() const = 0;

  virtual std::string format(Grade g) const;
  virtual std::optional<Grade> parse(std::string_view text) const;

  /// glb(g, h), or zero when the pair has no greatest lower bound.
  Grade meet(Grade g, Grade h) const { return glb(g, h).value_or(zero()); }
  bool is_discardable(Grade g) const { return leq(zero(), g); }
};

std::shared_ptr<const GradeMonoid> make_nat_exact();
std::shared_ptr<const GradeMonoid> make_nat_leq();
std::shared_ptr<const GradeMonoid> make_lin();
std::shared_ptr<const GradeMonoid> make_affine();

/// Finite join-semilattice of named levels with "0" as bottom. Built from
/// chains `a <= b`; the relation is closed reflexively and transitively,
/// then checked for antisymmetry and binary joins.
class LevelLattice final : public GradeMonoid {
 public:
  using Relation = std::pair<std::string, std::string>;

  static std::shared_ptr<const LevelLattice> build(const std::vector<Relation>& relations);

  GradeKind kind() const override { return GradeKind::kLevel; }
  std::string_view name() const override { return "level"; }
  bool contains(Grade g) const override;
  Grade plus(Grade g, Grade h) const override;
  bool leq(Grade g, Grade h) const override;
  std::optional<Grade> minus(Grade h, Grade g) const override;
  std::optional<Grade> glb(Grade g, Grade h) const override;
  std::vector<Grade> sample() const override;
  std::string format(Grade g) const override;
  std::optional<Grade> parse(std::string_view text) const override;

  const std::vector<std::string>& levels() const { return names_; }
  /// Declared edges after closure, for printing the header back.
  std::vector<Relation> covering_relations() const;

 private:
  LevelLattice() = default;

  std::vector<std::string> names_;
  std::vector<std::vector<bool>> order_;
  std::vector<std::vector<std::size_t>> join_;
};

/// Absent resources have grade zero.
using ResourceEnv = std::map<std::string, Grade>;
/// Absent actors have the empty resource environment.
using ActorContext = std::map<std::string, ResourceEnv>;

Grade ctx_get(const GradeMonoid& m, const ActorContext& ctx, const std::string& actor,
              const std::string& resource);
void ctx_set(ActorContext& ctx, const std::string& actor, const std::string& resource, Grade g);

ResourceEnv env_plus(const GradeMonoid& m, const ResourceEnv& a, const ResourceEnv& b);
bool env_leq(const GradeMonoid& m, const ResourceEnv& a, const ResourceEnv& b);
std::optional<ResourceEnv> env_minus(const GradeMonoid& m, const ResourceEnv& h,
                                     const ResourceEnv& g);
ResourceEnv env_meet(const GradeMonoid& m, const ResourceEnv& a, const ResourceEnv& b);

ActorContext ctx_plus(const GradeMonoid& m, const ActorContext& a, const ActorContext& b);
bool ctx_leq(const GradeMonoid& m, const ActorContext& a, const ActorContext& b);
/// Pointwise h - g; empty if any component is undefined.
std::optional<ActorContext> ctx_minus(const GradeMonoid& m, const ActorContext& h,
                                      const ActorContext& g);
ActorContext ctx_meet(const GradeMonoid& m, const ActorContext& a, const ActorContext& b);

/// Drops zero entries and then empty actors. Zero is the same element in
/// every instance, so the monoid is not needed.
ActorContext ctx_normalize(const ActorContext& ctx);
inline ActorContext ctx_normalize(const GradeMonoid&, const ActorContext& ctx) {
  return ctx_normalize(ctx);
}
bool ctx_equal(const GradeMonoid& m, const ActorContext& a, const ActorContext& b);
bool ctx_empty(const GradeMonoid& m, const ActorContext& ctx);

/// `{A: {r^g, s^h}, B: {...}}` with zero entries dropped.
std::string format_ctx(const GradeMonoid& m, const ActorContext& ctx);

}  // namespace gract

#endif  // GRACT_GRADES_HPP_
