// Per-infoset probability vectors: behavioral strategies and beliefs.
#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "efg/game.hpp"

namespace efg {

// Flat storage of one real vector per infoset, sliced by shared offsets.
template <class Tag>
class InfosetVectors {
 public:
  using Offsets = std::shared_ptr<const std::vector<std::size_t>>;

  InfosetVectors() = default;
  InfosetVectors(Offsets offsets, std::vector<double> values)
      : offsets_(std::move(offsets)), values_(std::move(values)) {}

  std::span<const double> operator[](InfosetId i) const {
    return {values_.data() + (*offsets_)[i],
            (*offsets_)[i + 1] - (*offsets_)[i]};
  }
  std::span<double> operator[](InfosetId i) {
    return {values_.data() + (*offsets_)[i],
            (*offsets_)[i + 1] - (*offsets_)[i]};
  }

  std::size_t num_infosets() const {
    return offsets_ ? offsets_->size() - 1 : 0;
  }
  std::size_t size() const { return values_.size(); }
  std::span<const double> flat() const { return values_; }
  std::span<double> flat() { return values_; }
  const Offsets& offsets() const { return offsets_; }

  bool operator==(const InfosetVectors& other) const {
    return values_ == other.values_ &&
           (offsets_ == other.offsets_ ||
            (offsets_ && other.offsets_ && *offsets_ == *other.offsets_));
  }

 private:
  Offsets offsets_;
  std::vector<double> values_;
};

struct ActionTag;
struct MemberTag;
// β, β̃ and perturbed profiles.
using BehaviorProfile = InfosetVectors<ActionTag>;
// μ: one simplex over member histories per infoset.
using BeliefSystem = InfosetVectors<MemberTag>;

struct Assessment {
  BehaviorProfile beta;
  BehaviorProfile beta_tilde;
  BeliefSystem mu;
};

BehaviorProfile uniform_profile(const Game& game);
BehaviorProfile make_profile(const Game& game, std::vector<double> flat);
BeliefSystem uniform_beliefs(const Game& game);
BeliefSystem make_beliefs(const Game& game, std::vector<double> flat);

// Largest violation of the simplex constraints (negative entries, sum != 1).
template <class Tag>
double simplex_defect(const InfosetVectors<Tag>& v);

// Clips negatives to zero and rescales each vector to sum to one.
template <class Tag>
void normalize(InfosetVectors<Tag>& v);

// Read-only view choosing, per infoset, between a base profile and an
// alternative one. A plain profile converts implicitly.
class ProfileView {
 public:
  ProfileView(const BehaviorProfile& base)  // NOLINT(runtime/explicit)
      : base_(&base) {}
  ProfileView(const BehaviorProfile& base, const BehaviorProfile& alt,
              const std::vector<char>& use_alt)
      : base_(&base), alt_(&alt), use_alt_(&use_alt) {}

  std::span<const double> operator[](InfosetId i) const {
    return use_alt_ && (*use_alt_)[i] ? (*alt_)[i] : (*base_)[i];
  }

 private:
  const BehaviorProfile* base_;
  const BehaviorProfile* alt_ = nullptr;
  const std::vector<char>* use_alt_ = nullptr;
};

}  // namespace efg
