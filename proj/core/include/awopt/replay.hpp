#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "awopt/envs/env.hpp"
#include "awopt/rng.hpp"

namespace awopt::replay {

// Which transitions count as "successful" for the actor filter: all
// transitions of success episodes (default), or literally only the final
// steps that received reward 1.
enum class ActorFilter : std::uint8_t { kEpisode = 0, kFinalStep = 1 };

struct Batch {
  std::vector<envs::Transition> transitions;
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;

  std::size_t size() const { return transitions.size(); }
};

// Success-partitioned transition store. Transitions from success episodes go
// to the positive partition, the rest to the negative one; each partition
// evicts FIFO at capacity. Sampling is uniform within a partition, with
// replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity_per_partition = 200000);

  void insert_episode(const envs::Episode& episode);

  std::size_t positive_size() const { return positives_.size(); }
  std::size_t negative_size() const { return negatives_.size(); }
  std::size_t size() const { return positives_.size() + negatives_.size(); }
  bool empty() const { return size() == 0; }
  std::uint64_t inserted_total() const { return inserted_total_; }

  // Half the batch from each partition (positive side gets the ceiling).
  // Falls back to the nonempty partition when the other is empty; throws
  // EmptyBufferError when both are.
  Batch sample_critic_batch(std::size_t batch_size, Rng& rng) const;

  // Positive transitions only. Under kFinalStep only reward-1 steps qualify.
  Batch sample_actor_batch(std::size_t batch_size, Rng& rng,
                           ActorFilter filter = ActorFilter::kEpisode) const;

  // Uniform over everything stored, ignoring the partition split.
  Batch sample_uniform_batch(std::size_t batch_size, Rng& rng) const;

  const std::deque<envs::Transition>& positives() const { return positives_; }
  const std::deque<envs::Transition>& negatives() const { return negatives_; }

 private:
  std::size_t capacity_;
  std::deque<envs::Transition> positives_;
  std::deque<envs::Transition> negatives_;
  std::uint64_t inserted_total_ = 0;
};

}  // namespace awopt::replay
