#include "awopt/replay.hpp"

#include "awopt/errors.hpp"

namespace awopt::replay {
namespace {

void sample_from(const std::deque<envs::Transition>& partition, std::size_t count,
                 Rng& rng, std::vector<envs::Transition>& out) {
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(partition[rng.uniform_int(static_cast<std::uint32_t>(partition.size()))]);
  }
}

}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity_per_partition)
    : capacity_(capacity_per_partition) {}

void ReplayBuffer::insert_episode(const envs::Episode& episode) {
  auto& partition = episode.success ? positives_ : negatives_;
  for (const envs::Transition& t : episode.transitions) {
    envs::Transition copy = t;
    copy.episode_success = episode.success;
    copy.episode_id = episode.id;
    partition.push_back(std::move(copy));
    if (partition.size() > capacity_) partition.pop_front();
    ++inserted_total_;
  }
}

Batch ReplayBuffer::sample_critic_batch(std::size_t batch_size, Rng& rng) const {
  if (empty()) throw EmptyBufferError("sample_critic_batch: buffer is empty");
  Batch batch;
  batch.transitions.reserve(batch_size);

  std::size_t from_positive = (batch_size + 1) / 2;
  std::size_t from_negative = batch_size - from_positive;
  if (positives_.empty()) {
    from_positive = 0;
    from_negative = batch_size;
  } else if (negatives_.empty()) {
    from_positive = batch_size;
    from_negative = 0;
  }
  sample_from(positives_, from_positive, rng, batch.transitions);
  sample_from(negatives_, from_negative, rng, batch.transitions);
  batch.positive_count = from_positive;
  batch.negative_count = from_negative;
  return batch;
}

Batch ReplayBuffer::sample_actor_batch(std::size_t batch_size, Rng& rng,
                                       ActorFilter filter) const {
  if (positives_.empty()) {
    throw EmptyBufferError("sample_actor_batch: positive partition is empty");
  }
  Batch batch;
  batch.transitions.reserve(batch_size);
  if (filter == ActorFilter::kEpisode) {
    sample_from(positives_, batch_size, rng, batch.transitions);
  } else {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < positives_.size(); ++i) {
      if (positives_[i].reward == 1.0) eligible.push_back(i);
    }
    if (eligible.empty()) {
      throw EmptyBufferError("sample_actor_batch: no reward-1 transitions stored");
    }
    for (std::size_t i = 0; i < batch_size; ++i) {
      batch.transitions.push_back(
          positives_[eligible[rng.uniform_int(static_cast<std::uint32_t>(eligible.size()))]]);
    }
  }
  batch.positive_count = batch.transitions.size();
  return batch;
}

Batch ReplayBuffer::sample_uniform_batch(std::size_t batch_size, Rng& rng) const {
  if (empty()) throw EmptyBufferError("sample_uniform_batch: buffer is empty");
  Batch batch;
  batch.transitions.reserve(batch_size);
  const std::size_t total = size();
  for (std::size_t i = 0; i < batch_size; ++i) {
    const std::size_t idx = rng.uniform_int(static_cast<std::uint32_t>(total));
    if (idx < positives_.size()) {
      batch.transitions.push_back(positives_[idx]);
      ++batch.positive_count;
    } else {
      batch.transitions.push_back(negatives_[idx - positives_.size()]);
      ++batch.negative_count;
    }
  }
  return batch;
}

}  // namespace awopt::replay
