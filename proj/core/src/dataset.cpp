#include <algorithm>
#include <numeric>
#include <random>
#include <thread>

#include "telephantom/collision_net.hpp"
#include "telephantom/error.hpp"

namespace telephantom {
namespace {

constexpr Eigen::Index kShardSize = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void fill_shard(const KinematicModel& model, std::uint64_t seed, Eigen::Index shard, Eigen::Index n,
                CollisionDataset& out) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(shard))));
  const Eigen::Index begin = shard * kShardSize;
  const Eigen::Index end = std::min(n, begin + kShardSize);
  const auto lower = model.lower_limits();
  const auto upper = model.upper_limits();
  for (Eigen::Index i = begin; i < end; ++i) {
    JointConfig q(lower.size());
    for (Eigen::Index j = 0; j < q.size(); ++j) {
      q[j] = std::uniform_real_distribution<double>(lower[j], upper[j])(rng);
    }
    const auto labels = check_self_collision(model, q);
    out.configs.col(i) = q;
    for (std::size_t l = 0; l < labels.size(); ++l) {
      out.labels(static_cast<Eigen::Index>(l), i) = labels[l] ? 1.0 : 0.0;
    }
  }
}

}  // namespace

std::vector<Eigen::Index> CollisionDataset::indices(Split s) const {
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (split[i] == s) out.push_back(static_cast<Eigen::Index>(i));
  }
  return out;
}

std::vector<Eigen::Index> CollisionDataset::colliding_indices(Split s) const {
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (split[i] == s && colliding(static_cast<Eigen::Index>(i))) out.push_back(static_cast<Eigen::Index>(i));
  }
  return out;
}

double CollisionDataset::positive_rate() const {
  if (size() == 0) return 0.0;
  Eigen::Index pos = 0;
  for (Eigen::Index i = 0; i < size(); ++i) pos += colliding(i) ? 1 : 0;
  return static_cast<double>(pos) / static_cast<double>(size());
}

CollisionDataset CollisionDataset::subset(const std::vector<Eigen::Index>& idx) const {
  CollisionDataset out;
  out.configs.resize(configs.rows(), static_cast<Eigen::Index>(idx.size()));
  out.labels.resize(labels.rows(), static_cast<Eigen::Index>(idx.size()));
  out.split.reserve(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out.configs.col(static_cast<Eigen::Index>(k)) = configs.col(idx[k]);
    out.labels.col(static_cast<Eigen::Index>(k)) = labels.col(idx[k]);
    out.split.push_back(split[static_cast<std::size_t>(idx[k])]);
  }
  return out;
}

CollisionDataset generate_dataset(const KinematicModel& model, Eigen::Index n, std::uint64_t seed,
                                  const DatasetOptions& options) {
  if (n < 1) throw Error("generate_dataset: n must be at least 1");
  CollisionDataset ds;
  ds.configs.resize(static_cast<Eigen::Index>(model.joint_count()), n);
  ds.labels.resize(static_cast<Eigen::Index>(model.link_count()), n);

  const Eigen::Index shards = (n + kShardSize - 1) / kShardSize;
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(shards)));
  if (workers == 1) {
    for (Eigen::Index s = 0; s < shards; ++s) fill_shard(model, seed, s, n, ds);
  } else {
    // Shards write disjoint columns, so workers need no synchronization.
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (Eigen::Index s = w; s < shards; s += workers) fill_shard(model, seed, s, n, ds);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(splitmix64(seed ^ 0x5eed5eed5eedULL));
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(options.train_fraction * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::llround(options.val_fraction * static_cast<double>(n)));
  ds.split.assign(static_cast<std::size_t>(n), Split::kTest);
  for (std::size_t k = 0; k < perm.size(); ++k) {
    const Split s = k < n_train ? Split::kTrain : (k < n_train + n_val ? Split::kVal : Split::kTest);
    ds.split[static_cast<std::size_t>(perm[k])] = s;
  }
  return ds;
}

}  // namespace telephantom
