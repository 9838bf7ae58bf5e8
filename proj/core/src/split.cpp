#include "revmine/split.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "revmine/errors.hpp"

namespace revmine {

std::vector<std::string> SplitAssignment::ids_in(Part p) const {
  std::vector<std::string> out;
  for (const auto& [id, part] : part_of)
    if (part == p) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

size_t SplitAssignment::count(Part p) const {
  size_t n = 0;
  for (const auto& [id, part] : part_of)
    if (part == p) ++n;
  return n;
}

SplitAssignment stratified_split(const Corpus& corpus, SplitFractions fractions,
                                 uint64_t seed) {
  const size_t n = corpus.size();
  if (n < 5)
    throw ArgumentError("stratified split needs at least 5 entries, got " +
                        std::to_string(n));
  const std::array<double, 3> frac = {fractions.train, fractions.val, fractions.test};
  double sum = frac[0] + frac[1] + frac[2];
  if (std::abs(sum - 1.0) > 1e-9)
    throw ArgumentError("split fractions must sum to 1");
  for (double f : frac)
    if (f < 0) throw ArgumentError("split fractions must be non-negative");

  // Exact integer part sizes; test takes the rounding remainder.
  std::array<long, 3> capacity;
  capacity[0] = std::lround(frac[0] * static_cast<double>(n));
  capacity[1] = std::lround(frac[1] * static_cast<double>(n));
  capacity[2] = static_cast<long>(n) - capacity[0] - capacity[1];
  if (capacity[2] < 0)
    throw ArgumentError("split fractions leave a negative test partition");

  const auto& entries = corpus.entries();
  std::array<std::array<double, kNumLabels>, 3> quota{};  // desired positives left
  std::vector<std::array<bool, kNumLabels>> labels(n);
  std::array<long, kNumLabels> label_remaining{};
  std::array<long, kNumLabels> label_total{};
  for (size_t i = 0; i < n; ++i) {
    for (size_t l = 0; l < kNumLabels; ++l) {
      labels[i][l] = entries[i].labels[l];
      if (labels[i][l]) {
        ++label_remaining[l];
        ++label_total[l];
      }
    }
  }
  for (size_t j = 0; j < 3; ++j)
    for (size_t l = 0; l < kNumLabels; ++l)
      quota[j][l] = frac[j] * static_cast<double>(label_remaining[l]);

  std::mt19937_64 rng(seed);
  std::vector<int> assigned(n, -1);
  size_t unassigned = n;

  // Part score for one example: remaining need across every label the example
  // carries, each normalized by the part fraction and the label's corpus
  // support so labels of very different frequency weigh comparably. The focus
  // label counts extra, keeping the rarest-first priority, while the other
  // terms stop frequent co-occurring labels from drifting out of balance in
  // the capacity-bound tail of the assignment.
  auto part_score = [&](size_t example, size_t focus_label, size_t j) {
    double s = 0.0;
    for (size_t l = 0; l < kNumLabels; ++l)
      if (labels[example][l] && label_total[l] > 0)
        s += quota[j][l] / (frac[j] * static_cast<double>(label_total[l]));
    s += 3.0 * quota[j][focus_label] /
         (frac[j] * static_cast<double>(label_total[focus_label]));
    return s;
  };

  auto pick_part = [&](size_t example, size_t focus_label) {
    // parts with size capacity left, or all when rounding exhausted them
    std::array<size_t, 3> cand{};
    size_t n_cand = 0;
    for (size_t j = 0; j < 3; ++j)
      if (capacity[j] > 0) cand[n_cand++] = j;
    if (n_cand == 0) {
      cand = {0, 1, 2};
      n_cand = 3;
    }
    std::array<size_t, 3> best{};
    size_t n_best = 0;
    double best_quota = -1e300;
    for (size_t c = 0; c < n_cand; ++c) {
      double q = part_score(example, focus_label, cand[c]);
      if (q > best_quota + 1e-12) {
        best_quota = q;
        n_best = 0;
        best[n_best++] = cand[c];
      } else if (q > best_quota - 1e-12) {
        best[n_best++] = cand[c];
      }
    }
    if (n_best > 1) {
      // tie on label quota: prefer the part with most size capacity
      long best_cap = -1;
      size_t n_best2 = 0;
      std::array<size_t, 3> best2{};
      for (size_t c = 0; c < n_best; ++c) {
        if (capacity[best[c]] > best_cap) {
          best_cap = capacity[best[c]];
          n_best2 = 0;
          best2[n_best2++] = best[c];
        } else if (capacity[best[c]] == best_cap) {
          best2[n_best2++] = best[c];
        }
      }
      best = best2;
      n_best = n_best2;
    }
    size_t j = best[n_best == 1 ? 0 : std::uniform_int_distribution<size_t>(0, n_best - 1)(rng)];
    assigned[example] = static_cast<int>(j);
    --capacity[j];
    --unassigned;
    for (size_t l = 0; l < kNumLabels; ++l) {
      if (labels[example][l]) {
        quota[j][l] -= 1.0;
        --label_remaining[l];
      }
    }
  };

  while (unassigned > 0) {
    // rarest label still outstanding
    long best_count = -1;
    size_t focus = kNumLabels;
    for (size_t l = 0; l < kNumLabels; ++l) {
      if (label_remaining[l] > 0 && (best_count < 0 || label_remaining[l] < best_count)) {
        best_count = label_remaining[l];
        focus = l;
      }
    }
    if (focus == kNumLabels) break;  // unreachable: every entry has >=1 label

    std::vector<size_t> batch;
    for (size_t i = 0; i < n; ++i)
      if (assigned[i] < 0 && labels[i][focus]) batch.push_back(i);
    std::shuffle(batch.begin(), batch.end(), rng);
    for (size_t i : batch) pick_part(i, focus);
  }

  // Greedy dealing leaves residual imbalance, worst on small corpora where one
  // example is worth whole percentage points. Repair by hill-climbing on
  // swaps: examples fall into at most 2^kNumLabels label-vector classes, and a
  // swap of one example of class a in part j1 with one of class b in part j2
  // keeps part sizes fixed while shifting label counts. Squared prevalence
  // deviation as the objective; examples within a class are interchangeable so
  // the search space stays tiny. Deterministic: ties never reach the rng.
  {
    constexpr size_t kClasses = size_t{1} << kNumLabels;
    std::array<size_t, 3> part_size{};
    for (size_t i = 0; i < n; ++i) ++part_size[static_cast<size_t>(assigned[i])];

    auto class_of = [&](size_t i) {
      size_t v = 0;
      for (size_t l = 0; l < kNumLabels; ++l)
        if (labels[i][l]) v |= size_t{1} << l;
      return v;
    };
    std::array<std::array<std::vector<size_t>, 3>, kClasses> members{};
    for (size_t i = 0; i < n; ++i)
      members[class_of(i)][static_cast<size_t>(assigned[i])].push_back(i);

    std::array<std::array<double, kNumLabels>, 3> count{};
    for (size_t i = 0; i < n; ++i)
      for (size_t l = 0; l < kNumLabels; ++l)
        if (labels[i][l]) count[static_cast<size_t>(assigned[i])][l] += 1.0;

    auto deviation = [&](size_t j, size_t l, double c) {
      if (part_size[j] == 0) return 0.0;
      double want = frac[j] * static_cast<double>(label_total[l]);
      return (c - want) / static_cast<double>(part_size[j]);
    };
    auto objective = [&] {
      double s = 0.0;
      for (size_t j = 0; j < 3; ++j)
        for (size_t l = 0; l < kNumLabels; ++l) {
          double d = deviation(j, l, count[j][l]);
          s += d * d;
        }
      return s;
    };

    double current = objective();
    for (int iter = 0; iter < 4096; ++iter) {
      double best_gain = 1e-12;
      size_t ba = 0, bb = 0, bj1 = 0, bj2 = 0;
      for (size_t a = 0; a < kClasses; ++a)
        for (size_t b = a + 1; b < kClasses; ++b)
          for (size_t j1 = 0; j1 < 3; ++j1)
            for (size_t j2 = 0; j2 < 3; ++j2) {
              if (j1 == j2 || members[a][j1].empty() || members[b][j2].empty())
                continue;
              double trial = current;
              for (size_t l = 0; l < kNumLabels; ++l) {
                bool in_a = a & (size_t{1} << l), in_b = b & (size_t{1} << l);
                if (in_a == in_b) continue;
                double delta = in_a ? 1.0 : -1.0;  // class a leaves j1 for j2
                for (auto [j, sign] : {std::pair{j1, -delta}, std::pair{j2, delta}}) {
                  double before = deviation(j, l, count[j][l]);
                  double after = deviation(j, l, count[j][l] + sign);
                  trial += after * after - before * before;
                }
              }
              if (current - trial > best_gain) {
                best_gain = current - trial;
                ba = a;
                bb = b;
                bj1 = j1;
                bj2 = j2;
              }
            }
      if (best_gain <= 1e-12) break;
      size_t ea = members[ba][bj1].back();
      size_t eb = members[bb][bj2].back();
      members[ba][bj1].pop_back();
      members[bb][bj2].pop_back();
      members[ba][bj2].push_back(ea);
      members[bb][bj1].push_back(eb);
      assigned[ea] = static_cast<int>(bj2);
      assigned[eb] = static_cast<int>(bj1);
      for (size_t l = 0; l < kNumLabels; ++l) {
        bool in_a = ba & (size_t{1} << l), in_b = bb & (size_t{1} << l);
        if (in_a == in_b) continue;
        double delta = in_a ? 1.0 : -1.0;
        count[bj1][l] -= delta;
        count[bj2][l] += delta;
      }
      current = objective();
    }
  }

  SplitAssignment out;
  out.fractions = fractions;
  out.seed = seed;
  for (size_t i = 0; i < n; ++i)
    out.part_of.emplace(entries[i].review.id, static_cast<Part>(assigned[i]));
  return out;
}

std::vector<const LabeledReview*> part_entries(const Corpus& corpus,
                                               const SplitAssignment& split, Part p) {
  std::vector<const LabeledReview*> out;
  for (const auto& e : corpus.entries()) {
    auto it = split.part_of.find(e.review.id);
    if (it != split.part_of.end() && it->second == p) out.push_back(&e);
  }
  return out;
}

}  // namespace revmine
