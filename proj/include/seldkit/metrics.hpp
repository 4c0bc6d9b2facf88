// SPDX-License-Identifier: Apache-2.0
//
// seldkit: spatial sound scene synthesis and SELD evaluation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELDKIT_METRICS_HPP
#define SELDKIT_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seldkit/common.hpp"
#include "seldkit/geometry.hpp"
#include "seldkit/seld_frame.hpp"

namespace seldkit {

constexpr std::size_t kFramesPerSegment = 10;  // 1 s of 100 ms frames

// ---------------------------------------------------------------------------
// Minimum-cost assignment
// ---------------------------------------------------------------------------

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exhaustive minimum over all permutations; used for tiny matrices where it
// is bit-identical to any optimal solver and trivially correct.
inline std::vector<std::size_t> assign_exhaustive(
    const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  std::vector<std::size_t> perm(n), best(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  best = perm;
  double best_total = kInf;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i][perm[i]];
    if (total < best_total) {
      best_total = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// O(n^3) shortest-augmenting-path assignment on a square cost matrix;
// returns the column chosen for each row.
inline std::vector<std::size_t> assign_hungarian(
    const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace detail

struct MatchedPair {
  std::size_t ref_index;
  std::size_t pred_index;
  double distance;  // radians
};

// Optimal pairing between reference and predicted directions: exactly
// min(|refs|, |preds|) pairs with minimum total angular distance. The matrix
// is padded square with zero-cost dummies, which leaves the real pairing
// optimal and everything beyond the shorter side unmatched.
inline std::vector<MatchedPair> match_directions(const std::vector<Direction>& refs,
                                                 const std::vector<Direction>& preds) {
  const std::size_t r = refs.size();
  const std::size_t p = preds.size();
  if (r == 0 || p == 0) return {};
  const std::size_t n = std::max(r, p);
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      cost[i][j] = angular_distance(refs[i], preds[j]);
    }
  }
  const std::vector<std::size_t> row_to_col =
      n <= 3 ? detail::assign_exhaustive(cost) : detail::assign_hungarian(cost);
  std::vector<MatchedPair> out;
  out.reserve(std::min(r, p));
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t j = row_to_col[i];
    if (j < p) out.push_back({i, j, cost[i][j]});
  }
  return out;
}

// First member minimizing the summed angular distance to the others (ties go
// to the earliest occurrence).
inline std::size_t medoid_index(const std::vector<Direction>& dirs) {
  if (dirs.empty()) {
    throw std::invalid_argument("medoid_index: empty set");
  }
  std::size_t best = 0;
  double best_sum = detail::kInf;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      sum += angular_distance(dirs[i], dirs[j]);
    }
    if (sum < best_sum) {
      best_sum = sum;
      best = i;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Scores
// ---------------------------------------------------------------------------

struct MetricsReport {
  std::string name;
  double er_20 = 0.0;
  double f_20 = 1.0;
  double le_cd = 0.0;
  bool le_defined = false;
  double lr_cd = 1.0;
  double er = 0.0;
  double f_seg = 1.0;
  double doa_error_deg = 0.0;
  bool doa_error_defined = false;
  double frame_recall = 1.0;
};

// Count statistics for one or more scored files. Files are combined by
// summing the counts, never by averaging per-file ratios.
class MetricsAccumulator {
 public:
  void add(const std::vector<SeldFrame>& ref, const std::vector<SeldFrame>& pred,
           double threshold_deg = 20.0) {
    const std::size_t num_frames = std::max(ref.size(), pred.size());
    static const SeldFrame kEmpty;
    const auto frame_at = [](const std::vector<SeldFrame>& v, std::size_t i)
        -> const SeldFrame& { return i < v.size() ? v[i] : kEmpty; };

    // Frame-level, class-agnostic localization (DoA error and frame recall).
    for (std::size_t f = 0; f < num_frames; ++f) {
      const SeldFrame& rf = frame_at(ref, f);
      const SeldFrame& pf = frame_at(pred, f);
      ++fr_total_;
      if (rf.events.size() == pf.events.size()) ++fr_correct_;
      std::vector<Direction> rd, pd;
      for (const auto& e : rf.events) rd.push_back(e.direction);
      for (const auto& e : pf.events) pd.push_back(e.direction);
      for (const MatchedPair& m : match_directions(rd, pd)) {
        de_sum_ += m.distance;
        ++de_matches_;
      }
    }

    // Segment-level scores.
    const std::size_t num_segments =
        num_frames == 0 ? 0 : (num_frames + kFramesPerSegment - 1) / kFramesPerSegment;
    for (std::size_t s = 0; s < num_segments; ++s) {
      const std::size_t f_lo = s * kFramesPerSegment;
      const std::size_t f_hi = std::min(num_frames, f_lo + kFramesPerSegment);

      // Class activity and per-(class, track) direction sets for the segment.
      struct ClassTracks {
        std::map<int, std::vector<Direction>> ref_tracks;
        std::map<int, std::vector<Direction>> pred_tracks;
      };
      std::map<int, ClassTracks> by_class;
      for (std::size_t f = f_lo; f < f_hi; ++f) {
        for (const auto& e : frame_at(ref, f).events) {
          by_class[e.class_id].ref_tracks[e.track_id].push_back(e.direction);
        }
        for (const auto& e : frame_at(pred, f).events) {
          by_class[e.class_id].pred_tracks[e.track_id].push_back(e.direction);
        }
      }

      // Class-only detection counts from segment activity alone.
      std::size_t tp_det = 0, fp_det = 0, fn_det = 0, nref_det = 0;
      for (const auto& [cls, tracks] : by_class) {
        (void)cls;
        const bool in_ref = !tracks.ref_tracks.empty();
        const bool in_pred = !tracks.pred_tracks.empty();
        if (in_ref) ++nref_det;
        if (in_ref && in_pred) ++tp_det;
        if (!in_ref && in_pred) ++fp_det;
        if (in_ref && !in_pred) ++fn_det;
      }
      tp_det_ += tp_det;
      fp_det_ += fp_det;
      fn_det_ += fn_det;
      nref_det_ += nref_det;
      s_det_ += std::min(fn_det, fp_det);
      d_det_ += fn_det > fp_det ? fn_det - fp_det : 0;
      i_det_ += fp_det > fn_det ? fp_det - fn_det : 0;

      // Location-aware counts: within-class matching of per-track
      // segment medoids.
      std::size_t tp_loc = 0, fp_loc = 0, fn_loc = 0, nref_loc = 0;
      for (const auto& [cls, tracks] : by_class) {
        (void)cls;
        std::vector<Direction> ref_reps, pred_reps;
        for (const auto& [tid, dirs] : tracks.ref_tracks) {
          (void)tid;
          ref_reps.push_back(dirs[medoid_index(dirs)]);
        }
        for (const auto& [tid, dirs] : tracks.pred_tracks) {
          (void)tid;
          pred_reps.push_back(dirs[medoid_index(dirs)]);
        }
        const std::size_t r = ref_reps.size();
        const std::size_t p = pred_reps.size();
        nref_loc += r;
        lr_total_ += r;
        const std::vector<MatchedPair> pairs = match_directions(ref_reps, pred_reps);
        std::size_t close = 0;
        for (const MatchedPair& m : pairs) {
          le_sum_ += m.distance;
          ++le_matches_;
          if (rad2deg(m.distance) <= threshold_deg) ++close;
        }
        lr_matched_ += pairs.size();
        const std::size_t far = pairs.size() - close;
        tp_loc += close;
        fp_loc += far + (p - pairs.size());
        fn_loc += far + (r - pairs.size());
      }
      tp_loc_ += tp_loc;
      fp_loc_ += fp_loc;
      fn_loc_ += fn_loc;
      nref_loc_ += nref_loc;
      s_loc_ += std::min(fn_loc, fp_loc);
      d_loc_ += fn_loc > fp_loc ? fn_loc - fp_loc : 0;
      i_loc_ += fp_loc > fn_loc ? fp_loc - fn_loc : 0;
    }
  }

  MetricsReport finalize(const std::string& name = "") const {
    MetricsReport r;
    r.name = name;
    r.er = static_cast<double>(s_det_ + d_det_ + i_det_) /
                std::max<double>(1.0, static_cast<double>(nref_det_));
    const double denom_det = static_cast<double>(2 * tp_det_ + fp_det_ + fn_det_);
    r.f_seg = denom_det > 0.0 ? 2.0 * static_cast<double>(tp_det_) / denom_det : 1.0;
    r.doa_error_defined = de_matches_ > 0;
    r.doa_error_deg = r.doa_error_defined ? rad2deg(de_sum_ / static_cast<double>(de_matches_)) : 0.0;
    r.frame_recall = fr_total_ > 0
                    ? static_cast<double>(fr_correct_) / static_cast<double>(fr_total_)
                    : 1.0;
    r.er_20 = static_cast<double>(s_loc_ + d_loc_ + i_loc_) /
              std::max<double>(1.0, static_cast<double>(nref_loc_));
    const double denom_loc = static_cast<double>(2 * tp_loc_ + fp_loc_ + fn_loc_);
    r.f_20 = denom_loc > 0.0 ? 2.0 * static_cast<double>(tp_loc_) / denom_loc : 1.0;
    r.le_defined = le_matches_ > 0;
    r.le_cd = r.le_defined ? rad2deg(le_sum_ / static_cast<double>(le_matches_)) : 0.0;
    r.lr_cd = lr_total_ > 0
                  ? static_cast<double>(lr_matched_) / static_cast<double>(lr_total_)
                  : 1.0;
    return r;
  }

 private:
  // Segment-level class detection.
  std::size_t tp_det_ = 0, fp_det_ = 0, fn_det_ = 0, s_det_ = 0, d_det_ = 0, i_det_ = 0, nref_det_ = 0;
  // Frame-level localization.
  double de_sum_ = 0.0;
  std::size_t de_matches_ = 0, fr_correct_ = 0, fr_total_ = 0;
  // Location-aware detection.
  std::size_t tp_loc_ = 0, fp_loc_ = 0, fn_loc_ = 0, s_loc_ = 0, d_loc_ = 0, i_loc_ = 0, nref_loc_ = 0;
  // Class-aware localization.
  double le_sum_ = 0.0;
  std::size_t le_matches_ = 0, lr_matched_ = 0, lr_total_ = 0;
};

// Convenience single-pair entry points.
inline std::pair<double, double> segment_er_f(const std::vector<SeldFrame>& ref,
                                              const std::vector<SeldFrame>& pred) {
  MetricsAccumulator acc;
  acc.add(ref, pred);
  const MetricsReport r = acc.finalize();
  return {r.er, r.f_seg};
}

inline std::pair<double, double> doa_error_frame_recall(const std::vector<SeldFrame>& ref,
                                                        const std::vector<SeldFrame>& pred) {
  MetricsAccumulator acc;
  acc.add(ref, pred);
  const MetricsReport r = acc.finalize();
  return {r.doa_error_deg, r.frame_recall};
}

inline std::pair<double, double> location_aware_detection(
    const std::vector<SeldFrame>& ref, const std::vector<SeldFrame>& pred,
    double threshold_deg = 20.0) {
  MetricsAccumulator acc;
  acc.add(ref, pred, threshold_deg);
  const MetricsReport r = acc.finalize();
  return {r.er_20, r.f_20};
}

inline std::pair<double, double> class_aware_localization(
    const std::vector<SeldFrame>& ref, const std::vector<SeldFrame>& pred) {
  MetricsAccumulator acc;
  acc.add(ref, pred);
  const MetricsReport r = acc.finalize();
  return {r.le_cd, r.lr_cd};
}

// ---------------------------------------------------------------------------
// Ranking
// ---------------------------------------------------------------------------

// Orders systems by the sum of their four per-metric ranks (ER_20 and LE_CD
// ascending, F_20 and LR_CD descending; a rank is one plus the number of
// strictly better systems). Ties break by ER_20, then name. Returns indices
// into `reports` in final order. An undefined LE_CD ranks behind every
// defined one.
inline std::vector<std::size_t> rank_systems(const std::vector<MetricsReport>& reports) {
  if (reports.empty()) {
    throw std::invalid_argument("rank_systems: no reports");
  }
  const std::size_t n = reports.size();
  const auto le_key = [](const MetricsReport& r) {
    return r.le_defined ? r.le_cd : detail::kInf;
  };
  std::vector<std::size_t> rank_sum(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t er_rank = 1, f_rank = 1, le_rank = 1, lr_rank = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (reports[j].er_20 < reports[i].er_20) ++er_rank;
      if (reports[j].f_20 > reports[i].f_20) ++f_rank;
      if (le_key(reports[j]) < le_key(reports[i])) ++le_rank;
      if (reports[j].lr_cd > reports[i].lr_cd) ++lr_rank;
    }
    rank_sum[i] = er_rank + f_rank + le_rank + lr_rank;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rank_sum[a] != rank_sum[b]) return rank_sum[a] < rank_sum[b];
    if (reports[a].er_20 != reports[b].er_20) return reports[a].er_20 < reports[b].er_20;
    return reports[a].name < reports[b].name;
  });
  return order;
}

// ---------------------------------------------------------------------------
// Label files
// ---------------------------------------------------------------------------

// Reads a label CSV as written by emit_metadata. Frames missing from the
// file come back empty; angles are converted to radians.
inline std::vector<SeldFrame> parse_label_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw std::runtime_error("parse_label_file: cannot open " + path);
  }
  std::string line;
  if (!std::getline(f, line)) {
    throw std::runtime_error("parse_label_file: empty file " + path);
  }
  std::vector<SeldFrame> frames;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    long vals[5];
    char comma;
    bool ok = true;
    for (int i = 0; i < 5 && ok; ++i) {
      if (!(ss >> vals[i])) ok = false;
      if (ok && i < 4 && !(ss >> comma && comma == ',')) ok = false;
    }
    std::string rest;
    if (ok && ss >> rest) ok = false;  // trailing junk
    if (!ok) {
      throw std::runtime_error("parse_label_file: malformed row at " + path + ":" +
                               std::to_string(line_no));
    }
    if (vals[0] < 0) {
      throw std::runtime_error("parse_label_file: negative frame index at " + path +
                               ":" + std::to_string(line_no));
    }
    if (vals[4] < -90 || vals[4] > 90) {
      throw std::runtime_error("parse_label_file: elevation out of range at " + path +
                               ":" + std::to_string(line_no));
    }
    const std::size_t frame = static_cast<std::size_t>(vals[0]);
    if (frame >= frames.size()) frames.resize(frame + 1);
    SeldEvent e;
    e.class_id = static_cast<int>(vals[1]);
    e.track_id = static_cast<int>(vals[2]);
    e.direction = Direction::from_degrees(static_cast<double>(vals[3]),
                                          static_cast<double>(vals[4]));
    frames[frame].events.push_back(e);
  }
  return frames;
}

}  // namespace seldkit

#endif  // SELDKIT_METRICS_HPP
