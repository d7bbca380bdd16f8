#include "freelab/circle_search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <climits>
#include <cmath>
#include <thread>

namespace freelab {

LipTarget LipTarget::sqrt_form(long long radicand) {
  if (radicand < 1) throw std::invalid_argument("radicand must be positive");
  LipTarget t;
  t.kind = Kind::SqrtForm;
  t.radicand = radicand;
  return t;
}

LipTarget LipTarget::exact(Rational v) {
  if (v <= 0) throw std::invalid_argument("target must be positive");
  LipTarget t;
  t.kind = Kind::Exact;
  t.value = std::move(v);
  return t;
}

double LipTarget::approx() const {
  return kind == Kind::SqrtForm ? (std::sqrt(static_cast<double>(radicand)) - 1.0) / 8.0
                                : to_double(value);
}

std::string LipTarget::describe() const {
  if (kind == Kind::SqrtForm)
    return "(sqrt(" + std::to_string(radicand) + ")-1)/8";
  return rational_str(value);
}

bool LipTarget::ratio_ge(long long num, long long den) const {
  if (den <= 0 || num < 0) throw std::invalid_argument("ratio_ge needs num >= 0, den > 0");
  if (kind == Kind::SqrtForm) {
    // num/den >= (sqrt(R)-1)/8  <=>  (8 num + den)^2 >= R den^2
    const long long lhs = 8 * num + den;
    return lhs * lhs >= radicand * den * den;
  }
  return Rational(num, den) >= value;
}

bool LipTarget::rational_ge(const Rational& v) const {
  if (kind == Kind::Exact) return v >= value;
  // v >= (sqrt(R)-1)/8  <=>  (8v + 1)^2 >= R (both sides nonnegative)
  const Rational lhs = 8 * v + 1;
  if (lhs < 0) return false;
  return lhs * lhs >= Rational(radicand);
}

Theorem32Bound theorem32_bound(long long n) {
  if (n < 1) throw std::invalid_argument("circle size must be positive");
  Theorem32Bound b;
  b.target = LipTarget::sqrt_form(8 * n + 1);
  b.approx = b.target.approx();
  b.small_n_warning = n < 10;
  return b;
}

// ---------------------------------------------------------------------------
// Branch-and-bound search

namespace {

constexpr int kMirrorEq = 0;
constexpr int kMirrorFree = 1;

struct SearchShared {
  std::atomic<long long> nodes{0};
  std::atomic<bool> stop{false};
  std::atomic<long long> found_job{LLONG_MAX};
  long long max_nodes;
  std::chrono::steady_clock::time_point deadline;
};

// d >= 2*target, exact.
bool ge_twice_target(const LipTarget& t, long long d) {
  if (t.kind == LipTarget::Kind::SqrtForm) {
    // d >= (sqrt(R)-1)/4  <=>  (4d+1)^2 >= R
    const long long lhs = 4 * d + 1;
    return lhs * lhs >= t.radicand;
  }
  return Rational(d) >= 2 * t.value;
}

bool target_le_one(const LipTarget& t) {
  if (t.kind == LipTarget::Kind::SqrtForm) return t.radicand <= 81;
  return t.value <= 1;
}

class JobRunner {
 public:
  struct Result {
    enum class Kind { Exhausted, Found, Suspended } kind = Kind::Exhausted;
    SearchPrefix cx;
    std::vector<SearchPrefix> pending;
  };

  JobRunner(int n, const LipTarget& target, SearchShared& sh)
      : n_(n), target_(&target), sh_(&sh),
        order_(n + 1, -1), parent_(n + 1, -1), pos_of_(n + 1, -1), mirror_after_(n + 1, kMirrorEq) {
    order_[0] = 0;  // centre
  }

  Result run(const SearchPrefix& prefix, long long job_index) {
    reset();
    Result res;
    // Replay the prefix with full checks; a pruned prefix means the whole
    // job is already settled.
    for (const auto& [p, q] : prefix) {
      const int k = depth_ + 1;
      if (p < 1 || p > n_ || pos_of_[p] != -1 || q < 0 || q >= k) return res;
      if (k == 1 && (p != 1 || q != 0)) return res;
      if (!check_candidate(k, p, q)) return res;
      assign(k, p, q);
    }

    struct Frame {
      std::vector<std::pair<int, int>> cands;
      std::size_t next = 0;
    };
    std::vector<Frame> frames;
    frames.push_back({generate(depth_ + 1), 0});

    long long since_tick = 0;
    while (!frames.empty()) {
      if (sh_->stop.load(std::memory_order_relaxed)) {
        res.kind = Result::Kind::Suspended;
        res.pending = collect_pending(prefix, frames);
        return res;
      }
      if (job_index > sh_->found_job.load(std::memory_order_relaxed)) {
        res.kind = Result::Kind::Exhausted;  // a DFS-earlier job already found one
        return res;
      }
      Frame& fr = frames.back();
      if (fr.next == fr.cands.size()) {
        frames.pop_back();
        if (!frames.empty()) unassign(depth_);
        continue;
      }
      const auto [p, q] = fr.cands[fr.next++];
      if (++since_tick >= 4096) {
        since_tick = 0;
        if (std::chrono::steady_clock::now() >= sh_->deadline) sh_->stop.store(true);
      }
      if (!check_candidate(depth_ + 1, p, q)) continue;
      assign(depth_ + 1, p, q);
      if (depth_ == n_) {
        res.kind = Result::Kind::Found;
        for (int k = 1; k <= n_; ++k) res.cx.emplace_back(order_[k], parent_[k]);
        return res;
      }
      frames.push_back({generate(depth_ + 1), 0});
    }
    return res;
  }

 private:
  void reset() {
    depth_ = 0;
    std::fill(order_.begin(), order_.end(), -1);
    std::fill(parent_.begin(), parent_.end(), -1);
    std::fill(pos_of_.begin(), pos_of_.end(), -1);
    order_[0] = 0;
    mirror_after_[0] = kMirrorEq;
  }

  long long dist(int a, int b) const {
    if (a == b) return 0;
    if (a == 0 || b == 0) return n_;
    return circle_rim_distance(n_, a, b);
  }

  int mirror(int p) const {
    const int m = ((2 - p) % n_ + n_) % n_;
    return m == 0 ? n_ : m;
  }

  std::vector<std::pair<int, int>> generate(int k) const {
    std::vector<std::pair<int, int>> cands;
    if (k == 1) {
      cands.emplace_back(1, 0);  // mu_1 = x_1 (rotations quotiented)
      return cands;
    }
    const int state = mirror_after_[k - 1];
    for (int p = 1; p <= n_; ++p) {
      if (pos_of_[p] != -1) continue;
      if (state == kMirrorEq && p > mirror(p)) continue;  // reflection canonicity
      for (int q = 0; q < k; ++q) cands.emplace_back(p, q);
    }
    return cands;
  }

  /// One node of work: all prune tests for placing p at position k under q.
  bool check_candidate(int k, int p, int q) {
    const long long used = sh_->nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (used >= sh_->max_nodes) sh_->stop.store(true);

    // Chain-gap prune: a rim-to-rim link of length >= 2*target cannot occur
    // in any completion (unit-step rim paths bound consecutive chain gaps by
    // twice the worst Lipschitz constant in range).
    if (q >= 1 && ge_twice_target(*target_, dist(p, order_[q]))) return false;

    // New pairs against every placed point. Segments with both images equal
    // to the pair itself have ratio one and the centre pairs stay at ratio
    // one throughout, so both are skipped (the caller rejects target <= 1
    // upfront).
    for (int t = 1; t < k; ++t) {
      const int y = order_[t];
      const long long dxy = dist(p, y);
      int a = k, b = t;
      while (true) {
        if (a > b) {
          a = (a == k) ? q : parent_[a];
        } else {
          b = parent_[b];
        }
        if (a == b) break;
        const long long dimg = dist(order_[a], order_[b]);
        if (target_->ratio_ge(dimg, dxy)) return false;
      }
    }
    return true;
  }

  void assign(int k, int p, int q) {
    order_[k] = p;
    parent_[k] = q;
    pos_of_[p] = k;
    int state = mirror_after_[k - 1];
    if (state == kMirrorEq) {
      const int m = mirror(p);
      state = (p < m) ? kMirrorFree : kMirrorEq;
    }
    mirror_after_[k] = state;
    ++depth_;
  }

  void unassign(int k) {
    pos_of_[order_[k]] = -1;
    order_[k] = -1;
    parent_[k] = -1;
    --depth_;
  }

  template <class Frames>
  std::vector<SearchPrefix> collect_pending(const SearchPrefix& prefix, const Frames& frames) {
    // Deepest frames come first so a resumed run continues in DFS order.
    std::vector<SearchPrefix> jobs;
    const int base_depth = static_cast<int>(prefix.size());
    for (int fi = static_cast<int>(frames.size()) - 1; fi >= 0; --fi) {
      SearchPrefix stem;
      for (int k = 1; k <= base_depth + fi; ++k) stem.emplace_back(order_[k], parent_[k]);
      for (std::size_t ci = frames[fi].next; ci < frames[fi].cands.size(); ++ci) {
        SearchPrefix job = stem;
        job.push_back(frames[fi].cands[ci]);
        jobs.push_back(std::move(job));
      }
    }
    return jobs;
  }

  int n_;
  const LipTarget* target_;
  SearchShared* sh_;
  std::vector<int> order_, parent_, pos_of_, mirror_after_;
  int depth_ = 0;
};

}  // namespace

SearchCertificate certify_circle_lower_bound(int n, const LipTarget& target,
                                             const SearchBudget& budget, int threads,
                                             const std::vector<SearchPrefix>* resume) {
  if (n < 3) throw std::invalid_argument("circle search needs n >= 3");
  if (budget.max_nodes <= 0 || budget.max_seconds <= 0)
    throw std::invalid_argument("budget must be positive");
  const auto t0 = std::chrono::steady_clock::now();

  SearchCertificate cert;
  cert.n = n;
  cert.target = target;

  // The identity retraction is 1-Lipschitz in every system, so no system
  // sits below a target of 1 or less.
  if (target_le_one(target)) {
    cert.outcome = SearchOutcome::Certified;
    cert.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cert;
  }

  std::vector<SearchPrefix> jobs;
  if (resume && !resume->empty()) jobs = *resume;
  else jobs.push_back({});

  SearchShared sh;
  sh.max_nodes = budget.max_nodes;
  sh.deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                         std::chrono::duration<double>(budget.max_seconds));

  const int workers = std::max(1, threads);
  std::vector<JobRunner::Result> results(jobs.size());
  std::vector<char> started(jobs.size(), 0);
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    JobRunner runner(n, target, sh);
    while (true) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) break;
      started[j] = 1;
      if (sh.stop.load()) {
        JobRunner::Result r;
        r.kind = JobRunner::Result::Kind::Suspended;
        r.pending = {jobs[j]};
        results[j] = std::move(r);
        continue;
      }
      results[j] = runner.run(jobs[j], static_cast<long long>(j));
      if (results[j].kind == JobRunner::Result::Kind::Found) {
        long long expect = sh.found_job.load();
        while (static_cast<long long>(j) < expect &&
               !sh.found_job.compare_exchange_weak(expect, static_cast<long long>(j))) {
        }
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  cert.nodes_explored = sh.nodes.load();
  cert.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const long long found = sh.found_job.load();
  if (found != LLONG_MAX) {
    cert.outcome = SearchOutcome::Counterexample;
    cert.counterexample = results[found].cx;
    return cert;
  }
  bool suspended = false;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!started[j]) {
      suspended = true;
      cert.frontier.push_back(jobs[j]);
    } else if (results[j].kind == JobRunner::Result::Kind::Suspended) {
      suspended = true;
      for (auto& p : results[j].pending) cert.frontier.push_back(std::move(p));
    }
  }
  cert.outcome = suspended ? SearchOutcome::Indeterminate : SearchOutcome::Certified;
  return cert;
}

// ---------------------------------------------------------------------------
// Heuristic constructions

CircleStrategy strategy_from_string(const std::string& s) {
  if (s == "peel-one-arc") return CircleStrategy::PeelOneArc;
  if (s == "peel-balanced") return CircleStrategy::PeelBalanced;
  if (s == "greedy-min-lip") return CircleStrategy::GreedyMinLip;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

std::string strategy_name(CircleStrategy s) {
  switch (s) {
    case CircleStrategy::PeelOneArc: return "peel-one-arc";
    case CircleStrategy::PeelBalanced: return "peel-balanced";
    case CircleStrategy::GreedyMinLip: return "greedy-min-lip";
  }
  return "?";
}

namespace {

/// Parent = the placed rim neighbour with the earliest position.
int adjacent_parent(int rim, int n, const std::vector<int>& pos_of_rim) {
  const int left = rim == 1 ? n : rim - 1;
  const int right = rim == n ? 1 : rim + 1;
  const int pl = pos_of_rim[left], pr = pos_of_rim[right];
  if (pl < 0 && pr < 0) return -1;
  if (pl < 0) return right;
  if (pr < 0) return left;
  return pl < pr ? left : right;
}

std::vector<int> peel_rim_order(int n, bool balanced) {
  std::vector<int> rims;
  rims.reserve(n);
  if (!balanced) {
    for (int r = 1; r <= n; ++r) rims.push_back(r);
    return rims;
  }
  rims.push_back(1);
  int right = 1, left = n + 1;
  bool take_right = true;
  while (static_cast<int>(rims.size()) < n) {
    if (take_right && right + 1 < left) rims.push_back(++right);
    else if (!take_right && left - 1 > right) rims.push_back(--left);
    take_right = !take_right;
  }
  return rims;
}

template <class S>
RetractionSystem greedy_impl(const PointedMetricSpace& sp) {
  const int n = sp.size();
  const auto& dm = sp.raw<S>();
  auto D = [&](int a, int b) -> const S& { return dm[static_cast<std::size_t>(a) * n + b]; };

  std::vector<int> order{sp.base()}, parent{-1}, pos_of(n, -1);
  pos_of[sp.base()] = 0;
  S cur_max{0};

  while (static_cast<int>(order.size()) < n) {
    const int k = static_cast<int>(order.size());
    int best_p = -1, best_q = -1;
    S best_val{0};
    bool have = false;
    for (int p = 0; p < n; ++p) {
      if (pos_of[p] != -1) continue;
      for (int q = 0; q < k; ++q) {
        S cand = cur_max;
        for (int t = 0; t < k; ++t) {
          const int y = order[t];
          const S& dxy = D(p, y);
          int a = k, b = t;
          while (true) {
            if (a > b) a = (a == k) ? q : parent[a];
            else b = parent[b];
            if (a == b) break;
            const S ratio = D(order[a], order[b]) / dxy;
            if (ratio > cand) cand = ratio;
          }
        }
        if (!have || cand < best_val) {
          have = true;
          best_val = cand;
          best_p = p;
          best_q = q;
        }
      }
    }
    order.push_back(best_p);
    parent.push_back(best_q);
    pos_of[best_p] = k;
    cur_max = best_val;
  }
  return RetractionSystem(sp, order, parent);
}

}  // namespace

RetractionSystem greedy_min_lip_system(const PointedMetricSpace& space) {
  if (space.exact()) return greedy_impl<Rational>(space);
  return greedy_impl<double>(space);
}

HeuristicResult heuristic_circle_system(const PointedMetricSpace& circle, CircleStrategy strategy) {
  const int n = circle.size() - 1;
  if (strategy == CircleStrategy::GreedyMinLip) {
    RetractionSystem sys = greedy_min_lip_system(circle);
    Num achieved = sys.max_lip();
    return {std::move(sys), achieved};
  }
  const auto rims = peel_rim_order(n, strategy == CircleStrategy::PeelBalanced);
  std::vector<int> order(n + 1), parent(n + 1, -1), pos_of_rim(n + 1, -1);
  order[0] = circle.base();
  for (int k = 1; k <= n; ++k) {
    const int rim = rims[k - 1];
    order[k] = rim;  // rim index x_r is point index r on the circle space
    const int par_rim = adjacent_parent(rim, n, pos_of_rim);
    parent[k] = (par_rim < 0) ? 0 : pos_of_rim[par_rim];
    pos_of_rim[rim] = k;
  }
  RetractionSystem sys(circle, order, parent);
  Num achieved = sys.max_lip();
  return {std::move(sys), achieved};
}

RetractionSystem union_peel_system(const PointedMetricSpace& union_space, int k_max,
                                   bool balanced) {
  CircleUnionLayout lay(k_max);
  if (union_space.size() != lay.total_points())
    throw std::invalid_argument("space is not the circle union of this k_max");
  std::vector<int> order{union_space.base()}, parent{-1};
  for (int k = 1; k <= k_max; ++k) {
    const int sz = lay.circle_size(k);
    const auto rims = peel_rim_order(sz, balanced);
    std::vector<int> pos_of_rim(sz + 1, -1);
    for (int idx = 0; idx < sz; ++idx) {
      const int rim = rims[idx];
      const int pos = static_cast<int>(order.size());
      order.push_back(lay.point_of(k, rim));
      const int par_rim = adjacent_parent(rim, sz, pos_of_rim);
      parent.push_back(par_rim < 0 ? 0 : pos_of_rim[par_rim]);
      pos_of_rim[rim] = pos;
    }
  }
  return RetractionSystem(union_space, order, parent);
}

// ---------------------------------------------------------------------------

UnionDichotomyReport union_restriction_report(const RetractionSystem& sys, int k_max) {
  CircleUnionLayout lay(k_max);
  const auto& sp = sys.space();
  if (sp.size() != lay.total_points())
    throw std::invalid_argument("system does not live on the circle union of this k_max");

  UnionDichotomyReport rep;
  rep.big_level = k_max;
  rep.big_size = lay.circle_size(k_max);
  rep.union_max_lip = sys.max_lip();

  const int N = sys.levels();
  const int first_big = lay.first_point(k_max);
  rep.first_big_pos = N + 1;
  for (int p = first_big; p < sp.size(); ++p)
    rep.first_big_pos = std::min(rep.first_big_pos, sys.position(p));

  for (int j = rep.first_big_pos; j <= N && !rep.escapes; ++j) {
    for (int x = first_big; x < sp.size(); ++x) {
      const int img = sys.phi(j, x);
      if (img < first_big) {  // centre or an inner circle
        rep.escapes = true;
        rep.escape_level = j;
        rep.escape_point = x;
        break;
      }
    }
  }

  const auto bound = theorem32_bound(rep.big_size);
  if (rep.escapes) {
    rep.floor_approx = static_cast<double>(rep.big_size);
    rep.floor_met = rep.union_max_lip.rat() >= Rational(rep.big_size);
    return rep;
  }

  // Restriction to the outer circle: positions of its points in order give
  // the restricted enumeration; the maps stay inside the rim, so the
  // restricted table is a candidate circle system.
  PointedMetricSpace circle = build_circle(rep.big_size);
  std::vector<int> big_positions;
  for (int p = first_big; p < sp.size(); ++p) big_positions.push_back(sys.position(p));
  std::sort(big_positions.begin(), big_positions.end());

  const int cn = rep.big_size;
  std::vector<std::vector<int>> table(cn + 1, std::vector<int>(cn + 1, 0));
  // Row 0 collapses everything to the centre (index 0 on the circle space).
  for (int t = 1; t <= cn; ++t) {
    const int level = big_positions[t - 1];
    for (int r = 1; r <= cn; ++r) {
      const int img = sys.phi(level, lay.point_of(k_max, r));
      table[t][r] = lay.rim_of(img);  // img is on the big circle by the no-escape case
    }
    table[t][0] = 0;
  }
  const SystemReport srep = validate_phi_table(circle, table);
  rep.restricted_valid = srep.ok();
  if (rep.restricted_valid) {
    RetractionSystem restricted = system_from_phi_table(circle, table);
    rep.restricted_max_lip = restricted.max_lip();
    rep.floor_approx = bound.approx;
    rep.floor_met = bound.target.rational_ge(rep.restricted_max_lip.rat());
  }
  return rep;
}

}  // namespace freelab
