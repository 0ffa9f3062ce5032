#pragma once
// Bijectivity testing over a whole field or a roots-of-unity subgroup mu_d.
// The checker walks the domain filling a seen-table and stops at the first
// repeated value, so a random non-permutation is rejected after O(sqrt(N))
// evaluations (birthday bound) instead of N.  Failures carry a cause and a
// witness; map evaluation may itself fail (rational map hitting a denominator
// root), which is reported as a distinct cause rather than a crash.

#include <cstdint>
#include <functional>
#include <optional>
#include <type_traits>
#include <vector>

#include "traceperm/ffield.hpp"

namespace traceperm {

enum class PermFailure { none, collision, escape_from_mu, eval_failure };

inline const char* to_string(PermFailure c) {
  switch (c) {
    case PermFailure::none: return "none";
    case PermFailure::collision: return "collision";
    case PermFailure::escape_from_mu: return "escape-from-mu";
    case PermFailure::eval_failure: return "eval-failure";
  }
  return "?";
}

struct PermResult {
  bool ok = false;
  PermFailure cause = PermFailure::none;
  Elem witness_a{}, witness_b{};  // colliding preimages, or the offending input twice
  uint64_t evals = 0;             // evaluations performed before deciding
  explicit operator bool() const noexcept { return ok; }
};

// Either all of F_{p^m} or the subgroup mu_d (d | p^m - 1).
class Domain {
 public:
  static Domain whole_field(const FieldCtx& f) { return Domain(&f, 0); }

  static Domain mu(const FieldCtx& f, uint64_t d) {
    if (d == 0 || f.group_order() % d) throw std::domain_error("mu order must divide p^m - 1");
    return Domain(&f, d);
  }

  [[nodiscard]] const FieldCtx& field() const noexcept { return *ctx_; }
  [[nodiscard]] uint64_t size() const noexcept { return d_ ? d_ : ctx_->order(); }
  [[nodiscard]] bool is_mu() const noexcept { return d_ != 0; }

  [[nodiscard]] Elem element(uint64_t i) const {
    return d_ ? ctx_->exp(i * step_) : Elem{uint32_t(i)};
  }

  static constexpr uint64_t npos = UINT64_MAX;

  // Position of a value inside the domain, or npos if it lies outside.
  [[nodiscard]] uint64_t slot_of(Elem x) const {
    if (!d_) return x.idx;
    if (x.is_zero()) return npos;
    uint64_t l = ctx_->log(x);
    return l % step_ ? npos : l / step_;
  }

  [[nodiscard]] bool contains(Elem x) const { return slot_of(x) != npos; }

  [[nodiscard]] std::vector<Elem> elements() const {
    std::vector<Elem> out;
    out.reserve(size());
    for (uint64_t i = 0; i < size(); ++i) out.push_back(element(i));
    return out;
  }

 private:
  Domain(const FieldCtx* ctx, uint64_t d) : ctx_(ctx), d_(d), step_(d ? ctx->group_order() / d : 0) {}
  const FieldCtx* ctx_;
  uint64_t d_, step_;
};

// Seen-table that survives across calls: a generation stamp per slot avoids
// clearing the whole array between candidates, which matters in the census
// where the checker runs millions of times on the same field.
class PermWorkspace {
 public:
  explicit PermWorkspace(uint64_t capacity) : stamp_(capacity, 0), pre_(capacity, 0) {}

  void begin(uint64_t n) {
    if (n > stamp_.size()) {
      stamp_.assign(n, 0);
      pre_.assign(n, 0);
      epoch_ = 0;
    }
    if (++epoch_ == 0) {  // stamp wrap-around: start a fresh generation
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }

  // Returns the previous occupant of the slot, or npos if it was free.
  uint64_t occupy(uint64_t slot, uint32_t preimage) {
    if (stamp_[slot] == epoch_) return pre_[slot];
    stamp_[slot] = epoch_;
    pre_[slot] = preimage;
    return UINT64_MAX;
  }

 private:
  std::vector<uint32_t> stamp_, pre_;
  uint32_t epoch_ = 0;
};

// Early-abort bijectivity test.  `eval` may return Elem or optional<Elem>.
template <class F>
PermResult check_permutation(const Domain& dom, F&& eval, PermWorkspace* ws = nullptr) {
  const uint64_t n = dom.size();
  std::optional<PermWorkspace> local;
  if (!ws) ws = &local.emplace(n);
  ws->begin(n);

  constexpr bool plain = std::is_same_v<std::invoke_result_t<F&, Elem>, Elem>;
  PermResult res;
  for (uint64_t i = 0; i < n; ++i) {
    Elem x = dom.element(i);
    Elem y;
    if constexpr (plain) {
      y = eval(x);
      ++res.evals;
    } else {
      std::optional<Elem> oy = eval(x);
      ++res.evals;
      if (!oy) {
        res.cause = PermFailure::eval_failure;
        res.witness_a = res.witness_b = x;
        return res;
      }
      y = *oy;
    }
    uint64_t slot = dom.slot_of(y);
    if (slot == Domain::npos) {
      res.cause = PermFailure::escape_from_mu;
      res.witness_a = res.witness_b = x;
      return res;
    }
    uint64_t prev = ws->occupy(slot, uint32_t(i));
    if (prev != UINT64_MAX) {
      res.cause = PermFailure::collision;
      res.witness_a = dom.element(prev);
      res.witness_b = x;
      return res;
    }
  }
  res.ok = true;
  return res;
}

// Full-scan variant: never aborts, recounts the image from scratch.  Used to
// independently re-verify hits found by the early-abort path.
template <class F>
bool is_bijective_full_scan(const Domain& dom, F&& eval) {
  const uint64_t n = dom.size();
  std::vector<uint8_t> seen(n, 0);
  uint64_t distinct = 0;
  bool ok = true;
  for (uint64_t i = 0; i < n; ++i) {
    std::optional<Elem> y = std::invoke(eval, dom.element(i));
    if (!y) {
      ok = false;
      continue;
    }
    uint64_t slot = dom.slot_of(*y);
    if (slot == Domain::npos) {
      ok = false;
      continue;
    }
    if (!seen[slot]) {
      seen[slot] = 1;
      ++distinct;
    }
  }
  return ok && distinct == n;
}

template <class F>
std::vector<Elem> fixed_points_of(const Domain& dom, F&& eval) {
  std::vector<Elem> out;
  for (uint64_t i = 0; i < dom.size(); ++i) {
    Elem x = dom.element(i);
    std::optional<Elem> y = std::invoke(eval, x);
    if (y && *y == x) out.push_back(x);
  }
  return out;
}

template <class F>
std::vector<Elem> roots_of(const Domain& dom, F&& eval) {
  std::vector<Elem> out;
  for (uint64_t i = 0; i < dom.size(); ++i) {
    Elem x = dom.element(i);
    std::optional<Elem> y = std::invoke(eval, x);
    if (y && y->is_zero()) out.push_back(x);
  }
  return out;
}

// Type-erased map for callers that do not need the templated fast path.
struct EvalMap {
  const FieldCtx* ctx = nullptr;
  std::function<std::optional<Elem>(Elem)> eval;
};

inline PermResult is_permutation(const EvalMap& m, const Domain& dom) {
  return check_permutation(dom, m.eval);
}

inline std::vector<Elem> fixed_points(const EvalMap& m, const Domain& dom) {
  return fixed_points_of(dom, m.eval);
}

inline std::vector<Elem> roots(const EvalMap& m, const Domain& dom) {
  return roots_of(dom, m.eval);
}

// Works for any map object carrying a ctx pointer and eval(Elem).
template <class MapT>
PermResult permutes_mu(const MapT& m, uint64_t d) {
  const FieldCtx& f = *m.ctx;
  return check_permutation(Domain::mu(f, d), [&](Elem x) { return m.eval(x); });
}

}  // namespace traceperm
