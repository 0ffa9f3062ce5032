#pragma once
// Reductions of the bijectivity of x -> x + gamma*f(x) on an extension field
// to conditions over the base field: the per-line surjectivity equivalences,
// the homogeneous n=2 criterion, the mu_{q+1} rational-map criterion for
// k = (q-1)N+1, the Xh(X^{q-1}) subgroup reduction, and linear translators.
// Functions f: F_{q^n} -> F_q are passed as materialized value tables indexed
// by element index; values must lie in the subfield copy of F_q.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "traceperm/ffield.hpp"
#include "traceperm/permcheck.hpp"
#include "traceperm/ratmaps.hpp"

namespace traceperm {

struct LineCriterionReport {
  Elem alpha;
  bool holds = false;
  std::optional<std::pair<Elem, Elem>> witness;  // colliding pair on the line, present iff !holds
};

struct SurjResult {
  bool ok = false;
  std::vector<LineCriterionReport> reports;  // one per alpha, element order
  explicit operator bool() const noexcept { return ok; }
};

enum class SurjMode {
  line_bijective,  // x -> x + f(alpha + gamma x) permutes F_q for every alpha
  unique_root      // x + f(alpha + gamma x) = 0 has exactly one root for every alpha
};

namespace detail {

// {0} followed by mu_{q-1}: the copy of F_q inside the extension.
inline std::vector<Elem> subfield_elements(const FieldCtx& f, uint64_t q) {
  std::vector<Elem> out{f.zero()};
  for (Elem u : f.unity_roots(q - 1)) out.push_back(u);
  return out;
}

// Position of a subfield element in the list above, or npos.
inline uint64_t subfield_slot(const FieldCtx& f, uint64_t q, Elem x) {
  if (x.is_zero()) return 0;
  uint64_t step = f.group_order() / (q - 1);
  uint64_t l = f.log(x);
  return l % step ? UINT64_MAX : 1 + l / step;
}

inline uint32_t subfield_degree_of(const FieldCtx& f, uint64_t q, const char* what) {
  uint64_t p = 0;
  uint32_t s = prime_power_exponent(q, p);
  if (!s || p != f.characteristic() || f.degree() % s)
    throw std::invalid_argument(std::string(what) + ": q must cut out a subfield of the context");
  return s;
}

inline void require_into_subfield(const FieldCtx& f, uint32_t s, const std::vector<Elem>& vals,
                                  const char* what) {
  if (vals.size() != f.order())
    throw std::invalid_argument(std::string(what) + ": value table must cover the field");
  for (Elem v : vals)
    if (!f.in_subfield(s, v))
      throw std::invalid_argument(std::string(what) + ": f takes a value outside F_q");
}

}  // namespace detail

// Three-way equivalence for F(x) = x + gamma*f(x): bijectivity on F_{q^n} is
// equivalent to each line map x -> x + f(alpha + gamma x) permuting F_q, and
// to each such map having a unique root.  This evaluates one of the two line
// criteria across all alpha; comparing against a direct bijectivity check of
// F exercises the equivalence.
inline SurjResult surj_criterion(const FieldCtx& f, uint64_t q, const std::vector<Elem>& fvals,
                                 Elem gamma, SurjMode mode) {
  uint32_t s = detail::subfield_degree_of(f, q, "surj_criterion");
  if (f.degree() / s < 2) throw std::invalid_argument("surj_criterion: need n >= 2");
  if (gamma.is_zero()) throw std::invalid_argument("surj_criterion: gamma must be nonzero");
  detail::require_into_subfield(f, s, fvals, "surj_criterion");

  auto sub = detail::subfield_elements(f, q);
  SurjResult res;
  res.ok = true;
  res.reports.reserve(f.order());
  std::vector<uint32_t> stamp(sub.size(), 0), pre(sub.size(), 0);
  uint32_t epoch = 0;
  for (uint32_t ai = 0; ai < f.order(); ++ai) {
    Elem alpha{ai};
    ++epoch;
    LineCriterionReport rep{alpha, true, std::nullopt};
    std::optional<std::pair<Elem, Elem>> collision;
    int root_count = 0;
    Elem root1{}, root2{};
    for (size_t ui = 0; ui < sub.size(); ++ui) {
      Elem u = sub[ui];
      Elem v = f.add(u, fvals[f.add(alpha, f.mul(gamma, u)).idx]);
      if (v.is_zero()) {
        if (++root_count == 1)
          root1 = u;
        else if (root_count == 2)
          root2 = u;
      }
      uint64_t slot = detail::subfield_slot(f, q, v);
      if (!collision) {
        if (stamp[slot] == epoch)
          collision = {sub[pre[slot]], u};
        else {
          stamp[slot] = epoch;
          pre[slot] = uint32_t(ui);
        }
      }
    }
    if (mode == SurjMode::line_bijective) {
      rep.holds = !collision;
      rep.witness = collision;
    } else {
      rep.holds = root_count == 1;
      if (!rep.holds)
        // two roots collide at 0; with no root the map misses 0, so some
        // collision exists by pigeonhole
        rep.witness = root_count >= 2 ? std::make_pair(root1, root2) : collision;
    }
    res.ok = res.ok && rep.holds;
    res.reports.push_back(std::move(rep));
  }
  return res;
}

struct ZlemResult {
  bool left = false;   // X h(X^{q-1}) permutes F_{q^n}
  bool right = false;  // X h(X)^{q-1} permutes mu_{(q^n-1)/(q-1)}
  [[nodiscard]] bool consistent() const noexcept { return left == right; }
};

// h is a polynomial over the big field, ascending coefficients.
inline ZlemResult zlem_check(const FieldCtx& f, uint64_t q, const std::vector<Elem>& h_coeffs) {
  detail::subfield_degree_of(f, q, "zlem_check");
  ZlemResult out;
  auto whole = Domain::whole_field(f);
  out.left = bool(check_permutation(whole, [&](Elem x) {
    if (x.is_zero()) return f.zero();
    return f.mul(x, eval_poly(f, h_coeffs, f.pow(x, int64_t(q - 1))));
  }));
  uint64_t d = f.group_order() / (q - 1);
  auto mu = Domain::mu(f, d);
  out.right = bool(check_permutation(mu, [&](Elem x) {
    Elem h = eval_poly(f, h_coeffs, x);
    if (h.is_zero()) return f.zero();  // leaves mu, reported as escape
    return f.mul(x, f.pow(h, int64_t(q - 1)));
  }));
  return out;
}

// n = 2, f homogeneous of F_q-degree one (f(ux) = u f(x)): F(x) = x + gamma f(x)
// permutes F_{q^2} iff f(gamma) != -1 and the single line map at omega
// permutes F_q.  gamma and omega must be linearly independent over F_q.
inline bool red_sq1_check(const FieldCtx& f, uint64_t q, const std::vector<Elem>& fvals,
                          Elem gamma, Elem omega) {
  uint32_t s = detail::subfield_degree_of(f, q, "red_sq1_check");
  if (f.degree() != 2 * s) throw std::invalid_argument("red_sq1_check: need n = 2");
  detail::require_into_subfield(f, s, fvals, "red_sq1_check");
  if (gamma.is_zero() || omega.is_zero() ||
      f.in_subfield(s, f.mul(omega, f.inv(gamma))))
    throw std::invalid_argument("red_sq1_check: gamma, omega must be F_q-linearly independent");

  auto sub = detail::subfield_elements(f, q);
  {  // homogeneity precondition, sampled across every u and a spread of x
    uint64_t state = 0x452821e638d01377ull;
    for (Elem u : sub)
      for (int t = 0; t < 50; ++t) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        Elem x{uint32_t((state >> 32) % f.order())};
        if (fvals[f.mul(u, x).idx] != f.mul(u, fvals[x.idx]))
          throw std::invalid_argument("red_sq1_check: f is not homogeneous");
      }
  }

  if (fvals[gamma.idx] == f.neg(f.one())) return false;
  std::vector<uint8_t> seen(sub.size(), 0);
  for (Elem u : sub) {
    Elem v = f.add(u, fvals[f.add(omega, f.mul(gamma, u)).idx]);
    uint64_t slot = detail::subfield_slot(f, q, v);
    if (seen[slot]) return false;
    seen[slot] = 1;
  }
  return true;
}

struct RedSq2Map {
  RationalMap map;  // H on mu_{q+1}
  uint64_t k = 0;   // (q-1)N + 1
};

// Builds H(X) = (X^N + gamma^q (1 + X^{2N-1})) / (X^{N-1} + gamma (X^{2N-1} + 1))
// over F_{q^2}; F(X) = X + gamma Tr(X^k) with k = (q-1)N+1 permutes F_{q^2}
// iff H permutes mu_{q+1}.  Coefficients of coinciding exponents accumulate,
// which covers the N = 1 degeneracies.
inline RedSq2Map red_sq2_H(const FieldCtx& fq2, uint64_t N, Elem gamma) {
  if (fq2.degree() % 2) throw std::invalid_argument("red_sq2_H expects a quadratic extension");
  if (N < 1) throw std::invalid_argument("red_sq2_H: need N >= 1");
  if (gamma.is_zero()) throw std::invalid_argument("red_sq2_H: gamma must be nonzero");
  uint32_t s = fq2.degree() / 2;
  uint64_t q = detail::ipow(fq2.characteristic(), s);
  Elem gq = fq2.frobenius(gamma, s);
  RedSq2Map out;
  out.k = (q - 1) * N + 1;
  out.map.ctx = &fq2;
  out.map.num = detail::monomials(fq2, {{N, fq2.one()}, {0, gq}, {2 * N - 1, gq}});
  out.map.den = detail::monomials(fq2, {{N - 1, fq2.one()}, {0, gamma}, {2 * N - 1, gamma}});
  return out;
}

// gamma is a linear translator of f when f(x + u gamma) - f(x) = u delta for
// all x in the field and u in F_q, for a single delta in F_q.  Returns that
// delta, or nullopt when no such delta exists.
inline std::optional<Elem> is_linear_translator(const FieldCtx& f, uint64_t q,
                                                const std::vector<Elem>& fvals, Elem gamma) {
  detail::subfield_degree_of(f, q, "is_linear_translator");
  if (gamma.is_zero()) throw std::invalid_argument("is_linear_translator: gamma must be nonzero");
  if (fvals.size() != f.order())
    throw std::invalid_argument("is_linear_translator: value table must cover the field");
  Elem delta = f.sub(fvals[gamma.idx], fvals[0]);  // forced by x = 0, u = 1
  auto sub = detail::subfield_elements(f, q);
  for (uint32_t xi = 0; xi < f.order(); ++xi) {
    Elem x{xi};
    for (Elem u : sub) {
      Elem lhs = f.sub(fvals[f.add(x, f.mul(u, gamma)).idx], fvals[xi]);
      if (lhs != f.mul(u, delta)) return std::nullopt;
    }
  }
  return delta;
}

}  // namespace traceperm
