#pragma once
// Rational maps with explicit coefficient vectors, plus the specific maps and
// pointwise identities used by the degree-one-trace constructions: the cubic
// permutation rational functions, their mu-subgroup reductions, and the
// composed-map identities for the n=3 and half-exponent cases.

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "traceperm/ffield.hpp"
#include "traceperm/permcheck.hpp"

namespace traceperm {

inline Elem eval_poly(const FieldCtx& f, const std::vector<Elem>& coeffs, Elem x) {
  Elem acc{};
  for (size_t i = coeffs.size(); i-- > 0;) acc = f.add(f.mul(acc, x), coeffs[i]);
  return acc;
}

struct RationalMap {
  const FieldCtx* ctx = nullptr;
  std::vector<Elem> num, den;  // ascending coefficients

  // nullopt exactly when the denominator vanishes at x.
  [[nodiscard]] std::optional<Elem> eval(Elem x) const {
    Elem d = eval_poly(*ctx, den, x);
    if (d.is_zero()) return std::nullopt;
    return ctx->mul(eval_poly(*ctx, num, x), ctx->inv(d));
  }
};

namespace detail {

inline void require_char_coprime_to_6(const FieldCtx& f, const char* what) {
  if (f.characteristic() == 2 || f.characteristic() == 3)
    throw std::invalid_argument(std::string(what) + " needs characteristic coprime to 6");
}

inline std::vector<Elem> monomials(const FieldCtx& f,
                                   std::initializer_list<std::pair<uint64_t, Elem>> terms) {
  uint64_t deg = 0;
  for (auto& [e, c] : terms) deg = std::max(deg, e);
  std::vector<Elem> out(deg + 1, Elem{});
  for (auto& [e, c] : terms) out[e] = f.add(out[e], c);
  return out;
}

}  // namespace detail

// X (X^2 - 9 nu) / (X^2 - nu) permutes F_q for any nonsquare nu, q coprime to 6.
inline RationalMap theorem1_b_map(const FieldCtx& f, Elem nu) {
  detail::require_char_coprime_to_6(f, "theorem1_b_map");
  if (nu.is_zero() || f.is_square(nu)) throw std::invalid_argument("nu must be a nonsquare");
  Elem nine_nu = f.mul(f.scalar(9), nu);
  return {&f,
          detail::monomials(f, {{3, f.one()}, {1, f.neg(nine_nu)}}),
          detail::monomials(f, {{2, f.one()}, {0, f.neg(nu)}})};
}

// g = (X^3 - 3X^2 + 1)/(X^3 - 3X + 1) permutes mu_{q+1} inside F_{q^2}.
inline RationalMap theorem1_c_map(const FieldCtx& fq2) {
  detail::require_char_coprime_to_6(fq2, "theorem1_c_map");
  if (fq2.degree() % 2) throw std::invalid_argument("theorem1_c_map expects a quadratic extension");
  Elem m3 = fq2.scalar(-3);
  return {&fq2,
          detail::monomials(fq2, {{3, fq2.one()}, {2, m3}, {0, fq2.one()}}),
          detail::monomials(fq2, {{3, fq2.one()}, {1, m3}, {0, fq2.one()}})};
}

// Difference factorization behind theorem1_c: with n, d the numerator and
// denominator of g, n(X)d(Y) - n(Y)d(X) = 3(X-Y)(XY-X+1)(XY-Y+1).
// Exhaustive over all pairs for small fields, 10^4 fixed-seed pairs otherwise.
inline bool gdiff_factor_check(const FieldCtx& f) {
  detail::require_char_coprime_to_6(f, "gdiff_factor_check");
  Elem three = f.scalar(3);
  auto n = [&](Elem x) {
    return f.add(f.sub(f.pow(x, 3), f.mul(three, f.mul(x, x))), f.one());
  };
  auto d = [&](Elem x) { return f.add(f.sub(f.pow(x, 3), f.mul(three, x)), f.one()); };
  auto lhs = [&](Elem x, Elem y) { return f.sub(f.mul(n(x), d(y)), f.mul(n(y), d(x))); };
  auto rhs = [&](Elem x, Elem y) {
    Elem xy = f.mul(x, y);
    Elem a = f.sub(x, y);
    Elem b = f.add(f.sub(xy, x), f.one());
    Elem c = f.add(f.sub(xy, y), f.one());
    return f.mul(three, f.mul(a, f.mul(b, c)));
  };
  if (f.order() <= 169) {
    for (uint32_t i = 0; i < f.order(); ++i)
      for (uint32_t j = 0; j < f.order(); ++j)
        if (lhs(Elem{i}, Elem{j}) != rhs(Elem{i}, Elem{j})) return false;
    return true;
  }
  uint64_t state = 0x243f6a8885a308d3ull;
  for (int t = 0; t < 10000; ++t) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    Elem x{uint32_t((state >> 32) % f.order())};
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    Elem y{uint32_t((state >> 32) % f.order())};
    if (lhs(x, y) != rhs(x, y)) return false;
  }
  return true;
}

// The two rational-map families underlying the Q^3-Q+1 and Q^3+Q^2-Q cases:
// one map on F_{Q^2} per nonsquare nu, and one map on mu_{Q^2+1} in F_{Q^4}.
struct CaseMaps {
  uint64_t Q = 0;
  std::shared_ptr<const FieldCtx> field_q2;          // domain of the b-maps
  std::shared_ptr<const FieldCtx> field_q4;          // contains mu_{Q^2+1}
  std::vector<std::pair<Elem, RationalMap>> b_maps;  // (nu, map) per nonsquare nu
  RationalMap c_map;
};

namespace detail {

inline CaseMaps case_maps(uint64_t Q, bool plus_variant) {
  uint64_t p = 0;
  uint32_t s = prime_power_exponent(Q, p);
  if (!s || p == 2) throw std::invalid_argument("Q must be an odd prime power");
  CaseMaps out;
  out.Q = Q;
  out.field_q2 = get_field(uint32_t(p), 2 * s);
  out.field_q4 = get_field(uint32_t(p), 4 * s);
  const FieldCtx& f2 = *out.field_q2;
  for (Elem nu : f2.squares().nonsquares) {
    Elem coef = f2.mul(f2.scalar(4), f2.pow(nu, int64_t((Q + 1) / 2)));
    if (plus_variant) coef = f2.neg(coef);  // X^{Q+2} + 3 nu X^Q -+ 4 nu^{(Q+1)/2} X
    RationalMap b{&f2,
                  monomials(f2, {{Q + 2, f2.one()}, {Q, f2.mul(f2.scalar(3), nu)}, {1, coef}}),
                  monomials(f2, {{2, f2.one()}, {0, f2.neg(nu)}})};
    out.b_maps.emplace_back(nu, std::move(b));
  }
  const FieldCtx& f4 = *out.field_q4;
  if (!plus_variant) {
    out.c_map = {&f4,
                 monomials(f4, {{2 * Q - 1, f4.one()}, {Q, f4.neg(f4.one())}, {0, f4.one()}}),
                 monomials(f4, {{2 * Q - 1, f4.one()}, {Q - 1, f4.neg(f4.one())}, {0, f4.one()}})};
  } else {
    out.c_map = {&f4,
                 monomials(f4, {{2 * Q + 1, f4.one()}, {Q + 1, f4.neg(f4.one())}, {0, f4.one()}}),
                 monomials(f4, {{2 * Q + 1, f4.one()}, {Q, f4.neg(f4.one())}, {0, f4.one()}})};
  }
  return out;
}

}  // namespace detail

// k = Q^3 - Q + 1: maps (X^{Q+2} + 3nu X^Q + 4nu^{(Q+1)/2} X)/(X^2 - nu) on
// F_{Q^2} and (X^{2Q-1} - X^Q + 1)/(X^{2Q-1} - X^{Q-1} + 1) on mu_{Q^2+1}.
inline CaseMaps case5_maps(uint64_t Q) { return detail::case_maps(Q, false); }

// k = Q^3 + Q^2 - Q: same denominators with the sign of the linear term
// flipped, and (X^{2Q+1} - X^{Q+1} + 1)/(X^{2Q+1} - X^Q + 1) on mu_{Q^2+1}.
inline CaseMaps case6_maps(uint64_t Q) { return detail::case_maps(Q, true); }

// n = 3, k = (q^2+1)/2 identity: with L = 2X^q - Tr(X) and
// H = 2X^{(q^4+q^2)/2} - Tr(X) over F_{q^3}, the composition G = L(H(X))
// satisfies G(x^2) = L(x)^2 for every x, and L permutes F_{q^3}.
inline bool case8_identity_check(uint64_t q) {
  uint64_t p = 0;
  uint32_t s = detail::prime_power_exponent(q, p);
  if (!s || p == 2) throw std::invalid_argument("q must be an odd prime power");
  auto fp = get_field(uint32_t(p), 3 * s);
  const FieldCtx& f = *fp;
  const uint32_t N = f.order();
  Elem two = f.scalar(2);
  int64_t e = int64_t((q * q * q * q + q * q) / 2);
  std::vector<Elem> L(N), H(N);
  for (uint32_t i = 0; i < N; ++i) {
    Elem x{i};
    L[i] = f.sub(f.mul(two, f.frobenius(x, s)), f.trace(s, x));
    H[i] = f.sub(f.mul(two, f.pow(x, e)), f.trace(s, x));
  }
  for (uint32_t i = 0; i < N; ++i) {
    Elem x{i};
    Elem g_of_sq = L[H[f.mul(x, x).idx].idx];
    Elem l = L[i];
    if (g_of_sq != f.mul(l, l)) return false;
  }
  auto dom = Domain::whole_field(f);
  return bool(check_permutation(dom, [&](Elem x) { return L[x.idx]; }));
}

// n = 3, k = (q^2+1)/2 reduction: with
// g = X(1 + X^{(q+1)/2} + X^{(q^2+q+2)/2} + X^{(q^2+2)(q+1)/2})^{q-1},
// every x in mu_{q^2+q+1} satisfies g(x^{2q})^{-q} = x(x+1)^{q-1}, and
// X(X+1)^{q-1} permutes mu_{q^2+q+1}.
inline bool case7_mu_identity_check(uint64_t q) {
  uint64_t p = 0;
  uint32_t s = detail::prime_power_exponent(q, p);
  if (!s || p == 2) throw std::invalid_argument("q must be an odd prime power");
  auto fp = get_field(uint32_t(p), 3 * s);
  const FieldCtx& f = *fp;
  const uint64_t d = q * q + q + 1;
  auto g = [&](Elem y) {
    Elem ssum = f.one();
    ssum = f.add(ssum, f.pow(y, int64_t((q + 1) / 2)));
    ssum = f.add(ssum, f.pow(y, int64_t((q * q + q + 2) / 2)));
    ssum = f.add(ssum, f.pow(y, int64_t((q * q + 2) * (q + 1) / 2)));
    if (ssum.is_zero()) return f.zero();
    return f.mul(y, f.pow(ssum, int64_t(q - 1)));
  };
  for (Elem x : f.unity_roots(d)) {
    Elem c = g(f.pow(x, int64_t(2 * q)));
    if (c.is_zero()) return false;
    Elem lhs = f.pow(c, -int64_t(q));
    Elem rhs = f.mul(x, f.pow(f.add(x, f.one()), int64_t(q - 1)));
    if (lhs != rhs) return false;
  }
  auto dom = Domain::mu(f, d);
  return bool(check_permutation(
      dom, [&](Elem x) { return f.mul(x, f.pow(f.add(x, f.one()), int64_t(q - 1))); }));
}

// Defining computations of the q^l + 1 case: with Q = q^l and
// gamma^{q^{2l}-1} = -1, the trace of gamma^{Q+1} vanishes, so does
// Tr(alpha gamma^Q + alpha^Q gamma) for every alpha, and consequently
// x -> x + Tr((alpha + gamma x)^{Q+1}) agrees with x -> x + Tr(alpha^{Q+1})
// on F_q.
inline bool case9_trace_identities(const FieldCtx& f, uint64_t q, uint32_t ell, Elem gamma) {
  uint64_t p = 0;
  uint32_t s = detail::prime_power_exponent(q, p);
  if (!s || p != f.characteristic() || f.degree() % s)
    throw std::invalid_argument("q must be a prime power with F_q inside the field");
  uint32_t n = f.degree() / s;
  if (ell == 0 || n % (2 * ell)) throw std::invalid_argument("need 2*ell dividing n");
  uint64_t Q = 1;
  for (uint32_t i = 0; i < ell; ++i) Q *= q;
  if (f.pow(gamma, int64_t(Q * Q - 1)) != f.neg(f.one()))
    throw std::invalid_argument("gamma fails gamma^(q^(2l)-1) = -1");

  if (!f.trace(s, f.pow(gamma, int64_t(Q + 1))).is_zero()) return false;

  Elem gQ = f.pow(gamma, int64_t(Q));
  std::vector<Elem> subfield{f.zero()};
  for (Elem u : f.unity_roots(q - 1)) subfield.push_back(u);
  for (uint32_t i = 0; i < f.order(); ++i) {
    Elem a{i};
    Elem cross = f.add(f.mul(a, gQ), f.mul(f.pow(a, int64_t(Q)), gamma));
    if (!f.trace(s, cross).is_zero()) return false;
    Elem base = a.is_zero() ? f.zero() : f.trace(s, f.pow(a, int64_t(Q + 1)));
    for (Elem x : subfield) {
      Elem t = f.add(a, f.mul(gamma, x));
      Elem v = t.is_zero() ? f.zero() : f.trace(s, f.pow(t, int64_t(Q + 1)));
      if (v != base) return false;
    }
  }
  return true;
}

}  // namespace traceperm
