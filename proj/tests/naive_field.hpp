#pragma once
// Test-only reference implementation of F_{p^m} arithmetic: residues are kept
// as coefficient vectors and every operation is schoolbook polynomial math
// with long division by the modulus.  No log/exp/Zech tables anywhere, so it
// can serve as an independent oracle for the table-driven field.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace naive {

struct Field {
  uint32_t p, m;
  std::vector<uint32_t> mod;  // ascending, monic, size m+1
  using V = std::vector<uint32_t>;

  Field(uint32_t p_, uint32_t m_, std::vector<uint32_t> mod_) : p(p_), m(m_), mod(std::move(mod_)) {}

  V zero() const { return V(m, 0); }
  V one() const {
    V v(m, 0);
    if (m) v[0] = 1 % p;
    return v;
  }

  V from_index(uint64_t idx) const {
    V v(m);
    for (uint32_t i = 0; i < m; ++i) {
      v[i] = uint32_t(idx % p);
      idx /= p;
    }
    return v;
  }

  uint64_t to_index(const V& v) const {
    uint64_t idx = 0;
    for (size_t i = v.size(); i-- > 0;) idx = idx * p + v[i];
    return idx;
  }

  V add(const V& a, const V& b) const {
    V c(m);
    for (uint32_t i = 0; i < m; ++i) c[i] = (a[i] + b[i]) % p;
    return c;
  }

  V sub(const V& a, const V& b) const {
    V c(m);
    for (uint32_t i = 0; i < m; ++i) c[i] = (a[i] + p - b[i]) % p;
    return c;
  }

  V neg(const V& a) const { return sub(zero(), a); }

  V mul(const V& a, const V& b) const {
    std::vector<uint64_t> prod(2 * m, 0);
    for (uint32_t i = 0; i < m; ++i)
      for (uint32_t j = 0; j < m; ++j) prod[i + j] += uint64_t(a[i]) * b[j];
    for (auto& c : prod) c %= p;
    // long division by the monic modulus
    for (size_t i = prod.size(); i-- > m;) {
      uint64_t c = prod[i];
      if (!c) continue;
      for (uint32_t j = 0; j <= m; ++j) {
        uint64_t s = c * mod[j] % p;
        prod[i - m + j] = (prod[i - m + j] + p - s) % p;
      }
    }
    V out(m);
    for (uint32_t i = 0; i < m; ++i) out[i] = uint32_t(prod[i]);
    return out;
  }

  bool is_zero(const V& a) const {
    for (uint32_t c : a)
      if (c) return false;
    return true;
  }

  V pow(const V& a, uint64_t e) const {
    V r = one(), b = a;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }

  // Multiplicative inverse via x^(p^m - 2).
  V inv(const V& a) const {
    if (is_zero(a)) throw std::domain_error("naive inverse of zero");
    uint64_t n = 1;
    for (uint32_t i = 0; i < m; ++i) n *= p;
    return pow(a, n - 2);
  }

  // Tr_{p^m / p^s}(x) as a plain conjugate sum.
  V trace(uint32_t s, const V& x) const {
    V acc = zero(), t = x;
    uint64_t q = 1;
    for (uint32_t i = 0; i < s; ++i) q *= p;
    for (uint32_t i = 0; i < m / s; ++i) {
      acc = add(acc, t);
      t = pow(t, q);
    }
    return acc;
  }
};

}  // namespace naive
