#pragma once
// Arithmetic in small finite fields F_{p^m} (order up to 2^20) backed by full
// discrete-log tables.  An element is the coefficient vector (c_0,...,c_{m-1})
// of a residue modulo the field modulus, packed into a single integer index
// sum c_i p^i.  Multiplication and powering go through the log/exp tables,
// addition through a Zech-logarithm table, so every field operation costs a
// handful of lookups.  Contexts are immutable after construction and safe to
// share across threads.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace traceperm {

struct Elem {
  uint32_t idx = 0;
  [[nodiscard]] constexpr bool is_zero() const noexcept { return idx == 0; }
  friend constexpr auto operator<=>(const Elem&, const Elem&) = default;
};

namespace detail {

inline bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<uint64_t> distinct_prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// If q = p^s with p prime, returns s and sets p_out; otherwise returns 0.
inline uint32_t prime_power_exponent(uint64_t q, uint64_t& p_out) {
  if (q < 2) return 0;
  uint64_t p = q;
  for (uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  uint32_t s = 0;
  uint64_t t = q;
  while (t % p == 0) {
    t /= p;
    ++s;
  }
  if (t != 1) return 0;
  p_out = p;
  return s;
}

inline uint64_t ipow(uint64_t base, uint32_t e) {
  uint64_t r = 1;
  while (e--) r *= base;
  return r;
}

inline int64_t inv_mod(int64_t a, int64_t p) {
  int64_t t = 0, nt = 1, r = p, nr = a % p;
  if (nr < 0) nr += p;
  while (nr) {
    int64_t q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  return t < 0 ? t + p : t;
}

// Dense polynomials over F_p, coefficients ascending, no trailing zeros.
using Poly = std::vector<uint32_t>;

inline void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_sub(const Poly& a, const Poly& b, uint32_t p) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < out.size(); ++i) {
    uint32_t ai = i < a.size() ? a[i] : 0, bi = i < b.size() ? b[i] : 0;
    out[i] = (ai + p - bi) % p;
  }
  poly_trim(out);
  return out;
}

// a * b reduced modulo a monic polynomial.
inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint64_t> prod(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) prod[i + j] += uint64_t(a[i]) * b[j];
  }
  for (auto& c : prod) c %= p;
  const size_t m = mod.size() - 1;
  for (size_t i = prod.size(); i-- > m;) {
    uint64_t c = prod[i];
    if (!c) continue;
    for (size_t j = 0; j <= m; ++j) {
      uint64_t s = c * mod[j] % p;
      prod[i - m + j] = (prod[i - m + j] + p - s) % p;
    }
  }
  if (prod.size() > m) prod.resize(m);
  Poly out(prod.begin(), prod.end());
  poly_trim(out);
  return out;
}

inline Poly poly_powmod(Poly base, uint64_t e, const Poly& mod, uint32_t p) {
  Poly result{1};
  while (e) {
    if (e & 1) result = poly_mulmod(result, base, mod, p);
    base = poly_mulmod(base, base, mod, p);
    e >>= 1;
  }
  return result;
}

inline Poly poly_rem(Poly a, const Poly& b, uint32_t p) {
  poly_trim(a);
  const size_t db = b.size() - 1;
  const int64_t lead_inv = inv_mod(b.back(), p);
  while (a.size() > db) {
    uint64_t c = uint64_t(a.back()) * lead_inv % p;
    size_t shift = a.size() - 1 - db;
    if (c) {
      for (size_t j = 0; j <= db; ++j) {
        uint64_t s = c * b[j] % p;
        a[shift + j] = (a[shift + j] + p - s) % p;
      }
    }
    a.pop_back();
    poly_trim(a);
    if (a.empty()) break;
  }
  return a;
}

inline Poly poly_gcd(Poly a, Poly b, uint32_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    int64_t li = inv_mod(a.back(), p);
    for (auto& c : a) c = uint64_t(c) * li % p;
  }
  return a;
}

// Rabin test: monic f of degree m is irreducible over F_p iff
// X^(p^m) = X (mod f) and gcd(X^(p^(m/r)) - X, f) = 1 for each prime r | m.
inline bool poly_is_irreducible(const Poly& f, uint32_t p) {
  const size_t m = f.size() - 1;
  if (m == 0) return false;
  if (m == 1) return true;
  if (f[0] == 0) return false;  // divisible by X
  const Poly x{0, 1};
  std::vector<Poly> frob(m + 1);  // frob[j] = X^(p^j) mod f
  frob[0] = x;
  for (size_t j = 1; j <= m; ++j) frob[j] = poly_powmod(frob[j - 1], p, f, p);
  if (frob[m] != x) return false;
  for (uint64_t r : distinct_prime_factors(m)) {
    Poly d = poly_sub(frob[m / r], x, p);
    if (d.empty()) return false;
    if (poly_gcd(d, f, p).size() != 1) return false;
  }
  return true;
}

}  // namespace detail

struct SquarePartition {
  std::vector<Elem> squares;     // nonzero squares, increasing index
  std::vector<Elem> nonsquares;  // increasing index
};

class FieldCtx {
 public:
  static constexpr uint32_t kMaxOrder = 1u << 20;
  static constexpr uint32_t kNoLog = UINT32_MAX;

  // Empty modulus selects the default: the lexicographically smallest monic
  // irreducible of degree m, coefficients compared low-degree-first.
  FieldCtx(uint32_t p, uint32_t m, std::vector<uint32_t> modulus = {}) : p_(p), m_(m) {
    if (!detail::is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
    if (m == 0) throw std::invalid_argument("extension degree must be positive");
    uint64_t n = 1;
    for (uint32_t i = 0; i < m; ++i) {
      n *= p;
      if (n > kMaxOrder) throw std::invalid_argument("field order exceeds 2^20");
    }
    n_ = uint32_t(n);
    L_ = n_ - 1;
    if (modulus.empty()) {
      mod_ = default_modulus(p, m);
    } else {
      if (modulus.size() != size_t(m) + 1 || modulus.back() != 1)
        throw std::invalid_argument("modulus must be monic of degree m");
      for (uint32_t c : modulus)
        if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
      if (!detail::poly_is_irreducible(modulus, p))
        throw std::invalid_argument("modulus is reducible over F_p");
      mod_ = std::move(modulus);
    }
    build_tables();
  }

  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  [[nodiscard]] uint32_t characteristic() const noexcept { return p_; }
  [[nodiscard]] uint32_t degree() const noexcept { return m_; }
  [[nodiscard]] uint32_t order() const noexcept { return n_; }
  [[nodiscard]] uint64_t group_order() const noexcept { return L_; }
  [[nodiscard]] const std::vector<uint32_t>& modulus() const noexcept { return mod_; }
  [[nodiscard]] Elem generator() const noexcept { return gen_; }

  [[nodiscard]] Elem zero() const noexcept { return {}; }
  [[nodiscard]] Elem one() const noexcept { return Elem{1}; }

  [[nodiscard]] Elem from_index(uint64_t i) const {
    if (i >= n_) throw std::invalid_argument("element index out of range");
    return Elem{uint32_t(i)};
  }

  // Coefficients are reduced mod p; missing high coefficients are zero.
  [[nodiscard]] Elem from_coeffs(const std::vector<uint32_t>& c) const {
    if (c.size() > m_) throw std::invalid_argument("too many coefficients for degree m");
    uint32_t idx = 0;
    for (size_t i = c.size(); i-- > 0;) idx = idx * p_ + c[i] % p_;
    return Elem{idx};
  }

  [[nodiscard]] std::vector<uint32_t> coeffs(Elem a) const {
    std::vector<uint32_t> c(m_);
    uint32_t v = a.idx;
    for (uint32_t i = 0; i < m_; ++i) {
      c[i] = v % p_;
      v /= p_;
    }
    return c;
  }

  // c mod p as an element of the prime subfield.
  [[nodiscard]] Elem scalar(int64_t c) const noexcept {
    int64_t r = c % int64_t(p_);
    if (r < 0) r += p_;
    return Elem{uint32_t(r)};
  }

  [[nodiscard]] Elem add(Elem a, Elem b) const {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    uint64_t la = log_[a.idx], lb = log_[b.idx];
    uint64_t d = lb >= la ? lb - la : lb + L_ - la;
    uint32_t z = zech_[d];
    if (z == kNoLog) return {};
    uint64_t e = la + z;
    if (e >= L_) e -= L_;
    return Elem{exp_[e]};
  }

  [[nodiscard]] Elem neg(Elem a) const {
    if (p_ == 2 || a.is_zero()) return a;
    uint64_t e = log_[a.idx] + half_;
    if (e >= L_) e -= L_;
    return Elem{exp_[e]};
  }

  [[nodiscard]] Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  [[nodiscard]] Elem mul(Elem a, Elem b) const {
    if (a.is_zero() || b.is_zero()) return {};
    uint64_t e = uint64_t(log_[a.idx]) + log_[b.idx];
    if (e >= L_) e -= L_;
    return Elem{exp_[e]};
  }

  [[nodiscard]] Elem inv(Elem a) const {
    if (a.is_zero()) throw std::domain_error("inverse of zero");
    uint64_t la = log_[a.idx];
    return Elem{exp_[la ? L_ - la : 0]};
  }

  // Any integer exponent; negative allowed for nonzero base.
  [[nodiscard]] Elem pow(Elem a, int64_t k) const {
    if (a.is_zero()) {
      if (k > 0) return a;
      throw std::domain_error("zero raised to a nonpositive power");
    }
    int64_t r = k % int64_t(L_);
    if (r < 0) r += int64_t(L_);
    return Elem{exp_[uint64_t(log_[a.idx]) * uint64_t(r) % L_]};
  }

  [[nodiscard]] uint64_t log(Elem a) const {
    if (a.is_zero()) throw std::domain_error("log of zero");
    return log_[a.idx];
  }

  [[nodiscard]] Elem exp(uint64_t e) const noexcept { return Elem{exp_[e % L_]}; }

  // x^(p^s)
  [[nodiscard]] Elem frobenius(Elem x, uint32_t s) const {
    if (x.is_zero()) return x;
    uint64_t q = 1;
    for (uint32_t i = 0; i < s; ++i) q = q * p_ % L_;
    return Elem{exp_[uint64_t(log_[x.idx]) * q % L_]};
  }

  // Tr_{p^m / p^s}(x) = sum of x^(p^(s i)); sub_degree s must divide m.
  [[nodiscard]] Elem trace(uint32_t sub_degree, Elem x) const {
    if (sub_degree == 0 || m_ % sub_degree)
      throw std::invalid_argument("trace subfield degree must divide m");
    if (x.is_zero()) return x;
    uint64_t q = detail::ipow(p_, sub_degree) % L_;
    Elem acc{};
    uint64_t e = log_[x.idx];
    for (uint32_t i = 0; i < m_ / sub_degree; ++i) {
      acc = add(acc, Elem{exp_[e]});
      e = e * q % L_;
    }
    return acc;
  }

  [[nodiscard]] bool in_subfield(uint32_t sub_degree, Elem x) const {
    if (sub_degree == 0 || m_ % sub_degree)
      throw std::invalid_argument("subfield degree must divide m");
    return frobenius(x, sub_degree) == x;
  }

  // mu_d = the d-th roots of unity, in the order g^0, g^(L/d), g^(2L/d), ...
  [[nodiscard]] std::vector<Elem> unity_roots(uint64_t d) const {
    if (d == 0 || L_ % d) throw std::domain_error("subgroup order must divide p^m - 1");
    uint64_t step = L_ / d;
    std::vector<Elem> out;
    out.reserve(d);
    for (uint64_t j = 0; j < d; ++j) out.push_back(Elem{exp_[j * step]});
    return out;
  }

  [[nodiscard]] bool is_square(Elem a) const {
    if (a.is_zero()) throw std::domain_error("square class of zero is undefined");
    if (p_ == 2) return true;
    return log_[a.idx] % 2 == 0;
  }

  [[nodiscard]] SquarePartition squares() const {
    if (p_ == 2) throw std::invalid_argument("square partition requires odd characteristic");
    SquarePartition out;
    out.squares.reserve(L_ / 2);
    out.nonsquares.reserve(L_ / 2);
    for (uint32_t i = 1; i < n_; ++i) (is_square(Elem{i}) ? out.squares : out.nonsquares).push_back(Elem{i});
    return out;
  }

  [[nodiscard]] std::vector<Elem> elements() const {
    std::vector<Elem> out;
    out.reserve(n_);
    for (uint32_t i = 0; i < n_; ++i) out.push_back(Elem{i});
    return out;
  }

  [[nodiscard]] std::string to_string(Elem a) const {
    if (a.is_zero()) return "0";
    auto c = coeffs(a);
    std::string s;
    for (uint32_t i = 0; i < m_; ++i) {
      if (!c[i]) continue;
      if (!s.empty()) s += '+';
      if (i == 0) {
        s += std::to_string(c[i]);
      } else {
        if (c[i] != 1) {
          s += std::to_string(c[i]);
          s += '*';
        }
        s += 't';
        if (i > 1) {
          s += '^';
          s += std::to_string(i);
        }
      }
    }
    return s;
  }

  [[nodiscard]] std::string spec_string() const {
    std::string s = std::to_string(p_) + "^" + std::to_string(m_) + ":";
    for (size_t i = 0; i < mod_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(mod_[i]);
    }
    return s;
  }

 private:
  static std::vector<uint32_t> default_modulus(uint32_t p, uint32_t m) {
    // Iterate coefficient tuples (c_0,...,c_{m-1}) in lexicographic order with
    // c_0 compared first; the packed loop index holds c_0 in the top digit.
    uint64_t total = detail::ipow(p, m);
    std::vector<uint32_t> f(m + 1);
    f[m] = 1;
    for (uint64_t idx = 0; idx < total; ++idx) {
      uint64_t v = idx;
      for (uint32_t i = 0; i < m; ++i) {
        f[m - 1 - i] = uint32_t(v % p);
        v /= p;
      }
      if (detail::poly_is_irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable
  }

  void build_tables() {
    // Generator: first element in index order whose multiplicative order is
    // p^m - 1, certified by checking (p^m-1)/r powers for each prime r.
    auto factors = detail::distinct_prime_factors(L_);
    auto elem_poly = [&](uint32_t idx) {
      detail::Poly e;
      uint32_t v = idx;
      while (v) {
        e.push_back(v % p_);
        v /= p_;
      }
      return e;
    };
    uint32_t gen_idx = 1;
    if (L_ > 1) {
      for (uint32_t cand = 2; cand < n_; ++cand) {
        detail::Poly c = elem_poly(cand);
        bool primitive = true;
        for (uint64_t r : factors) {
          if (detail::poly_powmod(c, L_ / r, mod_, p_) == detail::Poly{1}) {
            primitive = false;
            break;
          }
        }
        if (primitive) {
          gen_idx = cand;
          break;
        }
      }
      if (gen_idx == 1) throw std::logic_error("no generator found");
    }
    gen_ = Elem{gen_idx};

    exp_.assign(L_, 0);
    log_.assign(n_, kNoLog);
    auto encode = [&](const detail::Poly& e) {
      uint32_t idx = 0;
      for (size_t i = e.size(); i-- > 0;) idx = idx * p_ + e[i];
      return idx;
    };
    detail::Poly gp = elem_poly(gen_idx), cur{1};
    for (uint64_t j = 0; j < L_; ++j) {
      uint32_t idx = encode(cur);
      exp_[j] = idx;
      log_[idx] = uint32_t(j);
      cur = detail::poly_mulmod(cur, gp, mod_, p_);
    }
    if (cur != detail::Poly{1}) throw std::logic_error("generator order mismatch");

    zech_.assign(L_, kNoLog);
    for (uint64_t j = 0; j < L_; ++j) {
      uint32_t v = exp_[j];
      uint32_t c0 = v % p_;
      uint32_t w = v - c0 + (c0 + 1) % p_;  // v + 1 as coefficient vectors
      zech_[j] = w ? log_[w] : kNoLog;
    }
    half_ = L_ / 2;  // log(-1) in odd characteristic
  }

  uint32_t p_, m_, n_;
  uint64_t L_;
  std::vector<uint32_t> mod_;
  Elem gen_{};
  uint64_t half_ = 0;
  std::vector<uint32_t> exp_, log_, zech_;
};

inline std::shared_ptr<const FieldCtx> field_new(uint32_t p, uint32_t m,
                                                 std::vector<uint32_t> modulus = {}) {
  return std::make_shared<const FieldCtx>(p, m, std::move(modulus));
}

// Process-wide cache of default-modulus contexts.  Table construction is the
// expensive part, and many call sites want the same handful of fields.
inline std::shared_ptr<const FieldCtx> get_field(uint32_t p, uint32_t m) {
  static std::mutex mu;
  static std::map<std::pair<uint32_t, uint32_t>, std::shared_ptr<const FieldCtx>> cache;
  std::scoped_lock lock(mu);
  auto& slot = cache[{p, m}];
  if (!slot) slot = field_new(p, m);
  return slot;
}

// "p^m" (default modulus) or "p^m:c0,c1,...,cm" (explicit modulus, ascending).
inline std::shared_ptr<const FieldCtx> parse_field_spec(const std::string& spec) {
  auto bad = [&] { return std::invalid_argument("bad field spec '" + spec + "'"); };
  size_t caret = spec.find('^');
  if (caret == std::string::npos) throw bad();
  size_t colon = spec.find(':', caret);
  uint32_t p = 0, m = 0;
  try {
    p = uint32_t(std::stoul(spec.substr(0, caret)));
    m = uint32_t(std::stoul(spec.substr(caret + 1, colon == std::string::npos
                                                       ? std::string::npos
                                                       : colon - caret - 1)));
  } catch (const std::exception&) {
    throw bad();
  }
  std::vector<uint32_t> modulus;
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    size_t pos = 0;
    while (pos <= rest.size()) {
      size_t comma = rest.find(',', pos);
      std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        modulus.push_back(uint32_t(std::stoul(tok)));
      } catch (const std::exception&) {
        throw bad();
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (modulus.empty()) return get_field(p, m);
  return field_new(p, m, std::move(modulus));
}

// Ring embedding of a subfield context into an extension context, realized by
// sending the subfield's modulus root to its smallest-index root in the big
// field.  Any root gives a homomorphism; fixing the smallest keeps the map
// deterministic.  The embedding is verified on construction.
class SubfieldEmbedding {
 public:
  SubfieldEmbedding(std::shared_ptr<const FieldCtx> sub, std::shared_ptr<const FieldCtx> big)
      : sub_(std::move(sub)), big_(std::move(big)) {
    const FieldCtx &s = *sub_, &b = *big_;
    if (s.characteristic() != b.characteristic() || b.degree() % s.degree())
      throw std::invalid_argument("not a subfield: need same p and sub degree | big degree");
    Elem root{};
    bool found = false;
    for (uint32_t i = 0; i < b.order() && !found; ++i) {
      Elem x{i};
      Elem acc = b.zero();
      const auto& mc = s.modulus();
      for (size_t j = mc.size(); j-- > 0;) acc = b.add(b.mul(acc, x), b.scalar(mc[j]));
      if (acc.is_zero()) {
        root = x;
        found = true;
      }
    }
    if (!found) throw std::logic_error("subfield modulus has no root in extension");
    table_.resize(s.order());
    for (uint32_t i = 0; i < s.order(); ++i) {
      auto c = s.coeffs(Elem{i});
      Elem acc = b.zero();
      for (size_t j = c.size(); j-- > 0;) acc = b.add(b.mul(acc, root), b.scalar(c[j]));
      table_[i] = acc;
    }
    verify();
  }

  [[nodiscard]] Elem operator()(Elem x) const { return table_[x.idx]; }
  [[nodiscard]] const FieldCtx& sub() const noexcept { return *sub_; }
  [[nodiscard]] const FieldCtx& big() const noexcept { return *big_; }

 private:
  void verify() const {
    const FieldCtx &s = *sub_, &b = *big_;
    std::vector<bool> seen(b.order(), false);
    for (Elem y : table_) {
      if (seen[y.idx]) throw std::logic_error("embedding not injective");
      seen[y.idx] = true;
    }
    auto check_pair = [&](uint32_t i, uint32_t j) {
      Elem x{i}, y{j};
      if (table_[s.add(x, y).idx] != b.add(table_[i], table_[j]) ||
          table_[s.mul(x, y).idx] != b.mul(table_[i], table_[j]))
        throw std::logic_error("embedding is not a homomorphism");
    };
    if (s.order() <= 64) {
      for (uint32_t i = 0; i < s.order(); ++i)
        for (uint32_t j = 0; j < s.order(); ++j) check_pair(i, j);
    } else {
      uint64_t state = 0x9e3779b97f4a7c15ull;
      for (int t = 0; t < 512; ++t) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        uint32_t i = uint32_t((state >> 33) % s.order());
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        uint32_t j = uint32_t((state >> 33) % s.order());
        check_pair(i, j);
      }
    }
  }

  std::shared_ptr<const FieldCtx> sub_, big_;
  std::vector<Elem> table_;
};

inline Elem embed(const std::shared_ptr<const FieldCtx>& sub,
                  const std::shared_ptr<const FieldCtx>& big, Elem x) {
  return SubfieldEmbedding(sub, big)(x);  // one-shot; hold a SubfieldEmbedding for bulk use
}

}  // namespace traceperm
