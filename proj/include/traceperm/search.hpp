#pragma once
// Exhaustive census of permutations x + gamma*Tr(x^k) over a field or a range
// of fields.  Feasibility rests on three reductions: exponents are walked one
// representative per multiplication-by-q orbit, gamma is walked one
// representative per scaling class (gamma ~ gamma*c^{k-1} for c in F_q^*,
// since conjugating by x -> cx turns one form into the other), and candidates
// are rejected early by the birthday-bounded bijectivity check.  Every
// surviving record is re-verified by an independent full pass and classified.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "traceperm/families.hpp"

namespace traceperm {

struct SearchRecord {
  uint64_t q = 0;
  uint32_t n = 0;
  uint64_t k_min = 0;               // orbit minimum, the canonical exponent
  std::vector<uint64_t> k_orbit;    // all equivalent exponents, ascending
  uint32_t gamma_index = 0;         // packed coefficient index of gamma
  std::string gamma_poly;           // gamma written in the power basis
  std::string classification;
  std::string field_spec;
};

struct SearchOptions {
  bool use_gamma_orbits = true;
  unsigned threads = 1;         // 0 picks hardware concurrency
  std::string checkpoint_path;  // empty disables checkpointing
};

struct FieldTally {
  uint64_t q = 0;
  uint32_t n = 0;
  uint64_t order = 0;
  uint64_t candidates = 0;  // size of the (k-orbit, gamma) space covered
  uint64_t tested = 0;      // early-abort bijectivity runs actually performed
  uint64_t evals = 0;       // map evaluations inside those runs
  uint64_t records = 0;
  std::map<std::string, uint64_t> by_class;  // primary tag -> record count
  double seconds = 0;
};

struct CensusReport {
  uint64_t bound = 0;
  bool odd_only = true;
  std::vector<FieldTally> fields;
  std::vector<SearchRecord> records;      // all hits, globally ordered
  std::vector<SearchRecord> sporadic;     // subset with primary tag sporadic
  std::vector<SearchRecord> unexplained;  // subset with primary tag unexplained
  double seconds = 0;
};

namespace detail {

inline uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::string primary_tag(const std::string& classification) {
  auto pos = classification.find(':');
  return pos == std::string::npos ? classification : classification.substr(0, pos);
}

}  // namespace detail

// One field: every canonical exponent orbit against every gamma.
inline std::vector<SearchRecord> search_field(uint64_t q, uint32_t n,
                                              const SearchOptions& opts = {},
                                              FieldTally* tally_out = nullptr) {
  uint64_t p = 0;
  uint32_t s = detail::prime_power_exponent(q, p);
  if (!s || n < 2) throw std::invalid_argument("search needs a prime power q and n >= 2");
  auto fptr = get_field(uint32_t(p), s * n);
  const FieldCtx& f = *fptr;
  const uint64_t N = f.order(), L = f.group_order();
  const uint64_t step = L / (q - 1);
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<Elem> trq(N);
  for (uint64_t i = 0; i < N; ++i) trq[i] = f.trace(s, Elem{uint32_t(i)});

  // canonical exponents: minima of the multiplication-by-q orbits
  std::vector<uint64_t> kmins;
  for (uint64_t k = 1; k <= L; ++k) {
    bool is_min = true;
    for (uint64_t r = k % L * q % L;; r = r * q % L) {
      uint64_t res = r == 0 ? L : r;
      if (res == k) break;
      if (res < k) {
        is_min = false;
        break;
      }
    }
    if (is_min) kmins.push_back(k);
  }

  const bool identity_possible = n % p == 0;
  const uint64_t sub_m1 = identity_possible ? detail::ipow(q, n / p) - 1 : 0;

  std::vector<std::vector<SearchRecord>> outs(kmins.size());
  std::atomic<size_t> next{0};
  std::atomic<uint64_t> a_cand{0}, a_tested{0}, a_evals{0};

  auto worker = [&] {
    PermWorkspace ws(N);
    std::vector<Elem> tk(N);
    auto dom = Domain::whole_field(f);
    size_t oi;
    while ((oi = next.fetch_add(1)) < kmins.size()) {
      const uint64_t k = kmins[oi];
      const uint64_t kr = k % L;
      tk[0] = f.zero();
      for (uint64_t j = 0; j < L; ++j) tk[f.exp(j).idx] = trq[f.exp(j * kr % L).idx];

      uint64_t tested = 0, evals = 0;
      std::vector<uint32_t> hits;

      if (identity_possible && k * sub_m1 % L == 0) {
        // Tr(x^k) must vanish identically, making every gamma a hit.
        for (uint64_t i = 0; i < N; ++i)
          if (!tk[i].is_zero())
            throw std::logic_error("identity-class exponent has a nonvanishing trace term");
        for (uint64_t j = 0; j < L; ++j) hits.push_back(f.exp(j).idx);
      } else {
        const uint64_t G =
            opts.use_gamma_orbits ? std::gcd((k - 1) * step % L, L) : L;
        const uint64_t class_size = L / G;
        for (uint64_t c = 0; c < G; ++c) {
          Elem grep = f.exp(c);
          auto eval = [&](Elem x) {
            Elem t = tk[x.idx];
            return t.is_zero() ? x : f.add(x, f.mul(grep, t));
          };
          ++tested;
          auto res = check_permutation(dom, eval, &ws);
          evals += res.evals;
          if (!res.ok) continue;
          if (class_size > 1) {
            // scaling argument says the whole class permutes; spot-check a
            // second member before trusting it
            uint64_t seed = detail::splitmix64((q << 40) ^ (uint64_t(n) << 32) ^ (k << 12) ^ c);
            uint64_t j = 1 + seed % (class_size - 1);
            Elem gother = f.exp((c + j * G) % L);
            auto eval2 = [&](Elem x) {
              Elem t = tk[x.idx];
              return t.is_zero() ? x : f.add(x, f.mul(gother, t));
            };
            ++tested;
            auto res2 = check_permutation(dom, eval2, &ws);
            evals += res2.evals;
            if (!res2.ok)
              throw std::logic_error("gamma scaling class member failed to permute");
          }
          for (uint64_t m = 0; m < class_size; ++m) hits.push_back(f.exp(c + m * G).idx);
        }
      }

      std::sort(hits.begin(), hits.end());
      auto orb = canonical_k(k, q, n);
      auto& out = outs[oi];
      out.reserve(hits.size());
      for (uint32_t gi : hits) {
        TraceForm form = make_trace_form(fptr, q, n, k, Elem{gi});
        if (!is_bijective_full_scan(dom, [&](Elem x) { return form(x); }))
          throw std::logic_error("record failed independent re-verification");
        SearchRecord rec;
        rec.q = q;
        rec.n = n;
        rec.k_min = k;
        rec.k_orbit = orb.orbit;
        rec.gamma_index = gi;
        rec.gamma_poly = f.to_string(Elem{gi});
        rec.classification = classify_permutation(form).text();
        rec.field_spec = f.spec_string();
        out.push_back(std::move(rec));
      }
      a_cand += L;
      a_tested += tested;
      a_evals += evals;
    }
  };

  unsigned nthreads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<size_t>(nthreads, kmins.empty() ? 1 : kmins.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<SearchRecord> records;
  for (auto& o : outs) records.insert(records.end(), std::make_move_iterator(o.begin()),
                                      std::make_move_iterator(o.end()));

  if (tally_out) {
    FieldTally t;
    t.q = q;
    t.n = n;
    t.order = N;
    t.candidates = a_cand;
    t.tested = a_tested;
    t.evals = a_evals;
    t.records = records.size();
    for (auto& r : records) ++t.by_class[detail::primary_tag(r.classification)];
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    *tally_out = std::move(t);
  }
  return records;
}

// ---- serialization ----

inline nlohmann::ordered_json record_to_json(const SearchRecord& r) {
  nlohmann::ordered_json j;
  j["q"] = r.q;
  j["n"] = r.n;
  j["k_min"] = r.k_min;
  j["k_orbit"] = r.k_orbit;
  j["gamma_index"] = r.gamma_index;
  j["gamma_poly"] = r.gamma_poly;
  j["classification"] = r.classification;
  j["field_spec"] = r.field_spec;
  return j;
}

inline SearchRecord record_from_json(const nlohmann::json& j) {
  SearchRecord r;
  r.q = j.at("q").get<uint64_t>();
  r.n = j.at("n").get<uint32_t>();
  r.k_min = j.at("k_min").get<uint64_t>();
  r.k_orbit = j.at("k_orbit").get<std::vector<uint64_t>>();
  r.gamma_index = j.at("gamma_index").get<uint32_t>();
  r.gamma_poly = j.at("gamma_poly").get<std::string>();
  r.classification = j.at("classification").get<std::string>();
  r.field_spec = j.at("field_spec").get<std::string>();
  return r;
}

inline void write_records_jsonl(const std::vector<SearchRecord>& recs, std::ostream& os) {
  for (const auto& r : recs) os << record_to_json(r).dump() << '\n';
}

inline nlohmann::ordered_json tally_to_json(const FieldTally& t) {
  nlohmann::ordered_json j;
  j["q"] = t.q;
  j["n"] = t.n;
  j["order"] = t.order;
  j["candidates"] = t.candidates;
  j["tested"] = t.tested;
  j["evals"] = t.evals;
  j["records"] = t.records;
  j["by_class"] = t.by_class;
  j["seconds"] = t.seconds;
  return j;
}

inline FieldTally tally_from_json(const nlohmann::json& j) {
  FieldTally t;
  t.q = j.at("q").get<uint64_t>();
  t.n = j.at("n").get<uint32_t>();
  t.order = j.at("order").get<uint64_t>();
  t.candidates = j.at("candidates").get<uint64_t>();
  t.tested = j.at("tested").get<uint64_t>();
  t.evals = j.at("evals").get<uint64_t>();
  t.records = j.at("records").get<uint64_t>();
  t.by_class = j.at("by_class").get<std::map<std::string, uint64_t>>();
  t.seconds = j.at("seconds").get<double>();
  return t;
}

namespace detail {

inline uint64_t fnv1a(std::string_view s, uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string records_digest(const std::vector<SearchRecord>& recs) {
  uint64_t h = 14695981039346656037ull;
  for (const auto& r : recs) {
    h = fnv1a(record_to_json(r).dump(), h);
    h = fnv1a("\n", h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace detail

// ---- multi-field census ----

struct CensusField {
  uint64_t q = 0;
  uint32_t n = 0;
  uint64_t order = 0;
};

inline std::vector<CensusField> census_fields(uint64_t bound, bool odd_only) {
  std::vector<CensusField> out;
  for (uint64_t q = 2; q * q < bound; ++q) {
    uint64_t p = 0;
    if (!detail::prime_power_exponent(q, p)) continue;
    if (odd_only && p == 2) continue;
    uint64_t order = q * q;
    for (uint32_t n = 2; order < bound; ++n) {
      out.push_back({q, n, order});
      if (order > bound / q) break;
      order *= q;
    }
  }
  std::sort(out.begin(), out.end(), [](const CensusField& a, const CensusField& b) {
    return a.order != b.order ? a.order < b.order : a.q < b.q;
  });
  return out;
}

inline CensusReport census(uint64_t bound = 5000, bool odd_only = true,
                           const SearchOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  CensusReport rep;
  rep.bound = bound;
  rep.odd_only = odd_only;

  // resume support: one JSONL line per finished field, verified by digest
  struct Cached {
    FieldTally tally;
    std::vector<SearchRecord> records;
  };
  std::map<std::pair<uint64_t, uint32_t>, Cached> cache;
  if (!opts.checkpoint_path.empty()) {
    std::ifstream in(opts.checkpoint_path);
    std::string line;
    while (in && std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || j.value("type", "") != "field") continue;
      Cached c;
      c.tally = tally_from_json(j.at("tally"));
      for (const auto& rj : j.at("records")) c.records.push_back(record_from_json(rj));
      if (detail::records_digest(c.records) != j.value("hash", "")) continue;
      cache[{c.tally.q, c.tally.n}] = std::move(c);
    }
  }

  std::ofstream ckpt;
  if (!opts.checkpoint_path.empty())
    ckpt.open(opts.checkpoint_path, std::ios::app);

  for (const auto& field : census_fields(bound, odd_only)) {
    FieldTally tally;
    std::vector<SearchRecord> recs;
    auto it = cache.find({field.q, field.n});
    if (it != cache.end()) {
      tally = it->second.tally;
      recs = std::move(it->second.records);
    } else {
      recs = search_field(field.q, field.n, opts, &tally);
      if (ckpt.is_open()) {
        nlohmann::ordered_json j;
        j["type"] = "field";
        j["q"] = field.q;
        j["n"] = field.n;
        j["hash"] = detail::records_digest(recs);
        j["tally"] = tally_to_json(tally);
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : recs) arr.push_back(record_to_json(r));
        j["records"] = std::move(arr);
        ckpt << j.dump() << '\n';
        ckpt.flush();
      }
    }
    rep.fields.push_back(tally);
    for (auto& r : recs) {
      auto tag = detail::primary_tag(r.classification);
      if (tag == "sporadic") rep.sporadic.push_back(r);
      if (tag == "unexplained") rep.unexplained.push_back(r);
      rep.records.push_back(std::move(r));
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline void write_summary_csv(const CensusReport& rep, std::ostream& os) {
  os << "q,n,order,candidates,tested,evals,records,identity,additive,family,sporadic,unexplained\n";
  for (const auto& t : rep.fields) {
    auto count = [&](const char* tag) {
      auto it = t.by_class.find(tag);
      return it == t.by_class.end() ? uint64_t{0} : it->second;
    };
    os << t.q << ',' << t.n << ',' << t.order << ',' << t.candidates << ',' << t.tested << ','
       << t.evals << ',' << t.records << ',' << count("identity") << ',' << count("additive")
       << ',' << count("family") << ',' << count("sporadic") << ',' << count("unexplained")
       << '\n';
  }
}

inline nlohmann::ordered_json report_to_json(const CensusReport& rep) {
  nlohmann::ordered_json j;
  j["bound"] = rep.bound;
  j["odd_only"] = rep.odd_only;
  j["total_records"] = rep.records.size();
  auto fields = nlohmann::ordered_json::array();
  for (const auto& t : rep.fields) fields.push_back(tally_to_json(t));
  j["fields"] = std::move(fields);
  auto spor = nlohmann::ordered_json::array();
  for (const auto& r : rep.sporadic) spor.push_back(record_to_json(r));
  j["sporadic"] = std::move(spor);
  auto unex = nlohmann::ordered_json::array();
  for (const auto& r : rep.unexplained) unex.push_back(record_to_json(r));
  j["unexplained"] = std::move(unex);
  j["seconds"] = rep.seconds;
  return j;
}

}  // namespace traceperm
