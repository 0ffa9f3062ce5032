// Command-line front end: verify the known permutation families, run the
// census, classify a single form, or exercise the reduction/identity checks.
// Exit codes: 0 all-pass, 1 verification failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "traceperm/ratmaps.hpp"
#include "traceperm/reductions.hpp"
#include "traceperm/search.hpp"

namespace {

constexpr int kOk = 0, kFail = 1, kUsage = 2;

using traceperm::Elem;
using traceperm::FieldCtx;

// gamma arrives either as a packed index or as a comma-separated coefficient
// list c0,c1,... over the prime field
Elem parse_gamma(const FieldCtx& f, const std::string& text) {
  if (text.find(',') == std::string::npos) {
    uint64_t idx = 0;
    try {
      idx = std::stoull(text);
    } catch (const std::exception&) {
      throw std::invalid_argument("gamma literal '" + text + "' is not a number");
    }
    if (idx >= f.order()) throw std::invalid_argument("gamma index out of range for the field");
    return Elem{uint32_t(idx)};
  }
  std::vector<uint32_t> coeffs;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      coeffs.push_back(uint32_t(std::stoul(tok)));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad gamma coefficient '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return f.from_coeffs(coeffs);
}

std::string gamma_string(const FieldCtx& f, Elem g) {
  return "index=" + std::to_string(g.idx) + " poly=" + f.to_string(g);
}

// F_{q^n} with F_q as the marked subfield; returns the big field and s with q = p^s
std::shared_ptr<const FieldCtx> extension_field(uint64_t q, uint32_t n, uint32_t* s_out = nullptr) {
  uint64_t p = 0;
  uint32_t s = traceperm::detail::prime_power_exponent(q, p);
  if (!s) throw std::invalid_argument("q must be a prime power");
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (s_out) *s_out = s;
  return traceperm::get_field(uint32_t(p), s * n);
}

bool table_is_bijective(const FieldCtx& f, const std::vector<Elem>& table) {
  auto dom = traceperm::Domain::whole_field(f);
  return traceperm::is_bijective_full_scan(dom, [&](Elem x) { return table[x.idx]; });
}

// ---- verify-family ----

int cmd_verify_family(const std::string& case_text, uint64_t q, uint32_t ell, uint32_t r) {
  if (case_text.size() != 1) {
    std::cerr << "usage error: --case expects a single letter a..i\n";
    return kUsage;
  }
  char case_id = case_text[0];
  if (auto why = traceperm::family_inadmissible(case_id, q, ell, r)) {
    std::cerr << "usage error: " << *why << "\n";
    return kUsage;
  }
  auto instances = traceperm::instances_for(case_id, q, ell, r);
  if (instances.empty()) {
    std::cout << "0 instances: no gamma satisfies the side condition";
    if (case_id == 'i')
      std::cout << " (for odd q it is solvable exactly when 4l divides n = 2lr, i.e. r is even)";
    std::cout << "\n";
    return kOk;
  }
  bool all = true;
  for (const auto& inst : instances) {
    bool ok = traceperm::verify_family(inst);
    all = all && ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  case " << inst.case_id << "  "
              << inst.form.to_string() << "  over " << inst.form.ctx->spec_string() << "\n";
  }
  std::cout << instances.size() << " instance(s), " << (all ? "all pass" : "FAILURES above") << "\n";
  return all ? kOk : kFail;
}

// ---- census ----

struct CensusArgs {
  uint64_t max_order = 5000;
  std::string out, summary, report, checkpoint;
  unsigned threads = 1;
  bool no_gamma_orbits = false;
  bool include_even = false;
};

int cmd_census(const CensusArgs& a) {
  traceperm::SearchOptions opts;
  opts.use_gamma_orbits = !a.no_gamma_orbits;
  opts.threads = a.threads;
  opts.checkpoint_path = a.checkpoint;
  auto rep = traceperm::census(a.max_order, !a.include_even, opts);

  if (!a.out.empty()) {
    std::ofstream os(a.out);
    if (!os) {
      std::cerr << "usage error: cannot open '" << a.out << "'\n";
      return kUsage;
    }
    traceperm::write_records_jsonl(rep.records, os);
  }
  if (!a.summary.empty()) {
    std::ofstream os(a.summary);
    if (!os) {
      std::cerr << "usage error: cannot open '" << a.summary << "'\n";
      return kUsage;
    }
    traceperm::write_summary_csv(rep, os);
  }
  if (!a.report.empty()) {
    std::ofstream os(a.report);
    if (!os) {
      std::cerr << "usage error: cannot open '" << a.report << "'\n";
      return kUsage;
    }
    os << traceperm::report_to_json(rep).dump(2) << '\n';
  }

  traceperm::write_summary_csv(rep, std::cout);
  for (const auto& r : rep.sporadic)
    std::cout << "sporadic: q=" << r.q << " n=" << r.n << " k=" << r.k_min << " gamma "
              << gamma_string(*traceperm::parse_field_spec(r.field_spec), Elem{r.gamma_index})
              << " (" << r.classification << ")\n";
  for (const auto& r : rep.unexplained)
    std::cout << "UNEXPLAINED: q=" << r.q << " n=" << r.n << " k=" << r.k_min
              << " gamma_index=" << r.gamma_index << "\n";
  std::cout << "total " << rep.records.size() << " records, " << rep.sporadic.size()
            << " sporadic, " << rep.unexplained.size() << " unexplained, " << rep.seconds
            << "s\n";
  return rep.unexplained.empty() ? kOk : kFail;
}

// ---- classify ----

int cmd_classify(const std::string& field_spec, uint32_t n, uint64_t k, const std::string& gamma_text) {
  auto big = traceperm::parse_field_spec(field_spec);
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (big->degree() % n)
    throw std::invalid_argument("n must divide the degree of the field");
  const uint64_t q = traceperm::detail::ipow(big->characteristic(), big->degree() / n);
  Elem gamma = parse_gamma(*big, gamma_text);
  auto form = traceperm::make_trace_form(big, q, n, k, gamma);
  auto cls = traceperm::classify(form);

  std::cout << "field " << big->spec_string() << "\n";
  std::cout << "form  " << form.to_string() << "\n";
  std::cout << "gamma " << gamma_string(*big, form.gamma) << "\n";
  auto orb = traceperm::canonical_k(form.k, q, n);
  std::cout << "k     " << form.k << " canonical=" << orb.k_min << " orbit=";
  for (size_t i = 0; i < orb.orbit.size(); ++i) std::cout << (i ? "," : "") << orb.orbit[i];
  std::cout << "\n";
  if (cls.primary == traceperm::Tag::not_a_pp)
    std::cout << "not a permutation\n";
  else
    std::cout << "classification " << cls.text() << "\n";
  return kOk;
}

// ---- check ----

struct CheckArgs {
  std::string prop;
  uint64_t q = 0;
  uint32_t n = 2;
  uint64_t k = 0;          // 0 means "not given"
  std::string gamma;       // empty means "not given"
  std::string omega;       // redsq1 line direction
  uint64_t big_n = 0;      // redsq2 numerator degree parameter, 0 = exhaust
  std::string case_text;   // translator: family case
  uint32_t ell = 0, r = 0;
  std::string which;       // identities: case7|case8|case9
  uint64_t count = 100;
  uint64_t seed = 0x5eed;
  std::string h;           // zlem: explicit coefficient list (element indices)
};

void print_line_failures(const FieldCtx& f, const traceperm::SurjResult& res, const char* label) {
  size_t shown = 0;
  for (const auto& rep : res.reports) {
    if (rep.holds || shown >= 3) continue;
    std::cout << "  " << label << " fails at alpha " << f.to_string(rep.alpha);
    if (rep.witness)
      std::cout << ": line collides at u=" << f.to_string(rep.witness->first)
                << " and u=" << f.to_string(rep.witness->second);
    std::cout << "\n";
    ++shown;
  }
}

int check_surj(const CheckArgs& a) {
  uint32_t s = 0;
  auto f = extension_field(a.q, a.n, &s);
  const uint64_t L = f->group_order();
  std::mt19937_64 rng(a.seed);

  auto run_one = [&](uint64_t k, Elem gamma) {
    auto fv = traceperm::trace_power_table(*f, s, k);
    auto line = traceperm::surj_criterion(*f, a.q, fv, gamma, traceperm::SurjMode::line_bijective);
    auto uniq = traceperm::surj_criterion(*f, a.q, fv, gamma, traceperm::SurjMode::unique_root);
    std::vector<Elem> table(f->order());
    for (uint32_t i = 0; i < f->order(); ++i)
      table[i] = f->add(Elem{i}, f->mul(gamma, fv[i]));
    bool direct = table_is_bijective(*f, table);
    bool agree = line.ok == uniq.ok && uniq.ok == direct;
    if (!agree) {
      std::cout << "DISAGREE at q=" << a.q << " n=" << a.n << " k=" << k << " gamma "
                << gamma_string(*f, gamma) << ": line=" << line.ok << " unique-root=" << uniq.ok
                << " direct=" << direct << "\n";
      print_line_failures(*f, line, "line-bijective");
      print_line_failures(*f, uniq, "unique-root");
    }
    return agree;
  };

  bool all = true;
  uint64_t ran = 0;
  if (a.k || !a.gamma.empty()) {
    if (!a.k || a.gamma.empty())
      throw std::invalid_argument("surj needs both --k and --gamma, or neither");
    all = run_one(a.k, parse_gamma(*f, a.gamma));
    ran = 1;
  } else {
    std::uniform_int_distribution<uint64_t> kd(1, L), gd(0, L - 1);
    for (uint64_t i = 0; i < a.count; ++i) all = run_one(kd(rng), f->exp(gd(rng))) && all;
    ran = a.count;
  }
  std::cout << (all ? "PASS" : "FAIL") << ": line-bijective, unique-root and direct bijectivity "
            << (all ? "agree" : "disagree") << " on " << ran << " instance(s)\n";
  return all ? kOk : kFail;
}

int check_zlem(const CheckArgs& a) {
  auto f = extension_field(a.q, a.n);
  std::mt19937_64 rng(a.seed);
  bool all = true;
  uint64_t ran = 0;

  auto run_one = [&](const std::vector<Elem>& coeffs) {
    auto res = traceperm::zlem_check(*f, a.q, coeffs);
    if (!res.consistent()) {
      std::cout << "DISAGREE: x*h(x^(q-1)) bijective=" << res.left
                << " but x*h(x)^(q-1) permutes the unity subgroup=" << res.right << " for h =";
      for (Elem c : coeffs) std::cout << ' ' << c.idx;
      std::cout << "\n";
    }
    return res.consistent();
  };

  if (!a.h.empty()) {
    std::vector<Elem> coeffs;
    size_t pos = 0;
    while (pos <= a.h.size()) {
      size_t comma = a.h.find(',', pos);
      std::string tok = a.h.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      uint64_t idx = std::stoull(tok);
      if (idx >= f->order()) throw std::invalid_argument("h coefficient index out of range");
      coeffs.push_back(Elem{uint32_t(idx)});
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    all = run_one(coeffs);
    ran = 1;
  } else {
    std::uniform_int_distribution<uint32_t> cd(0, uint32_t(f->order() - 1));
    for (uint64_t i = 0; i < a.count; ++i) {
      std::vector<Elem> coeffs(7);
      for (auto& c : coeffs) c = Elem{cd(rng)};
      all = run_one(coeffs) && all;
      ++ran;
    }
  }
  std::cout << (all ? "PASS" : "FAIL") << ": both sides of the subgroup criterion "
            << (all ? "agree" : "disagree") << " on " << ran << " polynomial(s)\n";
  return all ? kOk : kFail;
}

int check_redsq1(const CheckArgs& a) {
  if (!a.k || a.gamma.empty())
    throw std::invalid_argument("redsq1 needs --k and --gamma");
  uint32_t s = 0;
  auto f = extension_field(a.q, a.n, &s);
  Elem gamma = parse_gamma(*f, a.gamma);
  auto fv = traceperm::trace_power_table(*f, s, a.k);

  Elem omega;
  if (!a.omega.empty()) {
    omega = parse_gamma(*f, a.omega);
  } else {
    // any direction independent of gamma over F_q works
    bool found = false;
    for (uint32_t i = 1; i < f->order() && !found; ++i) {
      Elem w{i};
      if (!f->in_subfield(s, f->mul(w, f->inv(gamma)))) {
        omega = w;
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("no direction independent of gamma (is n >= 2?)");
  }

  bool predicted = traceperm::red_sq1_check(*f, a.q, fv, gamma, omega);
  std::vector<Elem> table(f->order());
  for (uint32_t i = 0; i < f->order(); ++i) table[i] = f->add(Elem{i}, f->mul(gamma, fv[i]));
  bool direct = table_is_bijective(*f, table);
  std::cout << "one-line criterion: " << (predicted ? "holds" : "fails")
            << ", direct bijectivity: " << (direct ? "holds" : "fails") << "\n";
  bool agree = predicted == direct;
  std::cout << (agree ? "PASS" : "FAIL") << ": criterion and direct check "
            << (agree ? "agree" : "disagree") << " at q=" << a.q << " n=" << a.n << " k=" << a.k
            << " gamma " << gamma_string(*f, gamma) << " omega " << f->to_string(omega) << "\n";
  return agree ? kOk : kFail;
}

int check_redsq2(const CheckArgs& a) {
  uint32_t s = 0;
  auto f = extension_field(a.q, 2, &s);

  auto run_one = [&](uint64_t N, Elem gamma) {
    auto H = traceperm::red_sq2_H(*f, N, gamma);
    bool on_mu = bool(traceperm::permutes_mu(H.map, a.q + 1));
    auto form = traceperm::make_trace_form(f, a.q, 2, H.k, gamma);
    auto dom = traceperm::Domain::whole_field(*f);
    bool direct = traceperm::is_bijective_full_scan(dom, [&](Elem x) { return form(x); });
    if (on_mu != direct)
      std::cout << "DISAGREE at q=" << a.q << " N=" << N << " gamma " << gamma_string(*f, gamma)
                << ": H-on-mu=" << on_mu << " direct=" << direct << "\n";
    return on_mu == direct;
  };

  bool all = true;
  uint64_t ran = 0;
  if (a.big_n && !a.gamma.empty()) {
    all = run_one(a.big_n, parse_gamma(*f, a.gamma));
    ran = 1;
  } else {
    for (uint64_t N = 1; N <= a.q + 1; ++N)
      for (uint64_t j = 0; j < f->group_order(); ++j) {
        all = run_one(N, f->exp(j)) && all;
        ++ran;
      }
  }
  std::cout << (all ? "PASS" : "FAIL")
            << ": fractional-map criterion on the unity subgroup matches direct bijectivity on "
            << ran << " instance(s)\n";
  return all ? kOk : kFail;
}

int check_translator(const CheckArgs& a) {
  if (!a.case_text.empty()) {
    if (a.case_text.size() != 1) throw std::invalid_argument("--case expects a single letter a..i");
    char case_id = a.case_text[0];
    if (auto why = traceperm::family_inadmissible(case_id, a.q, a.ell, a.r)) {
      std::cerr << "usage error: " << *why << "\n";
      return kUsage;
    }
    auto instances = traceperm::instances_for(case_id, a.q, a.ell, a.r);
    if (instances.empty()) {
      std::cout << "0 instances\n";
      return kOk;
    }
    bool all = true;
    for (const auto& inst : instances) {
      const auto& form = inst.form;
      auto fv = traceperm::trace_power_table(*form.ctx, form.s, form.k);
      auto delta = traceperm::is_linear_translator(*form.ctx, form.q, fv, form.gamma);
      std::cout << "case " << inst.case_id << " gamma " << gamma_string(*form.ctx, form.gamma)
                << ": ";
      if (delta)
        std::cout << "delta = " << form.ctx->to_string(*delta) << "\n";
      else
        std::cout << "not a translator\n";
      // the shifted-input family is the only one built on a translator
      bool expected = case_id == 'i' ? (delta && delta->is_zero()) : !delta;
      all = all && expected;
    }
    std::cout << (all ? "PASS" : "FAIL") << ": translator dichotomy over " << instances.size()
              << " instance(s)\n";
    return all ? kOk : kFail;
  }

  if (!a.k || a.gamma.empty())
    throw std::invalid_argument("translator needs --case, or --k and --gamma");
  uint32_t s = 0;
  auto f = extension_field(a.q, a.n, &s);
  Elem gamma = parse_gamma(*f, a.gamma);
  auto fv = traceperm::trace_power_table(*f, s, a.k);
  auto delta = traceperm::is_linear_translator(*f, a.q, fv, gamma);
  if (delta)
    std::cout << "delta = " << f->to_string(*delta) << "\n";
  else
    std::cout << "not a translator\n";
  return kOk;
}

int check_identities(const CheckArgs& a) {
  if (a.which == "case7" || a.which == "case8") {
    bool ok = a.which == "case7" ? traceperm::case7_mu_identity_check(a.q)
                                 : traceperm::case8_identity_check(a.q);
    std::cout << (ok ? "PASS" : "FAIL") << ": " << a.which << " identities at q=" << a.q << "\n";
    return ok ? kOk : kFail;
  }
  if (a.which == "case9") {
    if (!a.ell) throw std::invalid_argument("case9 needs --l (and --n a multiple of 2l)");
    uint32_t s = 0;
    auto f = extension_field(a.q, a.n, &s);
    std::vector<Elem> gammas;
    if (!a.gamma.empty()) {
      gammas.push_back(parse_gamma(*f, a.gamma));
    } else {
      // every gamma with gamma^(q^(2l) - 1) = -1
      uint64_t qpow = 1;
      for (uint32_t i = 0; i < 2 * a.ell; ++i) qpow *= a.q;
      Elem minus_one = f->neg(f->one());
      for (uint64_t j = 0; j < f->group_order(); ++j) {
        Elem g = f->exp(j);
        if (f->pow(g, int64_t(qpow - 1)) == minus_one) gammas.push_back(g);
      }
      if (gammas.empty()) {
        std::cout << "0 admissible gamma at q=" << a.q << " l=" << a.ell << " n=" << a.n << "\n";
        return kOk;
      }
    }
    bool all = true;
    for (Elem g : gammas) {
      bool ok = traceperm::case9_trace_identities(*f, a.q, a.ell, g);
      if (!ok) std::cout << "FAIL at gamma " << gamma_string(*f, g) << "\n";
      all = all && ok;
    }
    std::cout << (all ? "PASS" : "FAIL") << ": trace-vanishing identities for " << gammas.size()
              << " gamma(s) at q=" << a.q << " l=" << a.ell << " n=" << a.n << "\n";
    return all ? kOk : kFail;
  }
  throw std::invalid_argument("unknown --which '" + a.which + "' (case7|case8|case9)");
}

int cmd_check(const CheckArgs& a) {
  if (!a.q) throw std::invalid_argument("check needs --q");
  if (a.prop == "surj") return check_surj(a);
  if (a.prop == "zlem") return check_zlem(a);
  if (a.prop == "redsq1") return check_redsq1(a);
  if (a.prop == "redsq2") return check_redsq2(a);
  if (a.prop == "translator") return check_translator(a);
  if (a.prop == "identities") return check_identities(a);
  throw std::invalid_argument("unknown property '" + a.prop + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolkit for trace-shift permutations x + gamma*Tr(x^k) of small finite fields"};
  app.require_subcommand(1);
  std::function<int()> action;

  auto* vf = app.add_subcommand("verify-family", "build all instances of one family and verify them");
  std::string vf_case;
  uint64_t vf_q = 0;
  uint32_t vf_l = 0, vf_r = 0;
  vf->add_option("--case", vf_case, "family case id, a..i")->required();
  vf->add_option("--q", vf_q, "base field size (prime power)")->required();
  vf->add_option("--l", vf_l, "case i: l with n = 2*l*r");
  vf->add_option("--r", vf_r, "case i: r with n = 2*l*r");
  vf->callback([&] { action = [&] { return cmd_verify_family(vf_case, vf_q, vf_l, vf_r); }; });

  auto* ce = app.add_subcommand("census", "exhaust all (k, gamma) over every field below a bound");
  CensusArgs ca;
  ce->add_option("--max-order", ca.max_order, "strict upper bound on the field order q^n");
  ce->add_option("--out", ca.out, "write one JSON record per hit to this file");
  ce->add_option("--summary", ca.summary, "write the per-field CSV summary to this file");
  ce->add_option("--report", ca.report, "write the full JSON report to this file");
  ce->add_option("--checkpoint", ca.checkpoint, "append finished fields here and resume from it");
  ce->add_option("--threads", ca.threads, "worker threads (0 = hardware)")
      ->envname("TRACEPERM_THREADS");
  ce->add_flag("--no-gamma-orbits", ca.no_gamma_orbits, "test every gamma instead of one per scaling class");
  ce->add_flag("--include-even", ca.include_even, "also walk even-characteristic fields");
  bool odd_flag = false;
  ce->add_flag("--odd-only", odd_flag, "restrict to odd characteristic (the default)");
  ce->callback([&] { action = [&] { return cmd_census(ca); }; });

  auto* cl = app.add_subcommand("classify", "explain one form, or report that it is not a permutation");
  std::string cl_field, cl_gamma;
  uint32_t cl_n = 2;
  uint64_t cl_k = 0;
  cl->add_option("--field", cl_field, "the field F_{p^m} the form acts on, as p^m")->required();
  cl->add_option("--n", cl_n, "trace depth: the trace maps onto F_{p^(m/n)}")->required();
  cl->add_option("--k", cl_k, "trace exponent")->required();
  cl->add_option("--gamma", cl_gamma, "gamma as index or coefficient list c0,c1,...")->required();
  cl->callback([&] { action = [&] { return cmd_classify(cl_field, cl_n, cl_k, cl_gamma); }; });

  auto* ch = app.add_subcommand("check", "run one of the reduction/identity property suites");
  CheckArgs ha;
  ch->add_option("--prop", ha.prop, "surj|zlem|redsq1|redsq2|translator|identities")->required();
  ch->add_option("--q", ha.q, "base field size (prime power)");
  ch->add_option("--n", ha.n, "extension degree (default 2)");
  ch->add_option("--k", ha.k, "trace exponent");
  ch->add_option("--gamma", ha.gamma, "gamma as index or coefficient list");
  ch->add_option("--omega", ha.omega, "redsq1: direction element, index or coefficient list");
  ch->add_option("--N", ha.big_n, "redsq2: numerator parameter (omit to exhaust 1..q+1)");
  ch->add_option("--case", ha.case_text, "translator: family case id");
  ch->add_option("--l", ha.ell, "case i / case9 parameter l");
  ch->add_option("--r", ha.r, "case i parameter r");
  ch->add_option("--which", ha.which, "identities: case7|case8|case9");
  ch->add_option("--count", ha.count, "random instances for surj/zlem (default 100)");
  ch->add_option("--seed", ha.seed, "seed for the random instances");
  ch->add_option("--coeffs", ha.h, "zlem: explicit h coefficients as element indices c0,c1,...");
  ch->callback([&] { action = [&] { return cmd_check(ha); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return action ? action() : kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}
