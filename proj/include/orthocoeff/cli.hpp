#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "orthocoeff/orthocoeff.hpp"

namespace orthocoeff::cli {

using Json = nlohmann::ordered_json;

enum class Mode { coeff, table, selfcheck, maass, cusps };
enum class Format { json, csv, text };

struct RunConfig {
  std::string gram_path;
  int k = 0;
  Mode mode = Mode::coeff;
  std::optional<Vec> lambda;  // l, w_1..w_n, m
  Rational max_q0 = 2;
  int gamma_max = 40;
  i64 budget = kDefaultBudget;
  std::optional<Format> format;
  std::string out_path;
  int threads = 0;  // 0: ORTHOCOEFF_THREADS, else hardware concurrency
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitAssertion = 4;

inline Mode parse_mode(const std::string& s) {
  if (s == "coeff") return Mode::coeff;
  if (s == "table") return Mode::table;
  if (s == "selfcheck") return Mode::selfcheck;
  if (s == "maass") return Mode::maass;
  if (s == "cusps") return Mode::cusps;
  throw ValidationError("unknown mode '" + s + "'");
}

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "text") return Format::text;
  throw ValidationError("unknown format '" + s + "' (json|csv|text)");
}

inline Vec parse_int_list(const std::string& s) {
  Vec v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad integer '" + item + "' in '" + s + "'");
    }
  }
  return v;
}

inline Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt d(s.substr(slash + 1));
    if (d == 0) throw ValidationError("zero denominator in '" + s + "'");
    return make_rational(BigInt(s.substr(0, slash)), d);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("bad rational '" + s + "'");
  }
}

inline int thread_count(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("ORTHOCOEFF_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs f(i) for i in [0, count) on up to `threads` workers. Results are written
// by index, so callers see the same output for any thread count. The first
// exception by index is rethrown.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& f) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  int t = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count));
  for (int i = 1; i < t; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline Json lattice_json(const EvenLattice& lat) {
  Json g = Json::array();
  for (std::size_t i = 0; i < lat.rank(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < lat.rank(); ++j) row.push_back(lat.gram()(i, j));
    g.push_back(row);
  }
  return {{"n", lat.rank()}, {"gram", g}, {"det", lat.det()}, {"maximal", is_maximal(lat)}};
}

inline Json lambda_json(const IndexVector& x) { return {{"l", x.l()}, {"w", x.w()}, {"m", x.m()}}; }

inline Json record_json(const CoefficientRecord& r, bool with_diagnostics) {
  Json j;
  j["lambda"] = lambda_json(r.lambda);
  j["q0"] = to_string(r.lambda.q0());
  if (r.value_exact)
    j["value"] = to_string(*r.value_exact);
  else
    j["value"] = {{"float", r.value_float}, {"tail_bound", r.diagnostics.tail_bound}};
  j["path"] = to_string(r.path);
  if (with_diagnostics && r.path != CoefficientPath::constant) {
    Json d;
    if (r.diagnostics.character_d) d["character_D"] = r.diagnostics.character_d;
    if (!r.diagnostics.bad_primes.empty()) d["bad_primes"] = r.diagnostics.bad_primes;
    if (!r.diagnostics.nonmaximal_primes.empty()) d["nonmaximal_primes"] = r.diagnostics.nonmaximal_primes;
    Json lfs = Json::array();
    for (const auto& lf : r.diagnostics.local_factors) {
      Json ns = Json::array();
      for (const auto& v : lf.table.nstar) ns.push_back(v.str());
      lfs.push_back({{"p", lf.p}, {"w_p", lf.wp}, {"nstar", ns}, {"value", to_string(lf.value)}});
    }
    if (!lfs.empty()) d["local_factors"] = lfs;
    if (!r.diagnostics.breakdown.empty()) d["breakdown"] = r.diagnostics.breakdown;
    if (!d.empty()) j["diagnostics"] = d;
  }
  return j;
}

inline std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

inline void write_csv(std::ostream& out, const EvenLattice& lat, const std::vector<CoefficientRecord>& recs) {
  out << "l";
  for (std::size_t i = 1; i <= lat.rank(); ++i) out << ",w" << i;
  out << ",m,q0,value_num,value_den\n";
  for (const auto& r : recs) {
    out << r.lambda.l();
    for (i64 w : r.lambda.w()) out << ',' << w;
    out << ',' << r.lambda.m() << ',' << to_string(r.lambda.q0()) << ',';
    if (r.value_exact)
      out << num(*r.value_exact) << ',' << den(*r.value_exact);
    else
      out << format_double(r.value_float) << ",float";
    out << '\n';
  }
}

inline IndexVector lambda_from(const EvenLattice& lat, const Vec& spec) {
  if (spec.size() != lat.rank() + 2)
    throw ValidationError("--lambda needs " + std::to_string(lat.rank() + 2) + " integers (l,w1..wn,m), got " +
                          std::to_string(spec.size()));
  return IndexVector(lat, spec.front(), Vec(spec.begin() + 1, spec.end() - 1), spec.back());
}

inline std::vector<CoefficientRecord> table(const EvenLattice& lat, int k, const Rational& bound, i64 budget,
                                            int threads) {
  auto grid = cone_vectors(lat, bound, true);
  std::vector<CoefficientRecord> recs(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) { recs[i] = coefficient(lat, grid[i], k, budget); });
  return recs;
}

inline Json defect_json(const Defect& d) {
  Json j;
  if (d.exact)
    j["defect"] = to_string(*d.exact);
  else
    j["defect"] = {{"float", d.numeric}, {"scale", d.scale}};
  j["asserted"] = d.asserted;
  j["ok"] = d.ok;
  return j;
}

inline Json maass_json(const MaassReport& rep) {
  Json tested = Json::array();
  for (const auto& e : rep.tested) {
    Json loc = Json::array();
    for (const auto& l : e.local) {
      Json lj = defect_json(l.defect);
      lj["p"] = l.p;
      lj["t"] = l.t;
      loc.push_back(lj);
    }
    tested.push_back({{"lambda", lambda_json(e.lambda)}, {"global", defect_json(e.global)}, {"local", loc}});
  }
  Json primes = Json::object();
  for (const auto& [p, v] : rep.per_prime)
    primes[std::to_string(p)] = {{"maximal", v.maximal}, {"asserted", v.asserted}, {"ok", v.ok}, {"tested", v.tested}};
  return {{"k", rep.k}, {"tested", tested}, {"per_prime", primes}, {"overall", rep.overall}};
}

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

// Invariant suite on a small grid of the given lattice.
inline std::vector<Check> selfcheck(const EvenLattice& lat, int k, const Rational& bound, i64 budget) {
  std::vector<Check> out;
  int n = static_cast<int>(lat.rank());
  auto run = [&](const std::string& name, const std::function<std::string()>& body) {
    Check c{name, true, ""};
    try {
      c.detail = body();
    } catch (const AssertionFailure& e) {
      c.pass = false;
      c.detail = e.what();
    }
    out.push_back(c);
  };
  // Every vector of the cone grid for small n; a deterministic stride sample plus
  // a few doubled vectors otherwise.
  auto grid = cone_vectors(lat, bound);
  const std::size_t cap = 40;
  if (grid.size() > cap) {
    std::vector<IndexVector> sample;
    std::size_t stride = (grid.size() + cap - 1) / cap;
    for (std::size_t i = 0; i < grid.size(); i += stride) sample.push_back(grid[i]);
    for (std::size_t i = 0, added = 0; i < sample.size() && added < 5; ++i) {
      const IndexVector& x = sample[i];
      if (!in_open_cone(x)) continue;
      Vec w = x.w();
      for (i64& c : w) c *= 2;
      sample.emplace_back(lat, 2 * x.l(), w, 2 * x.m());
      ++added;
    }
    grid = std::move(sample);
  }
  // Brute force sums only where the enumeration is cheap.
  const i64 cheap = std::min<i64>(budget, 2000000);
  auto affordable = [&](i64 gamma, int dims) { return ipow(BigInt(gamma), static_cast<unsigned>(dims)) <= cheap; };

  run("smith_form", [&] {
    BigInt prod = 1;
    for (i64 d : lat.smith().diagonal) prod *= d;
    if (prod != lat.det()) throw AssertionFailure("product of invariant factors != det");
    if (DiscriminantGroup(lat).order() != lat.det()) throw AssertionFailure("discriminant group order != det");
    return "det=" + std::to_string(lat.det());
  });
  run("maximal_off_det", [&] {
    int tested = 0;
    for (i64 p = 2; p < 50; ++p)
      if (is_prime(p) && lat.det() % p) {
        if (!is_maximal_at(lat, p)) throw AssertionFailure("not maximal at p=" + std::to_string(p));
        ++tested;
      }
    return std::to_string(tested) + " primes";
  });
  run("group_generators", [&] {
    ExtendedGram ext = extend(lat);
    int tested = 0;
    for (const auto& x : grid) {
      if (!group_membership(ext, make_translation(ext, x.s0_image())))
        throw AssertionFailure("T_lambda not in group for " + x.str());
      ++tested;
      if (tested >= 10) break;
    }
    if (!group_membership(ext, make_inversion(ext))) throw AssertionFailure("J not in group");
    return std::to_string(tested) + " translations and J";
  });
  run("telescoping", [&] {
    int tested = 0, skipped = 0;
    for (const auto& x : grid) {
      if (!in_open_cone(x)) continue;
      for (i64 p : {2, 3, 5}) {
        if (!is_maximal_at(lat, p)) continue;
        RepNumberTable tab = rep_table(lat, x, p);
        for (int nu = 1; nu <= std::min(tab.wp, 3); ++nu) {
          i64 g = ipow64(p, nu);
          if (!affordable(g, n + 2)) {
            ++skipped;
            continue;
          }
          i64 b = b_bruteforce(lat, x, g, budget).value;
          if (BigInt(b) != b_from_table(tab, nu, lat.rank()))
            throw AssertionFailure("b(lambda,p^nu) mismatch at " + x.str() + " p=" + std::to_string(p) +
                                   " nu=" + std::to_string(nu));
          ++tested;
        }
      }
    }
    return std::to_string(tested) + " cases, " + std::to_string(skipped) + " skipped";
  });
  run("stabilization", [&] {
    int tested = 0;
    for (const auto& x : grid) {
      if (!in_open_cone(x)) continue;
      for (i64 p : {2, 3, 5}) {
        if (!is_maximal_at(lat, p)) continue;
        RepNumberTable tab = rep_table(lat, x, p, stabilization_index(x, p) + 2);
        for (int nu = tab.wp; nu <= tab.wp + 1; ++nu)
          if (tab.nstar[static_cast<std::size_t>(nu + 1)] !=
              tab.nstar[static_cast<std::size_t>(nu)] * ipow(BigInt(p), static_cast<unsigned>(n - 1)))
            throw AssertionFailure("N* does not stabilize at " + x.str() + " p=" + std::to_string(p));
        ++tested;
      }
    }
    return std::to_string(tested) + " cases";
  });
  run("rationality", [&] {
    int tested = 0;
    for (const auto& x : grid) {
      if (!in_open_cone(x)) continue;
      auto r = coefficient(lat, x, k, budget);
      if (r.path == CoefficientPath::closed_form) ++tested;
    }
    return std::to_string(tested) + " closed forms";
  });
  run("closed_vs_series", [&] {
    if (!is_maximal(lat)) return std::string("skipped: lattice not maximal");
    int gmax = 0;
    while (gmax < 40 && affordable(gmax + 1, n + 2)) ++gmax;
    int tested = 0;
    double worst = 0;
    for (const auto& x : grid) {
      if (!in_open_cone(x)) continue;
      double closed = to_double(cusp_coefficient_closed(lat, x, k));
      SeriesResult s = cusp_coefficient_series(lat, x, k, gmax, SeriesVariant::e, budget);
      double gap = std::abs(s.value - closed);
      if (gap > s.tail_bound + 1e-9 * std::abs(closed))
        throw AssertionFailure("closed " + format_double(closed) + " vs series " + format_double(s.value) +
                               " beyond tail bound " + format_double(s.tail_bound) + " at " + x.str());
      worst = std::max(worst, gap / std::abs(closed));
      ++tested;
    }
    return std::to_string(tested) + " cases within the tail bound, gamma_max=" + std::to_string(gmax) +
           ", worst relative gap " + format_double(worst);
  });
  run("bernoulli_closed_form", [&] {
    if (n % 2 || !is_maximal(lat)) return std::string("skipped: needs n even and L maximal");
    int tested = 0;
    for (const auto& x : grid) {
      if (!in_open_cone(x) || x.eps() != 1) continue;
      if (cusp_coefficient_closed(lat, x, k) != cusp_coefficient_bernoulli(lat, x, k))
        throw AssertionFailure("second closed form disagrees at " + x.str());
      ++tested;
    }
    return std::to_string(tested) + " primitive vectors";
  });
  run("singular_terms", [&] {
    if (singular_coefficient(lat, IndexVector(lat, 0, Vec(lat.rank(), 0), 0), k) != 1)
      throw AssertionFailure("constant term != 1");
    int tested = 0;
    for (const auto& x : grid) {
      if (!on_boundary(x)) continue;
      // Moebius series recomputed term by term
      i64 eps = x.eps(), order = divide(lat, x, eps)->level();
      double s = 0, zk = zeta_special(k).to_double();
      for (i64 d : divisors(eps)) {
        i64 g = order / std::gcd(order, eps / d);
        for (i64 a = g; a < 100000; a += g)
          s += std::pow(static_cast<double>(d), k - 1) * mobius(a) * std::pow(static_cast<double>(a), -k);
      }
      double expect = -2.0 * k / to_double(bernoulli(k)) * s * zk;
      double got = to_double(singular_coefficient(lat, x, k));
      if (std::abs(got - expect) > 1e-8 * std::max(1.0, std::abs(got)))
        throw AssertionFailure("singular coefficient mismatch at " + x.str());
      ++tested;
    }
    return std::to_string(tested) + " boundary vectors";
  });
  run("maass", [&] {
    MaassOptions opt;
    opt.budget = budget;
    MaassReport rep = verify_maass(lat, k, grid, opt);
    if (!rep.overall) throw AssertionFailure("Maass defect nonzero");
    return std::to_string(rep.tested.size()) + " vectors";
  });
  return out;
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    EvenLattice lat = load_gram(cfg.gram_path);
    check_weight(lat, cfg.k);
    int threads = thread_count(cfg);
    Json doc;
    doc["lattice"] = lattice_json(lat);
    doc["k"] = cfg.k;
    switch (cfg.mode) {
      case Mode::coeff: {
        if (!cfg.lambda) throw ValidationError("coeff mode needs --lambda");
        CoefficientRecord r = coefficient(lat, lambda_from(lat, *cfg.lambda), cfg.k, cfg.budget);
        if (cfg.format.value_or(Format::json) == Format::csv) {
          write_csv(out, lat, {r});
        } else {
          doc["coefficients"] = Json::array({record_json(r, true)});
          out << doc.dump(2) << '\n';
        }
        return kExitOk;
      }
      case Mode::table: {
        auto recs = table(lat, cfg.k, cfg.max_q0, cfg.budget, threads);
        if (cfg.format.value_or(Format::csv) == Format::csv) {
          write_csv(out, lat, recs);
        } else {
          Json cs = Json::array();
          for (const auto& r : recs) cs.push_back(record_json(r, false));
          doc["coefficients"] = cs;
          out << doc.dump(2) << '\n';
        }
        return kExitOk;
      }
      case Mode::selfcheck: {
        auto checks = selfcheck(lat, cfg.k, cfg.max_q0, cfg.budget);
        bool all = true;
        for (const auto& c : checks) all = all && c.pass;
        if (cfg.format.value_or(Format::text) == Format::json) {
          Json cs = Json::array();
          for (const auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
          doc["checks"] = cs;
          doc["overall"] = all;
          out << doc.dump(2) << '\n';
        } else {
          for (const auto& c : checks) out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
          out << (all ? "PASS" : "FAIL") << " overall\n";
        }
        return all ? kExitOk : kExitAssertion;
      }
      case Mode::maass: {
        MaassOptions opt;
        opt.budget = cfg.budget;
        MaassReport rep = verify_maass(lat, cfg.k, cone_vectors(lat, cfg.max_q0), opt);
        doc["maass"] = maass_json(rep);
        out << doc.dump(2) << '\n';
        return rep.overall ? kExitOk : kExitAssertion;
      }
      case Mode::cusps: {
        Json cs = Json::array();
        for (const Cusp& c : enumerate_cusp_candidates(lat)) {
          Json ws = Json::array();
          for (const auto& w : estar_relation_weights(lat, c, cfg.k))
            ws.push_back({{"cusp_w", w.cusp.w}, {"residues", w.residues}, {"weight", w.weight}});
          cs.push_back({{"w", c.w}, {"q", to_string(c.q)}, {"order", c.order}, {"estar_weights", ws}});
        }
        doc["cusps"] = cs;
        out << doc.dump(2) << '\n';
        return kExitOk;
      }
    }
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const AssertionFailure& e) {
    err << "assertion failure: " << e.what() << '\n';
    return kExitAssertion;
  }
}

}  // namespace orthocoeff::cli
