#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "porc/canon.hpp"
#include "porc/family.hpp"
#include "porc/monomial.hpp"
#include "porc/porc_function.hpp"

namespace porc {

/// n_1 ... n_t |G|, G the permutations of positions fixing the pair list.
inline Integer multiplicity(const MatrixType& t) {
  Integer out = 1;
  for (const auto& p : t.pairs()) out *= p.degree;
  const auto& pairs = t.pairs();
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
    for (std::size_t k = 2; k <= j - i; ++k) out *= static_cast<unsigned>(k);
    i = j;
  }
  return out;
}

inline std::vector<std::int64_t> prime_powers_in(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t q = std::max<std::int64_t>(lo, 2); q <= hi; ++q)
    if (is_prime_power(q)) out.push_back(q);
  return out;
}

/// Number of conjugacy classes of GL(m,q) of type t.
inline PorcFunction class_count_porc(const MatrixType& t) {
  auto f = infer_porc(build_type_system(t)).function;
  return porc_divide_exact(f, PorcFunction::constant(Rational(multiplicity(t))), prime_powers_in(2, 64));
}

/// One eigenvalue-1 pattern: the monomials in `mask` equal 1, the others do not.
struct SubsetSystem {
  std::uint64_t mask = 0;
  MonomialSystem system;
  int fixed_dimension = 0;     // Jordan blocks (with multiplicity) whose monomial is in the subset
  bool frobenius_closed = true;  // otherwise the system is unsatisfiable
};

inline std::vector<SubsetSystem> subset_systems(const SymbolicJordanSpec& spec, const MatrixType& t) {
  auto mons = spec.monomials();
  if (mons.size() > 20) throw BudgetError("too many distinct eigenvalue monomials (" + std::to_string(mons.size()) + ")");
  auto perm = frobenius_on_monomials(spec);
  std::vector<int> blocks_of(mons.size(), 0);
  for (const auto& b : spec.blocks) {
    auto it = std::lower_bound(mons.begin(), mons.end(), b.monomial);
    blocks_of[static_cast<std::size_t>(it - mons.begin())] += b.multiplicity;
  }
  const auto base = build_type_system(t);
  std::vector<SubsetSystem> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << mons.size()); ++mask) {
    SubsetSystem s;
    s.mask = mask;
    s.system = base;
    for (std::size_t a = 0; a < mons.size(); ++a) {
      bool in = (mask >> a) & 1;
      if (in) {
        s.fixed_dimension += blocks_of[a];
        s.system.equations.push_back(mons[a].exps);
        if (!((mask >> perm[a]) & 1)) s.frobenius_closed = false;
      } else {
        s.system.nonequations.push_back(mons[a].exps);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct TypeContribution {
  std::int64_t char_class = kGeneric;
  MatrixType type;
  std::size_t monomials = 0;
  std::size_t subsets = 0;
  std::size_t nonzero_subsets = 0;
  PorcFunction fix_sum;  // sum over eigenvalue tuples of q^{dim fixed space}
  QPolynomial class_size;
  Integer multiplicity;
};

struct VerificationEntry {
  std::int64_t q = 0;
  Rational formula;
  Integer brute_force;
  bool ok = false;
};

struct OrbitReport {
  std::string family_name;
  std::string family_kind;
  int m = 0;
  int n = 0;
  std::vector<std::int64_t> exceptional_primes;
  PorcFunction generic;
  std::map<std::int64_t, PorcFunction> exceptional;
  std::vector<TypeContribution> contributions;
  std::vector<VerificationEntry> verification;

  const PorcFunction& for_q(std::int64_t q) const {
    auto pp = as_prime_power(q);
    if (pp.p == 0) throw DomainError(std::to_string(q) + " is not a prime power");
    auto it = exceptional.find(pp.p);
    return it == exceptional.end() ? generic : it->second;
  }
  Rational eval(std::int64_t q) const { return for_q(q).eval(q); }

  bool verified() const {
    return std::all_of(verification.begin(), verification.end(), [](const auto& v) { return v.ok; });
  }

  std::string str() const {
    std::ostringstream os;
    os << "orbits of GL(" << m << ",q) on " << family_name << " (dimension " << n << ")\n";
    auto line = [&](const std::string& label, const PorcFunction& f, std::int64_t p) {
      os << "  " << label << ": " << (p == kGeneric ? f.str_excluding(exceptional_primes) : f.str_on_powers_of(p));
      if (auto g = gcd_form(f); p == kGeneric && g && !g->terms.empty()) os << "  [= " << g->str() << "]";
      os << "\n";
    };
    if (exceptional.empty()) {
      line("all characteristics", generic, kGeneric);
    } else {
      std::string ex;
      for (auto p : exceptional_primes) ex += (ex.empty() ? "" : ",") + std::to_string(p);
      line("characteristic not in {" + ex + "}", generic, kGeneric);
      for (const auto& [p, f] : exceptional) line("characteristic " + std::to_string(p), f, p);
    }
    for (const auto& v : verification)
      os << "  q=" << v.q << ": formula " << to_string(v.formula) << ", brute force " << v.brute_force << (v.ok ? "  ok" : "  MISMATCH") << "\n";
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["family"] = {{"name", family_name}, {"kind", family_kind}, {"m", m}, {"n", n}};
    j["exceptional_primes"] = exceptional_primes;
    auto cls = nlohmann::json::array();
    auto entry = [&](const std::string& label, const PorcFunction& f) {
      nlohmann::json c;
      c["characteristic"] = label;
      c["porc"] = f.to_json();
      c["text"] = f.str();
      auto g = gcd_form(f);
      c["gcd_form"] = g ? nlohmann::json(g->str()) : nlohmann::json(nullptr);
      cls.push_back(c);
    };
    entry("generic", generic);
    for (const auto& [p, f] : exceptional) entry(std::to_string(p), f);
    j["classes"] = cls;
    auto contrib = nlohmann::json::array();
    for (const auto& c : contributions) {
      contrib.push_back({{"characteristic", char_class_name(c.char_class)},
                         {"type", c.type.str()},
                         {"monomials", c.monomials},
                         {"subsets", c.subsets},
                         {"nonzero_subsets", c.nonzero_subsets},
                         {"fix_sum", c.fix_sum.to_json()},
                         {"class_size", c.class_size.str()},
                         {"multiplicity", c.multiplicity.str()}});
    }
    j["contributions"] = contrib;
    auto ver = nlohmann::json::array();
    for (const auto& v : verification)
      ver.push_back({{"q", v.q}, {"formula", to_string(v.formula)}, {"brute_force", v.brute_force.str()}, {"ok", v.ok}});
    j["verification"] = ver;
    j["status"] = verification.empty() ? "unverified" : (verified() ? "verified" : "mismatch");
    return j;
  }

  static OrbitReport from_json(const nlohmann::json& j) {
    OrbitReport r;
    r.family_name = j.at("family").at("name").get<std::string>();
    r.family_kind = j.at("family").at("kind").get<std::string>();
    r.m = j.at("family").at("m").get<int>();
    r.n = j.at("family").at("n").get<int>();
    r.exceptional_primes = j.at("exceptional_primes").get<std::vector<std::int64_t>>();
    for (const auto& c : j.at("classes")) {
      auto label = c.at("characteristic").get<std::string>();
      auto f = PorcFunction::from_json(c.at("porc"));
      if (label == "generic") {
        r.generic = f;
      } else {
        r.exceptional[std::stoll(label)] = f;
      }
    }
    for (const auto& c : j.at("contributions")) {
      TypeContribution t;
      auto label = c.at("characteristic").get<std::string>();
      t.char_class = label == "generic" ? kGeneric : std::stoll(label.substr(5));
      t.type = parse_type(c.at("type").get<std::string>());
      t.monomials = c.at("monomials").get<std::size_t>();
      t.subsets = c.at("subsets").get<std::size_t>();
      t.nonzero_subsets = c.at("nonzero_subsets").get<std::size_t>();
      t.fix_sum = PorcFunction::from_json(c.at("fix_sum"));
      t.multiplicity = Integer(c.at("multiplicity").get<std::string>());
      t.class_size = class_size_poly(t.type);
      r.contributions.push_back(std::move(t));
    }
    for (const auto& v : j.at("verification"))
      r.verification.push_back({v.at("q").get<std::int64_t>(), parse_rational(v.at("formula").get<std::string>()),
                                Integer(v.at("brute_force").get<std::string>()), v.at("ok").get<bool>()});
    return r;
  }
};

struct OrbitOptions {
  int max_m = 4;
  int max_n = 32;
  std::int64_t generic_witness_bound = 64;
};

namespace detail {

inline std::vector<std::int64_t> witnesses_for(std::int64_t char_class, const std::vector<std::int64_t>& exceptional, std::int64_t bound) {
  std::vector<std::int64_t> out;
  if (char_class == kGeneric) {
    for (auto q : prime_powers_in(2, bound))
      if (!std::count(exceptional.begin(), exceptional.end(), as_prime_power(q).p)) out.push_back(q);
  } else {
    for (std::int64_t q = char_class; out.size() < 5; q *= char_class) out.push_back(q);
  }
  return out;
}

}  // namespace detail

/// Exceptional characteristics over every type of GL(m), plus the family's bad primes.
inline std::vector<std::int64_t> family_exceptional_primes(const AlgebraicFamily& fam) {
  std::set<std::int64_t> out(fam.bad_primes.begin(), fam.bad_primes.end());
  std::set<std::vector<int>> seen;
  for (const auto& t : enumerate_types(fam.m)) {
    auto parts = expanded_partition(t);
    std::sort(parts.begin(), parts.end());
    if (!seen.insert(parts).second) continue;
    for (auto p : exceptional_primes(fam, parts)) out.insert(p);
  }
  return {out.begin(), out.end()};
}

/// Burnside assembly: for each characteristic class and type, sum
/// infer_porc(subset system) q^{d_S} over Frobenius-closed subsets S of
/// eigenvalue monomials equal to 1, weight by class size / multiplicity,
/// and divide the total exactly by |GL(m,q)|.
inline OrbitReport orbit_count_porc(const AlgebraicFamily& fam, const OrbitOptions& opts = {}) {
  if (fam.m > opts.max_m) throw DomainError("m = " + std::to_string(fam.m) + " exceeds the bound " + std::to_string(opts.max_m));
  if (fam.n > opts.max_n) throw DomainError("target dimension " + std::to_string(fam.n) + " exceeds the bound " + std::to_string(opts.max_n));
  OrbitReport rep;
  rep.family_name = fam.name;
  rep.family_kind = family_kind_name(fam.kind);
  rep.m = fam.m;
  rep.n = fam.n;
  rep.exceptional_primes = family_exceptional_primes(fam);
  const auto types = enumerate_types(fam.m);
  const auto order = PorcFunction(gl_order_poly(fam.m));
  std::vector<std::int64_t> classes{kGeneric};
  for (auto p : rep.exceptional_primes)
    if (!fam.is_bad(p)) classes.push_back(p);
  for (auto cc : classes) {
    PorcFunction numerator;
    for (const auto& t : types) {
      auto spec = jordan_spec_for_type(fam, t, cc);
      TypeContribution c;
      c.char_class = cc;
      c.type = t;
      c.monomials = spec.monomials().size();
      c.class_size = class_size_poly(t);
      c.multiplicity = multiplicity(t);
      for (const auto& s : subset_systems(spec, t)) {
        if (!s.frobenius_closed) continue;
        ++c.subsets;
        auto f = infer_porc(s.system).function;
        if (f == PorcFunction()) continue;
        ++c.nonzero_subsets;
        c.fix_sum += f * PorcFunction(QPolynomial::monomial(Rational(1), static_cast<std::size_t>(s.fixed_dimension)));
      }
      numerator += (c.fix_sum * PorcFunction(c.class_size)).scale(Rational(1) / Rational(c.multiplicity));
      rep.contributions.push_back(std::move(c));
    }
    auto w = detail::witnesses_for(cc, rep.exceptional_primes, opts.generic_witness_bound);
    auto orbits = porc_divide_exact(numerator, order, w).normalize();
    if (cc == kGeneric) {
      rep.generic = orbits;
    } else {
      rep.exceptional[cc] = orbits;
    }
  }
  return rep;
}

/// Generators of GL(m,q): diag(w,1,...,1), I + E_12, a transposition and an m-cycle.
inline std::vector<GfMatrix> gl_generators(const FiniteField& f, int m) {
  const auto um = static_cast<std::size_t>(m);
  std::vector<GfMatrix> gens;
  auto d = identity(f, um);
  d(0, 0) = f.primitive();
  gens.push_back(d);
  if (m >= 2) {
    auto e = identity(f, um);
    e(0, 1) = 1;
    gens.push_back(e);
    GfMatrix tr(um, um, 0), cyc(um, um, 0);
    for (std::size_t i = 0; i < um; ++i) {
      tr(i, i == 0 ? 1 : (i == 1 ? 0 : i)) = 1;
      cyc(i, (i + 1) % um) = 1;
    }
    gens.push_back(tr);
    gens.push_back(cyc);
  }
  return gens;
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline Integer pow_int(std::int64_t q, std::size_t e) { return ipow(Integer(q), static_cast<unsigned>(e)); }

}  // namespace detail

/// Number of fixed vectors of M: q^{dim ker(M - I)}.
inline Integer fixed_points(const FiniteField& f, const GfMatrix& m) {
  return detail::pow_int(f.order(), m.rows() - rank(f, mat_sub(f, m, identity(f, m.rows()))));
}

/// Burnside sum over GL(m,q) via one representative per conjugacy class.
inline Integer burnside_fixed_sum(const AlgebraicFamily& fam, const FiniteField& f, const std::function<Integer(const GfMatrix&)>& fix) {
  Integer total = 0;
  for (const auto& c : conjugacy_classes(f, fam.m)) {
    Integer size = numerator(class_size_poly(c.type).eval(Rational(f.order())));
    total += size * fix(apply_family(fam, f, c.representative));
  }
  return total;
}

inline Integer gl_order(int m, std::int64_t q) { return numerator(gl_order_poly(m).eval(Rational(q))); }

/// Union-find over all q^n target vectors under the generators of GL(m,q);
/// the Burnside identity is checked against the orbit count.
inline Integer brute_force_orbits(const AlgebraicFamily& fam, std::int64_t q, std::int64_t budget = std::int64_t{1} << 24) {
  if (!is_prime_power(q)) throw DomainError(std::to_string(q) + " is not a prime power");
  Integer points = detail::pow_int(q, static_cast<std::size_t>(fam.n));
  if (points > budget) throw BudgetError("q^n = " + points.str() + " exceeds the enumeration budget");
  auto f = make_field_of_order(q);
  const auto n = static_cast<std::size_t>(fam.n);
  const auto total = static_cast<std::size_t>(points);
  std::vector<GfMatrix> imgs;
  for (const auto& g : gl_generators(*f, fam.m)) imgs.push_back(apply_family(fam, *f, g));
  detail::UnionFind uf(total);
  std::size_t orbits = total;
  std::vector<FiniteField::Elem> v(n), w(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t x = idx;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = static_cast<FiniteField::Elem>(x % static_cast<std::size_t>(q));
      x /= static_cast<std::size_t>(q);
    }
    for (const auto& mtx : imgs) {
      std::fill(w.begin(), w.end(), 0);
      for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (mtx(i, j) != 0) w[j] = f->add(w[j], f->mul(v[i], mtx(i, j)));
      }
      std::size_t y = 0;
      for (std::size_t i = n; i-- > 0;) y = y * static_cast<std::size_t>(q) + w[i];
      if (uf.unite(idx, y)) --orbits;
    }
  }
  Integer burnside = burnside_fixed_sum(fam, *f, [&](const GfMatrix& m) { return fixed_points(*f, m); });
  if (burnside != Integer(orbits) * gl_order(fam.m, q))
    throw ConsistencyError("Burnside identity fails at q = " + std::to_string(q) + ": fixed-point sum " + burnside.str() + " vs " +
                           std::to_string(orbits) + " orbits");
  return Integer(orbits);
}

/// Compares the report against brute force at each q, recording the outcome.
inline bool verify_orbit_report(OrbitReport& rep, const AlgebraicFamily& fam, const std::vector<std::int64_t>& qs,
                                std::int64_t budget = std::int64_t{1} << 24) {
  bool ok = true;
  for (auto q : qs) {
    VerificationEntry e;
    e.q = q;
    e.formula = rep.eval(q);
    e.brute_force = brute_force_orbits(fam, q, budget);
    e.ok = e.formula == Rational(e.brute_force);
    ok = ok && e.ok;
    rep.verification.push_back(e);
  }
  return ok;
}

// ---- subspaces ----

inline Integer gaussian_binomial(int n, int k, std::int64_t q) {
  if (k < 0 || k > n) return 0;
  Integer num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= detail::pow_int(q, static_cast<std::size_t>(n - i)) - 1;
    den *= detail::pow_int(q, static_cast<std::size_t>(i + 1)) - 1;
  }
  return num / den;
}

namespace detail {

// Calls visit(B) for every k x n matrix in reduced row echelon form of rank k.
inline void for_each_rref(const FiniteField& f, std::size_t n, std::size_t k, const std::function<void(const GfMatrix&)>& visit) {
  std::vector<std::size_t> piv(k);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t i, std::size_t start) {
    if (i == k) {
      GfMatrix b(k, n, 0);
      std::vector<bool> is_piv(n, false);
      for (std::size_t r = 0; r < k; ++r) {
        b(r, piv[r]) = 1;
        is_piv[piv[r]] = true;
      }
      std::vector<std::pair<std::size_t, std::size_t>> free;
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = piv[r] + 1; c < n; ++c)
          if (!is_piv[c]) free.emplace_back(r, c);
      const auto q = static_cast<FiniteField::Elem>(f.order());
      while (true) {
        visit(b);
        std::size_t t = 0;
        while (t < free.size()) {
          auto& x = b(free[t].first, free[t].second);
          if (++x < q) break;
          x = 0;
          ++t;
        }
        if (t == free.size()) break;
      }
      return;
    }
    for (std::size_t c = start; c + (k - i) <= n; ++c) {
      piv[i] = c;
      choose(i + 1, c + 1);
    }
  };
  choose(0, 0);
}

inline std::vector<std::size_t> pivots_of(const GfMatrix& b) {
  std::vector<std::size_t> piv;
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (b(r, c) != 0) {
        piv.push_back(c);
        break;
      }
  return piv;
}

// Is the row space of the RREF matrix b invariant under x -> xM?
inline bool invariant(const FiniteField& f, const GfMatrix& b, const std::vector<std::size_t>& piv, const GfMatrix& m) {
  const std::size_t k = b.rows(), n = b.cols();
  std::vector<FiniteField::Elem> w(n);
  for (std::size_t r = 0; r < k; ++r) {
    std::fill(w.begin(), w.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (b(r, i) == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (m(i, j) != 0) w[j] = f.add(w[j], f.mul(b(r, i), m(i, j)));
    }
    for (std::size_t i = 0; i < k; ++i) {
      auto c = w[piv[i]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (b(i, j) != 0) w[j] = f.sub(w[j], f.mul(c, b(i, j)));
    }
    for (auto x : w)
      if (x != 0) return false;
  }
  return true;
}

}  // namespace detail

/// Number of k-dimensional subspaces W with W M = W.
inline Integer count_invariant_subspaces(const FiniteField& f, const GfMatrix& m, int k, std::int64_t budget = std::int64_t{1} << 22) {
  const int n = static_cast<int>(m.rows());
  if (k < 0 || k > n) throw DomainError("subspace dimension out of range");
  if (gaussian_binomial(n, k, f.order()) > budget) throw BudgetError("too many subspaces to enumerate");
  Integer count = 0;
  detail::for_each_rref(f, m.rows(), static_cast<std::size_t>(k), [&](const GfMatrix& b) {
    if (detail::invariant(f, b, detail::pivots_of(b), m)) ++count;
  });
  return count;
}

/// Burnside count of orbits on k-subspaces from class representatives.
inline Integer subspace_orbits(const AlgebraicFamily& fam, int k, std::int64_t q, std::int64_t budget = std::int64_t{1} << 22) {
  auto f = make_field_of_order(q);
  Integer sum = burnside_fixed_sum(fam, *f, [&](const GfMatrix& m) { return count_invariant_subspaces(*f, m, k, budget); });
  Integer order = gl_order(fam.m, q);
  if (sum % order != 0) throw ConsistencyError("subspace Burnside sum is not divisible by |GL| at q = " + std::to_string(q));
  return sum / order;
}

/// Union-find over all k-subspaces (as RREF matrices) under the generators of GL(m,q).
inline Integer brute_force_subspace_orbits(const AlgebraicFamily& fam, int k, std::int64_t q, std::int64_t budget = std::int64_t{1} << 20) {
  auto f = make_field_of_order(q);
  if (gaussian_binomial(fam.n, k, q) > budget) throw BudgetError("too many subspaces to enumerate");
  std::map<std::vector<FiniteField::Elem>, std::size_t> index;
  std::vector<GfMatrix> subs;
  detail::for_each_rref(*f, static_cast<std::size_t>(fam.n), static_cast<std::size_t>(k), [&](const GfMatrix& b) {
    index.emplace(b.data(), subs.size());
    subs.push_back(b);
  });
  std::vector<GfMatrix> imgs;
  for (const auto& g : gl_generators(*f, fam.m)) imgs.push_back(apply_family(fam, *f, g));
  detail::UnionFind uf(subs.size());
  std::size_t orbits = subs.size();
  for (std::size_t i = 0; i < subs.size(); ++i)
    for (const auto& mtx : imgs) {
      auto img = mat_mul(*f, subs[i], mtx);
      rref_in_place(*f, img);
      auto it = index.find(img.data());
      if (it == index.end()) throw ConsistencyError("image of a subspace has the wrong dimension");
      if (uf.unite(i, it->second)) --orbits;
    }
  return Integer(orbits);
}

struct ImageTypeFit {
  std::string image_type;
  std::map<std::int64_t, std::set<Integer>> fix_counts;  // per q, over class representatives
  bool consistent = true;                                 // one value per q
  std::optional<QPolynomial> polynomial;
  std::string status;  // "validated", "underdetermined", "insufficient data", "inconsistent"
};

struct SubspaceRow {
  std::int64_t q = 0;
  Integer orbits;
  std::optional<Integer> brute_force;
};

struct SubspaceReport {
  std::string family_name;
  int m = 0;
  int n = 0;
  int k = 0;
  std::vector<SubspaceRow> rows;
  std::vector<ImageTypeFit> fits;

  bool verified() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return !r.brute_force || *r.brute_force == r.orbits; });
  }

  std::string str() const {
    std::ostringstream os;
    os << "orbits of GL(" << m << ",q) on " << k << "-subspaces of " << family_name << " (dimension " << n << ")\n";
    for (const auto& r : rows) {
      os << "  q=" << r.q << ": " << r.orbits;
      if (r.brute_force) os << " (direct enumeration " << *r.brute_force << (*r.brute_force == r.orbits ? ", ok)" : ", MISMATCH)");
      os << "\n";
    }
    os << "  fixed-subspace counts by image type (fitted empirically):\n";
    for (const auto& f : fits) {
      os << "    " << f.image_type << ":";
      for (const auto& [q, vals] : f.fix_counts) {
        os << " q=" << q << "->";
        bool first = true;
        for (const auto& v : vals) os << (first ? "" : "|") << v, first = false;
      }
      if (f.polynomial && f.status == "validated") os << "; fit " << f.polynomial->str();
      os << " [" << f.status << "]\n";
    }
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["family"] = {{"name", family_name}, {"m", m}, {"n", n}};
    j["k"] = k;
    auto rs = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json x{{"q", r.q}, {"orbits", r.orbits.str()}};
      x["brute_force"] = r.brute_force ? nlohmann::json(r.brute_force->str()) : nlohmann::json(nullptr);
      rs.push_back(x);
    }
    j["counts"] = rs;
    auto fs = nlohmann::json::array();
    for (const auto& f : fits) {
      nlohmann::json x;
      x["image_type"] = f.image_type;
      x["status"] = f.status;
      x["consistent"] = f.consistent;
      x["polynomial"] = f.polynomial ? nlohmann::json(f.polynomial->str()) : nlohmann::json(nullptr);
      auto coeffs = nlohmann::json::array();
      if (f.polynomial)
        for (const auto& c : f.polynomial->coeffs()) coeffs.push_back(to_string(c));
      x["coefficients"] = coeffs;
      nlohmann::json per_q = nlohmann::json::object();
      for (const auto& [q, vals] : f.fix_counts) {
        auto arr = nlohmann::json::array();
        for (const auto& v : vals) arr.push_back(v.str());
        per_q[std::to_string(q)] = arr;
      }
      x["fix_counts"] = per_q;
      fs.push_back(x);
    }
    j["image_type_fits"] = fs;
    return j;
  }

  static SubspaceReport from_json(const nlohmann::json& j) {
    SubspaceReport r;
    r.family_name = j.at("family").at("name").get<std::string>();
    r.m = j.at("family").at("m").get<int>();
    r.n = j.at("family").at("n").get<int>();
    r.k = j.at("k").get<int>();
    for (const auto& x : j.at("counts")) {
      SubspaceRow row;
      row.q = x.at("q").get<std::int64_t>();
      row.orbits = Integer(x.at("orbits").get<std::string>());
      if (!x.at("brute_force").is_null()) row.brute_force = Integer(x.at("brute_force").get<std::string>());
      r.rows.push_back(row);
    }
    for (const auto& x : j.at("image_type_fits")) {
      ImageTypeFit f;
      f.image_type = x.at("image_type").get<std::string>();
      f.status = x.at("status").get<std::string>();
      f.consistent = x.at("consistent").get<bool>();
      if (!x.at("polynomial").is_null()) {
        std::vector<Rational> c;
        for (const auto& v : x.at("coefficients")) c.push_back(parse_rational(v.get<std::string>()));
        f.polynomial = QPolynomial(std::move(c));
      }
      for (const auto& [q, vals] : x.at("fix_counts").items())
        for (const auto& v : vals) f.fix_counts[std::stoll(q)].insert(Integer(v.get<std::string>()));
      r.fits.push_back(f);
    }
    return r;
  }
};

namespace detail {

inline GfMatrix random_invertible(const FiniteField& f, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> d(0, f.order() - 1);
  while (true) {
    GfMatrix a(n, n, 0);
    for (auto& x : a.data()) x = static_cast<FiniteField::Elem>(d(rng));
    if (det(f, a) != 0) return a;
  }
}

}  // namespace detail

/// Fixed k-subspace counts of phi(g c g^-1) for random g over every class c,
/// grouped by the type of phi(c).
inline std::map<std::string, std::set<Integer>> fix_counts_by_image_type(const AlgebraicFamily& fam, int k, std::int64_t q, int samples,
                                                                          std::uint64_t seed = 1) {
  auto f = make_field_of_order(q);
  std::mt19937_64 rng(seed);
  std::map<std::string, std::set<Integer>> out;
  for (const auto& c : conjugacy_classes(*f, fam.m)) {
    auto img = apply_family(fam, *f, c.representative);
    auto label = type_of(*f, img).str();
    for (int s = 0; s < samples; ++s) {
      auto g = detail::random_invertible(*f, static_cast<std::size_t>(fam.m), rng);
      auto conj = mat_mul(*f, mat_mul(*f, g, c.representative), inverse(*f, g));
      auto phi = apply_family(fam, *f, conj);
      if (type_of(*f, phi).str() != label) throw ConsistencyError("image type changed under conjugation");
      out[label].insert(count_invariant_subspaces(*f, phi, k));
    }
  }
  return out;
}

/// Per-q subspace orbit counts (Burnside over class representatives), direct
/// enumeration where affordable, and per-image-type fits of the fixed counts
/// through all but the last q, validated on the last.
inline SubspaceReport subspace_orbit_report(const AlgebraicFamily& fam, int k, const std::vector<std::int64_t>& qs,
                                            std::int64_t budget = std::int64_t{1} << 20) {
  if (k < 0 || k > fam.n) throw DomainError("k must lie in [0, " + std::to_string(fam.n) + "]");
  SubspaceReport rep;
  rep.family_name = fam.name;
  rep.m = fam.m;
  rep.n = fam.n;
  rep.k = k;
  std::map<std::string, ImageTypeFit> fits;
  for (auto q : qs) {
    if (!is_prime_power(q)) throw DomainError(std::to_string(q) + " is not a prime power");
    auto f = make_field_of_order(q);
    Integer sum = 0;
    for (const auto& c : conjugacy_classes(*f, fam.m)) {
      auto img = apply_family(fam, *f, c.representative);
      Integer fix = count_invariant_subspaces(*f, img, k, budget);
      sum += numerator(class_size_poly(c.type).eval(Rational(q))) * fix;
      auto label = type_of(*f, img).str();
      auto& fit = fits[label];
      fit.image_type = label;
      fit.fix_counts[q].insert(fix);
    }
    Integer order = gl_order(fam.m, q);
    if (sum % order != 0) throw ConsistencyError("subspace Burnside sum is not divisible by |GL| at q = " + std::to_string(q));
    SubspaceRow row{q, sum / order, std::nullopt};
    try {
      row.brute_force = brute_force_subspace_orbits(fam, k, q, budget);
    } catch (const BudgetError&) {
    }
    rep.rows.push_back(row);
  }
  for (auto& [label, fit] : fits) {
    std::vector<std::pair<Integer, Rational>> pts;
    for (const auto& [q, vals] : fit.fix_counts) {
      if (vals.size() != 1) fit.consistent = false;
      pts.emplace_back(Integer(q), Rational(*vals.begin()));
    }
    if (!fit.consistent) {
      fit.status = "inconsistent";
    } else if (pts.size() < 2) {
      fit.polynomial = interpolate(pts);
      fit.status = "insufficient data";
    } else {
      auto poly = interpolate(std::vector<std::pair<Integer, Rational>>(pts.begin(), pts.end() - 1));
      fit.polynomial = poly;
      fit.status = poly.eval(Rational(pts.back().first)) == pts.back().second ? "validated" : "underdetermined";
    }
    rep.fits.push_back(fit);
  }
  return rep;
}

}  // namespace porc
