#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "porc/canon.hpp"
#include "porc/gf.hpp"
#include "porc/linalg.hpp"
#include "porc/porc_function.hpp"

namespace porc {

/// Exponent row of a monomial: one integer polynomial in q per unknown.
using MonomialRow = std::vector<ZPoly>;

struct Unknown {
  std::string name;
  int degree = 1;
};

/// Unknowns in GF(q^d), d = lcm of the unknown degrees, subject to monomial
/// equations (row = 1) and non-equations (row != 1).  Membership rows
/// x_i^{q^d - 1} = 1 are implicit.
struct MonomialSystem {
  std::vector<Unknown> unknowns;
  std::vector<MonomialRow> equations;
  std::vector<MonomialRow> nonequations;

  int ambient_degree() const {
    int d = 1;
    for (const auto& u : unknowns) d = std::lcm(d, u.degree);
    return d;
  }

  void check() const {
    if (unknowns.empty()) throw DomainError("monomial system has no unknowns");
    for (const auto& u : unknowns)
      if (u.degree < 1) throw DomainError("unknown degree must be positive");
    for (const auto* rows : {&equations, &nonequations})
      for (const auto& r : *rows)
        if (r.size() != unknowns.size()) throw DomainError("monomial row length differs from the number of unknowns");
  }

  /// Canonical text used for caching: degrees plus sorted rows.
  std::string key() const {
    auto render = [](std::vector<MonomialRow> rows) {
      std::vector<std::string> s;
      for (const auto& r : rows) {
        std::string x;
        for (const auto& p : r) {
          x += "[";
          for (const auto& c : p.coeffs()) x += c.str() + ",";
          x += "]";
        }
        s.push_back(x);
      }
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      std::string out;
      for (const auto& x : s) out += x + ";";
      return out;
    };
    std::string k;
    for (const auto& u : unknowns) k += std::to_string(u.degree) + ",";
    return k + "|" + render(equations) + "|" + render(nonequations);
  }
};

inline MonomialRow unit_row(std::size_t t, std::size_t i, const ZPoly& e) {
  MonomialRow r(t);
  r[i] = e;
  return r;
}

/// q^k - 1 as a polynomial.
inline ZPoly q_power_minus_one(int k) { return ZPoly::monomial(Integer(1), static_cast<std::size_t>(k)) - ZPoly(1); }

/// Eigenvalue conditions of a type: one unknown per pair, lambda_i^{q^{n_i}-1} = 1,
/// lambda_i^{q^r - 1} != 1 for 0 < r < n_i, and lambda_i lambda_j^{-q^s} != 1
/// for i < j of equal degree and 0 <= s < n_j.
inline MonomialSystem build_type_system(const MatrixType& t) {
  MonomialSystem sys;
  const auto& pairs = t.pairs();
  const std::size_t n = pairs.size();
  for (std::size_t i = 0; i < n; ++i) sys.unknowns.push_back({n <= 26 ? std::string(1, static_cast<char>('a' + i)) : "x" + std::to_string(i + 1), pairs[i].degree});
  for (std::size_t i = 0; i < n; ++i) sys.equations.push_back(unit_row(n, i, q_power_minus_one(pairs[i].degree)));
  for (std::size_t i = 0; i < n; ++i)
    for (int r = 1; r < pairs[i].degree; ++r) sys.nonequations.push_back(unit_row(n, i, q_power_minus_one(r)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (pairs[i].degree != pairs[j].degree) continue;
      for (int s = 0; s < pairs[j].degree; ++s) {
        MonomialRow r(n);
        r[i] = ZPoly(1);
        r[j] = -ZPoly::monomial(Integer(1), static_cast<std::size_t>(s));
        sys.nonequations.push_back(r);
      }
    }
  return sys;
}

namespace detail {

inline std::vector<Integer> eval_row(const MonomialRow& r, const Integer& q) {
  std::vector<Integer> out;
  for (const auto& p : r) out.push_back(p.eval(q));
  return out;
}

struct CountMemo {
  std::map<std::pair<IntLattice, std::size_t>, Integer> memo;
};

// sum over subsets U of rows[j..] of (-1)^{|U|} [Z^t : L + U]
inline Integer signed_index_sum(const IntLattice& lat, const std::vector<std::vector<Integer>>& rows, std::size_t j, CountMemo& memo) {
  if (j == rows.size()) return lat.index();
  if (lat.contains(rows[j])) return 0;
  auto key = std::make_pair(lat, j);
  if (auto it = memo.memo.find(key); it != memo.memo.end()) return it->second;
  IntLattice with = lat;
  with.add(rows[j]);
  Integer v = signed_index_sum(lat, rows, j + 1, memo) - signed_index_sum(with, rows, j + 1, memo);
  memo.memo.emplace(std::move(key), v);
  return v;
}

}  // namespace detail

/// Number of solutions at q: inclusion-exclusion over the non-equations, each
/// term the index of the lattice spanned by the exponent rows (the product of
/// its elementary divisors).  Terms are memoized on the lattice's Hermite form
/// and any branch whose next non-equation already lies in the lattice is zero.
inline Integer count_solutions_at(const MonomialSystem& sys, std::int64_t q) {
  sys.check();
  if (!is_prime_power(q)) throw DomainError(std::to_string(q) + " is not a prime power");
  const std::size_t t = sys.unknowns.size();
  const Integer qi(q);
  IntLattice lat(t);
  Integer member = ipow(qi, static_cast<unsigned>(sys.ambient_degree())) - 1;
  for (std::size_t i = 0; i < t; ++i) {
    std::vector<Integer> r(t, Integer(0));
    r[i] = member;
    lat.add(r);
  }
  for (const auto& e : sys.equations) lat.add(detail::eval_row(e, qi));
  std::vector<std::vector<Integer>> rows;
  for (const auto& ne : sys.nonequations) rows.push_back(detail::eval_row(ne, qi));
  detail::CountMemo memo;
  Integer v = detail::signed_index_sum(lat, rows, 0, memo);
  if (v < 0) throw ConsistencyError("negative solution count");
  return v;
}

/// Brute-force count over all tuples of nonzero elements of GF(q^d).
inline Integer enumerate_solutions(const MonomialSystem& sys, std::int64_t q, std::int64_t budget = std::int64_t{1} << 22) {
  sys.check();
  if (!is_prime_power(q)) throw DomainError(std::to_string(q) + " is not a prime power");
  const int d = sys.ambient_degree();
  const std::size_t t = sys.unknowns.size();
  auto pp = as_prime_power(q);
  auto f = make_field(pp.p, pp.k * static_cast<unsigned>(d));
  const std::int64_t nonzero = f->order() - 1;
  double work = 1;
  for (std::size_t i = 0; i < t; ++i) work *= static_cast<double>(nonzero);
  if (work > static_cast<double>(budget)) throw BudgetError("enumeration budget exceeded");
  auto eval_rows = [&](const std::vector<MonomialRow>& rows) {
    std::vector<std::vector<Integer>> out;
    for (const auto& r : rows) out.push_back(detail::eval_row(r, Integer(q)));
    return out;
  };
  auto eqs = eval_rows(sys.equations), neqs = eval_rows(sys.nonequations);
  auto value = [&](const std::vector<Integer>& row, const std::vector<FiniteField::Elem>& x) {
    FiniteField::Elem acc = 1;
    for (std::size_t i = 0; i < t; ++i) acc = f->mul(acc, f->pow(x[i], row[i]));
    return acc;
  };
  std::vector<FiniteField::Elem> x(t, 1);
  Integer count = 0;
  while (true) {
    bool ok = true;
    for (const auto& r : eqs)
      if (value(r, x) != 1) {
        ok = false;
        break;
      }
    if (ok)
      for (const auto& r : neqs)
        if (value(r, x) == 1) {
          ok = false;
          break;
        }
    if (ok) ++count;
    std::size_t k = 0;
    while (k < t && ++x[k] == static_cast<FiniteField::Elem>(f->order())) x[k++] = 1;
    if (k == t) break;
  }
  return count;
}

/// First `count` prime powers in the residue class r mod n (fewer if the class is finite).
inline std::vector<std::int64_t> class_members(std::int64_t r, std::int64_t n, std::size_t count) {
  auto rc = residue_class(r, n);
  std::vector<std::int64_t> out;
  if (rc.kind == ResidueClass::empty) return out;
  if (rc.kind == ResidueClass::finite) {
    for (auto q : rc.points)
      if (out.size() < count) out.push_back(q);
    return out;
  }
  std::int64_t g = gcd64(mod64(r, n), n);
  if (g == 1) {
    for (std::int64_t q = mod64(r, n) == 0 ? n : mod64(r, n); out.size() < count; q += n)
      if (q > 1 && is_prime_power(q)) out.push_back(q);
    return out;
  }
  std::int64_t p = prime_factors64(g)[0];
  for (__int128 q = p; out.size() < count; q *= p) {
    if (q > (static_cast<__int128>(1) << 62)) break;
    if (static_cast<std::int64_t>(q % n) == mod64(r, n)) out.push_back(static_cast<std::int64_t>(q));
  }
  return out;
}

struct InferOptions {
  std::vector<std::int64_t> moduli;       // candidate moduli, tried in order
  int holdout = 2;                        // validation points per infinite class
  std::vector<std::int64_t> extra_checks;  // prime powers every result must reproduce
};

inline std::vector<std::int64_t> default_moduli() {
  std::vector<std::int64_t> out;
  for (auto d : divisors(27720))
    if (d <= 60) out.push_back(d);
  return out;
}

struct InferResult {
  PorcFunction function;
  int degree_bound = 0;
  std::vector<std::int64_t> fit_points;
  std::vector<std::int64_t> validation_points;
};

namespace detail {

struct InferCache {
  std::mutex mu;
  std::map<std::string, InferResult> results;
};

inline InferCache& infer_cache() {
  static InferCache cache;
  return cache;
}

}  // namespace detail

/// Fits a PORC function to exact counts: for each candidate modulus N in
/// increasing order, each realizable residue class gets a polynomial of
/// degree <= bound through its smallest members (all members when the class
/// is finite), checked on held-out members; the first N that validates
/// everywhere, including every count computed so far, wins.
inline InferResult infer_porc(const MonomialSystem& sys, const InferOptions& opts = {}) {
  sys.check();
  const std::string key = sys.key();
  {
    auto& cache = detail::infer_cache();
    std::lock_guard<std::mutex> lock(cache.mu);
    if (auto it = cache.results.find(key); it != cache.results.end() && opts.extra_checks.empty()) return it->second;
  }
  int bound = 0;
  for (const auto& u : sys.unknowns) bound += u.degree;
  const int full_bound = static_cast<int>(sys.unknowns.size()) * sys.ambient_degree();
  auto moduli = opts.moduli.empty() ? default_moduli() : opts.moduli;
  std::map<std::int64_t, Integer> counts;
  auto count = [&](std::int64_t q) -> const Integer& {
    auto it = counts.find(q);
    if (it == counts.end()) it = counts.emplace(q, count_solutions_at(sys, q)).first;
    return it->second;
  };
  std::vector<int> bounds{bound};
  if (full_bound != bound) bounds.push_back(full_bound);
  for (int deg : bounds) {
    for (auto n : moduli) {
      std::vector<QPolynomial> branches(static_cast<std::size_t>(n));
      std::vector<std::int64_t> fit, held;
      bool ok = true;
      for (std::int64_t r = 0; r < n && ok; ++r) {
        auto rc = residue_class(r, n);
        if (rc.kind == ResidueClass::empty) continue;
        auto pts = class_members(r, n, static_cast<std::size_t>(deg + 1 + opts.holdout));
        std::size_t nfit = rc.kind == ResidueClass::finite ? pts.size() : std::min(pts.size(), static_cast<std::size_t>(deg + 1));
        std::vector<std::pair<Integer, Rational>> xy;
        for (std::size_t i = 0; i < nfit; ++i) {
          xy.emplace_back(Integer(pts[i]), Rational(count(pts[i])));
          fit.push_back(pts[i]);
        }
        auto poly = interpolate(xy);
        for (std::size_t i = nfit; i < pts.size() && ok; ++i) {
          held.push_back(pts[i]);
          if (poly.eval(Rational(pts[i])) != Rational(count(pts[i]))) ok = false;
        }
        if (rc.kind == ResidueClass::infinite && pts.size() < nfit + static_cast<std::size_t>(opts.holdout)) ok = false;
        branches[static_cast<std::size_t>(r)] = poly;
      }
      if (!ok) continue;
      PorcFunction f(n, std::move(branches));
      for (auto q : opts.extra_checks) count(q);
      for (const auto& [q, v] : counts)
        if (f.eval(q) != Rational(v)) ok = false;
      if (!ok) continue;
      std::sort(fit.begin(), fit.end());
      std::sort(held.begin(), held.end());
      InferResult res{f.normalize(), deg, fit, held};
      auto& cache = detail::infer_cache();
      std::lock_guard<std::mutex> lock(cache.mu);
      cache.results[key] = res;
      return res;
    }
  }
  std::string witness;
  if (!counts.empty()) witness = " (largest sampled q = " + std::to_string(counts.rbegin()->first) + ")";
  throw ConsistencyError("no PORC fit validated for any candidate modulus" + witness);
}

/// (alpha + sum alpha_i gcd(q - n_i, m_i)) * f(q).
struct GcdExpr {
  struct Term {
    Rational coef;
    std::int64_t n = 0;
    std::int64_t m = 2;
  };
  Rational alpha;
  std::vector<Term> terms;
  ZPoly primitive_poly{1};

  Rational eval(std::int64_t q) const {
    Rational d = alpha;
    for (const auto& t : terms) d += t.coef * Rational(gcd64(q - t.n, t.m));
    return d * Rational(primitive_poly.eval(Integer(q)));
  }

  std::string str(const std::string& var = "q") const {
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const Rational& c, const std::string& body) {
      if (c == 0) return;
      bool neg = c < 0;
      Rational mag = neg ? Rational(-c) : c;
      os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
      if (body.empty()) {
        os << to_string(mag);
      } else {
        if (mag != 1) os << to_string(mag) << "*";
        os << body;
      }
      first = false;
    };
    emit(alpha, "");
    for (const auto& t : terms) emit(t.coef, "gcd(" + var + " - " + std::to_string(t.n) + ", " + std::to_string(t.m) + ")");
    std::string d = first ? "0" : os.str();
    if (primitive_poly == ZPoly(1)) return d;
    bool single = (terms.empty()) || (alpha == 0 && terms.size() == 1 && terms[0].coef == 1);
    std::string fp = primitive_poly.str(var);
    if (terms.empty() && alpha == 1) return fp;
    return (single ? d : "(" + d + ")") + "*(" + fp + ")";
  }
};

namespace detail {

// Solves A x = b exactly; nullopt when inconsistent.
inline std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    Rational inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational fct = a[i][c];
      for (std::size_t k = 0; k < cols; ++k) a[i][k] -= fct * a[r][k];
      b[i] -= fct * b[r];
    }
    piv.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = b[i];
  return x;
}

}  // namespace detail

/// Expresses f as (alpha + sum alpha_i gcd(q - n_i, m_i)) * F(q) with F primitive,
/// preferring fewest terms, then smallest moduli, then lexicographic (m_i, n_i).
/// Returns nullopt when the branches are not rational multiples of one
/// polynomial or no combination of at most `max_terms` terms fits.
inline std::optional<GcdExpr> gcd_form(const PorcFunction& fin, std::size_t max_terms = 3) {
  auto f = fin.normalize();
  const std::int64_t n = f.modulus();
  struct Cls {
    std::int64_t r;
    ResidueClass rc;
  };
  std::vector<Cls> classes;
  for (std::int64_t r = 0; r < n; ++r) {
    auto rc = residue_class(r, n);
    if (rc.kind != ResidueClass::empty) classes.push_back({r, rc});
  }
  GcdExpr out;
  std::optional<ZPoly> prim;
  for (const auto& c : classes)
    if (c.rc.kind == ResidueClass::infinite && !f.branch(c.r).is_zero()) {
      prim = primitive_part(f.branch(c.r)).first;
      break;
    }
  if (!prim) {
    for (const auto& c : classes)
      if (!f.branch(c.r).is_zero()) prim = primitive_part(f.branch(c.r)).first;
    if (!prim) {
      out.alpha = 0;
      return out;
    }
  }
  const QPolynomial fq = to_qpoly(*prim);
  // ratio per realizable residue
  std::vector<Rational> ratio;
  for (const auto& c : classes) {
    const auto& b = f.branch(c.r);
    if (c.rc.kind == ResidueClass::infinite) {
      if (b.is_zero()) {
        ratio.push_back(0);
        continue;
      }
      auto [quot, rem] = divmod(b, fq);
      if (!rem.is_zero() || quot.degree() > 0) return std::nullopt;
      ratio.push_back(quot.coeff(0));
    } else {
      std::optional<Rational> k;
      for (auto q : c.rc.points) {
        Rational fv = fq.eval(Rational(q)), bv = b.eval(Rational(q));
        if (fv == 0) {
          if (bv != 0) return std::nullopt;
          continue;
        }
        if (k && *k != bv / fv) return std::nullopt;
        k = bv / fv;
      }
      ratio.push_back(k.value_or(Rational(0)));
    }
  }
  std::vector<GcdExpr::Term> cand;
  for (auto m : divisors(n))
    if (m > 1)
      for (std::int64_t r = 1; r < m; ++r) cand.push_back({Rational(1), r, m});
  std::vector<std::size_t> pick;
  std::optional<GcdExpr> found;
  auto try_subset = [&]() {
    std::vector<std::vector<Rational>> a;
    for (const auto& c : classes) {
      std::vector<Rational> row{Rational(1)};
      for (auto i : pick) row.push_back(Rational(gcd64(c.r - cand[i].n, cand[i].m)));
      a.push_back(row);
    }
    auto sol = detail::solve_exact(a, ratio);
    if (!sol) return false;
    GcdExpr e;
    e.alpha = (*sol)[0];
    for (std::size_t i = 0; i < pick.size(); ++i) e.terms.push_back({(*sol)[i + 1], cand[pick[i]].n, cand[pick[i]].m});
    e.primitive_poly = *prim;
    found = e;
    return true;
  };
  for (std::size_t k = 0; k <= max_terms && k <= cand.size(); ++k) {
    // subsets of size k, ordered by (sum of moduli, lexicographic)
    std::vector<std::vector<std::size_t>> subsets;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (pick.size() == k) {
        subsets.push_back(pick);
        return;
      }
      for (std::size_t i = start; i < cand.size(); ++i) {
        pick.push_back(i);
        rec(i + 1);
        pick.pop_back();
      }
    };
    rec(0);
    std::stable_sort(subsets.begin(), subsets.end(), [&](const auto& x, const auto& y) {
      std::int64_t sx = 0, sy = 0;
      for (auto i : x) sx += cand[i].m;
      for (auto i : y) sy += cand[i].m;
      return sx < sy;
    });
    for (const auto& s : subsets) {
      pick = s;
      if (try_subset()) return found;
    }
    pick.clear();
  }
  return std::nullopt;
}

/// Text format, one directive per line ('#' comments):
///   unknown <name> <degree>
///   eq <poly> <poly> ...     one exponent polynomial per unknown
///   neq <poly> <poly> ...
/// where <poly> is a comma-separated coefficient list, low degree first.
inline MonomialSystem parse_system(const std::string& text) {
  MonomialSystem sys;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw DomainError("system file line " + std::to_string(lineno) + ": " + msg); };
  auto parse_poly = [&](const std::string& s) {
    std::vector<Integer> c;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');) {
      if (tok.empty()) fail("empty coefficient in '" + s + "'");
      std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
      if (i == tok.size() || tok.find_first_not_of("0123456789", i) != std::string::npos) fail("bad coefficient '" + tok + "'");
      c.emplace_back(tok[0] == '+' ? tok.substr(1) : tok);
    }
    return ZPoly(std::move(c));
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "unknown") {
      if (!sys.equations.empty() || !sys.nonequations.empty()) fail("unknowns must precede equations");
      if (tok.size() != 3) fail("expected: unknown <name> <degree>");
      if (tok[2].find_first_not_of("0123456789") != std::string::npos || tok[2].size() > 3) fail("bad degree '" + tok[2] + "'");
      int deg = std::stoi(tok[2]);
      if (deg < 1) fail("degree must be positive");
      sys.unknowns.push_back({tok[1], deg});
    } else if (tok[0] == "eq" || tok[0] == "neq") {
      if (sys.unknowns.empty()) fail("declare unknowns first");
      if (tok.size() != sys.unknowns.size() + 1)
        fail("expected " + std::to_string(sys.unknowns.size()) + " exponent polynomials, got " + std::to_string(tok.size() - 1));
      MonomialRow row;
      for (std::size_t i = 1; i < tok.size(); ++i) row.push_back(parse_poly(tok[i]));
      (tok[0] == "eq" ? sys.equations : sys.nonequations).push_back(row);
    } else {
      fail("unknown directive '" + tok[0] + "'");
    }
  }
  if (sys.unknowns.empty()) throw DomainError("system file declares no unknowns");
  return sys;
}

inline MonomialSystem load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open system file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

inline std::string serialize_system(const MonomialSystem& sys) {
  std::ostringstream os;
  for (const auto& u : sys.unknowns) os << "unknown " << u.name << " " << u.degree << "\n";
  auto poly = [](const ZPoly& p) {
    if (p.is_zero()) return std::string("0");
    std::string s;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) s += (i ? "," : "") + p.coeffs()[i].str();
    return s;
  };
  for (const auto& [kw, rows] : {std::pair{"eq", &sys.equations}, std::pair{"neq", &sys.nonequations}})
    for (const auto& r : *rows) {
      os << kw;
      for (const auto& p : r) os << " " << poly(p);
      os << "\n";
    }
  return os.str();
}

}  // namespace porc
